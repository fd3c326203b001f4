#include "asbarron/measure.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "asbarron/quadrature.hpp"
#include "asbarron/rng.hpp"

namespace asb {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

double norm_p(const Eigen::VectorXd& w, CanonicalNorm p) {
    switch (p) {
        case CanonicalNorm::L1: return w.lpNorm<1>();
        case CanonicalNorm::L2: return w.norm();
        case CanonicalNorm::LInf: return w.lpNorm<Eigen::Infinity>();
    }
    throw InputError("unknown norm selector");
}

double sum_abs_a(const BarronMeasure& rho) {
    double s = 0.0;
    for (const auto& atom : rho.atoms) s += std::abs(atom.a);
    return s;
}

} // namespace

void BarronMeasure::validate() const {
    if (n < 1 || d < 1) throw InputError("BarronMeasure: n, d must be >= 1");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& atom = atoms[i];
        if (!std::isfinite(atom.a) || !std::isfinite(atom.b) || !atom.w.allFinite())
            throw InputError("BarronMeasure: non-finite atom " + std::to_string(i));
        if (atom.w.size() != static_cast<long>(n) * d)
            throw InputError("BarronMeasure: atom " + std::to_string(i) +
                             " has wrong weight dimension");
        if (canonical && std::abs(atom.w.lpNorm<Eigen::Infinity>() - 1.0) > 1e-12)
            throw InputError("BarronMeasure: canonical flag set but atom " + std::to_string(i) +
                             " has |w|_inf != 1");
    }
}

double phi(const BarronMeasure& rho) {
    double s = 0.0;
    for (const auto& atom : rho.atoms) s += std::abs(atom.a) * atom.w.lpNorm<1>();
    return s;
}

double phi_tilde(const BarronMeasure& rho) {
    double s = 0.0;
    for (const auto& atom : rho.atoms)
        s += std::abs(atom.a) * (atom.w.lpNorm<1>() + std::abs(atom.b));
    return s;
}

double evaluate_f_rho(const BarronMeasure& rho, const Configuration& x, Activation act,
                      double gamma) {
    rho.validate();
    if (x.n() != rho.n || x.d() != rho.d) throw InputError("evaluate_f_rho: shape mismatch");
    const Eigen::VectorXd flat = x.flat();
    double s = 0.0;
    for (const auto& atom : rho.atoms)
        s += atom.a * activation_eval(act, atom.w.dot(flat) + atom.b, gamma);
    return s;
}

BarronMeasure canonicalize(const BarronMeasure& rho, CanonicalNorm p) {
    rho.validate();
    BarronMeasure out;
    out.n = rho.n;
    out.d = rho.d;
    out.atoms.reserve(rho.atoms.size());
    for (std::size_t i = 0; i < rho.atoms.size(); ++i) {
        const auto& atom = rho.atoms[i];
        const double nrm = norm_p(atom.w, p);
        if (nrm == 0.0) {
            std::ostringstream os;
            os << "canonicalize: atom " << i << " has w = 0 (constant ridge); "
               << "drop it or keep the measure unscaled";
            throw InputError(os.str());
        }
        out.atoms.push_back({nrm * atom.a, atom.b / nrm, atom.w / nrm});
    }
    out.canonical = (p == CanonicalNorm::LInf);
    return out;
}

BarronMeasure antisymmetrize_measure(const BarronMeasure& rho) {
    rho.validate();
    const int n = rho.n, d = rho.d;
    if (n > kMaxMeasureAntisymN)
        throw CapabilityError("antisymmetrize_measure: capped at n <= " +
                              std::to_string(kMaxMeasureAntisymN));
    const double nfact = factorial(n);
    BarronMeasure out;
    out.n = n;
    out.d = d;
    out.atoms.reserve(rho.atoms.size() * static_cast<std::size_t>(nfact));
    for (const auto& atom : rho.atoms) {
        for_each_permutation(n, [&](const std::vector<int>& perm, int sign) {
            Eigen::VectorXd w(atom.w.size());
            for (int i = 0; i < n; ++i) w.segment(i * d, d) = atom.w.segment(perm[i] * d, d);
            out.atoms.push_back({sign * atom.a / nfact, atom.b, std::move(w)});
        });
    }
    return out;
}

double antisym_ridge_eval(const Eigen::VectorXd& w, double b, Activation act, double gamma,
                          const Configuration& x) {
    const int n = x.n(), d = x.d();
    if (w.size() != static_cast<long>(n) * d) throw InputError("antisym_ridge_eval: shape mismatch");
    if (n > kMaxAntisymN)
        throw CapabilityError("antisym_ridge_eval: capped at n <= " + std::to_string(kMaxAntisymN));
    // dots(i, j) = w-block_i . x_j
    Eigen::MatrixXd dots(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dots(i, j) = w.segment(i * d, d).dot(x.x.row(j));
    // Heap's algorithm with the ridge argument s = sum_j dots(perm[j], j)
    // updated in O(1) per transposition.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double s = dots.trace();
    int sign = 1;
    double acc = sign * activation_eval(act, s + b, gamma);
    std::vector<int> c(n, 0);
    int i = 1;
    while (i < n) {
        if (c[i] < i) {
            const int p = (i % 2 == 0) ? 0 : c[i];
            const int q = i;
            s += dots(perm[q], p) + dots(perm[p], q) - dots(perm[p], p) - dots(perm[q], q);
            std::swap(perm[p], perm[q]);
            sign = -sign;
            acc += sign * activation_eval(act, s + b, gamma);
            ++c[i];
            i = 1;
        } else {
            c[i] = 0;
            ++i;
        }
    }
    return acc / std::sqrt(factorial(n));
}

double truncated_antiridge_eval(const TruncatedAntiRidge& t, const Configuration& x) {
    if (!(t.gamma > 0.0)) throw InputError("truncated_antiridge_eval: gamma must be positive");
    return antisym_ridge_eval(t.w, t.b, Activation::HighpassRelu, t.gamma, x);
}

void ComplexMeasureSpec::validate() const {
    base.validate();
    if (!base.canonical) throw InputError("ComplexMeasureSpec: base measure must be canonical");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InputError("ComplexMeasureSpec: gamma must be positive and finite");
}

double total_variation(const ComplexMeasureSpec& mu) {
    mu.validate();
    return phi(mu.base) / (kPi * mu.gamma);
}

double sampling_mass(const ComplexMeasureSpec& mu) {
    mu.validate();
    return sum_abs_a(mu.base) / (kPi * mu.gamma);
}

SlaterSum maurey_sample(const ComplexMeasureSpec& mu, int m, std::uint64_t seed) {
    mu.validate();
    if (m < 1) throw InputError("maurey_sample: m must be >= 1");
    const double mass = sampling_mass(mu);
    if (!(mass > 0.0)) throw InputError("maurey_sample: degenerate measure (phi = 0)");
    const int n = mu.base.n, d = mu.base.d;
    std::vector<double> cum(mu.base.atoms.size());
    double run = 0.0;
    for (std::size_t i = 0; i < mu.base.atoms.size(); ++i) {
        run += std::abs(mu.base.atoms[i].a);
        cum[i] = run;
    }
    SlaterSum out;
    out.terms.reserve(m);
    for (int k = 0; k < m; ++k) {
        const std::uint64_t ku = static_cast<std::uint64_t>(k);
        const double ua = rng::uniform01(seed, 1, ku) * run;
        std::size_t idx = std::lower_bound(cum.begin(), cum.end(), ua) - cum.begin();
        if (idx >= cum.size()) idx = cum.size() - 1;
        const BarronAtom& atom = mu.base.atoms[idx];
        // theta ~ density gamma/(2 theta^2) on |theta| >= gamma; inverse CDF
        // theta = +-gamma/u with u in (0,1].
        const double u = rng::uniform01(seed, 2, ku);
        const double sgn = rng::uniform01(seed, 3, ku) <= 0.5 ? 1.0 : -1.0;
        const double theta = sgn * mu.gamma / u;
        const Complex phase = -std::copysign(1.0, atom.a) * std::polar(1.0, atom.b * theta);
        out.terms.push_back(
            {mass / static_cast<double>(m) * phase, WaveMatrix::from_flat(theta * atom.w, n, d)});
    }
    return out;
}

double psi_gamma_eval(const BarronMeasure& rho, double gamma, const Configuration& x) {
    rho.validate();
    if (!rho.canonical) throw InputError("psi_gamma_eval: measure must be canonical");
    if (x.n() != rho.n || x.d() != rho.d) throw InputError("psi_gamma_eval: shape mismatch");
    double s = 0.0;
    for (const auto& atom : rho.atoms)
        s += atom.a * antisym_ridge_eval(atom.w, atom.b, Activation::HighpassRelu, gamma, x);
    return s;
}

double infrared_gap_bound(const WaveMatrix& w, double gamma) {
    if (!(gamma > 0.0)) throw InputError("infrared_gap_bound: gamma must be positive");
    const int n = w.n(), d = w.d();
    if (n < 3)
        throw InputError("infrared_gap_bound: integral diverges for n < 3");
    const Eigen::VectorXd flat = w.flat();
    auto integrand = [&](double theta) {
        if (theta <= 0.0) return 0.0;
        const double nsq = slater_norm_sq(WaveMatrix::from_flat(theta * flat, n, d));
        return std::sqrt(std::max(0.0, nsq)) / (theta * theta);
    };
    // Contributions from theta and -theta are equal; the integrand vanishes
    // like theta^{n(n-1)/2 - 2} at the origin. Fixed geometric Gauss panels:
    // the tiny-determinant region is too noisy in double precision for
    // adaptive refinement to terminate.
    static const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                   0.8611363115940526};
    static const double gl_w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                   0.3478548451374538};
    const int panels = 400;
    const double lo0 = gamma * 1e-6;
    const double ratio = std::pow(gamma / lo0, 1.0 / panels);
    double acc = 0.0;
    double lo = lo0;
    for (int j = 0; j < panels; ++j) {
        const double hi = (j + 1 == panels) ? gamma : lo * ratio;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int q = 0; q < 4; ++q) acc += gl_w[q] * half * integrand(mid + half * gl_x[q]);
        lo = hi;
    }
    return acc / kPi;
}

double infrared_gap_bound(const BarronMeasure& rho, double gamma) {
    rho.validate();
    if (!rho.canonical) throw InputError("infrared_gap_bound: measure must be canonical");
    double s = 0.0;
    for (const auto& atom : rho.atoms)
        s += std::abs(atom.a) *
             infrared_gap_bound(WaveMatrix::from_flat(atom.w, rho.n, rho.d), gamma);
    return s;
}

double total_variation_numeric(const ComplexMeasureSpec& mu) {
    mu.validate();
    // Substitute u = gamma/theta to map each half-line onto (0, 1].
    const double gamma = mu.gamma;
    auto integrand = [gamma](double u) {
        const double theta = gamma / u;
        const double jac = gamma / (u * u);
        return jac / (2.0 * kPi * theta * theta);
    };
    const double half = adaptive_simpson(integrand, 1e-12, 1.0, 1e-12);
    return 2.0 * half * sum_abs_a(mu.base);
}

} // namespace asb
