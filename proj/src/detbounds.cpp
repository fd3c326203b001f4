#include "asbarron/detbounds.hpp"

#include <cmath>
#include <sstream>

namespace asb {

namespace {

Eigen::MatrixXd exp_gram(const WaveMatrix& v, const WaveMatrix& w) {
    const int n = v.n();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = std::exp(v.rows.row(i).dot(w.rows.row(j)));
    return g;
}

/// Visit all (k_1,...,k_d) with sum k in colexicographic order.
void for_each_composition(int k, int d, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> parts(d, 0);
    parts[0] = k;
    for (;;) {
        fn(parts);
        // find lowest index with a nonzero entry to move up
        int i = 0;
        while (i < d && parts[i] == 0) ++i;
        if (i >= d - 1) return; // last slot holds everything (or k = 0): done
        const int val = parts[i];
        parts[i] = 0;
        parts[0] = val - 1;
        parts[i + 1] += 1;
    }
}

} // namespace

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

std::vector<LowRankTerm> lowrank_terms(const WaveMatrix& v, const WaveMatrix& w, int k_max) {
    if (v.n() != w.n() || v.d() != w.d()) throw InputError("lowrank_terms: shape mismatch");
    if (k_max < 0) throw InputError("lowrank_terms: k_max must be >= 0");
    if (k_max > kMaxLowRankOrder)
        throw CapabilityError("lowrank_terms: k_max capped at " +
                              std::to_string(kMaxLowRankOrder));
    const int n = v.n(), d = v.d();
    const double mu = v.rows.lpNorm<Eigen::Infinity>() * w.rows.lpNorm<Eigen::Infinity>() * d;
    std::vector<LowRankTerm> out;
    out.reserve(k_max + 1);
    double k_factorial = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) k_factorial *= k;
        LowRankTerm term;
        term.k = k;
        term.matrix = Eigen::MatrixXd::Zero(n, n);
        term.rank_bound = static_cast<long>(binomial(k + d - 1, d - 1));
        term.norm_bound = n * std::pow(mu, k) / k_factorial;
        for_each_composition(k, d, [&](const std::vector<int>& parts) {
            Eigen::VectorXd left = Eigen::VectorXd::Ones(n);
            Eigen::VectorXd right = Eigen::VectorXd::Ones(n);
            double denom = 1.0;
            for (int axis = 0; axis < d; ++axis) {
                for (int e = 0; e < parts[axis]; ++e) {
                    left = left.cwiseProduct(v.rows.col(axis));
                    right = right.cwiseProduct(w.rows.col(axis));
                    denom *= e + 1;
                }
            }
            term.matrix.noalias() += (left * right.transpose()) / denom;
        });
        out.push_back(std::move(term));
    }
    return out;
}

EigenvalueBoundReport eigenvalue_bound_check(const WaveMatrix& w, int p) {
    const int n = w.n(), d = w.d();
    const double winf = w.rows.lpNorm<Eigen::Infinity>();
    const double mu = d * winf * winf;
    if (p < 0) throw InputError("eigenvalue_bound_check: p must be >= 0");
    if (mu > 0.5) {
        std::ostringstream os;
        os << "eigenvalue_bound_check: requires mu = d |w|_inf^2 <= 1/2, got mu = " << mu;
        throw InputError(os.str());
    }
    const long L = p == 0 ? 0 : static_cast<long>(binomial(p + d - 1, d));
    if (L >= n) {
        std::ostringstream os;
        os << "eigenvalue_bound_check: requires L = binom(p+d-1, d) < n, got L = " << L
           << ", n = " << n;
        throw InputError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(exp_gram(w, w));
    Eigen::VectorXd lambda = solver.eigenvalues().cwiseAbs();
    std::sort(lambda.data(), lambda.data() + lambda.size(), std::greater<double>());
    EigenvalueBoundReport r;
    r.L = L;
    r.lambda0 = lambda(0);
    r.lambda0_bound = n * std::exp(mu);
    r.lambda_L = lambda(L);
    r.lambda_L_bound = p == 0 ? 2.0 * n : 2.0 * n * std::pow(mu, p) / factorial(p);
    r.margin = r.lambda_L_bound - r.lambda_L;
    r.ok = r.lambda0 <= r.lambda0_bound * (1.0 + 1e-12) && r.margin >= 0.0;
    return r;
}

DetBoundReport detbound_check(const WaveMatrix& w, int p) {
    const int n = w.n(), d = w.d();
    const double gamma = 0.5 / std::sqrt(static_cast<double>(d));
    const double winf = w.rows.lpNorm<Eigen::Infinity>();
    if (p < 1) throw InputError("detbound_check: p must be >= 1");
    if (binomial(p + d - 1, d) > n / 2.0) {
        std::ostringstream os;
        os << "detbound_check: requires binom(p+d-1, d) <= n/2, got " << binomial(p + d - 1, d)
           << " > " << n / 2.0;
        throw InputError(os.str());
    }
    if (factorial(p) < 4.0 * n * n) {
        std::ostringstream os;
        os << "detbound_check: requires p! >= 4n^2, got " << factorial(p) << " < " << 4.0 * n * n;
        throw InputError(os.str());
    }
    if (winf > gamma) {
        std::ostringstream os;
        os << "detbound_check: requires |w|_inf <= 1/(2 sqrt d) = " << gamma << ", got " << winf;
        throw InputError(os.str());
    }
    // Log-domain accumulation of LU pivots; the determinant of the PSD Gram
    // matrix underflows double precision well before n = 40.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(exp_gram(w, w));
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += std::log(std::abs(lu.matrixLU()(i, i)));
    DetBoundReport r;
    r.log_det = log_det;
    r.log_bound = static_cast<double>(p) * n * std::log(winf / (2.0 * gamma));
    r.margin = r.log_bound - r.log_det;
    r.ok = r.margin >= 0.0;
    return r;
}

std::optional<int> admissible_p(int n, int d) {
    for (int p = 1; p <= 170; ++p) {
        if (factorial(p) < 4.0 * n * n) continue;
        if (binomial(p + d - 1, d) <= n / 2.0) return p;
        return std::nullopt; // binom grows with p, so no larger p can work
    }
    return std::nullopt;
}

std::vector<std::pair<double, double>> norm_curve(const WaveMatrix& w,
                                                  const std::vector<double>& theta_grid) {
    if (std::abs(w.rows.lpNorm<Eigen::Infinity>() - 1.0) > 1e-12)
        throw InputError("norm_curve: w must be scaled to |w|_inf = 1");
    std::vector<std::pair<double, double>> out;
    out.reserve(theta_grid.size());
    for (const double theta : theta_grid)
        out.emplace_back(theta, slater_norm_sq(WaveMatrix(theta * w.rows)));
    return out;
}

} // namespace asb
