#include "asbarron/planewave.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "asbarron/parallel.hpp"
#include "asbarron/rng.hpp"

namespace asb {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

void require_shape(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() < 1 || m.cols() < 1)
        throw InputError(std::string(what) + ": n, d must be >= 1");
}

} // namespace

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double take_real(Complex z, const char* what) {
    if (std::abs(z.imag()) > 1e-10 * std::abs(z.real()) + 1e-12)
        throw NumericalError(std::string(what) + ": imaginary part exceeds tolerance");
    return z.real();
}

WaveMatrix::WaveMatrix(Eigen::MatrixXd m) : rows(std::move(m)) {
    require_shape(rows, "WaveMatrix");
    require_finite(rows, "WaveMatrix");
}

Eigen::VectorXd WaveMatrix::flat() const {
    Eigen::VectorXd v(rows.size());
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < d(); ++j) v(i * d() + j) = rows(i, j);
    return v;
}

WaveMatrix WaveMatrix::from_flat(const Eigen::VectorXd& v, int n, int d) {
    if (v.size() != static_cast<long>(n) * d)
        throw InputError("WaveMatrix::from_flat: size mismatch");
    Eigen::MatrixXd m(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = v(i * d + j);
    return WaveMatrix(std::move(m));
}

Configuration::Configuration(Eigen::MatrixXd m) : x(std::move(m)) {
    require_shape(x, "Configuration");
    require_finite(x, "Configuration");
}

Eigen::VectorXd Configuration::flat() const {
    Eigen::VectorXd v(x.size());
    for (int i = 0; i < n(); ++i)
        for (int j = 0; j < d(); ++j) v(i * d() + j) = x(i, j);
    return v;
}

Configuration Configuration::from_flat(const Eigen::VectorXd& v, int n, int d) {
    if (v.size() != static_cast<long>(n) * d)
        throw InputError("Configuration::from_flat: size mismatch");
    Eigen::MatrixXd m(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = v(i * d + j);
    return Configuration(std::move(m));
}

Configuration Configuration::transposed(int i, int j) const {
    Configuration c = *this;
    c.x.row(i).swap(c.x.row(j));
    return c;
}

int SlaterSum::n() const {
    if (terms.empty()) throw InputError("SlaterSum: empty term list");
    return terms.front().w.n();
}

int SlaterSum::d() const {
    if (terms.empty()) throw InputError("SlaterSum: empty term list");
    return terms.front().w.d();
}

void SlaterSum::validate() const {
    if (terms.empty()) throw InputError("SlaterSum: empty term list");
    const int nn = terms.front().w.n(), dd = terms.front().w.d();
    for (const auto& t : terms)
        if (t.w.n() != nn || t.w.d() != dd)
            throw InputError("SlaterSum: terms disagree on (n, d)");
}

void for_each_permutation(int n, const std::function<void(const std::vector<int>&, int)>& fn) {
    if (n < 1) throw InputError("for_each_permutation: n must be >= 1");
    if (n > kMaxAntisymN) {
        std::ostringstream os;
        os << "permutation enumeration capped at n <= " << kMaxAntisymN << " (got n = " << n << ")";
        throw CapabilityError(os.str());
    }
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    int sign = 1;
    fn(perm, sign);
    // Heap's algorithm, iterative form; each emitted permutation differs from
    // the previous one by a single transposition, so the sign just flips.
    std::vector<int> c(n, 0);
    int i = 1;
    while (i < n) {
        if (c[i] < i) {
            if (i % 2 == 0)
                std::swap(perm[0], perm[i]);
            else
                std::swap(perm[c[i]], perm[i]);
            sign = -sign;
            fn(perm, sign);
            ++c[i];
            i = 1;
        } else {
            c[i] = 0;
            ++i;
        }
    }
}

Complex evaluate_planewave_slater(const WaveMatrix& w, const Configuration& x) {
    if (w.n() != x.n() || w.d() != x.d())
        throw InputError("evaluate_planewave_slater: shape mismatch");
    const int n = w.n();
    Eigen::MatrixXcd m(n, n);
    const Eigen::MatrixXd phases = x.x * w.rows.transpose(); // phases(i,j) = w_j . x_i
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = std::polar(1.0, phases(i, j));
    return m.partialPivLu().determinant() / std::sqrt(factorial(n));
}

double single_particle_overlap(const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    if (v.size() != w.size()) throw InputError("single_particle_overlap: dimension mismatch");
    return std::exp(-0.5 * (w - v).squaredNorm());
}

double slater_overlap(const WaveMatrix& v, const WaveMatrix& w) {
    if (v.n() != w.n() || v.d() != w.d())
        throw InputError("slater_overlap: shape mismatch");
    const int n = v.n();
    Eigen::MatrixXd b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            b(i, j) = std::exp(-0.5 * (w.rows.row(j) - v.rows.row(i)).squaredNorm());
    return b.partialPivLu().determinant();
}

double slater_norm_sq(const WaveMatrix& w) {
    // e^{-|w|_F^2} det(e^{w_i.w_j}) = det(e^{-|w_i-w_j|^2/2}): folding the
    // prefactor into the Gram entries keeps everything in [0, 1], so widely
    // separated rows cannot overflow the determinant.
    const int n = w.n();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = std::exp(-(w.rows.row(i) - w.rows.row(j)).squaredNorm() / 2.0);
    const double val = g.partialPivLu().determinant();
    // Gram-route determinant of a PSD matrix; clamp roundoff just below zero.
    return val < 0.0 && val > -1e-12 ? 0.0 : val;
}

Complex slater_sum_inner(const SlaterSum& a, const SlaterSum& b) {
    a.validate();
    b.validate();
    if (a.n() != b.n() || a.d() != b.d())
        throw InputError("slater_sum_inner: shape mismatch");
    Complex acc = 0.0;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms)
            acc += std::conj(ta.coeff) * tb.coeff * slater_overlap(ta.w, tb.w);
    return acc;
}

Complex slater_sum_eval(const SlaterSum& s, const Configuration& x) {
    s.validate();
    Complex acc = 0.0;
    for (const auto& t : s.terms) acc += t.coeff * evaluate_planewave_slater(t.w, x);
    return acc;
}

Complex antisymmetrize_pointwise(const std::function<Complex(const Configuration&)>& f,
                                 const Configuration& x) {
    const int n = x.n();
    Complex acc = 0.0;
    Configuration perm_x = x;
    for_each_permutation(n, [&](const std::vector<int>& perm, int sign) {
        for (int i = 0; i < n; ++i) perm_x.x.row(i) = x.x.row(perm[i]);
        acc += static_cast<double>(sign) * f(perm_x);
    });
    return acc / std::sqrt(factorial(n));
}

Configuration mc_sample_point(int n, int d, std::uint64_t seed, std::uint64_t index) {
    Eigen::MatrixXd m(n, d);
    const std::uint64_t base = index * static_cast<std::uint64_t>(n) * d;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            m(i, j) = rng::normal(seed, /*stream=*/0, base + i * d + j);
    return Configuration(std::move(m));
}

McEstimate mc_l2_distance(const std::function<Complex(const Configuration&)>& f,
                          const std::function<Complex(const Configuration&)>& g,
                          int n, int d, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw InputError("mc_l2_distance: n_samples must be >= 2");
    constexpr std::size_t kChunk = 4096;
    const std::size_t nchunks = num_chunks(n_samples, kChunk);
    std::vector<double> sums(nchunks, 0.0), sumsqs(nchunks, 0.0);
    std::mutex err_mutex;
    std::string err;
    parallel_chunks(n_samples, kChunk, [&](std::size_t ci, std::size_t begin, std::size_t end) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            const Configuration x = mc_sample_point(n, d, seed, k);
            const Complex diff = f(x) - g(x);
            const double v = std::norm(diff);
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os << "mc_l2_distance: non-finite sample at index " << k << ", x = ["
                   << x.flat().transpose() << "]";
                std::lock_guard<std::mutex> lock(err_mutex);
                if (err.empty()) err = os.str();
                return;
            }
            s += v;
            s2 += v * v;
        }
        sums[ci] = s;
        sumsqs[ci] = s2;
    });
    if (!err.empty()) throw NumericalError(err);
    double total = 0.0, total_sq = 0.0;
    for (std::size_t i = 0; i < nchunks; ++i) {
        total += sums[i];
        total_sq += sumsqs[i];
    }
    const double mean = total / static_cast<double>(n_samples);
    const double var =
        std::max(0.0, total_sq / static_cast<double>(n_samples) - mean * mean);
    const double se_mean = std::sqrt(var / static_cast<double>(n_samples - 1));
    McEstimate out;
    out.mean_sq = mean;
    out.se_sq = se_mean;
    out.estimate = std::sqrt(std::max(0.0, mean));
    // d sqrt(m)/dm = 1/(2 sqrt(m)); degenerate at m = 0 where the estimate is exact.
    out.std_error = mean > 0.0 ? se_mean / (2.0 * out.estimate) : 0.0;
    return out;
}

} // namespace asb
