#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "asbarron/errors.hpp"

namespace asb {

using Complex = std::complex<double>;

/// Per-particle wavevectors w = (w_1,...,w_n), one row per particle.
/// Indexes the anti-symmetrized plane wave a_w.
struct WaveMatrix {
    Eigen::MatrixXd rows; // n x d

    WaveMatrix() = default;
    explicit WaveMatrix(Eigen::MatrixXd m);

    int n() const { return static_cast<int>(rows.rows()); }
    int d() const { return static_cast<int>(rows.cols()); }

    /// Flat view in R^{n*d}, row-major (particle-major) order.
    Eigen::VectorXd flat() const;
    static WaveMatrix from_flat(const Eigen::VectorXd& v, int n, int d);
};

/// Particle positions x = (x_1,...,x_n), one row per particle.
struct Configuration {
    Eigen::MatrixXd x; // n x d

    Configuration() = default;
    explicit Configuration(Eigen::MatrixXd m);

    int n() const { return static_cast<int>(x.rows()); }
    int d() const { return static_cast<int>(x.cols()); }

    Eigen::VectorXd flat() const;
    static Configuration from_flat(const Eigen::VectorXd& v, int n, int d);

    /// Swap particles i and j.
    Configuration transposed(int i, int j) const;
};

/// psi_m = sum_k c_k a_{w_k}; any overall prefactor is absorbed into the
/// coefficients.
struct SlaterSum {
    struct Term {
        Complex coeff;
        WaveMatrix w;
    };
    std::vector<Term> terms;

    int n() const;
    int d() const;
    void validate() const;
};

// Hard cap on permutation enumeration (10! ~ 3.6M terms).
constexpr int kMaxAntisymN = 10;

/// Enumerates all permutations of {0,..,n-1} by Heap's algorithm with
/// incremental sign tracking. Calls fn(perm, sign) for each; perm is reused
/// between calls.
void for_each_permutation(int n, const std::function<void(const std::vector<int>&, int)>& fn);

/// (1/sqrt(n!)) det(M), M_ij = exp(i w_j . x_i).
Complex evaluate_planewave_slater(const WaveMatrix& w, const Configuration& x);

/// Gaussian-envelope inner product <e_v, e_w> = exp(-|w-v|^2/2).
double single_particle_overlap(const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// <a_v, a_w> = det(B), B_ij = <e_{v_i}, e_{w_j}> (Lowdin overlap rule).
double slater_overlap(const WaveMatrix& v, const WaveMatrix& w);

/// |a_w|^2 = exp(-|w|_F^2) det((exp(w_i.w_j))_ij); always in [0, 1].
double slater_norm_sq(const WaveMatrix& w);

/// <A, B> = sum_jk conj(c_j) c'_k <a_{w_j}, a_{w'_k}>.
Complex slater_sum_inner(const SlaterSum& a, const SlaterSum& b);

/// Pointwise value of a SlaterSum.
Complex slater_sum_eval(const SlaterSum& s, const Configuration& x);

/// (AS f)(x) = (1/sqrt(n!)) sum_pi (-1)^pi f(pi x).
Complex antisymmetrize_pointwise(const std::function<Complex(const Configuration&)>& f,
                                 const Configuration& x);

struct McEstimate {
    double estimate;  // sqrt of the mean of |f-g|^2
    double std_error; // first-order propagated standard error of the estimate
    double mean_sq;   // raw mean of |f-g|^2
    double se_sq;     // standard error of mean_sq
};

/// Monte Carlo estimate of ||f-g|| on L^2(X^{(x) n}) with x ~ N(0, I_{nd}).
/// Deterministic given (seed, n_samples) regardless of thread count.
McEstimate mc_l2_distance(const std::function<Complex(const Configuration&)>& f,
                          const std::function<Complex(const Configuration&)>& g,
                          int n, int d, std::size_t n_samples, std::uint64_t seed);

/// The sample configurations used by mc_l2_distance, in order.
Configuration mc_sample_point(int n, int d, std::uint64_t seed, std::uint64_t index);

double factorial(int n);

/// Assert |Im z| <= 1e-10 |Re z| + 1e-12 for a provably real quantity, then
/// discard the imaginary part.
double take_real(Complex z, const char* what);

} // namespace asb
