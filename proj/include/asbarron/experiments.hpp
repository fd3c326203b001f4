#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asbarron/measure.hpp"
#include "asbarron/planewave.hpp"

namespace asb {

/// Hard per-particle infinity-norm box multiplying a target.
struct Window {
    Eigen::VectorXd center; // length d
    double halfwidth = 0.0;
};

/// Slater determinant of harmonic-oscillator orbitals (products of normalized
/// probabilists' Hermite polynomials), optionally masked by a window.
struct HermiteTarget {
    int n = 0;
    int d = 0;
    std::vector<std::vector<int>> orbitals; // n distinct multi-indices in N_0^d
    std::optional<Window> window;

    void validate() const;
};

constexpr int kMaxHermiteOrder = 30;

/// Normalized probabilists' Hermite polynomial h_k (orthonormal under N(0,1)).
double hermite_value(int k, double y);

/// <h_k, e_w> = (i w)^k e^{-w^2/2} / sqrt(k!).
Complex hermite_orbital_overlap(int k, double w);

/// Occupied orbitals for the n-fermion oscillator ground state; degenerate
/// shells broken by (total degree, colexicographic) order.
std::vector<std::vector<int>> ground_state_orbitals(int n, int d);

double target_eval(const HermiteTarget& t, const Configuration& x);

/// <A, psi_t> for an unwindowed target, via the cross-basis overlap-determinant
/// rule. Throws if a window is present (use the Monte Carlo path instead).
Complex slater_vs_hermite_inner(const SlaterSum& a, const HermiteTarget& t);

struct TrainConfig {
    double epsilon = 0.01;  // smoothing level of the hinge penalty
    double lambda = 1e-3;   // weight-norm penalty coefficient
    int steps = 2000;
    int batch = 128;
    double learning_rate = 0.05;
    std::uint64_t seed = 1;
    int restarts = 3;
    int hidden_width = 16;   // width of the anti-symmetrized network
    int pool_samples = 2048; // fixed sample pool for residual estimates
    int fit_steps = 200;     // outer-weight descent steps per restart of the Slater fit
    int fit_samples = 1024;  // least-squares sample count for windowed targets
    std::ostream* log = nullptr; // optional `step,loss,penalty1,penalty2` records
};

/// Uniform fitting interface: exact inner products when available, sampled
/// least squares otherwise.
struct FitTarget {
    int n = 0;
    int d = 0;
    double norm_sq = 1.0;
    double scale = 1.0; // original norm before unit normalization
    std::function<Complex(const WaveMatrix&)> overlap; // <a_w, psi>; empty => sampled path
    std::function<double(const Configuration&)> eval;  // normalized target values
};

/// Unwindowed targets get the analytic route; windowed ones are normalized to
/// unit estimated norm and fitted by sampled least squares.
FitTarget make_fit_target(const HermiteTarget& t, const TrainConfig& cfg);
FitTarget make_fit_target(const SlaterSum& target);

struct FitResult {
    SlaterSum sum;
    double error = 0.0; // sqrt of the clamped objective
};

/// Minimizes |psi_m - psi|^2 over coefficients (solved exactly per step) and
/// wavevectors (momentum descent); best over restarts. Optional warm start.
FitResult fit_slater_sum(const FitTarget& target, int m, const TrainConfig& cfg,
                         const SlaterSum* init = nullptr);
FitResult fit_slater_sum(const HermiteTarget& t, int m, const TrainConfig& cfg);

struct ScatterRow {
    std::string window_descriptor;
    double window_center = 0.0;
    double window_halfwidth = 0.0;
    double ab_norm_estimate = 0.0;
    double epsilon_achieved = 0.0;
    double slater_fit_error = 0.0;
    double opacity = 0.0; // (1 - epsilon)^10
    std::string error;    // per-row failure, empty on success
};

std::vector<ScatterRow> theorem_scatter(const std::vector<HermiteTarget>& targets, int m,
                                        const TrainConfig& cfg);

} // namespace asb
