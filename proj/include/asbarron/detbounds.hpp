#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "asbarron/planewave.hpp"

namespace asb {

/// One term Q_k of the entrywise-Taylor decomposition of (e^{v_i.w_j}).
struct LowRankTerm {
    int k = 0;
    Eigen::MatrixXd matrix;
    long rank_bound = 0;     // binom(k+d-1, d-1)
    double norm_bound = 0.0; // n mu^k / k!, mu = |v|_inf |w|_inf d
};

constexpr int kMaxLowRankOrder = 60;

double binomial(int n, int k);

/// Q_0..Q_{k_max}; the partial sum reconstructs (e^{v_i.w_j}) with Frobenius
/// error at most n * tail of sum mu^k/k!.
std::vector<LowRankTerm> lowrank_terms(const WaveMatrix& v, const WaveMatrix& w, int k_max);

struct EigenvalueBoundReport {
    long L = 0;
    double lambda0 = 0.0;
    double lambda0_bound = 0.0; // n e^mu
    double lambda_L = 0.0;
    double lambda_L_bound = 0.0; // 2n mu^p / p!
    double margin = 0.0;         // lambda_L_bound - lambda_L
    bool ok = false;
};

/// Checks lambda_0 <= n e^mu and lambda_L <= (2n/p!) mu^p for the Gram matrix
/// (e^{w_i.w_j}); requires mu = d |w|_inf^2 <= 1/2 and L < n.
EigenvalueBoundReport eigenvalue_bound_check(const WaveMatrix& w, int p);

struct DetBoundReport {
    double log_det = 0.0;   // log det (e^{w_i.w_j}), LU pivots in log domain
    double log_bound = 0.0; // p n log(|w|_inf / (2 gamma)), gamma = 1/(2 sqrt d)
    double margin = 0.0;    // log_bound - log_det
    bool ok = false;
};

/// Requires binom(p+d-1, d) <= n/2, p! >= 4n^2, |w|_inf <= 1/(2 sqrt d).
DetBoundReport detbound_check(const WaveMatrix& w, int p);

/// Smallest p with p! >= 4n^2 and binom(p+d-1, d) <= n/2, if any exists.
std::optional<int> admissible_p(int n, int d);

/// Rows (theta, |a_{theta w}|^2) for a direction with |w|_inf = 1.
std::vector<std::pair<double, double>> norm_curve(const WaveMatrix& w,
                                                  const std::vector<double>& theta_grid);

} // namespace asb
