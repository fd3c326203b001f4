#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "asbarron/experiments.hpp"
#include "asbarron/measure.hpp"

namespace asb {

// Pointwise anti-symmetrization of the network costs n! per evaluation.
constexpr int kMaxNetworkN = 8;

/// Anti-symmetrized softplus one-hidden-layer ansatz
/// psi = AS sum_k a_k softplus(w^{(k)}.x + b_k).
struct AntisymNetwork {
    int n = 0;
    int d = 0;
    Eigen::VectorXd a;  // m
    Eigen::VectorXd b;  // m
    Eigen::MatrixXd W;  // m x (n*d), particle-major rows

    int width() const { return static_cast<int>(a.size()); }
    void validate() const;
};

double antisym_network_eval(const AntisymNetwork& net, const Configuration& x);

/// Parameters viewed as a discrete Barron measure (softplus atoms).
BarronMeasure network_as_measure(const AntisymNetwork& net);

/// phi_tilde of the parameters: sum |a_k| (|w^{(k)}|_1 + |b_k|).
double network_phi_tilde(const AntisymNetwork& net);

struct NetworkGradient {
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    Eigen::MatrixXd W;
};

/// Analytic gradient of the batch mean squared error, differentiated through
/// the permutation sum. Returns the batch loss.
double antisym_network_grad(const AntisymNetwork& net, const std::vector<Configuration>& batch,
                            const std::vector<double>& targets, NetworkGradient& grad);

struct AbNormResult {
    double estimate = 0.0; // phi_tilde at the end of training
    double residual = 0.0; // final pool |psi_net - psi|^2
    bool converged = false;
    AntisymNetwork net;
};

/// Penalized SGD estimator of the epsilon-smooth anti-symmetric Barron norm:
/// L = max(residual^2 - epsilon, 0) + lambda * phi_tilde.
AbNormResult estimate_ab_norm(const std::function<double(const Configuration&)>& target, int n,
                              int d, const TrainConfig& cfg);

} // namespace asb
