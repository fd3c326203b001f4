#pragma once

#include <vector>

#include <Eigen/Dense>

#include "asbarron/planewave.hpp"

namespace asb {

double relu(double y);
double softplus(double y);
double logistic(double y);

/// Si(y) = int_0^y sin(s)/s ds, absolute error <= 1e-10. Odd in y.
double sine_integral(double y);

/// Frequency cutoff for the high-pass/low-pass split of an activation.
struct HighPassThreshold {
    double gamma;
    explicit HighPassThreshold(double g);
};

/// Ultraviolet part of ReLU reconstructed from frequencies |theta| > gamma:
/// |y|/2 - cos(gamma y)/(pi gamma) - y Si(gamma y)/pi.
double highpass_relu(double y, double gamma);

/// relu(y) - highpass_relu(y, gamma); equals p_gamma(y) + O(gamma y^2) with
/// p_gamma(y) = y/2 + 1/(pi gamma).
double lowpass_relu(double y, double gamma);

/// The linear remainder polynomial p_gamma.
double lowpass_polynomial(double y, double gamma);

/// Direct quadrature of -(1/pi) int_gamma^inf cos(theta y)/theta^2 dtheta,
/// the spectral definition of highpass_relu. Half-period panel rule, absolute
/// error well below 1e-8; used as the independent route for the closed form.
double highpass_relu_quadrature(double y, double gamma);

enum class Activation { Relu, Softplus, HighpassRelu };

struct RidgeSpec {
    Eigen::VectorXd w; // length n*d, particle-major
    double b = 0.0;
    Activation act = Activation::Relu;
    double gamma = 1.0; // only read for HighpassRelu
};

double activation_eval(Activation act, double y, double gamma);
double ridge_eval(const RidgeSpec& spec, const Configuration& x);

struct InversionReport {
    double max_violation;   // max over grid of |lp - p_gamma| - (3/2pi) gamma y^2
    double worst_y;
    std::vector<double> violations; // one per grid point
};

/// Certifies |relu - highpass - p_gamma| <= (3/(2 pi)) gamma y^2 on the grid.
InversionReport fourier_inversion_check(double gamma, const std::vector<double>& y_grid);

} // namespace asb
