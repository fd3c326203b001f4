#include "asbarron/activation.hpp"

#include <cmath>
#include <complex>
#include <limits>

namespace asb {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

/// Taylor series sum_k (-1)^k y^{2k+1} / ((2k+1)(2k+1)!), for |y| <= 4.
double si_taylor(double y) {
    double term = y;
    double sum = y;
    const double y2 = y * y;
    for (int k = 0; k < 60; ++k) {
        const double a = 2.0 * k + 1.0, b = 2.0 * k + 2.0, c = 2.0 * k + 3.0;
        term *= -y2 * a / (c * c * b);
        sum += term;
        if (std::abs(term) < 1e-17) break;
    }
    return sum;
}

/// E1(z) by modified Lentz continued fraction; accurate for |z| >= 4 away
/// from the negative real axis.
std::complex<double> e1_continued_fraction(std::complex<double> z) {
    constexpr double tiny = 1e-300;
    std::complex<double> b = z + 1.0;
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int k = 1; k < 120; ++k) {
        const double a = -static_cast<double>(k) * k;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z) * h;
}

/// Gauss-Legendre 16-point rule on [-1, 1], stored as 8 symmetric pairs.
constexpr int kGL = 8;
constexpr double kGLNode[kGL] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
constexpr double kGLWeight[kGL] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                   0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                   0.0622535239386479, 0.0271524594117541};

double gl_panel(double lo, double hi, double a) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double s = 0.0;
    for (int i = 0; i < kGL; ++i) {
        const double t1 = mid + half * kGLNode[i];
        const double t2 = mid - half * kGLNode[i];
        s += kGLWeight[i] * (std::cos(a * t1) / (t1 * t1) + std::cos(a * t2) / (t2 * t2));
    }
    return half * s;
}

} // namespace

double relu(double y) { return y > 0.0 ? y : 0.0; }

double softplus(double y) { return std::max(y, 0.0) + std::log1p(std::exp(-std::abs(y))); }

double logistic(double y) { return 1.0 / (1.0 + std::exp(-y)); }

double sine_integral(double y) {
    const double a = std::abs(y);
    double si;
    if (a <= 4.0) {
        si = si_taylor(a);
    } else {
        const std::complex<double> e1 = e1_continued_fraction({0.0, a});
        si = kPi / 2.0 + e1.imag();
    }
    return y < 0.0 ? -si : si;
}

HighPassThreshold::HighPassThreshold(double g) : gamma(g) {
    if (!(g > 0.0) || !std::isfinite(g))
        throw InputError("HighPassThreshold: gamma must be positive and finite");
}

double highpass_relu(double y, double gamma) {
    if (!(gamma > 0.0)) throw InputError("highpass_relu: gamma must be positive");
    return std::abs(y) / 2.0 - std::cos(gamma * y) / (kPi * gamma) -
           y * sine_integral(gamma * y) / kPi;
}

double lowpass_relu(double y, double gamma) { return relu(y) - highpass_relu(y, gamma); }

double lowpass_polynomial(double y, double gamma) { return y / 2.0 + 1.0 / (kPi * gamma); }

double highpass_relu_quadrature(double y, double gamma) {
    if (!(gamma > 0.0)) throw InputError("highpass_relu_quadrature: gamma must be positive");
    const double a = std::abs(y);
    if (a < 1e-12) return -1.0 / (kPi * gamma); // integral is exactly 1/gamma at y = 0
    // Panels between consecutive zeros of cos(a theta) give a strictly
    // alternating tail; Euler averaging of the partial sums then converges
    // far below the 1e-6 comparison tolerance.
    const double h = kPi / a;
    double first_zero = (std::floor(gamma * a / kPi - 0.5) + 1.5) * kPi / a;
    // The head panel sits on the steep 1/theta^2 flank; subdivide it
    // geometrically so each piece sees a bounded dynamic range.
    double integral = 0.0;
    {
        const int kHead = 64;
        const double ratio = std::pow(first_zero / gamma, 1.0 / kHead);
        double lo = gamma;
        for (int j = 0; j < kHead; ++j) {
            const double hi = (j + 1 == kHead) ? first_zero : lo * ratio;
            integral += gl_panel(lo, hi, a);
            lo = hi;
        }
    }
    constexpr int kBulk = 400, kTail = 24;
    double lo = first_zero;
    for (int j = 0; j < kBulk; ++j) {
        integral += gl_panel(lo, lo + h, a);
        lo += h;
    }
    // Euler transform on the remaining alternating panel sums.
    double partial[kTail];
    double run = 0.0;
    for (int j = 0; j < kTail; ++j) {
        run += gl_panel(lo, lo + h, a);
        partial[j] = run;
        lo += h;
    }
    int len = kTail;
    while (len > 1) {
        for (int j = 0; j + 1 < len; ++j) partial[j] = 0.5 * (partial[j] + partial[j + 1]);
        --len;
    }
    integral += partial[0];
    return -integral / kPi;
}

double activation_eval(Activation act, double y, double gamma) {
    switch (act) {
        case Activation::Relu: return relu(y);
        case Activation::Softplus: return softplus(y);
        case Activation::HighpassRelu: return highpass_relu(y, gamma);
    }
    throw InputError("activation_eval: unknown activation tag");
}

double ridge_eval(const RidgeSpec& spec, const Configuration& x) {
    const Eigen::VectorXd flat = x.flat();
    if (spec.w.size() != flat.size()) throw InputError("ridge_eval: shape mismatch");
    return activation_eval(spec.act, spec.w.dot(flat) + spec.b, spec.gamma);
}

InversionReport fourier_inversion_check(double gamma, const std::vector<double>& y_grid) {
    if (!(gamma > 0.0)) throw InputError("fourier_inversion_check: gamma must be positive");
    InversionReport report;
    report.max_violation = -std::numeric_limits<double>::infinity();
    report.worst_y = 0.0;
    report.violations.reserve(y_grid.size());
    for (const double y : y_grid) {
        const double lp = lowpass_relu(y, gamma);
        const double bound = (3.0 / (2.0 * kPi)) * gamma * y * y;
        const double v = std::abs(lp - lowpass_polynomial(y, gamma)) - bound;
        report.violations.push_back(v);
        if (v > report.max_violation) {
            report.max_violation = v;
            report.worst_y = y;
        }
    }
    return report;
}

} // namespace asb
