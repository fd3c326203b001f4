#include <doctest.h>

#include <cmath>

#include "asbarron/activation.hpp"
#include "support/oracles.hpp"

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("relu and softplus basics") {
    CHECK(asb::relu(-1.0) == 0.0);
    CHECK(asb::relu(0.0) == 0.0);
    CHECK(asb::relu(2.5) == 2.5);
    CHECK(asb::softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(asb::softplus(100.0) == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(asb::softplus(-100.0) == doctest::Approx(std::exp(-100.0)).epsilon(1e-12));
}

TEST_CASE("softplus is the logistic-smoothed ReLU (convolution identity)") {
    for (double y : {-2.0, 0.0, 3.0}) {
        const double conv = oracle::integrate(
            [y](double s) {
                const double sig = asb::logistic(s);
                return asb::relu(y - s) * sig * (1.0 - sig);
            },
            -45.0, 45.0, 1e-9);
        CHECK(conv == doctest::Approx(asb::softplus(y)).epsilon(1e-6));
    }
}

TEST_CASE("sine integral: values, symmetry, and quadrature oracle") {
    CHECK(asb::sine_integral(0.0) == 0.0);
    // Si(pi), the Wilbraham-Gibbs constant, frozen from adaptive quadrature.
    CHECK(asb::sine_integral(kPi) == doctest::Approx(1.851937051982068).epsilon(1e-12));
    CHECK(asb::sine_integral(-kPi) == doctest::Approx(-asb::sine_integral(kPi)).epsilon(1e-15));
    SUBCASE("matches the integral definition across both regimes") {
        for (double y : {0.3, 1.7, 3.9, 4.0, 4.1, 6.2, 11.5, 24.0}) {
            const double numeric =
                oracle::integrate([](double s) { return s == 0.0 ? 1.0 : std::sin(s) / s; }, 0.0,
                                  y, 1e-13);
            CHECK(std::abs(asb::sine_integral(y) - numeric) < 1e-10);
        }
    }
    SUBCASE("monotone on [0, pi]") {
        double prev = -1.0;
        for (int i = 0; i <= 50; ++i) {
            const double v = asb::sine_integral(kPi * i / 50.0);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("highpass ReLU closed form") {
    SUBCASE("value at the origin") {
        CHECK(asb::highpass_relu(0.0, 1.0) == doctest::Approx(-1.0 / kPi).epsilon(1e-14));
    }
    SUBCASE("agrees with the oscillatory quadrature route") {
        for (double g : {0.5, 1.0, 2.0})
            for (double y = -5.0; y <= 5.0; y += 0.5)
                CHECK(std::abs(asb::highpass_relu(y, g) - asb::highpass_relu_quadrature(y, g)) <
                      1e-6);
    }
    SUBCASE("rejects non-positive gamma") {
        CHECK_THROWS_AS(asb::highpass_relu(1.0, 0.0), asb::InputError);
        CHECK_THROWS_AS(asb::HighPassThreshold(-2.0), asb::InputError);
    }
}

TEST_CASE("lowpass ReLU and the remainder polynomial") {
    SUBCASE("y=0 equals p_gamma(0) exactly") {
        CHECK(asb::lowpass_relu(0.0, 1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
        CHECK(asb::lowpass_polynomial(0.0, 1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    }
    SUBCASE("y=2, gamma=1 within the stated remainder bound") {
        const double remainder = std::abs(asb::lowpass_relu(2.0, 1.0) - (1.0 + 1.0 / kPi));
        CHECK(remainder <= 3.0 * 4.0 / (2.0 * kPi));
    }
    SUBCASE("oscillatory amplitude 1/(pi gamma) decreases in gamma") {
        CHECK(1.0 / (kPi * 0.25) > 1.0 / (kPi * 2.0));
        // visible in the function: lowpass value at y=0 is exactly 1/(pi gamma)
        CHECK(asb::lowpass_relu(0.0, 0.25) > asb::lowpass_relu(0.0, 2.0));
    }
}

TEST_CASE("Fourier inversion certificate") {
    std::vector<double> grid;
    for (int i = 0; i <= 1000; ++i) grid.push_back(-5.0 + 0.01 * i);
    for (double g : {0.25, 1.0, 2.0}) {
        const asb::InversionReport rep = asb::fourier_inversion_check(g, grid);
        CHECK(rep.max_violation <= 0.0);
        CHECK(rep.violations.size() == grid.size());
    }
    SUBCASE("zero remainder exactly at y=0") {
        const asb::InversionReport rep = asb::fourier_inversion_check(1.0, {0.0});
        CHECK(rep.violations[0] == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("ridge evaluation dispatches on the activation tag") {
    Eigen::MatrixXd xm(2, 1);
    xm << 0.5, -1.5;
    const asb::Configuration x(xm);
    asb::RidgeSpec spec;
    spec.w = Eigen::VectorXd::Zero(2);
    spec.b = 1.0;
    SUBCASE("constant ReLU ridge") { CHECK(asb::ridge_eval(spec, x) == 1.0); }
    SUBCASE("inactive ReLU ridge") {
        spec.w = Eigen::VectorXd::Zero(2);
        spec.w(0) = 1.0;
        spec.b = 0.0;
        Eigen::MatrixXd neg(2, 1);
        neg << -3.0, 0.0;
        CHECK(asb::ridge_eval(spec, asb::Configuration(neg)) == 0.0);
    }
    SUBCASE("constant highpass ridge") {
        spec.act = asb::Activation::HighpassRelu;
        spec.gamma = 0.5;
        spec.b = 0.7;
        CHECK(asb::ridge_eval(spec, x) ==
              doctest::Approx(asb::highpass_relu(0.7, 0.5)).epsilon(1e-15));
    }
    SUBCASE("dimension mismatch rejected") {
        spec.w = Eigen::VectorXd::Zero(3);
        CHECK_THROWS_AS(asb::ridge_eval(spec, x), asb::InputError);
    }
}
