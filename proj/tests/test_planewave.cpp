#include <doctest.h>

#include <cmath>
#include <complex>

#include "asbarron/parallel.hpp"
#include "asbarron/planewave.hpp"
#include "asbarron/rng.hpp"
#include "support/oracles.hpp"

using asb::Complex;
using asb::Configuration;
using asb::WaveMatrix;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed, std::uint64_t stream) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = asb::rng::normal(seed, stream, static_cast<std::uint64_t>(i) * cols + j);
    return m;
}

} // namespace

TEST_CASE("plane-wave Slater: single particle reduces to one exponential") {
    Eigen::MatrixXd w(1, 2), x(1, 2);
    w << 0.7, -1.3;
    x << 0.4, 2.1;
    const Complex got = asb::evaluate_planewave_slater(WaveMatrix(w), Configuration(x));
    const Complex want = std::polar(1.0, w.row(0).dot(x.row(0)));
    CHECK(std::abs(got - want) < 1e-14);
}

TEST_CASE("plane-wave Slater: two-particle closed form") {
    Eigen::MatrixXd w(2, 1), x(2, 1);
    w << 0.3, -1.1;
    x << 0.9, 0.2;
    const Complex got = asb::evaluate_planewave_slater(WaveMatrix(w), Configuration(x));
    const Complex want = (std::polar(1.0, w(0) * x(0) + w(1) * x(1)) -
                          std::polar(1.0, w(1) * x(0) + w(0) * x(1))) /
                         std::sqrt(2.0);
    CHECK(std::abs(got - want) < 1e-14);
}

TEST_CASE("plane-wave Slater: repeated wavevector rows vanish") {
    Eigen::MatrixXd w(3, 1);
    w << 0.4, 0.4, -0.9;
    for (int t = 0; t < 5; ++t) {
        const Configuration x(random_matrix(3, 1, 11, t));
        CHECK(std::abs(asb::evaluate_planewave_slater(WaveMatrix(w), x)) < 1e-13);
    }
}

TEST_CASE("plane-wave Slater: sign flip under particle transposition") {
    for (int t = 0; t < 10; ++t) {
        const WaveMatrix w(random_matrix(4, 2, 21, 2 * t));
        const Configuration x(random_matrix(4, 2, 21, 2 * t + 1));
        const Complex a = asb::evaluate_planewave_slater(w, x);
        const Complex b = asb::evaluate_planewave_slater(w, x.transposed(1, 3));
        CHECK(std::abs(a + b) < 1e-12 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("plane-wave Slater: shape mismatch rejected") {
    const WaveMatrix w(Eigen::MatrixXd::Zero(2, 1));
    const Configuration x(Eigen::MatrixXd::Zero(3, 1));
    CHECK_THROWS_AS(asb::evaluate_planewave_slater(w, x), asb::InputError);
}

TEST_CASE("single-particle overlap: closed form and quadrature oracle") {
    Eigen::VectorXd v(1), w(1);
    v << 0.0;
    w << 1.0;
    SUBCASE("identical wavevectors give unit overlap") {
        CHECK(asb::single_particle_overlap(w, w) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("v=0, w=1 equals exp(-1/2)") {
        CHECK(asb::single_particle_overlap(v, w) ==
              doctest::Approx(0.6065306597126334).epsilon(1e-12));
        // Independent route: E[conj(e^{i*0*y}) e^{i*1*y}] under N(0,1).
        const Complex numeric = oracle::gaussian_expectation(
            [](const Eigen::VectorXd& y) { return std::polar(1.0, y(0)); }, 1, 40);
        CHECK(std::abs(numeric - Complex(asb::single_particle_overlap(v, w), 0.0)) < 1e-10);
    }
    SUBCASE("symmetric in its arguments") {
        CHECK(asb::single_particle_overlap(v, w) == asb::single_particle_overlap(w, v));
    }
    SUBCASE("dimension mismatch rejected") {
        Eigen::VectorXd long_w(2);
        long_w << 1.0, 2.0;
        CHECK_THROWS_AS(asb::single_particle_overlap(v, long_w), asb::InputError);
    }
}

TEST_CASE("slater_overlap: examples and antisymmetry in rows") {
    SUBCASE("n=1 self overlap is 1") {
        const WaveMatrix w(Eigen::MatrixXd::Constant(1, 1, 2.7));
        CHECK(asb::slater_overlap(w, w) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("row transposition negates the overlap") {
        const WaveMatrix v(random_matrix(3, 2, 31, 0));
        Eigen::MatrixXd swapped = v.rows;
        swapped.row(0).swap(swapped.row(2));
        CHECK(asb::slater_overlap(v, WaveMatrix(swapped)) ==
              doctest::Approx(-asb::slater_overlap(v, v)).epsilon(1e-12));
    }
    SUBCASE("n=2, d=1, w=(0,1): overlap 1 - e^{-1}") {
        Eigen::MatrixXd w(2, 1);
        w << 0.0, 1.0;
        CHECK(asb::slater_overlap(WaveMatrix(w), WaveMatrix(w)) ==
              doctest::Approx(0.6321205588285577).epsilon(1e-12));
    }
    SUBCASE("tensor Gauss-Hermite oracle agreement, n<=2, d<=2") {
        for (int n = 1; n <= 2; ++n)
            for (int d = 1; d <= 2; ++d)
                for (int t = 0; t < 5; ++t) {
                    const WaveMatrix v(random_matrix(n, d, 41, 10 * n + d + 100 * t));
                    const WaveMatrix w(random_matrix(n, d, 42, 10 * n + d + 100 * t));
                    const Complex numeric = oracle::slater_inner_quadrature(v, w, 32);
                    CHECK(std::abs(numeric.imag()) < 1e-8);
                    CHECK(asb::slater_overlap(v, w) ==
                          doctest::Approx(numeric.real()).epsilon(2e-7));
                }
    }
}

TEST_CASE("slater_norm_sq: examples, bounds, and consistency") {
    SUBCASE("n=1 always normalized") {
        CHECK(asb::slater_norm_sq(WaveMatrix(Eigen::MatrixXd::Constant(1, 1, 3.2))) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("n=2, d=1, w=(0,1)") {
        Eigen::MatrixXd w(2, 1);
        w << 0.0, 1.0;
        CHECK(asb::slater_norm_sq(WaveMatrix(w)) ==
              doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    }
    SUBCASE("equal rows give zero norm") {
        Eigen::MatrixXd w(2, 2);
        w << 1.0, -0.5, 1.0, -0.5;
        CHECK(asb::slater_norm_sq(WaveMatrix(w)) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("matches self overlap") {
        for (int t = 0; t < 20; ++t) {
            const WaveMatrix w(random_matrix(3, 2, 51, t));
            const double a = asb::slater_norm_sq(w);
            const double b = asb::slater_overlap(w, w);
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
        }
    }
    SUBCASE("Hadamard bound on random draws") {
        for (int n = 1; n <= 6; ++n)
            for (int d = 1; d <= 3; ++d)
                for (int t = 0; t < 50; ++t) {
                    const double v = asb::slater_norm_sq(
                        WaveMatrix(random_matrix(n, d, 61, 1000 * n + 100 * d + t)));
                    CHECK(v <= 1.0 + 1e-10);
                    CHECK(v >= 0.0);
                }
    }
    SUBCASE("well-separated rows are nearly orthonormal orbitals") {
        Eigen::MatrixXd w(3, 1);
        w << 0.0, 10.0, 25.0; // min pairwise distance 10
        const double v = asb::slater_norm_sq(WaveMatrix(w));
        CHECK(v <= 1.0);
        CHECK(v >= 1.0 - 1e-10);
    }
}

TEST_CASE("slater_sum_inner: bilinearity and cancellation") {
    const WaveMatrix w(random_matrix(2, 1, 71, 0));
    asb::SlaterSum a;
    a.terms.push_back({Complex(1.0, 0.0), w});
    SUBCASE("single unit term reduces to the norm") {
        CHECK(asb::take_real(asb::slater_sum_inner(a, a), "test") ==
              doctest::Approx(asb::slater_norm_sq(w)).epsilon(1e-12));
    }
    SUBCASE("doubling one coefficient doubles the inner product") {
        asb::SlaterSum b = a;
        b.terms[0].coeff *= 2.0;
        CHECK(std::abs(asb::slater_sum_inner(b, a) - 2.0 * asb::slater_sum_inner(a, a)) < 1e-12);
    }
    SUBCASE("opposite coefficients on the same wavevectors cancel") {
        asb::SlaterSum c;
        c.terms.push_back({Complex(0.7, 0.3), w});
        c.terms.push_back({Complex(-0.7, -0.3), w});
        CHECK(std::abs(asb::slater_sum_inner(c, c)) < 1e-12);
    }
}

TEST_CASE("antisymmetrize_pointwise: projections and identities") {
    SUBCASE("symmetric function maps to zero") {
        const Configuration x(random_matrix(3, 1, 81, 0));
        const Complex v = asb::antisymmetrize_pointwise(
            [](const Configuration& y) { return Complex(y.x.sum() * y.x.sum(), 0.0); }, x);
        CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("low-degree monomial dies for n=3") {
        const Configuration x(random_matrix(3, 1, 81, 1));
        const Complex v = asb::antisymmetrize_pointwise(
            [](const Configuration& y) { return Complex(y.x(0, 0), 0.0); }, x);
        CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("product of plane waves reproduces the determinant") {
        const WaveMatrix w(random_matrix(4, 2, 81, 2));
        const Configuration x(random_matrix(4, 2, 81, 3));
        const Complex via_as = asb::antisymmetrize_pointwise(
            [&](const Configuration& y) {
                Complex p = 1.0;
                for (int i = 0; i < 4; ++i) p *= std::polar(1.0, w.rows.row(i).dot(y.x.row(i)));
                return p;
            },
            x);
        CHECK(std::abs(via_as - asb::evaluate_planewave_slater(w, x)) < 1e-12);
    }
    SUBCASE("permutation count is capped") {
        const Configuration x(Eigen::MatrixXd::Zero(11, 1));
        CHECK_THROWS_AS(asb::antisymmetrize_pointwise(
                            [](const Configuration&) { return Complex(0.0, 0.0); }, x),
                        asb::CapabilityError);
    }
}

TEST_CASE("mc_l2_distance: exact cases, a known norm, and error reporting") {
    auto zero = [](const Configuration&) { return Complex(0.0, 0.0); };
    SUBCASE("identical functions") {
        auto f = [](const Configuration& x) { return Complex(x.x(0, 0), 0.0); };
        const asb::McEstimate e = asb::mc_l2_distance(f, f, 2, 1, 512, 7);
        CHECK(e.estimate == 0.0);
        CHECK(e.std_error == 0.0);
    }
    SUBCASE("constant gap of one") {
        auto one = [](const Configuration&) { return Complex(1.0, 0.0); };
        const asb::McEstimate e = asb::mc_l2_distance(one, zero, 2, 1, 512, 7);
        CHECK(e.estimate == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("norm of a plane-wave Slater within 3 standard errors") {
        Eigen::MatrixXd wm(2, 1);
        wm << 0.0, 1.0;
        const WaveMatrix w(wm);
        auto f = [&](const Configuration& x) { return asb::evaluate_planewave_slater(w, x); };
        const asb::McEstimate e = asb::mc_l2_distance(f, zero, 2, 1, 1 << 16, 7);
        const double want = std::sqrt(1.0 - std::exp(-1.0));
        CHECK(std::abs(e.estimate - want) <= 3.0 * e.std_error);
    }
    SUBCASE("non-finite samples are flagged with the offending point") {
        auto bad = [](const Configuration& x) {
            return Complex(x.x(0, 0) > 0 ? std::numeric_limits<double>::infinity() : 0.0, 0.0);
        };
        CHECK_THROWS_AS(asb::mc_l2_distance(bad, zero, 2, 1, 512, 7), asb::NumericalError);
    }
    SUBCASE("estimate is identical across thread counts") {
        Eigen::MatrixXd wm(2, 1);
        wm << 0.3, -0.8;
        const WaveMatrix w(wm);
        auto f = [&](const Configuration& x) { return asb::evaluate_planewave_slater(w, x); };
        asb::set_thread_count(1);
        const asb::McEstimate serial = asb::mc_l2_distance(f, zero, 2, 1, 8192, 13);
        asb::set_thread_count(4);
        const asb::McEstimate parallel = asb::mc_l2_distance(f, zero, 2, 1, 8192, 13);
        asb::set_thread_count(0);
        CHECK(serial.estimate == parallel.estimate);
        CHECK(serial.std_error == parallel.std_error);
    }
}
