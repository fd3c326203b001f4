#include <doctest.h>

#include <cmath>

#include "asbarron/detbounds.hpp"
#include "asbarron/rng.hpp"

using asb::WaveMatrix;

namespace {

WaveMatrix random_waves(int n, int d, double scale, std::uint64_t seed, std::uint64_t stream) {
    Eigen::MatrixXd m(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            m(i, j) = scale * asb::rng::normal(seed, stream, static_cast<std::uint64_t>(i) * d + j);
    return WaveMatrix(m);
}

Eigen::MatrixXd dense_exp_gram(const WaveMatrix& v, const WaveMatrix& w) {
    const int n = v.n();
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = std::exp(v.rows.row(i).dot(w.rows.row(j)));
    return g;
}

} // namespace

TEST_CASE("binomial coefficients") {
    CHECK(asb::binomial(0, 0) == 1.0);
    CHECK(asb::binomial(5, 2) == 10.0);
    CHECK(asb::binomial(10, 10) == 1.0);
    CHECK(asb::binomial(4, 7) == 0.0);
    CHECK(asb::binomial(4, -1) == 0.0);
    CHECK(asb::binomial(30, 15) == 155117520.0);
}

TEST_CASE("low-rank Taylor terms of the exponential Gram matrix") {
    const int n = 5;
    SUBCASE("k=0 term is the all-ones matrix") {
        const WaveMatrix v = random_waves(n, 2, 0.3, 21, 0);
        const WaveMatrix w = random_waves(n, 2, 0.3, 21, 1);
        const auto terms = asb::lowrank_terms(v, w, 0);
        REQUIRE(terms.size() == 1);
        CHECK((terms[0].matrix - Eigen::MatrixXd::Ones(n, n)).norm() == 0.0);
        CHECK(terms[0].rank_bound == 1);
    }
    SUBCASE("d=1 terms are rank one") {
        const WaveMatrix v = random_waves(n, 1, 0.4, 21, 2);
        const WaveMatrix w = random_waves(n, 1, 0.4, 21, 3);
        for (const auto& term : asb::lowrank_terms(v, w, 6)) {
            CHECK(term.rank_bound == 1);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(term.matrix);
            const double s0 = svd.singularValues()(0);
            for (int i = 1; i < svd.singularValues().size(); ++i)
                CHECK(svd.singularValues()(i) <= 1e-12 * s0);
        }
    }
    SUBCASE("partial sums reconstruct the Gram matrix within the stated tail") {
        for (int trial = 0; trial < 10; ++trial) {
            const int d = 1 + trial % 3;
            // bounded entries keep mu = |v|_inf |w|_inf d well under 1
            auto uniform_waves = [&](int nn, int dd, std::uint64_t stream) {
                Eigen::MatrixXd mat(nn, dd);
                for (int i = 0; i < nn; ++i)
                    for (int j = 0; j < dd; ++j)
                        mat(i, j) = 0.5 * asb::rng::uniform01(22, stream,
                                                              static_cast<std::uint64_t>(i) * dd +
                                                                  j) -
                                    0.25;
                return WaveMatrix(mat);
            };
            const WaveMatrix v = uniform_waves(n, d, 2 * trial);
            const WaveMatrix w = uniform_waves(n, d, 2 * trial + 1);
            const double mu =
                v.rows.lpNorm<Eigen::Infinity>() * w.rows.lpNorm<Eigen::Infinity>() * d;
            const int K = 25;
            const auto terms = asb::lowrank_terms(v, w, K);
            Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
            for (const auto& term : terms) sum += term.matrix;
            // tail of sum_k mu^k / k! beyond K
            double tail = 0.0, t = 1.0;
            for (int k = 1; k <= K + 1; ++k) t *= mu / k;
            for (int k = K + 1; k <= K + 60; ++k) {
                tail += t;
                t *= mu / (k + 1);
            }
            CHECK((sum - dense_exp_gram(v, w)).norm() <= n * tail + 1e-13);
        }
    }
    SUBCASE("numerical rank and spectral norm respect the per-term bounds") {
        const WaveMatrix v = random_waves(6, 2, 0.35, 23, 0);
        const WaveMatrix w = random_waves(6, 2, 0.35, 23, 1);
        for (const auto& term : asb::lowrank_terms(v, w, 8)) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(term.matrix);
            const auto& s = svd.singularValues();
            long rank = 0;
            for (int i = 0; i < s.size(); ++i)
                if (s(i) > 1e-11 * std::max(1.0, s(0))) ++rank;
            CHECK(rank <= term.rank_bound);
            CHECK(s(0) <= term.norm_bound * (1.0 + 1e-9));
        }
    }
    SUBCASE("input validation") {
        const WaveMatrix v = random_waves(3, 1, 0.3, 24, 0);
        CHECK_THROWS_AS(asb::lowrank_terms(v, random_waves(4, 1, 0.3, 24, 1), 3), asb::InputError);
        CHECK_THROWS_AS(asb::lowrank_terms(v, v, -1), asb::InputError);
        CHECK_THROWS_AS(asb::lowrank_terms(v, v, asb::kMaxLowRankOrder + 1),
                        asb::CapabilityError);
    }
}

TEST_CASE("eigenvalue tail bound for the plane-wave Gram matrix") {
    SUBCASE("w = 0 saturates trivially") {
        const WaveMatrix w(Eigen::MatrixXd::Zero(10, 1));
        const auto r = asb::eigenvalue_bound_check(w, 2);
        // Gram matrix is all ones: lambda_0 = n, the rest vanish. The bound
        // 2n mu^p/p! is exactly zero here, so the margin sits at roundoff.
        CHECK(r.lambda0 == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(r.lambda_L <= 1e-12);
        CHECK(r.margin >= -1e-12);
    }
    SUBCASE("n=20, d=1, |w|_inf = 0.3, p = 3") {
        Eigen::MatrixXd m(20, 1);
        for (int i = 0; i < 20; ++i) m(i, 0) = 0.3 * std::cos(1.7 * i + 0.4);
        m(3, 0) = 0.3; // pin the infinity norm
        const WaveMatrix w(m);
        const auto r = asb::eigenvalue_bound_check(w, 3);
        CHECK(r.lambda_L_bound == doctest::Approx(2.0 * 20 * std::pow(0.09, 3) / 6.0)
                                      .epsilon(1e-12));
        CHECK(r.ok);
        CHECK(r.margin >= 0.0);
    }
    SUBCASE("p = 0 bounds the top eigenvalue by 2n") {
        const WaveMatrix w = random_waves(8, 2, 0.1, 25, 0);
        const auto r = asb::eigenvalue_bound_check(w, 0);
        CHECK(r.L == 0);
        CHECK(r.lambda_L_bound == doctest::Approx(16.0).epsilon(1e-15));
        CHECK(r.lambda0 <= 16.0);
    }
    SUBCASE("precondition mu <= 1/2 enforced") {
        const WaveMatrix w(Eigen::MatrixXd::Constant(6, 2, 0.6));
        CHECK_THROWS_AS(asb::eigenvalue_bound_check(w, 1), asb::InputError);
    }
    SUBCASE("precondition L < n enforced") {
        const WaveMatrix w = random_waves(3, 2, 0.1, 25, 1);
        CHECK_THROWS_AS(asb::eigenvalue_bound_check(w, 4), asb::InputError);
    }
}

TEST_CASE("determinant bound certificate") {
    SUBCASE("n=40, d=1, |w|_inf = 0.2, p = 8") {
        Eigen::MatrixXd m(40, 1);
        for (int i = 0; i < 40; ++i) m(i, 0) = 0.2 * std::sin(0.9 * i + 0.2);
        m(7, 0) = 0.2;
        const WaveMatrix w(m);
        const auto r = asb::detbound_check(w, 8);
        CHECK(r.ok);
        CHECK(r.log_bound == doctest::Approx(8.0 * 40 * std::log(0.2)).epsilon(1e-12));
        // Cross-check the log-determinant through the spectral route. The
        // Gram matrix has condition number ~e^{1200}, so the smallest
        // eigenvalues (and LU pivots) carry relative noise; the two routes
        // only need to agree well enough to rule out accumulation bugs.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_exp_gram(w, w));
        double log_det_spec = 0.0;
        for (int i = 0; i < 40; ++i) log_det_spec += std::log(std::abs(es.eigenvalues()(i)));
        CHECK(r.log_det == doctest::Approx(log_det_spec).epsilon(0.02));
    }
    SUBCASE("preconditions name the failing inequality") {
        const WaveMatrix small = random_waves(4, 1, 0.1, 26, 0);
        try {
            asb::detbound_check(small, 2); // 2! < 4 * 16
            FAIL("expected InputError");
        } catch (const asb::InputError& e) {
            CHECK(std::string(e.what()).find("p! >= 4n^2") != std::string::npos);
        }
        Eigen::MatrixXd big = Eigen::MatrixXd::Constant(20, 1, 0.9);
        try {
            asb::detbound_check(WaveMatrix(big), 7);
            FAIL("expected InputError");
        } catch (const asb::InputError& e) {
            CHECK(std::string(e.what()).find("|w|_inf") != std::string::npos);
        }
        try {
            asb::detbound_check(random_waves(6, 1, 0.1, 26, 1), 7); // binom(7,1)=7 > 3
            FAIL("expected InputError");
        } catch (const asb::InputError& e) {
            CHECK(std::string(e.what()).find("binom") != std::string::npos);
        }
    }
}

TEST_CASE("admissible order selection") {
    CHECK(asb::admissible_p(20, 1) == 7);
    CHECK(asb::admissible_p(30, 1) == 7);
    CHECK(asb::admissible_p(40, 1) == 8);
    CHECK(!asb::admissible_p(40, 2).has_value());
    CHECK(!asb::admissible_p(8, 1).has_value()); // p! >= 256 needs p >= 6, binom(6,1)=6 > 4
}

TEST_CASE("norm curve along a wave direction") {
    Eigen::MatrixXd m(4, 1);
    m << 1.0, -0.4, 0.7, 0.1;
    const WaveMatrix w(m);
    const auto curve = asb::norm_curve(w, {0.0, 0.5, 1.0, 3.0});
    REQUIRE(curve.size() == 4);
    CHECK(curve[0].first == 0.0);
    CHECK(curve[0].second == doctest::Approx(0.0).epsilon(1e-14)); // repeated zero rows
    for (const auto& [theta, nsq] : curve) {
        CHECK(nsq >= -1e-12);
        CHECK(nsq <= 1.0 + 1e-10);
    }
    SUBCASE("requires a unit infinity norm") {
        CHECK_THROWS_AS(asb::norm_curve(WaveMatrix(0.5 * m), {1.0}), asb::InputError);
    }
}
