#include "asbarron/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "asbarron/activation.hpp"
#include "asbarron/detbounds.hpp"
#include "asbarron/experiments.hpp"
#include "asbarron/io.hpp"
#include "asbarron/measure.hpp"
#include "asbarron/network.hpp"
#include "asbarron/planewave.hpp"
#include "asbarron/rng.hpp"

namespace asb {

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed, std::uint64_t stream,
                              double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = scale * rng::normal(seed, stream, static_cast<std::uint64_t>(i) * cols + j);
    return m;
}

BarronMeasure test_measure() {
    BarronMeasure rho;
    rho.n = 3;
    rho.d = 1;
    Eigen::VectorXd w1(3), w2(3), w3(3);
    w1 << 1.0, -0.3, 0.5;
    w2 << 0.4, 1.0, -0.8;
    w3 << -1.0, 0.6, 0.2;
    rho.atoms = {{1.0, 0.2, w1}, {-0.7, -0.1, w2}, {0.5, 0.0, w3}};
    rho.canonical = true;
    return rho;
}

struct Runner {
    std::vector<SelfTestResult> results;

    void check(const std::string& name, const std::function<double()>& deviation, double tol) {
        SelfTestResult r;
        r.name = name;
        try {
            const double dev = deviation();
            r.pass = dev <= tol;
            std::ostringstream os;
            os << "deviation " << dev << " (tol " << tol << ")";
            r.detail = os.str();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    }
};

} // namespace

std::vector<SelfTestResult> run_selftest() {
    Runner run;
    const std::uint64_t seed = 20260823;

    run.check("planewave/antisymmetry-sign-flip", [&] {
        const WaveMatrix w(random_matrix(3, 2, seed, 1));
        const Configuration x(random_matrix(3, 2, seed, 2));
        const Complex a = evaluate_planewave_slater(w, x);
        const Complex b = evaluate_planewave_slater(w, x.transposed(0, 2));
        return std::abs(a + b);
    }, 1e-12);

    run.check("planewave/determinant-equals-antisymmetrized-product", [&] {
        const WaveMatrix w(random_matrix(3, 2, seed, 3));
        const Configuration x(random_matrix(3, 2, seed, 4));
        const Complex via_as = antisymmetrize_pointwise(
            [&](const Configuration& y) {
                Complex p = 1.0;
                for (int i = 0; i < 3; ++i)
                    p *= std::polar(1.0, w.rows.row(i).dot(y.x.row(i)));
                return p;
            },
            x);
        return std::abs(via_as - evaluate_planewave_slater(w, x));
    }, 1e-12);

    run.check("planewave/hadamard-norm-bound", [&] {
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const WaveMatrix w(random_matrix(4, 2, seed, 100 + t));
            const double v = slater_norm_sq(w);
            worst = std::max({worst, -v, v - 1.0});
        }
        return worst;
    }, 1e-10);

    run.check("planewave/norm-matches-self-overlap", [&] {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const WaveMatrix w(random_matrix(3, 2, seed, 200 + t));
            worst = std::max(worst, std::abs(slater_norm_sq(w) - slater_overlap(w, w)));
        }
        return worst;
    }, 1e-12);

    run.check("activation/highpass-plus-lowpass-is-relu", [&] {
        double worst = 0.0;
        for (double y = -8.0; y <= 8.0; y += 0.37) {
            const double s = highpass_relu(y, 0.7) + lowpass_relu(y, 0.7);
            worst = std::max(worst, std::abs(s - relu(y)));
        }
        return worst;
    }, 1e-12);

    run.check("activation/highpass-closed-form-vs-quadrature", [&] {
        double worst = 0.0;
        for (double y : {-5.3, -1.1, 0.0, 0.4, 2.7, 9.2})
            for (double g : {0.25, 1.0, 2.0})
                worst = std::max(worst,
                                 std::abs(highpass_relu(y, g) - highpass_relu_quadrature(y, g)));
        return worst;
    }, 1e-7);

    run.check("activation/lowpass-remainder-bound", [&] {
        double worst = -1e300;
        for (double g : {0.25, 0.5, 1.0, 2.0}) {
            const InversionReport rep = fourier_inversion_check(g, [] {
                std::vector<double> grid;
                for (int i = 0; i <= 800; ++i) grid.push_back(-10.0 + i * 0.025);
                return grid;
            }());
            worst = std::max(worst, rep.max_violation);
        }
        return worst;
    }, 0.0);

    run.check("activation/sine-integral-odd-and-continuous", [&] {
        double worst = 0.0;
        for (double y : {0.5, 2.0, 3.999, 7.7})
            worst = std::max(worst, std::abs(sine_integral(y) + sine_integral(-y)));
        worst = std::max(worst, std::abs(sine_integral(4.0 - 1e-9) - sine_integral(4.0 + 1e-9)));
        return worst;
    }, 1e-8);

    run.check("measure/canonicalize-preserves-phi-and-values", [&] {
        BarronMeasure rho = test_measure();
        rho.canonical = false;
        rho.atoms[0].w *= 1.7;
        rho.atoms[1].w *= 0.4;
        const BarronMeasure can = canonicalize(rho, CanonicalNorm::LInf);
        const Configuration x(random_matrix(3, 1, seed, 300));
        double worst = std::abs(phi(rho) - phi(can));
        worst = std::max(worst, std::abs(evaluate_f_rho(rho, x, Activation::Relu) -
                                         evaluate_f_rho(can, x, Activation::Relu)));
        return worst;
    }, 1e-10);

    run.check("measure/antisymmetrize-measure-identity", [&] {
        const BarronMeasure rho = test_measure();
        const BarronMeasure anti = antisymmetrize_measure(rho);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const Configuration x(random_matrix(3, 1, seed, 400 + t));
            const double lhs = std::sqrt(factorial(3)) * evaluate_f_rho(anti, x, Activation::Relu);
            const double rhs = take_real(
                antisymmetrize_pointwise(
                    [&](const Configuration& y) {
                        return Complex(evaluate_f_rho(rho, y, Activation::Relu), 0.0);
                    },
                    x),
                "selftest antisymmetrize");
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return worst;
    }, 1e-10);

    run.check("measure/maurey-sample-support-and-mass", [&] {
        ComplexMeasureSpec mu;
        mu.base = test_measure();
        mu.gamma = 0.5;
        const int m = 64;
        const SlaterSum s = maurey_sample(mu, m, seed);
        if (static_cast<int>(s.terms.size()) != m) return 1.0;
        const double expected = sampling_mass(mu) / m;
        double worst = 0.0;
        for (const auto& term : s.terms)
            worst = std::max(worst, std::abs(std::abs(term.coeff) - expected));
        return worst;
    }, 1e-12);

    run.check("measure/total-variation-vs-numeric", [&] {
        ComplexMeasureSpec mu;
        mu.base = test_measure();
        mu.gamma = 0.5;
        const double tv = sampling_mass(mu);
        return std::abs(tv - total_variation_numeric(mu)) / tv;
    }, 1e-8);

    run.check("detbounds/lowrank-reconstruction", [&] {
        const WaveMatrix v(random_matrix(4, 2, seed, 500, 0.4));
        const WaveMatrix w(random_matrix(4, 2, seed, 501, 0.4));
        const auto terms = lowrank_terms(v, w, 25);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(4, 4);
        for (const auto& t : terms) sum += t.matrix;
        Eigen::MatrixXd exact(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) exact(i, j) = std::exp(v.rows.row(i).dot(w.rows.row(j)));
        return (sum - exact).norm();
    }, 1e-10);

    run.check("detbounds/proposition-feasible-instance", [&] {
        const int n = 20, d = 1;
        const double gamma = 0.5;
        Eigen::MatrixXd m = random_matrix(n, d, seed, 600);
        m *= gamma / m.lpNorm<Eigen::Infinity>();
        const auto p = admissible_p(n, d);
        if (!p) return 1.0;
        const DetBoundReport r = detbound_check(WaveMatrix(m), *p);
        return r.ok ? 0.0 : 1.0;
    }, 0.0);

    run.check("network/eval-matches-antisymmetrized-measure", [&] {
        AntisymNetwork net;
        net.n = 3;
        net.d = 1;
        net.a = random_matrix(4, 1, seed, 700, 0.5).col(0);
        net.b = random_matrix(4, 1, seed, 701, 0.5).col(0);
        net.W = random_matrix(4, 3, seed, 702);
        const BarronMeasure anti = antisymmetrize_measure(network_as_measure(net));
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const Configuration x(random_matrix(3, 1, seed, 710 + t));
            const double lhs = antisym_network_eval(net, x);
            const double rhs =
                std::sqrt(factorial(3)) * evaluate_f_rho(anti, x, Activation::Softplus);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return worst;
    }, 1e-10);

    run.check("network/gradient-matches-finite-differences", [&] {
        AntisymNetwork net;
        net.n = 3;
        net.d = 1;
        net.a = random_matrix(2, 1, seed, 800, 0.5).col(0);
        net.b = random_matrix(2, 1, seed, 801, 0.5).col(0);
        net.W = random_matrix(2, 3, seed, 802, 0.7);
        std::vector<Configuration> batch;
        std::vector<double> targets;
        for (int s = 0; s < 4; ++s) {
            batch.emplace_back(random_matrix(3, 1, seed, 810 + s));
            targets.push_back(0.3 * rng::normal(seed, 820, s));
        }
        NetworkGradient grad;
        antisym_network_grad(net, batch, targets, grad);
        const double h = 1e-5;
        double worst = 0.0;
        auto loss_at = [&](const AntisymNetwork& nn) {
            NetworkGradient g;
            return antisym_network_grad(nn, batch, targets, g);
        };
        for (int k = 0; k < 2; ++k) {
            AntisymNetwork p = net, q = net;
            p.a(k) += h;
            q.a(k) -= h;
            worst = std::max(worst, std::abs((loss_at(p) - loss_at(q)) / (2 * h) - grad.a(k)));
            p = net; q = net;
            p.b(k) += h;
            q.b(k) -= h;
            worst = std::max(worst, std::abs((loss_at(p) - loss_at(q)) / (2 * h) - grad.b(k)));
            for (int j = 0; j < 3; ++j) {
                p = net; q = net;
                p.W(k, j) += h;
                q.W(k, j) -= h;
                worst =
                    std::max(worst, std::abs((loss_at(p) - loss_at(q)) / (2 * h) - grad.W(k, j)));
            }
        }
        return worst;
    }, 1e-6);

    run.check("experiments/hermite-recurrence-vs-closed-form", [&] {
        double worst = 0.0;
        for (double y : {-2.1, -0.4, 0.0, 0.9, 3.3}) {
            worst = std::max(worst, std::abs(hermite_value(2, y) - (y * y - 1.0) / std::sqrt(2.0)));
            worst = std::max(worst,
                             std::abs(hermite_value(3, y) - (y * y * y - 3.0 * y) / std::sqrt(6.0)));
        }
        worst = std::max(worst, std::abs(hermite_orbital_overlap(0, 0.8) -
                                         Complex(std::exp(-0.32), 0.0)));
        return worst;
    }, 1e-12);

    run.check("experiments/fermi-antisymmetry-of-target", [&] {
        HermiteTarget t;
        t.n = 3;
        t.d = 1;
        t.orbitals = ground_state_orbitals(3, 1);
        double worst = 0.0;
        for (int s = 0; s < 10; ++s) {
            const Configuration x(random_matrix(3, 1, seed, 900 + s));
            worst = std::max(worst,
                             std::abs(target_eval(t, x) + target_eval(t, x.transposed(0, 1))));
        }
        return worst;
    }, 1e-12);

    run.check("io/measure-json-round-trip", [&] {
        const BarronMeasure rho = test_measure();
        const BarronMeasure back = parse_measure(measure_to_json(rho));
        if (back.atoms.size() != rho.atoms.size()) return 1.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < rho.atoms.size(); ++i) {
            worst = std::max(worst, std::abs(rho.atoms[i].a - back.atoms[i].a));
            worst = std::max(worst, std::abs(rho.atoms[i].b - back.atoms[i].b));
            worst = std::max(worst, (rho.atoms[i].w - back.atoms[i].w).norm());
        }
        return worst;
    }, 0.0);

    run.check("rng/draws-in-unit-interval-and-deterministic", [&] {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double u = rng::uniform01(seed, 5, i);
            if (!(u > 0.0 && u <= 1.0)) worst = 1.0;
            if (u != rng::uniform01(seed, 5, i)) worst = 1.0;
        }
        return worst;
    }, 0.0);

    return run.results;
}

} // namespace asb
