#include "asbarron/network.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "asbarron/rng.hpp"

namespace asb {

namespace {

/// Per-sample accumulators of the anti-symmetrized ridge and its derivatives
/// for one hidden unit: R = AS sigma, D = AS sigma', G = AS sigma' * (pi x).
struct RidgeDerivatives {
    double value = 0.0;
    double d_bias = 0.0;
    Eigen::VectorXd d_w;
};

RidgeDerivatives antisym_softplus_derivatives(const Eigen::VectorXd& w, double b,
                                              const Configuration& x) {
    const int n = x.n(), d = x.d();
    const int nd = n * d;
    Eigen::MatrixXd dots(n, n); // dots(i, j) = w-block_i . x_j
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dots(i, j) = w.segment(i * d, d).dot(x.x.row(j));

    RidgeDerivatives out;
    out.d_w = Eigen::VectorXd::Zero(nd);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double s = dots.trace(); // sum_i dots(i, perm[i])
    int sign = 1;
    auto emit = [&] {
        const double y = s + b;
        const double sp = softplus(y);
        const double sig = logistic(y);
        out.value += sign * sp;
        out.d_bias += sign * sig;
        for (int i = 0; i < n; ++i)
            out.d_w.segment(i * d, d) += sign * sig * x.x.row(perm[i]).transpose();
    };
    emit();
    std::vector<int> c(n, 0);
    int i = 1;
    while (i < n) {
        if (c[i] < i) {
            const int p = (i % 2 == 0) ? 0 : c[i];
            const int q = i;
            s += dots(p, perm[q]) + dots(q, perm[p]) - dots(p, perm[p]) - dots(q, perm[q]);
            std::swap(perm[p], perm[q]);
            sign = -sign;
            emit();
            ++c[i];
            i = 1;
        } else {
            c[i] = 0;
            ++i;
        }
    }
    const double scale = 1.0 / std::sqrt(factorial(n));
    out.value *= scale;
    out.d_bias *= scale;
    out.d_w *= scale;
    return out;
}

} // namespace

void AntisymNetwork::validate() const {
    if (n < 1 || d < 1) throw InputError("AntisymNetwork: n, d must be >= 1");
    if (n > kMaxNetworkN)
        throw CapabilityError("AntisymNetwork: capped at n <= " + std::to_string(kMaxNetworkN));
    const int m = width();
    if (b.size() != m || W.rows() != m || W.cols() != static_cast<long>(n) * d)
        throw InputError("AntisymNetwork: inconsistent parameter shapes");
    if (!a.allFinite() || !b.allFinite() || !W.allFinite())
        throw InputError("AntisymNetwork: non-finite parameters");
}

double antisym_network_eval(const AntisymNetwork& net, const Configuration& x) {
    net.validate();
    if (x.n() != net.n || x.d() != net.d) throw InputError("antisym_network_eval: shape mismatch");
    double s = 0.0;
    for (int k = 0; k < net.width(); ++k)
        s += net.a(k) *
             antisym_ridge_eval(net.W.row(k).transpose(), net.b(k), Activation::Softplus, 0.0, x);
    return s;
}

BarronMeasure network_as_measure(const AntisymNetwork& net) {
    net.validate();
    BarronMeasure rho;
    rho.n = net.n;
    rho.d = net.d;
    rho.atoms.reserve(net.width());
    for (int k = 0; k < net.width(); ++k)
        rho.atoms.push_back({net.a(k), net.b(k), net.W.row(k).transpose()});
    return rho;
}

double network_phi_tilde(const AntisymNetwork& net) {
    double s = 0.0;
    for (int k = 0; k < net.width(); ++k)
        s += std::abs(net.a(k)) * (net.W.row(k).lpNorm<1>() + std::abs(net.b(k)));
    return s;
}

double antisym_network_grad(const AntisymNetwork& net, const std::vector<Configuration>& batch,
                            const std::vector<double>& targets, NetworkGradient& grad) {
    net.validate();
    if (batch.size() != targets.size() || batch.empty())
        throw InputError("antisym_network_grad: batch/target size mismatch");
    const int m = net.width();
    const int nd = net.n * net.d;
    grad.a = Eigen::VectorXd::Zero(m);
    grad.b = Eigen::VectorXd::Zero(m);
    grad.W = Eigen::MatrixXd::Zero(m, nd);
    double loss = 0.0;
    std::vector<RidgeDerivatives> units(m);
    for (std::size_t s = 0; s < batch.size(); ++s) {
        double value = 0.0;
        for (int k = 0; k < m; ++k) {
            units[k] = antisym_softplus_derivatives(net.W.row(k).transpose(), net.b(k), batch[s]);
            value += net.a(k) * units[k].value;
        }
        const double r = value - targets[s];
        if (!std::isfinite(r))
            throw TrainingError("antisym_network_grad: non-finite residual at sample " +
                                std::to_string(s));
        loss += r * r;
        for (int k = 0; k < m; ++k) {
            grad.a(k) += 2.0 * r * units[k].value;
            grad.b(k) += 2.0 * r * net.a(k) * units[k].d_bias;
            grad.W.row(k) += 2.0 * r * net.a(k) * units[k].d_w.transpose();
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    grad.a *= inv;
    grad.b *= inv;
    grad.W *= inv;
    return loss * inv;
}

AbNormResult estimate_ab_norm(const std::function<double(const Configuration&)>& target, int n,
                              int d, const TrainConfig& cfg) {
    if (!(cfg.epsilon >= 0.0)) throw InputError("estimate_ab_norm: epsilon must be >= 0");
    if (!(cfg.lambda > 0.0)) throw InputError("estimate_ab_norm: lambda must be > 0");
    if (cfg.steps < 1 || cfg.batch < 1 || cfg.pool_samples < 2 || cfg.hidden_width < 1)
        throw InputError("estimate_ab_norm: counts must be positive");

    const int nd = n * d;
    std::vector<Configuration> pool;
    std::vector<double> values;
    pool.reserve(cfg.pool_samples);
    values.reserve(cfg.pool_samples);
    for (int i = 0; i < cfg.pool_samples; ++i) {
        pool.push_back(mc_sample_point(n, d, cfg.seed ^ 0x706f6f6cull, i));
        values.push_back(target(pool.back()));
    }

    auto pool_residual = [&](const AntisymNetwork& net) {
        double s = 0.0;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const double r = antisym_network_eval(net, pool[i]) - values[i];
            s += r * r;
        }
        return s / static_cast<double>(pool.size());
    };

    AbNormResult best;
    bool have_best = false;
    for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
        const std::uint64_t rs = cfg.seed + 1000003ull * restart;
        const double w_scale = 0.4 * (1 << (restart % 3)); // 0.4, 0.8, 1.6
        AntisymNetwork net;
        net.n = n;
        net.d = d;
        net.a = Eigen::VectorXd(cfg.hidden_width);
        net.b = Eigen::VectorXd(cfg.hidden_width);
        net.W = Eigen::MatrixXd(cfg.hidden_width, nd);
        for (int k = 0; k < cfg.hidden_width; ++k) {
            net.a(k) = 0.2 * rng::normal(rs, 10, k);
            net.b(k) = 0.5 * rng::normal(rs, 11, k);
            for (int j = 0; j < nd; ++j) net.W(k, j) = w_scale * rng::normal(rs, 12, k * nd + j);
        }

        NetworkGradient vel;
        vel.a = Eigen::VectorXd::Zero(cfg.hidden_width);
        vel.b = Eigen::VectorXd::Zero(cfg.hidden_width);
        vel.W = Eigen::MatrixXd::Zero(cfg.hidden_width, nd);
        constexpr double kMomentum = 0.9;
        double ema = pool_residual(net);
        int calm = 0;
        bool converged = false;
        std::vector<Configuration> batch(cfg.batch);
        std::vector<double> batch_y(cfg.batch);
        NetworkGradient grad;
        for (int step = 0; step < cfg.steps; ++step) {
            const double progress = static_cast<double>(step) / cfg.steps;
            const double lr =
                cfg.learning_rate * (0.505 + 0.495 * std::cos(3.14159265358979 * progress));
            for (int i = 0; i < cfg.batch; ++i) {
                const std::uint64_t u = rng::hash3(rs, 20, step * 1000003ull + i);
                const std::size_t idx = u % pool.size();
                batch[i] = pool[idx];
                batch_y[i] = values[idx];
            }
            const double mb_loss = antisym_network_grad(net, batch, batch_y, grad);
            ema = 0.95 * ema + 0.05 * mb_loss;
            const double active = ema > cfg.epsilon ? 1.0 : 0.0;
            if (cfg.log) {
                const double p1 = std::max(ema - cfg.epsilon, 0.0);
                const double p2 = cfg.lambda * network_phi_tilde(net);
                *cfg.log << step << ',' << mb_loss << ',' << p1 << ',' << p2 << '\n';
            }
            // penalty subgradients of lambda * phi_tilde
            for (int k = 0; k < cfg.hidden_width; ++k) {
                const double absa = std::abs(net.a(k));
                const double sa = net.a(k) > 0 ? 1.0 : (net.a(k) < 0 ? -1.0 : 0.0);
                grad.a(k) = active * grad.a(k) +
                            cfg.lambda * sa * (net.W.row(k).lpNorm<1>() + std::abs(net.b(k)));
                grad.b(k) = active * grad.b(k) +
                            cfg.lambda * absa * (net.b(k) > 0 ? 1.0 : (net.b(k) < 0 ? -1.0 : 0.0));
                for (int j = 0; j < nd; ++j)
                    grad.W(k, j) =
                        active * grad.W(k, j) +
                        cfg.lambda * absa * (net.W(k, j) > 0 ? 1.0 : (net.W(k, j) < 0 ? -1.0 : 0.0));
            }
            vel.a = kMomentum * vel.a - lr * grad.a;
            vel.b = kMomentum * vel.b - lr * grad.b;
            vel.W = kMomentum * vel.W - lr * grad.W;
            net.a += vel.a;
            net.b += vel.b;
            net.W += vel.W;
            if (!net.a.allFinite() || !net.b.allFinite() || !net.W.allFinite())
                throw TrainingError("estimate_ab_norm: parameters diverged at step " +
                                    std::to_string(step));
            if (std::max(0.0, ema - cfg.epsilon) <= 1e-3) {
                if (++calm >= 100) converged = true;
            } else {
                calm = 0;
            }
        }

        AbNormResult r;
        r.residual = pool_residual(net);
        r.estimate = network_phi_tilde(net);
        r.converged = converged && std::max(0.0, r.residual - cfg.epsilon) <= 2e-3;
        r.net = std::move(net);
        const bool better = !have_best ||
                            (r.converged && !best.converged) ||
                            (r.converged == best.converged &&
                             (r.converged ? r.estimate < best.estimate
                                          : r.residual < best.residual));
        if (better) {
            best = std::move(r);
            have_best = true;
        }
    }
    return best;
}

} // namespace asb
