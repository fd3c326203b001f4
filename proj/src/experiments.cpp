#include "asbarron/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "asbarron/network.hpp"
#include "asbarron/rng.hpp"

namespace asb {

namespace {

bool colex_less(const std::vector<int>& a, const std::vector<int>& b) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

/// Value and gradient of a_w(x) with respect to the entries of w, via the
/// adjugate identity d det = det * tr(M^-1 dM).
void slater_value_and_grad(const WaveMatrix& w, const Configuration& x, Complex& value,
                           Eigen::VectorXcd& grad) {
    const int n = w.n(), d = w.d();
    Eigen::MatrixXcd m(n, n);
    const Eigen::MatrixXd phases = x.x * w.rows.transpose();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = std::polar(1.0, phases(i, j));
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const double scale = 1.0 / std::sqrt(factorial(n));
    value = lu.determinant() * scale;
    grad.resize(static_cast<long>(n) * d);
    if (std::abs(value) < 1e-300) {
        // Singular phase matrix; fall back to central differences entry-wise.
        constexpr double delta = 1e-6;
        for (int j0 = 0; j0 < n; ++j0)
            for (int ax = 0; ax < d; ++ax) {
                WaveMatrix wp = w, wm = w;
                wp.rows(j0, ax) += delta;
                wm.rows(j0, ax) -= delta;
                grad(j0 * d + ax) = (evaluate_planewave_slater(wp, x) -
                                     evaluate_planewave_slater(wm, x)) /
                                    (2.0 * delta);
            }
        return;
    }
    const Eigen::MatrixXcd inv = lu.inverse();
    for (int j0 = 0; j0 < n; ++j0) {
        for (int ax = 0; ax < d; ++ax) {
            Complex acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += inv(j0, i) * Complex(0.0, x.x(i, ax)) * m(i, j0);
            grad(j0 * d + ax) = value * acc;
        }
    }
}

struct SolveResult {
    Eigen::VectorXcd c;
    double objective;
};

/// Exact coefficient solve of |sum c_j a_j - psi|^2 given the Gram matrix and
/// target overlaps, with a small ridge for near-degenerate wavevector sets.
SolveResult solve_coefficients(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& h,
                               double norm_sq) {
    const int m = static_cast<int>(gram.rows());
    const double ridge = 1e-10 * std::max(1.0, gram.real().trace() / m);
    Eigen::MatrixXcd reg = gram + ridge * Eigen::MatrixXcd::Identity(m, m);
    SolveResult r;
    r.c = reg.ldlt().solve(h);
    const Complex quad = (r.c.adjoint() * gram * r.c)(0, 0);
    r.objective = norm_sq - 2.0 * (h.adjoint() * r.c)(0, 0).real() + quad.real();
    return r;
}

} // namespace

void HermiteTarget::validate() const {
    if (n < 1 || d < 1) throw InputError("HermiteTarget: n, d must be >= 1");
    if (static_cast<int>(orbitals.size()) != n)
        throw InputError("HermiteTarget: need exactly n orbital multi-indices");
    for (const auto& k : orbitals) {
        if (static_cast<int>(k.size()) != d)
            throw InputError("HermiteTarget: multi-index dimension mismatch");
        for (int v : k) {
            if (v < 0) throw InputError("HermiteTarget: negative orbital index");
            if (v > kMaxHermiteOrder)
                throw CapabilityError("HermiteTarget: orbital order capped at " +
                                      std::to_string(kMaxHermiteOrder));
        }
    }
    for (std::size_t i = 0; i < orbitals.size(); ++i)
        for (std::size_t j = i + 1; j < orbitals.size(); ++j)
            if (orbitals[i] == orbitals[j])
                throw InputError("HermiteTarget: orbital multi-indices must be distinct");
    if (window && !(window->halfwidth > 0.0))
        throw InputError("HermiteTarget: window halfwidth must be positive");
    if (window && window->center.size() != d)
        throw InputError("HermiteTarget: window center dimension mismatch");
}

double hermite_value(int k, double y) {
    if (k < 0) throw InputError("hermite_value: k must be >= 0");
    if (k > kMaxHermiteOrder)
        throw CapabilityError("hermite_value: capped at k <= " + std::to_string(kMaxHermiteOrder));
    double prev = 1.0; // h_0
    if (k == 0) return prev;
    double cur = y; // h_1
    for (int j = 1; j < k; ++j) {
        const double next = (y * cur - std::sqrt(static_cast<double>(j)) * prev) /
                            std::sqrt(static_cast<double>(j + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

Complex hermite_orbital_overlap(int k, double w) {
    if (k < 0) throw InputError("hermite_orbital_overlap: k must be >= 0");
    if (k > kMaxHermiteOrder)
        throw CapabilityError("hermite_orbital_overlap: capped at k <= " +
                              std::to_string(kMaxHermiteOrder));
    const Complex iw(0.0, w);
    Complex p = 1.0;
    for (int j = 0; j < k; ++j) p *= iw;
    return p * std::exp(-0.5 * w * w) / std::sqrt(factorial(k));
}

std::vector<std::vector<int>> ground_state_orbitals(int n, int d) {
    if (n < 1 || d < 1) throw InputError("ground_state_orbitals: n, d must be >= 1");
    std::vector<std::vector<int>> out;
    for (int deg = 0; static_cast<int>(out.size()) < n; ++deg) {
        // all multi-indices of total degree deg, in colex order
        std::vector<std::vector<int>> shell;
        std::vector<int> idx(d, 0);
        std::function<void(int, int)> gen = [&](int axis, int remaining) {
            if (axis == d - 1) {
                idx[axis] = remaining;
                shell.push_back(idx);
                return;
            }
            for (int v = 0; v <= remaining; ++v) {
                idx[axis] = v;
                gen(axis + 1, remaining - v);
            }
        };
        gen(0, deg);
        std::sort(shell.begin(), shell.end(), colex_less);
        for (auto& k : shell) {
            if (static_cast<int>(out.size()) == n) break;
            out.push_back(std::move(k));
        }
    }
    return out;
}

double target_eval(const HermiteTarget& t, const Configuration& x) {
    t.validate();
    if (x.n() != t.n || x.d() != t.d) throw InputError("target_eval: shape mismatch");
    if (t.window) {
        for (int i = 0; i < t.n; ++i)
            if ((x.x.row(i).transpose() - t.window->center).lpNorm<Eigen::Infinity>() >
                t.window->halfwidth)
                return 0.0;
    }
    const int n = t.n;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = 1.0;
            for (int ax = 0; ax < t.d; ++ax) v *= hermite_value(t.orbitals[j][ax], x.x(i, ax));
            m(i, j) = v;
        }
    return m.partialPivLu().determinant() / std::sqrt(factorial(n));
}

Complex slater_vs_hermite_inner(const SlaterSum& a, const HermiteTarget& t) {
    t.validate();
    a.validate();
    if (t.window)
        throw InputError("slater_vs_hermite_inner: windowed targets need the Monte Carlo path");
    if (a.n() != t.n || a.d() != t.d) throw InputError("slater_vs_hermite_inner: shape mismatch");
    const int n = t.n;
    Complex acc = 0.0;
    for (const auto& term : a.terms) {
        Eigen::MatrixXcd g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex v = 1.0;
                for (int ax = 0; ax < t.d; ++ax)
                    v *= std::conj(hermite_orbital_overlap(t.orbitals[j][ax], term.w.rows(i, ax)));
                g(i, j) = v;
            }
        acc += std::conj(term.coeff) * g.partialPivLu().determinant();
    }
    return acc;
}

FitTarget make_fit_target(const HermiteTarget& t, const TrainConfig& cfg) {
    t.validate();
    FitTarget ft;
    ft.n = t.n;
    ft.d = t.d;
    if (!t.window) {
        ft.norm_sq = 1.0; // orthonormal orbitals
        ft.scale = 1.0;
        HermiteTarget copy = t;
        ft.overlap = [copy](const WaveMatrix& w) {
            SlaterSum s;
            s.terms.push_back({Complex(1.0, 0.0), w});
            return slater_vs_hermite_inner(s, copy);
        };
        ft.eval = [copy](const Configuration& x) { return target_eval(copy, x); };
        return ft;
    }
    // Windowed: estimate the norm on the fitting sample pool and normalize.
    HermiteTarget copy = t;
    const std::uint64_t norm_seed = cfg.seed ^ 0x6e6f726dull;
    double sum_sq = 0.0;
    const int samples = std::max(cfg.fit_samples * 4, 4096);
    for (int i = 0; i < samples; ++i) {
        const double v = target_eval(copy, mc_sample_point(t.n, t.d, norm_seed, i));
        sum_sq += v * v;
    }
    const double norm = std::sqrt(sum_sq / samples);
    if (!(norm > 0.0)) throw NumericalError("make_fit_target: windowed target vanished on the pool");
    ft.norm_sq = 1.0;
    ft.scale = norm;
    ft.eval = [copy, norm](const Configuration& x) { return target_eval(copy, x) / norm; };
    return ft;
}

FitTarget make_fit_target(const SlaterSum& target) {
    target.validate();
    FitTarget ft;
    ft.n = target.n();
    ft.d = target.d();
    ft.norm_sq = take_real(slater_sum_inner(target, target), "make_fit_target: |psi|^2");
    ft.scale = 1.0;
    SlaterSum copy = target;
    ft.overlap = [copy](const WaveMatrix& w) {
        Complex acc = 0.0;
        for (const auto& term : copy.terms) acc += term.coeff * slater_overlap(w, term.w);
        return acc;
    };
    ft.eval = [copy](const Configuration& x) {
        return slater_sum_eval(copy, x).real();
    };
    return ft;
}

namespace {

/// Shared state of one fitting run over the wavevector matrix W (m x nd).
class FitProblem {
public:
    FitProblem(const FitTarget& target, int m, const TrainConfig& cfg)
        : target_(target), m_(m), nd_(target.n * target.d), cfg_(cfg) {
        if (!target_.overlap) {
            samples_.reserve(cfg.fit_samples);
            values_.resize(cfg.fit_samples);
            const std::uint64_t s = cfg.seed ^ 0x666974ull;
            for (int i = 0; i < cfg.fit_samples; ++i) {
                samples_.push_back(mc_sample_point(target.n, target.d, s, i));
                values_(i) = target_.eval(samples_.back());
            }
        }
    }

    bool sampled() const { return !target_.overlap; }

    /// Objective value, optimal coefficients, and (optionally) the envelope
    /// gradient with respect to the entries of W.
    double evaluate(const Eigen::MatrixXd& W, Eigen::VectorXcd& coeffs,
                    Eigen::MatrixXd* grad) const {
        return sampled() ? eval_sampled(W, coeffs, grad) : eval_analytic(W, coeffs, grad);
    }

    /// Fresh-sample Monte Carlo estimate of the squared error (sampled path).
    double holdout_error_sq(const Eigen::MatrixXd& W, const Eigen::VectorXcd& coeffs) const {
        const std::uint64_t s = cfg_.seed ^ 0x686f6c64ull;
        const int count = cfg_.fit_samples;
        double acc = 0.0;
        for (int i = 0; i < count; ++i) {
            const Configuration x = mc_sample_point(target_.n, target_.d, s, i);
            Complex value = 0.0;
            for (int j = 0; j < m_; ++j)
                value += coeffs(j) *
                         evaluate_planewave_slater(row_wave(W, j), x);
            acc += std::norm(value - target_.eval(x));
        }
        return acc / count;
    }

    WaveMatrix row_wave(const Eigen::MatrixXd& W, int j) const {
        return WaveMatrix::from_flat(W.row(j).transpose(), target_.n, target_.d);
    }

private:
    double eval_analytic(const Eigen::MatrixXd& W, Eigen::VectorXcd& coeffs,
                         Eigen::MatrixXd* grad) const {
        Eigen::MatrixXcd gram(m_, m_);
        Eigen::VectorXcd h(m_);
        std::vector<WaveMatrix> waves;
        waves.reserve(m_);
        for (int j = 0; j < m_; ++j) waves.push_back(row_wave(W, j));
        for (int j = 0; j < m_; ++j) {
            for (int k = 0; k <= j; ++k) {
                const double o = slater_overlap(waves[j], waves[k]);
                gram(j, k) = o;
                gram(k, j) = o;
            }
            h(j) = target_.overlap(waves[j]);
        }
        const SolveResult sol = solve_coefficients(gram, h, target_.norm_sq);
        coeffs = sol.c;
        if (grad) {
            // Envelope gradient by central differences on the affected
            // Gram column and target overlap only.
            grad->setZero(m_, nd_);
            constexpr double delta = 1e-5;
            for (int j = 0; j < m_; ++j) {
                for (int p = 0; p < nd_; ++p) {
                    Eigen::VectorXd flat = W.row(j).transpose();
                    flat(p) += delta;
                    const WaveMatrix wp = WaveMatrix::from_flat(flat, target_.n, target_.d);
                    flat(p) -= 2.0 * delta;
                    const WaveMatrix wm = WaveMatrix::from_flat(flat, target_.n, target_.d);
                    double acc = 0.0;
                    for (int k = 0; k < m_; ++k) {
                        const double dg =
                            (slater_overlap(wp, waves[k]) - slater_overlap(wm, waves[k])) /
                            (2.0 * delta);
                        // d(c^H G c): column j and (by symmetry) row j
                        double cross = 2.0 * (std::conj(coeffs(j)) * coeffs(k)).real();
                        if (k == j) cross = 2.0 * std::norm(coeffs(j));
                        acc += cross * dg;
                    }
                    const Complex dh =
                        (target_.overlap(wp) - target_.overlap(wm)) / (2.0 * delta);
                    acc -= 2.0 * (std::conj(coeffs(j)) * dh).real();
                    (*grad)(j, p) = acc;
                }
            }
        }
        return sol.objective;
    }

    double eval_sampled(const Eigen::MatrixXd& W, Eigen::VectorXcd& coeffs,
                        Eigen::MatrixXd* grad) const {
        const int B = static_cast<int>(samples_.size());
        Eigen::MatrixXcd phi(B, m_);
        std::vector<Eigen::MatrixXcd> phi_grads; // per column: B x nd
        if (grad) phi_grads.assign(m_, Eigen::MatrixXcd(B, nd_));
        for (int j = 0; j < m_; ++j) {
            const WaveMatrix wj = row_wave(W, j);
            for (int s = 0; s < B; ++s) {
                if (grad) {
                    Complex value;
                    Eigen::VectorXcd g;
                    slater_value_and_grad(wj, samples_[s], value, g);
                    phi(s, j) = value;
                    phi_grads[j].row(s) = g.transpose();
                } else {
                    phi(s, j) = evaluate_planewave_slater(wj, samples_[s]);
                }
            }
        }
        const double invB = 1.0 / B;
        const Eigen::MatrixXcd gram = (phi.adjoint() * phi) * invB;
        const Eigen::VectorXcd h = (phi.adjoint() * values_.cast<Complex>()) * invB;
        const double norm_sq = values_.squaredNorm() * invB;
        const SolveResult sol = solve_coefficients(gram, h, norm_sq);
        coeffs = sol.c;
        if (grad) {
            grad->setZero(m_, nd_);
            const Eigen::VectorXcd resid = phi * coeffs - values_.cast<Complex>();
            for (int j = 0; j < m_; ++j) {
                // d obj / d theta = (2/B) Re( conj(c_j) dphi_j^H r )
                const Eigen::VectorXcd contrib =
                    phi_grads[j].adjoint() * resid * (2.0 * invB);
                for (int p = 0; p < nd_; ++p)
                    (*grad)(j, p) = (std::conj(contrib(p)) * coeffs(j)).real();
            }
        }
        return sol.objective;
    }

    const FitTarget& target_;
    int m_;
    int nd_;
    TrainConfig cfg_;
    std::vector<Configuration> samples_;
    Eigen::VectorXd values_;
};

} // namespace

FitResult fit_slater_sum(const FitTarget& target, int m, const TrainConfig& cfg,
                         const SlaterSum* init) {
    if (m < 1) throw InputError("fit_slater_sum: m must be >= 1");
    const int nd = target.n * target.d;
    FitProblem problem(target, m, cfg);

    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_W;
    Eigen::VectorXcd best_c;

    const int restarts = std::max(1, cfg.restarts) + (init ? 1 : 0);
    for (int restart = 0; restart < restarts; ++restart) {
        Eigen::MatrixXd W(m, nd);
        if (init && restart == restarts - 1) {
            for (int j = 0; j < m; ++j) {
                if (j < static_cast<int>(init->terms.size()))
                    W.row(j) = init->terms[j].w.flat().transpose();
                else
                    for (int p = 0; p < nd; ++p)
                        W(j, p) = 0.05 * rng::normal(cfg.seed + 77, 31, j * nd + p);
            }
        } else {
            const double scale = 0.25 * (1 << (restart % 3)); // 0.25, 0.5, 1.0
            for (int j = 0; j < m; ++j)
                for (int p = 0; p < nd; ++p)
                    W(j, p) = scale * rng::normal(cfg.seed + restart, 30, j * nd + p);
        }

        Eigen::VectorXcd coeffs;
        Eigen::MatrixXd grad(m, nd), vel = Eigen::MatrixXd::Zero(m, nd);
        constexpr double kMomentum = 0.9;
        double run_best = std::numeric_limits<double>::infinity();
        Eigen::MatrixXd run_best_W = W;
        Eigen::VectorXcd run_best_c;
        for (int step = 0; step < cfg.fit_steps; ++step) {
            const double obj = problem.evaluate(W, coeffs, &grad);
            if (!std::isfinite(obj))
                throw TrainingError("fit_slater_sum: non-finite objective at step " +
                                    std::to_string(step));
            if (obj < run_best) {
                run_best = obj;
                run_best_W = W;
                run_best_c = coeffs;
            }
            const double progress = static_cast<double>(step) / cfg.fit_steps;
            const double lr = cfg.learning_rate *
                              (0.505 + 0.495 * std::cos(3.14159265358979 * progress));
            vel = kMomentum * vel - lr * grad;
            W += vel;
        }
        const double final_obj = problem.evaluate(W, coeffs, nullptr);
        if (final_obj < run_best) {
            run_best = final_obj;
            run_best_W = W;
            run_best_c = coeffs;
        }
        if (run_best < best_obj) {
            best_obj = run_best;
            best_W = run_best_W;
            best_c = run_best_c;
        }
    }

    FitResult result;
    for (int j = 0; j < m; ++j)
        result.sum.terms.push_back({best_c(j), problem.row_wave(best_W, j)});
    double err_sq = std::max(0.0, best_obj);
    if (problem.sampled())
        err_sq = std::max(0.0, problem.holdout_error_sq(best_W, best_c));
    result.error = std::sqrt(err_sq);
    return result;
}

FitResult fit_slater_sum(const HermiteTarget& t, int m, const TrainConfig& cfg) {
    const FitTarget ft = make_fit_target(t, cfg);
    return fit_slater_sum(ft, m, cfg);
}

std::vector<ScatterRow> theorem_scatter(const std::vector<HermiteTarget>& targets, int m,
                                        const TrainConfig& cfg) {
    if (targets.empty()) throw InputError("theorem_scatter: empty target list");
    std::vector<ScatterRow> rows;
    rows.reserve(targets.size());
    for (const auto& t : targets) {
        ScatterRow row;
        if (t.window) {
            row.window_center = t.window->center(0);
            row.window_halfwidth = t.window->halfwidth;
            std::ostringstream os;
            os << "box(c=" << t.window->center.transpose() << ",h=" << t.window->halfwidth << ")";
            row.window_descriptor = os.str();
        } else {
            row.window_descriptor = "none";
            row.window_halfwidth = std::numeric_limits<double>::infinity();
        }
        try {
            const FitTarget ft = make_fit_target(t, cfg);
            const AbNormResult ab = estimate_ab_norm(ft.eval, t.n, t.d, cfg);
            row.ab_norm_estimate = ab.estimate;
            row.epsilon_achieved = ab.residual;
            row.opacity = std::pow(std::clamp(1.0 - ab.residual, 0.0, 1.0), 10.0);

            // Seed one restart with the theorem's own construction: Maurey
            // draws from the trained network's measure.
            const SlaterSum* init_ptr = nullptr;
            SlaterSum init;
            try {
                ComplexMeasureSpec mu;
                mu.base = canonicalize(network_as_measure(ab.net), CanonicalNorm::LInf);
                mu.gamma = 0.5 / std::sqrt(static_cast<double>(t.d));
                init = maurey_sample(mu, m, cfg.seed + 5);
                init_ptr = &init;
            } catch (const InputError&) {
                // degenerate network atoms; plain restarts only
            }
            const FitResult fit = fit_slater_sum(ft, m, cfg, init_ptr);
            row.slater_fit_error = fit.error;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace asb
