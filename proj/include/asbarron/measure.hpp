#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "asbarron/activation.hpp"
#include "asbarron/planewave.hpp"

namespace asb {

/// One atom (a, b, w) of a discrete Barron measure; w lives in R^{n*d},
/// particle-major.
struct BarronAtom {
    double a = 0.0;
    double b = 0.0;
    Eigen::VectorXd w;
};

struct BarronMeasure {
    int n = 0;
    int d = 0;
    std::vector<BarronAtom> atoms;
    bool canonical = false;

    void validate() const;
};

enum class CanonicalNorm { L1, L2, LInf };

// Hard cap for measure antisymmetrization (atom count multiplies by n!).
constexpr int kMaxMeasureAntisymN = 8;

/// phi(rho) = sum |a| |w|_1.
double phi(const BarronMeasure& rho);

/// phi_tilde(rho) = sum |a| (|w|_1 + |b|).
double phi_tilde(const BarronMeasure& rho);

/// f_rho(x) = sum a sigma(w.x + b).
double evaluate_f_rho(const BarronMeasure& rho, const Configuration& x, Activation act,
                      double gamma = 1.0);

/// Atom-wise rescale to |w|_p = 1; phi and f_rho are invariant.
/// Throws on atoms with w = 0 (constant ridges cannot be canonicalized).
BarronMeasure canonicalize(const BarronMeasure& rho, CanonicalNorm p);

/// rho' = (1/n!) sum_pi rho_pi with atoms ((-1)^pi a/n!, b, pi(w));
/// sqrt(n!) f_{rho'} = AS f_rho pointwise, phi(rho') = phi(rho).
BarronMeasure antisymmetrize_measure(const BarronMeasure& rho);

/// A_{w,b;gamma}: anti-symmetrization of the highpass-ReLU ridge.
struct TruncatedAntiRidge {
    Eigen::VectorXd w; // length n*d
    double b = 0.0;
    double gamma = 0.0;
};

double truncated_antiridge_eval(const TruncatedAntiRidge& t, const Configuration& x);

/// Anti-symmetrized ridge with an arbitrary activation, evaluated via the
/// permutation sum with O(1) incremental updates of w.(pi x).
double antisym_ridge_eval(const Eigen::VectorXd& w, double b, Activation act, double gamma,
                          const Configuration& x);

/// Product-form complex measure mu over (theta, atom) with |theta| >= gamma.
struct ComplexMeasureSpec {
    BarronMeasure base; // must be canonical
    double gamma = 0.0;

    void validate() const;
};

/// ||mu|| = phi(base)/(pi gamma); coincides with the sampling mass when the
/// base is l1-canonical and upper-bounds it otherwise.
double total_variation(const ComplexMeasureSpec& mu);

/// sum |a| / (pi gamma): the exact mass of |mu| used to scale Maurey draws.
double sampling_mass(const ComplexMeasureSpec& mu);

/// Draws m i.i.d. terms from |mu|/||mu||: atom index with probability
/// proportional to |a|, theta = +-gamma/u with u ~ U(0,1]. Term k carries
/// coefficient (mass/m) * (-sign(a_k)) e^{i b_k theta_k} and wavevector
/// theta_k w_k. The expectation at any x is psi_gamma.
SlaterSum maurey_sample(const ComplexMeasureSpec& mu, int m, std::uint64_t seed);

/// psi_gamma(x) = sum_atoms a A_{w,b;gamma}(x); base must be canonical.
double psi_gamma_eval(const BarronMeasure& rho, double gamma, const Configuration& x);

/// Quadrature of (1/2pi) int_{|theta|<gamma} ||a_{theta w}|| / theta^2 dtheta,
/// the infrared truncation error bound for a single canonical direction w.
double infrared_gap_bound(const WaveMatrix& w, double gamma);

/// Same bound summed over the atoms of a canonical measure, weighted by |a|.
double infrared_gap_bound(const BarronMeasure& rho, double gamma);

/// Numeric cross-check of the |mu| mass: integrates the theta density and
/// multiplies by sum |a|.
double total_variation_numeric(const ComplexMeasureSpec& mu);

} // namespace asb
