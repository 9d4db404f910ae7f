#pragma once

// 1D profiles: the exact homogeneous solution phi(t) = c_star * t^alpha,
// the reduction g(psi) = (psi')^2 with its inversion psi = G^{-1}, and the
// three certified barrier profiles built from explicit perturbations of W.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "altphillips/potential.hpp"

namespace ap {

struct Profile1D {
    std::vector<double> ts;       // increasing abscissas
    std::vector<double> vals;     // psi(t), nondecreasing
    std::vector<double> derivs;   // psi'(t)
    std::vector<double> margins;  // pointwise inequality residual (>= 0 when certified)
    PotentialParams params;
    std::map<std::string, double> t_knots;  // t0, t1, ...
    std::map<std::string, double> s_knots;  // s0, s1, s2, sigma, ...
    bool certified = true;
    std::ptrdiff_t first_violation = -1;  // grid index of the first negative margin
};

// First-order generator g(s) = (psi')^2 as a function of the profile value.
struct GeneratorG {
    std::function<double(double)> g;     // evaluator on [0, s_max]
    std::vector<double> s_grid;          // tabulated samples
    std::vector<double> g_vals;
    double s_max = 1.0;
    std::string closed_form;             // tag for the explicit formulas, empty otherwise

    static GeneratorG from_function(std::function<double(double)> g, double s_max,
                                    std::size_t n_samples = 4096, std::string tag = {});
    // tabulated-only generator; evaluation interpolates linearly
    static GeneratorG from_table(std::vector<double> s, std::vector<double> g);
};

double exact_phi(const PotentialParams& p, double t);
double exact_phi_prime(const PotentialParams& p, double t);
// t such that phi(t) = s, i.e. (s/c_star)^(1/alpha)
double phi_inverse(const PotentialParams& p, double s);

// Recover psi from g by tabulating G(r) = int_0^r g^{-1/2} and inverting
// monotonically. The near-zero part of G is handled with the analytic
// antiderivative of W^{-1/2} (g ~ W there). Throws if g <= 0 strictly
// inside the grid (the profile would stall).
Profile1D psi_from_g(const GeneratorG& gen, const PotentialParams& p, double t_step = 1e-4);

// Supersolution barrier: g = W + eps_bar + C1 * s^(1-gamma/2), C1 = 8n,
// on (0, s0] with C1 s0^(1-gamma/2) = W(s0). Certifies
// 2 psi'' >= 4n psi' + W'(psi), psi(t0) <= 1, psi'(t0) <= sqrt(3*C1).
Profile1D barrier_lemma1(const PotentialParams& p, int n, double eps_bar = 1e-4,
                         double t_step = 1e-4);

// psi(t) of the lemma-3.2 barrier at a single abscissa, inverted to full
// precision (no grid); used to probe the t -> 0 expansion.
double barrier_lemma1_value(const PotentialParams& p, int n, double eps_bar, double t);

// Subsolution barrier psi = phi + K*q(t) for t >= t0 (W(phi(t0)) = 1),
// with q the increasing solution of q'' + 2n q' = -1, q(t0) = 0.
// Certifies 2 psi'' + 4n psi' <= W'(psi) on (t0, 1] and psi(1) >= 2*C0.
// K <= 0 selects the smallest certifying power of two.
Profile1D barrier_lemma2(const PotentialParams& p, int n, double K = 0.0,
                         double t_step = 1e-4);

// Stalling profile: g = W + (-1/2 + Cn*(s^(1-gamma/2) - s1^(1-gamma/2)))
// on [s1, 1], Cn = 8n, with W(s1) = M. psi rises to the zero crossing
// sigma of g and is constant beyond. Certifies the differential
// inequality on (s1, sigma), (1/2) W <= (psi')^2 <= W on {psi <= s0},
// and that the rising arc has length G(sigma) <= 1/4.
// Throws if g has no zero crossing in [s0, s2].
Profile1D barrier_lemma4(const PotentialParams& p, int n, double M, double t_step = 1e-4);

// 1D energy density of phi: omega(t) = 2 sqrt(W(phi(t))) phi'(t).
double profile_weight(const PotentialParams& p, double t);

// cumulative mass int_0^T omega = min(phi(T), 1)^(1-gamma/2), closed form
double profile_weight_mass(const PotentialParams& p, double T);

}  // namespace ap
