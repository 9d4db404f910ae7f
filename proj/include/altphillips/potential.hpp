#pragma once

// Negative-power potential W(u) = c_gamma * u^-gamma on {u>0} and the
// constants derived from gamma. The normalization of c_gamma makes the
// 1D transition mass int_0^1 2*sqrt(W) ds equal to 1 for every gamma.

#include <stdexcept>

namespace ap {

struct PotentialParams {
    double gamma;    // exponent, in (0,2)
    double c_gamma;  // (2-gamma)^2 / 16
    double alpha;    // 2 / (2+gamma), Holder exponent of the 1D solution
    double c_star;   // ((1+gamma/2)^2 * c_gamma)^(1/(gamma+2))
};

// Throws std::domain_error unless 0 < gamma < 2.
PotentialParams make_params(double gamma);

// W(u); exactly 0 at u = 0 (the indicator kills the singularity there).
double eval_W(const PotentialParams& p, double u);

// W'(u) = -gamma * c_gamma * u^(-gamma-1). Refuses u <= 0: callers must
// branch on the dead set explicitly instead of relying on infinities.
double eval_Wprime(const PotentialParams& p, double u);

// int_0^1 2*sqrt(W(s)) ds, analytic on [0,eps] plus adaptive quadrature
// on [eps,1]. Equals 1 for every admissible gamma.
double normalization_integral(const PotentialParams& p);

// u^(1 - gamma/2), the phase variable that tends to an indicator.
double phase_transform(const PotentialParams& p, double u);

// c_gamma^(1/(gamma+2)): scale between minimizers of the raw and the
// rescaled functional. Tends to 0 as gamma -> 2.
double e_to_j_scale(const PotentialParams& p);

}  // namespace ap
