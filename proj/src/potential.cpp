#include "altphillips/potential.hpp"

#include <cmath>

#include "altphillips/quadrature.hpp"

namespace ap {

PotentialParams make_params(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 2.0))
        throw std::domain_error("make_params: gamma must lie in (0,2)");
    PotentialParams p;
    p.gamma = gamma;
    p.c_gamma = (2.0 - gamma) * (2.0 - gamma) / 16.0;
    p.alpha = 2.0 / (2.0 + gamma);
    const double half = 1.0 + gamma / 2.0;
    p.c_star = std::pow(half * half * p.c_gamma, 1.0 / (gamma + 2.0));
    return p;
}

double eval_W(const PotentialParams& p, double u) {
    if (u < 0.0) throw std::domain_error("eval_W: negative density");
    if (u == 0.0) return 0.0;
    return p.c_gamma * std::pow(u, -p.gamma);
}

double eval_Wprime(const PotentialParams& p, double u) {
    if (u <= 0.0) throw std::domain_error("eval_Wprime: undefined at the singularity");
    return -p.gamma * p.c_gamma * std::pow(u, -p.gamma - 1.0);
}

double normalization_integral(const PotentialParams& p) {
    // integrand 2*sqrt(W(s)) = 2*sqrt(c_gamma)*s^(-gamma/2): integrable
    // power singularity at 0, handled by the antiderivative on [0,eps]
    const double eps = 1e-6;
    const double expo = 1.0 - p.gamma / 2.0;
    const double head = 2.0 * std::sqrt(p.c_gamma) * std::pow(eps, expo) / expo;
    const auto f = [&](double s) { return 2.0 * std::sqrt(eval_W(p, s)); };
    return head + integrate(f, eps, 1.0, 1e-13);
}

double phase_transform(const PotentialParams& p, double u) {
    if (u < 0.0) throw std::domain_error("phase_transform: negative density");
    if (u == 0.0) return 0.0;
    return std::pow(u, 1.0 - p.gamma / 2.0);
}

double e_to_j_scale(const PotentialParams& p) {
    return std::pow(p.c_gamma, 1.0 / (p.gamma + 2.0));
}

}  // namespace ap
