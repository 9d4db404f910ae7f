#pragma once

// Nonlinear Gauss-Seidel minimization of the discrete J with the u=0
// indicator handled by an exact per-node zero-vs-positive comparison,
// under a decreasing regularization-floor continuation schedule.

#include <utility>
#include <vector>

#include "altphillips/field.hpp"
#include "altphillips/potential.hpp"

namespace ap {

enum class Ordering { lexicographic, red_black };
// distance_profile starts from phi(dist to the zero-data region) (all
// alive), dead starts from u = 0 in the interior (all dead), flat from
// the harmonic extension. The first two bracket the free boundary from
// opposite sides; running both and keeping the lower energy is the
// multi-start mitigation for local minima.
enum class SeedProfile { flat, distance_profile, dead };

struct SolverOptions {
    int max_sweeps = 2000;       // per continuation stage
    double energy_tol = 1e-10;   // relative per-sweep decrease cutoff
    std::vector<double> delta_schedule;  // empty: {1e-2,1e-3,1e-4,0} * phi(h)
    Ordering ordering = Ordering::lexicographic;
    SeedProfile seed_profile = SeedProfile::distance_profile;
    // explicit start state (interior values; overrides seed_profile);
    // caller keeps it alive for the duration of the solve
    const ScalarField* seed_field = nullptr;
};

struct SolveReport {
    std::vector<double> energy_trace;  // plain discrete total after each sweep
    std::vector<int> stage_breaks;     // trace indices where delta switched
    int sweeps_used = 0;
    double dead_fraction = 0.0;
    bool converged = false;
};

// boundary supplies Dirichlet data on the outer node layer (interior
// values ignored). Throws on negative or non-finite data.
std::pair<ScalarField, SolveReport> minimize_J(const Grid& grid, const PotentialParams& p,
                                               const ScalarField& boundary,
                                               const SolverOptions& opts = {});

// smallest C with u(x) <= C |x-x0|^alpha over the half-radius ball
// around the free-boundary node x0 (value 0, a positive neighbor)
double certify_growth(const ScalarField& u, const PotentialParams& p, std::array<int, 2> x0);

}  // namespace ap
