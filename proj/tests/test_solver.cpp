#include "doctest.h"
#include <set>

#include <cmath>

#include "altphillips/energy.hpp"
#include "altphillips/profile1d.hpp"
#include "altphillips/solver.hpp"

using namespace ap;

namespace {

ScalarField bc_phi_right(const Grid& g, const PotentialParams& p) {
    auto b = ScalarField::zeros(g);
    b.values[g.idx(g.nx() - 1)] = exact_phi(p, 1.0);
    return b;
}

}  // namespace

TEST_CASE("solver: 1D free boundary problem recovers phi") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(1000);
    auto [u, rep] = minimize_J(g, p, bc_phi_right(g, p));
    CHECK(rep.converged);

    double max_err = 0.0;
    for (int i = 0; i < g.nx(); ++i)
        max_err = std::max(max_err, std::fabs(u.values[i] - exact_phi(p, g.pos(i)[0])));
    CHECK(max_err <= 5e-3);

    // dead set is exactly the left endpoint
    CHECK(u.values[0] == 0.0);
    for (int i = 1; i < g.nx(); ++i) CHECK(u.values[i] > 0.0);
}

TEST_CASE("solver: zero boundary data gives the zero minimizer") {
    auto p = make_params(1.5);
    auto g = make_grid_1d(64);
    auto [u, rep] = minimize_J(g, p, ScalarField::zeros(g));
    for (double v : u.values) CHECK(v == 0.0);
    CHECK(rep.dead_fraction == 1.0);
    CHECK(rep.energy_trace.back() == 0.0);
}

TEST_CASE("solver: large positive boundary data keeps every node alive") {
    auto p = make_params(1.0);
    auto g = make_grid_2d(32);
    auto b = ScalarField::zeros(g);
    for (std::size_t k = 0; k < b.values.size(); ++k) b.values[k] = 1.5;
    auto [u, rep] = minimize_J(g, p, b);
    CHECK(rep.dead_fraction == 0.0);
    for (double v : u.values) CHECK(v > 0.0);
}

TEST_CASE("solver: monotone descent within stages") {
    auto p = make_params(1.9);
    auto g = make_grid_2d(24);
    auto b = ScalarField::zeros(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.on_outer_layer(i, j))
                b.values[g.idx(i, j)] = exact_phi(p, g.pos(i, j)[0]);
    auto [u, rep] = minimize_J(g, p, b);
    std::set<int> starts(rep.stage_breaks.begin(), rep.stage_breaks.end());
    for (std::size_t t = 1; t < rep.energy_trace.size(); ++t)
        if (!starts.count(static_cast<int>(t)))
            CHECK(rep.energy_trace[t] <= rep.energy_trace[t - 1] * (1.0 + 1e-12) + 1e-15);
}

TEST_CASE("solver: exact zeros and a positive floor, nothing in between") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(500);
    auto [u, rep] = minimize_J(g, p, bc_phi_right(g, p));
    const double A = g.h * g.h * p.gamma * p.c_gamma / 2.0;
    const double floor = std::pow(A / 2.0, 1.0 / (p.gamma + 2.0));
    for (double v : u.values) {
        const bool ok = v == 0.0 || v >= 0.5 * floor;
        CHECK(ok);
    }
}

TEST_CASE("solver: single-node perturbations do not lower the energy") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(200);
    auto [u, rep] = minimize_J(g, p, bc_phi_right(g, p));
    auto all = IndicatorField::all(g);
    // optimality is with respect to the objective the sweeps descend
    const double base = eval_J_plain(u, p, all).total;
    for (int i : {1, 7, 50, 120, 198}) {
        for (double dv : {g.h * g.h, -g.h * g.h}) {
            auto w = u;
            w.values[i] = std::max(0.0, w.values[i] + dv);
            CHECK(eval_J_plain(w, p, all).total >= base - 1e-12);
        }
        auto w = u;
        w.values[i] = 0.0;
        CHECK(eval_J_plain(w, p, all).total >= base - 1e-12);
    }
}

TEST_CASE("solver: discrete Euler-Lagrange residual on the positive set") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(1000);
    SolverOptions tight;
    tight.energy_tol = 1e-15;  // per-node residual needs a converged sweep
    tight.max_sweeps = 3000;
    auto [u, rep] = minimize_J(g, p, bc_phi_right(g, p), tight);
    for (int i = 1; i + 1 < g.nx(); ++i) {
        if (g.pos(i)[0] < 0.1) continue;  // skip the singular layer
        const double lap = (u.values[i - 1] + u.values[i + 1] - 2.0 * u.values[i]) / (g.h * g.h);
        const double res = 2.0 * lap - eval_Wprime(p, u.values[i]);
        CHECK(std::fabs(res) <= 10.0 * g.h);
    }
}

TEST_CASE("solver: red-black ordering lands on the same minimizer") {
    auto p = make_params(1.5);
    auto g = make_grid_1d(200);
    SolverOptions rb;
    rb.ordering = Ordering::red_black;
    auto [ul, _a] = minimize_J(g, p, bc_phi_right(g, p));
    auto [ur, _b] = minimize_J(g, p, bc_phi_right(g, p), rb);
    for (int i = 0; i < g.nx(); ++i)
        CHECK(std::fabs(ul.values[i] - ur.values[i]) <= 1e-5);
}

TEST_CASE("solver: rejects bad boundary data and bad schedules") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(16);
    auto b = ScalarField::zeros(g);
    b.values[g.nx() - 1] = -0.1;
    CHECK_THROWS_AS(minimize_J(g, p, b), std::invalid_argument);
    SolverOptions bad;
    bad.delta_schedule = {1e-3, 1e-2, 0.0};
    CHECK_THROWS_AS(minimize_J(g, p, ScalarField::zeros(g), bad), std::invalid_argument);
    SolverOptions nozero;
    nozero.delta_schedule = {1e-3, 1e-4};
    CHECK_THROWS_AS(minimize_J(g, p, ScalarField::zeros(g), nozero), std::invalid_argument);
}

TEST_CASE("certify_growth: closed form saturates, degenerate inputs handled") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(1000);
    auto u = ScalarField::zeros(g);
    for (int i = 0; i < g.nx(); ++i) u.values[i] = exact_phi(p, g.pos(i)[0] - 0.5);
    const double C = certify_growth(u, p, {500, 0});
    CHECK(C == doctest::Approx(p.c_star).epsilon(0.01));

    CHECK(certify_growth(ScalarField::zeros(g), p, {500, 0}) == 0.0);
    CHECK_THROWS_AS(certify_growth(u, p, {400, 0}), std::invalid_argument);  // interior dead node
}

TEST_CASE("certify_growth: solver outputs stay in a fixed band across gamma") {
    double lo = 1e300, hi = 0.0;
    for (double gam : {1.0, 1.5, 1.9}) {
        auto p = make_params(gam);
        auto g = make_grid_1d(400);
        auto [u, rep] = minimize_J(g, p, bc_phi_right(g, p));
        int i0 = -1;
        for (int i = 0; i + 1 < g.nx(); ++i)
            if (u.values[i] == 0.0 && u.values[i + 1] > 0.0) i0 = i;
        REQUIRE(i0 >= 0);
        const double C = certify_growth(u, p, {i0, 0});
        lo = std::min(lo, C);
        hi = std::max(hi, C);
    }
    CHECK(hi > 0.0);
    CHECK(hi / lo < 10.0);  // no blow-up as gamma -> 2
}
