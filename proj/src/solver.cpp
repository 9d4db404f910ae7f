#include "altphillips/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "altphillips/energy.hpp"
#include "altphillips/profile1d.hpp"

namespace ap {

namespace {

// positive root of d*v - S = A * v^(-gamma-1): increasing concave
// left-hand... the residual g(v) = d*v - S - A*v^(-gamma-1) is increasing
// and concave, so Newton from any point with g <= 0 converges
// monotonically from below
double stationary_root(double d, double S, double A, double gamma) {
    const double m = std::pow(A / d, 1.0 / (gamma + 2.0));
    double v = std::max(S / d, m);
    for (int it = 0; it < 80; ++it) {
        const double pw = std::pow(v, -gamma - 1.0);
        const double g = d * v - S - A * pw;
        const double gp = d + A * (gamma + 1.0) * pw / v;
        const double step = g / gp;
        v -= step;
        if (std::fabs(step) < 1e-15 * v) break;
    }
    return v;
}

struct NodeContext {
    const Grid& g;
    const PotentialParams& p;
    double A;       // h^2 * gamma * c_gamma / 2
    double hd;      // h^dim
    double hd2;     // h^(dim-2)

    explicit NodeContext(const Grid& gg, const PotentialParams& pp) : g(gg), p(pp) {
        A = gg.h * gg.h * pp.gamma * pp.c_gamma / 2.0;
        hd = 1.0;
        for (int k = 0; k < gg.dim; ++k) hd *= gg.h;
        hd2 = hd / (gg.h * gg.h);
    }

    // one-node energy at value v against fixed neighbor sum data
    double node_energy(double v, int deg, double S, double Q) const {
        // sum (v-u_j)^2 = deg*v^2 - 2 S v + Q
        double e = hd2 * (deg * v * v - 2.0 * S * v + Q);
        if (v > 0.0) e += hd * eval_W(p, v);
        return e;
    }
};

}  // namespace

std::pair<ScalarField, SolveReport> minimize_J(const Grid& grid, const PotentialParams& p,
                                               const ScalarField& boundary,
                                               const SolverOptions& opts) {
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            if (grid.on_outer_layer(i, j)) {
                const double b = boundary.values[grid.idx(i, j)];
                if (!std::isfinite(b) || b < 0.0)
                    throw std::invalid_argument("minimize_J: bad boundary data");
            }

    ScalarField u = ScalarField::zeros(grid);
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i)
            if (grid.on_outer_layer(i, j))
                u.values[grid.idx(i, j)] = boundary.values[grid.idx(i, j)];

    // seed the interior (dead mode keeps the zero interior)
    if (opts.seed_field != nullptr) {
        const ScalarField& s = *opts.seed_field;
        if (s.grid.dim != grid.dim || s.values.size() != u.values.size())
            throw std::invalid_argument("minimize_J: seed field grid mismatch");
        for (int j = 0; j < grid.ny(); ++j)
            for (int i = 0; i < grid.nx(); ++i)
                if (!grid.on_outer_layer(i, j))
                    u.values[grid.idx(i, j)] = std::max(0.0, s.values[grid.idx(i, j)]);
    } else if (opts.seed_profile == SeedProfile::distance_profile) {
        auto zero_src = IndicatorField::none(grid);
        bool any = false;
        double bmax = 0.0;
        for (int j = 0; j < grid.ny(); ++j)
            for (int i = 0; i < grid.nx(); ++i)
                if (grid.on_outer_layer(i, j)) {
                    const double b = boundary.values[grid.idx(i, j)];
                    bmax = std::max(bmax, b);
                    if (b == 0.0) {
                        zero_src.member[grid.idx(i, j)] = 1;
                        any = true;
                    }
                }
        if (any) {
            // cap at the boundary maximum so zero data seeds the zero
            // field instead of a metastable positive bump
            auto d = distance_transform(zero_src);
            for (int j = 0; j < grid.ny(); ++j)
                for (int i = 0; i < grid.nx(); ++i)
                    if (!grid.on_outer_layer(i, j))
                        u.values[grid.idx(i, j)] =
                            std::min(exact_phi(p, d.dist[grid.idx(i, j)]), bmax);
        }
    }
    if (opts.seed_field == nullptr && opts.seed_profile == SeedProfile::flat) {
        // rough harmonic extension: plain Laplace sweeps from zero
        for (int sweep = 0; sweep < 100; ++sweep)
            for (int j = 0; j < grid.ny(); ++j)
                for (int i = 0; i < grid.nx(); ++i) {
                    if (grid.on_outer_layer(i, j)) continue;
                    double S = u.values[grid.idx(i - 1, j)] + u.values[grid.idx(i + 1, j)];
                    int deg = 2;
                    if (grid.dim == 2) {
                        S += u.values[grid.idx(i, j - 1)] + u.values[grid.idx(i, j + 1)];
                        deg = 4;
                    }
                    u.values[grid.idx(i, j)] = S / deg;
                }
    }

    NodeContext ctx(grid, p);
    std::vector<double> schedule = opts.delta_schedule;
    if (schedule.empty()) {
        const double scale = exact_phi(p, grid.h);
        schedule = {1e-2 * scale, 1e-3 * scale, 1e-4 * scale, 0.0};
    }
    if (schedule.back() != 0.0)
        throw std::invalid_argument("minimize_J: delta schedule must end at 0");

    SolveReport rep;
    const auto region = IndicatorField::all(grid);

    const auto update_node = [&](int i, int j) {
        const std::size_t k = grid.idx(i, j);
        double S = u.values[grid.idx(i - 1, j)] + u.values[grid.idx(i + 1, j)];
        double Q = u.values[grid.idx(i - 1, j)] * u.values[grid.idx(i - 1, j)] +
                   u.values[grid.idx(i + 1, j)] * u.values[grid.idx(i + 1, j)];
        int deg = 2;
        if (grid.dim == 2) {
            const double s = u.values[grid.idx(i, j - 1)], n = u.values[grid.idx(i, j + 1)];
            S += s + n;
            Q += s * s + n * n;
            deg = 4;
        }
        return std::make_tuple(k, deg, S, Q);
    };

    double delta = schedule.front();
    for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
        delta = schedule[stage];
        if (stage > 0 && schedule[stage] >= schedule[stage - 1])
            throw std::invalid_argument("minimize_J: delta schedule must strictly decrease");
        rep.stage_breaks.push_back(static_cast<int>(rep.energy_trace.size()));
        double prev = -1.0;
        const int jlo = grid.dim == 2 ? 1 : 0;
        const int jhi = grid.dim == 2 ? grid.ny() - 1 : 1;
        for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
            const int npass = opts.ordering == Ordering::red_black ? 2 : 1;
            for (int pass = 0; pass < npass; ++pass)
                for (int j = jlo; j < jhi; ++j)
                    for (int i = 1; i < grid.nx() - 1; ++i) {
                        if (npass == 2 && ((i + j) & 1) != pass) continue;
                        auto [k, deg, S, Q] = update_node(i, j);
                        double root = stationary_root(deg, S, ctx.A, p.gamma);
                        if (root < delta) root = delta;
                        const double e_pos = ctx.node_energy(root, deg, S, Q);
                        const double e_zero = ctx.node_energy(0.0, deg, S, Q);
                        u.values[k] = e_pos < e_zero ? root : 0.0;
                    }
            const double total = eval_J_plain(u, p, region).total;
            rep.energy_trace.push_back(total);
            ++rep.sweeps_used;
            if (prev >= 0.0 && std::fabs(prev - total) <= opts.energy_tol * std::fabs(prev) + 1e-300) {
                rep.converged = true;
                break;
            }
            prev = total;
        }
    }

    std::size_t dead = 0;
    for (double v : u.values) dead += v == 0.0;
    rep.dead_fraction = double(dead) / double(u.values.size());
    return {std::move(u), std::move(rep)};
}

double certify_growth(const ScalarField& u, const PotentialParams& p, std::array<int, 2> x0) {
    const Grid& g = u.grid;
    const int i0 = x0[0], j0 = g.dim == 2 ? x0[1] : 0;
    if (i0 < 0 || i0 >= g.nx() || j0 < 0 || j0 >= g.ny())
        throw std::invalid_argument("certify_growth: node outside grid");
    if (u.values[g.idx(i0, j0)] != 0.0)
        throw std::invalid_argument("certify_growth: node is not dead");
    bool positive_neighbor = false;
    const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
    for (int q = 0; q < (g.dim == 2 ? 4 : 2); ++q) {
        const int ii = i0 + di[q], jj = j0 + dj[q];
        if (ii < 0 || ii >= g.nx() || jj < 0 || jj >= g.ny()) continue;
        if (u.values[g.idx(ii, jj)] > 0.0) positive_neighbor = true;
    }
    if (!positive_neighbor) {
        for (double v : u.values)
            if (v != 0.0)
                throw std::invalid_argument("certify_growth: node is not on the free boundary");
        return 0.0;  // u identically 0: the bound holds with C = 0
    }

    const auto c0 = g.pos(i0, j0);
    double rbox = std::min(c0[0] - g.origin[0], g.origin[0] + g.extent[0] - c0[0]);
    if (g.dim == 2)
        rbox = std::min({rbox, c0[1] - g.origin[1], g.origin[1] + g.extent[1] - c0[1]});
    const double rmax = 0.5 * std::max(rbox, 2.0 * g.h);

    double C = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (i == i0 && j == j0) continue;
            const auto x = g.pos(i, j);
            const double r = std::hypot(x[0] - c0[0], g.dim == 2 ? x[1] - c0[1] : 0.0);
            if (r > rmax) continue;
            C = std::max(C, u.values[g.idx(i, j)] / std::pow(r, p.alpha));
        }
    return C;
}

}  // namespace ap
