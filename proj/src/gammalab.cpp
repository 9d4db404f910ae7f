#include "altphillips/gammalab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "altphillips/profile1d.hpp"

namespace ap {

namespace {

double pow_dim(double h, int e) {
    double r = 1.0;
    for (int k = 0; k < e; ++k) r *= h;
    return r;
}

double strip_distance(double x, double x_lo, double x_hi) {
    return std::max({0.0, x_lo - x, x - x_hi});
}

bool has_positive_neighbor(const ScalarField& u, int i, int j) {
    const Grid& g = u.grid;
    const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
    for (int q = 0; q < (g.dim == 2 ? 4 : 2); ++q) {
        const int ii = i + di[q], jj = j + dj[q];
        if (ii < 0 || ii >= g.nx() || jj < 0 || jj >= g.ny()) continue;
        if (u.values[g.idx(ii, jj)] > 0.0) return true;
    }
    return false;
}

double half_box_distance(const Grid& g, std::array<double, 2> c) {
    double d = std::min(c[0] - g.origin[0], g.origin[0] + g.extent[0] - c[0]);
    if (g.dim == 2)
        d = std::min({d, c[1] - g.origin[1], g.origin[1] + g.extent[1] - c[1]});
    return 0.5 * d;
}

// dead node with a positive neighbor, nearest to the box center
bool find_fb_node(const ScalarField& u, std::array<int, 2>& out) {
    const Grid& g = u.grid;
    const double cx = g.origin[0] + 0.5 * g.extent[0];
    const double cy = g.dim == 2 ? g.origin[1] + 0.5 * g.extent[1] : 0.0;
    double best = 1e300;
    bool found = false;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (u.values[g.idx(i, j)] != 0.0) continue;
            if (!has_positive_neighbor(u, i, j)) continue;
            const auto x = g.pos(i, j);
            const double d = std::hypot(x[0] - cx, x[1] - cy);
            if (d < best) {
                best = d;
                out = {i, j};
                found = true;
            }
        }
    return found;
}

}  // namespace

SweepProblem chord_problem(int n_cells, double x_lo, double x_hi) {
    SweepProblem prob;
    prob.grid = make_grid_2d(n_cells);
    const Grid g = prob.grid;
    prob.boundary_for = [g, x_lo, x_hi](const PotentialParams& p) {
        auto b = ScalarField::zeros(g);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i)
                if (g.on_outer_layer(i, j))
                    b.values[g.idx(i, j)] = exact_phi(p, strip_distance(g.pos(i, j)[0], x_lo, x_hi));
        return b;
    };
    return prob;
}

IndicatorField chord_reference(const Grid& g, double x_lo, double x_hi) {
    auto s = IndicatorField::none(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double x = g.pos(i, j)[0];
            if (x >= x_lo - 1e-12 && x <= x_hi + 1e-12) s.member[g.idx(i, j)] = 1;
        }
    return s;
}

SweepProblem phi_right_problem(int n_cells) {
    SweepProblem prob;
    prob.grid = make_grid_1d(n_cells);
    const Grid g = prob.grid;
    prob.boundary_for = [g](const PotentialParams& p) {
        auto b = ScalarField::zeros(g);
        b.values[g.idx(g.nx() - 1)] = exact_phi(p, 1.0);
        return b;
    };
    return prob;
}

SweepProblem half_plane_problem(int n_cells) {
    SweepProblem prob;
    prob.grid = make_grid_2d(n_cells);
    const Grid g = prob.grid;
    prob.boundary_for = [g](const PotentialParams& p) {
        auto b = ScalarField::zeros(g);
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i)
                if (g.on_outer_layer(i, j))
                    b.values[g.idx(i, j)] = exact_phi(p, std::max(0.0, g.pos(i, j)[0] - 0.5));
        return b;
    };
    return prob;
}

IndicatorField half_plane_reference(const Grid& g, double x0) {
    auto s = IndicatorField::none(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.pos(i, j)[0] <= x0 + 1e-12) s.member[g.idx(i, j)] = 1;
    return s;
}

DensityReport density_scan(const ScalarField& u, std::array<int, 2> x0,
                           const std::vector<double>& radii) {
    const Grid& g = u.grid;
    const int i0 = x0[0], j0 = g.dim == 2 ? x0[1] : 0;
    if (i0 < 0 || i0 >= g.nx() || j0 < 0 || j0 >= g.ny())
        throw std::invalid_argument("density_scan: node outside grid");
    if (u.values[g.idx(i0, j0)] != 0.0 || !has_positive_neighbor(u, i0, j0))
        throw std::invalid_argument("density_scan: node not on the free boundary");

    DensityReport rep;
    rep.center = g.pos(i0, j0);
    const double rmax = half_box_distance(g, rep.center);
    for (double r : radii) {
        if (!(r > 0.0) || r > rmax + 1e-12)
            throw std::invalid_argument("density_scan: radius too large for the box");
        std::size_t npos = 0, nzero = 0;
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                const auto x = g.pos(i, j);
                const double d = std::hypot(x[0] - rep.center[0], x[1] - rep.center[1]);
                if (d > r + 1e-12) continue;
                (u.values[g.idx(i, j)] > 0.0 ? npos : nzero) += 1;
            }
        const double tot = double(npos + nzero);
        rep.radii.push_back(r);
        rep.ratios_positive.push_back(npos / tot);
        rep.ratios_zero.push_back(nzero / tot);
    }
    return rep;
}

ScalarField recovery_sequence(const ScalarField& u, const IndicatorField& E,
                              const RecoveryConfig& cfg, const PotentialParams& p_k) {
    const Grid& g = u.grid;
    if (!(cfg.eps > 0.0)) throw std::invalid_argument("recovery_sequence: eps must be > 0");
    for (std::size_t k = 0; k < u.values.size(); ++k)
        if (E.member[k] && u.values[k] != 0.0)
            throw std::invalid_argument("recovery_sequence: pair not admissible (u > 0 on E)");

    // one-cell erosion; outside the box counts as member so sets that
    // touch the boundary keep their trace there
    auto eroded = IndicatorField::none(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!E.member[g.idx(i, j)]) continue;
            bool keep = true;
            const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
            for (int q = 0; q < (g.dim == 2 ? 4 : 2); ++q) {
                const int ii = i + di[q], jj = j + dj[q];
                if (ii < 0 || ii >= g.nx() || jj < 0 || jj >= g.ny()) continue;
                if (!E.member[g.idx(ii, jj)]) keep = false;
            }
            if (keep) eroded.member[g.idx(i, j)] = 1;
        }
    if (eroded.count() == 0)
        throw std::invalid_argument("recovery_sequence: set empty after smoothing");

    auto d = distance_transform(eroded);

    std::vector<double> trunc(u.values.size());
    for (std::size_t k = 0; k < u.values.size(); ++k)
        trunc[k] = std::max(0.0, u.values[k] - 2.0 * cfg.eps);

    double collar = 1e300;
    for (std::size_t k = 0; k < trunc.size(); ++k)
        if (trunc[k] > 0.0) collar = std::min(collar, d.dist[k]);
    if (collar < 2.0 * g.h - 1e-12)
        throw std::runtime_error("recovery_sequence: no positive collar (eps too small)");

    auto uk = ScalarField::zeros(g);
    for (std::size_t k = 0; k < uk.values.size(); ++k)
        uk.values[k] = std::max(exact_phi(p_k, d.dist[k]), trunc[k]);
    return uk;
}

std::vector<SweepRecord> gamma_sweep(
    const SweepProblem& problem, std::vector<double> gammas, const ScalarField& u_ref,
    const IndicatorField& E_ref, const SolverOptions& opts, int jobs,
    const std::function<void(const SweepRecord&, const ScalarField&)>& on_solution) {
    const Grid& g = problem.grid;
    if (gammas.empty()) throw std::invalid_argument("gamma_sweep: empty gamma list");
    eval_F(u_ref, E_ref, IndicatorField::all(g));  // reference admissibility

    auto ref_complement = IndicatorField::none(g);
    for (std::size_t k = 0; k < ref_complement.member.size(); ++k)
        ref_complement.member[k] = !E_ref.member[k];
    const auto ref_interface = boundary_cells(ref_complement);
    const double diameter = std::hypot(g.extent[0], g.dim == 2 ? g.extent[1] : 0.0);
    const double hd = pow_dim(g.h, g.dim);
    const auto all = IndicatorField::all(g);

    std::sort(gammas.begin(), gammas.end());
    std::vector<SweepRecord> records(gammas.size());

    std::mutex cb_mtx;
    const bool have_ref_set = E_ref.count() > 0;
    DistanceField ref_dist;
    if (have_ref_set) ref_dist = distance_transform(E_ref);

    const auto run_one = [&](std::size_t q) {
        const double gam = gammas[q];
        try {
            auto p = make_params(gam);
            const auto boundary = problem.boundary_for(p);
            auto [u, rep] = minimize_J(g, p, boundary, opts);
            if (have_ref_set) {
                // multi-start: also descend from phi(dist to the reference
                // dead set) and keep whichever branch lands lower
                auto seed = ScalarField::zeros(g);
                for (std::size_t k = 0; k < seed.values.size(); ++k)
                    seed.values[k] = exact_phi(p, ref_dist.dist[k]);
                SolverOptions seeded = opts;
                seeded.seed_field = &seed;
                auto [u2, rep2] = minimize_J(g, p, boundary, seeded);
                if (eval_J_plain(u2, p, all).total < eval_J_plain(u, p, all).total)
                    u = std::move(u2);
            }
            SweepRecord r;
            r.gamma = gam;
            r.h = g.h;
            r.energy = eval_J(u, p, all);

            const auto fb = boundary_cells(positivity_set(u));
            r.fb_hausdorff_to_reference = (fb.empty() || ref_interface.empty())
                                              ? diameter
                                              : hausdorff_distance(fb, ref_interface);

            r.density_min = 0.0;
            r.density_max = 1.0;
            std::array<int, 2> x0{};
            if (find_fb_node(u, x0)) {
                const double rcap = half_box_distance(g, g.pos(x0[0], x0[1]));
                std::vector<double> radii;
                for (int m = 0; m < 6; ++m) {
                    const double r8 = 8.0 * g.h, rq = 0.25;
                    const double rad = r8 * std::pow(rq / r8, m / 5.0);
                    if (rad <= rcap + 1e-12) radii.push_back(rad);
                }
                if (!radii.empty()) {
                    auto ds = density_scan(u, x0, radii);
                    double lo = 1.0, hi = 0.0;
                    for (std::size_t m = 0; m < ds.radii.size(); ++m) {
                        lo = std::min({lo, ds.ratios_positive[m], ds.ratios_zero[m]});
                        hi = std::max({hi, ds.ratios_positive[m], ds.ratios_zero[m]});
                    }
                    r.density_min = lo;
                    r.density_max = hi;
                }
            }

            double gap = 0.0;
            for (std::size_t k = 0; k < u.values.size(); ++k) {
                const double chi = E_ref.member[k] ? 0.0 : 1.0;
                gap += std::fabs(phase_transform(p, u.values[k]) - chi);
            }
            r.transform_l1_gap = gap * hd;
            records[q] = r;
            if (on_solution) {
                std::lock_guard<std::mutex> lk(cb_mtx);
                on_solution(r, u);
            }
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "gamma_sweep: gamma=" << gam << ": " << e.what();
            throw std::runtime_error(msg.str());
        }
    };

    jobs = std::max(1, std::min<int>(jobs, int(gammas.size())));
    if (jobs == 1) {
        for (std::size_t q = 0; q < gammas.size(); ++q) run_one(q);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex err_mtx;
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (std::size_t q = next.fetch_add(1); q < gammas.size(); q = next.fetch_add(1)) {
                    try {
                        run_one(q);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mtx);
                        if (!err) err = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }
    return records;
}

LscResult lsc_check(const std::vector<std::pair<PotentialParams, ScalarField>>& seq,
                    const ScalarField& u_lim, const IndicatorField& E_lim) {
    if (seq.empty()) throw std::invalid_argument("lsc_check: empty sequence");
    const auto all = IndicatorField::all(u_lim.grid);
    const double F = eval_F(u_lim, E_lim, all).total;
    const std::size_t tail = (seq.size() + 1) / 2;
    double jmin = 1e300;
    for (std::size_t k = seq.size() - tail; k < seq.size(); ++k)
        jmin = std::min(jmin, eval_J(seq[k].second, seq[k].first, all).total);
    LscResult res;
    res.margin = jmin - F;
    res.pass = res.margin >= -0.05 * F;
    return res;
}

double growth_slope(const ScalarField& u, const PotentialParams& p,
                    std::array<int, 2> x0, double r_min, double r_max, int n_radii) {
    const Grid& g = u.grid;
    if (!(r_min > 0.0) || !(r_max > r_min) || n_radii < 2)
        throw std::invalid_argument("growth_slope: bad radius range");
    const auto c = g.pos(x0[0], g.dim == 2 ? x0[1] : 0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int m = 0; m < n_radii; ++m) {
        const double r = r_min * std::pow(r_max / r_min, double(m) / (n_radii - 1));
        const double J = eval_J(u, p, ball_mask(g, c, r)).total;
        if (J <= 0.0) continue;
        const double lx = std::log(r), ly = std::log(J);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::runtime_error("growth_slope: not enough radii with positive energy");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    out.precision(17);
    out << "gamma,h,dirichlet,potential,total,hausdorff,density_min,density_max,l1_gap\n";
    for (const auto& r : records)
        out << r.gamma << ',' << r.h << ',' << r.energy.dirichlet << ',' << r.energy.potential
            << ',' << r.energy.total << ',' << r.fb_hausdorff_to_reference << ',' << r.density_min
            << ',' << r.density_max << ',' << r.transform_l1_gap << '\n';
}

}  // namespace ap
