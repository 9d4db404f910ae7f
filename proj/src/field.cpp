#include "altphillips/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ap {

Grid make_grid_1d(int n_cells, double extent, double origin) {
    if (n_cells < 1 || !(extent > 0.0)) throw std::invalid_argument("make_grid_1d: bad shape");
    Grid g;
    g.dim = 1;
    g.origin = {origin, 0.0};
    g.extent = {extent, 0.0};
    g.n_cells = {n_cells, 0};
    g.h = extent / n_cells;
    return g;
}

Grid make_grid_2d(int n_cells, double extent, std::array<double, 2> origin) {
    if (n_cells < 1 || !(extent > 0.0)) throw std::invalid_argument("make_grid_2d: bad shape");
    Grid g;
    g.dim = 2;
    g.origin = origin;
    g.extent = {extent, extent};
    g.n_cells = {n_cells, n_cells};
    g.h = extent / n_cells;
    return g;
}

ScalarField ScalarField::zeros(const Grid& g) {
    ScalarField u;
    u.grid = g;
    u.values.assign(g.n_nodes(), 0.0);
    u.boundary_mask.assign(g.n_nodes(), 0);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.on_outer_layer(i, j)) u.boundary_mask[g.idx(i, j)] = 1;
    return u;
}

std::size_t IndicatorField::count() const {
    std::size_t c = 0;
    for (auto m : member) c += m != 0;
    return c;
}

IndicatorField IndicatorField::none(const Grid& g) {
    IndicatorField s;
    s.grid = g;
    s.member.assign(g.n_nodes(), 0);
    return s;
}

IndicatorField IndicatorField::all(const Grid& g) {
    IndicatorField s;
    s.grid = g;
    s.member.assign(g.n_nodes(), 1);
    return s;
}

IndicatorField ball_mask(const Grid& g, std::array<double, 2> center, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_mask: radius must be positive");
    IndicatorField s = IndicatorField::none(g);
    const double r2 = r * r;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const auto x = g.pos(i, j);
            const double dx = x[0] - center[0];
            const double dy = g.dim == 2 ? x[1] - center[1] : 0.0;
            if (dx * dx + dy * dy <= r2) s.member[g.idx(i, j)] = 1;
        }
    return s;
}

namespace {

constexpr double kFar = 1e20;

// lower envelope of parabolas (Felzenszwalb-Huttenlocher), squared
// distances in index units; f holds per-index source costs
void dt1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        while (s <= z[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * (q - v[k]));
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kFar;
    }
    k = 0;
    d.resize(n);
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

DistanceField distance_transform(const IndicatorField& set) {
    if (set.count() == 0) throw std::invalid_argument("distance_transform: empty set");
    const Grid& g = set.grid;
    DistanceField out;
    out.grid = g;
    out.dist.assign(g.n_nodes(), 0.0);
    const int nx = g.nx(), ny = g.ny();
    std::vector<double> sq(g.n_nodes());

    std::vector<double> f(std::max(nx, ny)), d;
    // pass along x per row
    for (int j = 0; j < ny; ++j) {
        f.resize(nx);
        for (int i = 0; i < nx; ++i) f[i] = set.member[g.idx(i, j)] ? 0.0 : kFar;
        dt1d(f, d);
        for (int i = 0; i < nx; ++i) sq[g.idx(i, j)] = d[i];
    }
    if (g.dim == 2) {
        for (int i = 0; i < nx; ++i) {
            f.resize(ny);
            for (int j = 0; j < ny; ++j) f[j] = sq[g.idx(i, j)];
            dt1d(f, d);
            for (int j = 0; j < ny; ++j) sq[g.idx(i, j)] = d[j];
        }
    }
    for (std::size_t k = 0; k < sq.size(); ++k) out.dist[k] = g.h * std::sqrt(sq[k]);
    return out;
}

DistanceField distance_transform_brute(const IndicatorField& set) {
    if (set.count() == 0) throw std::invalid_argument("distance_transform: empty set");
    const Grid& g = set.grid;
    std::vector<std::array<int, 2>> src;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (set.member[g.idx(i, j)]) src.push_back({i, j});
    DistanceField out;
    out.grid = g;
    out.dist.assign(g.n_nodes(), 0.0);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            double best = kFar;
            for (const auto& s : src) {
                const double dx = i - s[0], dy = j - s[1];
                best = std::min(best, dx * dx + dy * dy);
            }
            out.dist[g.idx(i, j)] = g.h * std::sqrt(best);
        }
    return out;
}

ScalarField rescale(const ScalarField& u, const PotentialParams& p,
                    std::array<double, 2> y0, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescale: lambda must be positive");
    const Grid& gin = u.grid;
    Grid gout = gin.dim == 1 ? make_grid_1d(gin.n_cells[0])
                             : make_grid_2d(gin.n_cells[0]);
    ScalarField out = ScalarField::zeros(gout);
    const double scale = std::pow(lambda, p.alpha);

    const auto sample = [&](double x, double y) {
        double tx = (x - gin.origin[0]) / gin.h;
        double ty = gin.dim == 2 ? (y - gin.origin[1]) / gin.h : 0.0;
        const double tol = 1e-9;
        if (tx < -tol || tx > gin.n_cells[0] + tol || ty < -tol ||
            ty > (gin.dim == 2 ? gin.n_cells[1] : 0) + tol)
            throw std::runtime_error("rescale: sample point outside the source grid");
        tx = std::clamp(tx, 0.0, double(gin.n_cells[0]));
        ty = std::clamp(ty, 0.0, double(gin.dim == 2 ? gin.n_cells[1] : 0));
        // snap to nodes so that lattice-aligned sampling reproduces values exactly
        if (std::fabs(tx - std::round(tx)) < 1e-9) tx = std::round(tx);
        if (std::fabs(ty - std::round(ty)) < 1e-9) ty = std::round(ty);
        const int i0 = std::min(static_cast<int>(tx), gin.n_cells[0] - 1);
        const double fx = tx - i0;
        if (gin.dim == 1) {
            return u.values[gin.idx(i0)] * (1.0 - fx) + u.values[gin.idx(i0 + 1)] * fx;
        }
        const int j0 = std::min(static_cast<int>(ty), gin.n_cells[1] - 1);
        const double fy = ty - j0;
        const double v00 = u.values[gin.idx(i0, j0)], v10 = u.values[gin.idx(i0 + 1, j0)];
        const double v01 = u.values[gin.idx(i0, j0 + 1)], v11 = u.values[gin.idx(i0 + 1, j0 + 1)];
        return (v00 * (1.0 - fx) + v10 * fx) * (1.0 - fy) + (v01 * (1.0 - fx) + v11 * fx) * fy;
    };

    for (int j = 0; j < gout.ny(); ++j)
        for (int i = 0; i < gout.nx(); ++i) {
            const auto x = gout.pos(i, j);
            const double v =
                sample(y0[0] + lambda * x[0], gin.dim == 2 ? y0[1] + lambda * x[1] : 0.0);
            out.values[gout.idx(i, j)] = v / scale;
        }
    return out;
}

IndicatorField positivity_set(const ScalarField& u, double dead_tol) {
    IndicatorField s = IndicatorField::none(u.grid);
    for (std::size_t k = 0; k < u.values.size(); ++k) s.member[k] = u.values[k] > dead_tol;
    return s;
}

std::vector<std::array<double, 2>> boundary_cells(const IndicatorField& set) {
    const Grid& g = set.grid;
    std::vector<std::array<double, 2>> out;
    const auto member = [&](int i, int j) {
        if (i < 0 || i >= g.nx() || j < 0 || j >= g.ny()) return true;  // box edge is not interface
        return set.member[g.idx(i, j)] != 0;
    };
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!set.member[g.idx(i, j)]) continue;
            bool edge = !member(i - 1, j) || !member(i + 1, j);
            if (g.dim == 2) edge = edge || !member(i, j - 1) || !member(i, j + 1);
            if (edge) out.push_back(g.pos(i, j));
        }
    return out;
}

double hausdorff_distance(const std::vector<std::array<double, 2>>& a,
                          const std::vector<std::array<double, 2>>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty point set");
    const auto one_sided = [](const std::vector<std::array<double, 2>>& from,
                              const std::vector<std::array<double, 2>>& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::max();
            for (const auto& q : to) {
                const double dx = p[0] - q[0], dy = p[1] - q[1];
                best = std::min(best, dx * dx + dy * dy);
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::sqrt(std::max(one_sided(a, b), one_sided(b, a)));
}

namespace {

void write_header(std::ostream& os, const Grid& g) {
    os.precision(17);
    os << g.dim << ' ' << g.nx();
    if (g.dim == 2) os << ' ' << g.ny();
    os << ' ' << g.h << ' ' << g.origin[0];
    if (g.dim == 2) os << ' ' << g.origin[1];
    os << '\n';
}

Grid read_header(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("field file: missing header");
    std::istringstream hs(line);
    int dim, n1, n2 = 1;
    double h, ox, oy = 0.0;
    hs >> dim >> n1;
    if (dim == 2) hs >> n2;
    hs >> h >> ox;
    if (dim == 2) hs >> oy;
    if (!hs || (dim != 1 && dim != 2) || n1 < 2 || (dim == 2 && n2 < 2) || !(h > 0.0))
        throw std::runtime_error("field file: malformed header");
    Grid g = dim == 1 ? make_grid_1d(n1 - 1, h * (n1 - 1), ox)
                      : make_grid_2d(n1 - 1, h * (n1 - 1), {ox, oy});
    if (dim == 2 && n2 != n1) throw std::runtime_error("field file: non-square 2D grid");
    return g;
}

}  // namespace

void write_field(const std::string& path, const ScalarField& u) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    write_header(os, u.grid);
    for (double v : u.values) os << v << '\n';
}

ScalarField read_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    Grid g = read_header(is);
    ScalarField u = ScalarField::zeros(g);
    for (std::size_t k = 0; k < u.values.size(); ++k)
        if (!(is >> u.values[k])) throw std::runtime_error("read_field: truncated data");
    return u;
}

void write_indicator(const std::string& path, const IndicatorField& set) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_indicator: cannot open " + path);
    write_header(os, set.grid);
    for (auto m : set.member) os << int(m) << '\n';
}

IndicatorField read_indicator(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_indicator: cannot open " + path);
    Grid g = read_header(is);
    IndicatorField s = IndicatorField::none(g);
    int v;
    for (std::size_t k = 0; k < s.member.size(); ++k) {
        if (!(is >> v)) throw std::runtime_error("read_indicator: truncated data");
        s.member[k] = v != 0;
    }
    return s;
}

}  // namespace ap
