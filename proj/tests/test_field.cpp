#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "altphillips/field.hpp"
#include "altphillips/profile1d.hpp"

using namespace ap;

TEST_CASE("grid: shape, indexing, outer layer") {
    auto g1 = make_grid_1d(10);
    CHECK(g1.h == doctest::Approx(0.1));
    CHECK(g1.n_nodes() == 11);
    CHECK(g1.on_outer_layer(0));
    CHECK(g1.on_outer_layer(10));
    CHECK(!g1.on_outer_layer(5));

    auto g2 = make_grid_2d(4);
    CHECK(g2.n_nodes() == 25);
    CHECK(g2.idx(2, 3) == 3 * 5 + 2);
    CHECK(g2.pos(1, 2)[0] == doctest::Approx(0.25));
    CHECK(g2.pos(1, 2)[1] == doctest::Approx(0.5));
    CHECK(g2.on_outer_layer(0, 2));
    CHECK(!g2.on_outer_layer(2, 2));
}

TEST_CASE("ball_mask: coverage cases and area consistency") {
    auto g = make_grid_2d(8);
    CHECK(ball_mask(g, {0.5, 0.5}, 10.0).count() == g.n_nodes());
    CHECK(ball_mask(g, {0.5, 0.5}, 0.4 * g.h).count() == 1);

    auto gf = make_grid_2d(256);
    auto disk = ball_mask(gf, {0.5, 0.5}, 0.25);
    const double area = double(disk.count()) * gf.h * gf.h;
    CHECK(area == doctest::Approx(M_PI / 16.0).epsilon(0.02));
}

TEST_CASE("distance_transform: exact values on model sets") {
    auto g = make_grid_2d(32);
    auto s = IndicatorField::none(g);
    s.member[g.idx(8, 12)] = 1;
    auto d = distance_transform(s);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double ex = g.h * std::hypot(double(i - 8), double(j - 12));
            CHECK(d.dist[g.idx(i, j)] == doctest::Approx(ex).epsilon(1e-12));
        }

    auto half = IndicatorField::none(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.pos(i, j)[0] <= 0.5) half.member[g.idx(i, j)] = 1;
    auto dh = distance_transform(half);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const double ex = std::max(0.0, g.pos(i, j)[0] - 0.5);
            CHECK(std::fabs(dh.dist[g.idx(i, j)] - ex) <= g.h);
        }

    auto full = distance_transform(IndicatorField::all(g));
    for (double v : full.dist) CHECK(v == 0.0);
    CHECK_THROWS(distance_transform(IndicatorField::none(g)));
}

TEST_CASE("distance_transform: fast pass equals the quadratic scan") {
    std::mt19937 rng(7);
    auto g = make_grid_2d(24);
    for (int trial = 0; trial < 3; ++trial) {
        auto s = IndicatorField::none(g);
        std::uniform_int_distribution<int> pick(0, int(g.n_nodes()) - 1);
        for (int k = 0; k < 10; ++k) s.member[pick(rng)] = 1;
        auto a = distance_transform(s), b = distance_transform_brute(s);
        for (std::size_t k = 0; k < a.dist.size(); ++k)
            CHECK(a.dist[k] == doctest::Approx(b.dist[k]).epsilon(1e-12));
    }
}

TEST_CASE("distance_transform: 1-Lipschitz across neighbors") {
    auto g = make_grid_2d(40);
    auto s = ball_mask(g, {0.3, 0.6}, 0.13);
    auto d = distance_transform(s);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i + 1 < g.nx(); ++i)
            CHECK(std::fabs(d.dist[g.idx(i, j)] - d.dist[g.idx(i + 1, j)]) <= g.h + 1e-12);
    for (int j = 0; j + 1 < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            CHECK(std::fabs(d.dist[g.idx(i, j)] - d.dist[g.idx(i, j + 1)]) <= g.h + 1e-12);
}

TEST_CASE("rescale: identity is bitwise, phi is alpha-homogeneous") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(200);
    auto u = ScalarField::zeros(g);
    for (int i = 0; i < g.nx(); ++i) u.values[i] = exact_phi(p, g.pos(i)[0]);

    auto id = rescale(u, p, {0.0, 0.0}, 1.0);
    for (int i = 0; i < g.nx(); ++i) CHECK(id.values[i] == u.values[i]);

    // even output nodes sample input nodes exactly; odd ones interpolate,
    // with error controlled by h^2 |phi''| away from the singular origin
    auto half = rescale(u, p, {0.0, 0.0}, 0.5);
    for (int i = 0; i < g.nx(); ++i) {
        const double x = half.grid.pos(i)[0];
        const double ex = exact_phi(p, x);
        if (i % 2 == 0)
            CHECK(half.values[i] == doctest::Approx(ex).epsilon(1e-12));
        else if (x >= 0.1)
            CHECK(std::fabs(half.values[i] - ex) < g.h * g.h * std::pow(x, p.alpha - 2.0));
    }
}

TEST_CASE("rescale: composition and out-of-box rejection") {
    auto p = make_params(1.5);
    auto g = make_grid_2d(64);
    auto u = ScalarField::zeros(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            const auto x = g.pos(i, j);
            u.values[g.idx(i, j)] = exact_phi(p, x[0]) + 0.3 * x[1];
        }
    auto a = rescale(rescale(u, p, {0.0, 0.0}, 0.5), p, {0.0, 0.0}, 0.5);
    auto b = rescale(u, p, {0.0, 0.0}, 0.25);
    for (std::size_t k = 0; k < a.values.size(); ++k)
        CHECK(std::fabs(a.values[k] - b.values[k]) <= 2.0 * g.h);
    CHECK_THROWS(rescale(u, p, {0.9, 0.9}, 0.5));
}

TEST_CASE("positivity_set: literal and tolerant thresholds") {
    auto p = make_params(1.0);
    auto g = make_grid_1d(1000);
    auto u = ScalarField::zeros(g);
    for (int i = 0; i < g.nx(); ++i) u.values[i] = exact_phi(p, g.pos(i)[0] - 0.5);

    auto s0 = positivity_set(u, 0.0);
    for (int i = 0; i < g.nx(); ++i)
        CHECK(int(s0.member[i]) == int(g.pos(i)[0] > 0.5));

    CHECK(positivity_set(ScalarField::zeros(g)).count() == 0);

    auto st = positivity_set(u, exact_phi(p, g.h));
    int shift = 0;
    for (int i = 0; i < g.nx(); ++i) shift += int(s0.member[i]) - int(st.member[i]);
    CHECK(shift >= 0);
    CHECK(shift <= 2);
}

TEST_CASE("boundary_cells: bands on model interfaces") {
    auto g = make_grid_2d(128);
    auto half = IndicatorField::none(g);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.pos(i, j)[0] <= 0.5) half.member[g.idx(i, j)] = 1;
    auto band = boundary_cells(half);
    CHECK(band.size() == std::size_t(g.ny()));
    for (const auto& q : band) CHECK(std::fabs(q[0] - 0.5) <= g.h);

    CHECK(boundary_cells(IndicatorField::none(g)).empty());
    CHECK(boundary_cells(IndicatorField::all(g)).empty());

    auto disk = ball_mask(g, {0.5, 0.5}, 0.25);
    const double per = 2.0 * M_PI * 0.25;
    const double count = double(boundary_cells(disk).size());
    CHECK(count > 0.7 * per / g.h);
    CHECK(count < 1.3 * per / g.h);
}

TEST_CASE("hausdorff_distance: model configurations") {
    std::vector<std::array<double, 2>> a, b;
    for (int k = 0; k <= 50; ++k) {
        a.push_back({0.2, k / 50.0});
        b.push_back({0.6, k / 50.0});
    }
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, b) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(hausdorff_distance({{0.0, 0.0}}, {{3.0, 4.0}}) == doctest::Approx(5.0));
    CHECK_THROWS(hausdorff_distance({}, a));
}

TEST_CASE("field files: round trip preserves values exactly") {
    auto p = make_params(1.9);
    auto g = make_grid_2d(16);
    auto u = ScalarField::zeros(g);
    for (std::size_t k = 0; k < u.values.size(); ++k) u.values[k] = exact_phi(p, 0.01 * (k + 1));
    const std::string path = "/tmp/ap_test_field.txt";
    write_field(path, u);
    auto v = read_field(path);
    CHECK(v.grid.dim == 2);
    CHECK(v.grid.nx() == g.nx());
    CHECK(v.grid.h == doctest::Approx(g.h).epsilon(1e-15));
    for (std::size_t k = 0; k < u.values.size(); ++k) CHECK(v.values[k] == u.values[k]);

    auto s = ball_mask(g, {0.5, 0.5}, 0.3);
    write_indicator("/tmp/ap_test_ind.txt", s);
    auto t = read_indicator("/tmp/ap_test_ind.txt");
    for (std::size_t k = 0; k < s.member.size(); ++k) CHECK(t.member[k] == s.member[k]);
    std::remove(path.c_str());
    std::remove("/tmp/ap_test_ind.txt");
}
