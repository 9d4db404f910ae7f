#include "doctest.h"

#include <cmath>

#include "altphillips/potential.hpp"

using namespace ap;

TEST_CASE("params: derived constants at pinned gammas") {
    auto p = make_params(1.0);
    CHECK(p.c_gamma == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(p.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(p.c_star == doctest::Approx(0.52002095576297603).epsilon(1e-14));

    p = make_params(1.5);
    CHECK(p.c_gamma == doctest::Approx(0.015625).epsilon(1e-15));
    CHECK(p.c_star == doctest::Approx(0.41959225558873654).epsilon(1e-14));

    p = make_params(1.95);
    CHECK(p.c_gamma == doctest::Approx(0.00015625).epsilon(1e-13));
    CHECK(p.alpha == doctest::Approx(0.50632911392405063).epsilon(1e-14));
    CHECK(p.c_star == doctest::Approx(0.15348444247846122).epsilon(1e-13));
}

TEST_CASE("params: rejects gamma outside (0,2)") {
    CHECK_THROWS_AS(make_params(0.0), std::domain_error);
    CHECK_THROWS_AS(make_params(2.0), std::domain_error);
    CHECK_THROWS_AS(make_params(-0.5), std::domain_error);
}

TEST_CASE("W: values, indicator at zero, sign of W'") {
    auto p = make_params(1.0);
    CHECK(eval_W(p, 1.0) == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(eval_W(p, 0.25) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(eval_W(p, 0.0) == 0.0);
    CHECK_THROWS_AS(eval_W(p, -1e-9), std::domain_error);
    CHECK(eval_Wprime(p, 0.5) < 0.0);
    CHECK(eval_Wprime(p, 0.5) == doctest::Approx(-0.0625 / 0.25).epsilon(1e-14));
    CHECK_THROWS_AS(eval_Wprime(p, 0.0), std::domain_error);
}

TEST_CASE("normalization: unit transition mass for every gamma") {
    for (double g : {0.25, 0.5, 1.0, 1.5, 1.8, 1.9, 1.95, 1.99}) {
        auto p = make_params(g);
        CHECK(normalization_integral(p) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("phase transform: endpoints and monotonicity") {
    auto p = make_params(1.5);
    CHECK(phase_transform(p, 0.0) == 0.0);
    CHECK(phase_transform(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(phase_transform(p, 0.5) == doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-14));
    CHECK(phase_transform(p, 0.2) < phase_transform(p, 0.4));
}

TEST_CASE("e_to_j scale: c_gamma^(1/(gamma+2)), vanishing as gamma -> 2") {
    auto p1 = make_params(1.0);
    CHECK(e_to_j_scale(p1) == doctest::Approx(std::pow(0.0625, 1.0 / 3.0)).epsilon(1e-14));
    CHECK(e_to_j_scale(make_params(1.99)) < e_to_j_scale(make_params(1.9)));
    CHECK(e_to_j_scale(make_params(1.9)) < e_to_j_scale(make_params(1.0)));
}
