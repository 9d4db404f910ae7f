// Python bindings for the Alt-Phillips laboratory. Fields cross the
// boundary as numpy arrays on unit-box grids: shape (n+1,) in 1D,
// (n+1, n+1) in 2D, row-major with index [j, i].

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "altphillips/energy.hpp"
#include "altphillips/field.hpp"
#include "altphillips/gammalab.hpp"
#include "altphillips/potential.hpp"
#include "altphillips/profile1d.hpp"
#include "altphillips/solver.hpp"

namespace py = pybind11;
using namespace ap;

namespace {

Grid grid_from_shape(const py::array& a) {
    if (a.ndim() == 1) return make_grid_1d(int(a.shape(0)) - 1);
    if (a.ndim() == 2) {
        if (a.shape(0) != a.shape(1))
            throw std::invalid_argument("2D fields must be square (unit box)");
        return make_grid_2d(int(a.shape(0)) - 1);
    }
    throw std::invalid_argument("field arrays must be 1D or 2D");
}

ScalarField field_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    auto u = ScalarField::zeros(grid_from_shape(a));
    const double* src = a.data();
    std::copy(src, src + u.values.size(), u.values.begin());
    return u;
}

IndicatorField indicator_from_array(const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
    py::array arr = a;
    auto s = IndicatorField::none(grid_from_shape(arr));
    const bool* src = a.data();
    for (std::size_t k = 0; k < s.member.size(); ++k) s.member[k] = src[k];
    return s;
}

py::array field_to_array(const ScalarField& u) {
    const Grid& g = u.grid;
    if (g.dim == 1) {
        py::array_t<double> out(std::vector<py::ssize_t>{g.nx()});
        std::copy(u.values.begin(), u.values.end(), out.mutable_data());
        return out;
    }
    py::array_t<double> out(std::vector<py::ssize_t>{g.ny(), g.nx()});
    std::copy(u.values.begin(), u.values.end(), out.mutable_data());
    return out;
}

py::dict energy_dict(const EnergyBreakdown& e) {
    py::dict d;
    d["dirichlet"] = e.dirichlet;
    d["potential"] = e.potential;
    d["total"] = e.total;
    return d;
}

SolverOptions options_from(int max_sweeps, double tol, const std::string& ordering,
                           const std::string& seed) {
    SolverOptions o;
    o.max_sweeps = max_sweeps;
    o.energy_tol = tol;
    if (ordering == "red-black") o.ordering = Ordering::red_black;
    else if (ordering != "lex") throw std::invalid_argument("ordering must be lex or red-black");
    if (seed == "flat") o.seed_profile = SeedProfile::flat;
    else if (seed == "dead") o.seed_profile = SeedProfile::dead;
    else if (seed != "distance")
        throw std::invalid_argument("seed must be distance, flat or dead");
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Alt-Phillips free-boundary laboratory";

    py::class_<PotentialParams>(m, "Params")
        .def(py::init(&make_params), py::arg("gamma"))
        .def_readonly("gamma", &PotentialParams::gamma)
        .def_readonly("c_gamma", &PotentialParams::c_gamma)
        .def_readonly("alpha", &PotentialParams::alpha)
        .def_readonly("c_star", &PotentialParams::c_star)
        .def("__repr__", [](const PotentialParams& p) {
            return "Params(gamma=" + std::to_string(p.gamma) + ")";
        });

    m.def("w", &eval_W, py::arg("params"), py::arg("u"));
    m.def("w_prime", &eval_Wprime, py::arg("params"), py::arg("u"));
    m.def("normalization_integral", &normalization_integral, py::arg("params"));
    m.def("phase_transform", &phase_transform, py::arg("params"), py::arg("u"));
    m.def("phi", &exact_phi, py::arg("params"), py::arg("t"));
    m.def("phi_prime", &exact_phi_prime, py::arg("params"), py::arg("t"));
    m.def("phi_inverse", &phi_inverse, py::arg("params"), py::arg("s"));
    m.def("weight_mass", &profile_weight_mass, py::arg("params"), py::arg("t"));

    m.def(
        "barrier",
        [](const std::string& which, const PotentialParams& p, int n, double eps_bar,
           double K, double M, double t_step) {
            Profile1D prof;
            if (which == "lemma1") prof = barrier_lemma1(p, n, eps_bar, t_step);
            else if (which == "lemma2") prof = barrier_lemma2(p, n, K, t_step);
            else if (which == "lemma4") prof = barrier_lemma4(p, n, M, t_step);
            else throw std::invalid_argument("barrier must be lemma1, lemma2 or lemma4");
            py::dict d;
            d["ts"] = py::cast(prof.ts);
            d["vals"] = py::cast(prof.vals);
            d["derivs"] = py::cast(prof.derivs);
            d["margins"] = py::cast(prof.margins);
            d["certified"] = prof.certified;
            d["t_knots"] = py::cast(prof.t_knots);
            d["s_knots"] = py::cast(prof.s_knots);
            return d;
        },
        py::arg("which"), py::arg("params"), py::arg("n") = 2, py::arg("eps_bar") = 1e-4,
        py::arg("K") = 0.0, py::arg("M") = 2.0, py::arg("t_step") = 1e-4);

    m.def(
        "solve",
        [](const PotentialParams& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& boundary,
           int max_sweeps, double tol, const std::string& ordering, const std::string& seed) {
            auto b = field_from_array(boundary);
            auto [u, rep] =
                minimize_J(b.grid, p, b, options_from(max_sweeps, tol, ordering, seed));
            py::dict r;
            r["converged"] = rep.converged;
            r["sweeps_used"] = rep.sweeps_used;
            r["dead_fraction"] = rep.dead_fraction;
            r["energy"] = energy_dict(eval_J(u, p, IndicatorField::all(u.grid)));
            return py::make_tuple(field_to_array(u), r);
        },
        py::arg("params"), py::arg("boundary"), py::arg("max_sweeps") = 2000,
        py::arg("tol") = 1e-10, py::arg("ordering") = "lex", py::arg("seed") = "distance",
        "Minimize J on the unit box; the array supplies Dirichlet data on the outer "
        "node layer. Returns (field, report).");

    m.def(
        "energy",
        [](const PotentialParams& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
            auto u = field_from_array(values);
            return energy_dict(eval_J(u, p, IndicatorField::all(u.grid)));
        },
        py::arg("params"), py::arg("values"));

    m.def(
        "bv_transform",
        [](const PotentialParams& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& values) {
            auto u = field_from_array(values);
            return bv_of_transform(u, p, IndicatorField::all(u.grid));
        },
        py::arg("params"), py::arg("values"));

    m.def(
        "rescale",
        [](const PotentialParams& p, const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
           std::array<double, 2> y0, double lam) {
            return field_to_array(rescale(field_from_array(values), p, y0, lam));
        },
        py::arg("params"), py::arg("values"), py::arg("y0"), py::arg("lam"));

    m.def(
        "density",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
           std::array<int, 2> center, const std::vector<double>& radii) {
            auto rep = density_scan(field_from_array(values), center, radii);
            py::dict d;
            d["center"] = py::cast(rep.center);
            d["radii"] = py::cast(rep.radii);
            d["ratios_positive"] = py::cast(rep.ratios_positive);
            d["ratios_zero"] = py::cast(rep.ratios_zero);
            return d;
        },
        py::arg("values"), py::arg("center"), py::arg("radii"),
        "Node-count density ratios in balls around a free-boundary node (i, j).");

    m.def(
        "certify_growth",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
           const PotentialParams& p, std::array<int, 2> x0) {
            return certify_growth(field_from_array(values), p, x0);
        },
        py::arg("values"), py::arg("params"), py::arg("x0"));

    m.def(
        "growth_slope",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
           const PotentialParams& p, std::array<int, 2> x0, double r_min, double r_max,
           int n_radii) {
            return growth_slope(field_from_array(values), p, x0, r_min, r_max, n_radii);
        },
        py::arg("values"), py::arg("params"), py::arg("x0"), py::arg("r_min"),
        py::arg("r_max"), py::arg("n_radii") = 8);

    m.def(
        "recovery",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
           const py::array_t<bool, py::array::c_style | py::array::forcecast>& member,
           double eps, const PotentialParams& p_k) {
            RecoveryConfig cfg;
            cfg.eps = eps;
            return field_to_array(
                recovery_sequence(field_from_array(values), indicator_from_array(member),
                                  cfg, p_k));
        },
        py::arg("values"), py::arg("member"), py::arg("eps"), py::arg("params"),
        "Lemma-5.3-style element max{phi_k(dist), (u - 2 eps)+} for the pair.");

    m.def(
        "sweep",
        [](const std::string& problem, int n_cells, std::vector<double> gammas, int jobs,
           int max_sweeps, double tol) {
            SweepProblem prob;
            IndicatorField E_ref;
            if (problem == "chord") {
                prob = chord_problem(n_cells);
                E_ref = chord_reference(prob.grid);
            } else if (problem == "half-plane") {
                prob = half_plane_problem(n_cells);
                E_ref = half_plane_reference(prob.grid);
            } else if (problem == "phi-right") {
                prob = phi_right_problem(n_cells);
                E_ref = IndicatorField::none(prob.grid);
                E_ref.member[0] = 1;
            } else {
                throw std::invalid_argument("problem must be chord, half-plane or phi-right");
            }
            auto opts = options_from(max_sweeps, tol, "lex", "distance");
            auto recs = gamma_sweep(prob, std::move(gammas), ScalarField::zeros(prob.grid),
                                    E_ref, opts, jobs);
            py::list out;
            for (const auto& r : recs) {
                py::dict d;
                d["gamma"] = r.gamma;
                d["h"] = r.h;
                d["energy"] = energy_dict(r.energy);
                d["fb_hausdorff_to_reference"] = r.fb_hausdorff_to_reference;
                d["density_min"] = r.density_min;
                d["density_max"] = r.density_max;
                d["transform_l1_gap"] = r.transform_l1_gap;
                out.append(d);
            }
            return out;
        },
        py::arg("problem"), py::arg("n_cells"), py::arg("gammas"), py::arg("jobs") = 1,
        py::arg("max_sweeps") = 2000, py::arg("tol") = 1e-10);
}
