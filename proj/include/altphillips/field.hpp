#pragma once

// Node-centered scalar fields and indicator sets on uniform 1D/2D box
// grids, plus the geometric helpers the experiments need: ball masks,
// exact distance transforms, the alpha-homogeneous rescaling, interface
// extraction and Hausdorff distance, and the text field-file format.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "altphillips/potential.hpp"

namespace ap {

struct Grid {
    int dim = 1;
    std::array<double, 2> origin{0.0, 0.0};
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> n_cells{1, 1};
    double h = 1.0;

    int nx() const { return n_cells[0] + 1; }
    int ny() const { return dim == 2 ? n_cells[1] + 1 : 1; }
    std::size_t n_nodes() const { return static_cast<std::size_t>(nx()) * ny(); }
    std::size_t idx(int i, int j = 0) const { return static_cast<std::size_t>(j) * nx() + i; }
    std::array<double, 2> pos(int i, int j = 0) const {
        return {origin[0] + h * i, dim == 2 ? origin[1] + h * j : 0.0};
    }
    bool on_outer_layer(int i, int j = 0) const {
        if (i == 0 || i == n_cells[0]) return true;
        return dim == 2 && (j == 0 || j == n_cells[1]);
    }
};

// unit-box grids; extent may be overridden, spacing stays uniform
Grid make_grid_1d(int n_cells, double extent = 1.0, double origin = 0.0);
Grid make_grid_2d(int n_cells, double extent = 1.0, std::array<double, 2> origin = {0.0, 0.0});

struct ScalarField {
    Grid grid;
    std::vector<double> values;         // per node, >= 0
    std::vector<std::uint8_t> boundary_mask;  // Dirichlet-fixed nodes

    static ScalarField zeros(const Grid& g);
};

struct IndicatorField {
    Grid grid;
    std::vector<std::uint8_t> member;

    std::size_t count() const;
    static IndicatorField none(const Grid& g);
    static IndicatorField all(const Grid& g);
};

struct DistanceField {
    Grid grid;
    std::vector<double> dist;  // exact Euclidean nodal distance to the set
};

IndicatorField ball_mask(const Grid& g, std::array<double, 2> center, double r);

// Exact Euclidean distance to the nearest member node. Default is the
// two-pass exact transform; the quadratic scan is kept as a small-grid
// cross-check. Throws on an empty set.
DistanceField distance_transform(const IndicatorField& set);
DistanceField distance_transform_brute(const IndicatorField& set);

// u~(x) = u(y0 + lambda x) / lambda^alpha on a unit-box grid with the
// same node counts; bilinear sampling. Throws if the image of the unit
// box leaves u's grid.
ScalarField rescale(const ScalarField& u, const PotentialParams& p,
                    std::array<double, 2> y0, double lambda);

IndicatorField positivity_set(const ScalarField& u, double dead_tol = 0.0);

// member nodes with at least one non-member axis neighbor
std::vector<std::array<double, 2>> boundary_cells(const IndicatorField& set);

// symmetrized max-min distance; throws if either list is empty
double hausdorff_distance(const std::vector<std::array<double, 2>>& a,
                          const std::vector<std::array<double, 2>>& b);

// text format: header "dim n1 [n2] h ox [oy]" (node counts per axis),
// then one node value per line in row-major order, full precision
void write_field(const std::string& path, const ScalarField& u);
ScalarField read_field(const std::string& path);
void write_indicator(const std::string& path, const IndicatorField& set);
IndicatorField read_indicator(const std::string& path);

}  // namespace ap
