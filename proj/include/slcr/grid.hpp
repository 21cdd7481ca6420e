#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace slcr {

struct Rectangle {
    double x0, x1, y0, y1;
};

struct Disc {
    double cx, cy, r;
};

using Shape = std::variant<Rectangle, Disc>;

enum class Dir { E = 0, W = 1, N = 2, S = 3 };

struct Node {
    int i, j;  // lattice index
    double x, y;
};

class GridDomain;
using GridPtr = std::shared_ptr<const GridDomain>;

// Nodes are the lattice points of the shape's bounding box that belong to
// some lattice cell with at least three corners inside the shape. A node is
// interior when all four lattice neighbours are nodes, so every interior
// stencil is the uniform five-point one.
GridPtr build_grid(const Shape& shape, int nx, int ny);

class GridDomain {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const Shape& shape() const { return shape_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double cell_area() const { return hx_ * hy_; }
    double lattice_x(int i) const;
    double lattice_y(int j) const;
    // Bounding-box center; polar angles for the loop start are taken about it.
    std::pair<double, double> center() const;

    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::size_t n) const { return nodes_[n]; }
    std::size_t at(int i, int j) const;
    std::size_t neighbor(std::size_t n, Dir d) const { return nbr_[n][static_cast<int>(d)]; }

    bool is_interior(std::size_t n) const { return loop_pos_[n] == npos; }
    const std::vector<std::size_t>& interior() const { return interior_; }
    // Interior position of a node (index into interior()), npos for boundary nodes.
    std::size_t interior_index(std::size_t n) const { return interior_pos_[n]; }

    const std::vector<std::size_t>& loop() const { return loop_; }
    const std::vector<double>& theta() const { return theta_; }
    std::size_t loop_position(std::size_t n) const { return loop_pos_[n]; }
    double perimeter() const { return perimeter_; }

    const std::vector<std::array<std::size_t, 3>>& triangles() const { return tris_; }
    // Triangles of lattice cell (ci, cj); unused slots hold npos.
    std::array<std::size_t, 2> cell_triangles(int ci, int cj) const;
    // Triangle containing (x, y) and its barycentric weights.
    bool locate(double x, double y, std::size_t& tri, std::array<double, 3>& w) const;

    // Shape-level membership (the exact rectangle or disc, not the lattice hull).
    bool in_shape(double x, double y) const;

private:
    friend GridPtr build_grid(const Shape&, int, int);
    GridDomain() = default;

    Shape shape_{};
    int nx_ = 0, ny_ = 0;
    double hx_ = 0, hy_ = 0, ox_ = 0, oy_ = 0;
    std::vector<Node> nodes_;
    std::vector<std::size_t> lattice_;  // nx*ny -> node or npos
    std::vector<std::array<std::size_t, 4>> nbr_;
    std::vector<std::size_t> interior_, interior_pos_;
    std::vector<std::size_t> loop_, loop_pos_;
    std::vector<double> theta_;
    double perimeter_ = 0;
    std::vector<std::array<std::size_t, 3>> tris_;
    std::vector<std::array<std::size_t, 2>> cell_tris_;
};

struct ScalarField {
    GridPtr grid;
    std::vector<double> values;
    // Empty means every node is valid.
    std::vector<std::uint8_t> valid;

    static ScalarField zeros(GridPtr g);
    static ScalarField sample(GridPtr g, const std::function<double(double, double)>& f);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t n) const { return values[n]; }
    double& operator[](std::size_t n) { return values[n]; }
    bool is_valid(std::size_t n) const { return valid.empty() || valid[n] != 0; }
    // P1 interpolation on the grid triangulation; nullopt outside the hull or
    // when a triangle corner is invalid.
    std::optional<double> interpolate(double x, double y) const;
};

struct BoundaryFunction {
    GridPtr grid;
    std::vector<double> samples;  // one per loop node, in loop order

    static BoundaryFunction trace(const ScalarField& f);
    static BoundaryFunction from_xy(GridPtr g, const std::function<double(double, double)>& f);
    static BoundaryFunction from_theta(GridPtr g, const std::function<double(double)>& f);

    std::size_t size() const { return samples.size(); }
    double operator[](std::size_t k) const { return samples[k]; }
};

std::pair<ScalarField, ScalarField> field_gradient(const ScalarField& f);

std::size_t nearest_node(const GridDomain& g, double x, double y);
// Node closest to the bounding-box centre; the default anchor.
std::size_t center_node(const GridDomain& g);

struct MorseReport {
    bool is_morse = false;
    std::vector<double> maxima, minima;
    int l = 0;
    std::string reason;  // empty, or "flat-segment-detected"
};

struct TransverseReport {
    bool is_transverse = false;
    std::vector<double> increasing_zeros, decreasing_zeros;
    int l = 0;
    std::string reason;  // empty, "tangential-zero" or "flat-segment-detected"
};

MorseReport classify_morse(const BoundaryFunction& phi);
TransverseReport classify_transverse(const BoundaryFunction& w);

// Serialization. JSON envelopes carry {shape, nx, ny, values}; the grid is
// rebuilt from (shape, nx, ny) so a round trip is bit-exact.
nlohmann::json shape_to_json(const Shape& s);
Shape shape_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScalarField& f);
nlohmann::json to_json(const BoundaryFunction& b);
ScalarField field_from_json(const nlohmann::json& j);
BoundaryFunction boundary_from_json(const nlohmann::json& j);
std::string to_csv(const ScalarField& f);
std::string to_csv(const BoundaryFunction& b);

}  // namespace slcr
