#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace biotfs {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Conforming triangulation of the L-shaped domain
/// (0,1)x(0,1) \ [0.5,1)x[0.5,1).
///
/// Cells are counter-clockwise vertex triples. Edges are stored as sorted
/// vertex pairs, ordered lexicographically; an edge is a boundary edge iff
/// it belongs to exactly one cell. A Mesh is immutable after construction
/// and safe to share read-only across threads.
class Mesh {
public:
    /// Structured mesh with h = 1/16 * 2^-level; every grid square is split
    /// by the diagonal from its lower-left to its upper-right corner.
    /// Vertices are ordered lexicographically by (y, x), cells row-major.
    static Mesh build_lshape(int level);

    /// Splits every triangle into 4 congruent children via edge midpoints.
    /// New vertices (midpoints) are appended after the parent vertices in
    /// edge order; h is halved.
    Mesh uniform_refine() const;

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int cell_count() const { return static_cast<int>(cells_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const Vec2& vertex(int v) const { return vertices_[v]; }
    const std::array<int, 3>& cell(int c) const { return cells_[c]; }
    const std::array<int, 2>& edge(int e) const { return edges_[e]; }
    /// Edge opposite local vertex i of the cell.
    const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }

    bool edge_on_boundary(int e) const { return edge_boundary_[e] != 0; }
    bool vertex_on_boundary(int v) const { return vertex_boundary_[v] != 0; }
    int boundary_edge_count() const;

    double h() const { return h_; }
    int level() const { return level_; }

    double cell_area(int c) const;   // signed; positive for valid meshes
    double total_area() const;

    /// Plain-text dump: header "nv nc", vertex lines "x y", cell lines "i j k".
    void write_text(std::ostream& os) const;

private:
    Mesh() = default;
    static Mesh from_cells(std::vector<Vec2> vertices,
                           std::vector<std::array<int, 3>> cells,
                           double h, int level);

    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<std::array<int, 2>> edges_;      // sorted pairs, lexicographic
    std::vector<std::array<int, 3>> cell_edges_;
    std::vector<std::uint8_t> edge_boundary_;
    std::vector<std::uint8_t> vertex_boundary_;
    double h_ = 0.0;
    int level_ = 0;
};

}  // namespace biotfs
