#include "biotfs/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace biotfs {

Mesh Mesh::build_lshape(int level) {
    if (level < 0) throw std::invalid_argument("build_lshape: level must be >= 0");
    const int n = 16 << level;  // squares per unit side
    const double h = 1.0 / n;
    const int half = n / 2;

    // Vertices on the grid, skipping points strictly inside the removed
    // quadrant (x > 0.5 and y > 0.5). Points on x = 0.5 / y = 0.5 stay.
    std::vector<Vec2> vertices;
    std::vector<int> row_offset(n + 2, 0);
    for (int j = 0; j <= n; ++j) {
        row_offset[j] = static_cast<int>(vertices.size());
        const int imax = (j <= half) ? n : half;
        for (int i = 0; i <= imax; ++i)
            vertices.push_back({i * h, j * h});
    }
    row_offset[n + 1] = static_cast<int>(vertices.size());
    auto vid = [&](int i, int j) { return row_offset[j] + i; };

    std::vector<std::array<int, 3>> cells;
    cells.reserve(static_cast<std::size_t>(3) * n * n / 2);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i >= half && j >= half) continue;  // removed quadrant
            const int ll = vid(i, j), lr = vid(i + 1, j);
            const int ul = vid(i, j + 1), ur = vid(i + 1, j + 1);
            cells.push_back({ll, lr, ur});
            cells.push_back({ll, ur, ul});
        }
    }
    return from_cells(std::move(vertices), std::move(cells), h, level);
}

Mesh Mesh::uniform_refine() const {
    std::vector<Vec2> vertices = vertices_;
    vertices.reserve(vertices_.size() + edges_.size());
    const int nv = vertex_count();
    for (const auto& e : edges_) {
        const Vec2& a = vertices_[e[0]];
        const Vec2& b = vertices_[e[1]];
        vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    }

    std::vector<std::array<int, 3>> cells;
    cells.reserve(4 * cells_.size());
    for (int c = 0; c < cell_count(); ++c) {
        const auto& v = cells_[c];
        const auto& e = cell_edges_[c];
        const int m0 = nv + e[0];  // midpoint of edge (v1, v2)
        const int m1 = nv + e[1];  // midpoint of edge (v2, v0)
        const int m2 = nv + e[2];  // midpoint of edge (v0, v1)
        cells.push_back({v[0], m2, m1});
        cells.push_back({v[1], m0, m2});
        cells.push_back({v[2], m1, m0});
        cells.push_back({m0, m1, m2});
    }
    return from_cells(std::move(vertices), std::move(cells), 0.5 * h_, level_ + 1);
}

Mesh Mesh::from_cells(std::vector<Vec2> vertices,
                      std::vector<std::array<int, 3>> cells,
                      double h, int level) {
    Mesh m;
    m.vertices_ = std::move(vertices);
    m.cells_ = std::move(cells);
    m.h_ = h;
    m.level_ = level;

    std::vector<std::array<int, 2>> pairs;
    pairs.reserve(3 * m.cells_.size());
    for (const auto& c : m.cells_) {
        for (int i = 0; i < 3; ++i) {
            int a = c[(i + 1) % 3], b = c[(i + 2) % 3];
            if (a > b) std::swap(a, b);
            pairs.push_back({a, b});
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    m.edges_ = std::move(pairs);

    auto edge_index = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        const std::array<int, 2> key{a, b};
        auto it = std::lower_bound(m.edges_.begin(), m.edges_.end(), key);
        return static_cast<int>(it - m.edges_.begin());
    };

    std::vector<int> edge_cells(m.edges_.size(), 0);
    m.cell_edges_.resize(m.cells_.size());
    for (std::size_t c = 0; c < m.cells_.size(); ++c) {
        const auto& v = m.cells_[c];
        for (int i = 0; i < 3; ++i) {
            const int e = edge_index(v[(i + 1) % 3], v[(i + 2) % 3]);
            m.cell_edges_[c][i] = e;
            ++edge_cells[e];
        }
    }

    m.edge_boundary_.assign(m.edges_.size(), 0);
    m.vertex_boundary_.assign(m.vertices_.size(), 0);
    for (std::size_t e = 0; e < m.edges_.size(); ++e) {
        if (edge_cells[e] == 1) {
            m.edge_boundary_[e] = 1;
            m.vertex_boundary_[m.edges_[e][0]] = 1;
            m.vertex_boundary_[m.edges_[e][1]] = 1;
        } else if (edge_cells[e] != 2) {
            throw std::runtime_error("mesh: non-conforming edge");
        }
    }
    return m;
}

int Mesh::boundary_edge_count() const {
    int n = 0;
    for (auto b : edge_boundary_) n += b;
    return n;
}

double Mesh::cell_area(int c) const {
    const auto& v = cells_[c];
    const Vec2& a = vertices_[v[0]];
    const Vec2& b = vertices_[v[1]];
    const Vec2& d = vertices_[v[2]];
    return 0.5 * ((b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y));
}

double Mesh::total_area() const {
    double s = 0.0;
    for (int c = 0; c < cell_count(); ++c) s += cell_area(c);
    return s;
}

void Mesh::write_text(std::ostream& os) const {
    os << vertex_count() << ' ' << cell_count() << '\n';
    char buf[64];
    for (const auto& v : vertices_) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
        os << buf;
    }
    for (const auto& c : cells_) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

}  // namespace biotfs
