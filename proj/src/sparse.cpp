#include "biotfs/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace biotfs {

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> t) {
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.col_idx_.reserve(t.size());
    m.values_.reserve(t.size());
    std::size_t i = 0;
    for (int r = 0; r < rows; ++r) {
        while (i < t.size() && t[i].row == r) {
            const int c = t[i].col;
            double v = 0.0;
            while (i < t.size() && t[i].row == r && t[i].col == c) v += t[i++].value;
            m.col_idx_.push_back(c);
            m.values_.push_back(v);
        }
        m.row_ptr_[r + 1] = static_cast<int>(m.col_idx_.size());
    }
    if (i != t.size()) throw std::invalid_argument("from_triplets: row index out of range");
    return m;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
        y[r] = s;
    }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (int r = 0; r < rows_; ++r)
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            y[col_idx_[k]] += values_[k] * x[r];
}

double CsrMatrix::coeff(int row, int col) const {
    const auto first = col_idx_.begin() + row_ptr_[row];
    const auto last = col_idx_.begin() + row_ptr_[row + 1];
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) return 0.0;
    return values_[it - col_idx_.begin()];
}

double CsrMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

double CsrMatrix::symmetry_error() const {
    if (rows_ != cols_) throw std::invalid_argument("symmetry_error: square matrix required");
    double max_entry = 0.0, max_diff = 0.0;
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            max_entry = std::max(max_entry, std::abs(values_[k]));
            max_diff = std::max(max_diff, std::abs(values_[k] - coeff(col_idx_[k], r)));
        }
    }
    return max_entry > 0.0 ? max_diff / max_entry : 0.0;
}

void CsrMatrix::write_matrix_market(std::ostream& os) const {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
    char buf[96];
    for (int r = 0; r < rows_; ++r) {
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, col_idx_[k] + 1,
                          values_[k]);
            os << buf;
        }
    }
}

void apply_dirichlet(SparseSystem& sys, const std::vector<int>& dofs,
                     const std::vector<double>* values) {
    CsrMatrix& a = sys.matrix;
    std::vector<std::uint8_t> mask(a.rows(), 0);
    std::vector<double> bc(a.rows(), 0.0);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        mask[dofs[i]] = 1;
        bc[dofs[i]] = values ? (*values)[i] : 0.0;
    }
    const auto& rp = a.row_ptr();
    const auto& ci = a.col_idx();
    auto& v = a.values();
    // move column contributions to the rhs, then zero rows/columns
    for (int r = 0; r < a.rows(); ++r) {
        if (mask[r]) continue;
        for (int k = rp[r]; k < rp[r + 1]; ++k)
            if (mask[ci[k]]) {
                sys.rhs[r] -= v[k] * bc[ci[k]];
                v[k] = 0.0;
            }
    }
    for (int r = 0; r < a.rows(); ++r) {
        if (!mask[r]) continue;
        for (int k = rp[r]; k < rp[r + 1]; ++k) v[k] = (ci[k] == r) ? 1.0 : 0.0;
        sys.rhs[r] = bc[r];
    }
    sys.constrained = true;
}

CsrMatrix eliminate_dirichlet(const CsrMatrix& a, const std::vector<std::uint8_t>& mask) {
    CsrMatrix out = a;
    const auto& rp = out.row_ptr();
    const auto& ci = out.col_idx();
    auto& v = out.values();
    for (int r = 0; r < out.rows(); ++r) {
        const bool row_bc = mask[r] != 0;
        for (int k = rp[r]; k < rp[r + 1]; ++k) {
            if (row_bc || mask[ci[k]])
                v[k] = (row_bc && ci[k] == r) ? 1.0 : 0.0;
        }
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace biotfs
