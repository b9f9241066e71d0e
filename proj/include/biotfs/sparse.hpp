#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace biotfs {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Compressed-sparse-row matrix. Column indices are sorted within each row;
/// duplicate triplets are summed on construction.
class CsrMatrix {
public:
    CsrMatrix() = default;
    static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    void multiply(std::span<const double> x, std::span<double> y) const;            // y = A x
    void multiply_transpose(std::span<const double> x, std::span<double> y) const;  // y = A^T x

    double coeff(int row, int col) const;  // 0 when absent
    double frobenius_norm() const;
    /// max |a_ij - a_ji| / max |a_ij| over stored entries; requires square.
    double symmetry_error() const;

    /// MatrixMarket coordinate format (1-based, general).
    void write_matrix_market(std::ostream& os) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// One assembled sub-problem: CSR matrix plus right-hand side.
struct SparseSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
    bool constrained = false;
};

/// Symmetric elimination of Dirichlet rows/columns: constrained rows and
/// columns are zeroed, the diagonal set to 1, and the rhs receives the
/// prescribed values (column contributions are moved to the rhs first).
/// `values` may be null for homogeneous conditions.
void apply_dirichlet(SparseSystem& sys, const std::vector<int>& dofs,
                     const std::vector<double>* values = nullptr);

/// Matrix-only variant used where no rhs exists yet.
CsrMatrix eliminate_dirichlet(const CsrMatrix& a, const std::vector<std::uint8_t>& mask);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace biotfs
