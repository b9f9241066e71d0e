#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "biotfs/sparse.hpp"

namespace biotfs {

class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

struct SolverConfig {
    enum class Method { DirectCholesky, CG };
    Method method = Method::DirectCholesky;
    double rel_tol = 1e-12;
    int max_iter = 10000;  // iterative method only
};

/// Solves A x = b for a symmetric positive definite A, guaranteeing
/// ||A x - b|| <= rel_tol * ||b||. Direct solves run one iterative
/// refinement pass if the factored solution misses the contract.
std::vector<double> solve_spd(const CsrMatrix& a, std::span<const double> b,
                              const SolverConfig& config = {});

/// Reusable sparse Cholesky factorization (one factorization, many solves).
class SparseCholesky {
public:
    explicit SparseCholesky(const CsrMatrix& a, double rel_tol = 1e-12);
    ~SparseCholesky();
    SparseCholesky(SparseCholesky&&) noexcept;
    SparseCholesky& operator=(SparseCholesky&&) noexcept;

    std::vector<double> solve(std::span<const double> b) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Jacobi-preconditioned conjugate gradients on the CSR matrix.
std::vector<double> cg_jacobi(const CsrMatrix& a, std::span<const double> b,
                              double rel_tol, int max_iter, int* iterations = nullptr);

/// Direct LU for general (indefinite) sparse systems; used for the
/// monolithic coupled blocks.
std::vector<double> solve_sparse_lu(const CsrMatrix& a, std::span<const double> b);

}  // namespace biotfs
