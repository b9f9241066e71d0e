#include "biotfs/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>

namespace biotfs {

namespace {

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& a) {
    using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
    Eigen::Map<const RowMajor> mapped(a.rows(), a.cols(), a.nnz(), a.row_ptr().data(),
                                      a.col_idx().data(), a.values().data());
    return Eigen::SparseMatrix<double>(mapped);
}

double residual_norm(const CsrMatrix& a, std::span<const double> x,
                     std::span<const double> b) {
    std::vector<double> r(b.size());
    a.multiply(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return norm2(r);
}

}  // namespace

struct SparseCholesky::Impl {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    const CsrMatrix* a = nullptr;
    double rel_tol = 1e-12;
};

SparseCholesky::SparseCholesky(const CsrMatrix& a, double rel_tol)
    : impl_(std::make_unique<Impl>()) {
    impl_->a = &a;
    impl_->rel_tol = rel_tol;
    impl_->llt.compute(to_eigen(a));
    if (impl_->llt.info() != Eigen::Success)
        throw SolveError("sparse Cholesky: non-positive pivot encountered");
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

std::vector<double> SparseCholesky::solve(std::span<const double> b) const {
    Eigen::Map<const Eigen::VectorXd> bm(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd x = impl_->llt.solve(bm);
    std::vector<double> out(x.data(), x.data() + x.size());
    // one refinement pass if the factored solve misses the residual contract
    const double bn = norm2(b);
    if (bn > 0.0 && residual_norm(*impl_->a, out, b) > impl_->rel_tol * bn) {
        std::vector<double> r(b.size());
        impl_->a->multiply(out, r);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
        Eigen::Map<const Eigen::VectorXd> rm(r.data(), static_cast<Eigen::Index>(r.size()));
        Eigen::VectorXd dx = impl_->llt.solve(rm);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += dx[static_cast<Eigen::Index>(i)];
    }
    return out;
}

std::vector<double> cg_jacobi(const CsrMatrix& a, std::span<const double> b,
                              double rel_tol, int max_iter, int* iterations) {
    const int n = a.rows();
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), z(n), p(n), ap(n);
    std::vector<double> inv_diag(n, 1.0);
    for (int i = 0; i < n; ++i) {
        const double d = a.coeff(i, i);
        if (d > 0.0) inv_diag[i] = 1.0 / d;
    }
    const double bn = norm2(b);
    if (bn == 0.0) {
        if (iterations) *iterations = 0;
        return x;
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    for (int k = 1; k <= max_iter; ++k) {
        a.multiply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) throw SolveError("cg: matrix not positive definite");
        const double alpha = rz / pap;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if (norm2(r) <= rel_tol * bn) {
            if (iterations) *iterations = k;
            return x;
        }
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "cg: no convergence in %d iterations (residual %.3e)",
                  max_iter, residual_norm(a, x, b) / bn);
    throw SolveError(buf);
}

std::vector<double> solve_spd(const CsrMatrix& a, std::span<const double> b,
                              const SolverConfig& config) {
    if (config.method == SolverConfig::Method::CG)
        return cg_jacobi(a, b, config.rel_tol, config.max_iter);
    SparseCholesky chol(a, config.rel_tol);
    return chol.solve(b);
}

std::vector<double> solve_sparse_lu(const CsrMatrix& a, std::span<const double> b) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(to_eigen(a));
    if (lu.info() != Eigen::Success) throw SolveError("sparse LU: factorization failed");
    Eigen::Map<const Eigen::VectorXd> bm(b.data(), static_cast<Eigen::Index>(b.size()));
    Eigen::VectorXd x = lu.solve(bm);
    if (lu.info() != Eigen::Success) throw SolveError("sparse LU: solve failed");
    return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace biotfs
