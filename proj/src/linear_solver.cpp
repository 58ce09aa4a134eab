#include "wr/linear_solver.hpp"

#include "wr/errors.hpp"

#include <cmath>
#include <sstream>

namespace wr {

namespace {

bool is_symmetric(const SparseMatrix& m) {
    if (m.rows() != m.cols()) return false;
    const SparseMatrix t = m.transpose();
    const double scale = std::max(m.norm(), 1e-300);
    return (m - t).norm() <= 1e-13 * scale;
}

bool same_pattern(const SparseMatrix& a, const std::vector<int>& outer, const std::vector<int>& inner) {
    if (static_cast<std::size_t>(a.outerSize() + 1) != outer.size()) return false;
    if (static_cast<std::size_t>(a.nonZeros()) != inner.size()) return false;
    return std::equal(outer.begin(), outer.end(), a.outerIndexPtr()) &&
           std::equal(inner.begin(), inner.end(), a.innerIndexPtr());
}

}  // namespace

SolverCounters& solver_counters() {
    static SolverCounters counters;
    return counters;
}

LinearSolver::LinearSolver(const SparseMatrix& matrix) { refactor(matrix); }

void LinearSolver::refactor(const SparseMatrix& input) {
    if (input.rows() != input.cols()) {
        throw SolverError("linear solve needs a square matrix, got " + std::to_string(input.rows()) +
                          "x" + std::to_string(input.cols()));
    }
    SparseMatrix matrix = input;
    matrix.makeCompressed();
    ++solver_counters().factorizations;

    const bool reuse = !empty() && size_ == matrix.rows() && pattern_nnz_ == matrix.nonZeros() &&
                       same_pattern(matrix, outer_, inner_);
    size_ = matrix.rows();
    if (size_ == 0) return;

    if (!reuse) {
        symmetric_ = is_symmetric(matrix);
        pattern_nnz_ = matrix.nonZeros();
        outer_.assign(matrix.outerIndexPtr(), matrix.outerIndexPtr() + matrix.outerSize() + 1);
        inner_.assign(matrix.innerIndexPtr(), matrix.innerIndexPtr() + matrix.nonZeros());
        ldlt_.reset();
        lu_.reset();
        if (symmetric_) {
            ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>();
            ldlt_->analyzePattern(matrix);
        } else {
            lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
            lu_->analyzePattern(matrix);
        }
    }

    if (symmetric_) {
        ldlt_->factorize(matrix);
        if (ldlt_->info() != Eigen::Success) {
            throw SolverError("LDL^T factorization failed (matrix singular or not symmetric)");
        }
        check_pivots(matrix);
    } else {
        lu_->factorize(matrix);
        if (lu_->info() != Eigen::Success) {
            throw SolverError("LU factorization failed: " + lu_->lastErrorMessage());
        }
    }
}

void LinearSolver::check_pivots(const SparseMatrix& matrix) const {
    const Vector d = ldlt_->vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    const double dmin = d.cwiseAbs().minCoeff();
    const double ratio = dmax > 0.0 ? dmin / dmax : 0.0;
    if (!(ratio > 1e-15) || !std::isfinite(dmax)) {
        std::ostringstream msg;
        msg << "matrix of size " << matrix.rows()
            << " is singular or ill-conditioned: pivot ratio min|D|/max|D| = " << ratio;
        throw SolverError(msg.str());
    }
}

Vector LinearSolver::solve(const Vector& rhs) const {
    if (empty()) throw SolverError("solve called before factorization");
    if (rhs.size() != size_) throw SolverError("right-hand side size does not match the factorized matrix");
    ++solver_counters().solves;
    if (size_ == 0) return Vector(0);
    return symmetric_ ? Vector(ldlt_->solve(rhs)) : Vector(lu_->solve(rhs));
}

DenseMatrix LinearSolver::solve(const DenseMatrix& rhs) const {
    if (empty()) throw SolverError("solve called before factorization");
    if (rhs.rows() != size_) throw SolverError("right-hand side size does not match the factorized matrix");
    solver_counters().solves += rhs.cols();
    if (size_ == 0) return DenseMatrix(0, rhs.cols());
    return symmetric_ ? DenseMatrix(ldlt_->solve(rhs)) : DenseMatrix(lu_->solve(rhs));
}

Vector solve_linear(const SparseMatrix& matrix, const Vector& rhs) {
    return LinearSolver(matrix).solve(rhs);
}

}  // namespace wr
