#pragma once

#include "wr/fem_core.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <atomic>
#include <memory>

namespace wr {

/// Process-wide counters, used by tests to observe factorization reuse.
struct SolverCounters {
    std::atomic<long> factorizations{0};
    std::atomic<long> solves{0};
};

SolverCounters& solver_counters();

/// Sparse direct factorization that can be applied to many right-hand sides.
///
/// Symmetric matrices use a simplicial LDL^T, anything else falls back on
/// sparse LU. `refactor` keeps the symbolic analysis when the sparsity
/// pattern is unchanged (the common case of a new timestep size).
/// Not safe for concurrent use; one instance per worker.
class LinearSolver {
public:
    LinearSolver() = default;
    explicit LinearSolver(const SparseMatrix& matrix);

    void refactor(const SparseMatrix& matrix);
    bool empty() const { return size_ < 0; }
    Index size() const { return size_; }

    Vector solve(const Vector& rhs) const;
    DenseMatrix solve(const DenseMatrix& rhs) const;

private:
    void check_pivots(const SparseMatrix& matrix) const;

    Index size_ = -1;
    bool symmetric_ = true;
    Index pattern_nnz_ = -1;
    std::vector<int> outer_;
    std::vector<int> inner_;
    std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
    std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
};

/// One-shot solve of A x = b.
Vector solve_linear(const SparseMatrix& matrix, const Vector& rhs);

}  // namespace wr
