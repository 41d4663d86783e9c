// Sparse exact linear algebra over the rationals: rank, reduced row echelon
// form, kernel bases, particular solutions, and traces of a matrix restricted
// to an invariant kernel subspace.
//
// Rows are kept as column-sorted sparse vectors. Elimination picks pivots by a
// Markowitz-style fill estimate and prefers unit entries, which keeps the
// boundary/coboundary matrices of the catalog meshes (entries in {-1,0,1})
// near-integer throughout.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "leflab/rational.hpp"

namespace leflab::la {

// One sparse row/column: (index, value) pairs sorted by index, values nonzero.
using SparseVec = std::vector<std::pair<int, Rat>>;

struct SparseMatQ {
    int rows = 0;
    int cols = 0;
    std::vector<SparseVec> row;  // size == rows

    SparseMatQ() = default;
    SparseMatQ(int r, int c) : rows(r), cols(c), row(r) {}

    void add_entry(int r, int c, Rat v);  // accumulates, keeps rows sorted
    Rat at(int r, int c) const;
    std::int64_t nnz() const;

    SparseVec apply(const SparseVec& x) const;      // y = A x
    std::vector<Rat> apply_dense(const std::vector<Rat>& x) const;
    SparseMatQ transpose() const;

    // Diagonal sum (square matrices).
    Rat trace() const;

    // Submatrix on the given row/column index subsets (order preserved).
    SparseMatQ submatrix(const std::vector<int>& keep_rows,
                         const std::vector<int>& keep_cols) const;
};

// Product A*B (used only on small matrices; sizes here are modest).
SparseMatQ multiply(const SparseMatQ& a, const SparseMatQ& b);

bool is_zero(const SparseMatQ& a);

// Rank over Q. Destroys nothing (works on a copy).
int rank(const SparseMatQ& a);

// Reduced row echelon data for A: pivot (row->col) assignment plus the
// fully reduced rows. Enough to read off kernel bases and solve systems.
struct Rref {
    int rows = 0, cols = 0;
    std::vector<SparseVec> pivot_rows;  // each begins at its pivot column, pivot value 1
    std::vector<int> pivot_col;         // parallel to pivot_rows
    std::vector<int> free_cols;         // columns without a pivot, ascending
    int rank() const { return static_cast<int>(pivot_col.size()); }
};

// pivot_col_limit restricts pivoting to columns < limit (used to keep an
// augmented right-hand-side column out of the pivot set); -1 means no limit.
Rref rref(const SparseMatQ& a, int pivot_col_limit = -1);

// Kernel basis from an RREF: one column per free column f, with coordinate 1
// at f, 0 at other free columns, and back-filled pivot coordinates.
std::vector<SparseVec> kernel_basis(const Rref& r);

// One particular solution of A x = b with all free coordinates set to zero.
// Throws std::runtime_error when the system is inconsistent.
std::vector<Rat> solve_particular(const SparseMatQ& a, const std::vector<Rat>& b);

// Trace of F restricted to span(basis), where the basis columns carry the
// RREF kernel structure (identity block on the rows listed in `unit_rows`).
// F must map the span into itself; that is the caller's invariant.
Rat restricted_trace(const SparseMatQ& f, const std::vector<SparseVec>& basis,
                     const std::vector<int>& unit_rows);

}  // namespace leflab::la
