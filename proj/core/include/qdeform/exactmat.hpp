#pragma once

#include <optional>
#include <vector>

#include "qdeform/cyclotomic.hpp"

namespace qdeform {

/// Dense matrix over Q(theta_ell) with exact elimination.  Singularity is
/// detected exactly, never by thresholds.
class CycMatrix {
public:
    CycMatrix() : rows_(0), cols_(0), ell_(1) {}
    CycMatrix(int rows, int cols, long ell);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long ell() const { return ell_; }

    CycScalar& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const CycScalar& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    static CycMatrix identity(int n, long ell);

    /// Exact inverse; nullopt when singular.
    std::optional<CycMatrix> inverse() const;

    CycMatrix multiply(const CycMatrix& o) const;

    /// Basis of the right kernel {x : M x = 0}.
    std::vector<std::vector<CycScalar>> kernel() const;

    bool operator==(const CycMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    int rows_, cols_;
    long ell_;
    std::vector<CycScalar> data_;
};

/// Row-reduced span of a set of vectors with a caller-supplied pivot column
/// preference.  Rows are reduced in place to echelon form; residues of
/// further vectors can then be computed against the span.
class RowSpan {
public:
    /// `pivot_order[k]` is the k-th most preferred pivot column.
    RowSpan(int cols, long ell, std::vector<int> pivot_order);

    /// Reduce v against the current span; if a nonzero residue remains, add
    /// it as a new echelon row.  Returns true when the rank grew.
    bool insert(std::vector<CycScalar> v);

    /// Residue of v modulo the span (supported on non-pivot columns).
    std::vector<CycScalar> residue(std::vector<CycScalar> v) const;

    int rank() const { return static_cast<int>(rows_.size()); }
    int cols() const { return cols_; }
    /// Non-pivot columns in pivot-preference order (the quotient basis).
    std::vector<int> free_columns() const;

private:
    void reduce(std::vector<CycScalar>& v) const;

    int cols_;
    long ell_;
    std::vector<int> pivot_order_;
    std::vector<std::vector<CycScalar>> rows_;  // echelon rows, unit pivots
    std::vector<int> pivot_cols_;               // pivot column of each row
    std::vector<char> is_pivot_;                // per column
};

}  // namespace qdeform
