#include "qdeform/exactmat.hpp"

#include <stdexcept>

namespace qdeform {

CycMatrix::CycMatrix(int rows, int cols, long ell)
    : rows_(rows), cols_(cols), ell_(ell),
      data_(static_cast<size_t>(rows) * cols, CycScalar::zero(ell)) {}

CycMatrix CycMatrix::identity(int n, long ell) {
    CycMatrix m(n, n, ell);
    for (int i = 0; i < n; ++i) m.at(i, i) = CycScalar::one(ell);
    return m;
}

std::optional<CycMatrix> CycMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("CycMatrix: inverse of non-square matrix");
    int n = rows_;
    CycMatrix a = *this;
    CycMatrix inv = identity(n, ell_);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (!a.at(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return std::nullopt;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a.at(pivot, c), a.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        }
        CycScalar d = a.at(col, col).inverse();
        for (int c = 0; c < n; ++c) {
            a.at(col, c) *= d;
            inv.at(col, c) *= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a.at(r, col).is_zero()) continue;
            CycScalar f = a.at(r, col);
            for (int c = 0; c < n; ++c) {
                a.at(r, c) -= f * a.at(col, c);
                inv.at(r, c) -= f * inv.at(col, c);
            }
        }
    }
    return inv;
}

CycMatrix CycMatrix::multiply(const CycMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("CycMatrix: dimension mismatch");
    CycMatrix out(rows_, o.cols_, ell_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                out.at(i, j) += at(i, k) * o.at(k, j);
            }
        }
    }
    return out;
}

std::vector<std::vector<CycScalar>> CycMatrix::kernel() const {
    // reduce to echelon form, then read kernel vectors off the free columns
    CycMatrix a = *this;
    std::vector<int> pivot_of_col(cols_, -1);
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
        int pivot = -1;
        for (int r = row; r < rows_; ++r) {
            if (!a.at(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != row)
            for (int c = 0; c < cols_; ++c) std::swap(a.at(pivot, c), a.at(row, c));
        CycScalar d = a.at(row, col).inverse();
        for (int c = 0; c < cols_; ++c) a.at(row, c) *= d;
        for (int r = 0; r < rows_; ++r) {
            if (r == row || a.at(r, col).is_zero()) continue;
            CycScalar f = a.at(r, col);
            for (int c = 0; c < cols_; ++c) a.at(r, c) -= f * a.at(row, c);
        }
        pivot_of_col[col] = row;
        ++row;
    }
    std::vector<std::vector<CycScalar>> basis;
    for (int col = 0; col < cols_; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<CycScalar> v(cols_, CycScalar::zero(ell_));
        v[col] = CycScalar::one(ell_);
        for (int c = 0; c < cols_; ++c) {
            if (pivot_of_col[c] >= 0) v[c] = -a.at(pivot_of_col[c], col);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

RowSpan::RowSpan(int cols, long ell, std::vector<int> pivot_order)
    : cols_(cols), ell_(ell), pivot_order_(std::move(pivot_order)),
      is_pivot_(static_cast<size_t>(cols), 0) {
    if (static_cast<int>(pivot_order_.size()) != cols)
        throw std::invalid_argument("RowSpan: pivot order must cover all columns");
}

void RowSpan::reduce(std::vector<CycScalar>& v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
        const CycScalar& c = v[pivot_cols_[r]];
        if (c.is_zero()) continue;
        CycScalar f = c;  // pivots are normalized to 1
        const auto& row = rows_[r];
        for (int j = 0; j < cols_; ++j) {
            if (!row[j].is_zero()) v[j] -= f * row[j];
        }
    }
}

bool RowSpan::insert(std::vector<CycScalar> v) {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("RowSpan: bad vector size");
    reduce(v);
    int pcol = -1;
    for (int c : pivot_order_) {
        if (!v[c].is_zero()) {
            pcol = c;
            break;
        }
    }
    if (pcol < 0) return false;
    CycScalar d = v[pcol].inverse();
    for (auto& x : v) x *= d;
    // back-substitute into existing rows to keep reduced echelon form
    for (size_t r = 0; r < rows_.size(); ++r) {
        CycScalar f = rows_[r][pcol];
        if (f.is_zero()) continue;
        for (int j = 0; j < cols_; ++j) {
            if (!v[j].is_zero()) rows_[r][j] -= f * v[j];
        }
    }
    rows_.push_back(std::move(v));
    pivot_cols_.push_back(pcol);
    is_pivot_[pcol] = 1;
    return true;
}

std::vector<CycScalar> RowSpan::residue(std::vector<CycScalar> v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("RowSpan: bad vector size");
    reduce(v);
    return v;
}

std::vector<int> RowSpan::free_columns() const {
    std::vector<int> out;
    for (int c : pivot_order_) {
        if (!is_pivot_[c]) out.push_back(c);
    }
    return out;
}

}  // namespace qdeform
