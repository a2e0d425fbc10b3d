#pragma once

#include <vector>

#include "incidence/fields.hpp"

namespace incidence {

// Dense row-major matrix of field elements. Small: Jacobians are
// m x (2n-1) and basis changes (n+1) x (n+1) at desk scale.
class MatF {
public:
    MatF() = default;
    MatF(std::size_t rows, std::size_t cols, const FieldElem& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static MatF zero(const FieldCtx& ctx, std::size_t rows, std::size_t cols) {
        return MatF(rows, cols, ctx.zero());
    }
    static MatF identity(const FieldCtx& ctx, std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    FieldElem& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const FieldElem& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<FieldElem> row(std::size_t r) const {
        return {data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_};
    }
    std::vector<FieldElem> col(std::size_t c) const;

    friend bool operator==(const MatF& a, const MatF& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElem> data_;
};

// Rank by exact Gaussian elimination.
std::size_t rank(const FieldCtx& ctx, MatF m);

FieldElem det(const FieldCtx& ctx, MatF m);

// Inverse of a square matrix; throws std::domain_error if singular.
MatF inverse(const FieldCtx& ctx, const MatF& m);

// Basis of the right null space {x : m x = 0}, echelon-normalized and in a
// deterministic order.
std::vector<std::vector<FieldElem>> nullspace(const FieldCtx& ctx, MatF m);

std::vector<FieldElem> mat_vec(const FieldCtx& ctx, const MatF& m,
                               const std::vector<FieldElem>& v);

MatF mat_mul(const FieldCtx& ctx, const MatF& a, const MatF& b);

}  // namespace incidence
