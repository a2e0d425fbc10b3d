#include "incidence/linalg.hpp"

namespace incidence {

MatF MatF::identity(const FieldCtx& ctx, std::size_t n) {
    MatF m = zero(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ctx.one();
    return m;
}

std::vector<FieldElem> MatF::col(std::size_t c) const {
    std::vector<FieldElem> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, c));
    return out;
}

namespace {

// Reduces m in place to row echelon form, returns pivot column per pivot row.
std::vector<std::size_t> echelon(const FieldCtx& ctx, MatF& m) {
    std::vector<std::size_t> pivots;
    std::size_t prow = 0;
    for (std::size_t c = 0; c < m.cols() && prow < m.rows(); ++c) {
        std::size_t sel = prow;
        while (sel < m.rows() && m.at(sel, c).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != prow)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(prow, j));
        FieldElem inv = ctx.inv(m.at(prow, c));
        for (std::size_t j = c; j < m.cols(); ++j) m.at(prow, j) = ctx.mul(m.at(prow, j), inv);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == prow || m.at(r, c).is_zero()) continue;
            FieldElem f = m.at(r, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                m.at(r, j) = ctx.sub(m.at(r, j), ctx.mul(f, m.at(prow, j)));
        }
        pivots.push_back(c);
        ++prow;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const FieldCtx& ctx, MatF m) { return echelon(ctx, m).size(); }

FieldElem det(const FieldCtx& ctx, MatF m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix not square");
    FieldElem d = ctx.one();
    const std::size_t n = m.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = c;
        while (sel < n && m.at(sel, c).is_zero()) ++sel;
        if (sel == n) return ctx.zero();
        if (sel != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(sel, j), m.at(c, j));
            d = ctx.neg(d);
        }
        d = ctx.mul(d, m.at(c, c));
        FieldElem inv = ctx.inv(m.at(c, c));
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m.at(r, c).is_zero()) continue;
            FieldElem f = ctx.mul(m.at(r, c), inv);
            for (std::size_t j = c; j < n; ++j)
                m.at(r, j) = ctx.sub(m.at(r, j), ctx.mul(f, m.at(c, j)));
        }
    }
    return d;
}

MatF inverse(const FieldCtx& ctx, const MatF& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    const std::size_t n = m.rows();
    MatF aug = MatF::zero(ctx, n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = ctx.one();
    }
    auto pivots = echelon(ctx, aug);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw std::domain_error("inverse: singular matrix");
    MatF out = MatF::zero(ctx, n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.at(r, c) = aug.at(r, n + c);
    return out;
}

std::vector<std::vector<FieldElem>> nullspace(const FieldCtx& ctx, MatF m) {
    const std::size_t nc = m.cols();
    auto pivots = echelon(ctx, m);
    std::vector<bool> is_pivot(nc, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<FieldElem>> basis;
    for (std::size_t free_c = 0; free_c < nc; ++free_c) {
        if (is_pivot[free_c]) continue;
        std::vector<FieldElem> v(nc, ctx.zero());
        v[free_c] = ctx.one();
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            v[pivots[pr]] = ctx.neg(m.at(pr, free_c));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<FieldElem> mat_vec(const FieldCtx& ctx, const MatF& m,
                               const std::vector<FieldElem>& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("mat_vec: size mismatch");
    std::vector<FieldElem> out(m.rows(), ctx.zero());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out[r] = ctx.add(out[r], ctx.mul(m.at(r, c), v[c]));
    return out;
}

MatF mat_mul(const FieldCtx& ctx, const MatF& a, const MatF& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: size mismatch");
    MatF out = MatF::zero(ctx, a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t i = 0; i < a.cols(); ++i) {
            if (a.at(r, i).is_zero()) continue;
            for (std::size_t c = 0; c < b.cols(); ++c)
                out.at(r, c) = ctx.add(out.at(r, c), ctx.mul(a.at(r, i), b.at(i, c)));
        }
    return out;
}

}  // namespace incidence
