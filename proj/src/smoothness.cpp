#include "incidence/smoothness.hpp"

namespace incidence {

namespace {
MatF jacobian_from_coeffs(const FieldCtx& ctx, const AdaptedCoefficients& co, unsigned m,
                          unsigned n);
std::size_t rank_u64(std::vector<u64>& m, std::size_t rows, std::size_t cols, u64 p);
}

FlagClassifier::FlagClassifier(const MultiPoly& f) : cx_(&f.ring().ctx) {
    n_ = f.ring().n;
    d_ = f.ring().d;
    prime_ = cx_->prime_field() && cx_->p() < (u64{1} << 31) && d_ < 32;
    auto prepare = [&](const MultiPoly& g, Prepared& out) {
        out.deg = g.ring().d;
        for (const auto& [e, c] : g.terms()) {
            for (unsigned x : e) out.exps.push_back(static_cast<unsigned char>(x));
            out.coeffs.push_back(c);
            if (prime_) out.ucoeffs.push_back(c[0]);
        }
    };
    prepare(f, f_);
    auto parts = partials(f);
    partials_.resize(n_ + 1);
    for (unsigned l = 0; l <= n_; ++l) prepare(parts[l], partials_[l]);
    pascal_.assign((d_ + 1) * (d_ + 1), cx_->zero());
    for (unsigned i = 0; i <= d_; ++i) {
        pascal_[i * (d_ + 1)] = cx_->one();
        for (unsigned j = 1; j <= i; ++j)
            pascal_[i * (d_ + 1) + j] =
                j == i ? cx_->one()
                       : cx_->add(pascal_[(i - 1) * (d_ + 1) + j - 1],
                                  pascal_[(i - 1) * (d_ + 1) + j]);
    }
    if (prime_) {
        upascal_.resize(pascal_.size());
        for (std::size_t i = 0; i < pascal_.size(); ++i) upascal_[i] = pascal_[i][0];
    }
}

void FlagClassifier::restrict_into_u64(const Prepared& g, const u64* base, const u64* dir,
                                       std::vector<u64>& out) const {
    const u64 p = cx_->p();
    const unsigned nv = n_ + 1;
    out.assign(g.deg + 1, 0);
    const std::size_t terms = g.ucoeffs.size();
    uacc_.resize(g.deg + 1);
    unext_.resize(g.deg + 1);
    u64 bpow[32], dpow[32];
    const unsigned char* e = g.exps.data();
    for (std::size_t t = 0; t < terms; ++t, e += nv) {
        unsigned acc_deg = 0;
        uacc_[0] = g.ucoeffs[t];
        bool dead = uacc_[0] == 0;
        for (unsigned l = 0; l < nv && !dead; ++l) {
            unsigned el = e[l];
            if (el == 0) continue;
            bpow[0] = 1;
            dpow[0] = 1;
            for (unsigned j = 1; j <= el; ++j) {
                bpow[j] = bpow[j - 1] * base[l] % p;
                dpow[j] = dpow[j - 1] * dir[l] % p;
            }
            unsigned out_deg = acc_deg + el;
            for (unsigned i = 0; i <= out_deg; ++i) unext_[i] = 0;
            for (unsigned j = 0; j <= el; ++j) {
                u64 fj = upascal_[el * (d_ + 1) + j] * bpow[el - j] % p * dpow[j] % p;
                if (fj == 0) continue;
                for (unsigned i = 0; i <= acc_deg; ++i) {
                    if (uacc_[i] == 0) continue;
                    unext_[i + j] = (unext_[i + j] + uacc_[i] * fj) % p;
                }
            }
            acc_deg = out_deg;
            uacc_.swap(unext_);
            dead = true;
            for (unsigned i = 0; i <= acc_deg; ++i)
                if (uacc_[i] != 0) { dead = false; break; }
        }
        if (!dead)
            for (unsigned i = 0; i <= acc_deg; ++i) {
                u64 s = out[i] + uacc_[i];
                out[i] = s >= p ? s - p : s;
            }
    }
}

// Prime-field fast path: adapted coefficients as raw residues. a_out gets
// d+1 entries, side_out d x (n-1) row-major. Returns false when the context
// is not a small prime field.
bool FlagClassifier::coeffs_u64(const Flag& flag, std::vector<u64>& a_out,
                                std::vector<u64>& side_out) const {
    if (!prime_) return false;
    const u64 p = cx_->p();
    const unsigned nv = n_ + 1;
    MatF a = adapted_basis(*cx_, flag);
    ubase_.resize(nv);
    udir_.resize(nv);
    for (unsigned i = 0; i < nv; ++i) {
        ubase_[i] = flag.p[i][0];
        udir_[i] = flag.v[i][0];
    }
    restrict_into_u64(f_, ubase_.data(), udir_.data(), a_out);
    uprc_.assign(nv * d_, 0);
    for (unsigned l = 0; l < nv; ++l) {
        if (partials_[l].ucoeffs.empty()) continue;
        restrict_into_u64(partials_[l], ubase_.data(), udir_.data(), utmp_);
        for (unsigned k = 0; k < d_; ++k) uprc_[l * d_ + k] = utmp_[k];
    }
    side_out.assign(static_cast<std::size_t>(d_) * (n_ - 1), 0);
    for (unsigned j = 2; j <= n_; ++j)
        for (unsigned k = 0; k < d_; ++k) {
            u64 acc = 0;
            for (unsigned l = 0; l < nv; ++l) {
                u64 w = a.at(l, j)[0];
                if (w == 0 || uprc_[l * d_ + k] == 0) continue;
                acc = (acc + w * uprc_[l * d_ + k]) % p;
            }
            side_out[static_cast<std::size_t>(k) * (n_ - 1) + (j - 2)] = acc;
        }
    return true;
}

std::vector<FieldElem> FlagClassifier::gradient(const std::vector<FieldElem>& pt) const {
    const unsigned nv = n_ + 1;
    std::vector<FieldElem> out(nv, cx_->zero());
    if (prime_) {
        const u64 p = cx_->p();
        ubase_.resize(nv);
        for (unsigned i = 0; i < nv; ++i) ubase_[i] = pt[i][0];
        for (unsigned l = 0; l < nv; ++l) {
            const auto& g = partials_[l];
            u64 acc = 0;
            const unsigned char* e = g.exps.data();
            for (std::size_t t = 0; t < g.ucoeffs.size(); ++t, e += nv) {
                u64 term = g.ucoeffs[t];
                for (unsigned v = 0; v < nv && term; ++v)
                    for (unsigned r = 0; r < e[v] && term; ++r) term = term * ubase_[v] % p;
                acc = (acc + term) % p;
            }
            out[l] = cx_->from_int(static_cast<i64>(acc));
        }
        return out;
    }
    for (unsigned l = 0; l < nv; ++l) {
        const auto& g = partials_[l];
        FieldElem acc = cx_->zero();
        const unsigned char* e = g.exps.data();
        for (std::size_t t = 0; t < g.coeffs.size(); ++t, e += nv) {
            FieldElem term = g.coeffs[t];
            for (unsigned v = 0; v < nv; ++v)
                for (unsigned r = 0; r < e[v]; ++r) term = cx_->mul(term, pt[v]);
            acc = cx_->add(acc, term);
        }
        out[l] = acc;
    }
    return out;
}

void FlagClassifier::restrict_into(const Prepared& g, const std::vector<FieldElem>& base,
                                   const std::vector<FieldElem>& dir,
                                   std::vector<FieldElem>& out) const {
    const auto& ctx = *cx_;
    const unsigned nv = n_ + 1;
    out.assign(g.deg + 1, ctx.zero());
    const std::size_t terms = g.coeffs.size();
    acc_.resize(g.deg + 1);
    next_.resize(g.deg + 1);
    const unsigned char* e = g.exps.data();
    for (std::size_t t = 0; t < terms; ++t, e += nv) {
        unsigned acc_deg = 0;
        acc_[0] = g.coeffs[t];
        bool dead = acc_[0].is_zero();
        for (unsigned l = 0; l < nv && !dead; ++l) {
            unsigned el = e[l];
            if (el == 0) continue;
            bpow_.resize(el + 1);
            dpow_.resize(el + 1);
            bpow_[0] = ctx.one();
            dpow_[0] = ctx.one();
            for (unsigned j = 1; j <= el; ++j) {
                bpow_[j] = ctx.mul(bpow_[j - 1], base[l]);
                dpow_[j] = ctx.mul(dpow_[j - 1], dir[l]);
            }
            unsigned out_deg = acc_deg + el;
            for (unsigned i = 0; i <= out_deg; ++i) next_[i] = ctx.zero();
            for (unsigned j = 0; j <= el; ++j) {
                FieldElem fj =
                    ctx.mul(pascal_[el * (d_ + 1) + j], ctx.mul(bpow_[el - j], dpow_[j]));
                if (fj.is_zero()) continue;
                for (unsigned i = 0; i <= acc_deg; ++i) {
                    if (acc_[i].is_zero()) continue;
                    next_[i + j] = ctx.add(next_[i + j], ctx.mul(acc_[i], fj));
                }
            }
            acc_deg = out_deg;
            acc_.swap(next_);
            dead = true;
            for (unsigned i = 0; i <= acc_deg; ++i)
                if (!acc_[i].is_zero()) { dead = false; break; }
        }
        if (!dead)
            for (unsigned i = 0; i <= acc_deg; ++i) out[i] = ctx.add(out[i], acc_[i]);
    }
}

AdaptedCoefficients FlagClassifier::coeffs(const Flag& flag) const {
    const auto& ctx = *cx_;
    const unsigned d = d_;
    const unsigned n = n_;
    AdaptedCoefficients out;
    if (prime_) {
        std::vector<u64> ua, uside;
        coeffs_u64(flag, ua, uside);
        out.a.reserve(d + 1);
        for (unsigned i = 0; i <= d; ++i) out.a.push_back(ctx.from_int(static_cast<i64>(ua[i])));
        out.side = MatF::zero(ctx, d, n - 1);
        for (unsigned k = 0; k < d; ++k)
            for (unsigned j = 0; j < n - 1; ++j)
                out.side.at(k, j) = ctx.from_int(
                    static_cast<i64>(uside[static_cast<std::size_t>(k) * (n - 1) + j]));
        return out;
    }
    MatF a = adapted_basis(ctx, flag);
    restrict_into(f_, flag.p, flag.v, out.a);
    out.side = MatF::zero(ctx, d, n - 1);
    // a_{k,j}: restrictions of the partials, combined with the basis weights
    prc_.assign((n + 1) * d, ctx.zero());
    std::vector<FieldElem> tmp;
    for (unsigned l = 0; l <= n; ++l) {
        if (partials_[l].coeffs.empty()) continue;
        restrict_into(partials_[l], flag.p, flag.v, tmp);
        for (unsigned k = 0; k < d; ++k) prc_[l * d + k] = tmp[k];
    }
    for (unsigned j = 2; j <= n; ++j)
        for (unsigned k = 0; k < d; ++k) {
            FieldElem acc = ctx.zero();
            for (unsigned l = 0; l <= n; ++l) {
                if (a.at(l, j).is_zero()) continue;
                acc = ctx.add(acc, ctx.mul(a.at(l, j), prc_[l * d + k]));
            }
            out.side.at(k, j - 2) = acc;
        }
    return out;
}

FlagClass FlagClassifier::classify(const Flag& flag, unsigned m) const {
    if (m < 1 || m > d_) throw std::invalid_argument("classify_flag: require 1 <= m <= d");
    if (prime_) {
        const u64 p = cx_->p();
        const unsigned n = n_;
        std::vector<u64> ua, uside;
        coeffs_u64(flag, ua, uside);
        for (unsigned i = 0; i < m; ++i)
            if (ua[i] != 0) return FlagClass::not_in_Y;
        auto build = [&](unsigned rows, std::vector<u64>& j) {
            const unsigned cols = 2 * n - 1;
            j.assign(static_cast<std::size_t>(rows) * cols, 0);
            j[static_cast<std::size_t>(rows - 1) * cols] = rows % p * ua[rows] % p;
            for (unsigned k = 0; k < rows; ++k)
                for (unsigned col = 2; col <= n; ++col) {
                    j[static_cast<std::size_t>(k) * cols + col - 1] =
                        uside[static_cast<std::size_t>(k) * (n - 1) + col - 2];
                    if (k >= 1)
                        j[static_cast<std::size_t>(k) * cols + n - 1 + col - 1] =
                            uside[static_cast<std::size_t>(k - 1) * (n - 1) + col - 2];
                }
        };
        std::vector<u64> jm;
        build(m, jm);
        if (rank_u64(jm, m, 2 * n - 1, p) == m) return FlagClass::smooth;
        if (m >= 2) {
            std::vector<u64> j2;
            build(2, j2);
            if (rank_u64(j2, 2, 2 * n - 1, p) < 2) return FlagClass::W2;
        }
        return FlagClass::W0;
    }
    auto co = coeffs(flag);
    for (unsigned i = 0; i < m; ++i)
        if (!co.a[i].is_zero()) return FlagClass::not_in_Y;
    MatF jm = jacobian_from_coeffs(*cx_, co, m, n_);
    if (rank_exact(*cx_, jm) == m) return FlagClass::smooth;
    if (m >= 2) {
        MatF j2 = jacobian_from_coeffs(*cx_, co, 2, n_);
        if (rank_exact(*cx_, j2) < 2) return FlagClass::W2;
    }
    return FlagClass::W0;
}

AdaptedCoefficients adapted_coeffs(const MultiPoly& f, const Flag& flag) {
    return FlagClassifier(f).coeffs(flag);
}

namespace {

void require_membership(const FieldCtx& ctx, const AdaptedCoefficients& co, unsigned m,
                        unsigned d) {
    if (m < 1 || m > d)
        throw std::invalid_argument("jacobian: require 1 <= m <= d");
    (void)ctx;
    for (unsigned i = 0; i < m; ++i)
        if (!co.a[i].is_zero())
            throw std::domain_error("jacobian: flag not in Y_{F,m}");
}

MatF jacobian_from_coeffs(const FieldCtx& ctx, const AdaptedCoefficients& co, unsigned m,
                          unsigned n) {
    MatF j = MatF::zero(ctx, m, 2 * n - 1);
    j.at(m - 1, 0) = ctx.mul(ctx.from_int(static_cast<i64>(m)), co.a[m]);
    for (unsigned k = 0; k < m; ++k) {
        for (unsigned col = 2; col <= n; ++col) {
            j.at(k, col - 1) = co.side.at(k, col - 2);
            if (k >= 1) j.at(k, n - 1 + col - 1) = co.side.at(k - 1, col - 2);
        }
    }
    return j;
}

// Dual numbers a + eps b with eps^2 = 0 over a field context.
struct Dual {
    FieldElem re, eps;
};

struct DualOps {
    const FieldCtx* cx;

    Dual zero() const { return {cx->zero(), cx->zero()}; }
    Dual one() const { return {cx->one(), cx->zero()}; }
    Dual from(const FieldElem& a) const { return {a, cx->zero()}; }
    bool is_zero(const Dual& a) const { return a.re.is_zero() && a.eps.is_zero(); }
    Dual add(const Dual& a, const Dual& b) const {
        return {cx->add(a.re, b.re), cx->add(a.eps, b.eps)};
    }
    Dual mul(const Dual& a, const Dual& b) const {
        return {cx->mul(a.re, b.re),
                cx->add(cx->mul(a.re, b.eps), cx->mul(a.eps, b.re))};
    }
};

// Coefficients of G(base + t dir) over the dual numbers.
std::vector<Dual> dual_line_restriction(const MultiPoly& g, const std::vector<Dual>& base,
                                        const std::vector<Dual>& dir) {
    const auto& ring = g.ring();
    DualOps ops{&ring.ctx};
    const unsigned d = ring.d;
    std::vector<Dual> out(d + 1, ops.zero());
    // Pascal rows reduced into the field
    std::vector<std::vector<FieldElem>> binom(d + 1);
    for (unsigned i = 0; i <= d; ++i) {
        binom[i].resize(i + 1);
        for (unsigned j = 0; j <= i; ++j)
            binom[i][j] = (j == 0 || j == i) ? ring.ctx.one()
                                             : ring.ctx.add(binom[i - 1][j - 1], binom[i - 1][j]);
    }
    std::vector<Dual> acc, next;
    for (const auto& [e, c] : g.terms()) {
        acc.assign(1, ops.from(c));
        for (unsigned l = 0; l < ring.nvars(); ++l) {
            unsigned el = e[l];
            if (el == 0) continue;
            std::vector<Dual> bp(el + 1), dp(el + 1);
            bp[0] = ops.one();
            dp[0] = ops.one();
            for (unsigned j = 1; j <= el; ++j) {
                bp[j] = ops.mul(bp[j - 1], base[l]);
                dp[j] = ops.mul(dp[j - 1], dir[l]);
            }
            next.assign(std::min<std::size_t>(acc.size() + el, d + 1), ops.zero());
            for (std::size_t i = 0; i < acc.size(); ++i) {
                if (ops.is_zero(acc[i])) continue;
                for (unsigned j = 0; j <= el && i + j < next.size(); ++j) {
                    Dual fac = ops.mul(ops.from(binom[el][j]), ops.mul(bp[el - j], dp[j]));
                    next[i + j] = ops.add(next[i + j], ops.mul(acc[i], fac));
                }
            }
            acc.swap(next);
        }
        for (std::size_t i = 0; i < acc.size(); ++i) out[i] = ops.add(out[i], acc[i]);
    }
    return out;
}

MatF jacobian_linearized_rows(const MultiPoly& f, const Flag& flag, unsigned rows,
                              bool check_membership) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    const unsigned n = ring.n;
    const unsigned d = ring.d;
    MatF a = adapted_basis(ctx, flag);
    MultiPoly g = transform(f, a);
    DualOps ops{&ctx};
    MatF j = MatF::zero(ctx, rows, 2 * n - 1);
    // chart restriction at xi = zeta = 0 with one variable set to eps
    for (unsigned col = 0; col < 2 * n - 1; ++col) {
        std::vector<Dual> base(n + 1, ops.zero()), dir(n + 1, ops.zero());
        base[0] = ops.one();
        dir[1] = ops.one();
        if (col < n) {
            // xi_{col+1}
            base[col + 1] = Dual{ctx.zero(), ctx.one()};
        } else {
            // zeta_{col - n + 2}
            dir[col - n + 2] = Dual{ctx.zero(), ctx.one()};
        }
        auto rc = dual_line_restriction(g, base, dir);
        for (unsigned k = 0; k < rows; ++k) j.at(k, col) = rc[k].eps;
        if (check_membership && col == 0) {
            for (unsigned k = 0; k < rows; ++k)
                if (!rc[k].re.is_zero())
                    throw std::domain_error("jacobian_linearized: flag not in Y_{F,m}");
        }
        (void)d;
    }
    return j;
}

}  // namespace

MatF jacobian_closed_form(const MultiPoly& f, const Flag& flag, unsigned m) {
    const auto& ring = f.ring();
    auto co = adapted_coeffs(f, flag);
    require_membership(ring.ctx, co, m, ring.d);
    return jacobian_from_coeffs(ring.ctx, co, m, ring.n);
}

MatF jacobian_linearized(const MultiPoly& f, const Flag& flag, unsigned m) {
    if (m < 1 || m > f.ring().d)
        throw std::invalid_argument("jacobian_linearized: require 1 <= m <= d");
    return jacobian_linearized_rows(f, flag, m, true);
}

MatF jacobian_linearized_full(const MultiPoly& f, const Flag& flag) {
    return jacobian_linearized_rows(f, flag, f.ring().d + 1, false);
}

std::size_t rank_exact(const FieldCtx& ctx, const MatF& m) { return rank(ctx, m); }

std::string to_string(FlagClass c) {
    switch (c) {
        case FlagClass::not_in_Y: return "not_in_Y";
        case FlagClass::smooth: return "smooth";
        case FlagClass::W0: return "W0";
        case FlagClass::W2: return "W2";
    }
    return "?";
}

FlagClass classify_flag(const MultiPoly& f, const Flag& flag, unsigned m) {
    return FlagClassifier(f).classify(flag, m);
}

MatF btilde(const FieldCtx& ctx, const MatF& b) {
    const std::size_t l = b.rows(), r = b.cols();
    MatF out = MatF::zero(ctx, l, 2 * r);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            out.at(i, j) = b.at(i, j);
            if (i >= 1) out.at(i, r + j) = b.at(i - 1, j);
        }
    return out;
}

namespace {

bool is_zero_matrix(const MatF& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (!b.at(i, j).is_zero()) return false;
    return true;
}

}  // namespace

bool member_delta(const FieldCtx& ctx, const MatF& b) {
    if (is_zero_matrix(b)) throw std::invalid_argument("member_delta: zero matrix");
    return rank_exact(ctx, btilde(ctx, b)) < b.rows();
}

bool member_delta0(const FieldCtx& ctx, const MatF& b) {
    if (!member_delta(ctx, b)) return false;
    for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b.at(0, j).is_zero()) return true;
    return false;
}

std::optional<unsigned> stratum_index(const FieldCtx& ctx, const MatF& b) {
    if (is_zero_matrix(b)) throw std::invalid_argument("stratum_index: zero matrix");
    const std::size_t l = b.rows();
    for (std::size_t i = 2; i <= l; ++i) {
        MatF head = MatF::zero(ctx, i, b.cols());
        for (std::size_t r = 0; r < i; ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) head.at(r, c) = b.at(r, c);
        if (rank_exact(ctx, btilde(ctx, head)) < i) return static_cast<unsigned>(i);
    }
    return std::nullopt;
}

namespace {

// Rank of a small matrix over GF(p) on raw residues.
std::size_t rank_u64(std::vector<u64>& m, std::size_t rows, std::size_t cols, u64 p) {
    std::size_t prow = 0;
    for (std::size_t c = 0; c < cols && prow < rows; ++c) {
        std::size_t sel = prow;
        while (sel < rows && m[sel * cols + c] == 0) ++sel;
        if (sel == rows) continue;
        if (sel != prow)
            for (std::size_t j = c; j < cols; ++j) std::swap(m[sel * cols + j], m[prow * cols + j]);
        // normalize pivot row
        u64 inv = 1, base = m[prow * cols + c] % p, e = p - 2;
        while (e) {
            if (e & 1) inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        for (std::size_t j = c; j < cols; ++j) m[prow * cols + j] = m[prow * cols + j] * inv % p;
        for (std::size_t r = prow + 1; r < rows; ++r) {
            u64 f = m[r * cols + c];
            if (f == 0) continue;
            for (std::size_t j = c; j < cols; ++j) {
                u64 t = f * m[prow * cols + j] % p;
                u64& cell = m[r * cols + j];
                cell = cell >= t ? cell - t : cell + p - t;
            }
        }
        ++prow;
    }
    return prow;
}

}  // namespace

DeltaCounts count_delta(unsigned l, unsigned r, const FieldCtx& ctx, u64 cap) {
    const u64 q = ctx.q();
    long double total_ld = 1;
    for (unsigned i = 0; i < l * r; ++i) total_ld *= static_cast<long double>(q);
    if (total_ld > static_cast<long double>(cap))
        throw ResourceLimit("count_delta: q^{lr} exceeds bound");
    DeltaCounts out;
    const unsigned cells = l * r;
    std::vector<u64> idx(cells, 0);
    const bool prime = ctx.prime_field() && ctx.p() < (u64{1} << 20);
    std::vector<u64> bt_u64(l * 2 * r, 0);
    MatF b = MatF::zero(ctx, l, r);
    for (;;) {
        // advance odometer first, skipping the all-zero matrix
        unsigned pos = 0;
        while (pos < cells && ++idx[pos] == q) idx[pos++] = 0;
        if (pos == cells) break;
        bool in_delta, row0_nonzero = false;
        for (unsigned j = 0; j < r; ++j)
            if (idx[j] != 0) { row0_nonzero = true; break; }
        if (prime) {
            // btilde rows: (B_i | B_{i-1})
            std::fill(bt_u64.begin(), bt_u64.end(), 0);
            for (unsigned i = 0; i < l; ++i)
                for (unsigned j = 0; j < r; ++j) {
                    bt_u64[i * 2 * r + j] = idx[i * r + j];
                    if (i >= 1) bt_u64[i * 2 * r + r + j] = idx[(i - 1) * r + j];
                }
            in_delta = rank_u64(bt_u64, l, 2 * r, ctx.p()) < l;
        } else {
            for (unsigned i = 0; i < l; ++i)
                for (unsigned j = 0; j < r; ++j) b.at(i, j) = ctx.elem_at(idx[i * r + j]);
            in_delta = rank_exact(ctx, btilde(ctx, b)) < l;
        }
        if (in_delta) {
            ++out.affine_delta;
            if (row0_nonzero) ++out.affine_delta0;
        }
    }
    if (out.affine_delta % (q - 1) != 0 || out.affine_delta0 % (q - 1) != 0)
        throw std::logic_error("count_delta: affine counts not divisible by q-1");
    out.projective_delta = out.affine_delta / (q - 1);
    out.projective_delta0 = out.affine_delta0 / (q - 1);
    return out;
}

SingularPoint singular_point_from_degenerate_flag(const MultiPoly& f, const Flag& flag) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    if (ring.d != 3)
        throw std::invalid_argument("singular_point_from_degenerate_flag: cubic forms only");
    if (ctx.p() == 3)
        throw std::invalid_argument("singular_point_from_degenerate_flag: characteristic 3 excluded");
    auto co = adapted_coeffs(f, flag);
    for (unsigned i = 0; i < 3; ++i)
        if (!co.a[i].is_zero())
            throw std::invalid_argument("singular_point_from_degenerate_flag: flag not in Y_{F,3}");
    MatF j3 = jacobian_from_coeffs(ctx, co, 3, ring.n);
    if (rank_exact(ctx, j3) >= 3)
        throw std::invalid_argument("singular_point_from_degenerate_flag: flag is a smooth point");

    // p already singular (covers the a_3 != 0 branch)
    auto grad = gradient_at(f, flag.p);
    bool singular = true;
    for (const auto& g : grad)
        if (!g.is_zero()) { singular = false; break; }
    if (singular) return SingularPoint{flag.p, ctx, 1};

    if (!co.a[3].is_zero())
        throw std::logic_error("singular_point_from_degenerate_flag: a_3 != 0 at nonsingular p");

    // alpha, beta with a_{2,.} = alpha a_{0,.} + beta a_{1,.}, a_{1,.} = beta a_{0,.}
    const unsigned n = ring.n;
    unsigned pivot = n;  // column index into side (0-based)
    for (unsigned j = 0; j < n - 1; ++j)
        if (!co.side.at(0, j).is_zero()) { pivot = j; break; }
    if (pivot == n)
        throw std::logic_error("singular_point_from_degenerate_flag: zero a_{0,.} at nonsingular p");
    FieldElem a0p = co.side.at(0, pivot);
    FieldElem beta = ctx.div(co.side.at(1, pivot), a0p);
    FieldElem alpha =
        ctx.div(ctx.sub(co.side.at(2, pivot), ctx.mul(beta, co.side.at(1, pivot))), a0p);
    for (unsigned j = 0; j < n - 1; ++j) {
        FieldElem want1 = ctx.mul(beta, co.side.at(0, j));
        FieldElem want2 =
            ctx.add(ctx.mul(alpha, co.side.at(0, j)), ctx.mul(beta, co.side.at(1, j)));
        if (co.side.at(1, j) != want1 || co.side.at(2, j) != want2)
            throw std::domain_error(
                "singular_point_from_degenerate_flag: inconsistent degeneracy relations");
    }

    // s^2 + beta s + (alpha + beta^2) = 0
    FieldElem c0 = ctx.add(alpha, ctx.mul(beta, beta));
    std::vector<FieldElem> quad{c0, beta, ctx.one()};
    MatF a = adapted_basis(ctx, flag);
    auto point_from_s = [&](const FieldCtx& cx, const MatF& basis, const FieldElem& s) {
        std::vector<FieldElem> adapted(ring.nvars(), cx.zero());
        adapted[0] = s;
        adapted[1] = cx.one();
        return mat_vec(cx, basis, adapted);
    };
    auto roots = univariate_roots(ctx, quad);
    if (!roots.empty()) {
        auto pt = point_from_s(ctx, a, roots.front());
        auto g = gradient_at(f, pt);
        for (const auto& gi : g)
            if (!gi.is_zero())
                throw std::logic_error("singular_point_from_degenerate_flag: verification failed");
        if (!evaluate(f, pt).is_zero())
            throw std::logic_error("singular_point_from_degenerate_flag: verification failed");
        return SingularPoint{canonical_point(ctx, pt), ctx, 1};
    }
    // quadratic extension
    FieldCtx ext = make_field(ctx.p(), ctx.k() * 2);
    FieldEmbedding emb(ctx, ext);
    std::vector<FieldElem> quad2{emb.map(quad[0]), emb.map(quad[1]), emb.map(quad[2])};
    auto roots2 = univariate_roots(ext, quad2);
    if (roots2.empty())
        throw std::logic_error("singular_point_from_degenerate_flag: quadratic failed to split");
    MatF a2 = MatF::zero(ext, ring.nvars(), ring.nvars());
    for (unsigned r = 0; r < ring.nvars(); ++r)
        for (unsigned c = 0; c < ring.nvars(); ++c) a2.at(r, c) = emb.map(a.at(r, c));
    MultiPoly f2 = lift_poly(f, emb);
    auto pt = point_from_s(ext, a2, roots2.front());
    auto g = gradient_at(f2, pt);
    for (const auto& gi : g)
        if (!gi.is_zero())
            throw std::logic_error("singular_point_from_degenerate_flag: verification failed");
    if (!evaluate(f2, pt).is_zero())
        throw std::logic_error("singular_point_from_degenerate_flag: verification failed");
    return SingularPoint{canonical_point(ext, pt), ext, 2};
}

}  // namespace incidence
