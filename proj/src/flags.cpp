#include "incidence/flags.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace incidence {

namespace {

// ---------------------------------------------------------------------------
// Element views. The enumeration engine is templated on one of these so
// prime-field sweeps run on raw residues while extension fields go through
// the generic context arithmetic.

struct PrimeOps {
    using Elem = u64;
    u64 p;
    const FieldCtx* cx;

    u64 q() const { return p; }
    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const {
        u64 s = a + b;
        return s >= p ? s - p : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem mul(Elem a, Elem b) const { return a * b % p; }  // p < 2^31
    Elem inv(Elem a) const {
        // Fermat
        u64 r = 1, base = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return r;
    }
    Elem at(u64 idx) const { return idx; }
    u64 index(Elem a) const { return a; }
    Elem from_uint(u64 v) const { return v % p; }
    Elem from_field(const FieldElem& e) const { return e[0]; }
    FieldElem to_field(Elem a) const { return cx->elem_at(a); }
};

struct CtxOps {
    using Elem = FieldElem;
    const FieldCtx* cx;

    u64 q() const { return cx->q(); }
    Elem zero() const { return cx->zero(); }
    Elem one() const { return cx->one(); }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    Elem add(const Elem& a, const Elem& b) const { return cx->add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return cx->sub(a, b); }
    Elem neg(const Elem& a) const { return cx->neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return cx->mul(a, b); }
    Elem inv(const Elem& a) const { return cx->inv(a); }
    Elem at(u64 idx) const { return cx->elem_at(idx); }
    u64 index(const Elem& a) const { return cx->index_of(a); }
    Elem from_uint(u64 v) const { return cx->from_int(static_cast<i64>(v % cx->p())); }
    Elem from_field(const FieldElem& e) const { return e; }
    FieldElem to_field(const Elem& a) const { return a; }
};

template <class Ops>
struct Prep {
    unsigned nvars = 0;
    unsigned deg = 0;
    std::vector<unsigned char> exps;          // term-major, nvars per term
    std::vector<typename Ops::Elem> coeffs;   // one per term
    std::size_t terms() const { return coeffs.size(); }
};

template <class Ops>
Prep<Ops> prepare(const Ops& ops, const MultiPoly& f) {
    Prep<Ops> out;
    out.nvars = f.ring().nvars();
    out.deg = f.ring().d;
    out.exps.reserve(f.terms().size() * out.nvars);
    out.coeffs.reserve(f.terms().size());
    for (const auto& [e, c] : f.terms()) {
        for (unsigned x : e) out.exps.push_back(static_cast<unsigned char>(x));
        out.coeffs.push_back(ops.from_field(c));
    }
    return out;
}

template <class Ops>
typename Ops::Elem eval_prep(const Ops& ops, const Prep<Ops>& f,
                             const typename Ops::Elem* pt) {
    typename Ops::Elem acc = ops.zero();
    const unsigned char* e = f.exps.data();
    for (std::size_t t = 0; t < f.terms(); ++t, e += f.nvars) {
        typename Ops::Elem term = f.coeffs[t];
        bool dead = false;
        for (unsigned l = 0; l < f.nvars && !dead; ++l) {
            for (unsigned r = 0; r < e[l]; ++r) {
                term = ops.mul(term, pt[l]);
                if (ops.is_zero(term)) { dead = true; break; }
            }
        }
        if (!dead) acc = ops.add(acc, term);
    }
    return acc;
}

// Coefficients of F(base + t dir) truncated at degree `trunc`, with reusable
// workspace. Binomial coefficients are folded in through Pascal rows over the
// element type.
template <class Ops>
class Restrictor {
public:
    Restrictor(const Ops& ops, const Prep<Ops>* f) : ops_(ops), f_(f) {
        const unsigned d = f->deg;
        pascal_.assign((d + 1) * (d + 1), ops_.zero());
        for (unsigned i = 0; i <= d; ++i) {
            at(i, 0) = ops_.one();
            for (unsigned j = 1; j <= i; ++j)
                at(i, j) = j == i ? ops_.one() : ops_.add(at2(i - 1, j - 1), at2(i - 1, j));
        }
    }

    // out must hold trunc+1 entries; trunc <= deg.
    void run(const typename Ops::Elem* base, const typename Ops::Elem* dir, unsigned trunc,
             typename Ops::Elem* out) {
        using E = typename Ops::Elem;
        const unsigned nv = f_->nvars;
        for (unsigned i = 0; i <= trunc; ++i) out[i] = ops_.zero();
        acc_.assign(trunc + 1, ops_.zero());
        next_.assign(trunc + 1, ops_.zero());
        const unsigned char* e = f_->exps.data();
        for (std::size_t t = 0; t < f_->terms(); ++t, e += nv) {
            unsigned acc_deg = 0;
            acc_[0] = f_->coeffs[t];
            bool dead = false;
            for (unsigned l = 0; l < nv && !dead; ++l) {
                unsigned el = e[l];
                if (el == 0) continue;
                // multiply acc by (base_l + t dir_l)^el, truncated
                E bp = ops_.one();
                bpow_.assign(el + 1, ops_.zero());
                for (unsigned j = 0; j <= el; ++j) {
                    bpow_[j] = bp;
                    bp = ops_.mul(bp, base[l]);
                }
                unsigned out_deg = std::min(acc_deg + el, trunc);
                for (unsigned i = 0; i <= out_deg; ++i) next_[i] = ops_.zero();
                E dp = ops_.one();
                for (unsigned j = 0; j <= el; ++j) {
                    if (j > out_deg) break;
                    E fj = ops_.mul(at2(el, j), ops_.mul(bpow_[el - j], dp));
                    dp = ops_.mul(dp, dir[l]);
                    if (ops_.is_zero(fj)) continue;
                    unsigned hi = std::min(acc_deg, out_deg - j);
                    for (unsigned i = 0; i <= hi; ++i) {
                        if (ops_.is_zero(acc_[i])) continue;
                        next_[i + j] = ops_.add(next_[i + j], ops_.mul(acc_[i], fj));
                    }
                }
                acc_deg = out_deg;
                acc_.swap(next_);
                dead = true;
                for (unsigned i = 0; i <= acc_deg; ++i)
                    if (!ops_.is_zero(acc_[i])) { dead = false; break; }
            }
            if (!dead)
                for (unsigned i = 0; i <= acc_deg_of(e, trunc); ++i)
                    out[i] = ops_.add(out[i], acc_[i]);
        }
    }

private:
    unsigned acc_deg_of(const unsigned char* e, unsigned trunc) const {
        unsigned total = 0;
        for (unsigned l = 0; l < f_->nvars; ++l) total += e[l];
        return std::min(total, trunc);
    }
    typename Ops::Elem& at(unsigned i, unsigned j) { return pascal_[i * (f_->deg + 1) + j]; }
    const typename Ops::Elem& at2(unsigned i, unsigned j) const {
        return pascal_[i * (f_->deg + 1) + j];
    }

    Ops ops_;
    const Prep<Ops>* f_;
    std::vector<typename Ops::Elem> pascal_;
    std::vector<typename Ops::Elem> acc_, next_, bpow_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Canonical points and flags.

std::size_t pivot_index(const std::vector<FieldElem>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) return i;
    throw std::invalid_argument("pivot_index: zero vector");
}

std::vector<FieldElem> canonical_point(const FieldCtx& ctx, std::vector<FieldElem> p) {
    std::size_t piv = pivot_index(p);
    FieldElem inv = ctx.inv(p[piv]);
    for (auto& c : p) c = ctx.mul(c, inv);
    return p;
}

Flag make_flag(const FieldCtx& ctx, std::vector<FieldElem> p, std::vector<FieldElem> v) {
    if (p.size() != v.size() || p.size() < 3)
        throw std::invalid_argument("make_flag: need vectors of equal length >= 3");
    p = canonical_point(ctx, std::move(p));
    std::size_t piv = pivot_index(p);
    // reduce v modulo p so v[piv] = 0
    if (!v[piv].is_zero()) {
        FieldElem f = v[piv];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = ctx.sub(v[i], ctx.mul(f, p[i]));
    }
    bool zero = true;
    for (const auto& c : v)
        if (!c.is_zero()) { zero = false; break; }
    if (zero) throw std::invalid_argument("make_flag: p and v are projectively dependent");
    v = canonical_point(ctx, std::move(v));
    return Flag{std::move(p), std::move(v)};
}

std::string format_flag(const FieldCtx& ctx, const Flag& f) {
    std::ostringstream out;
    for (std::size_t i = 0; i < f.p.size(); ++i) {
        if (i) out << ',';
        out << ctx.format(f.p[i], '.');
    }
    out << ';';
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        if (i) out << ',';
        out << ctx.format(f.v[i], '.');
    }
    return out.str();
}

Flag parse_flag(const FieldCtx& ctx, unsigned n, const std::string& text) {
    auto semi = text.find(';');
    if (semi == std::string::npos) throw std::invalid_argument("parse_flag: expected 'p;v'");
    auto parse_vec = [&](const std::string& s) {
        std::vector<FieldElem> out;
        std::size_t start = 0;
        while (start <= s.size()) {
            auto comma = s.find(',', start);
            std::string tok =
                s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            out.push_back(ctx.parse_elem(tok));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (out.size() != n + 1)
            throw std::invalid_argument("parse_flag: expected " + std::to_string(n + 1) +
                                        " coordinates");
        return out;
    };
    return make_flag(ctx, parse_vec(text.substr(0, semi)), parse_vec(text.substr(semi + 1)));
}

Multiplicity multiplicity(const MultiPoly& f, const Flag& flag) {
    auto coeffs = restrict_to_line_general(f, flag.p, flag.v);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (!coeffs[i].is_zero()) return Multiplicity::finite(static_cast<unsigned>(i));
    return Multiplicity::inf();
}

MatF adapted_basis(const FieldCtx& ctx, const Flag& flag) {
    const std::size_t nv = flag.p.size();
    std::vector<std::vector<FieldElem>> cols{flag.p, flag.v};
    // incremental reduced echelon with private pivot columns; a unit vector
    // joins the basis when it does not reduce to zero
    std::vector<std::vector<FieldElem>> red;
    std::vector<std::size_t> piv;
    auto reduce_and_insert = [&](std::vector<FieldElem> w) {
        for (std::size_t r = 0; r < red.size(); ++r)
            if (!w[piv[r]].is_zero()) {
                FieldElem f = w[piv[r]];
                for (std::size_t c = 0; c < nv; ++c) w[c] = ctx.sub(w[c], ctx.mul(f, red[r][c]));
            }
        std::size_t pc = 0;
        while (pc < nv && w[pc].is_zero()) ++pc;
        if (pc == nv) return false;
        FieldElem inv = ctx.inv(w[pc]);
        for (auto& c : w) c = ctx.mul(c, inv);
        for (std::size_t r = 0; r < red.size(); ++r) {
            if (red[r][pc].is_zero()) continue;
            FieldElem f = red[r][pc];
            for (std::size_t c = 0; c < nv; ++c)
                red[r][c] = ctx.sub(red[r][c], ctx.mul(f, w[c]));
        }
        red.push_back(std::move(w));
        piv.push_back(pc);
        return true;
    };
    reduce_and_insert(flag.p);
    reduce_and_insert(flag.v);
    for (std::size_t i = 0; i < nv && cols.size() < nv; ++i) {
        std::vector<FieldElem> unit(nv, ctx.zero());
        unit[i] = ctx.one();
        if (reduce_and_insert(unit)) {
            std::vector<FieldElem> u(nv, ctx.zero());
            u[i] = ctx.one();
            cols.push_back(std::move(u));
        }
    }
    if (cols.size() != nv) throw std::logic_error("adapted_basis: completion failed");
    MatF a = MatF::zero(ctx, nv, nv);
    for (std::size_t c = 0; c < nv; ++c)
        for (std::size_t r = 0; r < nv; ++r) a.at(r, c) = cols[c][r];
    return a;
}

u64 projective_point_count(u64 q, unsigned dim) {
    u64 total = 0, power = 1;
    for (unsigned i = 0; i <= dim; ++i) {
        total += power;
        power *= q;
    }
    return total;
}

u64 flag_count(u64 q, unsigned n) {
    return projective_point_count(q, n) * projective_point_count(q, n - 1);
}

u64 line_count(u64 q, unsigned n) {
    // Each line carries q+1 flags, so #lines = #flags / (q+1).
    return flag_count(q, n) / (q + 1);
}

MultBound MultBound::parse(const std::string& s) {
    if (s == "inf" || s == "INF" || s == "oo") return MultBound::inf();
    unsigned m = static_cast<unsigned>(std::stoul(s));
    return MultBound::finite(m);
}

std::string MultBound::str() const { return infinite ? "inf" : std::to_string(m); }

void enumerate_points(const FieldCtx& ctx, unsigned n,
                      const std::function<bool(const std::vector<FieldElem>&)>& visit) {
    const u64 q = ctx.q();
    std::vector<FieldElem> p(n + 1, ctx.zero());
    for (unsigned piv = 0; piv <= n; ++piv) {
        for (auto& c : p) c = ctx.zero();
        p[piv] = ctx.one();
        unsigned free = n - piv;
        std::vector<u64> idx(free, 0);
        for (;;) {
            for (unsigned i = 0; i < free; ++i) p[piv + 1 + i] = ctx.elem_at(idx[i]);
            if (!visit(p)) return;
            unsigned pos = 0;
            while (pos < free && ++idx[pos] == q) idx[pos++] = 0;
            if (pos == free) break;
        }
    }
}

void enumerate_flags(const FieldCtx& ctx, unsigned n, const EnumCaps& caps,
                     const std::function<bool(const Flag&)>& visit) {
    if (n < 2) throw std::invalid_argument("enumerate_flags: n must be >= 2");
    if (flag_count(ctx.q(), n) > caps.max_visits)
        throw ResourceLimit("enumerate_flags: flag count exceeds budget");
    enumerate_points(ctx, n, [&](const std::vector<FieldElem>& p) {
        std::size_t piv = pivot_index(p);
        const u64 q = ctx.q();
        Flag f;
        f.p = p;
        f.v.assign(n + 1, ctx.zero());
        // canonical v: v[piv] = 0, pivot over remaining indices in order
        std::vector<std::size_t> free_idx;
        for (std::size_t i = 0; i <= n; ++i)
            if (i != piv) free_idx.push_back(i);
        for (std::size_t t = 0; t < free_idx.size(); ++t) {
            for (auto& c : f.v) c = ctx.zero();
            f.v[free_idx[t]] = ctx.one();
            std::size_t tail = free_idx.size() - t - 1;
            std::vector<u64> idx(tail, 0);
            for (;;) {
                for (std::size_t i = 0; i < tail; ++i)
                    f.v[free_idx[t + 1 + i]] = ctx.elem_at(idx[i]);
                if (!visit(f)) return false;
                std::size_t pos = 0;
                while (pos < tail && ++idx[pos] == q) idx[pos++] = 0;
                if (pos == tail) break;
            }
        }
        return true;
    });
}

void enumerate_lines(const FieldCtx& ctx, unsigned n, const EnumCaps& caps,
                     const std::function<bool(const Flag&)>& visit) {
    if (n < 2) throw std::invalid_argument("enumerate_lines: n must be >= 2");
    if (line_count(ctx.q(), n) > caps.max_visits)
        throw ResourceLimit("enumerate_lines: line count exceeds budget");
    const u64 q = ctx.q();
    // reduced row echelon 2x(n+1) matrices: pivots i < j; row0 = e_i + free
    // entries at columns > i except j; row1 = e_j + free entries at columns > j
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j <= n; ++j) {
            std::vector<unsigned> free0, free1;
            for (unsigned c = i + 1; c <= n; ++c)
                if (c != j) free0.push_back(c);
            for (unsigned c = j + 1; c <= n; ++c) free1.push_back(c);
            const std::size_t nf = free0.size() + free1.size();
            std::vector<u64> idx(nf, 0);
            Flag f;
            f.p.assign(n + 1, ctx.zero());
            f.v.assign(n + 1, ctx.zero());
            for (;;) {
                for (auto& c : f.p) c = ctx.zero();
                for (auto& c : f.v) c = ctx.zero();
                f.p[i] = ctx.one();
                f.v[j] = ctx.one();
                for (std::size_t t = 0; t < free0.size(); ++t)
                    f.p[free0[t]] = ctx.elem_at(idx[t]);
                for (std::size_t t = 0; t < free1.size(); ++t)
                    f.v[free1[t]] = ctx.elem_at(idx[free0.size() + t]);
                if (!visit(f)) return;
                std::size_t pos = 0;
                while (pos < nf && ++idx[pos] == q) idx[pos++] = 0;
                if (pos == nf) break;
            }
        }
    }
}

void enumerate_fiber(const FieldCtx& ctx, const std::vector<FieldElem>& p_in,
                     const std::vector<FieldElem>* gradient,
                     const std::function<bool(const Flag&)>& visit) {
    auto p = canonical_point(ctx, p_in);
    const std::size_t n = p.size() - 1;
    const std::size_t piv = pivot_index(p);
    const u64 q = ctx.q();
    Flag f;
    f.p = p;
    f.v.assign(n + 1, ctx.zero());
    if (gradient == nullptr) {
        std::vector<std::size_t> free_idx;
        for (std::size_t i = 0; i <= n; ++i)
            if (i != piv) free_idx.push_back(i);
        for (std::size_t t = 0; t < free_idx.size(); ++t) {
            std::size_t tail = free_idx.size() - t - 1;
            std::vector<u64> idx(tail, 0);
            for (;;) {
                for (auto& c : f.v) c = ctx.zero();
                f.v[free_idx[t]] = ctx.one();
                for (std::size_t i = 0; i < tail; ++i)
                    f.v[free_idx[t + 1 + i]] = ctx.elem_at(idx[i]);
                if (!visit(f)) return;
                std::size_t pos = 0;
                while (pos < tail && ++idx[pos] == q) idx[pos++] = 0;
                if (pos == tail) break;
            }
        }
        return;
    }
    const auto& g = *gradient;
    std::size_t jstar = n + 1;
    for (std::size_t i = 0; i <= n; ++i)
        if (i != piv && !g[i].is_zero()) { jstar = i; break; }
    if (jstar == n + 1)
        throw std::invalid_argument("enumerate_fiber: gradient vanishes on the fiber subspace");
    FieldElem gj_inv = ctx.inv(g[jstar]);
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i <= n; ++i)
        if (i != piv && i != jstar) rest.push_back(i);
    std::vector<FieldElem> shift(rest.size(), ctx.zero());
    for (std::size_t i = 0; i < rest.size(); ++i)
        shift[i] = ctx.neg(ctx.mul(g[rest[i]], gj_inv));
    for (std::size_t t = 0; t < rest.size(); ++t) {
        std::size_t tail = rest.size() - t - 1;
        std::vector<u64> idx(tail, 0);
        for (;;) {
            for (auto& c : f.v) c = ctx.zero();
            f.v[rest[t]] = ctx.one();
            FieldElem acc = shift[t];
            for (std::size_t i = 0; i < tail; ++i) {
                FieldElem ci = ctx.elem_at(idx[i]);
                f.v[rest[t + 1 + i]] = ci;
                acc = ctx.add(acc, ctx.mul(ci, shift[t + 1 + i]));
            }
            f.v[jstar] = acc;
            f.v = canonical_point(ctx, std::move(f.v));
            if (!visit(f)) return;
            std::size_t pos = 0;
            while (pos < tail && ++idx[pos] == q) idx[pos++] = 0;
            if (pos == tail) break;
        }
    }
}

MultiPoly lift_poly(const MultiPoly& f, const FieldEmbedding& emb) {
    PolyRing ring = f.ring();
    ring.ctx = emb.dst();
    MultiPoly out(ring);
    for (const auto& [e, c] : f.terms()) out.add_term(e, emb.map(c));
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration engine.

namespace {

struct Budget {
    u64 used = 0;
    u64 cap = 0;
    void charge(u64 amount) {
        used += amount;
        if (used > cap) throw ResourceLimit("enumeration budget exceeded");
    }
};

template <class Ops>
class Engine {
public:
    using E = typename Ops::Elem;

    Engine(const Ops& ops, const MultiPoly& f, const EnumCaps& caps)
        : ops_(ops), n_(f.ring().n), d_(f.ring().d), fprep_(prepare(ops, f)),
          restrict_(ops, &fprep_) {
        budget_.cap = caps.max_visits;
        auto parts = partials(f);
        for (const auto& pf : parts) pparts_.push_back(prepare(ops_, pf));
    }

    // Canonical representatives of X_F, chart by chart; univariate roots in
    // the last coordinate per assignment of the outer ones.
    bool scan_X(const std::function<bool(const std::vector<E>&, unsigned)>& visit) {
        const u64 q = ops_.q();
        std::vector<E> pt(n_ + 1, ops_.zero());
        for (unsigned piv = 0; piv <= n_; ++piv) {
            // filter terms with support allowed in this chart
            std::vector<std::size_t> live;
            const unsigned char* e = fprep_.exps.data();
            for (std::size_t t = 0; t < fprep_.terms(); ++t, e += fprep_.nvars) {
                bool ok = true;
                for (unsigned l = 0; l < piv; ++l)
                    if (e[l] != 0) { ok = false; break; }
                if (ok) live.push_back(t);
            }
            for (auto& c : pt) c = ops_.zero();
            pt[piv] = ops_.one();
            const unsigned nfree = n_ - piv;
            if (nfree == 0) {
                budget_.charge(1);
                E val = ops_.zero();
                for (auto t : live) {
                    // all exponents on x_piv only
                    val = ops_.add(val, fprep_.coeffs[t]);
                }
                if (ops_.is_zero(val) && !visit(pt, piv)) return false;
                continue;
            }
            // outer vars piv+1..n-1, inner var n
            const unsigned nouter = nfree - 1;
            std::vector<u64> idx(nouter, 0);
            std::vector<E> univ(d_ + 1, ops_.zero());
            std::vector<E> pows((nouter ? nouter : 1) * (d_ + 1), ops_.zero());
            for (;;) {
                for (unsigned i = 0; i < nouter; ++i) pt[piv + 1 + i] = ops_.at(idx[i]);
                // power tables for outer values
                for (unsigned i = 0; i < nouter; ++i) {
                    E* row = pows.data() + i * (d_ + 1);
                    row[0] = ops_.one();
                    for (unsigned j = 1; j <= d_; ++j) row[j] = ops_.mul(row[j - 1], pt[piv + 1 + i]);
                }
                for (auto& c : univ) c = ops_.zero();
                for (auto t : live) {
                    const unsigned char* te = fprep_.exps.data() + t * fprep_.nvars;
                    E coef = fprep_.coeffs[t];
                    bool dead = false;
                    for (unsigned i = 0; i < nouter; ++i) {
                        unsigned el = te[piv + 1 + i];
                        if (el == 0) continue;
                        coef = ops_.mul(coef, pows[i * (d_ + 1) + el]);
                        if (ops_.is_zero(coef)) { dead = true; break; }
                    }
                    if (!dead) univ[te[n_]] = ops_.add(univ[te[n_]], coef);
                }
                budget_.charge(1 + fprep_.terms());
                if (!roots_and_visit(univ, pt, piv, visit)) return false;
                unsigned pos = 0;
                while (pos < nouter && ++idx[pos] == q) idx[pos++] = 0;
                if (pos == nouter || nouter == 0) break;
            }
        }
        return true;
    }

    std::vector<E> gradient(const std::vector<E>& pt) {
        std::vector<E> g;
        g.reserve(n_ + 1);
        for (auto& pp : pparts_) g.push_back(eval_prep(ops_, pp, pt.data()));
        return g;
    }

    // Degree-<=2 part of F(p + v) as a polynomial in v: constant F(p), the
    // gradient, and the packed upper-triangular quadratic form whose value at
    // v is the line-restriction coefficient f_2.
    struct Quad2 {
        E constant;
        std::vector<E> lin;   // n+1
        std::vector<E> quad;  // (n+1)(n+2)/2, index l <= l'
    };

    std::size_t quad_index(unsigned l, unsigned lp) const {
        return static_cast<std::size_t>(l) * (n_ + 1) - l * (l + 1) / 2 + lp;
    }

    void deg2_at(const std::vector<E>& pt, Quad2& out) {
        const unsigned nv = n_ + 1;
        out.constant = ops_.zero();
        out.lin.assign(nv, ops_.zero());
        out.quad.assign(static_cast<std::size_t>(nv) * (nv + 1) / 2, ops_.zero());
        const unsigned char* e = fprep_.exps.data();
        std::vector<unsigned> active;
        std::vector<E> pw0, pw1, pw2;  // p^e, p^{e-1}, p^{e-2} per active var
        for (std::size_t t = 0; t < fprep_.terms(); ++t, e += fprep_.nvars) {
            active.clear();
            for (unsigned l = 0; l < nv; ++l)
                if (e[l] > 0) active.push_back(l);
            const std::size_t na = active.size();
            pw0.assign(na, ops_.one());
            pw1.assign(na, ops_.one());
            pw2.assign(na, ops_.one());
            for (std::size_t i = 0; i < na; ++i) {
                unsigned el = e[active[i]];
                const E& x = pt[active[i]];
                E low = ops_.one();
                for (unsigned r = 0; r + 2 < el; ++r) low = ops_.mul(low, x);  // x^{el-2}
                pw2[i] = low;
                pw1[i] = el >= 1 ? (el >= 2 ? ops_.mul(low, x) : ops_.one()) : low;
                pw0[i] = ops_.mul(pw1[i], x);
            }
            const E& c = fprep_.coeffs[t];
            // constant part
            E full = c;
            for (std::size_t i = 0; i < na; ++i) full = ops_.mul(full, pw0[i]);
            out.constant = ops_.add(out.constant, full);
            // linear part: e_l p^{e - delta_l}
            for (std::size_t i = 0; i < na; ++i) {
                unsigned el = e[active[i]];
                E prod = ops_.mul(c, mul_scalar(el));
                if (ops_.is_zero(prod)) continue;
                prod = ops_.mul(prod, pw1[i]);
                for (std::size_t j = 0; j < na; ++j)
                    if (j != i) prod = ops_.mul(prod, pw0[j]);
                out.lin[active[i]] = ops_.add(out.lin[active[i]], prod);
            }
            // quadratic part
            for (std::size_t i = 0; i < na; ++i) {
                unsigned el = e[active[i]];
                if (el >= 2) {
                    u64 cf = static_cast<u64>(el) * (el - 1) / 2;
                    E prod = ops_.mul(c, mul_scalar(cf));
                    if (!ops_.is_zero(prod)) {
                        prod = ops_.mul(prod, pw2[i]);
                        for (std::size_t j = 0; j < na; ++j)
                            if (j != i) prod = ops_.mul(prod, pw0[j]);
                        auto qi = quad_index(active[i], active[i]);
                        out.quad[qi] = ops_.add(out.quad[qi], prod);
                    }
                }
                for (std::size_t j = i + 1; j < na; ++j) {
                    unsigned ej = e[active[j]];
                    u64 cf = static_cast<u64>(el) * ej;
                    E prod = ops_.mul(c, mul_scalar(cf));
                    if (ops_.is_zero(prod)) continue;
                    prod = ops_.mul(prod, ops_.mul(pw1[i], pw1[j]));
                    for (std::size_t r = 0; r < na; ++r)
                        if (r != i && r != j) prod = ops_.mul(prod, pw0[r]);
                    auto qi = quad_index(active[i], active[j]);
                    out.quad[qi] = ops_.add(out.quad[qi], prod);
                }
            }
        }
        budget_.charge(fprep_.terms());
    }

    E eval_quad(const Quad2& q, const std::vector<E>& v) const {
        E acc = ops_.zero();
        for (unsigned l = 0; l <= n_; ++l) {
            if (ops_.is_zero(v[l])) continue;
            for (unsigned lp = l; lp <= n_; ++lp) {
                const E& coef = q.quad[quad_index(l, lp)];
                if (ops_.is_zero(coef)) continue;
                acc = ops_.add(acc, ops_.mul(coef, ops_.mul(v[l], v[lp])));
            }
        }
        return acc;
    }

    // Canonical v over the fiber of lines through pt (pivot `piv`), optionally
    // restricted to ker(g . v). Visitor returns false to stop; function
    // returns false when stopped.
    bool fiber(const std::vector<E>& /*pt*/, unsigned piv, const std::vector<E>* g,
               const std::function<bool(const std::vector<E>&)>& visit) {
        const u64 q = ops_.q();
        std::vector<E> v(n_ + 1, ops_.zero());
        if (g == nullptr) {
            std::vector<unsigned> free_idx;
            for (unsigned i = 0; i <= n_; ++i)
                if (i != piv) free_idx.push_back(i);
            for (std::size_t t = 0; t < free_idx.size(); ++t) {
                for (auto& c : v) c = ops_.zero();
                v[free_idx[t]] = ops_.one();
                std::size_t tail = free_idx.size() - t - 1;
                std::vector<u64> idx(tail, 0);
                for (;;) {
                    for (std::size_t i = 0; i < tail; ++i)
                        v[free_idx[t + 1 + i]] = ops_.at(idx[i]);
                    budget_.charge(1);
                    if (!visit(v)) return false;
                    std::size_t pos = 0;
                    while (pos < tail && ++idx[pos] == q) idx[pos++] = 0;
                    if (pos == tail) break;
                }
            }
            return true;
        }
        // tangent fiber: {v : v[piv] = 0, g.v = 0}; g restricted to the
        // coordinate subspace is nonzero (g.p = d F(p) = 0 and p[piv] = 1)
        unsigned jstar = n_ + 1;
        for (unsigned i = 0; i <= n_; ++i)
            if (i != piv && !ops_.is_zero((*g)[i])) { jstar = i; break; }
        if (jstar == n_ + 1) throw std::logic_error("fiber: zero gradient in tangent mode");
        E gj_inv = ops_.inv((*g)[jstar]);
        std::vector<unsigned> rest;  // basis indices
        for (unsigned i = 0; i <= n_; ++i)
            if (i != piv && i != jstar) rest.push_back(i);
        // basis vectors w_i = e_{rest[i]} - (g_{rest[i]}/g_{jstar}) e_{jstar}
        std::vector<E> shift(rest.size(), ops_.zero());
        for (std::size_t i = 0; i < rest.size(); ++i)
            shift[i] = ops_.neg(ops_.mul((*g)[rest[i]], gj_inv));
        for (std::size_t t = 0; t < rest.size(); ++t) {
            std::size_t tail = rest.size() - t - 1;
            std::vector<u64> idx(tail, 0);
            for (;;) {
                for (auto& c : v) c = ops_.zero();
                // coefficient 1 on basis t, free on later basis vectors
                v[rest[t]] = ops_.one();
                E acc_shift = shift[t];
                for (std::size_t i = 0; i < tail; ++i) {
                    E ci = ops_.at(idx[i]);
                    v[rest[t + 1 + i]] = ci;
                    acc_shift = ops_.add(acc_shift, ops_.mul(ci, shift[t + 1 + i]));
                }
                v[jstar] = acc_shift;
                // ambient canonicalization
                for (unsigned i = 0; i <= n_; ++i) {
                    if (ops_.is_zero(v[i])) continue;
                    if (ops_.index(v[i]) != 1) {
                        E inv = ops_.inv(v[i]);
                        for (unsigned l = 0; l <= n_; ++l) v[l] = ops_.mul(v[l], inv);
                    }
                    break;
                }
                budget_.charge(1);
                if (!visit(v)) return false;
                std::size_t pos = 0;
                while (pos < tail && ++idx[pos] == q) idx[pos++] = 0;
                if (pos == tail) break;
            }
        }
        return true;
    }

    // Restriction helpers.
    void restrict_full(const std::vector<E>& p, const std::vector<E>& v, std::vector<E>& out) {
        out.assign(d_ + 1, ops_.zero());
        restrict_.run(p.data(), v.data(), d_, out.data());
        budget_.charge(fprep_.terms());
    }
    void restrict_trunc(const std::vector<E>& p, const std::vector<E>& v, unsigned trunc,
                        std::vector<E>& out) {
        out.assign(trunc + 1, ops_.zero());
        restrict_.run(p.data(), v.data(), trunc, out.data());
        budget_.charge(fprep_.terms());
    }

    const Ops& ops() const { return ops_; }
    unsigned n() const { return n_; }
    unsigned d() const { return d_; }

    E mul_scalar(u64 v) const { return ops_.from_uint(v); }

private:
    bool roots_and_visit(const std::vector<E>& univ, std::vector<E>& pt, unsigned piv,
                         const std::function<bool(const std::vector<E>&, unsigned)>& visit) {
        const u64 q = ops_.q();
        bool zero = true;
        for (const auto& c : univ)
            if (!ops_.is_zero(c)) { zero = false; break; }
        if (zero) {
            budget_.charge(q);
            for (u64 z = 0; z < q; ++z) {
                pt[n_] = ops_.at(z);
                if (!visit(pt, piv)) return false;
            }
            return true;
        }
        if constexpr (std::is_same_v<Ops, CtxOps>) {
            if (q > 4096) {
                budget_.charge(64);
                auto roots = univariate_roots_any(*ops_.cx, univ, u64{1} << 21);
                for (const auto& r : roots) {
                    pt[n_] = r;
                    if (!visit(pt, piv)) return false;
                }
                return true;
            }
        }
        budget_.charge(q);
        for (u64 z = 0; z < q; ++z) {
            E zv = ops_.at(z);
            E acc = ops_.zero();
            for (std::size_t i = univ.size(); i-- > 0;) acc = ops_.add(ops_.mul(acc, zv), univ[i]);
            if (ops_.is_zero(acc)) {
                pt[n_] = zv;
                if (!visit(pt, piv)) return false;
            }
        }
        return true;
    }

    Ops ops_;
    unsigned n_, d_;
    Prep<Ops> fprep_;
    std::vector<Prep<Ops>> pparts_;
    Restrictor<Ops> restrict_;
    Budget budget_;
};

// mult >= 2 holds automatically on tangent fibers; stage-2 truncation rejects
// most candidates for m >= 3 before a full restriction.
template <class Ops>
bool sweep_Y(Engine<Ops>& eng, MultBound m, bool count_only, u64* count_out,
             const std::function<bool(const std::vector<typename Ops::Elem>&,
                                      const std::vector<typename Ops::Elem>&,
                                      const Multiplicity&)>& visit) {
    using E = typename Ops::Elem;
    const auto& ops = eng.ops();
    const unsigned n = eng.n();
    const unsigned d = eng.d();
    const unsigned mreq = m.infinite ? d + 1 : m.m;
    if (!m.infinite && (m.m < 1 || m.m > d))
        throw std::invalid_argument("Y enumeration: require 1 <= m <= d or m = inf");
    u64 count = 0;
    std::vector<E> rc;
    typename Engine<Ops>::Quad2 q2;
    bool completed = eng.scan_X([&](const std::vector<E>& p, unsigned piv) {
        if (m.m == 1 && !m.infinite) {
            if (count_only) {
                count += projective_point_count(ops.q(), n - 1);
                return true;
            }
            return eng.fiber(p, piv, nullptr, [&](const std::vector<E>& v) {
                eng.restrict_full(p, v, rc);
                Multiplicity mult = Multiplicity::inf();
                for (unsigned i = 0; i <= d; ++i)
                    if (!ops.is_zero(rc[i])) { mult = Multiplicity::finite(i); break; }
                return visit(p, v, mult);
            });
        }
        eng.deg2_at(p, q2);
        bool singular = true;
        for (const auto& c : q2.lin)
            if (!ops.is_zero(c)) { singular = false; break; }
        if (!m.infinite && m.m == 2 && count_only) {
            count += singular ? projective_point_count(ops.q(), n - 1)
                              : projective_point_count(ops.q(), n - 2);
            return true;
        }
        return eng.fiber(p, piv, singular ? nullptr : &q2.lin, [&](const std::vector<E>& v) {
            // cheap degree-2 probe: a nonzero f_2 pins the multiplicity at 2
            if (mreq >= 3 && !ops.is_zero(eng.eval_quad(q2, v))) return true;
            if (!m.infinite && mreq > 3) {
                eng.restrict_trunc(p, v, mreq - 1, rc);
                bool below = false;
                for (unsigned i = 0; i < mreq; ++i)
                    if (!ops.is_zero(rc[i])) { below = true; break; }
                if (below) return true;
            }
            eng.restrict_full(p, v, rc);
            Multiplicity mult = Multiplicity::inf();
            for (unsigned i = 0; i <= d; ++i)
                if (!ops.is_zero(rc[i])) { mult = Multiplicity::finite(i); break; }
            if (!mult.at_least(mreq)) return true;
            if (m.infinite && !mult.infinite) return true;
            if (count_only) { ++count; return true; }
            return visit(p, v, mult);
        });
    });
    if (count_out) *count_out = count;
    return completed;
}

// Runtime dispatch between the raw prime path and the generic one.
template <class Fn>
auto with_ops(const FieldCtx& ctx, Fn&& fn) {
    if (ctx.prime_field() && ctx.p() < (u64{1} << 31)) {
        return fn(PrimeOps{ctx.p(), &ctx});
    }
    return fn(CtxOps{&ctx});
}

template <class Ops>
Flag flag_from_elems(const Ops& ops, const FieldCtx& ctx,
                     const std::vector<typename Ops::Elem>& p,
                     const std::vector<typename Ops::Elem>& v) {
    Flag f;
    f.p.reserve(p.size());
    f.v.reserve(v.size());
    for (const auto& e : p) f.p.push_back(ops.to_field(e));
    for (const auto& e : v) f.v.push_back(ops.to_field(e));
    (void)ctx;
    return f;
}

// Reduced-echelon representative of the line spanned by a flag: the unique
// basis (r0, r1) with sorted pivot columns, pivot entries 1, and each pivot
// column cleared in the other row. It is itself a canonical flag.
Flag line_rref(const FieldCtx& ctx, const Flag& f) {
    std::vector<std::vector<FieldElem>> rows{f.p, f.v};
    const std::size_t nv = f.p.size();
    std::size_t prow = 0;
    for (std::size_t c = 0; c < nv && prow < 2; ++c) {
        std::size_t sel = prow;
        while (sel < 2 && rows[sel][c].is_zero()) ++sel;
        if (sel == 2) continue;
        std::swap(rows[sel], rows[prow]);
        FieldElem inv = ctx.inv(rows[prow][c]);
        for (std::size_t j = 0; j < nv; ++j) rows[prow][j] = ctx.mul(rows[prow][j], inv);
        for (std::size_t r = 0; r < 2; ++r) {
            if (r == prow || rows[r][c].is_zero()) continue;
            FieldElem fac = rows[r][c];
            for (std::size_t j = 0; j < nv; ++j)
                rows[r][j] = ctx.sub(rows[r][j], ctx.mul(fac, rows[prow][j]));
        }
        ++prow;
    }
    return Flag{std::move(rows[0]), std::move(rows[1])};
}

}  // namespace

bool for_each_X_point(const MultiPoly& f, const EnumCaps& caps,
                      const std::function<bool(const std::vector<FieldElem>&)>& visit) {
    const FieldCtx& ctx = f.ring().ctx;
    return with_ops(ctx, [&](auto ops) {
        Engine<decltype(ops)> eng(ops, f, caps);
        using E = typename decltype(ops)::Elem;
        return eng.scan_X([&](const std::vector<E>& p, unsigned) {
            std::vector<FieldElem> out;
            out.reserve(p.size());
            for (const auto& e : p) out.push_back(ops.to_field(e));
            return visit(out);
        });
    });
}

u64 count_X(const MultiPoly& f, const EnumCaps& caps) {
    const FieldCtx& ctx = f.ring().ctx;
    return with_ops(ctx, [&](auto ops) -> u64 {
        Engine<decltype(ops)> eng(ops, f, caps);
        using E = typename decltype(ops)::Elem;
        u64 count = 0;
        eng.scan_X([&](const std::vector<E>&, unsigned) {
            ++count;
            return true;
        });
        return count;
    });
}

bool for_each_Y_flag(const MultiPoly& f, MultBound m, const EnumCaps& caps,
                     const std::function<bool(const Flag&, const Multiplicity&)>& visit) {
    const FieldCtx& ctx = f.ring().ctx;
    return with_ops(ctx, [&](auto ops) {
        Engine<decltype(ops)> eng(ops, f, caps);
        using E = typename decltype(ops)::Elem;
        return sweep_Y<decltype(ops)>(
            eng, m, false, nullptr,
            [&](const std::vector<E>& p, const std::vector<E>& v, const Multiplicity& mult) {
                return visit(flag_from_elems(ops, ctx, p, v), mult);
            });
    });
}

u64 count_Y(const MultiPoly& f, MultBound m, const EnumCaps& caps) {
    const FieldCtx& ctx = f.ring().ctx;
    return with_ops(ctx, [&](auto ops) -> u64 {
        Engine<decltype(ops)> eng(ops, f, caps);
        u64 count = 0;
        sweep_Y<decltype(ops)>(eng, m, true, &count, nullptr);
        return count;
    });
}

bool for_each_Z_line(const MultiPoly& f, const EnumCaps& caps,
                     const std::function<bool(const Flag&)>& visit) {
    const FieldCtx& ctx = f.ring().ctx;
    const unsigned n = f.ring().n;
    // Small q: direct echelon enumeration; large q: tangent sweep + dedupe.
    if (line_count(ctx.q(), n) <= caps.max_visits / 4) {
        bool stopped = false;
        const unsigned d = f.ring().d;
        enumerate_lines(ctx, n, caps, [&](const Flag& line) {
            auto rc = line_restriction(f, line.p, line.v);
            for (unsigned i = 0; i <= d; ++i)
                if (!rc[i].is_zero()) return true;
            if (!visit(line)) { stopped = true; return false; }
            return true;
        });
        return !stopped;
    }
    std::set<Flag> seen;
    bool ok = for_each_Y_flag(f, MultBound::inf(), caps, [&](const Flag& fl, const Multiplicity&) {
        Flag key = line_rref(ctx, fl);
        if (seen.insert(key).second) return visit(key);
        return true;
    });
    return ok;
}

u64 count_Z(const MultiPoly& f, const EnumCaps& caps) {
    u64 count = 0;
    for_each_Z_line(f, caps, [&](const Flag&) {
        ++count;
        return true;
    });
    return count;
}

SchemeResult enumerate_scheme(const MultiPoly& f, SchemeKind kind, MultBound m,
                              const EnumCaps& caps) {
    SchemeResult out;
    switch (kind) {
        case SchemeKind::X:
            for_each_X_point(f, caps, [&](const std::vector<FieldElem>& p) {
                ++out.count;
                if (out.points.size() < caps.max_list)
                    out.points.push_back(p);
                else
                    out.truncated = true;
                return true;
            });
            break;
        case SchemeKind::Y:
            for_each_Y_flag(f, m, caps, [&](const Flag& fl, const Multiplicity&) {
                ++out.count;
                if (out.flags.size() < caps.max_list)
                    out.flags.push_back(fl);
                else
                    out.truncated = true;
                return true;
            });
            break;
        case SchemeKind::Z:
            for_each_Z_line(f, caps, [&](const Flag& fl) {
                ++out.count;
                if (out.flags.size() < caps.max_list)
                    out.flags.push_back(fl);
                else
                    out.truncated = true;
                return true;
            });
            break;
    }
    return out;
}

ExtensionWitness nonempty_over_extensions(const MultiPoly& f, MultBound m, unsigned max_deg,
                                          const EnumCaps& caps) {
    if (max_deg < 1) throw std::invalid_argument("nonempty_over_extensions: max_deg >= 1");
    const FieldCtx& base = f.ring().ctx;
    ExtensionWitness out;
    for (unsigned j = 1; j <= max_deg; ++j) {
        FieldCtx ext = j == 1 ? base : make_field(base.p(), base.k() * j);
        MultiPoly lifted = [&] {
            if (j == 1) return f;
            FieldEmbedding emb(base, ext);
            return lift_poly(f, emb);
        }();
        bool found = false;
        Flag witness;
        for_each_Y_flag(lifted, m, caps, [&](const Flag& fl, const Multiplicity&) {
            witness = fl;
            found = true;
            return false;
        });
        if (found) {
            out.found = true;
            out.degree = j;
            out.flag = witness;
            out.field = ext;
            return out;
        }
    }
    return out;
}

}  // namespace incidence
