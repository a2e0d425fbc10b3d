#include "incidence/fields.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace incidence {

namespace {

using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 inv_mod_p(u64 a, u64 p) {
    // p prime, a != 0 mod p.
    return powmod_u64(a % p, p - 2, p);
}

// ---- dense univariate arithmetic over GF(p), used for minimal polynomials.

using Fp = std::vector<u64>;  // coefficients, index = degree

void fp_trim(Fp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Fp fp_mulmod(const Fp& a, const Fp& b, const Fp& mod, u64 p) {
    if (a.empty() || b.empty()) return {};
    Fp prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + mulmod_u64(a[i], b[j], p)) % p;
    }
    // mod is monic of degree deg = mod.size()-1
    const std::size_t deg = mod.size() - 1;
    for (std::size_t i = prod.size(); i-- > deg;) {
        u64 c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (std::size_t j = 0; j < deg; ++j) {
            u64 t = mulmod_u64(c, mod[j], p);
            prod[i - deg + j] = (prod[i - deg + j] + p - t) % p;
        }
    }
    prod.resize(deg);
    fp_trim(prod);
    return prod;
}

Fp fp_powmod_x(u64 e, const Fp& mod, u64 p) {
    // x^e mod `mod`
    Fp result{1};
    Fp base = fp_mulmod({0, 1}, {1}, mod, p);  // x reduced mod `mod`
    while (e) {
        if (e & 1) result = fp_mulmod(result, base, mod, p);
        base = fp_mulmod(base, base, mod, p);
        e >>= 1;
    }
    return result;
}

Fp fp_gcd(Fp a, Fp b, u64 p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // a mod b
        u64 lead_inv = inv_mod_p(b.back(), p);
        while (a.size() >= b.size()) {
            u64 c = mulmod_u64(a.back(), lead_inv, p);
            if (c != 0) {
                std::size_t off = a.size() - b.size();
                for (std::size_t j = 0; j < b.size(); ++j) {
                    u64 t = mulmod_u64(c, b[j], p);
                    a[off + j] = (a[off + j] + p - t) % p;
                }
            }
            // highest coefficient is now zero
            a.pop_back();
            fp_trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

// f monic of degree k >= 2, coefficients f[0..k] with f[k] = 1. Irreducible
// over GF(p) iff it shares no factor with x^{p^i} - x for i <= k/2.
bool fp_irreducible(const Fp& f, u64 p) {
    const std::size_t k = f.size() - 1;
    for (std::size_t i = 1; i <= k / 2; ++i) {
        u64 e = 1;
        for (std::size_t t = 0; t < i; ++t) e *= p;  // p^i; p^8 <= 2^63 for p < 2^8 at k=16
        Fp xe = fp_powmod_x(e, f, p);
        // xe - x
        if (xe.size() < 2) xe.resize(2, 0);
        xe[1] = (xe[1] + p - 1) % p;
        fp_trim(xe);
        Fp g = fp_gcd(f, xe, p);
        if (g.size() != 1) return false;  // nontrivial common factor
    }
    return true;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 s : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % s == 0) return n == s;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

FieldCtx make_field(u64 p, unsigned k) {
    if (!is_prime_u64(p)) throw std::invalid_argument("make_field: p is not prime");
    if (k < 1 || k > 16) throw std::invalid_argument("make_field: k out of range [1,16]");
    FieldCtx ctx;
    ctx.p_ = p;
    ctx.k_ = k;
    // q = p^k with overflow guard
    u128 q = 1;
    for (unsigned i = 0; i < k; ++i) {
        q *= p;
        if (q > (u128(1) << 62)) throw std::invalid_argument("make_field: p^k too large");
    }
    ctx.q_ = static_cast<u64>(q);
    if (k == 1) return ctx;

    // Lex-first monic irreducible: iterate (c_{k-1},...,c_0) with c_{k-1}
    // most significant.
    std::vector<u64> tuple(k, 0);  // tuple[0] = c_{k-1}, ..., tuple[k-1] = c_0
    for (;;) {
        Fp f(k + 1, 0);
        f[k] = 1;
        for (unsigned i = 0; i < k; ++i) f[k - 1 - i] = tuple[i];
        if (f[0] != 0 && fp_irreducible(f, p)) {
            ctx.min_poly_.assign(f.begin(), f.begin() + k);
            return ctx;
        }
        // next tuple, last position fastest
        int pos = static_cast<int>(k) - 1;
        while (pos >= 0) {
            if (++tuple[pos] < p) break;
            tuple[pos] = 0;
            --pos;
        }
        if (pos < 0) throw std::logic_error("make_field: no irreducible found");
    }
}

FieldCtx parse_field_spec(const std::string& spec) {
    auto caret = spec.find('^');
    u64 p = 0;
    unsigned k = 1;
    try {
        if (caret == std::string::npos) {
            p = std::stoull(spec);
        } else {
            p = std::stoull(spec.substr(0, caret));
            k = static_cast<unsigned>(std::stoul(spec.substr(caret + 1)));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad field spec: " + spec);
    }
    return make_field(p, k);
}

FieldElem FieldCtx::zero() const {
    boost::container::small_vector<u64, 2> c(k_, 0);
    return FieldElem(std::move(c));
}

FieldElem FieldCtx::one() const {
    auto e = zero();
    e[0] = 1 % p_;
    return e;
}

FieldElem FieldCtx::from_int(i64 v) const {
    auto e = zero();
    i64 r = v % static_cast<i64>(p_);
    if (r < 0) r += static_cast<i64>(p_);
    e[0] = static_cast<u64>(r);
    return e;
}

FieldElem FieldCtx::gen() const {
    if (k_ < 2) throw std::logic_error("gen: prime field has no generator element u");
    auto e = zero();
    e[1] = 1;
    return e;
}

FieldElem FieldCtx::add(const FieldElem& a, const FieldElem& b) const {
    check(a);
    check(b);
    auto r = a;
    for (unsigned i = 0; i < k_; ++i) {
        r[i] += b[i];
        if (r[i] >= p_) r[i] -= p_;
    }
    return r;
}

FieldElem FieldCtx::sub(const FieldElem& a, const FieldElem& b) const {
    check(a);
    check(b);
    auto r = a;
    for (unsigned i = 0; i < k_; ++i) {
        r[i] = r[i] >= b[i] ? r[i] - b[i] : r[i] + p_ - b[i];
    }
    return r;
}

FieldElem FieldCtx::neg(const FieldElem& a) const {
    check(a);
    auto r = a;
    for (unsigned i = 0; i < k_; ++i) r[i] = r[i] == 0 ? 0 : p_ - r[i];
    return r;
}

FieldElem FieldCtx::mul(const FieldElem& a, const FieldElem& b) const {
    check(a);
    check(b);
    if (k_ == 1) {
        auto r = zero();
        r[0] = mulmod_u64(a[0], b[0], p_);
        return r;
    }
    boost::container::small_vector<u64, 4> prod(2 * k_ - 1, 0);
    for (unsigned i = 0; i < k_; ++i) {
        if (a[i] == 0) continue;
        for (unsigned j = 0; j < k_; ++j)
            prod[i + j] = (prod[i + j] + mulmod_u64(a[i], b[j], p_)) % p_;
    }
    for (unsigned i = 2 * k_ - 1; i-- > k_;) {
        u64 c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (unsigned j = 0; j < k_; ++j) {
            u64 t = mulmod_u64(c, min_poly_[j], p_);
            prod[i - k_ + j] = (prod[i - k_ + j] + p_ - t) % p_;
        }
    }
    auto r = zero();
    for (unsigned i = 0; i < k_; ++i) r[i] = prod[i];
    return r;
}

FieldElem FieldCtx::inv(const FieldElem& a) const {
    check(a);
    if (a.is_zero()) throw std::domain_error("division by zero");
    if (k_ == 1) {
        auto r = zero();
        r[0] = inv_mod_p(a[0], p_);
        return r;
    }
    // Extended Euclid in GF(p)[x] against the minimal polynomial.
    Fp r0(min_poly_);
    r0.push_back(1);
    Fp r1(a.size());
    for (unsigned i = 0; i < k_; ++i) r1[i] = a[i];
    fp_trim(r1);
    Fp s0{}, s1{1};
    while (true) {
        // r0 = q r1 + r2
        Fp rem = r0;
        Fp quo;
        u64 lead_inv = inv_mod_p(r1.back(), p_);
        if (rem.size() >= r1.size()) quo.resize(rem.size() - r1.size() + 1, 0);
        while (rem.size() >= r1.size()) {
            u64 c = mulmod_u64(rem.back(), lead_inv, p_);
            std::size_t off = rem.size() - r1.size();
            if (c != 0) {
                quo[off] = c;
                for (std::size_t j = 0; j < r1.size(); ++j) {
                    u64 t = mulmod_u64(c, r1[j], p_);
                    rem[off + j] = (rem[off + j] + p_ - t) % p_;
                }
            }
            rem.pop_back();
            fp_trim(rem);
            if (rem.empty()) break;
        }
        // s2 = s0 - quo * s1
        Fp qs;
        if (!quo.empty() && !s1.empty()) {
            qs.assign(quo.size() + s1.size() - 1, 0);
            for (std::size_t i = 0; i < quo.size(); ++i)
                for (std::size_t j = 0; j < s1.size(); ++j)
                    qs[i + j] = (qs[i + j] + mulmod_u64(quo[i], s1[j], p_)) % p_;
        }
        Fp s2(std::max(s0.size(), qs.size()), 0);
        for (std::size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
        for (std::size_t i = 0; i < qs.size(); ++i) s2[i] = (s2[i] + p_ - qs[i]) % p_;
        fp_trim(s2);
        if (rem.empty()) {
            // r1 is the gcd (a unit since the modulus is irreducible)
            u64 unit_inv = inv_mod_p(r1.back(), p_);
            auto out = zero();
            for (std::size_t i = 0; i < s1.size() && i < k_; ++i)
                out[i] = mulmod_u64(s1[i], unit_inv, p_);
            return out;
        }
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
}

FieldElem FieldCtx::div(const FieldElem& a, const FieldElem& b) const { return mul(a, inv(b)); }

FieldElem FieldCtx::pow(const FieldElem& a, u64 e) const {
    check(a);
    FieldElem r = one();
    FieldElem base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

u64 FieldCtx::index_of(const FieldElem& a) const {
    check(a);
    u64 idx = 0;
    for (unsigned i = k_; i-- > 0;) idx = idx * p_ + a[i];
    return idx;
}

FieldElem FieldCtx::elem_at(u64 index) const {
    if (index >= q_) throw std::invalid_argument("elem_at: index out of range");
    auto e = zero();
    for (unsigned i = 0; i < k_; ++i) {
        e[i] = index % p_;
        index /= p_;
    }
    return e;
}

FieldElem FieldCtx::random(Rng& rng) const {
    auto e = zero();
    for (unsigned i = 0; i < k_; ++i) e[i] = rng.below(p_);
    return e;
}

FieldElem FieldCtx::random_nonzero(Rng& rng) const {
    for (;;) {
        auto e = random(rng);
        if (!e.is_zero()) return e;
    }
}

std::string FieldCtx::format(const FieldElem& a, char sep) const {
    check(a);
    std::ostringstream out;
    for (unsigned i = 0; i < k_; ++i) {
        if (i) out << sep;
        out << a[i];
    }
    return out.str();
}

FieldElem FieldCtx::parse_elem(const std::string& text) const {
    auto e = zero();
    std::size_t start = 0;
    unsigned i = 0;
    while (true) {
        auto comma = text.find_first_of(",.", start);
        std::string tok = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                        : comma - start);
        if (i >= k_) throw std::invalid_argument("element has too many coordinates: " + text);
        i64 v = 0;
        try {
            v = std::stoll(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad element coordinate: " + tok);
        }
        i64 r = v % static_cast<i64>(p_);
        if (r < 0) r += static_cast<i64>(p_);
        e[i++] = static_cast<u64>(r);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (i != 1 && i != k_)
        throw std::invalid_argument("element arity mismatch: " + text);
    return e;
}

std::string FieldCtx::spec_string() const {
    std::ostringstream out;
    out << p_;
    if (k_ > 1) out << '^' << k_;
    return out.str();
}

FieldElem arith(const FieldCtx& ctx, const FieldElem& a, const FieldElem& b, ArithOp op,
                u64 exponent) {
    switch (op) {
        case ArithOp::add: return ctx.add(a, b);
        case ArithOp::sub: return ctx.sub(a, b);
        case ArithOp::mul: return ctx.mul(a, b);
        case ArithOp::div: return ctx.div(a, b);
        case ArithOp::pow: return ctx.pow(a, exponent);
    }
    throw std::logic_error("arith: bad op");
}

namespace {

FieldElem eval_poly_at(const FieldCtx& ctx, const std::vector<FieldElem>& coeffs,
                       const FieldElem& t) {
    FieldElem acc = ctx.zero();
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = ctx.add(ctx.mul(acc, t), coeffs[i]);
    return acc;
}

bool all_zero(const std::vector<FieldElem>& coeffs) {
    for (const auto& c : coeffs) if (!c.is_zero()) return false;
    return true;
}

// ---- univariate arithmetic over GF(q) for the equal-degree splitter.

using Fq = std::vector<FieldElem>;

void fq_trim(const FieldCtx& ctx, Fq& f) {
    while (!f.empty() && ctx.is_zero(f.back())) f.pop_back();
}

Fq fq_mod(const FieldCtx& ctx, Fq a, const Fq& b) {
    // b nonzero
    FieldElem lead_inv = ctx.inv(b.back());
    while (a.size() >= b.size()) {
        FieldElem c = ctx.mul(a.back(), lead_inv);
        if (!c.is_zero()) {
            std::size_t off = a.size() - b.size();
            for (std::size_t j = 0; j + 1 < b.size(); ++j)
                a[off + j] = ctx.sub(a[off + j], ctx.mul(c, b[j]));
        }
        a.pop_back();
        fq_trim(ctx, a);
        if (a.empty()) break;
    }
    return a;
}

Fq fq_mulmod(const FieldCtx& ctx, const Fq& a, const Fq& b, const Fq& mod) {
    if (a.empty() || b.empty()) return {};
    Fq prod(a.size() + b.size() - 1, ctx.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ctx.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            prod[i + j] = ctx.add(prod[i + j], ctx.mul(a[i], b[j]));
    }
    return fq_mod(ctx, std::move(prod), mod);
}

Fq fq_powmod(const FieldCtx& ctx, Fq base, u64 e, const Fq& mod) {
    Fq result{ctx.one()};
    base = fq_mod(ctx, std::move(base), mod);
    while (e) {
        if (e & 1) result = fq_mulmod(ctx, result, base, mod);
        base = fq_mulmod(ctx, base, base, mod);
        e >>= 1;
    }
    return result;
}

Fq fq_gcd(const FieldCtx& ctx, Fq a, Fq b) {
    fq_trim(ctx, a);
    fq_trim(ctx, b);
    while (!b.empty()) {
        Fq r = fq_mod(ctx, std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Fq fq_monic(const FieldCtx& ctx, Fq f) {
    if (f.empty()) return f;
    FieldElem li = ctx.inv(f.back());
    for (auto& c : f) c = ctx.mul(c, li);
    return f;
}

// Splits a monic product of distinct linear factors into roots (odd q).
void cz_split(const FieldCtx& ctx, const Fq& g, std::vector<FieldElem>& out, u64& salt) {
    if (g.size() <= 1) return;
    if (g.size() == 2) {
        out.push_back(ctx.neg(g[0]));  // monic: t + c0
        return;
    }
    const u64 half = (ctx.q() - 1) / 2;
    for (;;) {
        u64 s = salt++;
        u64 mix = s;
        FieldElem a = ctx.elem_at(splitmix64(mix) % ctx.q());
        // (t + a)^((q-1)/2) - 1 mod g
        Fq shifted{a, ctx.one()};
        Fq h = fq_powmod(ctx, shifted, half, g);
        if (h.empty())
            h = Fq{ctx.neg(ctx.one())};
        else
            h[0] = ctx.sub(h[0], ctx.one());
        fq_trim(ctx, h);
        if (h.empty()) continue;
        Fq g1 = fq_monic(ctx, fq_gcd(ctx, g, h));
        if (g1.size() <= 1 || g1.size() == g.size()) continue;
        // complementary factor
        Fq g2 = g;
        {
            // g / g1 by synthetic division
            Fq quo(g.size() - g1.size() + 1, ctx.zero());
            Fq rem = g;
            FieldElem li = ctx.inv(g1.back());
            while (rem.size() >= g1.size()) {
                FieldElem c = ctx.mul(rem.back(), li);
                std::size_t off = rem.size() - g1.size();
                quo[off] = c;
                for (std::size_t j = 0; j < g1.size(); ++j)
                    rem[off + j] = ctx.sub(rem[off + j], ctx.mul(c, g1[j]));
                rem.pop_back();
                fq_trim(ctx, rem);
                if (rem.empty()) break;
            }
            g2 = std::move(quo);
            fq_trim(ctx, g2);
        }
        cz_split(ctx, g1, out, salt);
        cz_split(ctx, g2, out, salt);
        return;
    }
}

}  // namespace

std::vector<FieldElem> univariate_roots(const FieldCtx& ctx, const std::vector<FieldElem>& coeffs,
                                        u64 enum_cap) {
    if (all_zero(coeffs)) throw std::domain_error("univariate_roots: identically zero polynomial");
    if (ctx.q() > enum_cap)
        throw ResourceLimit("univariate_roots: field too large for exhaustive scan");
    std::vector<FieldElem> roots;
    for (u64 i = 0; i < ctx.q(); ++i) {
        FieldElem t = ctx.elem_at(i);
        if (ctx.is_zero(eval_poly_at(ctx, coeffs, t))) roots.push_back(t);
    }
    return roots;
}

std::vector<FieldElem> univariate_roots_any(const FieldCtx& ctx,
                                            const std::vector<FieldElem>& coeffs, u64 enum_cap) {
    if (all_zero(coeffs)) throw std::domain_error("univariate_roots: identically zero polynomial");
    const u64 scan_threshold = 4096;
    if (ctx.q() <= scan_threshold) return univariate_roots(ctx, coeffs, enum_cap);
    if (ctx.p() == 2) return univariate_roots(ctx, coeffs, enum_cap);  // even q: scan only
    Fq f = coeffs;
    fq_trim(ctx, f);
    if (f.size() == 1) return {};
    f = fq_monic(ctx, std::move(f));
    // gcd(t^q - t, f) collects the distinct roots
    Fq tq = fq_powmod(ctx, Fq{ctx.zero(), ctx.one()}, ctx.q(), f);
    if (tq.size() < 2) tq.resize(2, ctx.zero());
    tq[1] = ctx.sub(tq[1], ctx.one());
    fq_trim(ctx, tq);
    Fq g = fq_monic(ctx, fq_gcd(ctx, f, tq));
    std::vector<FieldElem> roots;
    u64 salt = 0x5eed;
    cz_split(ctx, g, roots, salt);
    std::sort(roots.begin(), roots.end(),
              [&](const FieldElem& a, const FieldElem& b) { return ctx.index_of(a) < ctx.index_of(b); });
    return roots;
}

FieldEmbedding::FieldEmbedding(const FieldCtx& src, const FieldCtx& dst)
    : src_(&src), dst_(&dst), gen_image_(dst.zero()) {
    if (src.p() != dst.p() || dst.k() % src.k() != 0)
        throw std::invalid_argument("FieldEmbedding: no subfield inclusion");
    if (src.k() == 1) return;
    // first root, in enumeration order, of the source minimal polynomial
    std::vector<FieldElem> mp;
    mp.reserve(src.min_poly().size() + 1);
    for (u64 c : src.min_poly()) mp.push_back(dst.from_int(static_cast<i64>(c)));
    mp.push_back(dst.one());
    for (u64 i = 0; i < dst.q(); ++i) {
        FieldElem x = dst.elem_at(i);
        FieldElem acc = dst.zero();
        for (std::size_t j = mp.size(); j-- > 0;) acc = dst.add(dst.mul(acc, x), mp[j]);
        if (acc.is_zero()) {
            gen_image_ = x;
            return;
        }
    }
    throw std::logic_error("FieldEmbedding: minimal polynomial has no root in extension");
}

FieldElem FieldEmbedding::map(const FieldElem& a) const {
    if (a.size() != src_->k())
        throw std::invalid_argument("FieldEmbedding::map: element not in source field");
    if (src_->k() == 1) return dst_->from_int(static_cast<i64>(a[0]));
    FieldElem acc = dst_->zero();
    for (std::size_t i = src_->k(); i-- > 0;)
        acc = dst_->add(dst_->mul(acc, gen_image_), dst_->from_int(static_cast<i64>(a[i])));
    return acc;
}

std::vector<FieldElem> FieldEmbedding::map_vec(const std::vector<FieldElem>& v) const {
    std::vector<FieldElem> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(map(e));
    return out;
}

}  // namespace incidence
