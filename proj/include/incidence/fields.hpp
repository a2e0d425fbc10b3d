#pragma once

#include <boost/container/small_vector.hpp>

#include <optional>
#include <string>
#include <vector>

#include "incidence/common.hpp"

namespace incidence {

bool is_prime_u64(u64 n);

// Element of GF(p^k): canonical coefficient vector of length k over GF(p),
// coefficient of u^i at position i. Elements carry no context; every
// operation goes through a FieldCtx, so mixing fields is a checked error.
class FieldElem {
public:
    FieldElem() = default;
    explicit FieldElem(boost::container::small_vector<u64, 2> c) : c_(std::move(c)) {}

    std::size_t size() const { return c_.size(); }
    u64 operator[](std::size_t i) const { return c_[i]; }
    u64& operator[](std::size_t i) { return c_[i]; }

    bool is_zero() const {
        for (u64 v : c_) if (v != 0) return false;
        return true;
    }

    friend bool operator==(const FieldElem& a, const FieldElem& b) { return a.c_ == b.c_; }
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
    friend bool operator<(const FieldElem& a, const FieldElem& b) { return a.c_ < b.c_; }

private:
    boost::container::small_vector<u64, 2> c_;
};

// Exact arithmetic context for GF(p^k). For k > 1 the modulus is the
// lexicographically first monic irreducible of degree k over GF(p),
// ordered on (c_{k-1}, ..., c_0), so contexts are reproducible.
class FieldCtx {
public:
    FieldCtx() = default;

    u64 p() const { return p_; }
    unsigned k() const { return k_; }
    u64 q() const { return q_; }
    bool prime_field() const { return k_ == 1; }
    // min_poly coefficients c_0..c_{k-1} (the monic leading 1 is implicit);
    // empty for k = 1.
    const std::vector<u64>& min_poly() const { return min_poly_; }

    FieldElem zero() const;
    FieldElem one() const;
    // Reduction of an integer into the prime subfield.
    FieldElem from_int(i64 v) const;
    // Element u (the residue class of x) for k > 1.
    FieldElem gen() const;

    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const;
    FieldElem neg(const FieldElem& a) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    FieldElem inv(const FieldElem& a) const;
    FieldElem div(const FieldElem& a, const FieldElem& b) const;
    FieldElem pow(const FieldElem& a, u64 e) const;

    bool is_zero(const FieldElem& a) const { check(a); return a.is_zero(); }

    // Rank of an element in the fixed enumeration order (mixed radix,
    // coefficient of u^0 least significant). index_of(zero()) == 0.
    u64 index_of(const FieldElem& a) const;
    FieldElem elem_at(u64 index) const;

    FieldElem random(Rng& rng) const;
    FieldElem random_nonzero(Rng& rng) const;

    // "3" for prime fields, "2,0,1" (c_0,c_1,c_2) for extensions. The
    // separator is ',' in polynomial files and '.' inside flag strings.
    std::string format(const FieldElem& a, char sep = ',') const;
    FieldElem parse_elem(const std::string& text) const;  // accepts ',' or '.'

    std::string spec_string() const;  // "p" or "p^k"

    friend bool operator==(const FieldCtx& a, const FieldCtx& b) {
        return a.p_ == b.p_ && a.k_ == b.k_;
    }

private:
    friend FieldCtx make_field(u64 p, unsigned k);

    void check(const FieldElem& a) const {
        if (a.size() != k_)
            throw std::invalid_argument("field element does not belong to this context");
    }

    u64 p_ = 0;
    unsigned k_ = 0;
    u64 q_ = 0;
    std::vector<u64> min_poly_;
};

// Builds GF(p^k), 1 <= k <= 16. Deterministic: the minimal polynomial is the
// lex-first monic irreducible of degree k.
FieldCtx make_field(u64 p, unsigned k);

// Parses "7" or "2^4".
FieldCtx parse_field_spec(const std::string& spec);

enum class ArithOp { add, sub, mul, div, pow };

// Uniform entry point used by the CLI and tests; pow reads a non-negative
// exponent from `exponent` and ignores b.
FieldElem arith(const FieldCtx& ctx, const FieldElem& a, const FieldElem& b, ArithOp op,
                u64 exponent = 0);

// All roots of the univariate polynomial sum coeffs[i] t^i in GF(q), found by
// exhaustive scan over the field (q must stay within `enum_cap`). Throws
// std::domain_error for the identically-zero polynomial.
std::vector<FieldElem> univariate_roots(const FieldCtx& ctx, const std::vector<FieldElem>& coeffs,
                                        u64 enum_cap = u64{1} << 20);

// Same contract, but dispatches to equal-degree splitting for large odd q, so
// it stays usable where a scan would not. Falls back to the scan elsewhere.
std::vector<FieldElem> univariate_roots_any(const FieldCtx& ctx,
                                            const std::vector<FieldElem>& coeffs,
                                            u64 enum_cap = u64{1} << 20);

// Subfield embedding GF(p^j) -> GF(p^k), j | k, sending the source generator
// to the first root (in enumeration order) of the source minimal polynomial.
class FieldEmbedding {
public:
    FieldEmbedding(const FieldCtx& src, const FieldCtx& dst);

    const FieldCtx& src() const { return *src_; }
    const FieldCtx& dst() const { return *dst_; }

    FieldElem map(const FieldElem& a) const;
    std::vector<FieldElem> map_vec(const std::vector<FieldElem>& v) const;

private:
    const FieldCtx* src_;
    const FieldCtx* dst_;
    FieldElem gen_image_;
};

}  // namespace incidence
