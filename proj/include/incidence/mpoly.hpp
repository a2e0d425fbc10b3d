#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "incidence/fields.hpp"
#include "incidence/linalg.hpp"

namespace incidence {

// Homogeneous coordinate ring data: n+1 variables x_0..x_n, forms of degree d.
struct PolyRing {
    FieldCtx ctx;
    unsigned n = 2;  // projective dimension, >= 2
    unsigned d = 1;  // degree, >= 1

    unsigned nvars() const { return n + 1; }
    friend bool operator==(const PolyRing& a, const PolyRing& b) {
        return a.ctx == b.ctx && a.n == b.n && a.d == b.d;
    }
};

PolyRing make_ring(const FieldCtx& ctx, unsigned n, unsigned d);

using ExpVec = std::vector<unsigned>;

// Sparse homogeneous form: exponent vector -> nonzero coefficient. The zero
// polynomial is the empty term map.
class MultiPoly {
public:
    explicit MultiPoly(PolyRing ring) : ring_(std::move(ring)) {}

    const PolyRing& ring() const { return ring_; }
    const std::map<ExpVec, FieldElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // Adds c * x^e, validating homogeneity; accumulates with existing terms.
    void add_term(const ExpVec& e, const FieldElem& c);
    FieldElem coeff(const ExpVec& e) const;

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.ring_ == b.ring_ && a.terms_ == b.terms_;
    }

private:
    PolyRing ring_;
    std::map<ExpVec, FieldElem> terms_;
};

// All degree-d exponent vectors in n_vars variables, lexicographically
// descending on (e_0, e_1, ...), so x_0^d comes first.
std::vector<ExpVec> monomials_of_degree(unsigned n_vars, unsigned d);

u64 binom_u64(unsigned n, unsigned k);

FieldElem evaluate(const MultiPoly& f, const std::vector<FieldElem>& pt);

// Formal partial derivatives; coefficients reduced in the field
// characteristic, so entries can vanish.
std::vector<MultiPoly> partials(const MultiPoly& f);

// (dF/dx_0, ..., dF/dx_n) evaluated at pt, without building the derivative
// polynomials.
std::vector<FieldElem> gradient_at(const MultiPoly& f, const std::vector<FieldElem>& pt);

// sum_l w_l dF/dx_l, a form of degree d-1.
MultiPoly directional_derivative(const MultiPoly& f, const std::vector<FieldElem>& w);

MultiPoly poly_add(const MultiPoly& a, const MultiPoly& b);
MultiPoly poly_mul(const MultiPoly& a, const MultiPoly& b);
MultiPoly poly_scale(const MultiPoly& a, const FieldElem& c);

// Coefficients (f_0, ..., f_d) of F(base + t dir) as a polynomial in t.
// These are also the coefficients of the binary form F(s base + t dir) on
// s^{d-k} t^k, so order of vanishing at t=0 and the containment test
// (all coefficients zero) are both read off this vector.
std::vector<FieldElem> line_restriction(const MultiPoly& f, const std::vector<FieldElem>& base,
                                        const std::vector<FieldElem>& dir);

// Chart form: coefficients of F(1, t+xi_1, zeta_2 t + xi_2, ..., zeta_n t + xi_n).
std::vector<FieldElem> restrict_to_chart_line(const MultiPoly& f,
                                              const std::vector<FieldElem>& xi,
                                              const std::vector<FieldElem>& zeta);

// General form at a projective point p with direction v (independent of p).
std::vector<FieldElem> restrict_to_line_general(const MultiPoly& f,
                                                const std::vector<FieldElem>& p,
                                                const std::vector<FieldElem>& v);

// F(Ax) for invertible A; throws std::domain_error when A is singular.
MultiPoly transform(const MultiPoly& f, const MatF& a);

// Uniform over nonzero coefficient vectors, deterministic per seed.
MultiPoly sample_poly(const PolyRing& ring, u64 seed);

// Number of degree-d monomials, binom(n+d, n).
u64 monomial_count(const PolyRing& ring);

// Visits one representative per nonzero coefficient vector (no quotient by
// scalars); q^N must stay below `cap`.
void enumerate_polys(const PolyRing& ring, u64 cap,
                     const std::function<void(const MultiPoly&)>& visit);

std::string serialize_poly(const MultiPoly& f);
MultiPoly parse_poly(const std::string& text);

}  // namespace incidence
