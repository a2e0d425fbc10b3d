#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "incidence/mpoly.hpp"

namespace incidence {

// First index with a nonzero coordinate.
std::size_t pivot_index(const std::vector<FieldElem>& v);

// Scales a nonzero vector so its first nonzero coordinate is 1.
std::vector<FieldElem> canonical_point(const FieldCtx& ctx, std::vector<FieldElem> p);

// A pair (p, L) of a point on a line, stored chart-free as two canonical
// vectors: p has first nonzero coordinate 1; v spans L together with p, is
// reduced so v[pivot(p)] = 0, and also has first nonzero coordinate 1. The
// canonical form is unique per geometric flag.
struct Flag {
    std::vector<FieldElem> p;
    std::vector<FieldElem> v;

    friend bool operator==(const Flag& a, const Flag& b) { return a.p == b.p && a.v == b.v; }
    friend bool operator<(const Flag& a, const Flag& b) {
        return a.p != b.p ? a.p < b.p : a.v < b.v;
    }
};

// Canonicalizes an arbitrary representative pair; throws on dependence.
Flag make_flag(const FieldCtx& ctx, std::vector<FieldElem> p, std::vector<FieldElem> v);

std::string format_flag(const FieldCtx& ctx, const Flag& f);
Flag parse_flag(const FieldCtx& ctx, unsigned n, const std::string& text);

// Intersection order of L with X_F at p: first index with a nonzero
// line-restriction coefficient, or infinite when the restriction vanishes
// identically (L inside X_F).
struct Multiplicity {
    bool infinite = false;
    unsigned value = 0;

    static Multiplicity inf() { return {true, 0}; }
    static Multiplicity finite(unsigned v) { return {false, v}; }
    bool at_least(unsigned m) const { return infinite || value >= m; }
    friend bool operator==(const Multiplicity& a, const Multiplicity& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
};

Multiplicity multiplicity(const MultiPoly& f, const Flag& flag);

// Invertible matrix with columns (p, v, greedy unit-vector completion); under
// F -> F(Ax) the flag moves to p = (1:0:...:0), L = {x_2 = ... = x_n = 0}.
MatF adapted_basis(const FieldCtx& ctx, const Flag& flag);

// (q^{dim+1} - 1) / (q - 1)
u64 projective_point_count(u64 q, unsigned dim);
u64 flag_count(u64 q, unsigned n);
u64 line_count(u64 q, unsigned n);

// The multiplicity threshold for Y_{F,m}: a finite 1 <= m <= d, or infinity
// (the P^1-bundle over the Fano scheme).
struct MultBound {
    bool infinite = false;
    unsigned m = 1;

    static MultBound finite(unsigned m) { return {false, m}; }
    static MultBound inf() { return {true, 0}; }
    static MultBound parse(const std::string& s);
    std::string str() const;
};

struct EnumCaps {
    u64 max_visits = 300'000'000;  // candidate budget for scans and sweeps
    u64 max_list = 100'000;        // materialization budget
};

// Canonical projective representatives of P^n, in a fixed deterministic order.
void enumerate_points(const FieldCtx& ctx, unsigned n,
                      const std::function<bool(const std::vector<FieldElem>&)>& visit);

// Every rational flag exactly once; total matches flag_count(q, n).
void enumerate_flags(const FieldCtx& ctx, unsigned n, const EnumCaps& caps,
                     const std::function<bool(const Flag&)>& visit);

// Every rational line exactly once, as reduced-echelon canonical flags.
void enumerate_lines(const FieldCtx& ctx, unsigned n, const EnumCaps& caps,
                     const std::function<bool(const Flag&)>& visit);

// Lines through a fixed point p (canonical flags), all of them or, when
// `gradient` is given, only those in its kernel — for p on X_F these are the
// lines meeting with multiplicity >= 2.
void enumerate_fiber(const FieldCtx& ctx, const std::vector<FieldElem>& p,
                     const std::vector<FieldElem>* gradient,
                     const std::function<bool(const Flag&)>& visit);

// Streaming visits of the rational points of X_F (canonical representatives).
// Returns false if the visitor stopped early.
bool for_each_X_point(const MultiPoly& f, const EnumCaps& caps,
                      const std::function<bool(const std::vector<FieldElem>&)>& visit);

u64 count_X(const MultiPoly& f, const EnumCaps& caps);

// Streaming visits of rational flags of Y_{F,m} with their exact
// multiplicities. For m >= 2 the sweep only inspects lines in ker(grad F(p))
// per point p (an exact constraint, f_1 = grad F(p) . v), so it scales with
// the tangent fibers rather than all of Gamma.
bool for_each_Y_flag(const MultiPoly& f, MultBound m, const EnumCaps& caps,
                     const std::function<bool(const Flag&, const Multiplicity&)>& visit);

// Count of Y_{F,m}(F_q); for m = 1 and m = 2 this uses exact per-point fiber
// counts instead of per-line restrictions.
u64 count_Y(const MultiPoly& f, MultBound m, const EnumCaps& caps);

// Fano scheme: rational lines contained in X_F, deduplicated.
bool for_each_Z_line(const MultiPoly& f, const EnumCaps& caps,
                     const std::function<bool(const Flag&)>& visit);

u64 count_Z(const MultiPoly& f, const EnumCaps& caps);

enum class SchemeKind { X, Y, Z };

struct SchemeResult {
    u64 count = 0;
    std::vector<std::vector<FieldElem>> points;  // X
    std::vector<Flag> flags;                     // Y flags or Z canonical lines
    bool truncated = false;
};

SchemeResult enumerate_scheme(const MultiPoly& f, SchemeKind kind, MultBound m,
                              const EnumCaps& caps);

MultiPoly lift_poly(const MultiPoly& f, const FieldEmbedding& emb);

struct ExtensionWitness {
    bool found = false;
    unsigned degree = 0;             // extension degree over the base context
    std::optional<Flag> flag;        // witness, in coordinates of `field`
    std::optional<FieldCtx> field;   // GF(q^degree)
};

// Searches Y_{F,m}(GF(q^j)) for j = 1..max_deg in increasing order.
ExtensionWitness nonempty_over_extensions(const MultiPoly& f, MultBound m, unsigned max_deg,
                                          const EnumCaps& caps);

}  // namespace incidence
