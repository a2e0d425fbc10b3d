#pragma once

#include <optional>

#include "incidence/flags.hpp"

namespace incidence {

// Coefficients of F read in the adapted basis of a flag: a[i] is the
// coefficient of x0^{d-i} x1^i, side(k, j-2) the coefficient of
// x0^{d-k-1} x1^k x_j for j = 2..n. The flag lies in Y_{F,m} exactly when
// a[0..m-1] vanish.
struct AdaptedCoefficients {
    std::vector<FieldElem> a;  // length d+1
    MatF side;                 // d rows, n-1 cols
};

AdaptedCoefficients adapted_coeffs(const MultiPoly& f, const Flag& flag);

enum class FlagClass { not_in_Y, smooth, W0, W2 };

// Classifies many flags against one polynomial, caching the partial
// derivatives in a flattened form so per-flag work is a handful of line
// restrictions without allocation churn. Prime fields run on raw residues.
class FlagClassifier {
public:
    explicit FlagClassifier(const MultiPoly& f);

    AdaptedCoefficients coeffs(const Flag& flag) const;
    FlagClass classify(const Flag& flag, unsigned m) const;
    std::vector<FieldElem> gradient(const std::vector<FieldElem>& pt) const;

private:
    struct Prepared {
        unsigned deg = 0;
        std::vector<unsigned char> exps;  // term-major
        std::vector<FieldElem> coeffs;
        std::vector<u64> ucoeffs;  // prime-field mirror
    };
    void restrict_into(const Prepared& g, const std::vector<FieldElem>& base,
                       const std::vector<FieldElem>& dir, std::vector<FieldElem>& out) const;
    void restrict_into_u64(const Prepared& g, const u64* base, const u64* dir,
                           std::vector<u64>& out) const;
    bool coeffs_u64(const Flag& flag, std::vector<u64>& a_out, std::vector<u64>& side_out) const;

    const FieldCtx* cx_;
    bool prime_ = false;
    unsigned n_ = 0, d_ = 0;
    Prepared f_;
    std::vector<Prepared> partials_;       // n+1 entries, empty terms if zero
    std::vector<FieldElem> pascal_;        // (d+1)^2 binomials in the field
    std::vector<u64> upascal_;
    mutable std::vector<FieldElem> acc_, next_, bpow_, dpow_, prc_;
    mutable std::vector<u64> uacc_, unext_, ubase_, udir_, utmp_, uprc_;
};

// The m x (2n-1) matrix of the local equations' first-order behaviour,
// columns (d/dxi_1, ..., d/dxi_n, d/dzeta_2, ..., d/dzeta_n):
// column 0 is (0,...,0, m a_m)^T, the xi block holds a_{k,j}, the zeta block
// the same rows shifted down one. Requires the flag to lie in Y_{F,m}.
MatF jacobian_closed_form(const MultiPoly& f, const Flag& flag, unsigned m);

// Independent oracle: moves the flag to the standard one by the adapted
// basis change and differentiates the chart restriction coefficients with
// dual numbers (eps^2 = 0), one chart variable at a time.
MatF jacobian_linearized(const MultiPoly& f, const Flag& flag, unsigned m);

// Same contract with rows 0..d (all line-restriction coefficients); used for
// smoothness of the Fano locus, where all f_k vanish.
MatF jacobian_linearized_full(const MultiPoly& f, const Flag& flag);

std::size_t rank_exact(const FieldCtx& ctx, const MatF& m);

std::string to_string(FlagClass c);

// smooth: rank J_m = m. W2: additionally rank J_2 < 2 (only for m >= 2).
// W0: rank J_m < m but rank J_2 = 2.
FlagClass classify_flag(const MultiPoly& f, const Flag& flag, unsigned m);

// Doubled block matrix of the degeneracy analysis: row i of btilde is
// (B_i | B_{i-1}) with B_{-1} = 0.
MatF btilde(const FieldCtx& ctx, const MatF& b);

bool member_delta(const FieldCtx& ctx, const MatF& b);
bool member_delta0(const FieldCtx& ctx, const MatF& b);

// Least i in 2..l whose leading i-row doubled block drops rank; nullopt when
// the matrix is not degenerate.
std::optional<unsigned> stratum_index(const FieldCtx& ctx, const MatF& b);

struct DeltaCounts {
    u64 affine_delta = 0;
    u64 affine_delta0 = 0;
    u64 projective_delta = 0;
    u64 projective_delta0 = 0;
};

// Exhaustive count over all nonzero l x r matrices; q^{lr} must stay within
// the cap.
DeltaCounts count_delta(unsigned l, unsigned r, const FieldCtx& ctx, u64 cap = u64{1} << 24);

struct SingularPoint {
    std::vector<FieldElem> point;  // coordinates over `field`
    FieldCtx field;                // base field or its quadratic extension
    unsigned ext_degree = 1;       // 1 or 2
};

// Constructive converse for cubics (char != 3): from a degenerate flag of
// Y_{F,3}, produces a singular point of X_F, in the base field when p is
// already singular or the quadratic s^2 + beta s + (alpha + beta^2) splits,
// otherwise over the quadratic extension.
SingularPoint singular_point_from_degenerate_flag(const MultiPoly& f, const Flag& flag);

}  // namespace incidence
