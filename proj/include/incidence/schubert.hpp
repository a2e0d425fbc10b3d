#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incidence/common.hpp"

namespace incidence {

using BigInt = boost::multiprecision::cpp_int;

// Two-row partition indexing a Schubert class sigma_{a,b} on the Grassmannian
// of lines in P^n; classes with a > n-1 vanish (box constraint).
struct Partition2 {
    unsigned a = 0;
    unsigned b = 0;

    unsigned weight() const { return a + b; }
    friend bool operator==(const Partition2& x, const Partition2& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator<(const Partition2& x, const Partition2& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
};

// Integer combination of sigma_{a,b}; no zero coefficients stored.
class ChowClassG {
public:
    ChowClassG() = default;

    static ChowClassG unit() { return basis({0, 0}); }
    static ChowClassG basis(Partition2 p, BigInt c = 1);

    const std::map<Partition2, BigInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    BigInt coeff(Partition2 p) const;
    void add(Partition2 p, const BigInt& c);

    friend bool operator==(const ChowClassG& x, const ChowClassG& y) {
        return x.terms_ == y.terms_;
    }

private:
    std::map<Partition2, BigInt> terms_;
};

// sigma_c . sigma_{a,b} in A(G(2, n+1)): multiplicity-free sum over
// a' + b' = a + b + c with a' >= a >= b' >= b and a' <= n-1.
ChowClassG pieri(Partition2 lambda, unsigned c, unsigned n);

ChowClassG add_G(const ChowClassG& x, const ChowClassG& y);
ChowClassG scale_G(const ChowClassG& x, const BigInt& c);
ChowClassG product_G(const ChowClassG& x, const ChowClassG& y, unsigned n);

// Coefficient of the point class sigma_{n-1,n-1}.
BigInt integrate_G(const ChowClassG& x, unsigned n);

// Class on the flag variety in normal form: sum of sigma_{a,b} h^e with
// e <= 1, where h is the hyperplane pullback and h^2 = sigma_1 h - sigma_11.
class ChowClassGamma {
public:
    ChowClassGamma() = default;
    explicit ChowClassGamma(ChowClassG part0) : part_{std::move(part0), {}} {}
    ChowClassGamma(ChowClassG part0, ChowClassG part1)
        : part_{std::move(part0), std::move(part1)} {}

    static ChowClassGamma unit() { return ChowClassGamma(ChowClassG::unit()); }
    static ChowClassGamma h();
    static ChowClassGamma sigma(Partition2 p, BigInt c = 1);

    const ChowClassG& part(unsigned e) const { return part_[e]; }
    bool is_zero() const { return part_[0].is_zero() && part_[1].is_zero(); }

    friend bool operator==(const ChowClassGamma& x, const ChowClassGamma& y) {
        return x.part_[0] == y.part_[0] && x.part_[1] == y.part_[1];
    }

private:
    ChowClassG part_[2];
};

ChowClassGamma add_Gamma(const ChowClassGamma& x, const ChowClassGamma& y);
ChowClassGamma scale_Gamma(const ChowClassGamma& x, const BigInt& c);
ChowClassGamma product_Gamma(const ChowClassGamma& x, const ChowClassGamma& y, unsigned n);

// Coefficient of h sigma_{n-1,n-1}, the point class of the flag variety.
BigInt integrate_Gamma(const ChowClassGamma& x, unsigned n);

// Top Chern class of the bundle cutting out Y_{F,m}:
// prod_{k=0}^{m-1} ((d-k) h + k (sigma_1 - h)).
ChowClassGamma euler_class(unsigned n, unsigned d, unsigned m);

struct Prediction {
    int expected_dim = 0;                 // 2n - m - 1
    std::optional<BigInt> count;          // present iff expected_dim == 0
    // integrals of euler . h^a sigma_1^b over a + b = expected_dim, in order
    // of increasing a
    std::vector<std::pair<std::pair<unsigned, unsigned>, BigInt>> degrees;
    ChowClassGamma euler;
};

Prediction predict(unsigned n, unsigned d, unsigned m);

// Number of standard Young tableaux of rectangular shape 2 x k via the
// hook length formula; equals the Catalan number C_k.
BigInt syt_two_row_rectangle(unsigned k);

std::string format_class_G(const ChowClassG& x);
std::string format_class_Gamma(const ChowClassGamma& x);

}  // namespace incidence
