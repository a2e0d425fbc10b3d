#include "incidence/schubert.hpp"

#include <sstream>

namespace incidence {

ChowClassG ChowClassG::basis(Partition2 p, BigInt c) {
    ChowClassG out;
    out.add(p, c);
    return out;
}

BigInt ChowClassG::coeff(Partition2 p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? BigInt(0) : it->second;
}

void ChowClassG::add(Partition2 p, const BigInt& c) {
    if (p.b > p.a) throw std::invalid_argument("ChowClassG: partition needs a >= b");
    if (c == 0) return;
    auto it = terms_.find(p);
    if (it == terms_.end()) {
        terms_.emplace(p, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

ChowClassG pieri(Partition2 lambda, unsigned c, unsigned n) {
    ChowClassG out;
    const unsigned total = lambda.weight() + c;
    for (unsigned a2 = lambda.a; a2 <= n - 1 && a2 <= total; ++a2) {
        if (total < a2) break;
        unsigned b2 = total - a2;
        if (b2 > lambda.a) continue;   // need a >= b'
        if (b2 < lambda.b) continue;   // need b' >= b
        if (b2 > a2) continue;
        out.add({a2, b2}, 1);
    }
    return out;
}

ChowClassG add_G(const ChowClassG& x, const ChowClassG& y) {
    ChowClassG out = x;
    for (const auto& [p, c] : y.terms()) out.add(p, c);
    return out;
}

ChowClassG scale_G(const ChowClassG& x, const BigInt& c) {
    ChowClassG out;
    if (c == 0) return out;
    for (const auto& [p, cx] : x.terms()) out.add(p, cx * c);
    return out;
}

namespace {

// x . sigma_{a,b} via Giambelli: sigma_{a,b} = sigma_a sigma_b - sigma_{a+1} sigma_{b-1}.
ChowClassG mult_basis(const ChowClassG& x, Partition2 p, unsigned n) {
    if (p.a == 0) return x;  // sigma_0 = 1
    if (p.b == 0) {
        ChowClassG out;
        for (const auto& [l, c] : x.terms()) out = add_G(out, scale_G(pieri(l, p.a, n), c));
        return out;
    }
    ChowClassG first = mult_basis(mult_basis(x, {p.a, 0}, n), {p.b, 0}, n);
    if (p.a + 1 > n - 1) return first;  // sigma_{a+1} vanishes at the box
    ChowClassG second = mult_basis(mult_basis(x, {p.a + 1, 0}, n), {p.b - 1, 0}, n);
    return add_G(first, scale_G(second, -1));
}

}  // namespace

ChowClassG product_G(const ChowClassG& x, const ChowClassG& y, unsigned n) {
    ChowClassG out;
    for (const auto& [p, c] : y.terms()) out = add_G(out, scale_G(mult_basis(x, p, n), c));
    return out;
}

BigInt integrate_G(const ChowClassG& x, unsigned n) { return x.coeff({n - 1, n - 1}); }

ChowClassGamma ChowClassGamma::h() { return ChowClassGamma({}, ChowClassG::unit()); }

ChowClassGamma ChowClassGamma::sigma(Partition2 p, BigInt c) {
    return ChowClassGamma(ChowClassG::basis(p, std::move(c)));
}

ChowClassGamma add_Gamma(const ChowClassGamma& x, const ChowClassGamma& y) {
    return {add_G(x.part(0), y.part(0)), add_G(x.part(1), y.part(1))};
}

ChowClassGamma scale_Gamma(const ChowClassGamma& x, const BigInt& c) {
    return {scale_G(x.part(0), c), scale_G(x.part(1), c)};
}

ChowClassGamma product_Gamma(const ChowClassGamma& x, const ChowClassGamma& y, unsigned n) {
    // (x0 + x1 h)(y0 + y1 h) with h^2 = sigma_1 h - sigma_{1,1}
    const ChowClassG& x0 = x.part(0);
    const ChowClassG& x1 = x.part(1);
    const ChowClassG& y0 = y.part(0);
    const ChowClassG& y1 = y.part(1);
    ChowClassG x1y1 = product_G(x1, y1, n);
    ChowClassG e0 = add_G(product_G(x0, y0, n),
                          scale_G(product_G(x1y1, ChowClassG::basis({1, 1}), n), -1));
    ChowClassG e1 = add_G(add_G(product_G(x0, y1, n), product_G(x1, y0, n)),
                          product_G(x1y1, ChowClassG::basis({1, 0}), n));
    return {std::move(e0), std::move(e1)};
}

BigInt integrate_Gamma(const ChowClassGamma& x, unsigned n) {
    return x.part(1).coeff({n - 1, n - 1});
}

ChowClassGamma euler_class(unsigned n, unsigned d, unsigned m) {
    if (n < 2) throw std::invalid_argument("euler_class: n must be >= 2");
    if (m < 1 || m > d) throw std::invalid_argument("euler_class: require 1 <= m <= d");
    ChowClassGamma acc = ChowClassGamma::unit();
    for (unsigned k = 0; k < m; ++k) {
        // (d-k) h + k (sigma_1 - h) = (d - 2k) h + k sigma_1
        BigInt hcoef = BigInt(d) - 2 * BigInt(k);
        ChowClassGamma factor =
            add_Gamma(scale_Gamma(ChowClassGamma::h(), hcoef),
                      ChowClassGamma::sigma({1, 0}, BigInt(k)));
        acc = product_Gamma(acc, factor, n);
    }
    return acc;
}

Prediction predict(unsigned n, unsigned d, unsigned m) {
    Prediction out;
    out.expected_dim = 2 * static_cast<int>(n) - static_cast<int>(m) - 1;
    out.euler = euler_class(n, d, m);
    if (out.expected_dim == 0) out.count = integrate_Gamma(out.euler, n);
    if (out.expected_dim > 0) {
        const unsigned dim = static_cast<unsigned>(out.expected_dim);
        for (unsigned a = 0; a <= dim; ++a) {
            unsigned b = dim - a;
            ChowClassGamma probe = out.euler;
            for (unsigned i = 0; i < a; ++i) probe = product_Gamma(probe, ChowClassGamma::h(), n);
            for (unsigned i = 0; i < b; ++i)
                probe = product_Gamma(probe, ChowClassGamma::sigma({1, 0}), n);
            out.degrees.push_back({{a, b}, integrate_Gamma(probe, n)});
        }
    }
    return out;
}

BigInt syt_two_row_rectangle(unsigned k) {
    // hooks of the 2 x k rectangle: top row k+1, k, ..., 2; bottom row k, ..., 1
    BigInt numer = 1;
    for (unsigned i = 1; i <= 2 * k; ++i) numer *= i;
    BigInt denom = 1;
    for (unsigned j = 0; j < k; ++j) {
        denom *= (k + 1 - j);
        denom *= (k - j);
    }
    return numer / denom;
}

std::string format_class_G(const ChowClassG& x) {
    if (x.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [p, c] : x.terms()) {
        if (!first) out << " + ";
        first = false;
        out << c << "*s[" << p.a << "," << p.b << "]";
    }
    return out.str();
}

std::string format_class_Gamma(const ChowClassGamma& x) {
    if (x.is_zero()) return "0";
    std::ostringstream out;
    out << format_class_G(x.part(0));
    if (!x.part(1).is_zero()) out << " + (" << format_class_G(x.part(1)) << ")*h";
    return out.str();
}

}  // namespace incidence
