#include "incidence/mpoly.hpp"

#include <algorithm>
#include <sstream>

namespace incidence {

PolyRing make_ring(const FieldCtx& ctx, unsigned n, unsigned d) {
    if (n < 2) throw std::invalid_argument("make_ring: n must be >= 2");
    if (d < 1) throw std::invalid_argument("make_ring: d must be >= 1");
    return PolyRing{ctx, n, d};
}

void MultiPoly::add_term(const ExpVec& e, const FieldElem& c) {
    if (e.size() != ring_.nvars())
        throw std::invalid_argument("add_term: exponent arity mismatch");
    unsigned total = 0;
    for (unsigned x : e) total += x;
    if (total != ring_.d)
        throw std::invalid_argument("add_term: exponent vector not homogeneous of degree d");
    if (c.size() != ring_.ctx.k())
        throw std::invalid_argument("add_term: coefficient from wrong field");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second = ring_.ctx.add(it->second, c);
        if (it->second.is_zero()) terms_.erase(it);
    }
}

FieldElem MultiPoly::coeff(const ExpVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ring_.ctx.zero() : it->second;
}

std::vector<ExpVec> monomials_of_degree(unsigned n_vars, unsigned d) {
    std::vector<ExpVec> out;
    ExpVec cur(n_vars, 0);
    // recursive descent, leading variable takes the largest share first
    std::function<void(unsigned, unsigned)> rec = [&](unsigned pos, unsigned rem) {
        if (pos + 1 == n_vars) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (unsigned e = rem + 1; e-- > 0;) {
            cur[pos] = e;
            rec(pos + 1, rem - e);
        }
        cur[pos] = 0;
    };
    rec(0, d);
    return out;
}

u64 binom_u64(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u64 r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

FieldElem evaluate(const MultiPoly& f, const std::vector<FieldElem>& pt) {
    const auto& ctx = f.ring().ctx;
    if (pt.size() != f.ring().nvars()) throw std::invalid_argument("evaluate: arity mismatch");
    FieldElem acc = ctx.zero();
    for (const auto& [e, c] : f.terms()) {
        FieldElem t = c;
        for (std::size_t l = 0; l < e.size(); ++l) {
            if (e[l] == 0) continue;
            t = ctx.mul(t, ctx.pow(pt[l], e[l]));
        }
        acc = ctx.add(acc, t);
    }
    return acc;
}

std::vector<MultiPoly> partials(const MultiPoly& f) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    if (ring.d < 1) throw std::invalid_argument("partials: degree must be >= 1");
    // Derivatives of linear forms are constants; PolyRing tolerates d = 0
    // here even though make_ring does not hand such rings out.
    PolyRing dring = ring;
    dring.d = ring.d - 1;
    std::vector<MultiPoly> out(ring.nvars(), MultiPoly(dring));
    for (const auto& [e, c] : f.terms()) {
        for (unsigned l = 0; l < ring.nvars(); ++l) {
            if (e[l] == 0) continue;
            FieldElem nc = ctx.mul(c, ctx.from_int(static_cast<i64>(e[l])));
            if (nc.is_zero()) continue;
            ExpVec ne = e;
            --ne[l];
            out[l].add_term(ne, nc);
        }
    }
    return out;
}

std::vector<FieldElem> gradient_at(const MultiPoly& f, const std::vector<FieldElem>& pt) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    if (pt.size() != ring.nvars()) throw std::invalid_argument("gradient_at: arity mismatch");
    std::vector<FieldElem> g(ring.nvars(), ctx.zero());
    for (const auto& [e, c] : f.terms()) {
        for (unsigned l = 0; l < ring.nvars(); ++l) {
            if (e[l] == 0) continue;
            FieldElem t = ctx.mul(c, ctx.from_int(static_cast<i64>(e[l])));
            if (t.is_zero()) continue;
            for (unsigned j = 0; j < ring.nvars(); ++j) {
                unsigned ej = e[j] - (j == l ? 1 : 0);
                if (ej == 0) continue;
                t = ctx.mul(t, ctx.pow(pt[j], ej));
            }
            g[l] = ctx.add(g[l], t);
        }
    }
    return g;
}

MultiPoly directional_derivative(const MultiPoly& f, const std::vector<FieldElem>& w) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    if (w.size() != ring.nvars())
        throw std::invalid_argument("directional_derivative: arity mismatch");
    if (ring.d < 1)
        throw std::invalid_argument("directional_derivative: degree must be >= 1");
    PolyRing dring = ring;
    dring.d = ring.d - 1;
    MultiPoly out(dring);
    for (const auto& [e, c] : f.terms()) {
        for (unsigned l = 0; l < ring.nvars(); ++l) {
            if (e[l] == 0 || w[l].is_zero()) continue;
            FieldElem nc = ctx.mul(ctx.mul(c, w[l]), ctx.from_int(static_cast<i64>(e[l])));
            if (nc.is_zero()) continue;
            ExpVec ne = e;
            --ne[l];
            out.add_term(ne, nc);
        }
    }
    return out;
}

MultiPoly poly_add(const MultiPoly& a, const MultiPoly& b) {
    if (!(a.ring() == b.ring())) throw std::invalid_argument("poly_add: ring mismatch");
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms()) out.add_term(e, c);
    return out;
}

MultiPoly poly_mul(const MultiPoly& a, const MultiPoly& b) {
    const auto& ctx = a.ring().ctx;
    if (!(a.ring().ctx == b.ring().ctx) || a.ring().n != b.ring().n)
        throw std::invalid_argument("poly_mul: ring mismatch");
    PolyRing pring = a.ring();
    pring.d = a.ring().d + b.ring().d;
    MultiPoly out(pring);
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) {
            ExpVec e = ea;
            for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
            out.add_term(e, ctx.mul(ca, cb));
        }
    return out;
}

MultiPoly poly_scale(const MultiPoly& a, const FieldElem& c) {
    const auto& ctx = a.ring().ctx;
    MultiPoly out(a.ring());
    if (c.is_zero()) return out;
    for (const auto& [e, ca] : a.terms()) out.add_term(e, ctx.mul(ca, c));
    return out;
}

std::vector<FieldElem> line_restriction(const MultiPoly& f, const std::vector<FieldElem>& base,
                                        const std::vector<FieldElem>& dir) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    if (base.size() != ring.nvars() || dir.size() != ring.nvars())
        throw std::invalid_argument("line_restriction: arity mismatch");
    const unsigned d = ring.d;
    // Pascal's triangle reduced into the field
    std::vector<std::vector<FieldElem>> binom(d + 1);
    for (unsigned i = 0; i <= d; ++i) {
        binom[i].resize(i + 1);
        for (unsigned j = 0; j <= i; ++j)
            binom[i][j] = (j == 0 || j == i)
                              ? ctx.one()
                              : ctx.add(binom[i - 1][j - 1], binom[i - 1][j]);
    }
    std::vector<FieldElem> out(d + 1, ctx.zero());
    std::vector<FieldElem> acc, factor, next;
    for (const auto& [e, c] : f.terms()) {
        acc.assign(1, c);
        for (unsigned l = 0; l < ring.nvars(); ++l) {
            unsigned el = e[l];
            if (el == 0) continue;
            // (base_l + t dir_l)^el, coefficient of t^j is C(el,j) b^{el-j} dv^j
            std::vector<FieldElem> bp(el + 1), dp(el + 1);
            bp[0] = ctx.one();
            dp[0] = ctx.one();
            for (unsigned j = 1; j <= el; ++j) {
                bp[j] = ctx.mul(bp[j - 1], base[l]);
                dp[j] = ctx.mul(dp[j - 1], dir[l]);
            }
            factor.assign(el + 1, ctx.zero());
            for (unsigned j = 0; j <= el; ++j)
                factor[j] = ctx.mul(binom[el][j], ctx.mul(bp[el - j], dp[j]));
            next.assign(std::min<std::size_t>(acc.size() + el, d + 1), ctx.zero());
            for (std::size_t i = 0; i < acc.size(); ++i) {
                if (acc[i].is_zero()) continue;
                for (unsigned j = 0; j <= el && i + j < next.size(); ++j)
                    next[i + j] = ctx.add(next[i + j], ctx.mul(acc[i], factor[j]));
            }
            acc.swap(next);
        }
        for (std::size_t i = 0; i < acc.size(); ++i) out[i] = ctx.add(out[i], acc[i]);
    }
    return out;
}

std::vector<FieldElem> restrict_to_chart_line(const MultiPoly& f,
                                              const std::vector<FieldElem>& xi,
                                              const std::vector<FieldElem>& zeta) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    if (xi.size() != ring.n || zeta.size() != ring.n - 1)
        throw std::invalid_argument("restrict_to_chart_line: arity mismatch");
    std::vector<FieldElem> base(ring.nvars(), ctx.zero());
    std::vector<FieldElem> dir(ring.nvars(), ctx.zero());
    base[0] = ctx.one();
    for (unsigned i = 0; i < ring.n; ++i) base[i + 1] = xi[i];
    dir[1] = ctx.one();
    for (unsigned i = 2; i <= ring.n; ++i) dir[i] = zeta[i - 2];
    return line_restriction(f, base, dir);
}

std::vector<FieldElem> restrict_to_line_general(const MultiPoly& f,
                                                const std::vector<FieldElem>& p,
                                                const std::vector<FieldElem>& v) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    MatF m = MatF::zero(ctx, 2, ring.nvars());
    for (unsigned i = 0; i < ring.nvars(); ++i) {
        m.at(0, i) = p.at(i);
        m.at(1, i) = v.at(i);
    }
    if (rank(ctx, m) != 2)
        throw std::invalid_argument("restrict_to_line_general: p and v must be independent");
    return line_restriction(f, p, v);
}

MultiPoly transform(const MultiPoly& f, const MatF& a) {
    const auto& ring = f.ring();
    const auto& ctx = ring.ctx;
    if (a.rows() != ring.nvars() || a.cols() != ring.nvars())
        throw std::invalid_argument("transform: matrix size mismatch");
    if (det(ctx, a).is_zero()) throw std::domain_error("transform: singular matrix");
    MultiPoly out(ring);
    // substitute x_l -> row l of a (a linear form in the new variables)
    for (const auto& [e, c] : f.terms()) {
        std::map<ExpVec, FieldElem> acc;
        acc.emplace(ExpVec(ring.nvars(), 0), c);
        for (unsigned l = 0; l < ring.nvars(); ++l) {
            for (unsigned rep = 0; rep < e[l]; ++rep) {
                std::map<ExpVec, FieldElem> next;
                for (const auto& [ae, ac] : acc) {
                    for (unsigned j = 0; j < ring.nvars(); ++j) {
                        const FieldElem& alj = a.at(l, j);
                        if (alj.is_zero()) continue;
                        ExpVec ne = ae;
                        ++ne[j];
                        FieldElem nc = ctx.mul(ac, alj);
                        auto it = next.find(ne);
                        if (it == next.end()) {
                            next.emplace(std::move(ne), nc);
                        } else {
                            it->second = ctx.add(it->second, nc);
                            if (it->second.is_zero()) next.erase(it);
                        }
                    }
                }
                acc.swap(next);
            }
        }
        for (const auto& [ae, ac] : acc) out.add_term(ae, ac);
    }
    return out;
}

MultiPoly sample_poly(const PolyRing& ring, u64 seed) {
    Rng rng(seed);
    auto mons = monomials_of_degree(ring.nvars(), ring.d);
    for (;;) {
        MultiPoly f(ring);
        bool nonzero = false;
        for (const auto& e : mons) {
            FieldElem c = ring.ctx.random(rng);
            if (!c.is_zero()) {
                f.add_term(e, c);
                nonzero = true;
            }
        }
        if (nonzero) return f;
    }
}

u64 monomial_count(const PolyRing& ring) { return binom_u64(ring.n + ring.d, ring.n); }

void enumerate_polys(const PolyRing& ring, u64 cap,
                     const std::function<void(const MultiPoly&)>& visit) {
    const u64 nmon = monomial_count(ring);
    // q^nmon must fit and stay below cap
    long double total_ld = 1;
    for (u64 i = 0; i < nmon; ++i) total_ld *= static_cast<long double>(ring.ctx.q());
    if (total_ld > static_cast<long double>(cap))
        throw ResourceLimit("enumerate_polys: coefficient space exceeds bound");
    auto mons = monomials_of_degree(ring.nvars(), ring.d);
    std::vector<u64> idx(nmon, 0);
    for (;;) {
        // advance odometer (skip the all-zero vector by advancing first)
        std::size_t pos = 0;
        while (pos < nmon && ++idx[pos] == ring.ctx.q()) idx[pos++] = 0;
        if (pos == nmon) break;
        MultiPoly f(ring);
        for (u64 i = 0; i < nmon; ++i)
            if (idx[i] != 0) f.add_term(mons[i], ring.ctx.elem_at(idx[i]));
        visit(f);
    }
}

std::string serialize_poly(const MultiPoly& f) {
    const auto& ring = f.ring();
    std::ostringstream out;
    out << "poly n=" << ring.n << " d=" << ring.d << " field=" << ring.ctx.spec_string() << "\n";
    // terms in descending lex on exponent vectors
    std::vector<const std::pair<const ExpVec, FieldElem>*> terms;
    for (const auto& t : f.terms()) terms.push_back(&t);
    std::sort(terms.begin(), terms.end(),
              [](auto* a, auto* b) { return a->first > b->first; });
    for (auto* t : terms) {
        out << ring.ctx.format(t->second);
        for (unsigned e : t->first) out << ' ' << e;
        out << "\n";
    }
    return out.str();
}

MultiPoly parse_poly(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("parse_poly: empty input");
    std::istringstream hs(header);
    std::string tag, ntok, dtok, ftok;
    hs >> tag >> ntok >> dtok >> ftok;
    if (tag != "poly" || ntok.rfind("n=", 0) != 0 || dtok.rfind("d=", 0) != 0 ||
        ftok.rfind("field=", 0) != 0)
        throw std::invalid_argument("parse_poly: bad header: " + header);
    unsigned n = static_cast<unsigned>(std::stoul(ntok.substr(2)));
    unsigned d = static_cast<unsigned>(std::stoul(dtok.substr(2)));
    FieldCtx ctx = parse_field_spec(ftok.substr(6));
    MultiPoly f(make_ring(ctx, n, d));
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string ctok;
        if (!(ls >> ctok)) continue;  // blank line
        ExpVec e(n + 1);
        for (unsigned i = 0; i <= n; ++i)
            if (!(ls >> e[i])) throw std::invalid_argument("parse_poly: bad term line: " + line);
        unsigned extra;
        if (ls >> extra) throw std::invalid_argument("parse_poly: too many exponents: " + line);
        f.add_term(e, ctx.parse_elem(ctok));
    }
    return f;
}

}  // namespace incidence
