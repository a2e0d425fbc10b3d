#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "incidence/smoothness.hpp"

using namespace incidence;

namespace {

std::vector<FieldElem> vec(const FieldCtx& ctx, std::initializer_list<i64> vals) {
    std::vector<FieldElem> out;
    for (i64 v : vals) out.push_back(ctx.from_int(v));
    return out;
}

Flag standard_flag(const FieldCtx& ctx, unsigned n) {
    std::vector<FieldElem> p(n + 1, ctx.zero()), v(n + 1, ctx.zero());
    p[0] = ctx.one();
    v[1] = ctx.one();
    return Flag{p, v};
}

// Membership-conditioned sampling: a uniform F with the given flag in
// Y_{F,m}, produced by zeroing the first m adapted coefficients in the
// adapted coordinates and pulling back.
MultiPoly conditioned_sample(const PolyRing& ring, const Flag& flag, unsigned m, Rng& rng) {
    const auto& ctx = ring.ctx;
    MatF a = adapted_basis(ctx, flag);
    for (;;) {
        MultiPoly g(ring);
        for (const auto& e : monomials_of_degree(ring.nvars(), ring.d)) {
            bool forced_zero = false;
            // coefficient of x0^{d-i} x1^i with i < m must vanish
            if (e[0] + e[1] == ring.d) {
                unsigned i = e[1];
                if (i < m) forced_zero = true;
            }
            if (!forced_zero) g.add_term(e, ctx.random(rng));
        }
        if (g.is_zero()) continue;
        return transform(g, inverse(ctx, a));
    }
}

MatF mat_from(const FieldCtx& ctx, std::initializer_list<std::initializer_list<i64>> rows) {
    std::size_t r = rows.size(), c = rows.begin()->size();
    MatF m = MatF::zero(ctx, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (i64 v : row) m.at(i, j++) = ctx.from_int(v);
        ++i;
    }
    return m;
}

// Independent rank oracle for small matrices: largest k with a nonzero k x k
// minor, by cofactor determinants.
std::size_t rank_by_minors(const FieldCtx& ctx, const MatF& m) {
    std::size_t best = 0;
    std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> rsel, csel;
    std::function<FieldElem(std::vector<std::size_t>&, std::vector<std::size_t>&)> minor_det =
        [&](std::vector<std::size_t>& rs, std::vector<std::size_t>& cs) -> FieldElem {
        std::size_t k = rs.size();
        if (k == 1) return m.at(rs[0], cs[0]);
        FieldElem acc = ctx.zero();
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<std::size_t> rs2(rs.begin() + 1, rs.end());
            std::vector<std::size_t> cs2;
            for (std::size_t t = 0; t < k; ++t)
                if (t != j) cs2.push_back(cs[t]);
            FieldElem term = ctx.mul(m.at(rs[0], cs[j]), minor_det(rs2, cs2));
            acc = (j % 2 == 0) ? ctx.add(acc, term) : ctx.sub(acc, term);
        }
        return acc;
    };
    std::function<void(std::size_t, std::size_t)> search = [&](std::size_t k, std::size_t) {
        // iterate over all k-subsets of rows and columns
        std::vector<std::size_t> rs(k), cs(k);
        std::function<bool(std::size_t, std::size_t)> pick_rows = [&](std::size_t pos,
                                                                      std::size_t start) -> bool {
            if (pos == k) {
                std::function<bool(std::size_t, std::size_t)> pick_cols =
                    [&](std::size_t cpos, std::size_t cstart) -> bool {
                    if (cpos == k) {
                        auto rs_copy = rs;
                        auto cs_copy = cs;
                        return !minor_det(rs_copy, cs_copy).is_zero();
                    }
                    for (std::size_t c = cstart; c < cols; ++c) {
                        cs[cpos] = c;
                        if (pick_cols(cpos + 1, c + 1)) return true;
                    }
                    return false;
                };
                return pick_cols(0, 0);
            }
            for (std::size_t r = start; r < rows; ++r) {
                rs[pos] = r;
                if (pick_rows(pos + 1, r + 1)) return true;
            }
            return false;
        };
        if (pick_rows(0, 0)) best = k;
    };
    for (std::size_t k = 1; k <= std::min(rows, cols); ++k) search(k, 0);
    return best;
}

}  // namespace

TEST_CASE("adapted coefficients at the standard flag") {
    FieldCtx f7 = make_field(7, 1);
    for (unsigned n : {2u, 3u}) {
        for (unsigned d : {3u, 4u}) {
            MultiPoly f(make_ring(f7, n, d));
            ExpVec e(n + 1, 0);
            e[0] = d - 1;
            e[1] = 1;
            f.add_term(e, f7.one());  // x0^{d-1} x1
            auto co = adapted_coeffs(f, standard_flag(f7, n));
            for (unsigned i = 0; i <= d; ++i)
                CHECK(co.a[i] == (i == 1 ? f7.one() : f7.zero()));
            for (unsigned k = 0; k < d; ++k)
                for (unsigned j = 0; j + 2 <= n + 1 - 1 + 1 && j < n - 1; ++j)
                    CHECK(co.side.at(k, j).is_zero());
        }
    }
}

TEST_CASE("adapted coefficients agree with the transform read-off") {
    // prime contexts run the raw-residue path, extension contexts the generic
    // one; both must reproduce the transform read-off
    for (auto [q, n, d] : {std::tuple<u64, unsigned, unsigned>{7, 2, 3},
                           {5, 3, 3},
                           {3, 2, 4},
                           {4, 2, 3},
                           {9, 3, 2}}) {
        FieldCtx ctx = q == 4 ? make_field(2, 2) : q == 9 ? make_field(3, 2) : make_field(q, 1);
        PolyRing ring = make_ring(ctx, n, d);
        Rng rng(101 + q);
        int done = 0;
        while (done < 40) {
            MultiPoly f = sample_poly(ring, rng.next());
            std::vector<FieldElem> p(n + 1), v(n + 1);
            for (auto& c : p) c = ctx.random(rng);
            for (auto& c : v) c = ctx.random(rng);
            Flag fl;
            try {
                fl = make_flag(ctx, p, v);
            } catch (const std::invalid_argument&) {
                continue;
            }
            auto co = adapted_coeffs(f, fl);
            MultiPoly g = transform(f, adapted_basis(ctx, fl));
            for (unsigned i = 0; i <= d; ++i) {
                ExpVec e(n + 1, 0);
                e[0] = d - i;
                e[1] = i;
                CHECK(co.a[i] == g.coeff(e));
            }
            for (unsigned k = 0; k < d; ++k)
                for (unsigned j = 2; j <= n; ++j) {
                    ExpVec e(n + 1, 0);
                    e[0] = d - k - 1;
                    e[1] = k;
                    e[j] = 1;
                    CHECK(co.side.at(k, j - 2) == g.coeff(e));
                }
            ++done;
        }
    }
}

TEST_CASE("membership reads off the leading adapted coefficients, exhaustively") {
    FieldCtx f2 = make_field(2, 1);
    PolyRing ring = make_ring(f2, 2, 3);
    EnumCaps caps;
    enumerate_polys(ring, 2000, [&](const MultiPoly& f) {
        enumerate_flags(f2, 2, caps, [&](const Flag& fl) {
            auto co = adapted_coeffs(f, fl);
            Multiplicity mult = multiplicity(f, fl);
            for (unsigned m = 1; m <= 3; ++m) {
                bool lead_zero = true;
                for (unsigned i = 0; i < m; ++i)
                    if (!co.a[i].is_zero()) lead_zero = false;
                CHECK(lead_zero == mult.at_least(m));
            }
            return true;
        });
    });
}

TEST_CASE("closed-form Jacobian frozen examples") {
    FieldCtx f7 = make_field(7, 1);
    MultiPoly f(make_ring(f7, 2, 3));
    f.add_term({2, 1, 0}, f7.one());  // x0^2 x1
    MatF j1 = jacobian_closed_form(f, standard_flag(f7, 2), 1);
    REQUIRE(j1.rows() == 1);
    REQUIRE(j1.cols() == 3);
    CHECK(j1.at(0, 0) == f7.one());  // 1 * a_1
    CHECK(j1.at(0, 1).is_zero());
    CHECK(j1.at(0, 2).is_zero());
    CHECK(rank_exact(f7, j1) == 1);

    // characteristic 2 kills the m a_m entry for m = 2
    FieldCtx f2 = make_field(2, 1);
    MultiPoly g(make_ring(f2, 2, 3));
    g.add_term({1, 2, 0}, f2.one());  // x0 x1^2: a_2 = 1
    MatF j2 = jacobian_closed_form(g, standard_flag(f2, 2), 2);
    CHECK(j2.at(1, 0).is_zero());

    // flag not in Y_{F,m} is an error
    MultiPoly h(make_ring(f7, 2, 3));
    h.add_term({3, 0, 0}, f7.one());
    CHECK_THROWS_AS(jacobian_closed_form(h, standard_flag(f7, 2), 1), std::domain_error);
}

TEST_CASE("closed form equals the dual-number linearization") {
    struct Case {
        u64 p;
        unsigned n, d;
    };
    for (auto c : {Case{101, 2, 3}, Case{101, 3, 4}, Case{2, 2, 4}, Case{3, 2, 3}, Case{2, 3, 3},
                   Case{3, 3, 3}}) {
        FieldCtx ctx = make_field(c.p, 1);
        PolyRing ring = make_ring(ctx, c.n, c.d);
        Rng rng(0xfeed + c.p * 100 + c.n * 10 + c.d);
        int done = 0;
        while (done < 30) {
            std::vector<FieldElem> p(c.n + 1), v(c.n + 1);
            for (auto& x : p) x = ctx.random(rng);
            for (auto& x : v) x = ctx.random(rng);
            Flag fl;
            try {
                fl = make_flag(ctx, p, v);
            } catch (const std::invalid_argument&) {
                continue;
            }
            unsigned m = 1 + static_cast<unsigned>(rng.below(c.d));
            MultiPoly f = conditioned_sample(ring, fl, m, rng);
            MatF closed = jacobian_closed_form(f, fl, m);
            MatF lin = jacobian_linearized(f, fl, m);
            CHECK(closed == lin);
            ++done;
        }
    }
}

TEST_CASE("rank") {
    FieldCtx f7 = make_field(7, 1);
    CHECK(rank_exact(f7, MatF::zero(f7, 3, 4)) == 0);
    CHECK(rank_exact(f7, MatF::identity(f7, 5)) == 5);
    MatF b = mat_from(f7, {{1, 0}, {0, 1}, {0, 0}});
    CHECK(rank_exact(f7, btilde(f7, b)) == 3);
    // agreement with the minor oracle on random matrices
    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        MatF m = MatF::zero(f7, 3, 4);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 4; ++c) m.at(r, c) = f7.from_int(rng.below(7));
        CHECK(rank_exact(f7, m) == rank_by_minors(f7, m));
    }
}

TEST_CASE("degeneracy locus membership") {
    FieldCtx f7 = make_field(7, 1);

    // first row zero: in Delta, stratum 2, not in Delta^0
    MatF b1 = mat_from(f7, {{0, 0}, {1, 0}, {0, 1}});
    CHECK(member_delta(f7, b1));
    CHECK_FALSE(member_delta0(f7, b1));
    CHECK(stratum_index(f7, b1) == 2u);

    // full-rank doubled block: not in Delta
    MatF b2 = mat_from(f7, {{1, 0}, {0, 1}, {0, 0}});
    CHECK_FALSE(member_delta(f7, b2));
    CHECK_FALSE(stratum_index(f7, b2).has_value());

    // geometric progression rows: row3 = 2 row2 in the doubled block, so the
    // matrix is degenerate with a nonzero first row (stratum 3)
    MatF b3 = mat_from(f7, {{1, 0}, {2, 0}, {4, 0}});
    CHECK(rank_exact(f7, btilde(f7, b3)) == 2);
    CHECK(member_delta(f7, b3));
    CHECK(member_delta0(f7, b3));
    CHECK(stratum_index(f7, b3) == 3u);

    MatF b4 = mat_from(f7, {{1, 0}, {0, 0}, {0, 0}});
    CHECK(rank_exact(f7, btilde(f7, b4)) == 2);
    CHECK(member_delta0(f7, b4));
    CHECK(stratum_index(f7, b4) == 3u);

    CHECK_THROWS_AS(member_delta(f7, MatF::zero(f7, 3, 2)), std::invalid_argument);
}

TEST_CASE("delta counts and strata partition, exhaustive at (3,2,q=2)") {
    FieldCtx f2 = make_field(2, 1);
    DeltaCounts counts = count_delta(3, 2, f2);
    // independent recount with the minor-rank oracle
    u64 delta = 0, delta0 = 0, stratum2 = 0, stratum3 = 0;
    for (u64 code = 1; code < 64; ++code) {
        MatF b = MatF::zero(f2, 3, 2);
        for (unsigned i = 0; i < 6; ++i)
            if (code >> i & 1) b.at(i / 2, i % 2) = f2.one();
        bool in = rank_by_minors(f2, btilde(f2, b)) < 3;
        CHECK(in == member_delta(f2, b));
        if (!in) continue;
        ++delta;
        bool row0 = !b.at(0, 0).is_zero() || !b.at(0, 1).is_zero();
        if (row0) ++delta0;
        auto st = stratum_index(f2, b);
        REQUIRE(st.has_value());
        if (*st == 2) ++stratum2;
        if (*st == 3) ++stratum3;
        CHECK(row0 == (*st != 2));  // Delta_2 is exactly the zero-first-row slice
    }
    CHECK(counts.affine_delta == delta);
    CHECK(counts.affine_delta0 == delta0);
    CHECK(delta == stratum2 + stratum3);
    CHECK(counts.affine_delta % 1 == 0);
    CHECK(counts.projective_delta == delta);    // q - 1 = 1
    CHECK(counts.affine_delta0 <= counts.affine_delta);
    CHECK_THROWS_AS(count_delta(4, 4, make_field(101, 1), 1000), ResourceLimit);
}

TEST_CASE("classification: m=1 is the gradient criterion, exhaustively") {
    FieldCtx f2 = make_field(2, 1);
    PolyRing ring = make_ring(f2, 2, 3);
    EnumCaps caps;
    enumerate_polys(ring, 2000, [&](const MultiPoly& f) {
        enumerate_flags(f2, 2, caps, [&](const Flag& fl) {
            auto cls = classify_flag(f, fl, 1);
            if (!evaluate(f, fl.p).is_zero()) {
                CHECK(cls == FlagClass::not_in_Y);
                return true;
            }
            bool singular = true;
            for (const auto& g : gradient_at(f, fl.p))
                if (!g.is_zero()) singular = false;
            CHECK(cls == (singular ? FlagClass::W0 : FlagClass::smooth));
            return true;
        });
    });
}

TEST_CASE("classify agrees across the prime and generic element paths") {
    // lift a prime-field situation into GF(p^2) embedded coordinates: the
    // classification must not change
    FieldCtx f5 = make_field(5, 1);
    FieldCtx f25 = make_field(5, 2);
    FieldEmbedding emb(f5, f25);
    PolyRing ring = make_ring(f5, 2, 3);
    Rng rng(515);
    int done = 0;
    while (done < 25) {
        MultiPoly f = sample_poly(ring, rng.next());
        std::vector<FieldElem> p(3), v(3);
        for (auto& c : p) c = f5.random(rng);
        for (auto& c : v) c = f5.random(rng);
        Flag fl;
        try {
            fl = make_flag(f5, p, v);
        } catch (const std::invalid_argument&) {
            continue;
        }
        MultiPoly lifted = lift_poly(f, emb);
        Flag lifted_flag = make_flag(f25, emb.map_vec(fl.p), emb.map_vec(fl.v));
        for (unsigned m = 1; m <= 3; ++m)
            CHECK(classify_flag(f, fl, m) == classify_flag(lifted, lifted_flag, m));
        ++done;
    }
}

TEST_CASE("classification is constant along fibers for m <= 2, exhaustively") {
    FieldCtx f2 = make_field(2, 1);
    PolyRing ring = make_ring(f2, 2, 3);
    enumerate_polys(ring, 2000, [&](const MultiPoly& f) {
        enumerate_points(f2, 2, [&](const std::vector<FieldElem>& p) {
            if (!evaluate(f, p).is_zero()) return true;
            for (unsigned m : {1u, 2u}) {
                std::optional<FlagClass> seen;
                enumerate_fiber(f2, p, nullptr, [&](const Flag& fl) {
                    auto cls = classify_flag(f, fl, m);
                    if (cls == FlagClass::not_in_Y) return true;
                    if (!seen) seen = cls;
                    CHECK(*seen == cls);
                    return true;
                });
            }
            return true;
        });
    });
}

TEST_CASE("a singular point makes every Y_2 flag degenerate") {
    FieldCtx f7 = make_field(7, 1);
    MultiPoly f(make_ring(f7, 2, 3));
    f.add_term({1, 2, 0}, f7.one());  // x0 x1^2, singular at (1:0:0)
    auto p = vec(f7, {1, 0, 0});
    enumerate_fiber(f7, p, nullptr, [&](const Flag& fl) {
        if (multiplicity(f, fl).at_least(2)) CHECK(classify_flag(f, fl, 2) == FlagClass::W2);
        return true;
    });
    // and a generic flag on a generic surface is a smooth point
    FieldCtx f101 = make_field(101, 1);
    PolyRing ring = make_ring(f101, 2, 3);
    Rng rng(4);
    int smooth_seen = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Flag fl = standard_flag(f101, 2);
        MultiPoly g = conditioned_sample(ring, fl, 2, rng);
        if (classify_flag(g, fl, 2) == FlagClass::smooth) ++smooth_seen;
    }
    CHECK(smooth_seen >= 18);
}

TEST_CASE("full-row linearized Jacobian rank at Fano flags") {
    // ruling line of the smooth quadric surface: all three restriction
    // coefficients cut it out transversally
    FieldCtx f5 = make_field(5, 1);
    MultiPoly quadric(make_ring(f5, 3, 2));
    quadric.add_term({1, 0, 0, 1}, f5.one());
    quadric.add_term({0, 1, 1, 0}, f5.from_int(-1));
    EnumCaps caps;
    for_each_Y_flag(quadric, MultBound::inf(), caps, [&](const Flag& fl, const Multiplicity&) {
        MatF j = jacobian_linearized_full(quadric, fl);
        CHECK(rank_exact(f5, j) == 3);
        return true;
    });
}

TEST_CASE("singular point extraction: singular base point branch") {
    FieldCtx f11 = make_field(11, 1);
    MultiPoly g(make_ring(f11, 2, 3));
    g.add_term({0, 3, 0}, f11.one());  // x1^3: triple line through (1:0:0) and (0:0:1)
    Flag fl = make_flag(f11, vec(f11, {1, 0, 0}), vec(f11, {0, 0, 1}));
    REQUIRE(multiplicity(g, fl).infinite);
    auto sp = singular_point_from_degenerate_flag(g, fl);
    CHECK(sp.ext_degree == 1);
    CHECK(evaluate(g, sp.point).is_zero());
    for (const auto& gr : gradient_at(g, sp.point)) CHECK(gr.is_zero());
}

namespace {

// F with prescribed adapted data at the standard flag: a_i = 0,
// a_{0,2} = 1, a_{1,2} = beta, a_{2,2} = alpha + beta^2, plus junk that is
// quadratic in x_2 and does not affect the construction.
MultiPoly degenerate_cubic(const FieldCtx& ctx, i64 alpha, i64 beta) {
    MultiPoly f(make_ring(ctx, 2, 3));
    f.add_term({2, 0, 1}, ctx.one());
    f.add_term({1, 1, 1}, ctx.from_int(beta));
    f.add_term({0, 2, 1}, ctx.add(ctx.from_int(alpha), ctx.mul(ctx.from_int(beta),
                                                               ctx.from_int(beta))));
    f.add_term({1, 0, 2}, ctx.from_int(3));
    f.add_term({0, 0, 3}, ctx.from_int(5));
    return f;
}

}  // namespace

TEST_CASE("singular point extraction: nonsingular base point branches") {
    FieldCtx f11 = make_field(11, 1);
    Flag fl = standard_flag(f11, 2);

    // rational branch: alpha = 7, beta = 0 gives s^2 = 4
    {
        MultiPoly f = degenerate_cubic(f11, 7, 0);
        REQUIRE(multiplicity(f, fl).at_least(3));
        REQUIRE(rank_exact(f11, jacobian_closed_form(f, fl, 3)) < 3);
        auto sp = singular_point_from_degenerate_flag(f, fl);
        CHECK(sp.ext_degree == 1);
        CHECK(evaluate(f, sp.point).is_zero());
        for (const auto& g : gradient_at(f, sp.point)) CHECK(g.is_zero());
    }
    // quadratic-extension branch: alpha = 9, beta = 0 gives s^2 = 2, a
    // non-square mod 11
    {
        MultiPoly f = degenerate_cubic(f11, 9, 0);
        auto sp = singular_point_from_degenerate_flag(f, fl);
        CHECK(sp.ext_degree == 2);
        CHECK(sp.field.q() == 121);
        FieldEmbedding emb(f11, sp.field);
        MultiPoly lifted = lift_poly(f, emb);
        CHECK(evaluate(lifted, sp.point).is_zero());
        for (const auto& g : gradient_at(lifted, sp.point)) CHECK(g.is_zero());
    }
    // alpha = beta = 0 forces s = 0, the adapted second basis point
    {
        MultiPoly f = degenerate_cubic(f11, 0, 0);
        auto sp = singular_point_from_degenerate_flag(f, fl);
        CHECK(sp.ext_degree == 1);
        CHECK(sp.point == vec(f11, {0, 1, 0}));
    }

    // precondition violations
    MultiPoly quartic(make_ring(f11, 2, 4));
    quartic.add_term({4, 0, 0}, f11.one());
    CHECK_THROWS_AS(singular_point_from_degenerate_flag(quartic, fl), std::invalid_argument);
    FieldCtx f3 = make_field(3, 1);
    MultiPoly c3(make_ring(f3, 2, 3));
    c3.add_term({0, 3, 0}, f3.one());
    CHECK_THROWS_AS(singular_point_from_degenerate_flag(c3, standard_flag(f3, 2)),
                    std::invalid_argument);
}

TEST_CASE("planted singular cubics yield verified singular points") {
    FieldCtx f11 = make_field(11, 1);
    for (unsigned n : {2u, 3u}) {
        PolyRing ring = make_ring(f11, n, 3);
        Rng rng(1000 + n);
        for (int trial = 0; trial < 50; ++trial) {
            // singular at e_0 by zeroing x0^3 and x0^2 x_j
            MultiPoly f(ring);
            for (const auto& e : monomials_of_degree(n + 1, 3)) {
                if (e[0] >= 2) continue;
                f.add_term(e, f11.random(rng));
            }
            if (f.is_zero()) continue;
            // a tangent-cone line through e_0 with contact >= 3
            std::vector<FieldElem> p(n + 1, f11.zero());
            p[0] = f11.one();
            std::optional<Flag> wflag;
            enumerate_fiber(f11, p, nullptr, [&](const Flag& fl) {
                if (multiplicity(f, fl).at_least(3)) {
                    wflag = fl;
                    return false;
                }
                return true;
            });
            if (!wflag) continue;  // cone may need the quadratic extension for n = 2
            auto sp = singular_point_from_degenerate_flag(f, *wflag);
            CHECK(sp.ext_degree == 1);
            CHECK(evaluate(f, sp.point).is_zero());
            for (const auto& g : gradient_at(f, sp.point)) CHECK(g.is_zero());
        }
    }
}
