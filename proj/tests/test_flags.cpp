#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "incidence/flags.hpp"

using namespace incidence;

namespace {

MultiPoly fermat(const FieldCtx& ctx, unsigned n, unsigned d) {
    MultiPoly f(make_ring(ctx, n, d));
    for (unsigned i = 0; i <= n; ++i) {
        ExpVec e(n + 1, 0);
        e[i] = d;
        f.add_term(e, ctx.one());
    }
    return f;
}

std::vector<FieldElem> vec(const FieldCtx& ctx, std::initializer_list<i64> vals) {
    std::vector<FieldElem> out;
    for (i64 v : vals) out.push_back(ctx.from_int(v));
    return out;
}

// Independent oracle: every flag by full enumeration, multiplicity by direct
// restriction.
std::set<Flag> brute_Y(const MultiPoly& f, MultBound m) {
    const auto& ctx = f.ring().ctx;
    std::set<Flag> out;
    EnumCaps caps;
    enumerate_flags(ctx, f.ring().n, caps, [&](const Flag& fl) {
        Multiplicity mult = multiplicity(f, fl);
        bool in = m.infinite ? mult.infinite : mult.at_least(m.m);
        if (in) out.insert(fl);
        return true;
    });
    return out;
}

u64 brute_X(const MultiPoly& f) {
    const auto& ctx = f.ring().ctx;
    u64 count = 0;
    enumerate_points(ctx, f.ring().n, [&](const std::vector<FieldElem>& p) {
        if (evaluate(f, p).is_zero()) ++count;
        return true;
    });
    return count;
}

}  // namespace

TEST_CASE("flag canonicalization") {
    FieldCtx f7 = make_field(7, 1);
    Flag a = make_flag(f7, vec(f7, {2, 4, 6}), vec(f7, {1, 0, 0}));
    // same line, different representatives
    Flag b = make_flag(f7, vec(f7, {1, 2, 3}), vec(f7, {3, 2, 3}));
    CHECK(a == b);
    CHECK(a.p == vec(f7, {1, 2, 3}));
    CHECK(a.v[pivot_index(a.p)].is_zero());
    CHECK_THROWS_AS(make_flag(f7, vec(f7, {1, 2, 3}), vec(f7, {2, 4, 6})),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_flag(f7, vec(f7, {0, 0, 0}), vec(f7, {1, 0, 0})),
                    std::invalid_argument);

    std::string s = format_flag(f7, a);
    CHECK(parse_flag(f7, 2, s) == a);
}

TEST_CASE("multiplicity") {
    FieldCtx f7 = make_field(7, 1);
    MultiPoly cubic = fermat(f7, 2, 3);
    Flag flex = make_flag(f7, vec(f7, {0, 1, 6}), vec(f7, {1, 0, 0}));
    CHECK(multiplicity(cubic, flex) == Multiplicity::finite(3));

    // F = x2 * Q vanishes identically on {x2 = 0}
    MultiPoly fq(make_ring(f7, 2, 3));
    fq.add_term({2, 0, 1}, f7.one());
    fq.add_term({0, 2, 1}, f7.from_int(3));
    Flag inside = make_flag(f7, vec(f7, {1, 1, 0}), vec(f7, {1, 0, 0}));
    CHECK(multiplicity(fq, inside) == Multiplicity::inf());

    Flag off = make_flag(f7, vec(f7, {1, 1, 1}), vec(f7, {1, 0, 0}));
    CHECK(evaluate(cubic, off.p) == f7.from_int(3));
    CHECK(multiplicity(cubic, off) == Multiplicity::finite(0));
}

TEST_CASE("adapted basis, exhaustively for n=2 q=3") {
    FieldCtx f3 = make_field(3, 1);
    EnumCaps caps;
    u64 seen = 0;
    enumerate_flags(f3, 2, caps, [&](const Flag& fl) {
        ++seen;
        MatF a = adapted_basis(f3, fl);
        CHECK_FALSE(det(f3, a).is_zero());
        CHECK(a.col(0) == fl.p);
        MatF ainv = inverse(f3, a);
        Flag back = make_flag(f3, mat_vec(f3, ainv, fl.p), mat_vec(f3, ainv, fl.v));
        CHECK(back.p == vec(f3, {1, 0, 0}));
        CHECK(back.v == vec(f3, {0, 1, 0}));
        return true;
    });
    CHECK(seen == 52);
    CHECK(flag_count(3, 2) == 52);
}

TEST_CASE("multiplicity is invariant under coordinate change") {
    FieldCtx f7 = make_field(7, 1);
    PolyRing ring = make_ring(f7, 2, 3);
    Rng rng(2024);
    int done = 0;
    while (done < 300) {
        MultiPoly f = sample_poly(ring, rng.next());
        std::vector<FieldElem> p(3), v(3);
        for (auto& c : p) c = f7.random(rng);
        for (auto& c : v) c = f7.random(rng);
        MatF a = MatF::zero(f7, 3, 3);
        for (unsigned r = 0; r < 3; ++r)
            for (unsigned c = 0; c < 3; ++c) a.at(r, c) = f7.random(rng);
        if (det(f7, a).is_zero()) continue;
        Flag fl;
        try {
            fl = make_flag(f7, p, v);
        } catch (const std::invalid_argument&) {
            continue;
        }
        MatF ainv = inverse(f7, a);
        Flag moved = make_flag(f7, mat_vec(f7, ainv, fl.p), mat_vec(f7, ainv, fl.v));
        CHECK(multiplicity(f, fl) == multiplicity(transform(f, a), moved));
        ++done;
    }
}

TEST_CASE("flag counts match the closed formula") {
    EnumCaps caps;
    for (u64 q : {2, 3, 4, 5, 7}) {
        for (unsigned n : {2u, 3u}) {
            FieldCtx ctx = q == 4 ? make_field(2, 2) : make_field(q, 1);
            u64 expected = projective_point_count(q, n) * projective_point_count(q, n - 1);
            CHECK(flag_count(q, n) == expected);
            if (expected <= 200000) {
                u64 seen = 0;
                enumerate_flags(ctx, n, caps, [&](const Flag&) {
                    ++seen;
                    return true;
                });
                CHECK(seen == expected);
            }
        }
    }
    CHECK(flag_count(2, 2) == 21);
    CHECK(flag_count(7, 2) == 456);
    FieldCtx f2 = make_field(2, 1);
    CHECK_THROWS_AS(enumerate_flags(f2, 1, EnumCaps{}, [](const Flag&) { return true; }),
                    std::invalid_argument);
}

TEST_CASE("line enumeration matches the Gaussian binomial") {
    EnumCaps caps;
    for (u64 q : {2, 3, 5}) {
        for (unsigned n : {2u, 3u}) {
            FieldCtx ctx = make_field(q, 1);
            u64 seen = 0;
            std::set<Flag> uniq;
            enumerate_lines(ctx, n, caps, [&](const Flag& fl) {
                ++seen;
                uniq.insert(fl);
                return true;
            });
            CHECK(seen == line_count(q, n));
            CHECK(uniq.size() == seen);
        }
    }
    CHECK(line_count(2, 2) == 7);
    CHECK(line_count(2, 3) == 35);
}

TEST_CASE("X scan agrees with brute-force evaluation") {
    for (auto [q, n, d] : {std::tuple<u64, unsigned, unsigned>{5, 2, 3},
                           {7, 2, 4},
                           {3, 3, 2},
                           {2, 3, 3},
                           {4, 2, 3}}) {
        FieldCtx ctx = q == 4 ? make_field(2, 2) : make_field(q, 1);
        PolyRing ring = make_ring(ctx, n, d);
        EnumCaps caps;
        for (u64 s = 0; s < 10; ++s) {
            MultiPoly f = sample_poly(ring, 5000 + s);
            std::set<std::vector<FieldElem>> scan;
            for_each_X_point(f, caps, [&](const std::vector<FieldElem>& p) {
                CHECK(evaluate(f, p).is_zero());
                scan.insert(p);
                return true;
            });
            CHECK(scan.size() == brute_X(f));
            CHECK(count_X(f, caps) == scan.size());
        }
    }
}

TEST_CASE("Y sweep agrees with brute-force flag enumeration") {
    for (auto [q, n, d] : {std::tuple<u64, unsigned, unsigned>{5, 2, 3},
                           {3, 2, 4},
                           {2, 3, 3},
                           {3, 3, 2},
                           {4, 2, 3}}) {
        FieldCtx ctx = q == 4 ? make_field(2, 2) : make_field(q, 1);
        PolyRing ring = make_ring(ctx, n, d);
        EnumCaps caps;
        for (u64 s = 0; s < 6; ++s) {
            MultiPoly f = sample_poly(ring, 31 * s + 1);
            std::vector<MultBound> bounds;
            for (unsigned m = 1; m <= d; ++m) bounds.push_back(MultBound::finite(m));
            bounds.push_back(MultBound::inf());
            for (auto m : bounds) {
                auto expect = brute_Y(f, m);
                std::set<Flag> got;
                for_each_Y_flag(f, m, caps, [&](const Flag& fl, const Multiplicity& mult) {
                    bool in = m.infinite ? mult.infinite : mult.at_least(m.m);
                    CHECK(in);
                    CHECK(multiplicity(f, fl) == mult);
                    got.insert(fl);
                    return true;
                });
                CHECK(got == expect);
                CHECK(count_Y(f, m, caps) == expect.size());
            }
        }
    }
}

TEST_CASE("inclusion chain of the Y schemes") {
    FieldCtx f5 = make_field(5, 1);
    PolyRing ring = make_ring(f5, 2, 4);
    for (u64 s = 0; s < 5; ++s) {
        MultiPoly f = sample_poly(ring, 777 + s);
        std::set<Flag> prev = brute_Y(f, MultBound::finite(1));
        for (unsigned m = 2; m <= 4; ++m) {
            std::set<Flag> cur = brute_Y(f, MultBound::finite(m));
            for (const auto& fl : cur) CHECK(prev.count(fl) == 1);
            prev = cur;
        }
        std::set<Flag> inf = brute_Y(f, MultBound::inf());
        for (const auto& fl : inf) CHECK(prev.count(fl) == 1);
    }
}

TEST_CASE("chart coordinates of Y members solve the local equations") {
    FieldCtx f5 = make_field(5, 1);
    PolyRing ring = make_ring(f5, 2, 3);
    EnumCaps caps;
    for (u64 s = 0; s < 5; ++s) {
        MultiPoly f = sample_poly(ring, 99 + s);
        for (unsigned m = 1; m <= 3; ++m) {
            for_each_Y_flag(f, MultBound::finite(m), caps,
                            [&](const Flag& fl, const Multiplicity&) {
                                // standard chart: p0 != 0 and the reduced
                                // direction has v1 != 0
                                if (pivot_index(fl.p) != 0 || fl.v[1].is_zero()) return true;
                                FieldElem inv = f5.inv(fl.v[1]);
                                std::vector<FieldElem> xi{fl.p[1], fl.p[2]};
                                std::vector<FieldElem> zeta{f5.mul(fl.v[2], inv)};
                                auto rc = restrict_to_chart_line(f, xi, zeta);
                                for (unsigned k = 0; k < m; ++k) CHECK(rc[k].is_zero());
                                return true;
                            });
        }
    }
}

TEST_CASE("bundle identities over small fields") {
    EnumCaps caps;
    for (auto [q, n] : {std::pair<u64, unsigned>{5, 2}, {7, 2}, {5, 3}}) {
        FieldCtx ctx = make_field(q, 1);
        PolyRing ring = make_ring(ctx, n, 3);
        for (u64 s = 0; s < 8; ++s) {
            MultiPoly f = sample_poly(ring, 1234 + s);
            u64 x = count_X(f, caps);
            CHECK(count_Y(f, MultBound::finite(1), caps) ==
                  x * projective_point_count(q, n - 1));
            CHECK(count_Y(f, MultBound::inf(), caps) == count_Z(f, caps) * (q + 1));
        }
    }
}

TEST_CASE("Fano scheme of the smooth quadric surface") {
    FieldCtx f5 = make_field(5, 1);
    MultiPoly quadric(make_ring(f5, 3, 2));
    quadric.add_term({1, 0, 0, 1}, f5.one());
    quadric.add_term({0, 1, 1, 0}, f5.from_int(-1));
    EnumCaps caps;
    CHECK(count_Z(quadric, caps) == 12);  // two rulings of q+1 lines
    CHECK(count_Y(quadric, MultBound::inf(), caps) == 72);
}

TEST_CASE("Z via line enumeration and via the point sweep agree") {
    FieldCtx f5 = make_field(5, 1);
    PolyRing ring = make_ring(f5, 3, 2);
    EnumCaps small_caps;
    small_caps.max_visits = 3200;  // below line_count*4 so the sweep route runs
    EnumCaps big_caps;
    for (u64 s = 0; s < 5; ++s) {
        MultiPoly f = sample_poly(ring, 10 + s);
        std::set<Flag> via_lines, via_sweep;
        for_each_Z_line(f, big_caps, [&](const Flag& fl) {
            via_lines.insert(fl);
            return true;
        });
        for_each_Z_line(f, small_caps, [&](const Flag& fl) {
            via_sweep.insert(fl);
            return true;
        });
        CHECK(via_lines == via_sweep);
    }
}

TEST_CASE("fiber enumeration") {
    FieldCtx f7 = make_field(7, 1);
    auto p = vec(f7, {1, 2, 3, 4});
    std::set<Flag> all;
    enumerate_fiber(f7, p, nullptr, [&](const Flag& fl) {
        CHECK(fl.p == p);
        all.insert(fl);
        return true;
    });
    CHECK(all.size() == projective_point_count(7, 2));

    auto g = vec(f7, {5, 1, 0, 0});  // g . p = 5 + 2 = 0 mod 7
    std::set<Flag> tangent;
    enumerate_fiber(f7, p, &g, [&](const Flag& fl) {
        FieldElem dot = f7.zero();
        for (unsigned i = 0; i < 4; ++i) dot = f7.add(dot, f7.mul(g[i], fl.v[i]));
        CHECK(dot.is_zero());
        tangent.insert(fl);
        return true;
    });
    CHECK(tangent.size() == projective_point_count(7, 1));
    for (const auto& fl : tangent) CHECK(all.count(fl) == 1);
}

TEST_CASE("scheme materialization") {
    FieldCtx f7 = make_field(7, 1);
    MultiPoly cubic = fermat(f7, 2, 3);
    EnumCaps caps;
    auto rx = enumerate_scheme(cubic, SchemeKind::X, MultBound::finite(1), caps);
    CHECK(rx.count == brute_X(cubic));
    CHECK(rx.points.size() == rx.count);
    auto ry = enumerate_scheme(cubic, SchemeKind::Y, MultBound::finite(3), caps);
    CHECK(ry.count == 9);  // rational flexes of the Fermat cubic over GF(7)
    caps.max_list = 3;
    auto ry2 = enumerate_scheme(cubic, SchemeKind::Y, MultBound::finite(1), caps);
    CHECK(ry2.truncated);
    CHECK(ry2.flags.size() == 3);
}

TEST_CASE("extension witnesses") {
    FieldCtx f2 = make_field(2, 1);
    MultiPoly cubic = fermat(f2, 2, 3);
    EnumCaps caps;
    // (0:1:1) with the line {x1 + x2 = 0} already gives t^3 over GF(2)
    auto w = nonempty_over_extensions(cubic, MultBound::finite(3), 2, caps);
    CHECK(w.found);
    CHECK(w.degree == 1);
    REQUIRE(w.flag.has_value());
    CHECK(multiplicity(cubic, *w.flag).at_least(3));

    // a pointless quartic over GF(2) acquires points over an extension
    PolyRing r4 = make_ring(f2, 2, 4);
    std::optional<MultiPoly> pointless;
    enumerate_polys(r4, 40000, [&](const MultiPoly& f) {
        if (!pointless && count_X(f, EnumCaps{}) == 0) pointless = f;
    });
    REQUIRE(pointless.has_value());
    auto w2 = nonempty_over_extensions(*pointless, MultBound::finite(1), 3, caps);
    CHECK(w2.found);
    CHECK(w2.degree >= 2);
    auto w3 = nonempty_over_extensions(*pointless, MultBound::finite(1), 1, caps);
    CHECK_FALSE(w3.found);
}

TEST_CASE("resource caps surface as ResourceLimit") {
    FieldCtx f101 = make_field(101, 1);
    MultiPoly f = fermat(f101, 3, 3);
    EnumCaps caps;
    caps.max_visits = 50;
    CHECK_THROWS_AS(count_X(f, caps), ResourceLimit);
}
