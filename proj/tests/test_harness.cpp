#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "incidence/harness.hpp"

using namespace incidence;

namespace {

Json strip_runtime(Json rep) {
    rep.erase("runtime_ms");
    return rep;
}

}  // namespace

TEST_CASE("double count identity at q=2") {
    Json cfg{{"experiment", "double_count"},
             {"field", "2"},
             {"n", 2},
             {"d", 3},
             {"m_list", Json::array({1, 2, 3})}};
    Json rep = run_experiment(cfg);
    CHECK(rep["pass"] == true);
    CHECK(rep["items"][0]["sum_over_all_F"] == 21 * 512);
    CHECK(rep["items"][1]["sum_over_all_F"] == 21 * 256);
    CHECK(rep["items"][2]["sum_over_all_F"] == 21 * 128);
    CHECK(rep["items"][2]["expected"] == 2688);
    CHECK(rep["aggregate"]["strictly_decreasing_in_m"] == true);
}

TEST_CASE("reports are deterministic given config and seed") {
    Json cfg{{"experiment", "gensm"}, {"part", "iii"}, {"field", "11"}, {"n", 2},
             {"d", 3}, {"m", 2}, {"samples", 4}, {"seed", 99}};
    Json a = run_experiment(cfg);
    Json b = run_experiment(cfg);
    CHECK(strip_runtime(a).dump() == strip_runtime(b).dump());

    Json cfg2{{"experiment", "double_count"}, {"field", "2"}, {"n", 2}, {"d", 3}};
    CHECK(strip_runtime(run_experiment(cfg2)).dump() ==
          strip_runtime(run_experiment(cfg2)).dump());
}

TEST_CASE("gensm part iii counts agree with direct enumeration at small q") {
    Json cfg{{"experiment", "gensm"}, {"part", "iii"}, {"field", "5"}, {"n", 2},
             {"d", 3}, {"m", 2}, {"samples", 6}, {"seed", 7}};
    Json rep = run_experiment(cfg);
    // recompute each item's count with the public enumeration
    FieldCtx ctx = make_field(5, 1);
    PolyRing ring = make_ring(ctx, 2, 3);
    EnumCaps caps;
    for (const auto& item : rep["items"]) {
        unsigned idx = item["item"].get<unsigned>();
        Rng rng = Rng::for_item(7, idx);
        MultiPoly f = sample_poly(ring, rng.next());
        CHECK(item["count"].get<u64>() == count_Y(f, MultBound::finite(2), caps));
    }
}

TEST_CASE("gensm part i on a tiny configuration") {
    Json cfg{{"experiment", "gensm"}, {"part", "i"}, {"field", "11"}, {"n", 2},
             {"d", 4}, {"m", 4}, {"samples", 8}, {"ext_bound", 1}, {"seed", 3},
             {"max_nonempty_frac", 1.0}};
    Json rep = run_experiment(cfg);
    CHECK(rep["pass"] == true);  // threshold 1.0: structural smoke test
    CHECK(rep["items"].size() == 8);
}

TEST_CASE("gensm part ii finds witnesses for every cubic at q=5") {
    Json cfg{{"experiment", "gensm"}, {"part", "ii"}, {"field", "5"}, {"n", 2},
             {"d", 3}, {"m", 3}, {"samples", 12}, {"ext_bound", 4}, {"seed", 21}};
    Json rep = run_experiment(cfg);
    CHECK(rep["pass"] == true);
    CHECK(rep["aggregate"]["witness_fraction"].get<double>() == 1.0);
    for (const auto& item : rep["items"]) CHECK(item["witness_degree"].get<unsigned>() <= 3);
}

TEST_CASE("codim experiment: delta(3,2)") {
    Json cfg{{"experiment", "codim"}, {"target", "delta"}, {"l", 3}, {"r", 2},
             {"q_list", Json::array({2, 3})}};
    Json rep = run_experiment(cfg);
    CHECK(rep["aggregate"]["expected_codim_delta"] == 2);
    CHECK(rep["aggregate"]["fitted_codim_delta"] == 2);
    CHECK(rep["pass"] == true);
}

TEST_CASE("codim experiment: W_{d,1} pairs sweep") {
    Json cfg{{"experiment", "codim"}, {"target", "W_pairs"}, {"n", 2}, {"d", 3},
             {"m", 1}, {"q_list", Json::array({2, 3})}, {"max_polys", 70000}};
    Json rep = run_experiment(cfg);
    CHECK(rep["aggregate"]["expected_codim"] == 2);  // codim n
    CHECK(rep["aggregate"]["fitted_codim"] == 2);
    CHECK(rep["pass"] == true);
}

TEST_CASE("codim experiment: characteristic contrast in the coefficient sweep") {
    Json even{{"experiment", "codim"}, {"target", "W_coeff"}, {"n", 3}, {"m", 4},
              {"locus", "W0"}, {"q_list", Json::array({2, 4})}};
    Json odd{{"experiment", "codim"}, {"target", "W_coeff"}, {"n", 3}, {"m", 4},
             {"locus", "W0"}, {"q_list", Json::array({3, 9})}, {"coeff_samples", 120000},
             {"seed", 5}};
    Json re = run_experiment(even);
    Json ro = run_experiment(odd);
    CHECK(re["aggregate"]["expected_codim"] == 1);
    CHECK(ro["aggregate"]["expected_codim"] == 2);
    CHECK(re["pass"] == true);
    CHECK(ro["pass"] == true);
}

TEST_CASE("cubic experiment: planted singular cubics") {
    for (unsigned n : {2u, 3u}) {
        Json cfg{{"experiment", "cubic"}, {"part", "planted"}, {"field", "11"},
                 {"n", n}, {"samples", 6}, {"seed", 31}};
        Json rep = run_experiment(cfg);
        CHECK(rep["pass"] == true);
    }
}

TEST_CASE("cubic experiment: smooth direction smoke test") {
    Json cfg{{"experiment", "cubic"}, {"part", "smooth"}, {"field", "11"}, {"n", 2},
             {"samples", 3}, {"certify_bound", 2}, {"w_bound", 1}, {"seed", 8}};
    Json rep = run_experiment(cfg);
    CHECK(rep["items"].size() == 3);
    CHECK(rep["pass"] == true);
}

TEST_CASE("fano experiment: quadric surface bundle identity") {
    Json cfg{{"experiment", "fano"}, {"part", "iii"}, {"field", "3"}, {"n", 3},
             {"d", 2}, {"samples", 4}, {"seed", 17}};
    Json rep = run_experiment(cfg);
    CHECK(rep["aggregate"]["bundle_identity_all"] == true);
    for (const auto& item : rep["items"])
        CHECK(item["y_inf_count"].get<u64>() == 4 * item["z_count"].get<u64>());
}

TEST_CASE("fano experiment: smooth plane curves of degree >= 2 contain no lines") {
    // a line component of a cubic forces singular points of degree <= 2, so
    // the smooth filter makes emptiness exact
    Json cfg{{"experiment", "fano"}, {"part", "i"}, {"field", "5"}, {"n", 2},
             {"d", 3}, {"samples", 15}, {"ext_bound", 2}, {"seed", 41},
             {"smooth_filter_bound", 2}};
    Json rep = run_experiment(cfg);
    CHECK(rep["aggregate"]["empty_fraction"].get<double>() == 1.0);
    CHECK(rep["pass"] == true);
}

TEST_CASE("predict vs count") {
    Json fermat{{"experiment", "predict_vs_count"}, {"mode", "exact_fermat"},
                {"field", "7"}, {"n", 2}, {"d", 3}, {"m", 3}};
    Json rep = run_experiment(fermat);
    CHECK(rep["pass"] == true);
    CHECK(rep["aggregate"]["fermat_rational_count"] == 9);

    Json hess{{"experiment", "predict_vs_count"}, {"mode", "hessian_oracle"},
              {"field", "101"}, {"d", 3}};
    Json hrep = run_experiment(hess);
    CHECK(hrep["pass"] == true);
    CHECK(hrep["aggregate"]["hessian_degree"] == 3);

    Json closed{{"experiment", "predict_vs_count"}, {"mode", "closed_points"},
                {"field", "7"}, {"n", 2}, {"d", 3}, {"m", 3}, {"samples", 3},
                {"ext_bound", 2}, {"seed", 12}};
    Json crep = run_experiment(closed);
    CHECK(crep["pass"] == true);
}

TEST_CASE("unknown experiment is rejected") {
    CHECK_THROWS_AS(run_experiment(Json{{"experiment", "nope"}}), std::invalid_argument);
}
