#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "incidence/harness.hpp"

namespace {

using incidence::Json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const Json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

int cmd_enumerate(const std::string& field, unsigned n, const std::string& poly_path,
                  const std::string& scheme, const std::string& m_str, unsigned ext_deg,
                  const std::string& out_path, const std::string& csv_path, incidence::u64 max_list,
                  incidence::u64 max_visits) {
    using namespace incidence;
    auto t0 = std::chrono::steady_clock::now();
    MultiPoly f = parse_poly(read_file(poly_path));
    FieldCtx cli_ctx = parse_field_spec(field);
    if (!(cli_ctx == f.ring().ctx))
        throw std::runtime_error("--field disagrees with the polynomial file header");
    if (n != f.ring().n) throw std::runtime_error("--n disagrees with the polynomial file header");
    if (ext_deg > 1) {
        FieldCtx ext = make_field(cli_ctx.p(), cli_ctx.k() * ext_deg);
        FieldEmbedding emb(f.ring().ctx, ext);
        f = lift_poly(f, emb);
    }
    const FieldCtx& ctx = f.ring().ctx;
    SchemeKind kind = scheme == "X"   ? SchemeKind::X
                      : scheme == "Y" ? SchemeKind::Y
                      : scheme == "Z" ? SchemeKind::Z
                                      : throw std::runtime_error("--scheme must be X, Y or Z");
    MultBound m = MultBound::finite(1);
    if (kind == SchemeKind::Y) m = MultBound::parse(m_str);
    EnumCaps caps;
    caps.max_list = max_list;
    caps.max_visits = max_visits;
    SchemeResult res = enumerate_scheme(f, kind, m, caps);
    auto runtime = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    Json rep;
    rep["scheme"] = scheme;
    if (kind == SchemeKind::Y) rep["m"] = m.str();
    rep["field"] = ctx.spec_string();
    rep["count"] = res.count;
    Json pts = Json::array();
    if (kind == SchemeKind::X) {
        for (const auto& p : res.points) {
            std::string s;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (i) s += ',';
                s += ctx.format(p[i], '.');
            }
            pts.push_back(s);
        }
    } else {
        for (const auto& fl : res.flags) pts.push_back(format_flag(ctx, fl));
    }
    rep["points"] = pts;
    rep["truncated"] = res.truncated;
    rep["runtime_ms"] = runtime;
    write_output(rep, out_path);
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        csv << "p,v\n";
        for (const auto& fl : res.flags) {
            std::string s = format_flag(ctx, fl);
            auto semi = s.find(';');
            csv << csv_quote(s.substr(0, semi)) << ',' << csv_quote(s.substr(semi + 1)) << "\n";
        }
    }
    return 0;
}

int cmd_smooth(const std::string& poly_path, const std::string& m_str, bool all_flags,
               const std::string& flag_str, const std::string& out_path) {
    using namespace incidence;
    MultiPoly f = parse_poly(read_file(poly_path));
    const FieldCtx& ctx = f.ring().ctx;
    const unsigned n = f.ring().n;
    unsigned m = static_cast<unsigned>(std::stoul(m_str));
    EnumCaps caps;

    auto record_for = [&](const Flag& fl) {
        Json item;
        item["flag"] = format_flag(ctx, fl);
        Multiplicity mult = multiplicity(f, fl);
        item["multiplicity"] = mult.infinite ? Json("inf") : Json(mult.value);
        auto cls = classify_flag(f, fl, m);
        item["class"] = to_string(cls);
        if (cls != FlagClass::not_in_Y) {
            MatF j = jacobian_closed_form(f, fl, m);
            item["rank"] = rank_exact(ctx, j);
            auto co = adapted_coeffs(f, fl);
            item["a_m_zero"] = co.a[m].is_zero();
        }
        return item;
    };

    Json rep;
    rep["m"] = m;
    rep["field"] = ctx.spec_string();
    if (all_flags) {
        Json items = Json::array();
        enumerate_flags(ctx, n, caps, [&](const Flag& fl) {
            items.push_back(record_for(fl));
            return true;
        });
        rep["flags"] = items;
    } else {
        if (flag_str.empty()) throw std::runtime_error("need --flag or --all-flags");
        rep["flag_report"] = record_for(parse_flag(ctx, n, flag_str));
    }
    write_output(rep, out_path);
    return 0;
}

int cmd_predict(unsigned n, unsigned d, const std::string& m_str, const std::string& out_path) {
    using namespace incidence;
    unsigned m = static_cast<unsigned>(std::stoul(m_str));
    Prediction pred = predict(n, d, m);
    Json rep;
    rep["n"] = n;
    rep["d"] = d;
    rep["m"] = m;
    rep["expected_dim"] = pred.expected_dim;
    rep["count"] = pred.count ? Json(pred.count->str()) : Json(nullptr);
    Json degs = Json::array();
    for (const auto& [ab, value] : pred.degrees)
        degs.push_back(Json{{"h_power", ab.first}, {"sigma1_power", ab.second},
                            {"integral", value.str()}});
    rep["degrees"] = degs;
    rep["euler_class_terms"] = format_class_Gamma(pred.euler);
    write_output(rep, out_path);
    return 0;
}

int cmd_verify(const std::string& experiment, const std::string& config_path,
               incidence::u64 seed, bool seed_set, const std::string& out_path,
               const std::string& csv_path) {
    using namespace incidence;
    Json cfg;
    if (!config_path.empty()) cfg = Json::parse(read_file(config_path));
    cfg["experiment"] = experiment;
    if (seed_set) cfg["seed"] = seed;
    Json rep = run_experiment(cfg);
    write_output(rep, out_path);
    if (!csv_path.empty() && rep.contains("items")) {
        std::ofstream csv(csv_path);
        csv << "item_json\n";
        for (const auto& item : rep["items"]) csv << csv_quote(item.dump()) << "\n";
    }
    if (rep.value("undecided", false)) return 2;
    return rep.value("pass", false) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"incidence: point-line incidence schemes of hypersurfaces over finite fields"};
    app.require_subcommand(1);

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "enumerate X, Y_m or Z over a finite field");
    std::string field = "7", poly_path, scheme = "Y", m_str = "1", out_path, csv_path;
    unsigned n = 2, ext_deg = 1;
    incidence::u64 max_list = 10000, max_visits = 300'000'000;
    enumerate->add_option("--field", field, "field spec, e.g. 7 or 2^4");
    enumerate->add_option("--n", n, "projective dimension");
    enumerate->add_option("--poly", poly_path, "polynomial file")->required();
    enumerate->add_option("--scheme", scheme, "X, Y or Z");
    enumerate->add_option("--m", m_str, "multiplicity bound for Y (integer or inf)");
    enumerate->add_option("--ext-deg", ext_deg, "enumerate over GF(q^j)");
    enumerate->add_option("--out", out_path, "write JSON report here");
    enumerate->add_option("--csv", csv_path, "write flags as CSV");
    enumerate->add_option("--max-list", max_list, "max listed points");
    enumerate->add_option("--max-visits", max_visits, "enumeration budget");

    // smooth
    auto* smooth = app.add_subcommand("smooth", "classify flags against the Jacobian criterion");
    std::string s_poly, s_m = "3", s_flag, s_out;
    bool all_flags = false;
    smooth->add_option("--poly", s_poly, "polynomial file")->required();
    smooth->add_option("--m", s_m, "multiplicity threshold");
    smooth->add_flag("--all-flags", all_flags, "classify every rational flag");
    smooth->add_option("--flag", s_flag, "single flag 'p;v' (coords comma-separated)");
    smooth->add_option("--out", s_out, "write JSON report here");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Schubert-calculus dimension and count");
    unsigned p_n = 2, p_d = 3;
    std::string p_m = "3", p_out;
    predict_cmd->add_option("--n", p_n, "projective dimension");
    predict_cmd->add_option("--d", p_d, "degree");
    predict_cmd->add_option("--m", p_m, "multiplicity");
    predict_cmd->add_option("--out", p_out, "write JSON report here");

    // verify
    auto* verify = app.add_subcommand("verify", "run a named experiment from a JSON config");
    std::string v_experiment, v_config, v_out, v_csv;
    incidence::u64 v_seed = 0;
    verify->add_option("experiment", v_experiment,
                       "double_count | gensm | fano | codim | cubic | predict_vs_count")
        ->required();
    verify->add_option("--config", v_config, "JSON config file");
    auto* seed_opt = verify->add_option("--seed", v_seed, "override seed");
    verify->add_option("--out", v_out, "write JSON report here");
    verify->add_option("--csv", v_csv, "write per-item records as CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enumerate)
            return cmd_enumerate(field, n, poly_path, scheme, m_str, ext_deg, out_path, csv_path,
                                 max_list, max_visits);
        if (*smooth) return cmd_smooth(s_poly, s_m, all_flags, s_flag, s_out);
        if (*predict_cmd) return cmd_predict(p_n, p_d, p_m, p_out);
        if (*verify)
            return cmd_verify(v_experiment, v_config, v_seed, seed_opt->count() > 0, v_out, v_csv);
    } catch (const incidence::ResourceLimit& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
