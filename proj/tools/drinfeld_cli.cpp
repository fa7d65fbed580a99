// Command-line front end: verify identity suites and compute serialized objects.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drinfeld/config.hpp"
#include "drinfeld/suites.hpp"

namespace {

using namespace drinfeld;
using nlohmann::json;

enum Exit : int { kOk = 0, kViolation = 1, kUsage = 2, kPrecision = 3 };

const std::vector<std::string> kSuites{"lemma-uI", "omega-fixedpoint", "pellarin", "log-alg", "gauss", "special-values", "all"};
const std::vector<std::string> kObjects{"omega",         "pi-tilde",   "gauss-sum",    "lseries",
                                        "lseries-operator", "exp-coeffs", "ideal-table", "special-value"};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Artifact {
    json j;
    std::optional<Table> table;
    long long certified = 0;
};

std::string pinf_string(const std::vector<long long>& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s;
}

json config_json(const RunConfig& c) {
    return json{{"q", c.q}, {"p", c.p}, {"e", c.e}, {"pinf", c.pinf}, {"precision", c.precision},
                {"degree", c.degree}, {"vars", c.vars}};
}

/// Cutoffs D-4, D-2, D (nonnegative, distinct).
std::vector<int> cutoffs(int D) {
    std::vector<int> out;
    for (int k : {D - 4, D - 2, D})
        if (k >= 0 && (out.empty() || out.back() != k)) out.push_back(k);
    return out;
}

Table series_table(const TateSeries& s) {
    Table t{{"exponent", "coefficient"}, {}};
    for (const auto& [e, c] : s.terms()) t.rows.push_back({std::to_string(e), to_string(c)});
    return t;
}

Artifact series_artifact(const RunConfig& c, const std::string& object, const TateSeries& s) {
    Artifact a;
    a.j = {{"object", object}, {"config", config_json(c)}, {"series", to_json(s)}};
    a.table = series_table(s);
    a.certified = s.prec();
    a.j["certified_precision"] = a.certified;
    return a;
}

std::string sigma_id(const GaloisElem& s) { return "frob^" + std::to_string(s.j) + "; w -> " + h_string(s.W); }

json recon_json(const ReconResult& r) {
    const char* st = r.status == ReconResult::Status::Found      ? "found"
                     : r.status == ReconResult::Status::NotFound ? "not-found"
                                                                  : "underdetermined";
    return json{{"status", st}, {"expr", r.expr}, {"certified", r.certified},
                {"residual_valuation", r.residual_valuation}, {"d_num", r.d_num}, {"d_den", r.d_den}};
}

Artifact compute(const RunConfig& c, const std::string& object) {
    const int d = c.d_inf();
    const long long N = c.precision;
    if (object == "omega") {
        if (d == 1) return series_artifact(c, object, omega_carlitz(theta_series_context(c.q, {"t"}), N));
        auto G = make_genus0_context(c.q, c.pinf);
        return series_artifact(c, object, omega_general(G, place_series(G, N + 4 * G.N + 16), N));
    }
    if (object == "pi-tilde") {
        auto G = make_genus0_context(c.q, c.pinf);
        PiTilde pt = pi_tilde_general(G, place_series(G, N + 8 * G.N + 16), N);
        Artifact a = series_artifact(c, object, pt.pi);
        SgnLead l = sgn_lead(pt.pi);
        a.j["valuation_pi_units"] = std::to_string(l.num) + (l.den == 1 ? "" : "/" + std::to_string(l.den));
        a.j["theta_power"] = pt.theta_power;
        return a;
    }
    if (object == "gauss-sum") {
        auto cc = make_carlitz_context(c.q, c.pinf);
        Artifact a = series_artifact(c, object, gauss_sum(place_series_context(cc), cc, N, cc.d - 1));
        a.j["sign_twist"] = cc.d - 1;
        return a;
    }
    if (object == "lseries") {
        if (d != 1) throw std::invalid_argument("lseries: the Pellarin sum needs deg P_inf = 1 (use lseries-operator)");
        LSeries L = pellarin_L(theta_series_context(c.q, tvar_names(c.vars)), c.vars, c.degree);
        Artifact a = series_artifact(c, object, L.value.truncated(std::min(N, L.certified)));
        a.j["shell_valuation"] = L.shell_valuation;
        return a;
    }
    if (object == "lseries-operator") {
        auto G = make_genus0_context(c.q, c.pinf);
        LSeriesValue op = lseries_operator(G, c.vars, c.degree, N);
        Artifact a;
        a.certified = op.certified;
        json comps = json::object();
        Table t{{"sigma", "exponent", "coefficient"}, {}};
        for (std::size_t i = 0; i < op.group.size(); ++i) {
            const std::string id = sigma_id(op.group[i]);
            comps[id] = to_json(op.components[i]);
            for (const auto& [e, co] : op.components[i].terms()) t.rows.push_back({id, std::to_string(e), to_string(co)});
        }
        a.j = {{"object", object},
               {"config", config_json(c)},
               {"certified_precision", op.certified},
               {"components", comps},
               {"tail", {{"slack", op.tail.slack}, {"monotone", op.tail_monotone}, {"degree_min_valuation", op.degree_min_valuation}}},
               {"restriction_unit", op.gprime_unit}};
        a.table = t;
        return a;
    }
    if (object == "exp-coeffs") {
        auto G = make_genus0_context(c.q, c.pinf);
        auto e = exp_coeffs_phi(G, c.degree);
        Artifact a;
        Table t{{"i", "e_i", "valuation"}, {}};
        json arr = json::array();
        for (std::size_t i = 0; i < e.size(); ++i) {
            long long v = h_valuation(G, e[i]);
            arr.push_back({{"i", i}, {"e_i", h_string(e[i])}, {"valuation", v}});
            t.rows.push_back({std::to_string(i), h_string(e[i]), std::to_string(v)});
        }
        a.j = {{"object", object}, {"config", config_json(c)}, {"coefficients", arr}};
        a.table = t;
        return a;
    }
    if (object == "ideal-table") {
        auto G = make_genus0_context(c.q, c.pinf);
        auto tab = ideal_table(G, c.degree, sigma_P(G));
        Artifact a;
        Table t{{"degree", "class", "m", "psi", "deg_tau"}, {}};
        json arr = json::array();
        for (const auto& r : tab) {
            const int dt = ideal_skew(G, r.I).phi.degree();
            const std::string m = poly_string(r.I.m), psi = h_string(r.psi);
            t.rows.push_back({std::to_string(r.I.n), std::to_string(ideal_class(G, r.I)), m, psi, std::to_string(dt)});
            arr.push_back({{"degree", r.I.n}, {"class", ideal_class(G, r.I)}, {"m", m}, {"psi", psi}, {"deg_tau", dt}});
        }
        a.j = {{"object", object}, {"config", config_json(c)}, {"ideals", arr}};
        a.table = t;
        return a;
    }
    if (object == "special-value") {
        auto G = make_genus0_context(c.q, c.pinf);
        SpecialValueReport S = special_value_sum(G, static_cast<int>(G.N), cutoffs(c.degree), N);
        Artifact a;
        Table t{{"D", "certified", "tail_valuation", "tail_bound", "reconstruction"}, {}};
        json steps = json::array();
        for (const auto& st : S.steps) {
            json r = recon_json(st.recon);
            steps.push_back({{"D", st.D}, {"certified", st.certified}, {"tail_valuation", st.tail_valuation},
                             {"tail_bound", st.tail_bound}, {"value", to_json(st.value)}, {"reconstruction", r}});
            t.rows.push_back({std::to_string(st.D), std::to_string(st.certified), std::to_string(st.tail_valuation),
                              std::to_string(st.tail_bound), r["status"].get<std::string>()});
            a.certified = st.certified;
        }
        a.j = {{"object", object},
               {"config", config_json(c)},
               {"n", S.n},
               {"shell_valuation", S.shell_valuation},
               {"steps", steps},
               {"tails_increasing", S.tails_increasing},
               {"bound_consistent", S.bound_consistent},
               {"reconstruction_stable", S.recon_stable}};
        a.table = t;
        return a;
    }
    throw std::invalid_argument("unknown object " + object);
}

std::vector<SuiteReport> verify(const RunConfig& c, const std::string& suite) {
    std::vector<SuiteReport> out;
    auto want = [&](const std::string& s) { return suite == "all" || suite == s; };
    const long long N = c.precision;
    if (want("lemma-uI")) out.push_back(suite_lemma(c.q, c.pinf, c.degree, c.degree + 1));
    if (want("omega-fixedpoint")) out.push_back(suite_omega_fixedpoint(c.q, c.pinf, N));
    if (want("gauss")) out.push_back(suite_gauss(c.q, c.pinf, N));
    if (want("pellarin")) out.push_back(suite_pellarin(c.q, c.degree));
    if (want("log-alg")) out.push_back(suite_log_alg(c.q, c.vars, c.degree, N));
    if (want("special-values")) out.push_back(suite_special_values(c.q, c.pinf, cutoffs(c.degree), N));
    return out;
}

std::string render_table(const Table& t, char sep) {
    std::ostringstream o;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::string cell = cells[i];
            if (sep == ',' && cell.find_first_of(",\"") != std::string::npos) {
                std::string q = "\"";
                for (char ch : cell) q += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
                cell = q + "\"";
            }
            o << (i ? std::string(1, sep) : "") << cell;
        }
        o << "\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return o.str();
}

std::string render_reports(const std::vector<SuiteReport>& reps, const RunConfig& c) {
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : reps) {
            json lines = json::array();
            for (const auto& l : r.lines)
                lines.push_back({{"identity", l.identity}, {"residual_valuation", l.residual}, {"required", l.required},
                                 {"outcome", outcome_name(l.outcome)}, {"detail", l.detail}});
            arr.push_back({{"suite", r.name}, {"outcome", outcome_name(r.overall())}, {"checks", lines}});
        }
        return json{{"config", config_json(c)}, {"suites", arr}}.dump(2) + "\n";
    }
    Table t{{"suite", "outcome", "identity", "residual", "required", "detail"}, {}};
    for (const auto& r : reps)
        for (const auto& l : r.lines)
            t.rows.push_back({r.name, outcome_name(l.outcome), l.identity, std::to_string(l.residual),
                              std::to_string(l.required), l.detail});
    return render_table(t, c.format == "csv" ? ',' : '\t');
}

bool emit(const RunConfig& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return true;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) return false;
    f << text;
    return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string pinf = "0,1";
    CLI::App app{"Drinfeld modules, shtukas and twisted L-series over genus-zero function fields"};
    app.set_config("--config", "", "key = value configuration file");
    app.add_option("--q", cfg.q, "size of the constant field (prime)");
    app.add_option("--p", cfg.p, "characteristic (defaults to q)");
    app.add_option("--e", cfg.e, "extension degree of F_q over F_p (must be 1)");
    app.add_option("--pinf", pinf, "coefficients of P_inf, constant term first, e.g. \"1,1,1\"");
    app.add_option("--precision", cfg.precision, "series precision N in u-units");
    app.add_option("--degree", cfg.degree, "degree cutoff D");
    app.add_option("--vars", cfg.vars, "number of variables s");
    app.add_option("--out", cfg.out, "output path (default stdout)");
    app.add_option("--format", cfg.format, "json, csv or text");
    app.require_subcommand(1);
    auto* ver = app.add_subcommand("verify", "run an identity suite");
    ver->fallthrough();
    ver->add_option("suite", cfg.target, "suite name")->required()->check(CLI::IsMember(kSuites));
    auto* com = app.add_subcommand("compute", "compute and serialize an object");
    com->fallthrough();
    com->add_option("object", cfg.target, "object name")->required()->check(CLI::IsMember(kObjects));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kUsage;
    }

    try {
        cfg.pinf = parse_pinf(pinf);
        validate(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    std::ostream& info = cfg.out.empty() ? std::cerr : std::cout;
    try {
        if (ver->parsed()) {
            cfg.command = "verify";
            auto reps = verify(cfg, cfg.target);
            if (!emit(cfg, render_reports(reps, cfg))) {
                std::cerr << "cannot write " << cfg.out << "\n";
                return kUsage;
            }
            int code = kOk;
            for (const auto& r : reps) {
                info << r.name << ": " << outcome_name(r.overall()) << " (" << r.seconds << " s)\n";
                if (r.overall() == Outcome::Fail) code = kViolation;
                else if (r.overall() == Outcome::Short && code == kOk) code = kPrecision;
            }
            return code;
        }
        cfg.command = "compute";
        Artifact a = compute(cfg, cfg.target);
        std::string text;
        if (cfg.format == "json") {
            text = a.j.dump(2) + "\n";
        } else if (a.table) {
            text = render_table(*a.table, cfg.format == "csv" ? ',' : '\t');
        } else {
            std::cerr << "format " << cfg.format << " is not available for " << cfg.target << "\n";
            return kUsage;
        }
        if (!emit(cfg, text)) {
            std::cerr << "cannot write " << cfg.out << "\n";
            return kUsage;
        }
        info << cfg.target << ": certified precision " << a.certified << ", " << elapsed() << " s\n";
        return kOk;
    } catch (const PrecisionError& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return kPrecision;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "identity violation: " << e.what() << "\n";
        return kViolation;
    }
}
