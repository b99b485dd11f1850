#pragma once

// Command-line front end. Every subcommand writes plot-ready CSV or JSON with
// fixed formatting so identical invocations produce identical bytes.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <phchain/phchain.hpp>

namespace phchain::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TRange {
    double start = 0.0;
    double end = 0.0;
};

struct RunConfig {
    std::string subcommand;
    int J = 0;
    std::vector<double> G;
    std::string t_range;
    int steps = 0;
    std::string format = "csv";
    std::string output;

    // thresholds
    double search_max = 4.0;
    std::optional<double> t_high;
    double t_low = -1.0;
    double bracket_width = kBracketWidth;

    // enumerate
    int max_k = 0;
    bool oracle = false;

    // domain4
    int grid = 11;
    int curve_samples = 101;
    std::string section = "all";
};

/// 12 significant digits, '.' separator, no negative zero.
inline std::string fmt_num(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x + 0.0);
    return buf;
}

/// Rounds to 12 significant digits for JSON emission.
inline Json json_num(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return std::stod(fmt_num(x));
}

inline Json json_int(const BigInt& v) {
    if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
        return v.convert_to<std::uint64_t>();
    }
    if (v < 0 && v >= BigInt(std::numeric_limits<std::int64_t>::min())) {
        return v.convert_to<std::int64_t>();
    }
    return v.str();
}

inline std::string rational_str(const Rational& r) { return r.str(); }

inline Json json_rational(const Rational& r) {
    if (denominator(r) == 1) {
        return json_int(numerator(r));
    }
    return r.str();
}

inline TRange parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("t range must be written start:end, got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, colon);
        const std::string b = text.substr(colon + 1);
        TRange r;
        r.start = std::stod(a, &used);
        if (used != a.size()) {
            throw ConfigError("bad range start");
        }
        r.end = std::stod(b, &used);
        if (used != b.size()) {
            throw ConfigError("bad range end");
        }
        return r;
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse t range '" + text + "'");
    }
}

inline ChainModel model_from(const RunConfig& cfg) {
    if (cfg.J < 1) {
        throw ConfigError("--J must be >= 1");
    }
    if (cfg.G.size() != static_cast<std::size_t>(cfg.J)) {
        throw ConfigError("--G needs exactly J = " + std::to_string(cfg.J) + " values, got " +
                          std::to_string(cfg.G.size()));
    }
    return ChainModel(cfg.J, cfg.G);
}

inline Json model_json(const ChainModel& m) {
    Json g = Json::array();
    for (double x : m.coefficients()) {
        g.push_back(json_num(x));
    }
    return Json{{"J", m.half_dim()}, {"G", g}};
}

inline void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
    for (const char* f : allowed) {
        if (cfg.format == f) {
            return;
        }
    }
    throw ConfigError("format '" + cfg.format + "' is not supported by " + cfg.subcommand);
}

// ---------------------------------------------------------------------------

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = model_from(cfg);
    const auto range = parse_range(cfg.t_range);
    if (cfg.steps < 2) {
        throw ConfigError("--steps must be >= 2");
    }
    require_format(cfg, {"csv", "json"});

    const auto samples = scan(model, range.start, range.end, cfg.steps);
    const int J = model.half_dim();
    int failed = 0;

    Json doc;
    Json jsamples = Json::array();
    if (cfg.format == "csv") {
        out << "t,label,re,im\n";
    }
    for (const auto& s : samples) {
        if (!s.ok) {
            ++failed;
            err << "sample t=" << fmt_num(s.t) << " failed: " << s.error << '\n';
            if (cfg.format == "json") {
                jsamples.push_back(Json{{"t", json_num(s.t)}, {"ok", false}, {"error", s.error}});
            }
            continue;
        }
        Json energies = Json::array();
        for (int label = -(2 * J - 1); label <= 2 * J - 1; label += 2) {
            const auto e = s.energy(label);
            if (cfg.format == "csv") {
                out << fmt_num(s.t) << ',' << label << ',' << fmt_num(e.real()) << ','
                    << fmt_num(e.imag()) << '\n';
            } else {
                energies.push_back(
                    Json{{"label", label}, {"re", json_num(e.real())}, {"im", json_num(e.imag())}});
            }
        }
        if (cfg.format == "json") {
            jsamples.push_back(Json{{"t", json_num(s.t)},
                                    {"ok", true},
                                    {"all_real", s.roots.allReal},
                                    {"energies", energies}});
        }
    }
    if (cfg.format == "json") {
        doc["model"] = model_json(model);
        doc["samples"] = jsamples;
        out << doc.dump(2) << '\n';
    }
    return failed > 0 ? kExitNumerical : kExitOk;
}

inline int cmd_thresholds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto model = model_from(cfg);
    require_format(cfg, {"json"});
    if (!(cfg.search_max > 0.0)) {
        throw ConfigError("--search-max must be positive");
    }

    Json roots = Json::array();
    std::optional<double> largest_root;
    for (int n = 1; n <= model.half_dim(); ++n) {
        Json item{{"n", n}};
        try {
            const auto r = xi_root(model, n, cfg.search_max, kXiScanCells, cfg.bracket_width);
            item["status"] = "ok";
            item["t"] = json_num(r.t);
            item["residual"] = json_num(r.residual);
            item["bracket"] = Json::array({json_num(r.bracket.inside), json_num(r.bracket.outside)});
            largest_root = std::max(largest_root.value_or(r.t), r.t);
        } catch (const NoRootInRange&) {
            item["status"] = "no_root_in_range";
        }
        roots.push_back(item);
    }

    // Above every switch-off point all bonds are Hermitian, hence real spectrum.
    const double t_high =
        cfg.t_high.value_or(largest_root ? *largest_root + 0.05 : cfg.search_max);
    Json qh{{"t_high", json_num(t_high)}, {"t_low", json_num(cfg.t_low)}};
    try {
        const auto r = qh_threshold(model, t_high, cfg.t_low, kQhScanCells, cfg.bracket_width);
        qh["status"] = "ok";
        qh["t"] = json_num(r.t);
        qh["bracket"] = Json::array({json_num(r.bracket.inside), json_num(r.bracket.outside)});
    } catch (const PredicateNotBracketed&) {
        qh["status"] = "not_bracketed";
    } catch (const IllConditioned& e) {
        err << "quasi-Hermiticity search: " << e.what() << '\n';
        qh["status"] = "ill_conditioned";
    }

    Json doc;
    doc["model"] = model_json(model);
    doc["xi_roots"] = roots;
    doc["qh"] = qh;
    out << doc.dump(2) << '\n';
    return kExitOk;
}

inline int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const auto model = model_from(cfg);
    const auto range = parse_range(cfg.t_range);
    const int steps = cfg.steps > 0 ? cfg.steps : kClassifySteps;
    if (steps < 2) {
        throw ConfigError("--steps must be >= 2");
    }
    require_format(cfg, {"json"});

    const auto result = classify_mergers(model, range.start, range.end, steps, cfg.bracket_width);
    Json events = Json::array();
    for (const auto& ev : result.events) {
        const auto bracket =
            Json::array({json_num(ev.bracket.inside), json_num(ev.bracket.outside)});
        if (ev.pairs.empty()) {
            events.push_back(Json{{"t", json_num(ev.t)},
                                  {"kind", to_string(ev.kind)},
                                  {"pair", nullptr},
                                  {"bracket", bracket}});
        }
        for (const auto& [a, b] : ev.pairs) {
            events.push_back(Json{{"t", json_num(ev.t)},
                                  {"kind", to_string(ev.kind)},
                                  {"pair", Json::array({a, b})},
                                  {"bracket", bracket}});
        }
    }
    Json doc;
    doc["model"] = model_json(model);
    doc["range"] = Json::array({json_num(range.start), json_num(range.end)});
    doc["steps"] = steps;
    doc["events"] = events;
    doc["pattern"] = to_string(result.pattern);
    doc["complete"] = result.pattern.complete;
    doc["degenerate"] = result.pattern.degenerate;
    out << doc.dump(2) << '\n';
    return kExitOk;
}

/// Brute force reaches dimension 2 * kMaxBruteForceHalfDim.
inline std::optional<BigInt> oracle_count(int dim) {
    if (dim == 0) {
        return BigInt(1);
    }
    if (dim / 2 > kMaxBruteForceHalfDim) {
        return std::nullopt;
    }
    return brute_force_count(dim / 2);
}

inline int cmd_enumerate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.max_k < 0) {
        throw ConfigError("--max-k must be >= 0");
    }
    require_format(cfg, {"csv", "json"});
    const auto table = enumerate_counts(cfg.max_k);
    const auto deltas = binomial_deltas(table);

    Json rows = Json::array();
    if (cfg.format == "csv") {
        out << "K,P4K,P4K2,absR,absRminusS";
        if (cfg.oracle) {
            out << ",oracle4K,oracle4K2,agreement";
        }
        out << '\n';
    }
    for (int K = 0; K <= cfg.max_k; ++K) {
        const auto k = static_cast<std::size_t>(K);
        std::optional<BigInt> o4, o42;
        bool agree = true;
        if (cfg.oracle) {
            o4 = oracle_count(4 * K);
            o42 = oracle_count(4 * K + 2);
            if (o4) agree = agree && *o4 == table.P4K[k];
            if (o42) agree = agree && *o42 == table.P4Kplus2[k];
        }
        if (cfg.format == "csv") {
            out << K << ',' << table.P4K[k].str() << ',' << table.P4Kplus2[k].str() << ','
                << rational_str(deltas.absR[k]) << ',' << rational_str(deltas.absRminusS[k]);
            if (cfg.oracle) {
                out << ',' << (o4 ? o4->str() : "") << ',' << (o42 ? o42->str() : "") << ','
                    << ((o4 || o42) ? (agree ? "true" : "false") : "");
            }
            out << '\n';
        } else {
            Json row{{"K", K},
                     {"P4K", json_int(table.P4K[k])},
                     {"P4K2", json_int(table.P4Kplus2[k])},
                     {"R", json_rational(deltas.R[k])},
                     {"RminusS", json_rational(deltas.RminusS[k])},
                     {"absR", json_rational(deltas.absR[k])},
                     {"absRminusS", json_rational(deltas.absRminusS[k])}};
            if (cfg.oracle) {
                row["oracle4K"] = o4 ? json_int(*o4) : Json(nullptr);
                row["oracle4K2"] = o42 ? json_int(*o42) : Json(nullptr);
                row["agreement"] = (o4 || o42) ? Json(agree) : Json(nullptr);
            }
            rows.push_back(row);
        }
    }
    if (cfg.format == "json") {
        out << Json{{"max_k", cfg.max_k}, {"rows", rows}}.dump(2) << '\n';
    }
    return kExitOk;
}

inline int cmd_domain4(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.grid < 2) {
        throw ConfigError("--grid must be >= 2");
    }
    if (cfg.curve_samples < 2) {
        throw ConfigError("--curve-samples must be >= 2");
    }
    if (cfg.section != "all" && cfg.section != "grid" && cfg.section != "curves") {
        throw ConfigError("--section must be all, grid or curves");
    }
    require_format(cfg, {"csv"});

    const auto unit = [](int i, int n) { return static_cast<double>(i) / (n - 1); };
    if (cfg.section != "curves") {
        out << "alpha,beta,inside\n";
        for (int i = 0; i < cfg.grid; ++i) {
            for (int j = 0; j < cfg.grid; ++j) {
                const auto p = domain4_contains(unit(i, cfg.grid), unit(j, cfg.grid));
                out << fmt_num(p.alpha) << ',' << fmt_num(p.beta) << ',' << (p.inside ? 1 : 0)
                    << '\n';
            }
        }
    }
    if (cfg.section == "all") {
        out << '\n';
    }
    if (cfg.section != "grid") {
        out << "curve,param,alpha,beta\n";
        for (int i = 0; i < cfg.curve_samples; ++i) {
            const double a = unit(i, cfg.curve_samples);
            out << "1," << fmt_num(a) << ',' << fmt_num(a) << ',' << fmt_num(domain4_beta_min(a))
                << '\n';
        }
        for (int i = 0; i < cfg.curve_samples; ++i) {
            const double b = unit(i, cfg.curve_samples);
            out << "2," << fmt_num(b) << ',' << fmt_num(domain4_alpha_min(b)) << ',' << fmt_num(b)
                << '\n';
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra, thresholds and merger patterns of pseudo-Hermitian chain models",
                 "phchain"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto add_model = [&](CLI::App* sub) {
        sub->add_option("--J", cfg.J, "half-dimension (N = 2J)")->required();
        sub->add_option("--G", cfg.G, "coefficients G_1..G_J, outermost coupling first")
            ->required()
            ->delimiter(',');
    };
    const auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "csv or json");
        sub->add_option("-o,--output", cfg.output, "output file (default: standard output)");
        sub->add_option("--bracket-width", cfg.bracket_width, "bisection bracket width");
    };

    auto* spectrum = app.add_subcommand("spectrum", "energies along a t grid (CSV: t,label,re,im)");
    add_model(spectrum);
    spectrum->add_option("--t", cfg.t_range, "range start:end, may decrease")->required();
    spectrum->add_option("--steps", cfg.steps, "number of grid points (>= 2)")->required();

    auto* thresholds = app.add_subcommand("thresholds", "xi-roots and quasi-Hermiticity loss");
    add_model(thresholds);
    thresholds->add_option("--search-max", cfg.search_max, "upper end of the xi-root search");
    thresholds->add_option("--t-high", cfg.t_high, "real-spectrum end of the loss search");
    thresholds->add_option("--t-low", cfg.t_low, "complex end of the loss search");

    auto* classify = app.add_subcommand("classify", "merger events and pattern");
    add_model(classify);
    classify->add_option("--t", cfg.t_range, "range start:end")->required();
    classify->add_option("--steps", cfg.steps, "grid points (default 4000)");

    auto* enumerate = app.add_subcommand("enumerate", "pattern-count table");
    enumerate->add_option("--max-k", cfg.max_k, "largest K")->required();
    enumerate->add_flag("--oracle", cfg.oracle, "append brute-force counts for N <= 20");

    auto* domain4 = app.add_subcommand("domain4", "four-level reality domain and its boundary");
    domain4->add_option("--grid", cfg.grid, "grid points per axis on [0,1]");
    domain4->add_option("--curve-samples", cfg.curve_samples, "samples per boundary curve");
    domain4->add_option("--section", cfg.section, "all, grid or curves");

    for (auto* sub : {spectrum, thresholds, classify, enumerate, domain4}) {
        add_output(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    auto* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    if (chosen->count("--format") == 0) {
        cfg.format = (chosen == thresholds || chosen == classify) ? "json" : "csv";
    }

    std::ostringstream buffer;
    int code = kExitOk;
    try {
        if (chosen == spectrum) {
            code = cmd_spectrum(cfg, buffer, err);
        } else if (chosen == thresholds) {
            code = cmd_thresholds(cfg, buffer, err);
        } else if (chosen == classify) {
            code = cmd_classify(cfg, buffer, err);
        } else if (chosen == enumerate) {
            code = cmd_enumerate(cfg, buffer, err);
        } else {
            code = cmd_domain4(cfg, buffer, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }

    if (cfg.output.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.output << '\n';
            return kExitConfig;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace phchain::cli
