#pragma once

#include "duality/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace duality::cli {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { VerifyAlgebra, VerifyDuality, VerifyOrthogonality, Simulate, All, ListCases };
enum class Format { Json, Csv };

inline const std::vector<std::pair<Command, const char*>>& command_names() {
    static const std::vector<std::pair<Command, const char*>> names{
        {Command::VerifyAlgebra, "verify-algebra"},         {Command::VerifyDuality, "verify-duality"},
        {Command::VerifyOrthogonality, "verify-orthogonality"}, {Command::Simulate, "simulate"},
        {Command::All, "all"},                               {Command::ListCases, "list-cases"},
    };
    return names;
}

inline const char* command_name(Command c) {
    for (const auto& [id, name] : command_names())
        if (id == c) return name;
    return "?";
}

// Parameters left unset fall back to the defaults of whichever suite runs.
struct RunConfig {
    Command command = Command::All;
    std::optional<std::string> case_name;
    std::optional<std::string> intertwining;
    bool all = false;
    bool controls = true;
    std::optional<Rational> c;
    std::optional<std::vector<Rational>> k;
    std::optional<std::vector<long>> j;
    std::optional<double> phi;
    std::optional<std::size_t> sites;
    std::optional<long> trunc;
    std::optional<int> maxdeg;
    std::optional<int> grid;
    std::optional<double> tolerance;
    std::optional<double> t;
    std::optional<double> dt;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> sigmas;
    std::optional<std::vector<long>> left_init;
    std::optional<std::vector<double>> right_init;
    Format format = Format::Json;
    bool format_given = false;
    std::optional<std::string> output;
};

// ---------- value parsing ----------

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!trim(item).empty()) out.push_back(trim(item));
    return out;
}

inline Rational parse_rational(const std::string& text) {
    try {
        return duality::parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

inline double parse_real(const std::string& text) {
    const std::string s = trim(text);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    // "p/q" is fine where a real is expected
    try {
        return parse_rational(s).get_d();
    } catch (const UsageError&) {
    }
    throw UsageError("not a real number: '" + text + "'");
}

inline long parse_integer(const std::string& text) {
    const std::string s = trim(text);
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("not an integer: '" + text + "'");
}

inline std::uint64_t parse_seed(const std::string& text) {
    const std::string s = trim(text);
    try {
        std::size_t used = 0;
        if (!s.empty() && s[0] != '-') {
            const auto v = std::stoull(s, &used);
            if (used == s.size()) return v;
        }
    } catch (const std::exception&) {
    }
    throw UsageError("seed must be a nonnegative integer: '" + text + "'");
}

template <class T, class Fn>
std::vector<T> parse_list(const std::string& text, Fn&& item) {
    std::vector<T> out;
    for (const auto& s : split_list(text)) out.push_back(item(s));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

// ---------- settings: config file values overridden by flags ----------

inline const std::vector<std::string>& value_keys() {
    static const std::vector<std::string> keys{"case",  "intertwining", "c",      "k",          "j",
                                               "phi",   "sites",        "trunc",  "maxdeg",     "grid",
                                               "tolerance", "t",        "dt",     "trials",     "seed",
                                               "sigmas", "left-init",   "right-init", "format", "output"};
    return keys;
}

inline const std::vector<std::string>& flag_keys() {
    static const std::vector<std::string> keys{"all", "no-controls"};
    return keys;
}

// JSON scalars and arrays rendered as the text a flag would carry.
inline std::string as_text(const std::string& key, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v) {
            if (item.is_array() || item.is_object()) throw UsageError("nested value for '" + key + "'");
            out += (out.empty() ? "" : ",") + as_text(key, item);
        }
        return out;
    }
    throw UsageError("unsupported value for '" + key + "'");
}

inline json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file must hold a single flat JSON object");
    return j;
}

inline bool truthy(const std::string& key, const json& v) {
    if (v.is_boolean()) return v.get<bool>();
    const auto s = as_text(key, v);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw UsageError("'" + key + "' must be true or false");
}

// Builds and validates a RunConfig from merged settings. Validation happens before any computation.
inline RunConfig build_config(const json& settings) {
    RunConfig cfg;
    std::set<std::string> known{"command"};
    for (const auto& k : value_keys()) known.insert(k);
    for (const auto& k : flag_keys()) known.insert(k);
    for (const auto& [key, v] : settings.items())
        if (!known.count(key)) throw UsageError("unknown setting '" + key + "'");

    if (!settings.contains("command")) throw UsageError("no command given");
    {
        const auto name = as_text("command", settings["command"]);
        bool found = false;
        for (const auto& [id, n] : command_names())
            if (name == n) {
                cfg.command = id;
                found = true;
            }
        if (!found) throw UsageError("unknown command '" + name + "'");
    }

    auto text = [&](const char* key) -> std::optional<std::string> {
        if (!settings.contains(key) || settings[key].is_null()) return std::nullopt;
        return as_text(key, settings[key]);
    };
    auto wrap = [](const char* key, auto&& fn) {
        try {
            return fn();
        } catch (const UsageError& e) {
            throw UsageError(std::string("--") + key + ": " + e.what());
        }
    };

    if (settings.contains("all")) cfg.all = truthy("all", settings["all"]);
    if (settings.contains("no-controls")) cfg.controls = !truthy("no-controls", settings["no-controls"]);
    if (auto s = text("case")) cfg.case_name = *s;
    if (auto s = text("intertwining")) cfg.intertwining = *s;
    if (auto s = text("c")) cfg.c = wrap("c", [&] { return parse_rational(*s); });
    if (auto s = text("k")) cfg.k = wrap("k", [&] { return parse_list<Rational>(*s, parse_rational); });
    if (auto s = text("j")) cfg.j = wrap("j", [&] { return parse_list<long>(*s, parse_integer); });
    if (auto s = text("phi")) cfg.phi = wrap("phi", [&] { return parse_real(*s); });
    if (auto s = text("sites")) cfg.sites = wrap("sites", [&] { return parse_integer(*s); });
    if (auto s = text("trunc")) cfg.trunc = wrap("trunc", [&] { return parse_integer(*s); });
    if (auto s = text("maxdeg")) cfg.maxdeg = wrap("maxdeg", [&] { return int(parse_integer(*s)); });
    if (auto s = text("grid")) cfg.grid = wrap("grid", [&] { return int(parse_integer(*s)); });
    if (auto s = text("tolerance")) cfg.tolerance = wrap("tolerance", [&] { return parse_real(*s); });
    if (auto s = text("t")) cfg.t = wrap("t", [&] { return parse_real(*s); });
    if (auto s = text("dt")) cfg.dt = wrap("dt", [&] { return parse_real(*s); });
    if (auto s = text("trials")) {
        const long n = wrap("trials", [&] { return parse_integer(*s); });
        if (n < 2) throw UsageError("--trials must be at least 2");
        cfg.trials = std::size_t(n);
    }
    if (auto s = text("seed")) cfg.seed = wrap("seed", [&] { return parse_seed(*s); });
    if (auto s = text("sigmas")) cfg.sigmas = wrap("sigmas", [&] { return parse_real(*s); });
    if (auto s = text("left-init"))
        cfg.left_init = wrap("left-init", [&] { return parse_list<long>(*s, parse_integer); });
    if (auto s = text("right-init"))
        cfg.right_init = wrap("right-init", [&] { return parse_list<double>(*s, parse_real); });
    if (auto s = text("format")) {
        if (*s == "json") cfg.format = Format::Json;
        else if (*s == "csv") cfg.format = Format::Csv;
        else throw UsageError("--format must be json or csv");
        cfg.format_given = true;
    }
    if (auto s = text("output")) cfg.output = *s;

    // ranges
    if (cfg.c && sgn(*cfg.c) <= 0) throw UsageError("--c must be positive");
    if (cfg.k)
        for (const auto& v : *cfg.k)
            if (sgn(v) <= 0) throw UsageError("--k entries must be positive");
    if (cfg.j)
        for (long v : *cfg.j)
            if (v <= 0) throw UsageError("--j entries must be positive integers");
    if (cfg.phi && !(*cfg.phi > 0 && *cfg.phi < std::numbers::pi)) throw UsageError("--phi must lie in (0, pi)");
    if (cfg.sites && (*cfg.sites < 2 || *cfg.sites > 4)) throw UsageError("--sites must be between 2 and 4");
    if (cfg.trunc && (*cfg.trunc < 2 || *cfg.trunc > 40)) throw UsageError("--trunc must be between 2 and 40");
    if (cfg.maxdeg && (*cfg.maxdeg < 2 || *cfg.maxdeg > 40)) throw UsageError("--maxdeg must be between 2 and 40");
    if (cfg.grid && (*cfg.grid < 2 || *cfg.grid > 400)) throw UsageError("--grid must be between 2 and 400");
    if (cfg.tolerance && !(*cfg.tolerance > 0)) throw UsageError("--tolerance must be positive");
    if (cfg.t && !(*cfg.t >= 0)) throw UsageError("--t must be nonnegative");
    if (cfg.dt && !(*cfg.dt > 0)) throw UsageError("--dt must be positive");
    if (cfg.sigmas && !(*cfg.sigmas > 0)) throw UsageError("--sigmas must be positive");
    if (cfg.left_init)
        for (long v : *cfg.left_init)
            if (v < 0) throw UsageError("--left-init entries must be nonnegative");
    if (cfg.right_init)
        for (double v : *cfg.right_init)
            if (!(v >= 0)) throw UsageError("--right-init entries must be nonnegative");

    // selectors
    if (cfg.case_name) {
        try {
            dual::case_by_name(*cfg.case_name);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (cfg.intertwining) {
        try {
            dual::kernel_case_by_name(*cfg.intertwining);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (cfg.command == Command::Simulate && !cfg.all) {
        if (!cfg.case_name) throw UsageError("simulate needs --case or --all");
        if (!mc::simulable(dual::case_by_name(*cfg.case_name)))
            throw UsageError("case " + *cfg.case_name + " has no simulation; it is checked at generator level");
    }
    if (cfg.command == Command::VerifyAlgebra && cfg.c && !dual::rational_sqrt(*cfg.c))
        throw UsageError("verify-algebra needs --c with a rational square root");
    return cfg;
}

// ---------- mapping onto the suites ----------

inline std::size_t site_count(const RunConfig& cfg) {
    if (cfg.sites) return *cfg.sites;
    if (cfg.k && cfg.k->size() > 1) return cfg.k->size();
    if (cfg.j && cfg.j->size() > 1) return cfg.j->size();
    return 2;
}

// A single value is repeated on every site.
template <class T>
std::vector<T> per_site(const std::vector<T>& v, std::size_t n, const char* flag) {
    if (v.size() == 1) return std::vector<T>(n, v[0]);
    if (v.size() != n) throw UsageError(std::string("--") + flag + " needs 1 or " + std::to_string(n) + " entries");
    return v;
}

inline dual::CaseParams case_params(const RunConfig& cfg) {
    dual::CaseParams p;
    p.sites = site_count(cfg);
    p.k = per_site(cfg.k ? *cfg.k : std::vector<Rational>{p.k[0]}, p.sites, "k");
    if (cfg.j) p.j = per_site(*cfg.j, p.sites, "j");
    else if (p.sites != 2) p.j.assign(p.sites, 3);
    if (cfg.c) p.c = *cfg.c;
    if (cfg.phi) p.phi = *cfg.phi;
    if (cfg.trunc) p.trunc = *cfg.trunc;
    if (cfg.grid) p.grid = *cfg.grid;
    if (cfg.tolerance) p.float_tolerance = *cfg.tolerance;
    return p;
}

inline dual::IntertwineParams intertwine_params(const RunConfig& cfg) {
    dual::IntertwineParams p;
    if (cfg.c) p.c = *cfg.c;
    if (cfg.k) p.k = cfg.k->front();
    if (cfg.phi) p.phi = *cfg.phi;
    if (cfg.trunc) p.trunc = *cfg.trunc;
    if (cfg.grid) p.grid = *cfg.grid;
    if (cfg.tolerance) p.float_tolerance = *cfg.tolerance;
    return p;
}

inline suite::OrthogonalityOptions orthogonality_options(const RunConfig& cfg) {
    suite::OrthogonalityOptions o;
    if (cfg.c) {
        if (*cfg.c >= 1) throw UsageError("verify-orthogonality needs 0 < c < 1 for the Meixner weight");
        o.c = *cfg.c;
    }
    if (cfg.k) o.k = cfg.k->front();
    if (cfg.j) o.j = cfg.j->front();
    if (cfg.phi) o.phi = *cfg.phi;
    return o;
}

inline mc::McConfig simulation_config(const RunConfig& cfg, dual::CaseId id) {
    mc::McConfig m;
    m.id = id;
    m.params = case_params(cfg);
    const std::size_t n = m.params.sites;
    if (id == dual::CaseId::SipBepLaguerre) {
        // keeps the BEP start away from the boundary at 0
        m.t = 0.3;
        m.right_init = {3.0, 0.5};
    }
    if (id == dual::CaseId::BepBessel) m.right_init = {1.0, 0.5};
    if (n != 2) {
        m.left_init.assign(n, 1);
        m.right_init.assign(n, id == dual::CaseId::BepBessel || id == dual::CaseId::SipBepLaguerre ? 1.0 : 0.0);
    }
    if (cfg.left_init) m.left_init = per_site(*cfg.left_init, n, "left-init");
    if (cfg.right_init) m.right_init = per_site(*cfg.right_init, n, "right-init");
    if (cfg.t) m.t = *cfg.t;
    if (cfg.dt) m.dt = *cfg.dt;
    if (cfg.trials) m.trials = *cfg.trials;
    if (cfg.seed) m.seed = *cfg.seed;
    if (cfg.sigmas) m.sigmas = *cfg.sigmas;
    return m;
}

struct Outcome {
    std::vector<Report> records;
    std::vector<mc::McResult> simulations;
};

inline void append(std::vector<Report>& out, const std::vector<Report>& more) {
    out.insert(out.end(), more.begin(), more.end());
}

inline void run_algebra(const RunConfig& cfg, Outcome& o) {
    const Rational sqrt_c = cfg.c ? *dual::rational_sqrt(*cfg.c) : Rational(1, 2);
    append(o.records, suite::algebra_suite(sqrt_c, cfg.phi.value_or(std::numbers::pi / 3)));
    if (!cfg.all && cfg.command == Command::VerifyAlgebra) return;
    rep::CarrierSize size;
    if (cfg.maxdeg) size.maxdeg = *cfg.maxdeg;
    if (cfg.phi) size.phi = *cfg.phi;
    append(o.records, suite::representation_suite(size));
    append(o.records, suite::generator_suite());
}

inline void run_duality(const RunConfig& cfg, Outcome& o) {
    const bool everything = cfg.all || (!cfg.case_name && !cfg.intertwining);
    if (everything || cfg.case_name) {
        std::optional<dual::CaseId> only;
        if (cfg.case_name) only = dual::case_by_name(*cfg.case_name);
        append(o.records, suite::duality_suite(case_params(cfg), only, cfg.controls));
    }
    if (everything || cfg.intertwining) {
        std::optional<dual::KernelCase> only;
        if (cfg.intertwining) only = dual::kernel_case_by_name(*cfg.intertwining);
        append(o.records, suite::intertwining_suite(intertwine_params(cfg), only, cfg.controls));
    }
}

inline void run_orthogonality(const RunConfig& cfg, Outcome& o) {
    append(o.records, suite::orthogonality_suite(orthogonality_options(cfg)));
    append(o.records, suite::cross_validation_suite());
}

inline void run_simulations(const RunConfig& cfg, Outcome& o) {
    std::vector<mc::McConfig> runs;
    if (cfg.case_name && !cfg.all) {
        runs.push_back(simulation_config(cfg, dual::case_by_name(*cfg.case_name)));
    } else {
        for (auto id : {dual::CaseId::IrwCharlier, dual::CaseId::SipMeixner, dual::CaseId::SipBepLaguerre})
            runs.push_back(simulation_config(cfg, id));
    }
    for (const auto& m : runs) {
        auto res = mc::mc_duality(m);
        o.records.push_back(res.report);
        o.simulations.push_back(std::move(res));
    }
    if (cfg.all) o.records.push_back(suite::determinism_check(runs.front()));
}

// Runs the selected suites. Suite-level argument errors surface as usage errors.
inline Outcome run(const RunConfig& cfg) {
    Outcome o;
    try {
        switch (cfg.command) {
            case Command::VerifyAlgebra: run_algebra(cfg, o); break;
            case Command::VerifyDuality: run_duality(cfg, o); break;
            case Command::VerifyOrthogonality: run_orthogonality(cfg, o); break;
            case Command::Simulate: run_simulations(cfg, o); break;
            case Command::All: {
                auto full = cfg;
                full.all = true;
                run_algebra(full, o);
                run_duality(full, o);
                run_orthogonality(full, o);
                run_simulations(full, o);
                break;
            }
            case Command::ListCases: break;
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return o;
}

inline int exit_status(const std::vector<Report>& records) { return all_pass(records) ? 0 : 1; }

// ---------- output ----------

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json record_json(const Report& r) {
    return json{{"case", r.name},
                {"mode", r.mode},
                {"max_abs_residual", number_or_null(r.max_abs_residual)},
                {"max_rel_residual", number_or_null(r.max_rel_residual)},
                {"tolerance", r.tolerance},
                {"status", r.status()},
                {"wall_time_ms", r.wall_time_ms},
                {"seed", r.seed ? json(*r.seed) : json(nullptr)}};
}

inline json estimate_json(const mc::McEstimate& e) {
    return json{{"mean", e.mean}, {"se", e.se}, {"stddev", e.stddev}, {"trials", e.trials}, {"seed", e.seed}};
}

inline json simulation_json(const mc::McResult& s) {
    json j{{"case", s.report.name},
           {"left", estimate_json(s.left)},
           {"right", estimate_json(s.right)},
           {"bias_allowance", s.bias_allowance},
           {"z", number_or_null(s.z)},
           {"heavy_tail", s.heavy_tail}};
    if (s.right_fine) j["right_half_step"] = estimate_json(*s.right_fine);
    return j;
}

inline json outcome_json(const RunConfig& cfg, const Outcome& o) {
    json records = json::array(), sims = json::array();
    for (const auto& r : o.records) records.push_back(record_json(r));
    for (const auto& s : o.simulations) sims.push_back(simulation_json(s));
    return json{{"command", command_name(cfg.command)},
                {"status", exit_status(o.records) == 0 ? "pass" : "fail"},
                {"records", records},
                {"simulations", sims}};
}

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

inline std::string outcome_csv(const Outcome& o) {
    std::ostringstream s;
    s << "case,mode,max_abs_residual,max_rel_residual,tolerance,status,wall_time_ms,seed\n";
    for (const auto& r : o.records) {
        s << r.name << ',' << r.mode << ',' << csv_number(r.max_abs_residual) << ','
          << csv_number(r.max_rel_residual) << ',' << csv_number(r.tolerance) << ',' << r.status() << ','
          << csv_number(r.wall_time_ms) << ',';
        if (r.seed) s << *r.seed;
        s << '\n';
    }
    return s.str();
}

inline const std::vector<std::pair<const char*, const char*>>& orthogonality_catalog() {
    static const std::vector<std::pair<const char*, const char*>> families{
        {"charlier", "3.1 Poisson weight"},        {"hermite", "3.2 Gaussian weight"},
        {"meixner", "4.1 negative binomial weight"}, {"krawtchouk", "4.1 binomial weight"},
        {"laguerre", "4.2 gamma weight"},           {"meixner-pollaczek", "4.4 weight exp(-pi x)|Gamma(k+ix)|^2"},
    };
    return families;
}

inline std::string case_catalog_text() {
    std::ostringstream s;
    s << "duality cases\n";
    for (const auto& c : dual::catalog())
        s << "  " << c.name << "  " << proc::name_of(c.left) << '/' << proc::name_of(c.right) << "  "
          << kernels::name_of(c.kernel) << "  " << dual::detail::mode_of(c.plan) << "  " << c.anchor << '\n';
    s << "intertwining cases\n";
    for (const auto& c : dual::intertwining_catalog()) s << "  " << c.name << "  " << c.relation << "  " << c.anchor << '\n';
    s << "orthogonality families\n";
    for (const auto& [name, anchor] : orthogonality_catalog()) s << "  " << name << "  " << anchor << '\n';
    return s.str();
}

inline json case_catalog_json() {
    json d = json::array(), i = json::array(), f = json::array();
    for (const auto& c : dual::catalog())
        d.push_back({{"name", c.name},
                     {"left", proc::name_of(c.left)},
                     {"right", proc::name_of(c.right)},
                     {"kernel", kernels::name_of(c.kernel)},
                     {"mode", dual::detail::mode_of(c.plan)},
                     {"anchor", c.anchor}});
    for (const auto& c : dual::intertwining_catalog())
        i.push_back({{"name", c.name}, {"relation", c.relation}, {"anchor", c.anchor}});
    for (const auto& [name, anchor] : orthogonality_catalog()) f.push_back({{"name", name}, {"anchor", anchor}});
    return json{{"duality", d}, {"intertwining", i}, {"orthogonality", f}};
}

// ---------- entry point ----------

inline void write_artifact(const RunConfig& cfg, const std::string& body, std::ostream& out) {
    if (!cfg.output) {
        out << body;
        return;
    }
    std::ofstream f(*cfg.output);
    if (!f) throw UsageError("cannot write " + *cfg.output);
    f << body;
}

inline void print_summary(const Outcome& o, std::ostream& err) {
    for (const auto& r : o.records) {
        err << (r.pass ? "pass  " : "FAIL  ") << r.name << "  " << r.mode << "  residual " << dual::detail::sci(r.residual())
            << (r.expectation == Expectation::Exceeds ? " > " : " <= ") << dual::detail::sci(r.tolerance) << "  "
            << std::llround(r.wall_time_ms) << " ms\n";
    }
    for (const auto& s : o.simulations) {
        err << "  " << s.report.name << ": left " << s.left.mean << " +- " << s.left.se << ", right " << s.right.mean
            << " +- " << s.right.se << ", z " << s.z << '\n';
    }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Verification of stochastic duality relations", "duality_lab"};
    app.require_subcommand(0, 1);
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string config_path;
    std::vector<CLI::App*> subs;

    const std::map<std::string, std::string> help{
        {"case", "duality case name (see list-cases)"},
        {"intertwining", "intertwining case name"},
        {"c", "parameter c as p/q"},
        {"k", "comma separated k values, p/q each"},
        {"j", "comma separated SEP capacities"},
        {"phi", "angle in (0, pi)"},
        {"sites", "number of sites"},
        {"trunc", "largest occupation number on discrete grids"},
        {"maxdeg", "largest polynomial degree for carrier checks"},
        {"grid", "points per axis on continuous grids"},
        {"tolerance", "relative tolerance for float checks"},
        {"t", "simulation time"},
        {"dt", "Euler step"},
        {"trials", "trajectories per side"},
        {"seed", "master seed"},
        {"sigmas", "acceptance band in standard errors"},
        {"left-init", "initial occupation numbers, comma separated"},
        {"right-init", "initial right state, comma separated"},
        {"format", "json or csv"},
        {"output", "report path; stdout when absent"},
    };
    const std::map<std::string, std::string> descriptions{
        {"verify-algebra", "exact algebra identities; --all adds representations and generators"},
        {"verify-duality", "duality and intertwining residuals"},
        {"verify-orthogonality", "Gram checks and kernel cross-validation"},
        {"simulate", "expectation-level duality by Monte Carlo"},
        {"all", "every suite"},
        {"list-cases", "print the case catalog"},
    };
    // without a subcommand the command comes from the config file
    auto add_settings = [&](CLI::App* a) {
        a->add_option("--config", config_path, "flat JSON object of settings; flags override it");
        for (const auto& key : value_keys()) a->add_option("--" + key, values[key], help.at(key));
        a->add_flag("--all", flags["all"], "select every case");
        a->add_flag("--no-controls", flags["no-controls"], "skip negative controls and printed variants");
    };
    add_settings(&app);
    for (const auto& [id, name] : command_names()) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        add_settings(sub);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        json settings = json::object();
        CLI::App* chosen = &app;
        for (auto* s : subs)
            if (s->parsed()) chosen = s;
        if (chosen == &app && config_path.empty()) {
            err << app.help();
            return 2;
        }
        if (!config_path.empty()) settings = load_config_file(config_path);
        if (chosen != &app) settings["command"] = chosen->get_name();
        for (const auto& key : value_keys())
            if (chosen->get_option("--" + key)->count() > 0) settings[key] = values[key];
        for (const auto& key : flag_keys())
            if (chosen->get_option("--" + key)->count() > 0) settings[key] = true;

        const RunConfig cfg = build_config(settings);
        if (cfg.command == Command::ListCases) {
            write_artifact(cfg, cfg.format_given && cfg.format == Format::Json ? case_catalog_json().dump(2) + "\n" : case_catalog_text(), out);
            return 0;
        }
        const Outcome o = run(cfg);
        const std::string body = cfg.format == Format::Csv ? outcome_csv(o) : outcome_json(cfg, o).dump(2) + "\n";
        write_artifact(cfg, body, out);
        print_summary(o, err);
        const int status = exit_status(o.records);
        if (status != 0) {
            err << "failing checks:\n";
            for (const auto& r : o.records)
                if (!r.pass) err << "  " << record_json(r).dump() << '\n';
        }
        return status;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace duality::cli
