// scenario.hpp: declarative scenario runner: JSON config in, CSV/JSON time series out

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qdeph/bath.hpp"
#include "qdeph/dephasing.hpp"
#include "qdeph/entanglement.hpp"
#include "qdeph/errors.hpp"
#include "qdeph/qubit.hpp"

namespace qdeph {

enum class BathKind { Vacuum, Coherent, Cat };
enum class Spacing { Linear, Log };
enum class OutputFormat { Csv, Json };

struct TimeGrid {
    double t_max{1.0};
    std::size_t steps{1};
    Spacing spacing{Spacing::Linear};
    double t_min{0.0};  // first point of a log grid

    std::vector<double> points() const {
        std::vector<double> t(steps);
        if (steps == 1) {
            t[0] = spacing == Spacing::Linear ? 0.0 : t_min;
            return t;
        }
        const double last = static_cast<double>(steps - 1);
        for (std::size_t k = 0; k < steps; ++k) {
            const double x = static_cast<double>(k) / last;
            t[k] = spacing == Spacing::Linear ? t_max * x : t_min * std::pow(t_max / t_min, x);
        }
        t.back() = t_max;
        return t;
    }
};

struct QuantitySet {
    bool a{true};
    bool purity{false};
    bool coherence{true};
    bool negativity{false};
};

struct ScenarioConfig {
    CouplingSpectrum spectrum = CouplingSpectrum::drude(0.0, 0.0, 1.0);
    BathKind bath{BathKind::Vacuum};
    AlphaProfile alpha = AlphaProfile::zero();
    double cat_phi{0.0};
    QubitSpec qubit;
    BlochState bloch;
    std::optional<TwoQubitScenario> two_qubit;
    TimeGrid grid;
    QuantitySet quantities;
    quad::QuadratureTolerance tolerances;
    nlohmann::ordered_json echo;  // normalized config with defaults applied
};

struct ResultRow {
    double t{0.0};
    std::complex<double> a{1.0, 0.0};
    double abs_a{1.0};
    std::optional<double> purity;
    std::optional<double> coherence;
    std::optional<double> negativity;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    QuantitySet columns;
    nlohmann::ordered_json metadata;
};

namespace detail {

using Json = nlohmann::ordered_json;

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') { ++line; column = 1; } else { ++column; }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

// Typed field access with the dotted path of the field in every diagnostic.
class Fields {
public:
    Fields(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ValidationError(where() + ": expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const {
        const std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& item : node_.items())
            if (!known.count(item.key())) throw ValidationError(field(item.key()) + ": unknown field");
    }

    bool has(const char* key) const { return node_.contains(key); }

    const Json& at(const char* key) const {
        if (!node_.contains(key)) throw ValidationError(field(key) + ": missing required field");
        return node_.at(key);
    }

    double number(const char* key) const {
        const auto& v = at(key);
        if (!v.is_number()) throw ValidationError(field(key) + ": expected a number");
        return v.get<double>();
    }

    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::string text(const char* key) const {
        const auto& v = at(key);
        if (!v.is_string()) throw ValidationError(field(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::string text(const char* key, const std::string& fallback) const { return has(key) ? text(key) : fallback; }

    long long integer(const char* key) const {
        const auto& v = at(key);
        if (!v.is_number_integer()) throw ValidationError(field(key) + ": expected an integer");
        return v.get<long long>();
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string where() const { return path_.empty() ? "config" : path_; }
    const std::string& path() const { return path_; }

private:
    const Json& node_;
    std::string path_;
};

// Runs a constructor and reports library parameter errors against the config field.
template <typename F>
auto checked(const std::string& where, F&& make) {
    try {
        return make();
    } catch (const ValidationError&) {
        throw;
    } catch (const IOError&) {
        throw;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

inline std::string resolve(const std::string& file, const std::filesystem::path& base_dir) {
    const std::filesystem::path p(file);
    return (p.is_absolute() || base_dir.empty() ? p : base_dir / p).string();
}

inline TabulatedFunction read_table(const Fields& f, const std::filesystem::path& base_dir) {
    const auto columns = read_two_column_csv(resolve(f.text("path"), base_dir));
    const double decay = f.number("tail_decay");
    const double exponent = f.number("endpoint_exponent", 0.0);
    return checked(f.where(), [&] { return TabulatedFunction(columns.x, columns.y, decay, exponent); });
}

inline CouplingSpectrum parse_spectrum(const Json& node, const std::filesystem::path& base_dir, Json& echo) {
    const Fields f(node, "spectrum");
    const std::string form = f.text("form");
    if (form == "drude") {
        f.allow({"form", "lambda", "mu", "omega_c", "velocity"});
        const double lambda = f.number("lambda");
        const double mu = f.number("mu");
        const double omega_c = f.number("omega_c");
        const double velocity = f.number("velocity", 1.0);
        echo = Json{{"form", "drude"}, {"lambda", lambda}, {"mu", mu}, {"omega_c", omega_c}, {"velocity", velocity}};
        if (!(mu > -1.0)) throw ValidationError("spectrum.mu: Drude exponent requires mu > -1 (got " + std::to_string(mu) + ")");
        if (!(omega_c > 0.0)) throw ValidationError("spectrum.omega_c: cutoff requires omega_c > 0");
        if (!(lambda >= 0.0)) throw ValidationError("spectrum.lambda: strength requires lambda >= 0");
        return checked("spectrum", [&] { return CouplingSpectrum::drude(lambda, mu, omega_c, velocity); });
    }
    if (form == "tabulated") {
        f.allow({"form", "path", "tail_decay", "endpoint_exponent", "ohmicity", "velocity"});
        std::optional<OhmicityClass> declared;
        if (f.has("ohmicity")) {
            declared = parse_ohmicity(f.text("ohmicity"));
            if (!declared) throw ValidationError("spectrum.ohmicity: expected sub_ohmic, ohmic or super_ohmic");
        }
        const double velocity = f.number("velocity", 1.0);
        echo = node;
        auto table = read_table(f, base_dir);
        return checked("spectrum", [&] { return CouplingSpectrum::tabulated(std::move(table), declared, velocity); });
    }
    throw ValidationError("spectrum.form: expected \"drude\" or \"tabulated\" (got \"" + form + "\")");
}

inline AlphaProfile parse_profile(const Json& node, const std::string& path, const std::filesystem::path& base_dir,
                                  Json& echo) {
    const Fields f(node, path);
    const std::string family = f.text("family");
    if (family == "exponential") {
        f.allow({"family", "a", "w"});
        const double a = f.number("a"), w = f.number("w");
        echo = Json{{"family", family}, {"a", a}, {"w", w}};
        return checked(path, [&] { return AlphaProfile::exponential(a, w); });
    }
    if (family == "power_exponential") {
        f.allow({"family", "a", "nu", "w"});
        const double a = f.number("a"), nu = f.number("nu"), w = f.number("w");
        echo = Json{{"family", family}, {"a", a}, {"nu", nu}, {"w", w}};
        if (!(nu > -0.5)) throw ValidationError(path + ".nu: profile is square-integrable only for nu > -1/2");
        return checked(path, [&] { return AlphaProfile::power_exponential(a, nu, w); });
    }
    if (family == "gaussian") {
        f.allow({"family", "a", "center", "width"});
        const double a = f.number("a"), center = f.number("center"), width = f.number("width");
        echo = Json{{"family", family}, {"a", a}, {"center", center}, {"width", width}};
        return checked(path, [&] { return AlphaProfile::gaussian(a, center, width); });
    }
    if (family == "tabulated") {
        f.allow({"family", "path", "tail_decay", "endpoint_exponent"});
        echo = node;
        auto table = read_table(f, base_dir);
        return checked(path, [&] { return AlphaProfile::tabulated(std::move(table)); });
    }
    throw ValidationError(path + ".family: expected exponential, power_exponential, gaussian or tabulated");
}

}  // namespace detail

// Parses and validates a scenario. Relative data paths resolve against base_dir.
inline ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {}) {
    using detail::Json;
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }

    ScenarioConfig cfg;
    Json& echo = cfg.echo;
    const detail::Fields root(doc, "");
    root.allow({"spectrum", "bath_state", "qubit", "two_qubit", "grid", "quantities", "tolerances"});

    Json spectrum_echo;
    cfg.spectrum = detail::parse_spectrum(root.at("spectrum"), base_dir, spectrum_echo);
    echo["spectrum"] = spectrum_echo;

    Json bath_echo{{"kind", "vacuum"}};
    if (root.has("bath_state")) {
        const detail::Fields f(root.at("bath_state"), "bath_state");
        const std::string kind = f.text("kind");
        bath_echo = Json{{"kind", kind}};
        if (kind == "vacuum") {
            f.allow({"kind"});
        } else if (kind == "coherent" || kind == "cat") {
            if (kind == "coherent")
                f.allow({"kind", "profile"});
            else
                f.allow({"kind", "profile", "phi"});
            Json profile_echo;
            cfg.alpha = detail::parse_profile(f.at("profile"), "bath_state.profile", base_dir, profile_echo);
            bath_echo["profile"] = profile_echo;
            cfg.bath = kind == "coherent" ? BathKind::Coherent : BathKind::Cat;
            if (kind == "cat") {
                cfg.cat_phi = f.number("phi", 0.0);
                bath_echo["phi"] = cfg.cat_phi;
                const auto cat = detail::checked("bath_state.phi", [&] { return make_cat(cfg.alpha, cfg.cat_phi); });
                detail::checked("bath_state", [&] { return norm_constant(cat); });
            }
        } else {
            throw ValidationError("bath_state.kind: expected vacuum, coherent or cat (got \"" + kind + "\")");
        }
    }
    echo["bath_state"] = bath_echo;

    {
        double epsilon = 0.0, theta = std::numbers::pi / 2.0, phi = 0.0;
        if (root.has("qubit")) {
            const detail::Fields f(root.at("qubit"), "qubit");
            f.allow({"epsilon", "theta", "phi"});
            epsilon = f.number("epsilon", epsilon);
            theta = f.number("theta", theta);
            phi = f.number("phi", phi);
        }
        if (!std::isfinite(epsilon)) throw ValidationError("qubit.epsilon: must be finite");
        cfg.qubit = QubitSpec{epsilon};
        cfg.bloch = detail::checked("qubit", [&] { return make_bloch_state(theta, phi); });
        echo["qubit"] = Json{{"epsilon", epsilon}, {"theta", theta}, {"phi", phi}};
    }

    if (root.has("two_qubit")) {
        const detail::Fields f(root.at("two_qubit"), "two_qubit");
        f.allow({"bell_index", "p", "epsilon_q"});
        TwoQubitScenario s;
        s.bell_index = static_cast<int>(f.has("bell_index") ? f.integer("bell_index") : 1);
        s.p = f.number("p", 0.0);
        s.epsilon_q = f.number("epsilon_q", 0.0);
        detail::checked("two_qubit", [&] { validate(s); return 0; });
        cfg.two_qubit = s;
        echo["two_qubit"] = Json{{"bell_index", s.bell_index}, {"p", s.p}, {"epsilon_q", s.epsilon_q}};
    }

    {
        const detail::Fields f(root.at("grid"), "grid");
        f.allow({"t_max", "steps", "spacing", "t_min"});
        cfg.grid.t_max = f.number("t_max");
        if (!(cfg.grid.t_max > 0.0) || !std::isfinite(cfg.grid.t_max)) throw ValidationError("grid.t_max: must be > 0");
        const long long steps = f.integer("steps");
        if (steps < 1) throw ValidationError("grid.steps: must be >= 1");
        cfg.grid.steps = static_cast<std::size_t>(steps);
        const std::string spacing = f.text("spacing", "linear");
        if (spacing == "linear") {
            cfg.grid.spacing = Spacing::Linear;
            if (f.has("t_min")) throw ValidationError("grid.t_min: only used with log spacing");
        } else if (spacing == "log") {
            cfg.grid.spacing = Spacing::Log;
            cfg.grid.t_min = f.number("t_min", cfg.grid.t_max * 1e-3);
            if (!(cfg.grid.t_min > 0.0 && cfg.grid.t_min < cfg.grid.t_max))
                throw ValidationError("grid.t_min: log spacing needs 0 < t_min < t_max");
        } else {
            throw ValidationError("grid.spacing: expected \"linear\" or \"log\"");
        }
        echo["grid"] = Json{{"t_max", cfg.grid.t_max}, {"steps", steps}, {"spacing", spacing}};
        if (cfg.grid.spacing == Spacing::Log) echo["grid"]["t_min"] = cfg.grid.t_min;
    }

    if (root.has("quantities")) {
        const auto& q = root.at("quantities");
        if (!q.is_array()) throw ValidationError("quantities: expected an array of names");
        cfg.quantities = QuantitySet{false, false, false, false};
        for (const auto& item : q) {
            if (!item.is_string()) throw ValidationError("quantities: entries must be strings");
            const auto name = item.get<std::string>();
            if (name == "A") cfg.quantities.a = true;
            else if (name == "purity") cfg.quantities.purity = true;
            else if (name == "coherence") cfg.quantities.coherence = true;
            else if (name == "negativity") cfg.quantities.negativity = true;
            else throw ValidationError("quantities: unknown quantity \"" + name + "\"");
        }
    }
    if (cfg.quantities.negativity && !cfg.two_qubit)
        throw ValidationError("quantities: negativity requested but no two_qubit block given");
    {
        Json names = Json::array();
        if (cfg.quantities.a) names.push_back("A");
        if (cfg.quantities.purity) names.push_back("purity");
        if (cfg.quantities.coherence) names.push_back("coherence");
        if (cfg.quantities.negativity) names.push_back("negativity");
        echo["quantities"] = names;
    }

    if (root.has("tolerances")) {
        const detail::Fields f(root.at("tolerances"), "tolerances");
        f.allow({"abs_tol", "rel_tol", "max_evaluations"});
        cfg.tolerances.abs_tol = f.number("abs_tol", cfg.tolerances.abs_tol);
        cfg.tolerances.rel_tol = f.number("rel_tol", cfg.tolerances.rel_tol);
        if (f.has("max_evaluations")) {
            const long long n = f.integer("max_evaluations");
            if (n < 1) throw ValidationError("tolerances.max_evaluations: must be >= 1");
            cfg.tolerances.max_evaluations = static_cast<std::size_t>(n);
        }
        if (cfg.tolerances.abs_tol < 0.0 || cfg.tolerances.rel_tol < 0.0 ||
            !(cfg.tolerances.abs_tol > 0.0 || cfg.tolerances.rel_tol > 0.0))
            throw ValidationError("tolerances: need abs_tol > 0 or rel_tol > 0, neither negative");
    }
    echo["tolerances"] = Json{{"abs_tol", cfg.tolerances.abs_tol},
                              {"rel_tol", cfg.tolerances.rel_tol},
                              {"max_evaluations", cfg.tolerances.max_evaluations}};
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), std::filesystem::path(path).parent_path());
}

inline CatProfile scenario_cat(const ScenarioConfig& cfg) {
    if (cfg.bath == BathKind::Cat) return CatProfile{cfg.alpha, cfg.cat_phi};
    return CatProfile{AlphaProfile::zero(), 0.0};
}

inline DephasingValue scenario_dephasing(const ScenarioConfig& cfg, double t) {
    if (cfg.bath == BathKind::Coherent) return dephasing_coherent(cfg.alpha, cfg.spectrum, cfg.qubit, t, cfg.tolerances);
    return dephasing_cat(scenario_cat(cfg), cfg.spectrum, cfg.qubit, t, cfg.tolerances);
}

// Ohmicity class and long-time values, as JSON.
inline nlohmann::ordered_json scenario_limits(const ScenarioConfig& cfg) {
    nlohmann::ordered_json out;
    try {
        out["ohmicity"] = to_string(ohmicity_class(cfg.spectrum));
    } catch (const ClassificationError&) {
        out["ohmicity"] = nullptr;
    }
    if (!cfg.spectrum.is_drude()) return out;
    const auto a0_limit = long_time_a0(cfg.spectrum);
    out["long_time_a0"] = a0_limit.vanishes ? nlohmann::ordered_json("vanishes") : nlohmann::ordered_json(a0_limit.value);
    if (cfg.bath == BathKind::Cat) {
        const auto c = long_time_cat_coherence(scenario_cat(cfg), cfg.spectrum, cfg.tolerances);
        out["long_time_coherence"] = c.vanishes ? nlohmann::ordered_json("vanishes") : nlohmann::ordered_json(c.value);
    } else {
        out["long_time_coherence"] = out["long_time_a0"];
    }
    return out;
}

inline ResultRow evaluate_row(const ScenarioConfig& cfg, double t) {
    ResultRow row;
    row.t = t;
    const auto value = scenario_dephasing(cfg, t);
    row.a = value.a;
    row.abs_a = std::abs(value.a);
    if (cfg.quantities.purity) row.purity = purity(cfg.bloch, value);
    if (cfg.quantities.coherence) row.coherence = coherence(value);
    if (cfg.quantities.negativity) row.negativity = negativity_closed(cfg.two_qubit->p, value);
    return row;
}

// Evaluates every grid point; rows are independent and computed on a small thread pool.
inline ResultTable run_scenario(const ScenarioConfig& cfg, unsigned threads = std::thread::hardware_concurrency()) {
    const auto times = cfg.grid.points();
    ResultTable table;
    table.columns = cfg.quantities;
    table.rows.resize(times.size());
    std::vector<std::exception_ptr> failures(times.size());

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < times.size(); i = next++) {
            try {
                table.rows[i] = evaluate_row(cfg, times[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(times.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("at t = " + std::to_string(times[i]) + ": " + e.what());
        }
    }

    table.metadata["config"] = cfg.echo;
    const auto limits = scenario_limits(cfg);
    for (const auto& item : limits.items()) table.metadata[item.key()] = item.value();
    return table;
}

// ------------------------------- Emission -----------------------------------

inline std::string format_number(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    return buffer;
}

inline std::vector<std::string> column_names(const QuantitySet& q) {
    std::vector<std::string> names{"t", "re_a", "im_a", "abs_a"};
    if (q.purity) names.emplace_back("purity");
    if (q.coherence) names.emplace_back("coherence");
    if (q.negativity) names.emplace_back("negativity");
    return names;
}

inline std::vector<double> row_values(const ResultRow& r, const QuantitySet& q) {
    std::vector<double> v{r.t, r.a.real(), r.a.imag(), r.abs_a};
    if (q.purity) v.push_back(r.purity.value_or(NAN));
    if (q.coherence) v.push_back(r.coherence.value_or(NAN));
    if (q.negativity) v.push_back(r.negativity.value_or(NAN));
    return v;
}

inline void emit_csv(const ResultTable& table, std::ostream& out) {
    const auto names = column_names(table.columns);
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
    out << '\n';
    for (const auto& row : table.rows) {
        const auto values = row_values(row, table.columns);
        for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << format_number(values[i]);
        out << '\n';
    }
}

// Values carry the same 12 significant digits as the CSV, so text survives a parse/emit cycle.
inline void emit_json(const ResultTable& table, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["metadata"] = table.metadata;
    const auto names = column_names(table.columns);
    doc["columns"] = names;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r;
        const auto values = row_values(row, table.columns);
        for (std::size_t i = 0; i < names.size(); ++i) r[names[i]] = std::stod(format_number(values[i]));
        rows.push_back(r);
    }
    doc["rows"] = rows;
    out << doc.dump(2) << '\n';
}

inline void emit(const ResultTable& table, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::Csv)
        emit_csv(table, out);
    else
        emit_json(table, out);
    if (!out) throw IOError("failed writing results");
}

inline void emit(const ResultTable& table, OutputFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write '" + path + "'");
    emit(table, format, out);
    out.close();
    if (!out) throw IOError("failed writing '" + path + "'");
}

// Reads the JSON emitted by emit_json back into a table.
inline ResultTable parse_result_json(const std::string& text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    ResultTable table;
    table.metadata = doc.at("metadata");
    table.columns = QuantitySet{true, false, false, false};
    for (const auto& name : doc.at("columns")) {
        if (name == "purity") table.columns.purity = true;
        if (name == "coherence") table.columns.coherence = true;
        if (name == "negativity") table.columns.negativity = true;
    }
    for (const auto& r : doc.at("rows")) {
        ResultRow row;
        row.t = r.at("t").get<double>();
        row.a = {r.at("re_a").get<double>(), r.at("im_a").get<double>()};
        row.abs_a = r.at("abs_a").get<double>();
        if (r.contains("purity")) row.purity = r.at("purity").get<double>();
        if (r.contains("coherence")) row.coherence = r.at("coherence").get<double>();
        if (r.contains("negativity")) row.negativity = r.at("negativity").get<double>();
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace qdeph
