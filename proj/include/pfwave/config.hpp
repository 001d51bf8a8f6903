#pragma once

// Run configuration: "key = value" text files with '#' comments, or a flat
// JSON object (the format of an emitted run manifest, so manifests replay
// directly). Contradictory keys are rejected at parse time.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfwave/elastic.hpp"
#include "pfwave/errors.hpp"
#include "pfwave/model.hpp"
#include "pfwave/potential.hpp"

namespace pfwave {

struct RunConfig {
    // potential: either a named preset ("quartic", "sextic_m1_2",
    // "tilted_quartic <t>") or explicit coefficients
    std::optional<std::string> potential;
    std::optional<std::vector<double>> poly;

    // elastic system (reduced on demand), or direct reduced scalars
    std::optional<int> n;
    std::optional<std::string> D; // "isotropic <shear> <bulk>" or dense entry list
    std::optional<std::vector<double>> eps0;
    std::optional<std::vector<double>> eps1;
    std::optional<double> t11;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> mu;

    std::optional<std::string> model;
    std::optional<double> L;
    std::optional<double> dx;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<double> snapshot_every;
    std::optional<std::string> bc;
    std::optional<double> delta;
    std::optional<double> half_width; // profile domain half-width
    std::optional<double> profile_dx;
    std::optional<double> gap_lo; // decay-fit window bounds
    std::optional<double> gap_hi;
    std::optional<std::string> out;
    std::optional<int> jobs;
    std::optional<long> seed;
    std::optional<std::vector<double>> mus; // comparison-matrix mu values
    // comparison-matrix grids (nonconserved / conserved cells)
    std::optional<double> ac_L, ac_dx, ac_t_end, ac_snapshot;
    std::optional<double> ch_L, ch_dx, ch_t_end, ch_snapshot;
    std::optional<double> pad_margin;

    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);

    void validate() const;
    DoubleWell make_well() const;
    std::optional<ElasticSystem> make_elastic_system() const;
    // mu directly, or alpha*t11 + beta, or reduced from the elastic system
    double resolve_mu() const;
    std::string potential_spec() const; // canonical string for manifests
};

namespace detail {

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        const double v = std::stod(item, &pos);
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size()) throw ConfigError("bad number in list: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty number list");
    return out;
}

inline std::string strip(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace detail

inline RunConfig RunConfig::parse_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    const std::string body = detail::strip(text);
    if (!body.empty() && body.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(body);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad JSON config: ") + e.what());
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_string())
                kv[it.key()] = it.value().get<std::string>();
            else if (it.value().is_boolean())
                kv[it.key()] = it.value().get<bool>() ? "true" : "false";
            else if (it.value().is_number_integer())
                kv[it.key()] = std::to_string(it.value().get<long long>());
            else if (it.value().is_number()) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", it.value().get<double>());
                kv[it.key()] = buf;
            } else if (it.value().is_array()) {
                std::string list;
                for (const auto& el : it.value()) {
                    if (!list.empty()) list += ',';
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.17g", el.get<double>());
                    list += buf;
                }
                kv[it.key()] = list;
            } else {
                throw ConfigError("unsupported JSON value for key '" + it.key() + "'");
            }
        }
    } else {
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::strip(line);
            if (line.empty()) continue;
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = detail::strip(line.substr(0, eq));
            const std::string val = detail::strip(line.substr(eq + 1));
            if (key.empty() || val.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
            if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
            kv[key] = val;
        }
    }

    RunConfig c;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto num = [&](const char* key) -> std::optional<double> {
        auto s = take(key);
        if (!s) return std::nullopt;
        try {
            size_t pos = 0;
            const double v = std::stod(*s, &pos);
            if (pos != s->size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError(std::string("key '") + key + "': expected a number, got '" + *s + "'");
        }
    };

    c.potential = take("potential");
    if (auto s = take("poly")) c.poly = detail::parse_double_list(*s);
    if (auto v = num("n")) c.n = static_cast<int>(*v);
    c.D = take("D");
    if (auto s = take("eps0")) c.eps0 = detail::parse_double_list(*s);
    if (auto s = take("eps1")) c.eps1 = detail::parse_double_list(*s);
    c.t11 = num("t11");
    c.alpha = num("alpha");
    c.beta = num("beta");
    c.mu = num("mu");
    c.model = take("model");
    c.L = num("L");
    c.dx = num("dx");
    c.dt = num("dt");
    c.t_end = num("t_end");
    c.snapshot_every = num("snapshot_every");
    c.bc = take("bc");
    c.delta = num("delta");
    c.half_width = num("half_width");
    c.profile_dx = num("profile_dx");
    c.gap_lo = num("gap_lo");
    c.gap_hi = num("gap_hi");
    c.out = take("out");
    if (auto v = num("jobs")) c.jobs = static_cast<int>(*v);
    if (auto v = num("seed")) c.seed = static_cast<long>(*v);
    if (auto s = take("mus")) c.mus = detail::parse_double_list(*s);
    c.ac_L = num("ac_L");
    c.ac_dx = num("ac_dx");
    c.ac_t_end = num("ac_t_end");
    c.ac_snapshot = num("ac_snapshot");
    c.ch_L = num("ch_L");
    c.ch_dx = num("ch_dx");
    c.ch_t_end = num("ch_t_end");
    c.ch_snapshot = num("ch_snapshot");
    c.pad_margin = num("pad_margin");

    if (!kv.empty()) throw ConfigError("unknown config key '" + kv.begin()->first + "'");
    c.validate();
    return c;
}

inline RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

inline void RunConfig::validate() const {
    if (potential && poly) throw ConfigError("give either 'potential' or 'poly', not both");
    if (mu && (alpha || beta)) throw ConfigError("'mu' contradicts direct 'alpha'/'beta'");
    if (D && (alpha || beta || mu))
        throw ConfigError("an elastic system contradicts direct 'alpha'/'beta'/'mu'");
    if ((eps0 || eps1) && !D) throw ConfigError("'eps0'/'eps1' require 'D'");
    if (D && !n) throw ConfigError("'D' requires the dimension 'n'");
    if (alpha.has_value() != beta.has_value())
        throw ConfigError("'alpha' and 'beta' must be given together");
    if (model && bc) {
        const ModelKind k = model_kind_from_string(*model);
        if (is_conserved(k) && *bc == "dirichlet")
            throw ConfigError("conserved models take no_flux boundaries");
        if (!is_conserved(k) && *bc == "no_flux")
            throw ConfigError("nonconserved models take dirichlet boundaries");
    }
    for (auto [name, v] : {std::pair<const char*, std::optional<double>>{"L", L},
                           {"dx", dx},
                           {"dt", dt},
                           {"t_end", t_end},
                           {"snapshot_every", snapshot_every},
                           {"half_width", half_width},
                           {"profile_dx", profile_dx},
                           {"ac_L", ac_L},
                           {"ac_dx", ac_dx},
                           {"ac_t_end", ac_t_end},
                           {"ac_snapshot", ac_snapshot},
                           {"ch_L", ch_L},
                           {"ch_dx", ch_dx},
                           {"ch_t_end", ch_t_end},
                           {"ch_snapshot", ch_snapshot},
                           {"pad_margin", pad_margin}})
        if (v && !(*v > 0.0)) throw ConfigError(std::string("'") + name + "' must be positive");
}

inline DoubleWell RunConfig::make_well() const {
    if (poly) return DoubleWell::from_coefficients(*poly);
    const std::string spec = potential.value_or("quartic");
    std::stringstream ss(spec);
    std::string name;
    ss >> name;
    if (name == "quartic") return wells::quartic();
    if (name == "sextic_m1_2") return wells::sextic_m1_2();
    if (name == "tilted_quartic") {
        double t;
        if (!(ss >> t)) throw ConfigError("tilted_quartic needs a tilt parameter");
        return wells::tilted_quartic(t);
    }
    if (name == "poly") {
        std::string rest;
        std::getline(ss, rest);
        return DoubleWell::from_coefficients(detail::parse_double_list(rest));
    }
    throw ConfigError("unknown potential '" + spec + "'");
}

inline std::optional<ElasticSystem> RunConfig::make_elastic_system() const {
    if (!D) return std::nullopt;
    const int dim = *n;
    if (dim < 1) throw ConfigError("'n' must be >= 1");
    ElasticSystem sys;
    std::stringstream ss(*D);
    std::string head;
    ss >> head;
    if (head == "isotropic") {
        double shear, bulk;
        if (!(ss >> shear >> bulk)) throw ConfigError("'D = isotropic <shear> <bulk>'");
        sys.D = ElasticityTensor::isotropic(dim, shear, bulk);
    } else {
        const auto entries = detail::parse_double_list(*D);
        sys.D = ElasticityTensor::from_dense(dim, entries);
    }
    sys.eps0 = eps0 ? SymMatrix::from_rows(dim, *eps0) : SymMatrix::zero(dim);
    sys.eps1 = eps1 ? SymMatrix::from_rows(dim, *eps1) : SymMatrix::zero(dim);
    return sys;
}

inline double RunConfig::resolve_mu() const {
    if (mu) return *mu;
    if (alpha && beta) return *alpha * t11.value_or(0.0) + *beta;
    if (auto sys = make_elastic_system()) {
        const ReducedCoefficients rc = reduce(*sys);
        return rc.alpha * t11.value_or(0.0) + rc.beta;
    }
    return 0.0;
}

inline std::string RunConfig::potential_spec() const {
    if (poly) {
        std::string s = "poly ";
        for (size_t i = 0; i < poly->size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", (*poly)[i]);
            if (i) s += ',';
            s += buf;
        }
        return s;
    }
    return potential.value_or("quartic");
}

} // namespace pfwave
