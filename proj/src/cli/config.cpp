#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lorentz_lab/errors.hpp"

namespace lorentz_lab::cli {

namespace {

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw config_error(what + " must be a number");
    return j.get<double>();
}

const json& section(const json& doc, const std::string& name) {
    if (!doc.contains(name)) throw config_error("missing section \"" + name + "\"");
    return doc.at(name);
}

}  // namespace

// ---------------------------------------------------------------- grid

GridPtr GridConfig::build() const { return build(N); }

GridPtr GridConfig::build(std::size_t cells) const {
    if (!edges.empty()) return make_grid(edges);
    if (cells == 0) throw config_error("grid.N must be positive");
    return make_log_grid(t_min, t_max, cells);
}

GridConfig RunConfig::grid() const {
    GridConfig g;
    const json& s = section(doc, "grid");
    if (s.contains("edges")) {
        g.edges = s.at("edges").get<std::vector<double>>();
        g.N = g.edges.size() < 2 ? 0 : g.edges.size() - 1;
        return g;
    }
    g.t_min = number(s.value("t_min", json(g.t_min)), "grid.t_min");
    g.t_max = number(s.value("t_max", json(g.t_max)), "grid.t_max");
    g.N = s.value("N", g.N);
    return g;
}

std::vector<std::size_t> RunConfig::levels() const {
    if (doc.contains("levels")) {
        auto l = doc.at("levels").get<std::vector<std::size_t>>();
        if (l.empty()) throw config_error("levels must not be empty");
        return l;
    }
    const auto g = grid();
    if (!g.edges.empty()) return {g.N};
    return {g.N, 2 * g.N};
}

// ---------------------------------------------------------------- weights

PowerLog parse_powerlog(const json& j) {
    PowerLog d;
    if (j.is_number()) {
        d.scale = j.get<double>();
        return d;
    }
    if (!j.is_object()) throw config_error("a weight is a number, a descriptor object or {\"samples\": path}");
    d.exponent = j.value("power", 0.0);
    d.log0 = j.value("log0", 0.0);
    d.log_inf = j.value("log_inf", 0.0);
    d.scale = j.value("scale", 1.0);
    return d;
}

GridFunction read_samples(const std::filesystem::path& path, const GridPtr& g) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open sample file " + path.string());
    std::vector<double> lt, lv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double t = 0.0, v = 0.0;
        if (!(row >> t >> v)) continue;  // header or malformed row
        if (!(t > 0.0) || !(v > 0.0)) throw config_error("sample files need t > 0 and value > 0");
        if (!lt.empty() && std::log(t) <= lt.back()) throw config_error("sample t must increase");
        lt.push_back(std::log(t));
        lv.push_back(std::log(v));
    }
    if (lt.empty()) throw config_error("sample file " + path.string() + " has no rows");
    std::vector<double> out(g->size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double x = std::log(g->midpoint(k));
        if (x <= lt.front()) {
            out[k] = std::exp(lv.front());
        } else if (x >= lt.back()) {
            out[k] = std::exp(lv.back());
        } else {
            const auto it = std::upper_bound(lt.begin(), lt.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - lt.begin());
            const double s = (x - lt[i - 1]) / (lt[i] - lt[i - 1]);
            out[k] = std::exp(lv[i - 1] + s * (lv[i] - lv[i - 1]));
        }
    }
    return GridFunction(g, std::move(out));
}

namespace {

WeightSpec build_weight(const json& j, const GridPtr& g, const std::filesystem::path& base) {
    if (j.is_object() && j.contains("samples")) {
        std::filesystem::path p = j.at("samples").get<std::string>();
        if (p.is_relative()) p = base / p;
        return WeightSpec::from_samples(read_samples(p, g));
    }
    return WeightSpec::from_descriptor(g, parse_powerlog(j));
}

}  // namespace

std::optional<PowerLog> RunConfig::descriptor(const std::string& name) const {
    const json* j = nullptr;
    if (name == "phi") {
        if (doc.contains("phi")) j = &doc.at("phi");
    } else if (doc.contains("weights") && doc.at("weights").contains(name)) {
        j = &doc.at("weights").at(name);
    }
    if (!j) return std::nullopt;
    if (j->is_object() && j->contains("samples")) return std::nullopt;
    return parse_powerlog(*j);
}

WeightSpec RunConfig::weight(const std::string& name, const GridPtr& g) const {
    const json& w = section(doc, "weights");
    if (!w.contains(name)) throw config_error("missing weight \"" + name + "\"");
    return build_weight(w.at(name), g, base_dir);
}

WeightSpec RunConfig::phi(const GridPtr& g) const { return build_weight(section(doc, "phi"), g, base_dir); }

// ---------------------------------------------------------------- scalars

std::optional<double> RunConfig::exponent_if(const std::string& name) const {
    if (!doc.contains("exponents") || !doc.at("exponents").contains(name)) return std::nullopt;
    const json& e = doc.at("exponents").at(name);
    if (e.is_string() && (e == "inf" || e == "infinity")) return kInfExponent;
    return number(e, "exponents." + name);
}

double RunConfig::exponent(const std::string& name) const {
    auto e = exponent_if(name);
    if (!e) throw config_error("missing exponent \"" + name + "\"");
    return *e;
}

Target RunConfig::target() const {
    const std::string t = doc.value("target", std::string("strong"));
    if (t == "strong") return Target::strong;
    if (t == "weak") return Target::weak;
    if (t == "weak-weak" || t == "weak_weak") return Target::weak_weak;
    throw config_error("target must be strong, weak or weak-weak");
}

std::optional<Regime> RunConfig::regime() const {
    if (!doc.contains("regime")) return std::nullopt;
    auto r = regime_from_string(doc.at("regime").get<std::string>());
    if (!r) throw config_error("unknown regime " + doc.at("regime").dump());
    return r;
}

OracleOptions RunConfig::oracle_options(std::uint64_t seed, unsigned threads) const {
    OracleOptions o;
    o.seed = seed;
    o.threads = threads;
    o.budget = doc.value("budget", o.budget);
    if (doc.contains("oracle")) {
        const json& s = doc.at("oracle");
        o.breakpoints = s.value("breakpoints", o.breakpoints);
        o.ascent_tolerance = s.value("ascent_tolerance", o.ascent_tolerance);
        o.ascent_starts = s.value("ascent_starts", o.ascent_starts);
        o.power_profiles = s.value("power_profiles", o.power_profiles);
    }
    return o;
}

EquivalenceOptions RunConfig::equivalence_options() const {
    EquivalenceOptions o;
    if (doc.contains("equivalence")) {
        const json& s = doc.at("equivalence");
        o.rho_low = s.value("rho_low", o.rho_low);
        o.rho_high = s.value("rho_high", o.rho_high);
        o.max_drift = s.value("max_drift", o.max_drift);
        o.growth = s.value("growth", o.growth);
    }
    if (!(o.rho_low > 0.0) || !(o.rho_high >= o.rho_low)) throw config_error("equivalence window needs 0 < rho_low <= rho_high");
    if (!(o.max_drift > 0.0) || !(o.growth > 1.0)) throw config_error("equivalence needs max_drift > 0 and growth > 1");
    return o;
}

SandboxOptions RunConfig::sandbox_options(unsigned threads) const {
    SandboxOptions o;
    o.threads = threads;
    if (doc.contains("sandbox")) {
        const json& s = doc.at("sandbox");
        o.cube_budget = s.value("cube_budget", o.cube_budget);
        o.lattice_1d = s.value("lattice_1d", o.lattice_1d);
        o.lattice_2d = s.value("lattice_2d", o.lattice_2d);
        o.margin = s.value("margin", o.margin);
        o.tail_cells = s.value("tail_cells", o.tail_cells);
        o.tail_factor = s.value("tail_factor", o.tail_factor);
    }
    return o;
}

json RunConfig::label() const {
    json l;
    for (const char* key : {"label", "exponents", "weights", "phi", "target", "regime"})
        if (doc.contains(key)) l[key] = doc.at(key);
    return l;
}

// ---------------------------------------------------------------- loading

Loaded load(const std::filesystem::path& path, std::optional<std::uint64_t> seed_flag,
            std::optional<unsigned> threads_flag, const std::filesystem::path& out) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config must be a JSON object");

    Loaded L;
    L.settings.out = out;
    L.settings.seed = seed_flag ? *seed_flag : doc.value("seed", std::uint64_t{1});
    L.settings.cap = doc.value("cap", kDefaultCap);
    if (const char* env = std::getenv("LORENTZ_LAB_CAP")) {
        char* end = nullptr;
        const double c = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(c > 0.0)) throw config_error("LORENTZ_LAB_CAP must be a positive number");
        L.settings.cap = c;
    }
    if (!(L.settings.cap > 0.0)) throw config_error("cap must be positive");
    L.settings.threads = threads_flag ? *threads_flag : doc.value("threads", 1u);
    if (L.settings.threads == 0) L.settings.threads = 1;

    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    json points = doc.contains("points") ? doc.at("points") : json::array();
    doc.erase("points");
    if (!points.is_array()) throw config_error("points must be an array");
    if (points.empty()) {
        L.runs.push_back({doc, base});
    } else {
        for (const auto& p : points) {
            json d = doc;
            d.merge_patch(p);
            L.runs.push_back({std::move(d), base});
        }
    }
    return L;
}

}  // namespace lorentz_lab::cli
