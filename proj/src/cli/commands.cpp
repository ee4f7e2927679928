#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>

#include "lorentz_lab/extended.hpp"
#include "lorentz_lab/lorentz.hpp"
#include "lorentz_lab/parallel.hpp"
#include "lorentz_lab/rearrangement.hpp"

namespace lorentz_lab::cli {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

// JSON cannot hold inf; non-finite values are written as strings.
json jnum(double x) {
    if (std::isfinite(x)) return x;
    return fmt(x);
}

json jvec(std::span<const double> xs) {
    json a = json::array();
    for (double x : xs) a.push_back(jnum(x));
    return a;
}

json to_json(const Provenance& p, std::uint64_t seed) {
    return {{"t_min", p.t_min},          {"t_max", p.t_max},          {"N", p.N},
            {"cap", jnum(p.cap)},        {"truncated", p.truncated},  {"B_at_t_max", jnum(p.B_at_t_max)},
            {"B_at_one", jnum(p.B_at_one)}, {"seed", seed}};
}

json to_json(const ConstantReport& r, std::uint64_t seed) {
    json parts = json::array();
    for (const auto& p : r.parts) parts.push_back({{"name", p.name}, {"value", jnum(p.value)}, {"finite", p.finite}});
    return {{"regime", to_string(r.regime)}, {"parts", parts},          {"total", jnum(r.total)},
            {"finite", r.finite},            {"warnings", r.warnings}, {"provenance", to_json(r.provenance, seed)}};
}

json to_json(const OracleResult& o) {
    json log = json::array();
    for (const auto& [name, value] : o.strategy_log) log.push_back({{"strategy", name}, {"ratio", jnum(value)}});
    return {{"best_ratio", jnum(o.best_ratio)},
            {"strategy_log", log},
            {"seed", o.seed},
            {"provenance", to_json(o.provenance, o.seed)},
            {"argmax", jvec(o.argmax.values())}};
}

json to_json(const EquivalenceReport& e) {
    std::vector<std::size_t> N(e.N.begin(), e.N.end());
    return {{"verdict", to_string(e.verdict)}, {"regime", e.regime},
            {"N", N},                          {"t_max", jvec(e.t_max)},
            {"totals", jvec(e.totals)},        {"oracle_ratios", jvec(e.oracle_ratios)},
            {"rho", jvec(e.rho)},              {"drift", jnum(e.drift)},
            {"finiteness_agree", e.finiteness_agree}, {"note", e.note}};
}

std::ofstream open_out(const Settings& s, const std::string& name) {
    std::filesystem::create_directories(s.out);
    std::ofstream f(s.out / name, std::ios::binary);
    if (!f) throw config_error("cannot write " + (s.out / name).string());
    return f;
}

void write_json(const Settings& s, const std::string& name, const json& j) {
    auto f = open_out(s, name);
    f << j.dump(2) << '\n';
}

// Parallel over runs when there are several, otherwise inside the one run.
template <class Fn>
auto over_runs(const Loaded& cfg, Fn&& fn) {
    const unsigned outer = cfg.runs.size() > 1 ? cfg.settings.threads : 1u;
    const unsigned inner = cfg.runs.size() > 1 ? 1u : cfg.settings.threads;
    return parallel_map(cfg.runs.size(), outer, [&](std::size_t i) { return fn(cfg.runs[i], inner); });
}

// ---------------------------------------------------------------- reduced problem

struct TProblem {
    GridPtr grid;
    SupOpSpec spec;
    WeightSpec v;
    WeightSpec w;
    double p;
    double q;
};

TProblem t_problem(const RunConfig& run, std::size_t cells, Target target) {
    const auto g = run.grid().build(cells);
    auto spec = make_sup_op(run.weight("u", g), run.weight("b", g), HeadPolicy::allow_truncation);
    const double p = target == Target::weak_weak ? kInfExponent : run.exponent("p");
    const double q = target == Target::strong ? run.exponent("q") : kInfExponent;
    return {g, std::move(spec), run.weight("v", g), run.weight("w", g), p, q};
}

ConstantReport t_report(const RunConfig& run, const TProblem& tp, Target target, double cap) {
    switch (target) {
        case Target::strong: return constants_T(tp.spec, tp.v, tp.w, tp.p, tp.q, run.regime(), cap);
        case Target::weak: return constants_T_weak(tp.spec, tp.v, tp.w, tp.p, cap);
        case Target::weak_weak: return constant_I(tp.spec, tp.v, tp.w, cap);
    }
    throw config_error("unknown target");
}

OracleResult t_oracle(const TProblem& tp, Target target, const OracleOptions& opt) {
    if (target == Target::strong) return oracle_T_norm({tp.spec, tp.v, tp.w, tp.p, tp.q}, opt);
    return oracle_weak_norms(tp.spec, tp.v, tp.w, tp.p, target, opt);
}

ConstantReport maximal_report(const RunConfig& run, const Settings& s) {
    const auto g = run.grid().build();
    const double alpha = run.exponent("alpha");
    const MaximalProblem prob{run.phi(g),
                              alpha,
                              run.weight("b", g),
                              run.weight("v", g),
                              run.weight("w", g),
                              run.exponent("p"),
                              run.target() == Target::strong ? run.exponent("q") : run.exponent_if("q").value_or(1.0),
                              run.exponent_if("r").value_or(alpha)};
    return constants_maximal(prob, run.target(), s.cap, run.doc.value("qr_trials", 2000), s.seed);
}

// ---------------------------------------------------------------- commands

void write_constants_csv(const Loaded& cfg, const std::vector<ConstantReport>& reports, const std::string& stem) {
    const auto& s = cfg.settings;
    auto csv = open_out(s, stem + ".csv");
    csv << kConstantsHeader << '\n';
    json points = json::array();
    std::size_t row = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const auto& pv = r.provenance;
        const std::string tail =
            "," + fmt(pv.t_min) + "," + fmt(pv.t_max) + "," + std::to_string(pv.N) + "," + std::to_string(s.seed);
        const std::size_t first = row;
        for (const auto& p : r.parts) {
            csv << to_string(r.regime) << ',' << p.name << ',' << fmt(p.value) << ',' << (p.finite ? 1 : 0) << tail
                << '\n';
            ++row;
        }
        csv << to_string(r.regime) << ",total," << fmt(r.total) << ',' << (r.finite ? 1 : 0) << tail << '\n';
        ++row;
        json point = cfg.runs[i].label();
        point["rows"] = {first, row};
        point["report"] = to_json(r, s.seed);
        points.push_back(point);
    }
    write_json(s, stem + ".json", {{"cap", jnum(s.cap)}, {"seed", s.seed}, {"header", kConstantsHeader},
                                   {"points", points}});
}

int cmd_constants(const Loaded& cfg, std::ostream& log) {
    const auto reports = over_runs(cfg, [&](const RunConfig& run, unsigned) {
        const Target target = run.target();
        return t_report(run, t_problem(run, run.grid().N, target), target, cfg.settings.cap);
    });
    write_constants_csv(cfg, reports, "constants");
    log << "constants: " << reports.size() << " point(s) written\n";
    return kExitOk;
}

int cmd_maximal(const Loaded& cfg, std::ostream& log) {
    const auto reports = over_runs(cfg, [&](const RunConfig& run, unsigned) { return maximal_report(run, cfg.settings); });
    write_constants_csv(cfg, reports, "maximal");
    log << "maximal: " << reports.size() << " point(s) written\n";
    return kExitOk;
}

int cmd_oracle(const Loaded& cfg, std::ostream& log) {
    const auto results = over_runs(cfg, [&](const RunConfig& run, unsigned threads) {
        const Target target = run.target();
        const auto tp = t_problem(run, run.grid().N, target);
        return to_json(t_oracle(tp, target, run.oracle_options(cfg.settings.seed, threads)));
    });
    json out = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        json entry = cfg.runs[i].label();
        entry["oracle"] = results[i];
        out.push_back(entry);
    }
    write_json(cfg.settings, "oracle.json", {{"cap", jnum(cfg.settings.cap)}, {"results", out}});
    log << "oracle: " << results.size() << " point(s) written\n";
    return kExitOk;
}

int cmd_verify(const Loaded& cfg, std::ostream& log) {
    const auto reports = over_runs(cfg, [&](const RunConfig& run, unsigned threads) {
        const Target target = run.target();
        std::vector<EquivalenceLevel> levels;
        for (std::size_t N : run.levels()) {
            const auto tp = t_problem(run, N, target);
            levels.push_back({t_report(run, tp, target, cfg.settings.cap),
                              t_oracle(tp, target, run.oracle_options(cfg.settings.seed, threads))});
        }
        return verify_equivalence(levels, run.equivalence_options());
    });
    json out = json::array();
    std::size_t consistent = 0;
    bool inconsistent = false;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto v = reports[i].verdict;
        if (v == Verdict::consistent || v == Verdict::consistent_unbounded) ++consistent;
        if (v == Verdict::inconsistent) inconsistent = true;
        json entry = cfg.runs[i].label();
        entry["equivalence"] = to_json(reports[i]);
        out.push_back(entry);
    }
    write_json(cfg.settings, "verify.json",
               {{"cap", jnum(cfg.settings.cap)}, {"seed", cfg.settings.seed}, {"reports", out}});
    log << "consistent: " << consistent << '/' << reports.size() << '\n';
    return inconsistent ? kExitInconsistent : kExitOk;
}

// A radial profile on (0, e_1], (e_1, e_2], ... or a list of boxes.
std::optional<RadialField> radial_field(const json& f) {
    if (!f.contains("edges")) return std::nullopt;
    const int dim = f.value("dim", 1);
    auto edges = f.at("edges").get<std::vector<double>>();
    auto values = f.at("values").get<std::vector<double>>();
    if (edges.size() != values.size() + 1) throw config_error("field.edges needs one more entry than field.values");
    return RadialField(dim, MonotoneFunction(make_grid(std::move(edges)), std::move(values)));
}

StepField step_field(const json& f) {
    const int dim = f.value("dim", 1);
    std::vector<Box> boxes;
    for (const auto& b : f.at("boxes")) {
        Box box;
        const auto lo = b.at("lo").get<std::vector<double>>();
        const auto hi = b.at("hi").get<std::vector<double>>();
        if (lo.size() != static_cast<std::size_t>(dim) || hi.size() != lo.size())
            throw config_error("box corners must have dim coordinates");
        for (int d = 0; d < dim; ++d) {
            box.lo[d] = lo[d];
            box.hi[d] = hi[d];
        }
        box.value = b.at("value").get<double>();
        boxes.push_back(box);
    }
    return StepField(dim, std::move(boxes));
}

MaximalSpec maximal_spec(const RunConfig& run) {
    if (!run.doc.contains("phi")) return MaximalSpec::classical();
    const auto phi = run.descriptor("phi");
    const auto b = run.descriptor("b");
    if (!phi) throw config_error("the sandbox needs phi as a descriptor");
    return {*phi, run.exponent_if("alpha").value_or(1.0), b ? *b : PowerLog{}};
}

int cmd_sandwich(const Loaded& cfg, std::ostream& log) {
    const auto results = over_runs(cfg, [&](const RunConfig& run, unsigned threads) {
        if (!run.doc.contains("field")) throw config_error("sandwich needs a \"field\" section");
        const json& f = run.doc.at("field");
        const auto opt = run.sandbox_options(threads);
        const std::size_t cells = run.doc.contains("sandbox") ? run.doc.at("sandbox").value("cells", 80) : 80;
        const auto spec = maximal_spec(run);
        if (auto rf = radial_field(f)) {
            const auto target = sandbox_target_grid(eval_maximal(*rf, spec, opt), cells);
            return sandwich_check(*rf, spec, opt, target);
        }
        if (!spec.is_classical()) throw config_error("step fields are compared with f** for the classical operator only");
        const auto sf = step_field(f);
        const auto target = sandbox_target_grid(eval_maximal(sf, spec, opt), cells);
        return herz_stein_check(sf, opt, target);
    });
    json summary = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        auto csv = open_out(cfg.settings, "sandwich_" + std::to_string(i) + ".csv");
        csv << "t,lhs,rhs,ratio\n";
        for (std::size_t k = 0; k < r.t.size(); ++k)
            csv << fmt(r.t[k]) << ',' << fmt(r.lhs[k]) << ',' << fmt(r.rhs[k]) << ','
                << fmt(ext::div(r.lhs[k], r.rhs[k])) << '\n';
        json entry = cfg.runs[i].label();
        entry["c_low"] = jnum(r.c_low);
        entry["C_high"] = jnum(r.C_high);
        entry["spread"] = jnum(ext::div(r.C_high, r.c_low));
        entry["warnings"] = r.warnings;
        entry["csv"] = "sandwich_" + std::to_string(i) + ".csv";
        summary.push_back(entry);
        log << "sandwich " << i << ": window [" << fmt(r.c_low) << ", " << fmt(r.C_high) << "]\n";
    }
    write_json(cfg.settings, "sandwich.json", {{"seed", cfg.settings.seed}, {"results", summary}});
    return kExitOk;
}

json check_json(const CheckResult& c) { return {{"constant", jnum(c.constant)}, {"finite", c.finite}}; }

int cmd_check_conditions(const Loaded& cfg, std::ostream& log) {
    const auto& s = cfg.settings;
    const auto results = over_runs(cfg, [&](const RunConfig& run, unsigned) {
        const auto g = run.grid().build();
        json out = run.label();
        const auto r = run.exponent_if("r");
        const auto alpha = run.exponent_if("alpha");
        const bool has_b = run.doc.contains("weights") && run.doc.at("weights").contains("b");
        if (has_b) {
            const auto b = run.weight("b", g);
            out["delta2_B"] = check_json(check_delta2(cumulative(b, HeadPolicy::allow_truncation), s.cap));
            if (alpha && r) {
                const auto le = check_lower_r_estimate(*alpha, b, *r, s.cap);
                out["lower_r_estimate"] = {{"verdict", le.verdict}, {"constant", jnum(le.constant)}, {"finite", le.finite}};
            }
        }
        if (run.doc.contains("phi")) {
            const auto phi = run.phi(g);
            out["phi_quasi_increasing"] = check_json(check_quasi_monotone(phi.samples(), Monotonicity::increasing, s.cap));
            if (r) {
                const auto qr = check_Qr(phi, *r, run.doc.value("qr_trials", 2000), s.seed, s.cap);
                json j = {{"lower_bound", jnum(qr.lower_bound)}, {"finite", qr.finite}};
                j["structural_bound"] = qr.structural_bound ? jnum(*qr.structural_bound) : json(nullptr);
                out["Qr"] = j;
            }
        }
        return out;
    });
    write_json(s, "conditions.json", {{"cap", jnum(s.cap)}, {"seed", s.seed}, {"results", json(results)}});
    log << "check-conditions: " << results.size() << " point(s) written\n";
    return kExitOk;
}

using Handler = std::function<int(const Loaded&, std::ostream&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"constants", cmd_constants}, {"oracle", cmd_oracle},     {"verify", cmd_verify},
        {"sandwich", cmd_sandwich},   {"maximal", cmd_maximal}, {"check-conditions", cmd_check_conditions},
    };
    return h;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"constants", "oracle",  "verify",
                                                   "sandwich",  "maximal", "check-conditions"};
    return names;
}

int run_command(const std::string& name, const Loaded& cfg, std::ostream& log) {
    const auto it = handlers().find(name);
    if (it == handlers().end()) return kExitUsage;
    return it->second(cfg, log);
}

}  // namespace lorentz_lab::cli
