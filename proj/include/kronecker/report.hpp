#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kronecker/numerics.hpp"

namespace kronecker {

/// How a check's tolerance is applied.
enum class TolMode { Abs, Rel, Either };

inline const char* to_string(TolMode m) {
    switch (m) {
        case TolMode::Abs: return "abs";
        case TolMode::Rel: return "rel";
        case TolMode::Either: return "abs_or_rel";
    }
    return "?";
}

struct Check {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double abs_err = 0;
    double rel_err = 0;
    double tol = 0;
    TolMode mode = TolMode::Abs;
    bool pass = false;
    std::string paper_anchor;
    std::string note;
};

/// Builds a check and decides pass/fail from the declared mode.
inline Check make_check(std::string name, double lhs, double rhs, double tol, TolMode mode, std::string anchor,
                        std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.abs_err = std::abs(lhs - rhs);
    const double den = std::max(std::abs(lhs), std::abs(rhs));
    c.rel_err = den > 0 ? c.abs_err / den : 0.0;
    c.tol = tol;
    c.mode = mode;
    const bool finite = std::isfinite(lhs) && std::isfinite(rhs);
    switch (mode) {
        case TolMode::Abs: c.pass = finite && c.abs_err <= tol; break;
        case TolMode::Rel: c.pass = finite && c.rel_err <= tol; break;
        case TolMode::Either: c.pass = finite && (c.abs_err <= tol || c.rel_err <= tol); break;
    }
    c.paper_anchor = anchor.empty() ? std::string("unanchored") : std::move(anchor);
    c.note = std::move(note);
    return c;
}

/// Check that `value` ≤ `bound` (reported as lhs = value, rhs = bound, abs_err = value).
inline Check make_bound_check(std::string name, double value, double bound, std::string anchor, std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.lhs = value;
    c.rhs = bound;
    c.abs_err = value;
    c.rel_err = bound > 0 ? value / bound : 0.0;
    c.tol = bound;
    c.mode = TolMode::Abs;
    c.pass = std::isfinite(value) && value <= bound;
    c.paper_anchor = std::move(anchor);
    c.note = std::move(note);
    return c;
}

/// Non-gating measurement carried alongside the checks.
struct Observation {
    std::string name;
    double value = 0;
    std::string note;
};

/// Run configuration echoed into every report.
struct RunConfig {
    Precision precision{};
    double tol_scale = 1.0;
    std::uint64_t seed = 0;
    int q_truncation = 64;
    int direct_cmax = 10000;
    double ball_coshR = 200.0;
    double coset_ymin = 1e-8;
    int weil_instances = 20;

    void validate() const {
        precision.validate();
        if (!(tol_scale > 0)) throw DomainError("tol_scale must be positive");
        if (q_truncation < 32 || direct_cmax < 1 || !(ball_coshR >= 1) || !(coset_ymin > 0) || weil_instances < 1)
            throw DomainError("run configuration values must be positive");
    }
};

struct VerificationReport {
    std::string suite;
    std::string timestamp;
    RunConfig config;
    std::vector<Check> checks;
    std::vector<Observation> observations;

    void add(Check c) { checks.push_back(std::move(c)); }
    void observe(std::string name, double value, std::string note = {}) {
        observations.push_back({std::move(name), value, std::move(note)});
    }
    void merge(const VerificationReport& other, const std::string& prefix = {}) {
        for (auto c : other.checks) {
            if (!prefix.empty()) c.name = prefix + c.name;
            checks.push_back(std::move(c));
        }
        for (auto o : other.observations) {
            if (!prefix.empty()) o.name = prefix + o.name;
            observations.push_back(std::move(o));
        }
    }
    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
    }
    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    /// Orders checks and observations by name (stable), as emitted.
    void sort() {
        std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
        std::stable_sort(observations.begin(), observations.end(),
                         [](const Observation& a, const Observation& b) { return a.name < b.name; });
    }
};

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["precision_digits"] = c.precision.working_digits;
    j["tail_tolerance"] = c.precision.tail_tolerance;
    j["tol_scale"] = c.tol_scale;
    j["seed"] = c.seed;
    j["q_truncation"] = c.q_truncation;
    j["direct_cmax"] = c.direct_cmax;
    j["ball_coshR"] = c.ball_coshR;
    j["coset_ymin"] = c.coset_ymin;
    j["weil_instances"] = c.weil_instances;
    return j;
}

namespace detail {
inline nlohmann::ordered_json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}
}  // namespace detail

/// JSON form (schema 1). Checks and observations are emitted sorted by name.
inline nlohmann::ordered_json to_json(VerificationReport r) {
    r.sort();
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["suite"] = r.suite;
    j["timestamp"] = r.timestamp;
    j["config"] = to_json(r.config);
    j["summary"] = {{"checks", r.checks.size()}, {"failures", r.failures()}, {"pass", r.all_pass()}};
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["lhs"] = detail::num(c.lhs);
        e["rhs"] = detail::num(c.rhs);
        e["abs_err"] = detail::num(c.abs_err);
        e["rel_err"] = detail::num(c.rel_err);
        e["tol"] = c.tol;
        e["tol_mode"] = to_string(c.mode);
        e["pass"] = c.pass;
        e["paper_anchor"] = c.paper_anchor;
        if (!c.note.empty()) e["note"] = c.note;
        arr.push_back(std::move(e));
    }
    auto& obs = j["observations"] = nlohmann::ordered_json::array();
    for (const auto& o : r.observations) {
        nlohmann::ordered_json e;
        e["name"] = o.name;
        e["value"] = detail::num(o.value);
        if (!o.note.empty()) e["note"] = o.note;
        obs.push_back(std::move(e));
    }
    return j;
}

/// CSV: one row per check.
inline void write_csv(std::ostream& os, VerificationReport r) {
    r.sort();
    os << "name,lhs,rhs,abs_err,rel_err,tol,tol_mode,pass,paper_anchor\n";
    os << std::setprecision(17);
    for (const auto& c : r.checks) {
        os << '"' << c.name << "\"," << c.lhs << ',' << c.rhs << ',' << c.abs_err << ',' << c.rel_err << ',' << c.tol
           << ',' << to_string(c.mode) << ',' << (c.pass ? "true" : "false") << ",\"" << c.paper_anchor << "\"\n";
    }
}

/// Human summary table.
inline void write_text(std::ostream& os, VerificationReport r) {
    r.sort();
    std::size_t w = 4;
    for (const auto& c : r.checks) w = std::max(w, c.name.size());
    os << "suite: " << r.suite << "\n";
    for (const auto& c : r.checks) {
        os << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(static_cast<int>(w)) << c.name << "  "
           << std::scientific << std::setprecision(3) << "err=" << (c.mode == TolMode::Rel ? c.rel_err : c.abs_err)
           << " tol=" << c.tol << std::defaultfloat << "\n";
    }
    for (const auto& o : r.observations)
        os << "OBS  " << std::left << std::setw(static_cast<int>(w)) << o.name << "  " << std::setprecision(12) << o.value
           << (o.note.empty() ? "" : "  (" + o.note + ")") << "\n";
    os << (r.all_pass() ? "all checks passed" : std::to_string(r.failures()) + " check(s) failed") << " ("
       << r.checks.size() << " total)\n";
}

}  // namespace kronecker
