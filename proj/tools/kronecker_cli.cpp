#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kronecker/catalog_json.hpp"
#include "kronecker/eisenstein.hpp"
#include "kronecker/modular_forms.hpp"
#include "kronecker/suites.hpp"
#include "kronecker/weil.hpp"

using namespace kronecker;

namespace {

/// "a+bi", "a-bi", "a", "bi", "i" (no spaces).
cplx parse_complex(const std::string& s) {
    static const std::regex full(R"(^([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)([+-][0-9.]*(?:[eE][+-]?[0-9]+)?)i$)");
    static const std::regex real_only(R"(^[+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?$)");
    static const std::regex imag_only(R"(^([+-]?[0-9.]*(?:[eE][+-]?[0-9]+)?)i$)");
    auto coef = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return std::stod(t);
    };
    std::smatch m;
    try {
        if (std::regex_match(s, m, full)) return {std::stod(m[1]), coef(m[2])};
        if (std::regex_match(s, real_only)) return {std::stod(s), 0.0};
        if (std::regex_match(s, m, imag_only)) return {0.0, coef(m[1])};
    } catch (const std::exception&) {
    }
    throw DomainError("cannot parse complex number '" + s + "' (expected a+bi)");
}

/// "a:b:step", inclusive of b up to rounding.
std::vector<double> parse_range(const std::string& s) {
    double a = 0, b = 0, h = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> a >> c1 >> b >> c2 >> h) || c1 != ':' || c2 != ':' || !is.eof())
        throw DomainError("cannot parse range '" + s + "' (expected a:b:step)");
    if (!(h > 0) || b < a) throw DomainError("range needs step > 0 and b >= a");
    const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
    if (n > 100000) throw DomainError("range has too many points");
    std::vector<double> out;
    for (long k = 0; k < n; ++k) out.push_back(a + static_cast<double>(k) * h);
    return out;
}

/// Shortest string that round-trips to v.
std::string fmt(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fmt_grid(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt(cplx z) {
    return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

struct Global {
    int precision_digits = 16;
    double tol_scale = 1.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;  // empty: text to stdout, json to --out
};

RunConfig make_config(const Global& g) {
    RunConfig c;
    c.precision.working_digits = g.precision_digits;
    c.precision.tail_tolerance = std::max(std::pow(10.0, 2 - g.precision_digits), 1e-18);
    if (g.precision_digits >= 16) c.precision.tail_tolerance = std::min(c.precision.tail_tolerance, 1e-14);
    c.tol_scale = g.tol_scale;
    c.seed = g.seed;
    return c;
}

void write_report(const VerificationReport& r, const Global& g) {
    auto emit = [&](std::ostream& os, const std::string& f) {
        if (f == "json")
            os << to_json(r).dump(2) << "\n";
        else if (f == "csv")
            write_csv(os, r);
        else
            write_text(os, r);
    };
    if (!g.out.empty()) {
        std::ofstream f(g.out);
        if (!f) throw DomainError("cannot open output file " + g.out);
        emit(f, g.format.empty() ? "json" : g.format);
        write_text(std::cout, r);
    } else {
        emit(std::cout, g.format.empty() ? "text" : g.format);
    }
}

void write_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                 const Global& g) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!g.out.empty()) {
        file.open(g.out);
        if (!file) throw DomainError("cannot open output file " + g.out);
        os = &file;
    }
    for (std::size_t k = 0; k < header.size(); ++k) *os << (k ? "," : "") << header[k];
    *os << "\n";
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) *os << (k ? "," : "") << r[k];
        *os << "\n";
    }
}

struct EvalArgs {
    std::string form, series, group = "PSL2Z", z, s, cusp = "inf", method = "continued", point;
    int cmax = 10000;
    double coshR = 200.0;
};

int cmd_eval(const EvalArgs& a, const Global& g) {
    const RunConfig cfg = make_config(g);
    cfg.validate();
    if (a.z.empty()) throw DomainError("eval needs --z");
    const cplx z = parse_complex(a.z);
    if (!(z.imag() > 0)) throw DomainError("--z must lie in the upper half-plane");
    nlohmann::ordered_json j;
    j["z"] = fmt(z);
    if (!a.form.empty() == !a.series.empty()) throw DomainError("eval needs exactly one of --form, --series");
    if (!a.form.empty()) {
        const auto f = form_handle(a.form, cfg.precision);
        const cplx v = f(z);
        j["form"] = a.form;
        j["weight"] = f.weight;
        j["value"] = {v.real(), v.imag()};
        j["tail"] = cfg.precision.effective_tol() * std::max(1.0, std::abs(v));
        j["tail_note"] = "q-series truncated when two successive doublings agree";
        if (g.format == "json")
            std::cout << j.dump(2) << "\n";
        else
            std::cout << a.form << "(" << fmt(z) << ") = " << fmt(v) << "  [tail <= " << std::setprecision(3)
                      << j["tail"].get<double>() << "]\n";
    } else if (a.series == "parabolic") {
        if (a.s.empty()) throw DomainError("eval --series needs --s");
        const auto tag = parse_group_tag(a.group);
        const UpperHalfPoint p(z);
        const Cusp cu = a.cusp == "0" ? Cusp::Zero : a.cusp == "inf" ? Cusp::Infinity
                                                                      : throw DomainError("--cusp must be inf or 0");
        j["series"] = "parabolic";
        j["group"] = tag.name();
        j["cusp"] = to_string(cu);
        j["method"] = a.method;
        if (a.method == "continued") {
            const double s = std::stod(a.s);
            j["s"] = s;
            j["value"] = parabolic_continued(tag, p, s, cu, cfg.precision);
            j["tail"] = cfg.precision.effective_tol();
            j["tail_note"] = "Fourier-Bessel terms summed until two successive terms fall below the tolerance";
        } else if (a.method == "direct") {
            const cplx s = parse_complex(a.s);
            j["s"] = fmt(s);
            DirectSumResult r;
            if (tag.kind == GroupKind::PSL2Z && cu == Cusp::Infinity)
                r = parabolic_direct_psl2z(p, s, a.cmax);
            else
                r = parabolic_direct_group(tag, cu, p, s, cfg.coset_ymin);
            j["value"] = {r.value.real(), r.value.imag()};
            j["tail"] = r.tail;
            j["terms"] = r.terms;
            j["tail_note"] = "estimated mass of the omitted cosets";
        } else {
            throw DomainError("--method must be continued or direct");
        }
        if (g.format == "json")
            std::cout << j.dump(2) << "\n";
        else
            std::cout << "E_" << j["cusp"].get<std::string>() << "(" << fmt(z) << ", s=" << a.s << ") on " << tag.name()
                      << " = " << (j["value"].is_array() ? fmt(cplx(j["value"][0].get<double>(), j["value"][1].get<double>()))
                                                   : fmt(j["value"].get<double>()))
                      << "  [tail ~ " << std::setprecision(3) << j["tail"].get<double>()
                      << "]\n";
    } else if (a.series == "elliptic") {
        if (a.s.empty() || a.point.empty()) throw DomainError("eval --series elliptic needs --s and --point");
        const auto gd = group_descriptor(a.group);
        const cplx s = parse_complex(a.s);
        const auto r = elliptic_direct(gd.elliptic(a.point), UpperHalfPoint(z), s, a.coshR);
        j["series"] = "elliptic";
        j["group"] = gd.tag.name();
        j["point"] = a.point;
        j["s"] = fmt(s);
        j["value"] = {r.value.real(), r.value.imag()};
        j["tail"] = r.tail;
        j["terms"] = r.terms;
        if (g.format == "json")
            std::cout << j.dump(2) << "\n";
        else
            std::cout << "E^ell_" << a.point << "(" << fmt(z) << ", s=" << a.s << ") on " << gd.tag.name() << " = "
                      << fmt(r.value) << "  [tail ~ " << std::setprecision(3) << r.tail << ", " << r.terms
                      << " terms]\n";
    } else {
        throw DomainError("--series must be parabolic or elliptic");
    }
    if (!g.out.empty()) {
        std::ofstream f(g.out);
        f << j.dump(2) << "\n";
    }
    return 0;
}

struct VerifyArgs {
    std::string suite;
    int instances = 20;
    std::string instances_file;
};

int cmd_verify(const VerifyArgs& a, const Global& g) {
    RunConfig cfg = make_config(g);
    cfg.weil_instances = a.instances;
    cfg.validate();
    VerificationReport rep;
    if (!a.instances_file.empty() && (a.suite == "weil" || a.suite == "all")) {
        std::ifstream f(a.instances_file);
        if (!f) throw DomainError("cannot open instance file " + a.instances_file);
        const auto inst = weil_instances_from_json(nlohmann::json::parse(f));
        if (a.suite == "weil") {
            rep = suite_weil(cfg, inst);
            apply_tol_scale(rep, cfg.tol_scale);
            rep.config = cfg;
            rep.timestamp = utc_timestamp();
        } else {
            rep = run_suite("all", cfg);
        }
    } else {
        rep = run_suite(a.suite, cfg);
    }
    write_report(rep, g);
    return rep.all_pass() ? 0 : 1;
}

struct DumpArgs {
    std::string object, form = "E4", group = "PSL2Z", z = "0+2i", s, cusp = "inf";
    int n = 10;
};

int cmd_dump(const DumpArgs& a, const Global& g) {
    const RunConfig cfg = make_config(g);
    cfg.validate();
    if (a.object == "q-coefficients") {
        if (a.n < 0 || a.n > 100000) throw DomainError("--n must lie in [0, 100000]");
        const auto f = form_handle(a.form, cfg.precision);
        if (!f.q_expansion) throw DomainError(a.form + " has no q-expansion");
        const auto e = f.q_expansion(std::max(a.n, 1));
        std::vector<std::vector<std::string>> rows;
        for (int k = 0; k <= a.n; ++k) rows.push_back({std::to_string(k), fmt(e.coefficients.at(static_cast<std::size_t>(k)))});
        write_table({"n", "a_n"}, rows, g);
    } else if (a.object == "scattering-grid") {
        const auto tag = parse_group_tag(a.group);
        const auto grid = parse_range(a.s.empty() ? "0.1:0.9:0.1" : a.s);
        std::vector<std::string> header = {"s"};
        const int n = cusp_count(tag);
        const char* lbl[2] = {"inf", "0"};
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) header.push_back(std::string("phi_") + lbl[j] + lbl[k]);
        std::vector<std::vector<std::string>> rows;
        for (double s : grid) {
            const auto M = scattering(tag, s);
            std::vector<std::string> r = {fmt_grid(s)};
            for (const auto& row : M)
                for (double v : row) r.push_back(fmt(v));
            rows.push_back(std::move(r));
        }
        write_table(header, rows, g);
    } else if (a.object == "eisenstein-grid") {
        const auto tag = parse_group_tag(a.group);
        const UpperHalfPoint p(parse_complex(a.z));
        const auto grid = parse_range(a.s.empty() ? "-0.2:0.4:0.05" : a.s);
        const Cusp cu = a.cusp == "0" ? Cusp::Zero : Cusp::Infinity;
        std::vector<std::vector<std::string>> rows;
        for (double s : grid) {
            const double sr = std::abs(s) < 1e-12 ? 0.0 : std::round(s * 1e10) / 1e10;
            rows.push_back({fmt_grid(sr), fmt(parabolic_continued(tag, p, sr, cu, cfg.precision))});
        }
        write_table({"s", "E"}, rows, g);
    } else if (a.object == "catalog") {
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!g.out.empty()) {
            file.open(g.out);
            os = &file;
        }
        *os << catalog_json().dump(2) << "\n";
    } else if (a.object == "weil-instances") {
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!g.out.empty()) {
            file.open(g.out);
            os = &file;
        }
        *os << to_json(default_weil_instances()).dump(2) << "\n";
    } else {
        throw DomainError("unknown dump object: " + a.object);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of Kronecker limit formulas for parabolic and elliptic Eisenstein series"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--precision-digits", g.precision_digits, "working digits (>= 15)")->capture_default_str();
    app.add_option("--tol-scale", g.tol_scale, "multiply every check tolerance")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized checks")->capture_default_str();
    app.add_option("--out", g.out, "write the result to this file");
    app.add_option("--format", g.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "evaluate a form or series at a point");
    eval->add_option("--form", ea.form, "catalogued form (E4, E6, Delta, eta, j, E2p_3, E4_2plus, ...)");
    eval->add_option("--series", ea.series, "parabolic or elliptic");
    eval->add_option("--group", ea.group, "PSL2Z, Gamma0(N)+, Gamma0(p)")->capture_default_str();
    eval->add_option("--z", ea.z, "point a+bi in the upper half-plane");
    eval->add_option("--s", ea.s, "series parameter (complex a+bi allowed for direct sums)");
    eval->add_option("--cusp", ea.cusp, "inf or 0 (Gamma0(p) only)")->capture_default_str();
    eval->add_option("--method", ea.method, "continued or direct")->capture_default_str();
    eval->add_option("--point", ea.point, "elliptic point name (i, rho, e1, ...)");
    eval->add_option("--cmax", ea.cmax, "box size for the PSL2Z direct sum")->capture_default_str();
    eval->add_option("--coshR", ea.coshR, "ball radius (cosh) for the elliptic sum")->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    const auto names = suite_names();
    verify->add_option("suite", va.suite, "suite name")->required()->check(CLI::IsMember(names));
    verify->add_option("--instances", va.instances, "number of random Weil instances")->capture_default_str();
    verify->add_option("--instances-file", va.instances_file, "Weil instance JSON replacing the built-in instances");

    DumpArgs da;
    auto* dump = app.add_subcommand("dump", "write plot-ready CSV");
    dump->add_option("object", da.object, "q-coefficients, scattering-grid, eisenstein-grid, catalog, weil-instances")
        ->required();
    dump->add_option("--form", da.form, "form for q-coefficients")->capture_default_str();
    dump->add_option("--n", da.n, "last coefficient index")->capture_default_str();
    dump->add_option("--group", da.group, "group tag")->capture_default_str();
    dump->add_option("--z", da.z, "point a+bi")->capture_default_str();
    dump->add_option("--s", da.s, "range a:b:step");
    dump->add_option("--cusp", da.cusp, "inf or 0")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*eval) return cmd_eval(ea, g);
        if (*verify) return cmd_verify(va, g);
        if (*dump) return cmd_dump(da, g);
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "domain error: number out of range (" << e.what() << ")\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: bad number (" << e.what() << ")\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "domain error: bad JSON (" << e.what() << ")\n";
        return 2;
    }
    return 0;
}
