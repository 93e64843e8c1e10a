// Run configuration: JSON schema, strict validation (unknown keys are
// errors), defaulting, and the echo used for self-contained reports.

#pragma once

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "trigal/contrast.hpp"
#include "trigal/field.hpp"
#include "trigal/wave.hpp"

namespace trigal {

using json = nlohmann::json;

struct GmresConfig {
    double tol = 1e-5;
    int maxit = 500;
    std::optional<int> restart;
};

struct OutputConfig {
    std::string directory = "out";
    bool emit_field_grid = false;
    bool emit_coeffs = false;
    bool emit_kernel = false;
};

struct RunConfig {
    double wavenumber = 0.0;
    double theta = 0.0;
    int n = 0;
    double R = 0.0;
    std::optional<double> rho;  // inferred from the contrast when absent
    double margin = 0.0;
    bool allow_tight_box = false;
    std::optional<double> eval_height;
    ContrastSpec contrast;
    json contrast_json;  // retained verbatim for the echo
    GmresConfig gmres;
    double reference_tol = 1e-8;
    OutputConfig outputs;

    // resolved during validation
    double resolved_rho = 0.0;
    double resolved_eval_height = 0.0;
    std::vector<std::string> warnings;

    WaveParameters wave() const { return WaveParameters(wavenumber, theta); }
    Discretization disc() const {
        return Discretization{n, R, resolved_rho, margin, allow_tight_box};
    }
    Discretization disc_at(int n_override) const {
        return Discretization{n_override, R, resolved_rho, margin, allow_tight_box};
    }
};

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::set<std::string>& required, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (const auto& [key, val] : j.items())
        if (!allowed.count(key)) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    for (const auto& key : required)
        if (!j.contains(key)) throw std::invalid_argument("config: missing key '" + key + "' in " + where);
}

inline double finite_number(const json& j, const std::string& name) {
    if (!j.is_number()) throw std::invalid_argument("config: " + name + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw std::invalid_argument("config: " + name + " must be finite");
    return v;
}

inline ContrastSpec parse_contrast(const json& j) {
    require_keys(j, {"family", "q0", "a", "blocks", "radius", "center", "amplitude", "f1", "f2", "x1", "x2"},
                 {"family"}, "contrast");
    const std::string family = j.at("family").get<std::string>();
    if (family == "strip") {
        require_keys(j, {"family", "q0", "a"}, {"family", "q0", "a"}, "contrast(strip)");
        return StripContrast{finite_number(j.at("q0"), "q0"), finite_number(j.at("a"), "a")};
    }
    if (family == "blocks") {
        require_keys(j, {"family", "blocks"}, {"family", "blocks"}, "contrast(blocks)");
        BlocksContrast bc;
        for (const auto& bj : j.at("blocks")) {
            require_keys(bj, {"x1", "x2", "value"}, {"x1", "x2", "value"}, "contrast block");
            Block b;
            b.x1lo = finite_number(bj.at("x1").at(0), "x1[0]");
            b.x1hi = finite_number(bj.at("x1").at(1), "x1[1]");
            b.x2lo = finite_number(bj.at("x2").at(0), "x2[0]");
            b.x2hi = finite_number(bj.at("x2").at(1), "x2[1]");
            b.value = finite_number(bj.at("value"), "value");
            if (!(b.x1lo < b.x1hi) || !(b.x2lo < b.x2hi))
                throw std::invalid_argument("config: degenerate block");
            bc.blocks.push_back(b);
        }
        if (bc.blocks.empty()) throw std::invalid_argument("config: blocks contrast needs >= 1 block");
        return bc;
    }
    if (family == "kite") {
        require_keys(j, {"family", "q0"}, {"family"}, "contrast(kite)");
        return kite_contrast(j.contains("q0") ? finite_number(j.at("q0"), "q0") : 2.0);
    }
    if (family == "circle") {
        require_keys(j, {"family", "q0", "radius", "center"}, {"family", "q0", "radius"}, "contrast(circle)");
        double c1 = 0.0, c2 = 0.0;
        if (j.contains("center")) {
            c1 = finite_number(j.at("center").at(0), "center[0]");
            c2 = finite_number(j.at("center").at(1), "center[1]");
        }
        return circle_contrast(finite_number(j.at("q0"), "q0"), finite_number(j.at("radius"), "radius"), c1, c2);
    }
    if (family == "sinusoid_strip") {
        require_keys(j, {"family", "amplitude"}, {"family"}, "contrast(sinusoid_strip)");
        SinusoidStripContrast s;
        if (j.contains("amplitude")) s.amplitude = finite_number(j.at("amplitude"), "amplitude");
        return s;
    }
    if (family == "separable_rect") {
        require_keys(j, {"family", "f1", "f2", "x1", "x2"}, {"family", "f1", "f2", "x1", "x2"},
                     "contrast(separable_rect)");
        require_keys(j.at("f1"), {"const", "cos2"}, {}, "contrast f1");
        require_keys(j.at("f2"), {"c0", "c1"}, {}, "contrast f2");
        SeparableRectContrast s{};
        s.f1_const = j.at("f1").value("const", 0.0);
        s.f1_cos2 = j.at("f1").value("cos2", 0.0);
        s.f2_c0 = j.at("f2").value("c0", 0.0);
        s.f2_c1 = j.at("f2").value("c1", 0.0);
        s.x1lo = finite_number(j.at("x1").at(0), "x1[0]");
        s.x1hi = finite_number(j.at("x1").at(1), "x1[1]");
        s.x2lo = finite_number(j.at("x2").at(0), "x2[0]");
        s.x2hi = finite_number(j.at("x2").at(1), "x2[1]");
        if (!(s.x1lo < s.x1hi) || !(s.x2lo < s.x2hi)) throw std::invalid_argument("config: degenerate rect");
        return s;
    }
    throw std::invalid_argument("config: unknown contrast family '" + family + "'");
}

// Sample-based positivity probe for the piecewise-constant families, where
// the theory assumes q >= q0 > 0 on the support. Advisory only.
inline bool possibly_nonpositive(const ContrastSpec& spec) {
    if (const auto* st = std::get_if<StripContrast>(&spec)) return st->q0 <= 0.0;
    if (const auto* bd = std::get_if<BoundaryContrast>(&spec)) return bd->q0 <= 0.0;
    if (const auto* bl = std::get_if<BlocksContrast>(&spec)) {
        for (int i = 0; i < 64; ++i)
            for (int k = 0; k < 64; ++k) {
                const double x1 = -pi + 2.0 * pi * (i + 0.5) / 64;
                double lo = 1e300, hi = -1e300;
                for (const auto& b : bl->blocks) {
                    lo = std::min(lo, b.x2lo);
                    hi = std::max(hi, b.x2hi);
                }
                const double x2 = lo + (hi - lo) * (k + 0.5) / 64;
                double q = 0.0;
                bool inside = false;
                for (const auto& b : bl->blocks)
                    if (x1 > b.x1lo && x1 < b.x1hi && x2 > b.x2lo && x2 < b.x2hi) {
                        q += b.value;
                        inside = true;
                    }
                if (inside && q <= 0.0) return true;
            }
        return false;
    }
    return false;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
    detail::require_keys(j,
                         {"wavenumber", "theta", "N", "R", "rho", "margin", "allow_tight_box",
                          "eval_height", "contrast", "gmres", "reference_tol", "outputs"},
                         {"wavenumber", "theta", "N", "R", "contrast"}, "top level");
    RunConfig c;
    c.wavenumber = detail::finite_number(j.at("wavenumber"), "wavenumber");
    c.theta = detail::finite_number(j.at("theta"), "theta");
    if (!j.at("N").is_number_integer()) throw std::invalid_argument("config: N must be an integer");
    c.n = j.at("N").get<int>();
    c.R = detail::finite_number(j.at("R"), "R");
    if (j.contains("rho")) c.rho = detail::finite_number(j.at("rho"), "rho");
    if (j.contains("margin")) c.margin = detail::finite_number(j.at("margin"), "margin");
    if (j.contains("allow_tight_box")) c.allow_tight_box = j.at("allow_tight_box").get<bool>();
    if (j.contains("eval_height")) c.eval_height = detail::finite_number(j.at("eval_height"), "eval_height");
    c.contrast_json = j.at("contrast");
    c.contrast = detail::parse_contrast(j.at("contrast"));
    if (j.contains("gmres")) {
        detail::require_keys(j.at("gmres"), {"tol", "maxit", "restart"}, {}, "gmres");
        const auto& g = j.at("gmres");
        if (g.contains("tol")) c.gmres.tol = detail::finite_number(g.at("tol"), "gmres.tol");
        if (g.contains("maxit")) c.gmres.maxit = g.at("maxit").get<int>();
        if (g.contains("restart") && !g.at("restart").is_null()) c.gmres.restart = g.at("restart").get<int>();
    }
    if (j.contains("reference_tol"))
        c.reference_tol = detail::finite_number(j.at("reference_tol"), "reference_tol");
    if (j.contains("outputs")) {
        detail::require_keys(j.at("outputs"), {"directory", "emit_field_grid", "emit_coeffs", "emit_kernel"},
                             {}, "outputs");
        const auto& o = j.at("outputs");
        if (o.contains("directory")) c.outputs.directory = o.at("directory").get<std::string>();
        if (o.contains("emit_field_grid")) c.outputs.emit_field_grid = o.at("emit_field_grid").get<bool>();
        if (o.contains("emit_coeffs")) c.outputs.emit_coeffs = o.at("emit_coeffs").get<bool>();
        if (o.contains("emit_kernel")) c.outputs.emit_kernel = o.at("emit_kernel").get<bool>();
    }

    // resolve geometry
    if (c.n < 4 || c.n % 2 != 0) throw std::invalid_argument("config: N must be even and >= 4");
    if (!(c.wavenumber > 0.0)) throw std::invalid_argument("config: wavenumber must be positive");
    if (!(c.R > 0.0)) throw std::invalid_argument("config: R must be positive");
    if (!(c.gmres.tol > 0.0)) throw std::invalid_argument("config: gmres.tol must be positive");
    if (c.gmres.maxit < 1) throw std::invalid_argument("config: gmres.maxit must be >= 1");

    const auto ext = support_extent(c.contrast);
    if (ext.sup_x1 > pi + 1e-12)
        throw std::invalid_argument("config: contrast support exceeds the x1 period (-pi, pi)");
    if (c.rho) {
        c.resolved_rho = *c.rho;
        if (ext.sup_x2 > c.resolved_rho + 1e-12)
            throw std::invalid_argument("config: contrast support exceeds rho");
    } else {
        c.resolved_rho = std::min(1.05 * ext.sup_x2, c.R / 2.0);
        if (ext.sup_x2 > c.resolved_rho + 1e-12)
            throw std::invalid_argument("config: contrast support does not fit below R/2; set rho/R explicitly");
    }
    const double bound = c.R * (1.0 - c.margin);
    if (2.0 * c.resolved_rho >= bound) {
        if (!c.allow_tight_box || 2.0 * c.resolved_rho > c.R)
            throw std::invalid_argument(
                "config: need 2*rho < R*(1-margin); set allow_tight_box to run with 2*rho = R "
                "(the kernel smoothing then degenerates)");
        c.warnings.push_back("tight box: 2*rho = R, cutoff degenerates to 1 (no kernel smoothing)");
    }
    c.resolved_eval_height = c.eval_height.value_or(c.resolved_rho);
    if (c.resolved_eval_height > c.resolved_rho + 1e-12 || c.resolved_eval_height < ext.sup_x2 - 1e-12)
        throw std::invalid_argument("config: eval_height must lie in [contrast top, rho]");
    if (c.resolved_eval_height <= ext.sup_x2 + 1e-12)
        c.warnings.push_back("eval_height touches the contrast support; traces are taken on its edge");
    if (detail::possibly_nonpositive(c.contrast))
        c.warnings.push_back("contrast is not strictly positive on its support; theory assumes q >= q0 > 0");
    return c;
}

inline RunConfig parse_config_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config(j);
}

inline json echo_config(const RunConfig& c) {
    json g{{"tol", c.gmres.tol}, {"maxit", c.gmres.maxit}};
    g["restart"] = c.gmres.restart ? json(*c.gmres.restart) : json(nullptr);
    return json{{"wavenumber", c.wavenumber},
                {"theta", c.theta},
                {"N", c.n},
                {"R", c.R},
                {"rho", c.resolved_rho},
                {"margin", c.margin},
                {"allow_tight_box", c.allow_tight_box},
                {"eval_height", c.resolved_eval_height},
                {"contrast", c.contrast_json},
                {"gmres", g},
                {"reference_tol", c.reference_tol},
                {"outputs",
                 {{"directory", c.outputs.directory},
                  {"emit_field_grid", c.outputs.emit_field_grid},
                  {"emit_coeffs", c.outputs.emit_coeffs},
                  {"emit_kernel", c.outputs.emit_kernel}}},
                {"warnings", c.warnings}};
}

}  // namespace trigal
