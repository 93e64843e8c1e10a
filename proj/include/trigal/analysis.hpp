// Post-processing: Rayleigh trace coefficients, diffraction energies and
// the conservation-error indicator, Sobolev relative errors between
// solutions, and convergence-order fits.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "trigal/field.hpp"
#include "trigal/solver.hpp"
#include "trigal/wave.hpp"

namespace trigal {

// x1-mode trace coefficients of the field at x2 = side * eval_height:
//   u^{side}_l = (4 pi R)^{-1/2} sum_{j2} u_hat(l, j2) e^{i side j2 pi h / R}.
// Returned in slot order (index mode_slot(l, n)).
inline std::vector<cd> rayleigh_coeffs(const SpectralField& u, double eval_height, int side) {
    if (side != 1 && side != -1) throw std::invalid_argument("rayleigh_coeffs: side must be +-1");
    if (!(eval_height >= 0.0) || eval_height > u.R)
        throw std::invalid_argument("rayleigh_coeffs: eval_height outside [0, R]");
    std::vector<cd> phase(u.n);
    for (int s = 0; s < u.n; ++s) {
        const int j2 = slot_mode(s, u.n);
        phase[s] = std::exp(iu * double(side) * (j2 * pi * eval_height / u.R));
    }
    std::vector<cd> out(u.n, cd{});
    const double pref = 1.0 / std::sqrt(4.0 * pi * u.R);
    for (int s1 = 0; s1 < u.n; ++s1) {
        cd acc{};
        for (int s2 = 0; s2 < u.n; ++s2) acc += u.coef[std::size_t(s1) * u.n + s2] * phase[s2];
        out[s1] = pref * acc;
    }
    return out;
}

struct RayleighMode {
    int j = 0;
    double alpha_j = 0.0;
    cd beta_j;
    cd u_plus, u_minus;
};

struct RayleighData {
    std::vector<RayleighMode> modes;  // all j in Z_n
    cd incident0;                     // trace coefficient of u^i at x2 = -eval_height
    double eval_height = 0.0;
};

inline RayleighData rayleigh_data(const SpectralField& u, const WaveParameters& w, double eval_height) {
    const auto up = rayleigh_coeffs(u, eval_height, +1);
    const auto um = rayleigh_coeffs(u, eval_height, -1);
    RayleighData rd;
    rd.eval_height = eval_height;
    rd.incident0 = std::exp(iu * (w.k * std::sin(w.theta) * eval_height));
    rd.modes.reserve(u.n);
    for (int j = -u.n / 2 + 1; j <= u.n / 2; ++j) {
        RayleighMode m;
        m.j = j;
        m.alpha_j = j + w.alpha;
        m.beta_j = beta(j, w);
        m.u_plus = up[mode_slot(j, u.n)];
        m.u_minus = um[mode_slot(j, u.n)];
        rd.modes.push_back(m);
    }
    return rd;
}

struct EnergyReport {
    double e_ref = 0.0;
    double e_tra = 0.0;
    double conservation_error = 0.0;
};

// Reflected/transmitted energies over the propagating modes k^2 > alpha_j^2,
// normalized by beta_0 = k sin(theta).
inline EnergyReport energies(const RayleighData& rd, const WaveParameters& w) {
    const double beta0 = w.k * std::sin(w.theta);
    if (!(beta0 > 0.0)) throw std::invalid_argument("energies: beta_0 must be positive");
    EnergyReport e;
    for (const auto& m : rd.modes) {
        if (!(w.k * w.k > m.alpha_j * m.alpha_j)) continue;
        const double bj = m.beta_j.real();
        e.e_ref += bj * std::norm(m.u_plus) / beta0;
        const cd below = m.u_minus + (m.j == 0 ? rd.incident0 : cd{});
        e.e_tra += bj * std::norm(below) / beta0;
    }
    e.conservation_error = std::abs(1.0 - e.e_ref - e.e_tra);
    return e;
}

inline EnergyReport scattering_energies(const ProblemSetup& s, const SpectralField& solution,
                                        double eval_height) {
    return energies(rayleigh_data(solution, s.wave, eval_height), s.wave);
}

// || a - b ||_{H^s} / || b ||_{H^s}; a smaller field is zero-padded first.
inline double relative_error(const SpectralField& a, const SpectralField& b, double s) {
    const SpectralField& big = a.n >= b.n ? a : b;
    SpectralField ae = a.n < big.n ? embed(a, big.n) : a;
    SpectralField be = b.n < big.n ? embed(b, big.n) : b;
    const double denom = sobolev_norm(be, s);
    if (denom == 0.0) throw std::invalid_argument("relative_error: zero reference norm");
    SpectralField diff = ae;
    for (std::size_t i = 0; i < diff.coef.size(); ++i) diff.coef[i] -= be.coef[i];
    return sobolev_norm(diff, s) / denom;
}

// Least-squares slope of log(error) against log(N), negated.
inline double estimate_order(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw std::invalid_argument("estimate_order: need at least 3 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, err] : pairs) {
        if (!(err > 0.0) || !(n > 0.0)) throw std::invalid_argument("estimate_order: need positive data");
        const double x = std::log(n), y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = double(pairs.size());
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-12 * m * sxx) throw std::invalid_argument("estimate_order: degenerate abscissae");
    return -(m * sxy - sx * sy) / det;
}

}  // namespace trigal
