// Incident plane wave data, vertical mode wavenumbers beta_j and the
// resonance (Wood's anomaly) scan.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "trigal/field.hpp"

namespace trigal {

// Plane wave exp(i k x.d), d = (cos theta, -sin theta), quasi-periodicity
// alpha = k cos theta. Grazing incidence (sin theta = 0) is excluded.
struct WaveParameters {
    double k = 0.0;
    double theta = 0.0;
    double alpha = 0.0;
    double d1 = 0.0, d2 = 0.0;

    WaveParameters() = default;
    WaveParameters(double k_, double theta_) : k(k_), theta(theta_) {
        if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
        d1 = std::cos(theta);
        d2 = -std::sin(theta);
        if (d2 == 0.0) throw std::invalid_argument("grazing incidence (sin theta = 0) not allowed");
        alpha = k * d1;
    }
};

// beta_j = sqrt(k^2 - (j1+alpha)^2) with the branch fixed by Im beta >= 0.
inline cd beta(int j1, const WaveParameters& w) {
    const double aj = j1 + w.alpha;
    const double d = w.k * w.k - aj * aj;
    return d >= 0.0 ? cd{std::sqrt(d), 0.0} : cd{0.0, std::sqrt(-d)};
}

inline double wood_default_tol(double k) { return 1e-10 * std::max(1.0, k * k); }

// Returns the order of a resonant mode |k^2 - (j1+alpha)^2| <= tol (the
// lowest |j1| when several resonate), or nullopt when the configuration is
// safe. Only |j1 + alpha| <= k + 1 can resonate; outside that band
// k^2 - alpha_j^2 grows quadratically.
inline std::optional<int> check_wood(const WaveParameters& w, double tol = -1.0) {
    if (tol <= 0.0) tol = wood_default_tol(w.k);
    const int lo = int(std::ceil(-w.alpha - w.k - 1.0));
    const int hi = int(std::floor(-w.alpha + w.k + 1.0));
    std::optional<int> hit;
    for (int j = lo; j <= hi; ++j) {
        const double aj = j + w.alpha;
        if (std::abs(w.k * w.k - aj * aj) <= tol && (!hit || std::abs(j) < std::abs(*hit))) hit = j;
    }
    return hit;
}

}  // namespace trigal
