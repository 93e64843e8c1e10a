// Spectral core: index sets, alpha-quasi-periodic DFT pair, zero padding,
// derivative multipliers and Fourier-side Sobolev norms.
//
// A field u on the box (-pi,pi) x (-R,R) is stored through its coefficients
// against the orthonormal basis
//     phi_j(x) = (4 pi R)^{-1/2} exp(i (j1+alpha) x1 + i j2 pi x2 / R),
// with j = (j1,j2) running over Z2_n = { -n/2 < j1,j2 <= n/2 }, n even.
// Coefficients and grid values live in FFT-natural order: the mode/grid
// index j maps to slot (j + n) % n, and the flat position of (j1,j2) is
// slot(j1)*n + slot(j2). Grid nodes are x(l) = (2 pi l1 / n, 2 R l2 / n)
// for l in Z2_n.

#pragma once

#include <cmath>
#include <complex>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "trigal/fft.hpp"

namespace trigal {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cd iu{0.0, 1.0};

// Truncation n, computational half-height R (x2-period 2R) and contrast
// half-height rho. The cutoff construction needs 2*rho < R; tight_box
// relaxes this to 2*rho <= R, in which case the smoothing step degenerates
// to the identity (see kernel.hpp).
struct Discretization {
    int n = 0;
    double R = 0.0;
    double rho = 0.0;
    double margin = 0.0;
    bool tight_box = false;

    void validate() const {
        if (n < 4 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 4");
        if (!(R > 0.0) || !(rho > 0.0)) throw std::invalid_argument("R and rho must be positive");
        if (!(margin >= 0.0)) throw std::invalid_argument("margin must be >= 0");
        const double bound = R * (1.0 - margin);
        if (tight_box ? !(2.0 * rho <= bound) : !(2.0 * rho < bound))
            throw std::invalid_argument("need 2*rho < R*(1-margin)");
    }
};

inline int mode_slot(int j, int n) { return j >= 0 ? j : j + n; }
inline int slot_mode(int s, int n) { return s <= n / 2 ? s : s - n; }

inline std::size_t flat_index(int j1, int j2, int n) {
    return std::size_t(mode_slot(j1, n)) * n + mode_slot(j2, n);
}

inline bool in_index_set(int j1, int j2, int n) {
    return -n / 2 < j1 && j1 <= n / 2 && -n / 2 < j2 && j2 <= n / 2;
}

struct SpectralField {
    int n = 0;
    double R = 0.0;
    double alpha = 0.0;
    std::vector<cd> coef;

    SpectralField() = default;
    SpectralField(int n_, double R_, double alpha_)
        : n(n_), R(R_), alpha(alpha_), coef(std::size_t(n_) * n_, cd{}) {}

    cd& at(int j1, int j2) { return coef[flat_index(j1, j2, n)]; }
    const cd& at(int j1, int j2) const { return coef[flat_index(j1, j2, n)]; }
};

struct GridValues {
    int n = 0;
    double R = 0.0;
    double alpha = 0.0;
    std::vector<cd> val;

    GridValues() = default;
    GridValues(int n_, double R_, double alpha_)
        : n(n_), R(R_), alpha(alpha_), val(std::size_t(n_) * n_, cd{}) {}

    cd& at(int l1, int l2) { return val[flat_index(l1, l2, n)]; }
    const cd& at(int l1, int l2) const { return val[flat_index(l1, l2, n)]; }

    // Grid node coordinates for slot-mapped index l.
    double x1(int l1) const { return 2.0 * pi * l1 / n; }
    double x2(int l2) const { return 2.0 * R * l2 / n; }
};

namespace detail {

// Phase twist exp(sign * 2 pi i alpha l / n) indexed by slot.
inline std::vector<cd> alpha_twist(int n, double alpha, int sign) {
    std::vector<cd> t(n);
    for (int s = 0; s < n; ++s) {
        const int l = slot_mode(s, n);
        t[s] = std::exp(cd{0.0, sign * 2.0 * pi * alpha * l / n});
    }
    return t;
}

}  // namespace detail

// u_hat(j) = sqrt(4 pi R)/n^2 * sum_l g(x(l)) exp(-2 pi i ((j1+alpha) l1 + j2 l2)/n).
// The alpha part is a diagonal twist on the input; the rest is a plain DFT.
inline SpectralField forward_dft(const GridValues& g) {
    const int n = g.n;
    SpectralField u(n, g.R, g.alpha);
    u.coef = g.val;
    if (g.alpha != 0.0) {
        const auto tw = detail::alpha_twist(n, g.alpha, -1);
        for (int s1 = 0; s1 < n; ++s1)
            for (int s2 = 0; s2 < n; ++s2) u.coef[std::size_t(s1) * n + s2] *= tw[s1];
    }
    fft::transform_2d(n, u.coef.data(), FFTW_FORWARD);
    const double scale = std::sqrt(4.0 * pi * g.R) / (double(n) * n);
    for (auto& c : u.coef) c *= scale;
    return u;
}

inline GridValues inverse_dft(const SpectralField& u) {
    const int n = u.n;
    GridValues g(n, u.R, u.alpha);
    g.val = u.coef;
    fft::transform_2d(n, g.val.data(), FFTW_BACKWARD);
    const double scale = 1.0 / std::sqrt(4.0 * pi * u.R);
    if (u.alpha != 0.0) {
        const auto tw = detail::alpha_twist(n, u.alpha, +1);
        for (int s1 = 0; s1 < n; ++s1)
            for (int s2 = 0; s2 < n; ++s2) g.val[std::size_t(s1) * n + s2] *= scale * tw[s1];
    } else {
        for (auto& v : g.val) v *= scale;
    }
    return g;
}

// Zero-padding E_{n,m}: coefficients copied on Z2_n, zero elsewhere.
inline SpectralField embed(const SpectralField& u, int m) {
    if (m <= u.n || m % 2 != 0) throw std::invalid_argument("embed: m must be even and > n");
    SpectralField out(m, u.R, u.alpha);
    for (int j1 = -u.n / 2 + 1; j1 <= u.n / 2; ++j1)
        for (int j2 = -u.n / 2 + 1; j2 <= u.n / 2; ++j2) out.at(j1, j2) = u.at(j1, j2);
    return out;
}

// Restriction R_{n,m}: keep coefficients with index in Z2_m.
inline SpectralField truncate(const SpectralField& u, int m) {
    if (m >= u.n || m % 2 != 0 || m < 2) throw std::invalid_argument("truncate: m must be even and < n");
    SpectralField out(m, u.R, u.alpha);
    for (int j1 = -m / 2 + 1; j1 <= m / 2; ++j1)
        for (int j2 = -m / 2 + 1; j2 <= m / 2; ++j2) out.at(j1, j2) = u.at(j1, j2);
    return out;
}

// Multipliers turning u_hat(j) into the coefficients of the partials:
// w1 = i (j1 + alpha), w2 = i j2 pi / R.
inline std::pair<cd, cd> derivative_multiplier(int j1, int j2, double alpha, double R) {
    return {iu * (j1 + alpha), iu * (j2 * pi / R)};
}

// ( sum_j (1+|j|^2)^s |u_hat(j)|^2 )^{1/2}
inline double sobolev_norm(const SpectralField& u, double s) {
    if (s < 0.0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    double acc = 0.0;
    for (int j1 = -u.n / 2 + 1; j1 <= u.n / 2; ++j1)
        for (int j2 = -u.n / 2 + 1; j2 <= u.n / 2; ++j2) {
            const double w = std::pow(1.0 + double(j1) * j1 + double(j2) * j2, s);
            acc += w * std::norm(u.at(j1, j2));
        }
    return std::sqrt(acc);
}

inline double coef_norm(const std::vector<cd>& v) {
    double acc = 0.0;
    for (const auto& c : v) acc += std::norm(c);
    return std::sqrt(acc);
}

// --- CSV serialization: header j1,j2,re,im, rows lexicographic in (j1,j2) ---

inline void write_coeffs_csv(std::ostream& os, const SpectralField& u) {
    os << "j1,j2,re,im\n";
    os.precision(17);
    for (int j1 = -u.n / 2 + 1; j1 <= u.n / 2; ++j1)
        for (int j2 = -u.n / 2 + 1; j2 <= u.n / 2; ++j2) {
            const cd& c = u.at(j1, j2);
            os << j1 << ',' << j2 << ',' << c.real() << ',' << c.imag() << '\n';
        }
}

inline SpectralField read_coeffs_csv(std::istream& is, double R, double alpha) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("j1,j2,re,im", 0) != 0)
        throw std::runtime_error("coefficient csv: bad header");
    struct Row { int j1, j2; cd c; };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Row r;
        char comma;
        double re, im;
        if (!(ss >> r.j1 >> comma >> r.j2 >> comma >> re >> comma >> im))
            throw std::runtime_error("coefficient csv: bad row: " + line);
        r.c = cd{re, im};
        rows.push_back(r);
    }
    const int n = int(std::lround(std::sqrt(double(rows.size()))));
    if (std::size_t(n) * n != rows.size() || n % 2 != 0)
        throw std::runtime_error("coefficient csv: row count is not an even square");
    SpectralField u(n, R, alpha);
    for (const auto& r : rows) {
        if (!in_index_set(r.j1, r.j2, n)) throw std::runtime_error("coefficient csv: index out of range");
        u.at(r.j1, r.j2) = r.c;
    }
    return u;
}

}  // namespace trigal
