// Material contrasts and their Fourier coefficients on Z2_m.
//
// Contrasts are 2pi-periodic (not quasi-periodic), so their coefficients
// are taken in the plain periodic basis (alpha = 0) on the solver box
// (-pi,pi) x (-R,R). Five families are supported; each computes q_hat
// either in closed form or by a boundary reduction evaluated with the
// composite Simpson rule (panel count doubled until every coefficient
// settles).

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "trigal/field.hpp"

namespace trigal {

struct StripContrast {
    double q0 = 0.0;
    double a = 0.0;  // q = q0 on (-pi,pi) x (-a,a)
};

struct Block {
    double x1lo, x1hi, x2lo, x2hi;
    double value;  // overlapping blocks add
};

struct BlocksContrast {
    std::vector<Block> blocks;
};

// Constant q0 inside a closed curve t -> (z1(t), z2(t)), t in [0,2pi],
// oriented counterclockwise.
struct BoundaryContrast {
    double q0 = 0.0;
    std::function<double(double)> z1, z2, dz1, dz2;
    double sup_x1 = 0.0, sup_x2 = 0.0;
};

// q = amplitude * e^{-x2} between the curves x2 = (sin(2 x1) -+ 1)/2.
struct SinusoidStripContrast {
    double amplitude = 1.0 / 3.0;
};

// q(x) = f1(x1) f2(x2) on a rectangle, with
// f1(x) = f1_const + f1_cos2 * cos(x)^2 and f2(y) = f2_c0 + f2_c1 * y.
struct SeparableRectContrast {
    double f1_const = 0.0, f1_cos2 = 0.0;
    double f2_c0 = 0.0, f2_c1 = 0.0;
    double x1lo, x1hi, x2lo, x2hi;
};

using ContrastSpec =
    std::variant<StripContrast, BlocksContrast, BoundaryContrast, SinusoidStripContrast, SeparableRectContrast>;

// --- presets used by the experiments -----------------------------------

inline BlocksContrast stepped_strip_contrast() {
    // 2 on the full strip, 1 on the inset block above the axis.
    return BlocksContrast{{Block{-pi, pi, -0.75, 0.75, 2.0}, Block{-pi / 2, pi / 2, 0.0, 0.75, -1.0}}};
}

inline BoundaryContrast kite_contrast(double q0 = 2.0) {
    BoundaryContrast b;
    b.q0 = q0;
    b.z1 = [](double t) { return 1.5 * std::cos(t) + std::cos(2 * t) - 0.65; };
    b.z2 = [](double t) { return std::sin(t); };
    b.dz1 = [](double t) { return -1.5 * std::sin(t) - 2.0 * std::sin(2 * t); };
    b.dz2 = [](double t) { return std::cos(t); };
    b.sup_x1 = 1.85;
    b.sup_x2 = 1.0;
    return b;
}

inline BoundaryContrast circle_contrast(double q0, double radius, double c1 = 0.0, double c2 = 0.0) {
    BoundaryContrast b;
    b.q0 = q0;
    b.z1 = [=](double t) { return c1 + radius * std::cos(t); };
    b.z2 = [=](double t) { return c2 + radius * std::sin(t); };
    b.dz1 = [=](double t) { return -radius * std::sin(t); };
    b.dz2 = [=](double t) { return radius * std::cos(t); };
    b.sup_x1 = std::abs(c1) + radius;
    b.sup_x2 = std::abs(c2) + radius;
    return b;
}

inline SeparableRectContrast cosine_ramp_contrast() {
    // 2 cos(x1)^2 (x2 + 0.75) on (-2.5,2.5) x (-0.75,0.75)
    return SeparableRectContrast{0.0, 2.0, 0.75, 1.0, -2.5, 2.5, -0.75, 0.75};
}

// --- support extent ------------------------------------------------------

struct SupportExtent {
    double sup_x1 = 0.0, sup_x2 = 0.0;
};

inline SupportExtent support_extent(const ContrastSpec& spec) {
    return std::visit(
        [](const auto& s) -> SupportExtent {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, StripContrast>) {
                return {pi, s.a};
            } else if constexpr (std::is_same_v<T, BlocksContrast>) {
                SupportExtent e;
                for (const auto& b : s.blocks) {
                    e.sup_x1 = std::max({e.sup_x1, std::abs(b.x1lo), std::abs(b.x1hi)});
                    e.sup_x2 = std::max({e.sup_x2, std::abs(b.x2lo), std::abs(b.x2hi)});
                }
                return e;
            } else if constexpr (std::is_same_v<T, BoundaryContrast>) {
                return {s.sup_x1, s.sup_x2};
            } else if constexpr (std::is_same_v<T, SinusoidStripContrast>) {
                return {pi, 1.0};
            } else {
                return {std::max(std::abs(s.x1lo), std::abs(s.x1hi)),
                        std::max(std::abs(s.x2lo), std::abs(s.x2hi))};
            }
        },
        spec);
}

// Coefficients q_hat(j) for j in Z2_m, plain periodic basis on the box of
// half-height R.
struct ContrastSpectrum {
    int m = 0;
    double R = 0.0;
    std::vector<cd> c;

    cd& at(int j1, int j2) { return c[flat_index(j1, j2, m)]; }
    const cd& at(int j1, int j2) const { return c[flat_index(j1, j2, m)]; }
};

namespace detail {

// int_lo^hi e^{-i c x} dx
inline cd int_exp(double c, double lo, double hi) {
    if (c == 0.0) return cd{hi - lo, 0.0};
    return (std::exp(cd{0.0, -c * lo}) - std::exp(cd{0.0, -c * hi})) / (iu * c);
}

// int_lo^hi x e^{-i c x} dx
inline cd int_x_exp(double c, double lo, double hi) {
    if (c == 0.0) return cd{0.5 * (hi * hi - lo * lo), 0.0};
    const cd elo = std::exp(cd{0.0, -c * lo}), ehi = std::exp(cd{0.0, -c * hi});
    return (lo * elo - hi * ehi) / (iu * c) + int_exp(c, lo, hi) / (iu * c);
}

// Composite Simpson weights for [0,2pi) with the wrap point folded in
// (panels even, node count = panels).
inline std::vector<double> periodic_simpson_weights(long panels) {
    const double h = 2.0 * pi / panels;
    std::vector<double> w(panels);
    for (long s = 0; s < panels; ++s) w[s] = (s % 2 == 0 ? 2.0 : 4.0) * h / 3.0;
    return w;
}

}  // namespace detail

struct SimpsonControl {
    long start_panels = 2048;
    long max_panels = 1L << 17;
    double coeff_tol = 1e-10;
};

namespace detail {

// Boundary family: one full coefficient table at a fixed panel count.
// For j2 != 0 a Green's-formula reduction in x2 gives
//   q_hat = q0 (4 pi R)^{-1/2} (-i/c) sum_s w_s z1'(t_s) e^{-i j1 z1_s - i c z2_s},
// with c = j2 pi / R; the j2 = 0 row uses the x1-direction analogue and the
// (0,0) entry the area integral. Rows j1 <= 0 follow from conjugate
// symmetry. The big sum is organized as one complex matrix product.
inline ContrastSpectrum boundary_coeffs_at(const BoundaryContrast& b, int m, double R, long panels) {
    const auto w = periodic_simpson_weights(panels);
    const long S = panels;
    const int half = m / 2;

    Eigen::VectorXd z1s(S), z2s(S), dz1s(S), dz2s(S);
    for (long s = 0; s < S; ++s) {
        const double t = 2.0 * pi * s / S;
        z1s[s] = b.z1(t);
        z2s[s] = b.z2(t);
        dz1s[s] = b.dz1(t);
        dz2s[s] = b.dz2(t);
    }

    // P(r, s) = e^{-i j1 z1_s} for j1 = r in 0..m/2 (power recurrence,
    // reseeded periodically to stop roundoff drift).
    Eigen::MatrixXcd P(half + 1, S);
    for (long s = 0; s < S; ++s) {
        const cd base = std::polar(1.0, -z1s[s]);
        cd cur{1.0, 0.0};
        for (int r = 0; r <= half; ++r) {
            if (r % 32 == 0) cur = std::polar(1.0, -double(r) * z1s[s]);
            P(r, s) = cur;
            cur *= base;
        }
    }
    // Q(s, col) = w_s z1'_s e^{-i c z2_s} for c = j2 pi / R, j2 = col - half + 1.
    Eigen::MatrixXcd Q(S, m);
    for (long s = 0; s < S; ++s) {
        const double phase = -pi * z2s[s] / R;
        const cd base = std::polar(1.0, phase);
        cd cur = std::polar(1.0, double(-half + 1) * phase);
        for (int col = 0; col < m; ++col) {
            const int j2 = col - half + 1;
            if (j2 % 32 == 0) cur = std::polar(1.0, double(j2) * phase);
            Q(s, col) = cur;
            cur *= base;
        }
        Q.row(s) *= w[s] * dz1s[s];
    }
    Eigen::MatrixXcd M = P * Q;  // (half+1) x m

    ContrastSpectrum out;
    out.m = m;
    out.R = R;
    out.c.assign(std::size_t(m) * m, cd{});
    const double pref = b.q0 / std::sqrt(4.0 * pi * R);

    for (int j1 = 0; j1 <= half; ++j1)
        for (int col = 0; col < m; ++col) {
            const int j2 = col - half + 1;
            if (j2 == 0) continue;
            const double c = j2 * pi / R;
            out.at(j1, j2) = pref * (-iu / c) * M(j1, col);
        }
    // j2 = 0 row: (i/j1) * sum w_s z2'_s e^{-i j1 z1_s}; (0,0): area integral.
    for (int j1 = 0; j1 <= half; ++j1) {
        cd s{};
        if (j1 == 0) {
            for (long i = 0; i < S; ++i) s += w[i] * z1s[i] * dz2s[i];
            out.at(0, 0) = pref * s;
        } else {
            for (long i = 0; i < S; ++i) s += w[i] * dz2s[i] * P(j1, i);
            out.at(j1, 0) = pref * (iu / double(j1)) * s;
        }
    }
    // remaining rows by q_hat(-j) = conj(q_hat(j)); the j2 = m/2 column has
    // no mirror partner inside Z_m and is summed directly.
    for (int j1 = 1; j1 < half; ++j1) {
        for (int j2 = -half + 1; j2 < half; ++j2) out.at(-j1, j2) = std::conj(out.at(j1, -j2));
        const double c = half * pi / R;
        cd s{};
        for (long i = 0; i < S; ++i)
            s += w[i] * dz1s[i] * std::conj(P(j1, i)) * std::polar(1.0, -c * z2s[i]);
        out.at(-j1, half) = pref * (-iu / c) * s;
    }
    return out;
}

inline ContrastSpectrum sinusoid_coeffs_at(const SinusoidStripContrast& s, int m, double R, long panels) {
    // q_hat(j) = (4 pi R)^{-1/2} amp (2 sinh(c/2)/c) J(j1, c),
    // J(j1, c) = int_0^{2pi} e^{-i j1 t} e^{-c sin(2t)/2} dt, c = 1 + i j2 pi / R.
    // For each j2 the Simpson sum over t gives all j1 at once via one DFT.
    const auto w = periodic_simpson_weights(panels);
    const long S = panels;
    const int half = m / 2;
    ContrastSpectrum out;
    out.m = m;
    out.R = R;
    out.c.assign(std::size_t(m) * m, cd{});
    std::vector<double> sin2(S);
    for (long i = 0; i < S; ++i) sin2[i] = std::sin(4.0 * pi * i / S) / 2.0;
    std::vector<cd> buf(S);
    for (int j2 = -half + 1; j2 <= half; ++j2) {
        const cd c{1.0, j2 * pi / R};
        for (long i = 0; i < S; ++i) buf[i] = w[i] * std::exp(-c * sin2[i]);
        fft::transform_1d(int(S), buf.data(), FFTW_FORWARD);
        const cd pref = s.amplitude / std::sqrt(4.0 * pi * R) * 2.0 * std::sinh(c / 2.0) / c;
        for (int j1 = -half + 1; j1 <= half; ++j1) {
            const long bin = j1 >= 0 ? j1 : j1 + S;
            out.at(j1, j2) = pref * buf[bin];
        }
    }
    return out;
}

template <class Fn>
ContrastSpectrum simpson_doubling(int m, Fn&& at_panels, const SimpsonControl& ctl) {
    ContrastSpectrum prev;
    for (long panels = ctl.start_panels; panels <= ctl.max_panels; panels *= 2) {
        ContrastSpectrum cur = at_panels(panels);
        if (!prev.c.empty()) {
            double worst = 0.0;
            for (std::size_t i = 0; i < cur.c.size(); ++i)
                worst = std::max(worst, std::abs(cur.c[i] - prev.c[i]));
            if (worst <= ctl.coeff_tol) return cur;
        }
        prev = std::move(cur);
    }
    throw std::runtime_error("contrast_coeffs: Simpson did not settle within the panel cap");
}

}  // namespace detail

inline ContrastSpectrum contrast_coeffs(const ContrastSpec& spec, int m, double R,
                                        const SimpsonControl& ctl = {}) {
    if (m < 4 || m % 2 != 0) throw std::invalid_argument("contrast_coeffs: m must be even and >= 4");
    const double pref = 1.0 / std::sqrt(4.0 * pi * R);
    ContrastSpectrum out;
    out.m = m;
    out.R = R;
    out.c.assign(std::size_t(m) * m, cd{});

    if (const auto* st = std::get_if<StripContrast>(&spec)) {
        for (int j2 = -m / 2 + 1; j2 <= m / 2; ++j2) {
            const double I = j2 == 0 ? 2.0 * st->a : 2.0 * R / (j2 * pi) * std::sin(j2 * pi * st->a / R);
            out.at(0, j2) = pref * 2.0 * pi * st->q0 * I;
        }
        return out;
    }
    if (const auto* bl = std::get_if<BlocksContrast>(&spec)) {
        for (const auto& b : bl->blocks)
            for (int j1 = -m / 2 + 1; j1 <= m / 2; ++j1) {
                const cd e1 = detail::int_exp(j1, b.x1lo, b.x1hi);
                for (int j2 = -m / 2 + 1; j2 <= m / 2; ++j2)
                    out.at(j1, j2) += pref * b.value * e1 * detail::int_exp(j2 * pi / R, b.x2lo, b.x2hi);
            }
        return out;
    }
    if (const auto* bd = std::get_if<BoundaryContrast>(&spec)) {
        return detail::simpson_doubling(
            m, [&](long p) { return detail::boundary_coeffs_at(*bd, m, R, p); }, ctl);
    }
    if (const auto* ss = std::get_if<SinusoidStripContrast>(&spec)) {
        SimpsonControl c2 = ctl;
        while (c2.start_panels < 2L * m) c2.start_panels *= 2;
        return detail::simpson_doubling(
            m, [&](long p) { return detail::sinusoid_coeffs_at(*ss, m, R, p); }, c2);
    }
    const auto& sr = std::get<SeparableRectContrast>(spec);
    const double a0 = sr.f1_const + 0.5 * sr.f1_cos2;
    const double a2 = 0.5 * sr.f1_cos2;
    for (int j1 = -m / 2 + 1; j1 <= m / 2; ++j1) {
        const cd A = a0 * detail::int_exp(j1, sr.x1lo, sr.x1hi) +
                     0.5 * a2 *
                         (detail::int_exp(j1 - 2, sr.x1lo, sr.x1hi) + detail::int_exp(j1 + 2, sr.x1lo, sr.x1hi));
        for (int j2 = -m / 2 + 1; j2 <= m / 2; ++j2) {
            const double c = j2 * pi / R;
            const cd B = sr.f2_c0 * detail::int_exp(c, sr.x2lo, sr.x2hi) +
                         sr.f2_c1 * detail::int_x_exp(c, sr.x2lo, sr.x2hi);
            out.at(j1, j2) = pref * A * B;
        }
    }
    return out;
}

// The 1-D factors of the separable family, exposed for verification.
inline cd separable_factor_x1(const SeparableRectContrast& sr, int j1) {
    const double a0 = sr.f1_const + 0.5 * sr.f1_cos2;
    const double a2 = 0.5 * sr.f1_cos2;
    return a0 * detail::int_exp(j1, sr.x1lo, sr.x1hi) +
           0.5 * a2 * (detail::int_exp(j1 - 2, sr.x1lo, sr.x1hi) + detail::int_exp(j1 + 2, sr.x1lo, sr.x1hi));
}

inline cd separable_factor_x2(const SeparableRectContrast& sr, int j2, double R) {
    const double c = j2 * pi / R;
    return sr.f2_c0 * detail::int_exp(c, sr.x2lo, sr.x2hi) + sr.f2_c1 * detail::int_x_exp(c, sr.x2lo, sr.x2hi);
}

// Grid values of the band-limited contrast on the M-grid (alpha = 0).
// Imaginary parts are kept; they are roundoff-tiny for symmetric spectra.
inline GridValues contrast_grid_values(const ContrastSpectrum& qhat, int M) {
    if (M < qhat.m) throw std::invalid_argument("contrast_grid_values: M < coefficient range");
    SpectralField q(M, qhat.R, 0.0);
    for (int j1 = -qhat.m / 2 + 1; j1 <= qhat.m / 2; ++j1)
        for (int j2 = -qhat.m / 2 + 1; j2 <= qhat.m / 2; ++j2) q.at(j1, j2) = qhat.at(j1, j2);
    return inverse_dft(q);
}

}  // namespace trigal
