// Independent slow-but-sure references used by tests and the validate
// command: the analytic single-mode strip transmission problem, a dense
// 1-D reduction of the strip system, a dense assembly of the full operator
// at tiny N, and the O(N^4) convolution sum.

#pragma once

#include <Eigen/Dense>

#include "trigal/analysis.hpp"
#include "trigal/contrast.hpp"
#include "trigal/kernel.hpp"
#include "trigal/solver.hpp"
#include "trigal/wave.hpp"

namespace trigal {

struct StripExact {
    cd r;      // reflection amplitude, anchored at x2 = +a
    cd tau;    // transmission amplitude, anchored at x2 = -a
    cd t1, t2; // interior amplitudes
    cd gamma;  // interior vertical wavenumber
    double residual = 0.0;  // max interface-condition residual of the 4x4 solve
};

// Single-mode transmission through the slab (-a,a) with contrast q0.
// Vertical profile: v'' + beta0^2 v = 0 outside, v'' + gamma^2 v = 0 inside
// with gamma^2 = k^2/(1+q0) - alpha^2; v and (1 outside, 1+q0 inside) v'
// continuous at +-a. Incident e^{-i beta0 x2} from above; reflected
// r e^{i beta0 (x2-a)}, transmitted tau e^{-i beta0 (x2+a)}.
inline StripExact strip_exact(const WaveParameters& w, double q0, double a) {
    if (!(q0 > -1.0) || !(a > 0.0)) throw std::invalid_argument("strip_exact: need q0 > -1, a > 0");
    const double beta0 = w.k * std::sin(w.theta);
    const double g2 = w.k * w.k / (1.0 + q0) - w.alpha * w.alpha;
    const cd gamma = g2 >= 0.0 ? cd{std::sqrt(g2), 0.0} : cd{0.0, std::sqrt(-g2)};
    const double cin = 1.0 + q0;

    const cd epa = std::exp(iu * gamma * a), ema = std::exp(-iu * gamma * a);
    const cd einc = std::exp(cd{0.0, -beta0 * a});

    Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
    Eigen::Vector4cd b;
    // unknowns: (r, t1, t2, tau)
    A(0, 0) = 1.0;            A(0, 1) = -epa;                     A(0, 2) = -ema;
    b(0) = -einc;
    A(1, 0) = iu * beta0;     A(1, 1) = -cin * iu * gamma * epa;  A(1, 2) = cin * iu * gamma * ema;
    b(1) = iu * beta0 * einc;
    A(2, 1) = ema;            A(2, 2) = epa;                      A(2, 3) = -1.0;
    b(2) = 0.0;
    A(3, 1) = cin * iu * gamma * ema;  A(3, 2) = -cin * iu * gamma * epa;  A(3, 3) = iu * beta0;
    b(3) = 0.0;

    Eigen::Vector4cd x = A.fullPivLu().solve(b);
    if (!x.allFinite()) throw std::runtime_error("strip_exact: singular interface system");
    StripExact out;
    out.r = x(0);
    out.t1 = x(1);
    out.t2 = x(2);
    out.tau = x(3);
    out.gamma = gamma;
    out.residual = (A * x - b).cwiseAbs().maxCoeff();
    return out;
}

// Strip contrast coefficients q_hat(0, p), p in Z_{2N}, in slot order.
inline std::vector<cd> strip_qhat_column(double q0, double a, double R, int n2) {
    std::vector<cd> col(n2);
    const double pref = 2.0 * pi * q0 / std::sqrt(4.0 * pi * R);
    for (int p = -n2 / 2 + 1; p <= n2 / 2; ++p) {
        const double I = p == 0 ? 2.0 * a : 2.0 * R / (p * pi) * std::sin(p * pi * a / R);
        col[mode_slot(p, n2)] = pref * I;
    }
    return col;
}

// Dense direct solve of the strip problem reduced to the j1 = 0 column:
//   M[n,m] = delta + Ksm(0,n) qhat(0,n-m) (alpha^2 + n m pi^2 / R^2),
// with the right-hand side assembled through the same 3N-grid projection
// as the full solver, collapsed to one dimension. Embedded back into a
// full field (all other columns are zero for strip problems).
inline SpectralField strip_reduced_solve(const WaveParameters& w, double q0, double a,
                                         const Discretization& disc, bool unit_cutoff = false) {
    disc.validate();
    const int n = disc.n;
    const double R = disc.R;
    const bool unit = unit_cutoff || 2.0 * disc.rho >= R;
    const auto kcol = smoothed_kernel_column(0, n, w, disc.rho, R, unit);
    const auto qcol = strip_qhat_column(q0, a, R, 2 * n);

    Eigen::MatrixXcd M(n, n);
    for (int sn = 0; sn < n; ++sn) {
        const int jn = slot_mode(sn, n);
        for (int sm = 0; sm < n; ++sm) {
            const int jm = slot_mode(sm, n);
            const cd q = qcol[mode_slot(jn - jm, 2 * n)];
            cd v = kcol[sn] * q * (w.alpha * w.alpha + double(jn) * jm * pi * pi / (R * R));
            if (sn == sm) v += 1.0;
            M(sn, sm) = v;
        }
    }

    // 1-D right-hand side on the 3N grid.
    const int Mg = 3 * n;
    std::vector<cd> qg(Mg, cd{});
    for (int p = -n + 1; p <= n; ++p) qg[mode_slot(p, Mg)] = qcol[mode_slot(p, 2 * n)];
    fft::transform_1d(Mg, qg.data(), FFTW_BACKWARD);
    const double beta0 = w.k * std::sin(w.theta);
    std::vector<cd> prof(Mg);
    for (int s = 0; s < Mg; ++s) {
        const double x2 = 2.0 * R * slot_mode(s, Mg) / Mg;
        prof[s] = qg[s] / std::sqrt(4.0 * pi * R) * std::exp(cd{0.0, -beta0 * x2});
    }
    std::vector<cd> g1 = prof;
    fft::transform_1d(Mg, g1.data(), FFTW_FORWARD);
    const double fscale = std::sqrt(4.0 * pi * R) / Mg;
    const cd d1 = iu * w.k * w.d1, d2 = iu * w.k * w.d2;

    Eigen::VectorXcd rhs(n);
    for (int sn = 0; sn < n; ++sn) {
        const int jn = slot_mode(sn, n);
        const cd ghat = fscale * g1[mode_slot(jn, Mg)];
        const auto [m1, m2] = derivative_multiplier(0, jn, w.alpha, R);
        rhs(sn) = std::sqrt(4.0 * pi * R) * kcol[sn] * (m1 * (d1 * ghat) + m2 * (d2 * ghat));
    }

    Eigen::VectorXcd sol = M.partialPivLu().solve(rhs);
    if (!sol.allFinite()) throw std::runtime_error("strip_reduced_solve: dense solve failed");
    SpectralField u(n, R, w.alpha);
    for (int sn = 0; sn < n; ++sn) u.coef[flat_index(0, slot_mode(sn, n), n)] = sol(sn);
    return u;
}

// Dense matrix of the full operator, columns = operator on basis vectors.
inline Eigen::MatrixXcd dense_operator(const ProblemSetup& s) {
    if (s.disc.n > 16) throw std::invalid_argument("dense_operator: N must be <= 16");
    const int dim = s.disc.n * s.disc.n;
    Eigen::MatrixXcd A(dim, dim);
    for (int col = 0; col < dim; ++col) {
        SpectralField e(s.disc.n, s.disc.R, s.wave.alpha);
        e.coef[col] = 1.0;
        SpectralField Ae = apply_operator(e, s);
        for (int row = 0; row < dim; ++row) A(row, col) = Ae.coef[row];
    }
    return A;
}

// O(N^4) reference for the coefficients of P_N(q d_l u):
// (4 pi R)^{-1/2} sum_{m in Z2_N} w_l(m) u_hat(m) qhat(j - m).
inline SpectralField direct_product_coeffs(const SpectralField& u, const ContrastSpectrum& qhat, int l) {
    const int n = u.n;
    if (qhat.m < 2 * n) throw std::invalid_argument("direct_product_coeffs: need qhat on Z2_{2N}");
    SpectralField out(n, u.R, u.alpha);
    const double pref = 1.0 / std::sqrt(4.0 * pi * u.R);
    for (int j1 = -n / 2 + 1; j1 <= n / 2; ++j1)
        for (int j2 = -n / 2 + 1; j2 <= n / 2; ++j2) {
            cd acc{};
            for (int m1 = -n / 2 + 1; m1 <= n / 2; ++m1)
                for (int m2 = -n / 2 + 1; m2 <= n / 2; ++m2) {
                    const auto [w1, w2] = derivative_multiplier(m1, m2, u.alpha, u.R);
                    const cd wm = (l == 1 ? w1 : w2) * u.at(m1, m2);
                    acc += wm * qhat.at(j1 - m1, j2 - m2);
                }
            out.at(j1, j2) = pref * acc;
        }
    return out;
}

}  // namespace trigal
