// Periodized-kernel spectrum: Fourier coefficients of the 2R-periodic
// kernel, the C^3 cutoff chi and its coefficients, and the smoothed
// spectrum that acts as the diagonal of the volume-potential operator.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "trigal/field.hpp"
#include "trigal/wave.hpp"

namespace trigal {

inline double resonance_threshold(double k) { return 1e-10 * std::max(1.0, k * k); }

// Fourier coefficient of the 2*halfheight-periodic kernel against the basis
// with half-height rho = halfheight:
//   (4 pi rho)^{-1/2} (cos(j2 pi) e^{i beta_{j1} rho} - 1) / D,
//   D = k^2 - (j1+alpha)^2 - (j2 pi/rho)^2,
// with the removable singularity at D = 0 filled by its limit
// i/(4|j2|) (rho/pi)^{3/2}. D = 0 with j2 = 0 is a Wood's anomaly and must
// have been rejected upstream.
inline cd kernel_coeff(int j1, int j2, double k, double alpha, double halfheight) {
    const double rho = halfheight;
    const double aj = j1 + alpha;
    const double c = j2 * pi / rho;
    const double D = k * k - aj * aj - c * c;
    if (std::abs(D) <= resonance_threshold(k)) {
        if (j2 == 0)
            throw std::logic_error("kernel_coeff: resonance with j2 = 0 (Wood's anomaly leaked through)");
        return iu / (4.0 * std::abs(j2)) * std::pow(rho / pi, 1.5);
    }
    const double bsq = k * k - aj * aj;
    const cd beta = bsq >= 0.0 ? cd{std::sqrt(bsq), 0.0} : cd{0.0, std::sqrt(-bsq)};
    const double sign = (j2 % 2 == 0) ? 1.0 : -1.0;  // cos(j2 pi)
    const cd num = sign * std::exp(iu * beta * rho) - 1.0;
    return num / (std::sqrt(4.0 * pi * rho) * D);
}

// 2R-periodic even cutoff: 1 on |x2| <= 2 rho, 0 at |x2| = R, blended by the
// degree-7 smoothstep p(u) = 35u^4 - 84u^5 + 70u^6 - 20u^7, which has three
// vanishing derivatives at both junctions.
inline double cutoff(double x2, double rho, double R) {
    if (!(2.0 * rho < R)) throw std::invalid_argument("cutoff: need 2*rho < R");
    double x = std::remainder(x2, 2.0 * R);
    x = std::abs(x);
    if (x <= 2.0 * rho) return 1.0;
    double u = (x - 2.0 * rho) / (R - 2.0 * rho);
    u = std::clamp(u, 0.0, 1.0);
    const double u4 = u * u * u * u;
    const double p = u4 * (35.0 - 84.0 * u + 70.0 * u * u - 20.0 * u * u * u);
    return 1.0 - p;
}

// Closed-form derivative of the cutoff, order 0..3. The smoothstep factors
// 140 u^3 (1-u)^3 etc. vanish exactly at both junctions, so flatness there
// is representable in floating point (finite differences cannot resolve it
// below their chi'''' h^2 truncation floor).
inline double cutoff_derivative(double x2, double rho, double R, int order) {
    if (!(2.0 * rho < R)) throw std::invalid_argument("cutoff_derivative: need 2*rho < R");
    if (order == 0) return cutoff(x2, rho, R);
    if (order < 0 || order > 3) throw std::invalid_argument("cutoff_derivative: order must be 0..3");
    double x = std::remainder(x2, 2.0 * R);
    const double sign = x < 0.0 ? -1.0 : 1.0;
    x = std::abs(x);
    const double width = R - 2.0 * rho;
    if (x <= 2.0 * rho || x >= R) {
        if (x != 2.0 * rho && x != R) return 0.0;  // interior of plateau / trough
        // junctions themselves fall through to the polynomial, which is flat
    }
    const double u = std::clamp((x - 2.0 * rho) / width, 0.0, 1.0);
    double p;
    switch (order) {
        case 1: p = 140.0 * u * u * u * std::pow(1.0 - u, 3); break;
        case 2: p = 420.0 * u * u * std::pow(1.0 - u, 2) * (1.0 - 2.0 * u); break;
        default: p = 840.0 * u * (1.0 - u) * (1.0 - 5.0 * u + 5.0 * u * u); break;
    }
    const double chain = (order % 2 == 1) ? sign : 1.0;
    return -p * chain / std::pow(width, order);
}

// Coefficients chat(p) = (4 pi R)^{-1/2} int_{-R}^{R} e^{-i p pi x/R} chi dx
// for p = 0..pmax (chi is even, so they are real and symmetric in p).
// Composite Simpson over the full period, panel count doubled until all
// values move by <= 1e-12.
inline std::vector<double> cutoff_coeffs(double rho, double R, int pmax,
                                         double tol = 1e-12, long max_panels = (1L << 22)) {
    if (pmax < 0) throw std::invalid_argument("cutoff_coeffs: pmax < 0");
    std::vector<double> prev, cur;
    // Panels must outrun the highest requested frequency before the
    // periodic-rule error starts decaying; start near 2*pmax.
    long panels = 1024;
    while (panels < 2L * pmax) panels *= 2;
    for (; panels <= max_panels; panels *= 2) {
        const long nodes = panels + 1;
        const double h = 2.0 * R / panels;
        std::vector<double> chi(nodes), theta(nodes), wgt(nodes);
        for (long i = 0; i < nodes; ++i) {
            const double x = -R + i * h;
            chi[i] = cutoff(x, rho, R);
            theta[i] = pi * x / R;
            wgt[i] = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        }
        cur.assign(pmax + 1, 0.0);
        // cos(p theta) by Chebyshev recurrence per node.
        std::vector<double> cm1(nodes), cm2(nodes), ct(nodes);
        for (long i = 0; i < nodes; ++i) {
            ct[i] = std::cos(theta[i]);
            cm2[i] = 1.0;
            cm1[i] = ct[i];
        }
        for (int p = 0; p <= pmax; ++p) {
            double s = 0.0;
            if (p == 0) {
                for (long i = 0; i < nodes; ++i) s += wgt[i] * chi[i];
            } else if (p == 1) {
                for (long i = 0; i < nodes; ++i) s += wgt[i] * chi[i] * cm1[i];
            } else {
                for (long i = 0; i < nodes; ++i) {
                    const double cp = 2.0 * ct[i] * cm1[i] - cm2[i];
                    cm2[i] = cm1[i];
                    cm1[i] = cp;
                    s += wgt[i] * chi[i] * cp;
                }
            }
            cur[p] = s * h / 3.0 / std::sqrt(4.0 * pi * R);
        }
        if (!prev.empty()) {
            double worst = 0.0;
            for (int p = 0; p <= pmax; ++p) worst = std::max(worst, std::abs(cur[p] - prev[p]));
            if (worst <= tol) return cur;
        }
        prev = cur;
    }
    throw std::runtime_error("cutoff_coeffs: Simpson did not settle within the panel cap");
}

// Precomputed diagonal of the periodized volume potential.
struct KernelSpectrum {
    int n = 0;
    double R = 0.0, rho = 0.0, k = 0.0, alpha = 0.0;
    bool unit_cutoff = false;
    std::vector<cd> c;

    cd& at(int j1, int j2) { return c[flat_index(j1, j2, n)]; }
    const cd& at(int j1, int j2) const { return c[flat_index(j1, j2, n)]; }
};

namespace detail {

// Memoized kernel column at fixed j1: the j2 windows of neighbouring
// smoothed entries overlap almost entirely, so each coefficient is worth
// computing exactly once.
class KernelColumnCache {
  public:
    KernelColumnCache(int j1, double k, double alpha, double R, int initial_halfwidth)
        : j1_(j1), k_(k), alpha_(alpha), R_(R) {
        grow(initial_halfwidth);
    }

    cd operator()(int m) const {
        const int a = std::abs(m);  // even in m
        if (a >= int(vals_.size())) grow(2 * a);
        return vals_[a];
    }

  private:
    void grow(int halfwidth) const {
        const int old = int(vals_.size());
        vals_.resize(halfwidth + 1);
        for (int m = old; m <= halfwidth; ++m) vals_[m] = kernel_coeff(j1_, m, k_, alpha_, R_);
    }

    int j1_;
    double k_, alpha_, R_;
    mutable std::vector<cd> vals_;
};

// One smoothed coefficient: sqrt(pi/R) sum_m khat_col(m) chat(|j2 - m|),
// window grown outward until the appended tail is negligible. khat_col is
// the kernel column at fixed j1, callable for any m2; chat must cover the
// touched offsets.
template <class KernelCol>
cd smoothed_entry(int j2, const KernelCol& khat_col, const std::vector<double>& chat,
                  double R, int window_cap, int* worst = nullptr) {
    const int chunk = 64;
    auto chat_at = [&](int off) {
        off = std::abs(off);
        return off < int(chat.size()) ? chat[off] : 0.0;
    };
    const int lo0 = std::min(0, j2), hi0 = std::max(0, j2);
    int lo = lo0 - chunk, hi = hi0 + chunk;
    cd acc{};
    for (int m = lo; m <= hi; ++m) acc += khat_col(m) * chat_at(j2 - m);
    while (true) {
        cd tail{};
        for (int m = lo - chunk; m < lo; ++m) tail += khat_col(m) * chat_at(j2 - m);
        for (int m = hi + 1; m <= hi + chunk; ++m) tail += khat_col(m) * chat_at(j2 - m);
        acc += tail;
        lo -= chunk;
        hi += chunk;
        if (std::abs(tail) <= 1e-12 * std::abs(acc) + 1e-30) break;
        if (hi - lo > window_cap) {
            if (worst) *worst = j2;
            throw std::runtime_error("smoothed kernel: convolution tail did not settle at j2 = " +
                                     std::to_string(j2));
        }
    }
    return acc * std::sqrt(pi / R);
}

}  // namespace detail

// Smoothed coefficients for a single j1 column, entries j2 in Z_n.
// With unit_cutoff (or a tight box, 2 rho >= R) the smoothing degenerates
// and the column is the raw periodized kernel.
inline std::vector<cd> smoothed_kernel_column(int j1, int n, const WaveParameters& w,
                                              double rho, double R, bool unit_cutoff,
                                              const std::vector<double>* chat_cache = nullptr) {
    std::vector<cd> col(n);
    auto put = [&](int j2, cd v) { col[mode_slot(j2, n)] = v; };
    if (unit_cutoff) {
        for (int j2 = -n / 2 + 1; j2 <= n / 2; ++j2)
            put(j2, kernel_coeff(j1, j2, w.k, w.alpha, R));
        return col;
    }
    std::vector<double> chat_local;
    const std::vector<double>* chat = chat_cache;
    if (!chat) {
        chat_local = cutoff_coeffs(rho, R, n / 2 + 4096);
        chat = &chat_local;
    }
    detail::KernelColumnCache kcol(j1, w.k, w.alpha, R, n / 2 + 512);
    for (int j2 = 0; j2 <= n / 2; ++j2) {
        const cd v = detail::smoothed_entry(j2, kcol, *chat, R, 16384);
        put(j2, v);
        if (j2 > 0 && -j2 > -n / 2) put(-j2, v);  // even in j2
    }
    return col;
}

inline KernelSpectrum smoothed_kernel_spectrum(const Discretization& disc, const WaveParameters& w,
                                               bool unit_cutoff = false) {
    disc.validate();
    if (check_wood(w)) throw std::invalid_argument("smoothed_kernel_spectrum: Wood's anomaly");
    KernelSpectrum ks;
    ks.n = disc.n;
    ks.R = disc.R;
    ks.rho = disc.rho;
    ks.k = w.k;
    ks.alpha = w.alpha;
    ks.unit_cutoff = unit_cutoff || 2.0 * disc.rho >= disc.R;
    ks.c.assign(std::size_t(disc.n) * disc.n, cd{});
    std::vector<double> chat;
    if (!ks.unit_cutoff) chat = cutoff_coeffs(disc.rho, disc.R, disc.n / 2 + 4096);
    for (int j1 = -disc.n / 2 + 1; j1 <= disc.n / 2; ++j1) {
        auto col = smoothed_kernel_column(j1, disc.n, w, disc.rho, disc.R, ks.unit_cutoff,
                                          ks.unit_cutoff ? nullptr : &chat);
        const int s1 = mode_slot(j1, disc.n);
        std::copy(col.begin(), col.end(), ks.c.begin() + std::size_t(s1) * disc.n);
    }
    return ks;
}

}  // namespace trigal
