// Unpreconditioned GMRES (Arnoldi + Givens), full by default with optional
// restart. Works on flat complex coefficient vectors; the Euclidean
// residual there coincides with the L2 residual of the discrete problem by
// basis orthonormality.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace trigal {

struct GmresOptions {
    double tol = 1e-5;
    int maxit = 500;
    std::optional<int> restart;  // nullopt = full GMRES
};

struct GmresResult {
    std::vector<std::complex<double>> x;
    std::vector<double> residual_history;  // absolute norms, starting at ||b||
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline std::complex<double> dot(const std::vector<std::complex<double>>& a,
                                const std::vector<std::complex<double>>& b) {
    std::complex<double> s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double nrm2(const std::vector<std::complex<double>>& a) {
    double s = 0.0;
    for (const auto& c : a) s += std::norm(c);
    return std::sqrt(s);
}

}  // namespace detail

template <class Op>
GmresResult gmres(Op&& apply, const std::vector<std::complex<double>>& b, const GmresOptions& opts = {}) {
    using cvec = std::vector<std::complex<double>>;
    const std::size_t dim = b.size();
    GmresResult res;
    res.x.assign(dim, {});

    const double bnorm = detail::nrm2(b);
    res.residual_history.push_back(bnorm);
    if (bnorm == 0.0) {
        res.converged = true;
        return res;
    }
    const double target = opts.tol * bnorm;

    cvec r = b;  // x0 = 0; after a restart r = b - A x
    double rnorm = bnorm;

    while (res.iterations < opts.maxit) {
        const int cycle = opts.restart ? std::min(*opts.restart, opts.maxit - res.iterations)
                                       : opts.maxit - res.iterations;
        std::vector<cvec> V;
        V.reserve(cycle + 1);
        {
            cvec v0 = r;
            for (auto& c : v0) c /= rnorm;
            V.push_back(std::move(v0));
        }
        std::vector<std::vector<std::complex<double>>> H;  // H[k] has k+2 entries
        std::vector<std::complex<double>> cs, sn, g;
        g.push_back(rnorm);

        int k = 0;
        bool breakdown = false;
        for (; k < cycle; ++k) {
            cvec w = apply(V[k]);
            std::vector<std::complex<double>> h(k + 2);
            for (int i = 0; i <= k; ++i) {  // modified Gram-Schmidt
                h[i] = detail::dot(V[i], w);
                for (std::size_t p = 0; p < dim; ++p) w[p] -= h[i] * V[i][p];
            }
            const double wnorm = detail::nrm2(w);
            h[k + 1] = wnorm;

            // apply accumulated rotations, then a new one to zero h[k+1]
            for (int i = 0; i < k; ++i) {
                const auto t = std::conj(cs[i]) * h[i] + std::conj(sn[i]) * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            const double denom = std::hypot(std::abs(h[k]), std::abs(h[k + 1]));
            std::complex<double> c, s;
            if (denom == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(h[k]) == 0.0) {
                c = 0.0;
                s = 1.0;
            } else {
                c = std::abs(h[k]) / denom;
                s = std::conj(h[k]) * h[k + 1] / (std::abs(h[k]) * denom);
            }
            const auto t = std::conj(c) * h[k] + std::conj(s) * h[k + 1];
            h[k] = t;
            h[k + 1] = 0.0;
            cs.push_back(c);
            sn.push_back(s);
            g.push_back(-s * g[k]);
            g[k] = std::conj(c) * g[k];
            H.push_back(std::move(h));

            ++res.iterations;
            rnorm = std::abs(g[k + 1]);
            res.residual_history.push_back(rnorm);

            if (wnorm > 0.0) {
                cvec vk = std::move(w);
                for (auto& cc : vk) cc /= wnorm;
                V.push_back(std::move(vk));
            } else {
                breakdown = true;  // invariant subspace hit: solution is exact
            }
            if (rnorm <= target || breakdown) {
                ++k;
                break;
            }
        }

        // back-substitute y and accumulate x += V y
        if (k > 0) {
            std::vector<std::complex<double>> y(k);
            for (int i = k - 1; i >= 0; --i) {
                auto s = g[i];
                for (int j = i + 1; j < k; ++j) s -= H[j][i] * y[j];
                y[i] = s / H[i][i];
            }
            for (int j = 0; j < k; ++j)
                for (std::size_t p = 0; p < dim; ++p) res.x[p] += y[j] * V[j][p];
        }

        if (rnorm <= target || breakdown) {
            res.converged = rnorm <= target || breakdown;
            return res;
        }
        if (res.iterations >= opts.maxit) break;
        // restart: recompute the true residual
        cvec ax = apply(res.x);
        for (std::size_t p = 0; p < dim; ++p) r[p] = b[p] - ax[p];
        rnorm = detail::nrm2(r);
    }
    res.converged = rnorm <= target;
    return res;
}

}  // namespace trigal
