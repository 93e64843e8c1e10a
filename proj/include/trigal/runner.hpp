// Batch front end shared by the CLI and the tests: solve, convergence
// study, energy sweep over incidence angles, and the self-check suite.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "trigal/analysis.hpp"
#include "trigal/config.hpp"
#include "trigal/oracles.hpp"
#include "trigal/solver.hpp"

namespace trigal {

enum class RunStatus { ok = 0, config_error = 2, wood_anomaly = 3, no_convergence = 4 };

inline int worker_count() {
    if (const char* env = std::getenv("TRIGAL_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

// Run fn(i) for i in [0, count) on up to worker_count() threads.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
    const int workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

struct SolveArtifacts {
    RunStatus status = RunStatus::ok;
    std::string message;
    json report;
    SolveReport solve;
    EnergyReport energy;
};

namespace detail {

inline json report_json(const RunConfig& cfg, const SolveReport& rep, const EnergyReport& en,
                        double setup_seconds) {
    json hist = json::array();
    for (double r : rep.residual_history) hist.push_back(rep.rhs_norm > 0 ? r / rep.rhs_norm : r);
    return json{{"config", echo_config(cfg)},
                {"iterations", rep.iterations},
                {"converged", rep.converged},
                {"rhs_norm", rep.rhs_norm},
                {"relative_residual_history", hist},
                {"energies",
                 {{"e_ref", en.e_ref}, {"e_tra", en.e_tra}, {"conservation_error", en.conservation_error}}},
                {"timings",
                 {{"setup_seconds", setup_seconds},
                  {"solve_seconds", rep.wall_time},
                  {"total_seconds", setup_seconds + rep.wall_time}}}};
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    os << text;
}

inline void write_field_grid_csv(const std::filesystem::path& p, const SpectralField& u) {
    GridValues g = inverse_dft(u);
    std::ofstream os(p, std::ios::binary);
    os.precision(17);
    os << "x1,x2,re_u,abs_u\n";
    for (int l1 = -g.n / 2 + 1; l1 <= g.n / 2; ++l1)
        for (int l2 = -g.n / 2 + 1; l2 <= g.n / 2; ++l2) {
            const cd v = g.at(l1, l2);
            os << g.x1(l1) << ',' << g.x2(l2) << ',' << v.real() << ',' << std::abs(v) << '\n';
        }
}

}  // namespace detail

// Solve one configuration; write report.json (+ optional csv dumps) under
// cfg.outputs.directory when write_files is set.
inline SolveArtifacts run_solve(const RunConfig& cfg, bool write_files = true) {
    SolveArtifacts out;
    const WaveParameters w = cfg.wave();
    if (auto bad = check_wood(w)) {
        out.status = RunStatus::wood_anomaly;
        out.message = "Wood's anomaly at order " + std::to_string(*bad);
        return out;
    }
    const auto t0 = std::chrono::steady_clock::now();
    ProblemSetup setup = make_setup(w, cfg.disc(), cfg.contrast);
    const double setup_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    GmresOptions opts{cfg.gmres.tol, cfg.gmres.maxit, cfg.gmres.restart};
    out.solve = gmres_solve(setup, opts);
    out.energy = scattering_energies(setup, out.solve.solution, cfg.resolved_eval_height);
    out.report = detail::report_json(cfg, out.solve, out.energy, setup_seconds);
    if (!out.solve.converged) {
        out.status = RunStatus::no_convergence;
        out.message = "GMRES did not reach the requested tolerance";
    }
    if (write_files) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.outputs.directory);
        detail::write_text(fs::path(cfg.outputs.directory) / "report.json", out.report.dump(2) + "\n");
        if (cfg.outputs.emit_coeffs) {
            std::ofstream os(fs::path(cfg.outputs.directory) / "coeffs.csv", std::ios::binary);
            write_coeffs_csv(os, out.solve.solution);
        }
        if (cfg.outputs.emit_field_grid)
            detail::write_field_grid_csv(fs::path(cfg.outputs.directory) / "field_grid.csv",
                                         out.solve.solution);
        if (cfg.outputs.emit_kernel) {
            SpectralField kf(setup.ksm.n, setup.ksm.R, setup.ksm.alpha);
            kf.coef = setup.ksm.c;
            std::ofstream os(fs::path(cfg.outputs.directory) / "kernel_coeffs.csv", std::ios::binary);
            write_coeffs_csv(os, kf);
        }
    }
    return out;
}

struct ConvergenceRow {
    int n = 0;
    double err_h1 = 0.0, err_h05 = 0.0, err_l2 = 0.0;
    int iterations = 0;
    double seconds = 0.0;
};

struct ConvergenceResult {
    RunStatus status = RunStatus::ok;
    std::string message;
    std::vector<ConvergenceRow> rows;
    double order_h1 = 0.0, order_h05 = 0.0, order_l2 = 0.0;
    double strip_crosscheck = -1.0;  // reduced-oracle discrepancy at the reference (strips only)
};

inline ConvergenceResult run_convergence(const RunConfig& cfg, const std::vector<int>& n_list,
                                         int reference_n, bool write_files = true) {
    ConvergenceResult out;
    for (int n : n_list)
        if (reference_n <= n) throw std::invalid_argument("run_convergence: reference N must exceed every N");
    const WaveParameters w = cfg.wave();
    if (auto bad = check_wood(w)) {
        out.status = RunStatus::wood_anomaly;
        out.message = "Wood's anomaly at order " + std::to_string(*bad);
        return out;
    }
    // contrast coefficients are computed once at the reference size and
    // truncated per row (they do not depend on N beyond the index range)
    ContrastSpectrum qref = contrast_coeffs(cfg.contrast, 2 * reference_n, cfg.R);
    ProblemSetup ref_setup = make_setup(w, cfg.disc_at(reference_n), qref);
    SolveReport ref = gmres_solve(ref_setup, GmresOptions{cfg.reference_tol, cfg.gmres.maxit, cfg.gmres.restart});
    if (!ref.converged) {
        out.status = RunStatus::no_convergence;
        out.message = "reference solve did not converge";
        return out;
    }
    if (const auto* st = std::get_if<StripContrast>(&cfg.contrast)) {
        SpectralField red = strip_reduced_solve(w, st->q0, st->a, cfg.disc_at(reference_n));
        out.strip_crosscheck = relative_error(ref.solution, red, 0.0);
    }

    out.rows.assign(n_list.size(), ConvergenceRow{});
    std::vector<std::string> row_errors(n_list.size());
    parallel_for(int(n_list.size()), [&](int i) {
        try {
            const int n = n_list[i];
            ContrastSpectrum qcut;
            qcut.m = 2 * n;
            qcut.R = cfg.R;
            {
                SpectralField qfull(qref.m, qref.R, 0.0);
                qfull.coef = qref.c;
                qcut.c = truncate(qfull, 2 * n).coef;
            }
            ProblemSetup setup = make_setup(w, cfg.disc_at(n), qcut);
            SolveReport rep = gmres_solve(setup, GmresOptions{cfg.gmres.tol, cfg.gmres.maxit, cfg.gmres.restart});
            ConvergenceRow row;
            row.n = n;
            row.err_h1 = relative_error(rep.solution, ref.solution, 1.0);
            row.err_h05 = relative_error(rep.solution, ref.solution, 0.5);
            row.err_l2 = relative_error(rep.solution, ref.solution, 0.0);
            row.iterations = rep.iterations;
            row.seconds = rep.wall_time;
            out.rows[i] = row;
        } catch (const std::exception& e) {
            row_errors[i] = e.what();
        }
    });
    for (const auto& msg : row_errors)
        if (!msg.empty()) throw std::runtime_error("convergence row failed: " + msg);

    std::vector<std::pair<double, double>> h1, h05, l2;
    for (const auto& r : out.rows) {
        h1.emplace_back(r.n, r.err_h1);
        h05.emplace_back(r.n, r.err_h05);
        l2.emplace_back(r.n, r.err_l2);
    }
    out.order_h1 = estimate_order(h1);
    out.order_h05 = estimate_order(h05);
    out.order_l2 = estimate_order(l2);

    if (write_files) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.outputs.directory);
        std::ostringstream csv;
        csv.precision(17);
        csv << "N,err_H1,err_H05,err_L2,iterations,seconds\n";
        for (const auto& r : out.rows)
            csv << r.n << ',' << r.err_h1 << ',' << r.err_h05 << ',' << r.err_l2 << ',' << r.iterations
                << ',' << r.seconds << '\n';
        detail::write_text(fs::path(cfg.outputs.directory) / "convergence.csv", csv.str());
        json orders{{"order_H1", out.order_h1},
                    {"order_H05", out.order_h05},
                    {"order_L2", out.order_l2},
                    {"reference_N", reference_n},
                    {"reference_iterations", ref.iterations}};
        if (out.strip_crosscheck >= 0.0) orders["strip_reduced_crosscheck"] = out.strip_crosscheck;
        detail::write_text(fs::path(cfg.outputs.directory) / "orders.json", orders.dump(2) + "\n");
    }
    return out;
}

struct SweepRow {
    double theta = 0.0;
    double e_ref = 0.0, e_tra = 0.0, conservation_error = 0.0;
    int iterations = 0;
    std::string status = "ok";
};

// Independent angles solved concurrently; contrast coefficients are shared
// across the sweep (they do not depend on the angle). Angles landing on a
// Wood's anomaly are nudged by the scan tolerance and noted in-row.
inline std::vector<SweepRow> run_energy_sweep(const RunConfig& cfg, double theta_min, double theta_max,
                                              int count, bool write_files = true) {
    if (count < 1) throw std::invalid_argument("run_energy_sweep: count must be >= 1");
    ContrastSpectrum qhat = contrast_coeffs(cfg.contrast, 2 * cfg.n, cfg.R);
    std::vector<SweepRow> rows(count);
    parallel_for(count, [&](int i) {
        SweepRow& row = rows[i];
        double theta = count == 1 ? theta_min : theta_min + (theta_max - theta_min) * i / (count - 1);
        row.theta = theta;
        try {
            WaveParameters w(cfg.wavenumber, theta);
            for (int tries = 0; check_wood(w) && tries < 8; ++tries) {
                theta += 64.0 * wood_default_tol(cfg.wavenumber);
                w = WaveParameters(cfg.wavenumber, theta);
                row.status = "nudged off a Wood's anomaly";
            }
            if (check_wood(w)) {
                row.status = "wood_anomaly";
                return;
            }
            row.theta = theta;
            ProblemSetup setup = make_setup(w, cfg.disc(), qhat);
            SolveReport rep = gmres_solve(setup, GmresOptions{cfg.gmres.tol, cfg.gmres.maxit, cfg.gmres.restart});
            if (!rep.converged) {
                row.status = "no_convergence";
                return;
            }
            EnergyReport en = scattering_energies(setup, rep.solution, cfg.resolved_eval_height);
            row.e_ref = en.e_ref;
            row.e_tra = en.e_tra;
            row.conservation_error = en.conservation_error;
            row.iterations = rep.iterations;
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
        }
    });
    if (write_files) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.outputs.directory);
        std::ostringstream csv;
        csv.precision(17);
        csv << "theta,e_ref,e_tra,conservation_error,iterations,status\n";
        for (const auto& r : rows)
            csv << r.theta << ',' << r.e_ref << ',' << r.e_tra << ',' << r.conservation_error << ','
                << r.iterations << ',' << r.status << '\n';
        detail::write_text(fs::path(cfg.outputs.directory) / "sweep.csv", csv.str());
    }
    return rows;
}

// ---- validate: the oracle suite --------------------------------------

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

namespace checks {

inline CheckResult make(const std::string& name, double measured, double threshold) {
    return CheckResult{name, measured, threshold, measured <= threshold};
}

inline CheckResult dft_roundtrip() {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridValues g(16, 2.0, 0.37);
    for (auto& v : g.val) v = cd{dist(rng), dist(rng)};
    GridValues back = inverse_dft(forward_dft(g));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.val.size(); ++i) worst = std::max(worst, std::abs(back.val[i] - g.val[i]));
    return make("dft_roundtrip", worst, 1e-12);
}

inline CheckResult dft_direct_sum() {
    const int n = 8;
    const double R = 2.0, alpha = 0.3;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridValues g(n, R, alpha);
    for (auto& v : g.val) v = cd{dist(rng), dist(rng)};
    SpectralField u = forward_dft(g);
    double worst = 0.0;
    for (int j1 = -n / 2 + 1; j1 <= n / 2; ++j1)
        for (int j2 = -n / 2 + 1; j2 <= n / 2; ++j2) {
            cd acc{};
            for (int l1 = -n / 2 + 1; l1 <= n / 2; ++l1)
                for (int l2 = -n / 2 + 1; l2 <= n / 2; ++l2)
                    acc += g.at(l1, l2) *
                           std::exp(cd{0.0, -2.0 * pi * ((j1 + alpha) * l1 + double(j2) * l2) / n});
            acc *= std::sqrt(4.0 * pi * R) / (double(n) * n);
            worst = std::max(worst, std::abs(acc - u.at(j1, j2)));
        }
    return make("dft_direct_sum", worst / coef_norm(u.coef), 1e-12);
}

inline CheckResult product_rule() {
    const int n = 8;
    const double R = 2.0;
    WaveParameters w(pi / 2, pi / 4);
    ContrastSpectrum qhat = contrast_coeffs(stepped_strip_contrast(), 2 * n, R);
    Discretization disc{n, R, 0.7875};
    ProblemSetup setup = make_setup(w, disc, qhat);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SpectralField u(n, R, w.alpha);
    for (auto& c : u.coef) c = cd{dist(rng), dist(rng)};
    auto [p1, p2] = multiply_contrast_gradient(u, setup);
    SpectralField d1 = direct_product_coeffs(u, qhat, 1);
    SpectralField d2 = direct_product_coeffs(u, qhat, 2);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.coef.size(); ++i) {
        worst = std::max(worst, std::abs(p1.coef[i] - d1.coef[i]));
        worst = std::max(worst, std::abs(p2.coef[i] - d2.coef[i]));
    }
    return make("product_rule_vs_convolution", worst, 1e-10);
}

inline CheckResult dense_vs_gmres() {
    const int n = 8;
    WaveParameters w(pi / 2, pi / 4);
    Discretization disc{n, 2.0, 0.7875};
    ProblemSetup setup = make_setup(w, disc, StripContrast{2.0, 0.75});
    Eigen::MatrixXcd A = dense_operator(setup);
    SpectralField rhs = assemble_rhs(setup);
    Eigen::VectorXcd b(rhs.coef.size());
    for (std::size_t i = 0; i < rhs.coef.size(); ++i) b(long(i)) = rhs.coef[i];
    Eigen::VectorXcd xd = A.partialPivLu().solve(b);
    SolveReport rep = gmres_solve(setup, GmresOptions{1e-12, 200, std::nullopt});
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rhs.coef.size(); ++i) {
        num += std::norm(rep.solution.coef[i] - xd(long(i)));
        den += std::norm(xd(long(i)));
    }
    return make("gmres_vs_dense", std::sqrt(num / den), 1e-8);
}

inline CheckResult resonance_continuity() {
    // resonance at k^2 = alpha^2 + (j2 pi / rho)^2, j2 = 2, rho = 1
    const double alpha = 0.3, rho = 1.0;
    const int j2 = 2;
    const double k2res = alpha * alpha + (j2 * pi / rho) * (j2 * pi / rho);
    const cd at_res = kernel_coeff(0, j2, std::sqrt(k2res), alpha, rho);
    double worst = 0.0;
    for (double d : {1e-8, -1e-8, 1e-6, -1e-6}) {
        const cd nearby = kernel_coeff(0, j2, std::sqrt(k2res + d), alpha, rho);
        worst = std::max(worst, std::abs(nearby - at_res));
    }
    return make("kernel_resonance_continuity", worst, 1e-5);
}

inline CheckResult cutoff_flatness() {
    const double rho = 0.7875, R = 2.0;
    double worst = 0.0;
    for (double x0 : {R, 2 * rho, -R, -2 * rho})
        for (int order : {1, 2, 3})
            worst = std::max(worst, std::abs(cutoff_derivative(x0, rho, R, order)));
    return make("cutoff_boundary_flatness", worst, 1e-10);
}

inline CheckResult strip_exact_energy() {
    WaveParameters w(pi / 2, pi / 4);
    StripExact ex = strip_exact(w, 2.0, 0.75);
    const double miss = std::abs(std::norm(ex.r) + std::norm(ex.tau) - 1.0);
    return make("strip_exact_energy_identity", std::max(miss, ex.residual), 1e-12);
}

inline CheckResult reduced_vs_full(int n = 64) {
    WaveParameters w(pi / 2, pi / 4);
    Discretization disc{n, 2.0, 0.7875};
    ProblemSetup setup = make_setup(w, disc, StripContrast{2.0, 0.75});
    SolveReport rep = gmres_solve(setup, GmresOptions{1e-10, 300, std::nullopt});
    SpectralField red = strip_reduced_solve(w, 2.0, 0.75, disc);
    return make("reduced_vs_full_strip", relative_error(rep.solution, red, 0.0), 1e-8);
}

inline CheckResult rayleigh_vs_exact() {
    // reduced-solver reflection amplitude approaches the analytic one
    WaveParameters w(pi / 2, pi / 4);
    const double q0 = 2.0, a = 0.75, R = 2.0, h = 0.7875;
    StripExact ex = strip_exact(w, q0, a);
    const double beta0 = w.k * std::sin(w.theta);
    const cd expected = ex.r * std::exp(cd{0.0, beta0 * (h - a)});
    double prev = 1e300, worst_ratio = 0.0, last = 0.0;
    for (int n : {64, 256, 1024}) {
        SpectralField u = strip_reduced_solve(w, q0, a, Discretization{n, R, h});
        const cd got = rayleigh_coeffs(u, h, +1)[mode_slot(0, n)];
        const double err = std::abs(got - expected) / std::abs(expected);
        worst_ratio = std::max(worst_ratio, err / prev);
        prev = err;
        last = err;
    }
    CheckResult c = make("rayleigh_amplitude_vs_exact", last, 2e-2);
    c.pass = c.pass && worst_ratio < 1.0;
    return c;
}

inline CheckResult zero_contrast_conservation() {
    const int n = 32;
    WaveParameters w(pi / 2, pi / 4);
    Discretization disc{n, 2.0, 0.7875};
    ProblemSetup setup = make_setup(w, disc, StripContrast{0.0, 0.75});
    SolveReport rep = gmres_solve(setup, GmresOptions{1e-5, 50, std::nullopt});
    EnergyReport en = scattering_energies(setup, rep.solution, 0.7875);
    const double worst = std::max({en.conservation_error, coef_norm(rep.solution.coef), en.e_ref});
    return make("zero_contrast_conservation", worst, 1e-14);
}

inline CheckResult strip_conservation() {
    const int n = 512;
    WaveParameters w(pi / 2, pi / 4);
    Discretization disc{n, 2.0, 0.7875};
    ProblemSetup setup = make_setup(w, disc, StripContrast{2.0, 0.75});
    SolveReport rep = gmres_solve(setup, GmresOptions{1e-8, 200, std::nullopt});
    EnergyReport en = scattering_energies(setup, rep.solution, 0.7875);
    return make("strip_conservation_error", en.conservation_error, 1e-3);
}

}  // namespace checks

inline std::vector<CheckResult> run_validate() {
    return {checks::dft_roundtrip(),      checks::dft_direct_sum(),    checks::product_rule(),
            checks::dense_vs_gmres(),     checks::resonance_continuity(), checks::cutoff_flatness(),
            checks::strip_exact_energy(), checks::reduced_vs_full(),   checks::rayleigh_vs_exact(),
            checks::zero_contrast_conservation(), checks::strip_conservation()};
}

}  // namespace trigal
