// Command-line front end: solve, convergence, energy-sweep, validate.
//
// Exit codes: 0 success, 1 failed validate check, 2 invalid configuration,
// 3 Wood's anomaly, 4 GMRES non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "trigal/runner.hpp"

namespace {

trigal::RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return trigal::parse_config_string(ss.str());
}

std::vector<int> parse_n_list(const std::string& arg) {
    std::vector<int> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.empty()) throw std::invalid_argument("empty N list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral volume-integral solver for TM scattering from periodic gratings"};
    app.require_subcommand(1);

    std::string config_path, n_list_arg = "64,128,256,512";
    int ref_n = 1536, sweep_count = 200;
    double theta_min = 0.2, theta_max = 1.2;

    auto* solve = app.add_subcommand("solve", "solve one configuration and write report.json");
    solve->add_option("config", config_path, "JSON configuration file")->required();

    auto* conv = app.add_subcommand("convergence", "self-convergence study against a reference solve");
    conv->add_option("config", config_path, "JSON configuration file")->required();
    conv->add_option("--N", n_list_arg, "comma-separated truncation list");
    conv->add_option("--ref", ref_n, "reference truncation");

    auto* sweep = app.add_subcommand("energy-sweep", "energies over a grid of incidence angles");
    sweep->add_option("config", config_path, "JSON configuration file")->required();
    sweep->add_option("--theta-min", theta_min, "first angle (radians)");
    sweep->add_option("--theta-max", theta_max, "last angle (radians)");
    sweep->add_option("--count", sweep_count, "number of angles");

    auto* validate = app.add_subcommand("validate", "run the built-in oracle suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            const auto results = trigal::run_validate();
            bool all = true;
            std::printf("%-34s %12s %12s  %s\n", "check", "measured", "threshold", "status");
            for (const auto& r : results) {
                std::printf("%-34s %12.3e %12.3e  %s\n", r.name.c_str(), r.measured, r.threshold,
                            r.pass ? "pass" : "FAIL");
                all = all && r.pass;
            }
            return all ? 0 : 1;
        }

        trigal::RunConfig cfg;
        try {
            cfg = load_config(config_path);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
        for (const auto& warning : cfg.warnings) std::cerr << "warning: " << warning << "\n";

        if (solve->parsed()) {
            auto art = trigal::run_solve(cfg);
            if (art.status == trigal::RunStatus::wood_anomaly) {
                std::cerr << art.message << "\n";
                return 3;
            }
            std::cout << "iterations " << art.solve.iterations << ", E_ref " << art.energy.e_ref
                      << ", E_tra " << art.energy.e_tra << ", conservation error "
                      << art.energy.conservation_error << "\n";
            if (art.status == trigal::RunStatus::no_convergence) {
                std::cerr << art.message << " (report written)\n";
                return 4;
            }
            return 0;
        }
        if (conv->parsed()) {
            auto res = trigal::run_convergence(cfg, parse_n_list(n_list_arg), ref_n);
            if (res.status == trigal::RunStatus::wood_anomaly) {
                std::cerr << res.message << "\n";
                return 3;
            }
            if (res.status == trigal::RunStatus::no_convergence) {
                std::cerr << res.message << "\n";
                return 4;
            }
            std::cout << "fitted orders: H1 " << res.order_h1 << ", H1/2 " << res.order_h05 << ", L2 "
                      << res.order_l2 << "\n";
            return 0;
        }
        // energy sweep
        auto rows = trigal::run_energy_sweep(cfg, theta_min, theta_max, sweep_count);
        int failures = 0;
        for (const auto& r : rows)
            if (r.status != "ok" && r.status.rfind("nudged", 0) != 0) ++failures;
        std::cout << rows.size() << " angles, " << failures << " failed rows\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
