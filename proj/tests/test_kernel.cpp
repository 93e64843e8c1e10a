#include <catch2/catch_amalgamated.hpp>

#include "trigal/kernel.hpp"

using namespace trigal;

TEST_CASE("vertical wavenumbers beta_j") {
    WaveParameters w(1.0, pi / 2);  // alpha = 0
    CHECK(std::abs(beta(0, w) - cd{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(beta(2, w) - cd{0.0, std::sqrt(3.0)}) < 1e-14);

    for (double k : {0.7, 1.0, 2.5})
        for (double theta : {0.3, pi / 4, 1.9}) {
            WaveParameters wp(k, theta);
            CHECK(std::abs(beta(0, wp) - cd{k * std::sin(theta), 0.0}) < 1e-13);
            for (int j = -6; j <= 6; ++j) CHECK(beta(j, wp).imag() >= 0.0);
        }
}

TEST_CASE("Wood's anomaly scan") {
    // safe configuration: scan |k^2 - (j + k cos t)^2| by hand over j in [-3,3]
    WaveParameters safe(pi / 2, pi / 4);
    double closest = 1e300;
    for (int j = -3; j <= 3; ++j)
        closest = std::min(closest, std::abs(safe.k * safe.k - std::pow(j + safe.alpha, 2)));
    REQUIRE(closest > 1e-6);
    CHECK(!check_wood(safe));

    // k = 2.5 at theta = arccos(1 - 1/2.5): alpha_1 = 1 + 1.5 = 2.5 = k
    WaveParameters wood(2.5, std::acos(1.0 - 1.0 / 2.5));
    auto hit = check_wood(wood);
    REQUIRE(hit.has_value());
    CHECK(std::abs(wood.k * wood.k - std::pow(*hit + wood.alpha, 2)) <= wood_default_tol(wood.k));

    // k^2 = alpha_0^2 exactly
    WaveParameters grazing;
    grazing.k = 1.0;
    grazing.alpha = 1.0;
    auto hit0 = check_wood(grazing);
    REQUIRE(hit0.has_value());
    CHECK(*hit0 == 0);
}

TEST_CASE("kernel coefficient, non-resonant value") {
    // j = (0,0), k = 1, alpha = 0.5, rho = 1: D = 0.75, beta = sqrt(0.75)
    const cd got = kernel_coeff(0, 0, 1.0, 0.5, 1.0);
    const cd expect = (std::exp(cd{0.0, std::sqrt(0.75)}) - 1.0) / (std::sqrt(4.0 * pi) * 0.75);
    CHECK(std::abs(got - expect) < 1e-15);
}

TEST_CASE("kernel coefficient, resonant branch and continuity") {
    const double alpha = 0.3, rho = 1.0;
    const int j2 = 2;
    const double k2res = alpha * alpha + std::pow(j2 * pi / rho, 2);
    const double kres = std::sqrt(k2res);

    const cd at_res = kernel_coeff(0, j2, kres, alpha, rho);
    CHECK(std::abs(at_res - iu / 8.0 * std::pow(pi, -1.5)) < 1e-15);

    // sweep k^2 through the resonance; removable singularity
    for (double d : {1e-8, -1e-8}) {
        const cd nearby = kernel_coeff(0, j2, std::sqrt(k2res + d), alpha, rho);
        CHECK(std::abs(nearby - at_res) < 1e-6);
    }
    for (double d : {1e-6, -1e-6}) {
        const cd nearby = kernel_coeff(0, j2, std::sqrt(k2res + d), alpha, rho);
        CHECK(std::abs(nearby - at_res) < 1e-5);
    }

    // negative j2: the limit from the non-resonant side picks i/(4|j2|)
    const double k2res_m = alpha * alpha + std::pow(-3 * pi / rho, 2);
    const cd res_m = kernel_coeff(0, -3, std::sqrt(k2res_m), alpha, rho);
    const cd lim_m = kernel_coeff(0, -3, std::sqrt(k2res_m + 1e-9), alpha, rho);
    CHECK(std::abs(res_m - lim_m) < 1e-6);
    CHECK(res_m.imag() > 0.0);

    // resonance with j2 = 0 is a Wood's anomaly, not a removable point
    CHECK_THROWS_AS(kernel_coeff(0, 0, 0.3, 0.3, 1.0), std::logic_error);
}

TEST_CASE("kernel coefficients are even in j2") {
    for (int j1 : {-3, 0, 2})
        for (int j2 : {1, 2, 5, 9}) {
            const cd a = kernel_coeff(j1, j2, pi / 2, 1.11, 2.0);
            const cd b = kernel_coeff(j1, -j2, pi / 2, 1.11, 2.0);
            CHECK(a == b);
        }
}

TEST_CASE("cutoff profile") {
    const double rho = 0.7875, R = 2.0;
    CHECK(cutoff(0.0, rho, R) == 1.0);
    CHECK(cutoff(2 * rho, rho, R) == 1.0);
    CHECK(cutoff(R, rho, R) == 0.0);
    CHECK(cutoff((2 * rho + R) / 2, rho, R) == Catch::Approx(0.5).margin(1e-15));
    // periodic, even, bounded
    for (double x : {0.1, 0.9, 1.7, 1.99}) {
        CHECK(cutoff(x, rho, R) == Catch::Approx(cutoff(-x, rho, R)).margin(1e-15));
        CHECK(cutoff(x + 2 * R, rho, R) == Catch::Approx(cutoff(x, rho, R)).margin(1e-12));
        CHECK(cutoff(x, rho, R) >= 0.0);
        CHECK(cutoff(x, rho, R) <= 1.0);
    }
    // three vanishing derivatives at both junctions
    for (double x0 : {R, 2 * rho, -R, -2 * rho})
        for (int order : {1, 2, 3}) CHECK(std::abs(cutoff_derivative(x0, rho, R, order)) < 1e-10);
    CHECK(cutoff_derivative(0.5, rho, R, 1) == 0.0);  // plateau interior

    // the closed-form derivatives agree with finite differences of chi at
    // their own accuracy (h^2 truncation)
    const double h = 1e-4, xm = (2 * rho + R) / 2;
    auto chi = [&](double x) { return cutoff(x, rho, R); };
    CHECK(std::abs((chi(xm + h) - chi(xm - h)) / (2 * h) - cutoff_derivative(xm, rho, R, 1)) < 1e-5);
    CHECK(std::abs((chi(xm + h) - 2 * chi(xm) + chi(xm - h)) / (h * h) -
                   cutoff_derivative(xm, rho, R, 2)) < 1e-4);
    CHECK_THROWS_AS(cutoff(0.0, 1.0, 2.0), std::invalid_argument);  // 2 rho = R
}

TEST_CASE("cutoff coefficients") {
    const double rho = 0.7875, R = 2.0;
    const auto chat = cutoff_coeffs(rho, R, 256);

    // mean: integral of chi is 2 rho + R by smoothstep midpoint symmetry
    CHECK(chat[0] == Catch::Approx((2 * rho + R) / std::sqrt(4 * pi * R)).epsilon(1e-12));

    // C^3 regularity: at least 4th-order decay
    CHECK(std::abs(chat[64]) / std::abs(chat[32]) <= std::pow(2.0, -3.5));

    // truncated series reconstructs chi: chi(x) ~ sqrt(pi/R) [chat(0) + 2 sum chat(p) cos(p pi x/R)]
    auto reconstruct = [&](double x) {
        double s = chat[0];
        for (int p = 1; p <= 256; ++p) s += 2.0 * chat[p] * std::cos(p * pi * x / R);
        return s * std::sqrt(pi / R);
    };
    for (double x : {0.0, 2 * rho, (2 * rho + R) / 2, R * (1 - 1e-3)})
        CHECK(std::abs(reconstruct(x) - cutoff(x, rho, R)) < 1e-6);
}

TEST_CASE("smoothed spectrum with the cutoff forced to one is the raw kernel") {
    Discretization disc{16, 2.0, 0.7875};
    WaveParameters w(pi / 2, pi / 4);
    KernelSpectrum ks = smoothed_kernel_spectrum(disc, w, /*unit_cutoff=*/true);
    for (int j1 = -7; j1 <= 8; ++j1)
        for (int j2 = -7; j2 <= 8; ++j2)
            CHECK(std::abs(ks.at(j1, j2) - kernel_coeff(j1, j2, w.k, w.alpha, disc.R)) == 0.0);
}

TEST_CASE("smoothed spectrum matches a wide-window brute-force convolution") {
    const int n = 32;
    Discretization disc{n, 2.0, 0.8};
    WaveParameters w(pi / 2, pi / 4);
    KernelSpectrum ks = smoothed_kernel_spectrum(disc, w);

    const int W = 3200;
    const auto chat = cutoff_coeffs(disc.rho, disc.R, W + n / 2 + 1);
    double worst = 0.0;
    for (int j1 : {-7, 0, 3, 16})
        for (int j2 = -n / 2 + 1; j2 <= n / 2; ++j2) {
            cd acc{};
            for (int m = -W; m <= W; ++m) {
                const int off = std::abs(j2 - m);
                acc += kernel_coeff(j1, m, w.k, w.alpha, disc.R) * chat[off];
            }
            acc *= std::sqrt(pi / disc.R);
            worst = std::max(worst, std::abs(acc - ks.at(j1, j2)) / std::abs(acc));
        }
    CHECK(worst < 1e-11);

    // even in j2, and decaying outward
    for (int j1 : {-7, 0, 3})
        for (int j2 = 1; j2 < n / 2; ++j2) CHECK(ks.at(j1, j2) == ks.at(j1, -j2));
    double inner = 0.0, outer = 0.0;
    for (int j = -n / 2 + 1; j <= n / 2; ++j) {
        inner = std::max({inner, std::abs(ks.at(j, 1)), std::abs(ks.at(1, j))});
        outer = std::max({outer, std::abs(ks.at(j, n / 2)), std::abs(ks.at(n / 2, j))});
    }
    CHECK(outer <= inner);
}

TEST_CASE("smoothed spectrum entries do not depend on the truncation") {
    WaveParameters w(pi / 2, pi / 4);
    KernelSpectrum small = smoothed_kernel_spectrum(Discretization{8, 2.0, 0.8}, w);
    KernelSpectrum big = smoothed_kernel_spectrum(Discretization{16, 2.0, 0.8}, w);
    for (int j1 = -3; j1 <= 4; ++j1)
        for (int j2 = -3; j2 <= 4; ++j2)
            CHECK(std::abs(small.at(j1, j2) - big.at(j1, j2)) < 1e-14);
}

TEST_CASE("smoothed spectrum refuses Wood configurations") {
    Discretization disc{8, 2.0, 0.8};
    WaveParameters wood(2.5, std::acos(1.0 - 1.0 / 2.5));
    CHECK_THROWS_AS(smoothed_kernel_spectrum(disc, wood), std::invalid_argument);
}
