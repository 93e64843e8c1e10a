#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "trigal/field.hpp"

using namespace trigal;

namespace {

GridValues random_grid(int n, double R, double alpha, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridValues g(n, R, alpha);
    for (auto& v : g.val) v = cd{dist(rng), dist(rng)};
    return g;
}

SpectralField random_field(int n, double R, double alpha, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SpectralField u(n, R, alpha);
    for (auto& c : u.coef) c = cd{dist(rng), dist(rng)};
    return u;
}

cd basis_value(int j1, int j2, double x1, double x2, double R, double alpha) {
    return std::exp(cd{0.0, (j1 + alpha) * x1 + j2 * pi * x2 / R}) / std::sqrt(4.0 * pi * R);
}

// O(N^4) reference transform
SpectralField forward_direct(const GridValues& g) {
    SpectralField u(g.n, g.R, g.alpha);
    for (int j1 = -g.n / 2 + 1; j1 <= g.n / 2; ++j1)
        for (int j2 = -g.n / 2 + 1; j2 <= g.n / 2; ++j2) {
            cd acc{};
            for (int l1 = -g.n / 2 + 1; l1 <= g.n / 2; ++l1)
                for (int l2 = -g.n / 2 + 1; l2 <= g.n / 2; ++l2)
                    acc += g.at(l1, l2) *
                           std::exp(cd{0.0, -2.0 * pi * ((j1 + g.alpha) * l1 + double(j2) * l2) / g.n});
            u.at(j1, j2) = acc * std::sqrt(4.0 * pi * g.R) / (double(g.n) * g.n);
        }
    return u;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

TEST_CASE("forward transform of a constant hits the zero mode only") {
    const double R = 2.0;
    GridValues g(8, R, 0.0);
    const cd c{0.7, -0.2};
    for (auto& v : g.val) v = c;
    SpectralField u = forward_dft(g);
    CHECK(std::abs(u.at(0, 0) - c * std::sqrt(4.0 * pi * R)) < 1e-13);
    u.at(0, 0) = 0.0;
    CHECK(coef_norm(u.coef) < 1e-13);
}

TEST_CASE("forward transform reproduces every basis vector") {
    const int n = 8;
    const double R = 1.7, alpha = 0.3;
    for (int j1 = -n / 2 + 1; j1 <= n / 2; ++j1)
        for (int j2 = -n / 2 + 1; j2 <= n / 2; ++j2) {
            GridValues g(n, R, alpha);
            for (int l1 = -n / 2 + 1; l1 <= n / 2; ++l1)
                for (int l2 = -n / 2 + 1; l2 <= n / 2; ++l2)
                    g.at(l1, l2) = basis_value(j1, j2, g.x1(l1), g.x2(l2), R, alpha);
            SpectralField u = forward_dft(g);
            CHECK(std::abs(u.at(j1, j2) - 1.0) < 1e-12);
            u.at(j1, j2) = 0.0;
            CHECK(coef_norm(u.coef) < 1e-12);
        }
}

TEST_CASE("fft path matches the direct double sum") {
    for (int n : {4, 8}) {
        GridValues g = random_grid(n, 2.0, 0.3, 11 + n);
        SpectralField fast = forward_dft(g);
        SpectralField slow = forward_direct(g);
        CHECK(max_abs_diff(fast.coef, slow.coef) / coef_norm(slow.coef) < 1e-12);
    }
}

TEST_CASE("inverse of the zero-mode unit vector is flat") {
    const double R = 2.0;
    SpectralField u(8, R, 0.0);
    u.at(0, 0) = 1.0;
    GridValues g = inverse_dft(u);
    for (const auto& v : g.val) CHECK(std::abs(v - 1.0 / std::sqrt(4.0 * pi * R)) < 1e-14);
}

TEST_CASE("transform pair round-trips at 1e-12") {
    GridValues g = random_grid(16, 2.0, 0.52, 5);
    GridValues back = inverse_dft(forward_dft(g));
    CHECK(max_abs_diff(g.val, back.val) < 1e-12);

    SpectralField u = random_field(16, 2.0, 0.52, 6);
    SpectralField ub = forward_dft(inverse_dft(u));
    CHECK(max_abs_diff(u.coef, ub.coef) < 1e-12);
}

TEST_CASE("grid quadrature of |g|^2 matches the coefficient norm") {
    const int n = 16;
    const double R = 2.0;
    GridValues g = random_grid(n, R, 0.3, 9);
    SpectralField u = forward_dft(g);
    double coef2 = 0.0;
    for (const auto& c : u.coef) coef2 += std::norm(c);
    double grid2 = 0.0;
    for (const auto& v : g.val) grid2 += std::norm(v);
    grid2 *= (2.0 * pi / n) * (2.0 * R / n);  // cell area
    CHECK(std::abs(coef2 - grid2) / grid2 < 1e-12);
}

TEST_CASE("embedding copies, pads and preserves the norm") {
    SpectralField u(4, 2.0, 0.0);
    u.at(1, -1) = 1.0;
    SpectralField e = embed(u, 8);
    CHECK(std::abs(e.at(1, -1) - 1.0) == 0.0);
    e.at(1, -1) = 0.0;
    CHECK(coef_norm(e.coef) == 0.0);

    SpectralField r = random_field(8, 2.0, 0.1, 21);
    SpectralField er = embed(r, 12);
    CHECK(coef_norm(er.coef) == coef_norm(r.coef));
    CHECK(max_abs_diff(truncate(er, 8).coef, r.coef) == 0.0);
}

TEST_CASE("truncation") {
    SpectralField u = random_field(8, 2.0, 0.4, 3);
    CHECK(max_abs_diff(truncate(embed(u, 24), 8).coef, u.coef) == 0.0);

    SpectralField hi(8, 2.0, 0.0);
    hi.at(4, 4) = 1.0;  // outside Z2_4
    hi.at(-3, 0) = 2.0;
    CHECK(coef_norm(truncate(hi, 4).coef) == 0.0);

    SpectralField t = truncate(u, 4);
    for (int j1 = -1; j1 <= 2; ++j1)
        for (int j2 = -1; j2 <= 2; ++j2) CHECK(t.at(j1, j2) == u.at(j1, j2));
}

TEST_CASE("embed and truncate are mutually adjoint") {
    SpectralField u = random_field(4, 2.0, 0.0, 31);
    SpectralField v = random_field(8, 2.0, 0.0, 32);
    SpectralField eu = embed(u, 8);
    SpectralField rv = truncate(v, 4);
    cd lhs{}, rhs{};
    for (std::size_t i = 0; i < eu.coef.size(); ++i) lhs += std::conj(eu.coef[i]) * v.coef[i];
    for (std::size_t i = 0; i < u.coef.size(); ++i) rhs += std::conj(u.coef[i]) * rv.coef[i];
    CHECK(lhs == rhs);
}

TEST_CASE("derivative multipliers") {
    auto [a0, b0] = derivative_multiplier(0, 0, 0.0, 2.0);
    CHECK(a0 == cd{});
    CHECK(b0 == cd{});
    auto [a1, b1] = derivative_multiplier(2, 1, 0.5, 2.0);
    CHECK(std::abs(a1 - cd{0.0, 2.5}) == 0.0);
    CHECK(std::abs(b1 - cd{0.0, pi / 2}) == 0.0);
}

TEST_CASE("spectral derivative of a basis mode matches the analytic one") {
    const int n = 16;
    const double R = 2.0, alpha = 0.3;
    const int j1 = 3, j2 = -5;
    SpectralField u(n, R, alpha);
    const auto [w1, w2] = derivative_multiplier(j1, j2, alpha, R);
    u.at(j1, j2) = w1;
    GridValues g = inverse_dft(u);
    for (int l1 = -n / 2 + 1; l1 <= n / 2; ++l1)
        for (int l2 = -n / 2 + 1; l2 <= n / 2; ++l2) {
            const cd expect = w1 * basis_value(j1, j2, g.x1(l1), g.x2(l2), R, alpha);
            CHECK(std::abs(g.at(l1, l2) - expect) < 1e-12);
        }
    CHECK(std::abs(w2 - iu * (j2 * pi / R)) == 0.0);
}

TEST_CASE("Fourier-side Sobolev norms") {
    SpectralField u = random_field(8, 2.0, 0.0, 77);
    CHECK(sobolev_norm(u, 0.0) == Catch::Approx(coef_norm(u.coef)).epsilon(1e-14));

    SpectralField one(16, 2.0, 0.0);
    one.at(3, 4) = 1.0;
    CHECK(sobolev_norm(one, 1.0) == Catch::Approx(std::sqrt(26.0)).epsilon(1e-14));

    const double n0 = sobolev_norm(u, 0.0), n05 = sobolev_norm(u, 0.5), n1 = sobolev_norm(u, 1.0);
    CHECK(n1 >= n05);
    CHECK(n05 >= n0);
    CHECK_THROWS_AS(sobolev_norm(u, -0.5), std::invalid_argument);
}

TEST_CASE("coefficient csv round-trip") {
    SpectralField u = random_field(6, 2.0, 0.25, 99);
    std::stringstream ss;
    write_coeffs_csv(ss, u);
    SpectralField back = read_coeffs_csv(ss, u.R, u.alpha);
    REQUIRE(back.n == u.n);
    CHECK(max_abs_diff(back.coef, u.coef) == 0.0);
}

TEST_CASE("discretization invariants") {
    CHECK_THROWS_AS((Discretization{6, 2.0, 1.2}.validate()), std::invalid_argument);  // 2 rho > R
    CHECK_THROWS_AS((Discretization{5, 2.0, 0.5}.validate()), std::invalid_argument);  // odd n
    CHECK_THROWS_AS((Discretization{6, 2.0, 1.0}.validate()), std::invalid_argument);  // 2 rho = R, strict
    CHECK_NOTHROW((Discretization{6, 2.0, 1.0, 0.0, true}.validate()));                // tight box override
    CHECK_NOTHROW((Discretization{6, 2.0, 0.9}.validate()));

    // Z2_n has exactly n^2 members and the slot map is a bijection
    const int n = 8;
    std::vector<int> hits(n * n, 0);
    int count = 0;
    for (int j1 = -n / 2 + 1; j1 <= n / 2; ++j1)
        for (int j2 = -n / 2 + 1; j2 <= n / 2; ++j2) {
            ++hits[flat_index(j1, j2, n)];
            ++count;
            CHECK(slot_mode(mode_slot(j1, n), n) == j1);
        }
    CHECK(count == n * n);
    for (int h : hits) CHECK(h == 1);
}
