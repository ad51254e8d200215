#include <doctest.h>

#include <cmath>
#include <vector>

#include "diamond/queueing.hpp"

using namespace diamond;

TEST_CASE("trigger probabilities") {
    auto p = px_py({15, 15, 3, 2}, 16);
    CHECK(p.p_x == doctest::Approx(60.0 / 512 / 64).epsilon(1e-12));
    CHECK(p.p_x == doctest::Approx(0.0018311).epsilon(1e-4));
    CHECK(p.p_y == doctest::Approx(60.0 / 512 * 9 / 256).epsilon(1e-12));
    CHECK(p.p_y == doctest::Approx(0.0041199).epsilon(1e-4));
    CHECK(p.p() == p.p_x + p.p_y);
    CHECK(px_py({1, 1, 1, 16}, 16).p_x == doctest::Approx(0.5));
}

TEST_CASE("per-relay probability by Monte Carlo") {
    auto part = build_partition(6, 16);
    Thresholds thr{15, 15, 3, 2};
    Rng rng(555);
    const long n = 4000000;
    long hits = 0;
    for (long k = 0; k < n; ++k) {
        auto b = sample_block(part, rng);
        // relay 1 receives: its front good and dominant (ties split), both back links bad
        int s1 = b.s1.value(), s2 = b.s2.value();
        if (b.d1.value() > 2 || b.d2.value() > 2 || s1 < 15) continue;
        hits += s1 > s2 ? 2 : s1 == s2 ? 1 : 0;
    }
    const double q = px_py(thr, 16).p_x;
    const double est = hits / (2.0 * n);
    CHECK(std::abs(est - q) < 3 * std::sqrt(q / n));
}

TEST_CASE("idle run variance closed form equals direct sum") {
    for (double P : {0.003, 0.05, 0.3, 0.9})
        for (double T : {1e-3, 1.0})
            for (double m : {0.0, 0.5, 3.0, 100.0}) {
                double cf = idle_run_variance(P, T, m), ds = idle_run_variance_direct(P, T, m);
                CHECK(cf == doctest::Approx(ds).epsilon(1e-9));
            }
}

TEST_CASE("two-level toy moments match exhaustive enumeration") {
    const std::vector<double> rates{1.0, 2.0};
    const Thresholds thr{2, 2, 1, 1};
    for (double T : {0.25, 1.0}) {
        auto m = interval_moments(thr, rates, T);
        const double px = 3.0 / 32, py = 3.0 / 32, P = px + py;
        CHECK(m.p_x == doctest::Approx(px).epsilon(1e-15));
        CHECK(m.p == doctest::Approx(P).epsilon(1e-15));

        // arrival: 1/C_2 w.p. px, 1/C_1 w.p. py, nT w.p. (1-P)^n P
        // service: 1/C_2 w.p. py, 1/C_1 w.p. px, same idle runs
        auto enumerate = [&](double w_top, double w_bot) {
            std::vector<std::pair<double, double>> br{{w_top, 0.5}, {w_bot, 1.0}};
            double w = (1 - P) * P;
            for (int n = 1; n < 2000; ++n, w *= 1 - P) br.push_back({w, n * T});
            double mean = 0, var = 0;
            for (auto [p, v] : br) mean += p * v;
            for (auto [p, v] : br) var += p * (v - mean) * (v - mean);
            return std::pair{mean, var};
        };
        auto [ea, va] = enumerate(px, py);
        auto [eb, vb] = enumerate(py, px);
        CHECK(std::abs(m.mean_arrival - ea) < 1e-12 * std::max(1.0, ea));
        CHECK(std::abs(m.mean_service - eb) < 1e-12 * std::max(1.0, eb));
        CHECK(std::abs(m.var_arrival - va) < 1e-12 * std::max(1.0, va));
        CHECK(std::abs(m.var_service - vb) < 1e-12 * std::max(1.0, vb));
        CHECK(m.rho == doctest::Approx(eb / ea));
    }
}

TEST_CASE("moment formulas by hand on the toy partition") {
    auto m = interval_moments({2, 2, 1, 1}, std::vector<double>{1.0, 2.0}, 1.0);
    const double P = 3.0 / 16;
    CHECK(m.mean_arrival == doctest::Approx(0.5 * 3 / 32 + 1.0 * 3 / 32 + (1 - P) / P));
}

TEST_CASE("moments are non-negative for all valid thresholds") {
    for (int db : {0, 2, 4, 6, 8, 10}) {
        auto part = build_partition(db, 16);
        int checked = 0;
        for (int U = 2; U <= 16; ++U)
            for (int u = 2; u <= 16; ++u)
                for (int D = 1; D < U; ++D)
                    for (int d = 1; d < u; ++d) {
                        Thresholds t{U, u, D, d};
                        auto rep = validate_thresholds(t, part);
                        if (!rep.valid()) continue;
                        auto m = interval_moments(t, part, 1e-3);
                        ++checked;
                        REQUIRE(m.var_arrival >= 0);
                        REQUIRE(m.var_service >= 0);
                        REQUIRE(m.mean_arrival > 0);
                        REQUIRE(m.p <= 1);
                        REQUIRE(m.p == doctest::Approx(m.p_x + m.p_y));
                        if (U >= 14 && u >= 14 && D <= 3 && d <= 3) REQUIRE(m.rho < 1);
                    }
        CHECK(checked > 0);
    }
}

TEST_CASE("interval moment errors") {
    auto part = build_partition(6, 16);
    CHECK_THROWS_AS(interval_moments({16, 16, 1, 1}, part, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(interval_moments({16, 16, 1, 1}, std::vector<double>{1.0, 0.0}, 1.0), std::out_of_range);
    CHECK_THROWS_AS(interval_moments({2, 2, 1, 1}, std::vector<double>{1.0, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("marshall bound") {
    auto dd = marshall_wait(0.5, 0, 0, 0.5);
    CHECK(dd.bounded);
    CHECK(dd.mean_wait_upper == 0);

    const double lam = 0.9;
    auto mm = marshall_wait(lam, 1 / (lam * lam), 1.0, 0.9, 1 / lam, 2 / (lam * lam));
    CHECK(mm.mean_wait_upper == doctest::Approx(10.05).epsilon(1e-3));
    REQUIRE(mm.exact_marshall);
    CHECK(*mm.exact_marshall == doctest::Approx(9.0));
    CHECK(*mm.bound_condition);
    CHECK(*mm.exact_marshall <= mm.mean_wait_upper);

    auto un = marshall_wait(1.0, 1, 1, 1.0);
    CHECK(!un.bounded);
    CHECK(std::isinf(un.mean_wait_upper));
    CHECK_THROWS(marshall_wait(0.0, 1, 1, 0.5));
    CHECK_THROWS(marshall_wait(1.0, -1, 1, 0.5));
    CHECK_THROWS(marshall_wait(1.0, 1, 1, 0.5, 1.0, std::nullopt));
}

TEST_CASE("delay bound at 6 dB") {
    auto part = build_partition(6, 16);
    auto e = delay_upper_bound({16, 15, 3, 2}, part, 1e-3);
    CHECK(e.stable);
    CHECK(std::isfinite(e.seconds));
    CHECK(e.seconds > 0);
    CHECK(e.blocks == doctest::Approx(e.seconds / 1e-3));
    // same order as the reported 17.27
    CHECK(e.seconds > 17.27 / 10);
    CHECK(e.seconds < 17.27 * 10);

    auto u = delay_upper_bound({15, 15, 2, 2}, part, 1e-3);
    CHECK(!u.stable);
    CHECK(std::isinf(u.blocks));
}
