#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "diamond/capacity.hpp"

using namespace diamond;

namespace {

double srp_grid(const LinkRates& r, int n) {
    double best = 0;
    for (int k = 0; k <= n; ++k) best = std::max(best, srp_objective(r, double(k) / n));
    return best;
}

double afp_grid(const LinkGains& g, int n) {
    const double C = afp_alpha_cap(g), D = afp_beta_cap(g);
    double best = 0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) best = std::max(best, afp_objective(g, C * i / n, D * j / n));
    return best;
}

LinkGains unit_gains() { return {1, 1, 1, 1, 1.0}; }

}  // namespace

TEST_CASE("srp symmetric and worked example") {
    CHECK(srp_capacity({1, 1, 1, 1}).rate == doctest::Approx(1.0));
    auto r = srp_capacity({2, 1, 1, 2});
    CHECK(r.x == doctest::Approx(0.0));
    CHECK(r.y == doctest::Approx(-3.0));
    CHECK(r.rate == doctest::Approx(4.0 / 3.0));
    CHECK(std::abs(srp_grid({2, 1, 1, 2}, 100000) - 4.0 / 3.0) < 1e-4);
}

TEST_CASE("srp degenerate and lambda invariants") {
    auto z = srp_capacity({0, 0, 0, 0});
    CHECK(z.rate == 0);
    CHECK(z.regime == SrpRegime::Degenerate);
    auto r = srp_capacity({0.7, 1.3, 0.4, 2.2});
    CHECK(r.lambda1 == doctest::Approx(0.4 / (0.7 + 0.4)));
    CHECK(r.lambda2 == doctest::Approx(1.3 / (1.3 + 2.2)));
    CHECK_THROWS(srp_capacity({-1, 0, 0, 0}));
}

TEST_CASE("srp closed form matches grid maximization") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int k = 0; k < 2000; ++k) {
        LinkRates r{u(rng), u(rng), u(rng), u(rng)};
        double cf = srp_capacity(r).rate;
        REQUIRE(cf >= 0);
        CHECK(std::abs(cf - srp_grid(r, 20000)) < 1e-3);
        CHECK(cf >= srp_grid(r, 2000) - 1e-12);
    }
}

TEST_CASE("srp boundary ties agree") {
    // x = 0 and y = 0 on the same tuple
    for (double v : {0.5, 1.0, 2.0}) {
        LinkRates r{v, v, v, v};
        CHECK(srp_capacity(r).rate == doctest::Approx(srp_grid(r, 100000)).epsilon(1e-4));
    }
    LinkRates r{2, 1, 1, 2};
    CHECK(srp_capacity(r).rate == doctest::Approx(srp_grid(r, 100000)).epsilon(1e-4));
}

TEST_CASE("coherent afp") {
    auto g = unit_gains();
    auto r = afp_capacity_coherent(g);
    CHECK(r.rate == doctest::Approx(0.25));
    CHECK(afp_capacity_coherent({0, 0, 0, 0, 1.0}).rate == 0);
    CHECK(afp_capacity_coherent({0, 0, 1, 1, 1.0}).rate == 0);
    // symmetric relays: both branches give the same value
    LinkGains s{0.8, 0.8, 1.3, 1.3, 2.0};
    auto a = afp_capacity_coherent(s);
    LinkGains s2 = s;
    s2.g_2d *= 1.0 + 1e-12;
    CHECK(a.rate == doctest::Approx(afp_capacity_coherent(s2).rate).epsilon(1e-9));
    // ratio and power constraints
    LinkGains h{1.2, 0.4, 0.9, 1.7, 1.0};
    auto c = afp_capacity_coherent(h);
    CHECK(c.alpha / c.beta == doctest::Approx(1.2 / 0.4));
    CHECK(c.alpha <= afp_alpha_cap(h) + 1e-9);
    CHECK(c.beta <= afp_beta_cap(h) + 1e-9);
    CHECK(c.rate == doctest::Approx(afp_objective(h, c.alpha, c.beta)));
}

TEST_CASE("general afp equals coherent on symmetric gains") {
    auto g = unit_gains();
    CHECK(afp_capacity_general(g).rate == doctest::Approx(0.25));
    CHECK(std::abs(afp_grid(g, 2000) - 0.25) < 1e-3);
}

TEST_CASE("general afp matches grid, dominates coherent, respects caps") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(1e-6, 2.0);
    for (int k = 0; k < 40; ++k) {
        LinkGains g{u(rng), u(rng), u(rng), u(rng), 1.0};
        auto r = afp_capacity_general(g);
        CHECK(r.alpha <= afp_alpha_cap(g) + 1e-9);
        CHECK(r.beta <= afp_beta_cap(g) + 1e-9);
        CHECK(r.alpha >= 0);
        CHECK(r.beta >= 0);
        CHECK(r.rate >= afp_capacity_coherent(g).rate - 1e-12);
        double grid = afp_grid(g, 1000);
        CHECK(r.rate >= grid - 1e-12);
        CHECK(r.rate - grid < 1e-3);
    }
}

TEST_CASE("general afp with a silent relay") {
    LinkGains g{0, 1.3, 0.7, 1.1, 1.0};
    auto r = afp_capacity_general(g);
    CHECK(r.branch == AfpBranch::SingleRelay);
    CHECK(r.alpha == 0);
    CHECK(r.beta == doctest::Approx(afp_beta_cap(g)));
    CHECK(r.rate == doctest::Approx(afp_grid(g, 2000)).epsilon(1e-6));
    CHECK(afp_capacity_general({1, 1, 0, 0, 1.0}).branch == AfpBranch::Silent);
    CHECK(afp_capacity_general({1, 1, 0, 0, 1.0}).rate == 0);
}

TEST_CASE("subspace labels") {
    CHECK(classify_subspace({1, 1, 1, 1}, unit_gains()) == 'a');
    LinkRates r{2, 1, 1, 2};
    // gains matching those rates with pc = 1: |g|^2 = 2^(2C) - 1
    auto amp = [](double c) { return std::sqrt(std::pow(2.0, 2 * c) - 1.0); };
    LinkGains g{amp(2), amp(1), amp(1), amp(2), 1.0};
    REQUIRE(rates_from_gains(g).c_s1 == doctest::Approx(2.0));
    char lab = classify_subspace(r, g);
    CHECK(lab == (coherent_relay1_limited(g) ? 'a' : 'e'));
    // flip the coherent branch by weakening relay 2's forward link
    LinkGains g2 = g;
    g2.g_2d = 0.05;
    CHECK(!coherent_relay1_limited(g2));
    CHECK(classify_subspace(r, g2) == 'e');
    LinkGains g3 = g;
    g3.g_1d = 0.05;
    CHECK(coherent_relay1_limited(g3));
    CHECK(classify_subspace(r, g3) == 'a');

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::set<char> seen;
    for (int k = 0; k < 100000; ++k) {
        LinkGains gg{u(rng), u(rng), u(rng), u(rng), 1.0};
        char c = classify_subspace(rates_from_gains(gg), gg);
        REQUIRE(c >= 'a');
        REQUIRE(c <= 'h');
        seen.insert(c);
    }
    CHECK(seen.size() == 8);
}

TEST_CASE("hybrid is the max of both modes") {
    auto r = rates_from_gains(unit_gains());
    CHECK(hybrid_rate(r, unit_gains()) == doctest::Approx(0.5));
    CHECK(srp_capacity(r).rate == doctest::Approx(0.5));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int k = 0; k < 5000; ++k) {
        LinkGains g{u(rng), u(rng), u(rng), u(rng), 1.0};
        auto rr = rates_from_gains(g);
        double h = hybrid_rate(rr, g);
        CHECK(h >= srp_capacity(rr).rate);
        CHECK(h >= afp_capacity_general(g).rate);
    }
}

TEST_CASE("hybrid mean stays within 1% of srp mean on equal-snr blocks") {
    auto part = build_partition(6, 16);
    Rng rng(31);
    double hs = 0, ss = 0;
    for (int k = 0; k < 100000; ++k) {
        auto b = sample_block(part, rng);
        auto r = rates_from_block(part, b);
        hs += hybrid_rate(r, gains_from_block(part, b));
        ss += srp_capacity(r).rate;
    }
    CHECK(hs >= ss);
    CHECK((hs - ss) / ss < 0.01);
}

TEST_CASE("rate table agrees with direct evaluation") {
    auto part = build_partition(4, 8);
    RateTable t(part);
    REQUIRE(t.tabulated());
    Rng rng(3);
    for (int k = 0; k < 2000; ++k) {
        auto b = sample_block(part, rng);
        auto r = rates_from_block(part, b);
        auto g = gains_from_block(part, b);
        CHECK(t.srp(b) == srp_capacity(r).rate);
        CHECK(t.afp(b) == afp_capacity_general(g).rate);
        CHECK(t.hybrid(b) == hybrid_rate(r, g));
    }
    CHECK(t.mean_hybrid() >= t.mean_srp());
    CHECK(t.mean_srp() > t.mean_afp());

    auto big = build_partition(4, 48);
    RateTable tb(big);
    CHECK(!tb.tabulated());
    BlockRealization b{StateLevel(40), StateLevel(3), StateLevel(12), StateLevel(48)};
    CHECK(tb.hybrid(b) == hybrid_rate(rates_from_block(big, b), gains_from_block(big, b)));
    CHECK_THROWS(tb.mean_hybrid());
}

TEST_CASE("invalid gains") {
    CHECK_THROWS(afp_capacity_general({-1, 1, 1, 1, 1.0}));
    CHECK_THROWS(afp_capacity_general({1, 1, 1, 1, 0.0}));
    CHECK_THROWS(afp_capacity_general({NAN, 1, 1, 1, 1.0}));
}
