#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "diamond/report_io.hpp"
#include "diamond/sim_engine.hpp"

using namespace diamond;

namespace {

SimConfig small(Strategy s, long blocks = 200000) {
    SimConfig c;
    c.snr_db = 6;
    c.n_states = 16;
    c.n_blocks = blocks;
    c.strategy = s;
    c.replications = 3;
    c.seed = 11;
    if (s == Strategy::Buffered) c.thresholds = Thresholds{16, 14, 3, 1};
    return c;
}

}  // namespace

TEST_CASE("seed schedule") {
    auto a = replication_seeds(7, 10), b = replication_seeds(7, 10);
    CHECK(a == b);
    CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 10);
    CHECK(replication_seeds(8, 10) != a);
    std::uint64_t s = 0;
    CHECK(splitmix64(s) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("config validation") {
    auto c = small(Strategy::Buffered);
    c.thresholds.reset();
    CHECK_THROWS(run(c));
    c = small(Strategy::Hybrid);
    c.n_blocks = 0;
    CHECK_THROWS(run(c));
    c = small(Strategy::Buffered);
    c.thresholds = Thresholds{3, 14, 3, 1};
    CHECK_THROWS(run(c));
    CHECK_THROWS(parse_strategy("dfx"));
    CHECK(parse_strategy("buffered") == Strategy::Buffered);
    CHECK(std::string(to_string(Strategy::Afp)) == "afp");
}

TEST_CASE("identical seeds give identical reports") {
    for (auto s : {Strategy::Hybrid, Strategy::Buffered}) {
        auto c = small(s, 50000);
        auto a = to_json(run(c)).dump(), b = to_json(run(c)).dump();
        CHECK(a == b);
        c.seed = 12;
        CHECK(to_json(run(c)).dump() != a);
    }
}

TEST_CASE("srp beats afp and hybrid dominates both") {
    for (double db : {0.0, 6.0, 10.0}) {
        auto c = small(Strategy::Srp, 100000);
        c.snr_db = db;
        auto srp = run(c);
        c.strategy = Strategy::Afp;
        auto afp = run(c);
        c.strategy = Strategy::Hybrid;
        auto hyb = run(c);
        CHECK(srp.mean_throughput > afp.mean_throughput);
        CHECK(hyb.mean_throughput >= srp.mean_throughput);
        // same blocks, so the paired hybrid baseline is the hybrid run itself
        CHECK(hyb.improvement == doctest::Approx(0).scale(1));
        CHECK(!hyb.mean_delay_blocks);
    }
}

TEST_CASE("buffered run accounting") {
    auto c = small(Strategy::Buffered);
    auto r = run(c);
    REQUIRE(r.mean_delay_blocks);
    REQUIRE(r.mean_delay_seconds);
    CHECK(*r.mean_delay_blocks == doctest::Approx(*r.mean_delay_seconds / c.T()));
    CHECK(r.replications.size() == 3);
    for (auto& rep : r.replications) {
        CHECK(rep.delivered_total == doctest::Approx(rep.drained + rep.direct).epsilon(1e-12));
        CHECK(rep.final_backlog == doctest::Approx(rep.enqueued - rep.drained).epsilon(1e-9));
        CHECK(rep.throughput == doctest::Approx(rep.delivered_total / c.n_blocks));
        CHECK(rep.packets > 0);
        CHECK(rep.front_good > 0);
        CHECK(rep.back_good > 0);
        CHECK(rep.mean_delay_seconds >= 0);
    }
    CHECK(!r.diverged);
}

TEST_CASE("trace downsampling") {
    auto c = small(Strategy::Buffered, 10000);
    c.trace_points = 100;
    auto r = run(c);
    CHECK(r.backlog_trace.size() == 100);
    CHECK(r.trace_stride == 100);
}

TEST_CASE("prebuilt table must match") {
    auto c = small(Strategy::Hybrid, 1000);
    RateTable wrong(build_partition(4, 16));
    CHECK_THROWS(run(c, wrong));
    RateTable right(build_partition(6, 16));
    CHECK(to_json(run(c, right)).dump() == to_json(run(c)).dump());
}

TEST_CASE("lindley oracle") {
    auto det = [](double v) { return [v](Rng&) { return v; }; };
    CHECK(gg1_oracle(det(1.0), det(0.5), 1000).mean_wait == 0);

    auto expo = [](double rate) {
        return [rate](Rng& r) { return std::exponential_distribution<double>(rate)(r); };
    };
    auto a = gg1_oracle(expo(0.5), expo(1.0), 1000000, 3);
    CHECK(std::abs(a.mean_wait - 1.0) < 0.05);
    auto b = gg1_oracle(expo(0.9), expo(1.0), 1000000, 4);
    CHECK(std::abs(b.mean_wait - 9.0) < 0.5);
    CHECK(b.stderr > 0);
}

TEST_CASE("sweep keeps going past failing rows") {
    auto good = small(Strategy::Hybrid, 2000);
    auto bad = small(Strategy::Buffered, 2000);
    bad.thresholds.reset();
    auto rows = sweep({good, bad, good}, 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].report);
    CHECK(!rows[1].report);
    CHECK(!rows[1].error.empty());
    CHECK(to_json(*rows[0].report).dump() == to_json(*rows[2].report).dump());
    CHECK_THROWS(sweep({}));
}
