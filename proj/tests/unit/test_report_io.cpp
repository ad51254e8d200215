#include <doctest.h>

#include <cmath>
#include <sstream>

#include "diamond/report_io.hpp"

using namespace diamond;

TEST_CASE("six significant digits") {
    CHECK(fmt6(1.23456789) == "1.23457");
    CHECK(fmt6(0.000123456789) == "0.000123457");
    CHECK(sig6(123456789.0) == 123457000.0);
    CHECK(num(NAN).is_null());
    CHECK(num(INFINITY).is_null());
    CHECK(num(2.5).get<double>() == 2.5);
}

TEST_CASE("thresholds and config round trip") {
    Thresholds t{16, 15, 3, 2};
    CHECK(thresholds_from_json(to_json(t)) == t);
    SimConfig c;
    c.snr_db = 4;
    c.n_blocks = 1234;
    c.strategy = Strategy::Buffered;
    c.thresholds = t;
    c.seed = 0xFFFFFFFFFFFFFFFFULL;
    c.replications = 4;
    auto back = sim_config_from_json(to_json(c));
    CHECK(to_json(back).dump() == to_json(c).dump());
    CHECK(back.seed == c.seed);
    CHECK(back.thresholds == t);
}

TEST_CASE("plan csv") {
    PlanEntry e;
    e.thresholds = {16, 15, 3, 2};
    e.psi = 1.0 / 3;
    e.predicted_delay_blocks = 11000.123456;
    e.predicted_delay_seconds = 11.000123456;
    e.rho = 0.9;
    std::ostringstream os;
    write_plan_csv(os, {e});
    CHECK(os.str() == "U,u,D,d,psi,delay_bound_blocks,delay_bound_seconds,rho\n16,15,3,2,0.333333,11000.1,11.0001,0.9\n");
}

TEST_CASE("sweep csv is long format") {
    SweepRow r;
    r.config.strategy = Strategy::Hybrid;
    r.error = "boom";
    std::ostringstream os;
    write_sweep_csv(os, {r});
    auto s = os.str();
    CHECK(s.rfind("config,snr_db,n_states,strategy,U,u,D,d,replication,variable,value,stderr\n", 0) == 0);
}
