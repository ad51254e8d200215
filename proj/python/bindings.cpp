#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "diamond/report_io.hpp"
#include "diamond/sim_engine.hpp"
#include "diamond/threshold_planner.hpp"

namespace py = pybind11;
using namespace diamond;

namespace {

// nlohmann -> Python via the json module; results are small
py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Thresholds thr_of(py::sequence t) {
    if (py::len(t) != 4) throw py::value_error("thresholds are (U, u, D, d)");
    return {t[0].cast<int>(), t[1].cast<int>(), t[2].cast<int>(), t[3].cast<int>()};
}

json srp_json(const SrpResult& r) {
    return {{"rate", num(r.rate)}, {"lambda1", num(r.lambda1)}, {"lambda2", num(r.lambda2)},
            {"x", num(r.x)},       {"y", num(r.y)},             {"regime", to_string(r.regime)}};
}

json afp_json(const AfpResult& r) {
    return {{"rate", num(r.rate)}, {"alpha", num(r.alpha)}, {"beta", num(r.beta)}, {"branch", to_string(r.branch)}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Diamond relay network: capacities, buffered scheduling, delay bounds, simulation";

    py::class_<ChannelPartition>(m, "ChannelPartition")
        .def_property_readonly("n_states", &ChannelPartition::n_states)
        .def_property_readonly("mean_snr", &ChannelPartition::mean_snr)
        .def_property_readonly("mean_snr_db", &ChannelPartition::mean_snr_db)
        .def_property_readonly("boundaries", &ChannelPartition::boundaries)
        .def_property_readonly("state_mean_snr", &ChannelPartition::state_mean_snr)
        .def_property_readonly("state_rate", &ChannelPartition::state_rate)
        .def("rate", [](const ChannelPartition& p, int level) { return p.rate(StateLevel(level)); })
        .def("__repr__", [](const ChannelPartition& p) {
            return "ChannelPartition(snr_db=" + fmt6(p.mean_snr_db()) + ", n_states=" + std::to_string(p.n_states()) +
                   ")";
        });

    m.def("build_partition", &build_partition, py::arg("snr_db"), py::arg("n_states") = 16);

    m.def(
        "srp_capacity",
        [](double c_s1, double c_s2, double c_1d, double c_2d) {
            return to_py(srp_json(srp_capacity({c_s1, c_s2, c_1d, c_2d})));
        },
        py::arg("c_s1"), py::arg("c_s2"), py::arg("c_1d"), py::arg("c_2d"));

    m.def(
        "afp_capacity",
        [](double g_s1, double g_s2, double g_1d, double g_2d, double pc, bool coherent) {
            LinkGains g{g_s1, g_s2, g_1d, g_2d, pc};
            return to_py(afp_json(coherent ? afp_capacity_coherent(g) : afp_capacity_general(g)));
        },
        py::arg("g_s1"), py::arg("g_s2"), py::arg("g_1d"), py::arg("g_2d"), py::arg("pc_over_sigma2") = 1.0,
        py::arg("coherent") = false);

    m.def(
        "hybrid_rate",
        [](double g_s1, double g_s2, double g_1d, double g_2d, double pc) {
            LinkGains g{g_s1, g_s2, g_1d, g_2d, pc};
            auto r = rates_from_gains(g);
            return py::make_tuple(hybrid_rate(r, g), std::string(1, classify_subspace(r, g)));
        },
        py::arg("g_s1"), py::arg("g_s2"), py::arg("g_1d"), py::arg("g_2d"), py::arg("pc_over_sigma2") = 1.0,
        "(hybrid rate, subset letter a..h)");

    m.def(
        "analyze",
        [](py::sequence thresholds, double snr_db, int n_states, double block_ms) {
            auto part = build_partition(snr_db, n_states);
            auto t = thr_of(thresholds);
            auto rep = validate_thresholds(t, part);
            json j = {{"thresholds", to_json(t)},        {"ordered", rep.ordered},
                      {"criterion1", rep.criterion1},    {"criterion2", rep.criterion2},
                      {"arrival_rate", num(rep.arrival_rate)}, {"service_rate", num(rep.service_rate)}};
            auto e = delay_upper_bound(t, part, block_ms * 1e-3);
            j["stable"] = rep.stable && e.stable;
            j["moments"] = to_json(e.moments);
            j["w_bar_seconds"] = num(e.seconds);
            j["w_bar_blocks"] = num(e.blocks);
            return to_py(j);
        },
        py::arg("thresholds"), py::arg("snr_db") = 6.0, py::arg("n_states") = 16, py::arg("block_ms") = 1.0);

    m.def(
        "marshall_wait",
        [](double lambda, double var_a, double var_b, double rho) {
            auto d = marshall_wait(lambda, var_a, var_b, rho);
            return d.mean_wait_upper;
        },
        py::arg("lambda_rate"), py::arg("var_a"), py::arg("var_b"), py::arg("rho"),
        "Upper bound on the mean wait; inf when rho >= 1");

    m.def(
        "plan",
        [](double snr_db, int n_states, double delay_req_blocks, double block_ms, int band) {
            RateTable tab(build_partition(snr_db, n_states));
            PlannerOptions opt;
            opt.T = block_ms * 1e-3;
            opt.band = band;
            std::vector<PlanEntry> gamma;
            {
                py::gil_scoped_release nogil;
                gamma = enumerate_feasible(tab, delay_req_blocks, opt);
            }
            json g = json::array();
            for (auto& e : gamma) g.push_back(to_json(e));
            return to_py({{"gamma", g}, {"selected", gamma.empty() ? json(nullptr) : to_json(select_best(gamma))}});
        },
        py::arg("snr_db") = 6.0, py::arg("n_states") = 16,
        py::arg("delay_req_blocks") = std::numeric_limits<double>::infinity(), py::arg("block_ms") = 1.0,
        py::arg("band") = 0);

    m.def(
        "simulate",
        [](double snr_db, int n_states, long blocks, const std::string& strategy, py::object thresholds,
           std::uint64_t seed, int replications, double block_ms, double warmup, bool with_replications) {
            SimConfig c;
            c.snr_db = snr_db;
            c.n_states = n_states;
            c.n_blocks = blocks;
            c.strategy = parse_strategy(strategy);
            if (!thresholds.is_none()) c.thresholds = thr_of(thresholds.cast<py::sequence>());
            c.seed = seed;
            c.replications = replications;
            c.block_ms = block_ms;
            c.warmup_fraction = warmup;
            SimReport r;
            {
                py::gil_scoped_release nogil;
                r = run(c);
            }
            return to_py(to_json(r, with_replications));
        },
        py::arg("snr_db") = 6.0, py::arg("n_states") = 16, py::arg("blocks") = 100000,
        py::arg("strategy") = "hybrid", py::arg("thresholds") = py::none(), py::arg("seed") = 1,
        py::arg("replications") = 10, py::arg("block_ms") = 1.0, py::arg("warmup") = 0.05,
        py::arg("with_replications") = false);

    m.attr("DIVERGENCE_SLOPE") = kDivergenceSlope;
}
