#include "diamond/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace diamond {

double sig6(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return std::strtod(buf, nullptr);
}

json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return sig6(x);
}

std::string fmt6(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

json to_json(const Thresholds& t) {
    return {{"U", t.upper_sr}, {"u", t.upper_rd}, {"D", t.lower_sr}, {"d", t.lower_rd}};
}

Thresholds thresholds_from_json(const json& j) {
    return {j.at("U").get<int>(), j.at("u").get<int>(), j.at("D").get<int>(), j.at("d").get<int>()};
}

json to_json(const IntervalMoments& m) {
    return {{"p_x", num(m.p_x)},        {"p_y", num(m.p_y)},          {"p", num(m.p)},
            {"e_a", num(m.mean_arrival)}, {"e_b", num(m.mean_service)}, {"var_a", num(m.var_arrival)},
            {"var_b", num(m.var_service)}, {"rho", num(m.rho)}};
}

json to_json(const PlanEntry& e) {
    json j = to_json(e.thresholds);
    j["psi"] = num(e.psi);
    j["delay_bound_blocks"] = num(e.predicted_delay_blocks);
    j["delay_bound_seconds"] = num(e.predicted_delay_seconds);
    j["rho"] = num(e.rho);
    j["thr1_per_T"] = num(e.thr1_per_T);
    j["thr2_per_T"] = num(e.thr2_per_T);
    j["stable"] = e.stable;
    return j;
}

json to_json(const SimConfig& c) {
    json j = {{"snr_db", c.snr_db},
              {"n_states", c.n_states},
              {"n_blocks", c.n_blocks},
              {"block_ms", c.block_ms},
              {"strategy", to_string(c.strategy)},
              {"seed", c.seed},
              {"replications", c.replications},
              {"warmup_fraction", c.warmup_fraction},
              {"trace_points", c.trace_points},
              {"pc_over_sigma2", c.pc_over_sigma2}};
    j["thresholds"] = c.thresholds ? to_json(*c.thresholds) : json(nullptr);
    return j;
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig c;
    c.snr_db = j.at("snr_db").get<double>();
    c.n_states = j.at("n_states").get<int>();
    c.n_blocks = j.at("n_blocks").get<long>();
    c.block_ms = j.at("block_ms").get<double>();
    c.strategy = parse_strategy(j.at("strategy").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.replications = j.at("replications").get<int>();
    c.warmup_fraction = j.value("warmup_fraction", 0.05);
    c.trace_points = j.value("trace_points", 0);
    c.pc_over_sigma2 = j.value("pc_over_sigma2", 1.0);
    if (j.contains("thresholds") && !j["thresholds"].is_null())
        c.thresholds = thresholds_from_json(j["thresholds"]);
    return c;
}

namespace {
json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }
}  // namespace

json to_json(const SimReport& r, bool with_replications) {
    json j;
    j["config"] = to_json(r.config);
    j["mean_throughput"] = num(r.mean_throughput);
    j["stderr_throughput"] = num(r.stderr_throughput);
    j["hybrid_throughput"] = num(r.hybrid_throughput);
    j["stderr_hybrid"] = num(r.stderr_hybrid);
    const bool buffered = r.config.strategy == Strategy::Buffered;
    j["improvement"] = buffered ? num(r.improvement) : json(nullptr);
    j["stderr_improvement"] = buffered ? num(r.stderr_improvement) : json(nullptr);
    j["mean_delay_blocks"] = opt_num(r.mean_delay_blocks);
    j["stderr_delay_blocks"] = opt_num(r.stderr_delay_blocks);
    j["mean_delay_seconds"] = opt_num(r.mean_delay_seconds);
    j["stderr_delay_seconds"] = opt_num(r.stderr_delay_seconds);
    j["rho_measured"] = opt_num(r.rho_measured);
    if (buffered) {
        j["moments"] = {{"count", r.moments.count},
                        {"e_a", num(r.moments.mean_a)},
                        {"e_b", num(r.moments.mean_b)},
                        {"var_a", num(r.moments.var_a)},
                        {"var_b", num(r.moments.var_b)}};
        j["backlog_slope"] = num(r.backlog_slope);
        j["stderr_backlog_slope"] = num(r.stderr_backlog_slope);
        j["diverged"] = r.diverged;
    }
    if (!r.backlog_trace.empty()) {
        json tr = json::array();
        for (double v : r.backlog_trace) tr.push_back(num(v));
        j["backlog_trace"] = {{"stride_blocks", r.trace_stride}, {"values", tr}};
    }
    if (with_replications) {
        json reps = json::array();
        for (const auto& x : r.replications) {
            json e = {{"seed", x.seed},
                      {"throughput", num(x.throughput)},
                      {"hybrid_throughput", num(x.hybrid_throughput)},
                      {"delivered_total", num(x.delivered_total)}};
            if (buffered) {
                e["mean_delay_seconds"] = num(x.mean_delay_seconds);
                e["relay_delay_seconds"] = {num(x.relay_delay_seconds[0]), num(x.relay_delay_seconds[1])};
                e["rho_measured"] = num(x.rho_measured);
                e["backlog_slope"] = num(x.backlog_slope);
                e["final_backlog"] = num(x.final_backlog);
                e["front_good_blocks"] = x.front_good;
                e["back_good_blocks"] = x.back_good;
            }
            reps.push_back(e);
        }
        j["replications"] = reps;
    }
    return j;
}

void write_plan_csv(std::ostream& os, const std::vector<PlanEntry>& gamma) {
    os << "U,u,D,d,psi,delay_bound_blocks,delay_bound_seconds,rho\n";
    for (const auto& e : gamma) {
        const auto& t = e.thresholds;
        os << t.upper_sr << ',' << t.upper_rd << ',' << t.lower_sr << ',' << t.lower_rd << ','
           << fmt6(e.psi) << ',' << fmt6(e.predicted_delay_blocks) << ','
           << fmt6(e.predicted_delay_seconds) << ',' << fmt6(e.rho) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "config,snr_db,n_states,strategy,U,u,D,d,replication,variable,value,stderr\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& c = rows[i].config;
        std::string prefix = std::to_string(i) + ',' + fmt6(c.snr_db) + ',' + std::to_string(c.n_states) +
                             ',' + to_string(c.strategy) + ',';
        if (c.thresholds)
            prefix += std::to_string(c.thresholds->upper_sr) + ',' + std::to_string(c.thresholds->upper_rd) +
                      ',' + std::to_string(c.thresholds->lower_sr) + ',' +
                      std::to_string(c.thresholds->lower_rd) + ',';
        else
            prefix += ",,,,";
        if (!rows[i].report) {
            os << prefix << "all,error,,\n";
            continue;
        }
        const auto& r = *rows[i].report;
        const bool buffered = c.strategy == Strategy::Buffered;
        for (std::size_t k = 0; k < r.replications.size(); ++k) {
            const auto& x = r.replications[k];
            std::string p = prefix + std::to_string(k) + ',';
            os << p << "throughput," << fmt6(x.throughput) << ",\n";
            if (buffered) {
                os << p << "improvement," << fmt6(x.throughput - x.hybrid_throughput) << ",\n";
                os << p << "delay_blocks," << fmt6(x.mean_delay_seconds / c.T()) << ",\n";
                os << p << "rho," << fmt6(x.rho_measured) << ",\n";
                os << p << "backlog_slope," << fmt6(x.backlog_slope) << ",\n";
            }
        }
        std::string p = prefix + "all,";
        os << p << "throughput," << fmt6(r.mean_throughput) << ',' << fmt6(r.stderr_throughput) << '\n';
        os << p << "hybrid_throughput," << fmt6(r.hybrid_throughput) << ',' << fmt6(r.stderr_hybrid) << '\n';
        if (buffered) {
            os << p << "improvement," << fmt6(r.improvement) << ',' << fmt6(r.stderr_improvement) << '\n';
            os << p << "delay_blocks," << fmt6(*r.mean_delay_blocks) << ',' << fmt6(*r.stderr_delay_blocks)
               << '\n';
            os << p << "delay_seconds," << fmt6(*r.mean_delay_seconds) << ','
               << fmt6(*r.stderr_delay_seconds) << '\n';
            os << p << "rho," << fmt6(*r.rho_measured) << ",\n";
            os << p << "backlog_slope," << fmt6(r.backlog_slope) << ',' << fmt6(r.stderr_backlog_slope)
               << '\n';
        }
    }
}

}  // namespace diamond
