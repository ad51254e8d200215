#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diamond/buffered_relay.hpp"
#include "diamond/capacity.hpp"
#include "diamond/channel_model.hpp"
#include "diamond/queueing.hpp"
#include "diamond/report_io.hpp"
#include "diamond/sim_engine.hpp"
#include "diamond/threshold_planner.hpp"

using namespace diamond;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exit 1 after printing a structured result
struct ReportedFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string format = "table";
    std::string out;
};

struct ChannelOpts {
    double snr_db = 6.0;
    int states = 16;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", c.out, "output file (relative paths resolve against $DIAMOND_OUT_DIR)");
    // consumed by expand_config before parsing; declared here for --help
    sub->add_option("--config", "key=value file; command-line flags take precedence");
}

void add_channel(CLI::App* sub, ChannelOpts& c) {
    sub->add_option("--snr-db", c.snr_db, "average received SNR in dB")->capture_default_str();
    sub->add_option("--states", c.states, "number of fading states N")
        ->check(CLI::Range(2, 65536))
        ->capture_default_str();
}

struct ThresholdOpts {
    int U = 0, u = 0, D = 0, d = 0;
    std::vector<int> packed;
};

void add_thresholds(CLI::App* sub, ThresholdOpts& t) {
    sub->add_option("--U", t.U, "front pretty-good threshold");
    sub->add_option("--u", t.u, "back pretty-good threshold");
    sub->add_option("--D", t.D, "front rather-bad threshold");
    sub->add_option("--d", t.d, "back rather-bad threshold");
    sub->add_option("--thresholds", t.packed, "U,u,D,d")->delimiter(',')->expected(4);
}

std::optional<Thresholds> resolve_thresholds(const ThresholdOpts& t) {
    if (!t.packed.empty()) return Thresholds{t.packed[0], t.packed[1], t.packed[2], t.packed[3]};
    const int given = (t.U != 0) + (t.u != 0) + (t.D != 0) + (t.d != 0);
    if (given == 0) return std::nullopt;
    if (given != 4) throw UsageError("all four thresholds --U --u --D --d are required");
    return Thresholds{t.U, t.u, t.D, t.d};
}

fs::path resolve_out(const std::string& out) {
    fs::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("DIAMOND_OUT_DIR"); dir && *dir) p = fs::path(dir) / p;
    }
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

std::string timestamp() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json manifest(const std::string& command, const json& config, const json& seeds, const fs::path& out) {
    return {{"command", command},   {"config", config},       {"seed_schedule", seeds},
            {"tool_version", kVersion}, {"timestamp", timestamp()}, {"output", out.filename().string()}};
}

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

// Writes text to --out (plus manifest) or stdout.
void emit(const Common& c, const std::string& text, const std::string& command, const json& config,
          const json& seeds = json::array()) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    auto p = resolve_out(c.out);
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    std::ofstream m(manifest_path(p));
    m << manifest(command, config, seeds, p).dump(2) << '\n';
    std::cerr << "wrote " << p.string() << '\n';
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool ci_mode() {
    const char* ci = std::getenv("CI");
    if (!ci || !*ci) return false;
    std::string v(ci);
    return v != "0" && v != "false";
}

// ---- partition -----------------------------------------------------------

struct PartitionCmd {
    Common common;
    ChannelOpts ch;
};

void cmd_partition(const PartitionCmd& o) {
    auto part = build_partition(o.ch.snr_db, o.ch.states);
    json cfg = {{"snr_db", o.ch.snr_db}, {"states", o.ch.states}};
    std::ostringstream os;
    if (o.common.format == "json") {
        json rows = json::array();
        for (int i = 1; i <= part.n_states(); ++i)
            rows.push_back({{"level", i},
                            {"boundary_low", num(part.lower_edge(i))},
                            {"boundary_high", i == part.n_states() ? json("inf") : num(part.upper_edge(i))},
                            {"mean_snr_linear", num(part.state_mean_snr()[i - 1])},
                            {"rate", num(part.state_rate()[i - 1])}});
        os << dump({{"snr_db", o.ch.snr_db}, {"mean_snr_linear", num(part.mean_snr())}, {"levels", rows}});
    } else if (o.common.format == "csv") {
        write_partition_csv(os, part);
    } else {
        os << std::setw(6) << "level" << std::setw(14) << "low" << std::setw(14) << "high" << std::setw(14)
           << "mean_snr" << std::setw(12) << "rate" << '\n';
        for (int i = 1; i <= part.n_states(); ++i)
            os << std::setw(6) << i << std::setw(14) << fmt6(part.lower_edge(i)) << std::setw(14)
               << fmt6(part.upper_edge(i)) << std::setw(14) << fmt6(part.state_mean_snr()[i - 1])
               << std::setw(12) << fmt6(part.state_rate()[i - 1]) << '\n';
    }
    emit(o.common, os.str(), "partition", cfg);
}

// ---- capacity ------------------------------------------------------------

struct CapacityCmd {
    Common common;
    ChannelOpts ch;
    std::vector<double> gains;
    std::vector<int> levels;
    double pc = 1.0;
};

void cmd_capacity(const CapacityCmd& o) {
    if (o.gains.empty() == o.levels.empty()) throw UsageError("give exactly one of --gains or --levels");
    LinkGains g;
    json cfg = {{"pc_over_sigma2", o.pc}};
    if (!o.gains.empty()) {
        g = {o.gains[0], o.gains[1], o.gains[2], o.gains[3], o.pc};
        cfg["gains"] = o.gains;
    } else {
        auto part = build_partition(o.ch.snr_db, o.ch.states);
        BlockRealization b{StateLevel(o.levels[0]), StateLevel(o.levels[1]), StateLevel(o.levels[2]),
                           StateLevel(o.levels[3])};
        for (int l : o.levels)
            if (l < 1 || l > o.ch.states) throw UsageError("level outside [1, states]");
        g = gains_from_block(part, b, o.pc);
        cfg["levels"] = o.levels;
        cfg["snr_db"] = o.ch.snr_db;
        cfg["states"] = o.ch.states;
    }
    g.validate();
    auto r = rates_from_gains(g);
    auto srp = srp_capacity(r);
    auto coh = afp_capacity_coherent(g);
    auto gen = afp_capacity_general(g);
    json j = {{"srp", num(srp.rate)},
              {"afp_coherent", num(coh.rate)},
              {"afp_general", num(gen.rate)},
              {"hybrid", num(std::max(srp.rate, gen.rate))},
              {"subset", std::string(1, classify_subspace(r, g))},
              {"lambda1", num(srp.lambda1)},
              {"lambda2", num(srp.lambda2)},
              {"alpha", num(gen.alpha)},
              {"beta", num(gen.beta)},
              {"srp_regime", to_string(srp.regime)},
              {"afp_branch", to_string(gen.branch)},
              {"rates", {num(r.c_s1), num(r.c_s2), num(r.c_1d), num(r.c_2d)}}};
    std::ostringstream os;
    if (o.common.format == "csv") {
        os << "srp,afp_coherent,afp_general,hybrid,subset,lambda1,lambda2,alpha,beta\n"
           << fmt6(srp.rate) << ',' << fmt6(coh.rate) << ',' << fmt6(gen.rate) << ','
           << fmt6(std::max(srp.rate, gen.rate)) << ',' << classify_subspace(r, g) << ','
           << fmt6(srp.lambda1) << ',' << fmt6(srp.lambda2) << ',' << fmt6(gen.alpha) << ','
           << fmt6(gen.beta) << '\n';
    } else {
        os << dump(j);
    }
    emit(o.common, os.str(), "capacity", cfg);
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeCmd {
    Common common;
    ChannelOpts ch;
    ThresholdOpts thr;
    double block_ms = 1.0;
};

void cmd_analyze(const AnalyzeCmd& o) {
    auto t = resolve_thresholds(o.thr);
    if (!t) throw UsageError("thresholds are required");
    auto part = build_partition(o.ch.snr_db, o.ch.states);
    const double T = o.block_ms * 1e-3;
    auto rep = validate_thresholds(*t, part);
    auto est = delay_upper_bound(*t, part, T);
    json j = to_json(est.moments);
    j["thresholds"] = to_json(*t);
    j["w_bar_blocks"] = num(est.blocks);
    j["w_bar_seconds"] = num(est.seconds);
    j["stable"] = est.stable && rep.stable;
    j["criterion1"] = rep.criterion1;
    j["criterion2"] = rep.criterion2;
    j["ordered"] = rep.ordered;
    j["arrival_rate"] = num(rep.arrival_rate);
    j["service_rate"] = num(rep.service_rate);
    json cfg = {{"snr_db", o.ch.snr_db}, {"states", o.ch.states}, {"block_ms", o.block_ms},
                {"thresholds", to_json(*t)}};
    const bool ok = j["stable"].get<bool>();
    if (!ok) j["error"] = "unstable thresholds: no finite delay bound";
    std::ostringstream os;
    if (o.common.format == "csv") {
        os << "p_x,p_y,e_a,e_b,var_a,var_b,rho,w_bar_blocks,stable\n"
           << fmt6(est.moments.p_x) << ',' << fmt6(est.moments.p_y) << ',' << fmt6(est.moments.mean_arrival)
           << ',' << fmt6(est.moments.mean_service) << ',' << fmt6(est.moments.var_arrival) << ','
           << fmt6(est.moments.var_service) << ',' << fmt6(est.moments.rho) << ',' << fmt6(est.blocks) << ','
           << (ok ? "true" : "false") << '\n';
    } else {
        os << dump(j);
    }
    emit(o.common, os.str(), "analyze", cfg);
    if (!ok) throw ReportedFailure("unstable");
}

// ---- plan ----------------------------------------------------------------

struct PlanCmd {
    Common common;
    ChannelOpts ch;
    double delay_req_blocks = 1e300;
    double block_ms = 1.0;
    int band = 0;
    std::string baseline = "trigger";
    double baseline_value = 0.0;
};

PlannerOptions planner_options(double block_ms, int band, const std::string& baseline, double value) {
    PlannerOptions opt;
    opt.T = block_ms * 1e-3;
    opt.band = band;
    if (baseline == "trigger")
        opt.baseline = BaselineKind::TriggerConditional;
    else if (baseline == "dwth")
        opt.baseline = BaselineKind::DownThresholdBound;
    else {
        opt.baseline = BaselineKind::Constant;
        opt.baseline_value = value;
    }
    return opt;
}

void cmd_plan(const PlanCmd& o) {
    if (!(o.block_ms > 0)) throw UsageError("--block-ms must be positive");
    auto part = build_partition(o.ch.snr_db, o.ch.states);
    RateTable table(part);
    auto opt = planner_options(o.block_ms, o.band, o.baseline, o.baseline_value);
    auto gamma = enumerate_feasible(table, o.delay_req_blocks, opt);
    json cfg = {{"snr_db", o.ch.snr_db}, {"states", o.ch.states}, {"delay_req_blocks", o.delay_req_blocks},
                {"block_ms", o.block_ms}, {"band", o.band == 0 ? default_band(o.ch.states) : o.band},
                {"baseline", o.baseline}};
    json selected = gamma.empty() ? json(nullptr) : to_json(select_best(gamma));
    std::ostringstream os;
    if (o.common.format == "csv") {
        write_plan_csv(os, gamma);
    } else if (o.common.format == "json") {
        json g = json::array();
        for (const auto& e : gamma) g.push_back(to_json(e));
        os << dump({{"gamma", g}, {"selected", selected}});
    } else {
        write_plan_csv(os, gamma);
        os << "selected: " << (gamma.empty() ? "none (empty feasible set)" : selected.dump()) << '\n';
    }
    emit(o.common, os.str(), "plan", cfg);
    if (o.common.format == "csv") std::cerr << "selected: " << selected.dump() << '\n';
}

// ---- simulate / sweep ----------------------------------------------------

struct SimulateCmd {
    Common common;
    ChannelOpts ch;
    ThresholdOpts thr;
    long blocks = 1000000;
    double block_ms = 1.0;
    std::string strategy = "hybrid";
    std::optional<std::uint64_t> seed;
    int replications = 10;
    double warmup = 0.05;
    int trace_points = 0;
    std::string manifest;
};

std::uint64_t pick_seed(const std::optional<std::uint64_t>& s) {
    if (s) return *s;
    if (ci_mode()) throw UsageError("--seed is required when CI is set");
    std::random_device rd;
    std::uint64_t v = (static_cast<std::uint64_t>(rd()) << 32) | rd();
    std::cerr << "seed: " << v << '\n';
    return v;
}

std::string render_report(const SimReport& r, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        os << dump(to_json(r));
    } else if (format == "csv") {
        write_sweep_csv(os, {SweepRow{r.config, r, ""}});
    } else {
        os << "strategy          " << to_string(r.config.strategy) << '\n'
           << "throughput        " << fmt6(r.mean_throughput) << " +- " << fmt6(r.stderr_throughput) << '\n'
           << "hybrid (paired)   " << fmt6(r.hybrid_throughput) << '\n';
        if (r.mean_delay_blocks) {
            os << "improvement       " << fmt6(r.improvement) << " +- " << fmt6(r.stderr_improvement) << '\n'
               << "delay (blocks)    " << fmt6(*r.mean_delay_blocks) << " +- " << fmt6(*r.stderr_delay_blocks)
               << '\n'
               << "delay (seconds)   " << fmt6(*r.mean_delay_seconds) << '\n'
               << "rho measured      " << fmt6(*r.rho_measured) << '\n'
               << "backlog slope     " << fmt6(r.backlog_slope) << (r.diverged ? "  DIVERGED" : "") << '\n';
        }
    }
    return os.str();
}

void cmd_simulate(const SimulateCmd& o) {
    SimConfig cfg;
    if (!o.manifest.empty()) {
        std::ifstream f(o.manifest);
        if (!f) throw std::runtime_error("cannot read manifest " + o.manifest);
        json m = json::parse(f);
        if (m.value("command", "") != "simulate") throw UsageError("manifest is not from simulate");
        cfg = sim_config_from_json(m.at("config"));
    } else {
        cfg.snr_db = o.ch.snr_db;
        cfg.n_states = o.ch.states;
        cfg.n_blocks = o.blocks;
        cfg.block_ms = o.block_ms;
        cfg.strategy = parse_strategy(o.strategy);
        cfg.thresholds = resolve_thresholds(o.thr);
        cfg.replications = o.replications;
        cfg.warmup_fraction = o.warmup;
        cfg.trace_points = o.trace_points;
        if (cfg.strategy == Strategy::Buffered && !cfg.thresholds)
            throw UsageError("--strategy buffered requires --thresholds or --U/--u/--D/--d");
        try {
            cfg.validate();
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        cfg.seed = pick_seed(o.seed);
    }
    auto rep = run(cfg);
    json seeds = json::array();
    for (auto s : replication_seeds(cfg.seed, cfg.replications)) seeds.push_back(s);
    std::string text = render_report(rep, o.common.format);
    if (o.common.format == "json" && !o.common.out.empty()) {
        json j = to_json(rep);
        j["manifest"] = manifest_path(resolve_out(o.common.out)).filename().string();
        text = dump(j);
    }
    emit(o.common, text, "simulate", to_json(cfg), seeds);
}

struct SweepCmd {
    Common common;
    std::vector<double> snrs{0, 2, 4, 6, 8, 10};
    std::vector<std::string> strategies{"srp", "afp", "hybrid", "buffered"};
    int states = 16;
    long blocks = 1000000;
    double block_ms = 1.0;
    std::optional<std::uint64_t> seed;
    int replications = 10;
    double delay_req_blocks = 1e300;
    ThresholdOpts thr;
    unsigned threads = 0;
};

void cmd_sweep(const SweepCmd& o) {
    const std::uint64_t seed = pick_seed(o.seed);
    auto fixed = resolve_thresholds(o.thr);
    std::vector<SimConfig> cfgs;
    json thr_choice = json::array();
    for (double snr : o.snrs) {
        std::optional<Thresholds> plan_thr = fixed;
        for (const auto& s : o.strategies) {
            SimConfig c;
            c.snr_db = snr;
            c.n_states = o.states;
            c.n_blocks = o.blocks;
            c.block_ms = o.block_ms;
            c.strategy = parse_strategy(s);
            c.replications = o.replications;
            c.seed = seed;  // common random numbers across strategies at one SNR
            if (c.strategy == Strategy::Buffered) {
                if (!plan_thr) {
                    RateTable table(build_partition(snr, o.states));
                    PlannerOptions opt;
                    opt.T = o.block_ms * 1e-3;
                    auto gamma = enumerate_feasible(table, o.delay_req_blocks, opt);
                    if (gamma.empty()) {
                        std::cerr << "snr " << snr << ": empty feasible set, buffered skipped\n";
                        continue;
                    }
                    plan_thr = select_best(gamma).thresholds;
                }
                c.thresholds = plan_thr;
                thr_choice.push_back({{"snr_db", snr}, {"thresholds", to_json(*plan_thr)}});
            }
            cfgs.push_back(c);
        }
    }
    if (cfgs.empty()) throw UsageError("nothing to run");
    auto rows = sweep(cfgs, o.threads);
    std::ostringstream os;
    if (o.common.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(r.report ? to_json(*r.report, false) : json{{"config", to_json(r.config)}, {"error", r.error}});
        os << dump(arr);
    } else {
        write_sweep_csv(os, rows);
    }
    json cfg = {{"snrs", o.snrs},     {"strategies", o.strategies}, {"states", o.states},
                {"blocks", o.blocks}, {"block_ms", o.block_ms},     {"seed", seed},
                {"replications", o.replications}, {"thresholds", thr_choice}};
    json seeds = json::array();
    for (auto s : replication_seeds(seed, o.replications)) seeds.push_back(s);
    emit(o.common, os.str(), "sweep", cfg, seeds);
    for (const auto& r : rows)
        if (!r.error.empty()) std::cerr << "config failed: " << r.error << '\n';
}

// Replaces --config FILE with the file's key=value pairs as flags, skipping any
// key already given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            file = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (file.empty()) return args;

    std::set<std::string> given;
    for (const auto& a : args)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));

    std::ifstream f(file);
    if (!f) throw UsageError("cannot read config " + file);
    auto trim = [](std::string v) {
        auto b = v.find_first_not_of(" \t\r"), e = v.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    std::string line;
    int no = 0;
    while (std::getline(f, line)) {
        ++no;
        if (auto h = line.find_first_of("#;"); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(file + ":" + std::to_string(no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        std::replace(key.begin(), key.end(), '_', '-');
        if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') && val.back() == val.front())
            val = val.substr(1, val.size() - 2);
        if (key.empty() || given.count(key)) continue;
        args.push_back("--" + key);
        args.push_back(val);
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diamond relay network toolkit: capacities, buffered scheduling, delay bounds, simulation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    PartitionCmd pc;
    auto* sp = app.add_subcommand("partition", "equal-probability fading partition");
    add_common(sp, pc.common);
    add_channel(sp, pc.ch);

    CapacityCmd cc;
    auto* sc = app.add_subcommand("capacity", "SRP / AFP / hybrid rates of one block");
    add_common(sc, cc.common);
    add_channel(sc, cc.ch);
    sc->add_option("--gains", cc.gains, "g_s1,g_s2,g_1d,g_2d amplitudes")->delimiter(',')->expected(4);
    sc->add_option("--levels", cc.levels, "s1,s2,d1,d2 state levels")->delimiter(',')->expected(4);
    sc->add_option("--pc", cc.pc, "P_c / sigma^2")->check(CLI::PositiveNumber)->capture_default_str();

    AnalyzeCmd ac;
    auto* sa = app.add_subcommand("analyze", "interval moments and delay bound for thresholds");
    add_common(sa, ac.common);
    add_channel(sa, ac.ch);
    add_thresholds(sa, ac.thr);
    sa->add_option("--block-ms", ac.block_ms, "block duration T in ms")->check(CLI::PositiveNumber)->capture_default_str();

    PlanCmd plc;
    auto* spl = app.add_subcommand("plan", "enumerate feasible thresholds and select one");
    add_common(spl, plc.common);
    add_channel(spl, plc.ch);
    spl->add_option("--delay-req-blocks", plc.delay_req_blocks, "delay requirement in blocks (default: none)");
    spl->add_option("--block-ms", plc.block_ms, "block duration T in ms")->capture_default_str();
    spl->add_option("--band", plc.band, "marker band width (0: round(3N/16))")->capture_default_str();
    spl->add_option("--baseline", plc.baseline, "THR1 baseline: trigger, dwth or const")
        ->check(CLI::IsMember({"trigger", "dwth", "const"}))
        ->capture_default_str();
    spl->add_option("--baseline-value", plc.baseline_value, "THR1/T when --baseline const");

    SimulateCmd smc;
    auto* ss = app.add_subcommand("simulate", "Monte Carlo run of one strategy");
    add_common(ss, smc.common);
    add_channel(ss, smc.ch);
    add_thresholds(ss, smc.thr);
    ss->add_option("--blocks", smc.blocks, "blocks per replication")->check(CLI::PositiveNumber)->capture_default_str();
    ss->add_option("--block-ms", smc.block_ms, "block duration T in ms")->capture_default_str();
    ss->add_option("--strategy", smc.strategy, "srp, afp, hybrid or buffered")
        ->check(CLI::IsMember({"srp", "afp", "hybrid", "buffered"}))
        ->capture_default_str();
    ss->add_option("--seed", smc.seed, "base seed");
    ss->add_option("--replications", smc.replications)->check(CLI::PositiveNumber)->capture_default_str();
    ss->add_option("--warmup", smc.warmup, "fraction of blocks excluded from delay statistics")->capture_default_str();
    ss->add_option("--trace-points", smc.trace_points, "downsampled backlog trace length")->capture_default_str();
    ss->add_option("--manifest", smc.manifest, "replay a previous simulate manifest");

    SweepCmd swc;
    auto* sw = app.add_subcommand("sweep", "strategies x SNR grid");
    add_common(sw, swc.common);
    sw->add_option("--snr-list", swc.snrs, "comma separated SNRs in dB")->delimiter(',');
    sw->add_option("--strategies", swc.strategies, "comma separated strategies")->delimiter(',');
    sw->add_option("--states", swc.states)->check(CLI::Range(2, 65536))->capture_default_str();
    sw->add_option("--blocks", swc.blocks)->check(CLI::PositiveNumber)->capture_default_str();
    sw->add_option("--block-ms", swc.block_ms)->capture_default_str();
    sw->add_option("--seed", swc.seed);
    sw->add_option("--replications", swc.replications)->check(CLI::PositiveNumber)->capture_default_str();
    sw->add_option("--delay-req-blocks", swc.delay_req_blocks, "requirement used to pick buffered thresholds");
    add_thresholds(sw, swc.thr);
    sw->add_option("--threads", swc.threads, "worker threads (0: hardware)");

    try {
        auto args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sp) cmd_partition(pc);
        else if (*sc) cmd_capacity(cc);
        else if (*sa) cmd_analyze(ac);
        else if (*spl) cmd_plan(plc);
        else if (*ss) cmd_simulate(smc);
        else if (*sw) cmd_sweep(swc);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ReportedFailure&) {
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
