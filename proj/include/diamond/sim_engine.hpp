#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diamond/buffered_relay.hpp"
#include "diamond/capacity.hpp"
#include "diamond/channel_model.hpp"

namespace diamond {

enum class Strategy { Srp, Afp, Hybrid, Buffered };

const char* to_string(Strategy s);
Strategy parse_strategy(const std::string& s);

struct SimConfig {
    double snr_db = 6.0;
    int n_states = 16;
    long n_blocks = 1000000;
    double block_ms = 1.0;
    Strategy strategy = Strategy::Hybrid;
    std::optional<Thresholds> thresholds;
    std::uint64_t seed = 1;
    int replications = 10;
    double warmup_fraction = 0.05;
    int trace_points = 0;  // downsampled backlog trace of the first replication
    double pc_over_sigma2 = 1.0;

    void validate() const;
    double T() const { return block_ms * 1e-3; }
};

// Sample moments of the arrival-interval / service-time streams (seconds).
struct StreamMoments {
    long count = 0;
    double mean_a = 0, mean_b = 0, var_a = 0, var_b = 0;
};

struct ReplicationResult {
    std::uint64_t seed = 0;
    double throughput = 0;          // units/s
    double hybrid_throughput = 0;   // non-buffered hybrid on the same blocks
    double delivered_total = 0;     // in units of (rate x one block)
    // buffered only
    double mean_delay_seconds = 0;
    std::array<double, 2> relay_delay_seconds{0, 0};
    long packets = 0;
    StreamMoments moments;
    double rho_measured = 0;
    double backlog_slope = 0;       // units/block
    double final_backlog = 0;
    double enqueued = 0, drained = 0, direct = 0;
    long front_good = 0, back_good = 0;
};

struct SimReport {
    SimConfig config;
    double mean_throughput = 0, stderr_throughput = 0;
    double hybrid_throughput = 0, stderr_hybrid = 0;
    double improvement = 0, stderr_improvement = 0;  // buffered minus hybrid, paired
    std::optional<double> mean_delay_blocks, stderr_delay_blocks;
    std::optional<double> mean_delay_seconds, stderr_delay_seconds;
    std::optional<double> rho_measured;
    StreamMoments moments;  // pooled over relays and replications
    double backlog_slope = 0, stderr_backlog_slope = 0;
    bool diverged = false;
    long trace_stride = 0;
    std::vector<double> backlog_trace;
    std::vector<ReplicationResult> replications;
};

constexpr double kDivergenceSlope = 1e-4;

std::uint64_t splitmix64(std::uint64_t& state);
std::vector<std::uint64_t> replication_seeds(std::uint64_t seed, int count);

SimReport run(const SimConfig& config);
// Same, reusing a prebuilt rate table for the config's partition.
SimReport run(const SimConfig& config, const RateTable& table);

struct Gg1Result {
    double mean_wait = 0;
    double stderr = 0;  // batch means
    long customers = 0;
};

using IntervalSampler = std::function<double(Rng&)>;
Gg1Result gg1_oracle(const IntervalSampler& arrival, const IntervalSampler& service, long n_customers,
                     std::uint64_t seed = 1);

struct SweepRow {
    SimConfig config;
    std::optional<SimReport> report;
    std::string error;
};

std::vector<SweepRow> sweep(const std::vector<SimConfig>& configs, unsigned threads = 0);

}  // namespace diamond
