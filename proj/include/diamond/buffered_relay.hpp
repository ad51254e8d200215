#pragma once

#include <array>
#include <utility>

#include "diamond/capacity.hpp"
#include "diamond/channel_model.hpp"

namespace diamond {

// Pretty-good: level >= U (front) / >= u (back).
// Rather-bad:  level <= D (front) / <= d (back).
struct Thresholds {
    int upper_sr = 0;  // U
    int upper_rd = 0;  // u
    int lower_sr = 0;  // D
    int lower_rd = 0;  // d

    bool operator==(const Thresholds&) const = default;
};

struct ThresholdReport {
    bool ordered = false;       // D < U and d < u
    bool criterion1 = false;    // C_U > 2 C_d and C_u > 2 C_D
    bool criterion2 = false;    // includes the relaxed forms
    bool criterion2_strict = false;
    double arrival_rate = 0;
    double service_rate = 0;
    double margin = 0;          // service - arrival
    bool stable = false;

    bool valid() const { return ordered && criterion1 && criterion2; }
};

enum class TriggerKind { None, FrontGood, BackGood };

struct TriggerCase {
    TriggerKind kind = TriggerKind::None;
    int chosen_relay = 0;  // 1 or 2, 0 when kind is None
};

struct RelayBufferState {
    std::array<double, 2> backlog{0.0, 0.0};
    double served_total = 0;
    double enqueued_total = 0;
    double drained_total = 0;
    double direct_total = 0;

    double total_backlog() const { return backlog[0] + backlog[1]; }
};

struct StepOutcome {
    double delivered = 0;
    TriggerCase trigger;
};

struct StabilityRates {
    double arrival = 0;
    double service = 0;
    bool stable() const { return arrival < service; }
};

struct ThrPair {
    double thr1 = 0;
    double thr2 = 0;
};

void check_levels(const Thresholds& thr, int n_states);
ThresholdReport validate_thresholds(const Thresholds& thr, const ChannelPartition& part);

TriggerCase detect_trigger(const BlockRealization& b, const Thresholds& thr);

// Advance one block. `table` supplies the hybrid rate used outside trigger blocks.
StepOutcome step_block(RelayBufferState& state, const BlockRealization& b, const Thresholds& thr,
                       const RateTable& table, double T);
StepOutcome step_block(RelayBufferState& state, const BlockRealization& b, const Thresholds& thr,
                       const ChannelPartition& part, double T);

// Mean conditional rates over level ranges.
double mean_rate_above(const ChannelPartition& part, int level);  // levels level..N
double mean_rate_below(const ChannelPartition& part, int level);  // levels 1..level

StabilityRates stability_rates(const Thresholds& thr, const ChannelPartition& part);

// THR1: non-buffered hybrid over the two blocks. THR2: ideal buffered amount,
// max over relays of min(front rate in block 1, back rate in block 2).
ThrPair thr_pair(const LinkRates& r1, const LinkRates& r2, const LinkGains& g1,
                 const LinkGains& g2, double T);

const char* to_string(TriggerKind k);

}  // namespace diamond
