#pragma once

#include <optional>
#include <vector>

#include "diamond/buffered_relay.hpp"
#include "diamond/channel_model.hpp"

namespace diamond {

struct TriggerProbabilities {
    double p_x = 0;  // relay buffer receives (front good, back bad)
    double p_y = 0;  // relay buffer serves (back good, front bad)
    double p() const { return p_x + p_y; }
};

// Per-relay probabilities; ties between the two relays count one half each.
TriggerProbabilities px_py(const Thresholds& thr, int n_states);

// Arrival interval a and service time b of one relay buffer, in seconds.
struct IntervalMoments {
    double mean_arrival = 0;
    double mean_service = 0;
    double var_arrival = 0;
    double var_service = 0;
    double rho = 0;
    double p_x = 0, p_y = 0, p = 0;
};

// Throws std::domain_error when no trigger can ever fire (P = 0).
IntervalMoments interval_moments(const Thresholds& thr, const ChannelPartition& part, double T);
// Same on an explicit ascending list of per-level rates (level i -> rates[i-1]).
IntervalMoments interval_moments(const Thresholds& thr, const std::vector<double>& rates, double T);

// sum_{n>=1} (nT - m)^2 (1-P)^n P in closed form, and by direct summation
double idle_run_variance(double P, double T, double m);
double idle_run_variance_direct(double P, double T, double m, double tail_tol = 1e-12);

struct DelayBound {
    bool bounded = false;
    double mean_wait_upper = 0;
    std::optional<double> exact_marshall;
    // whether v2/v1 >= (1 - rho)/lambda, under which exact <= bound
    std::optional<bool> bound_condition;
};

DelayBound marshall_wait(double lambda, double var_a, double var_b, double rho,
                         std::optional<double> idle_first = std::nullopt,
                         std::optional<double> idle_second = std::nullopt);

struct DelayEstimate {
    bool stable = false;
    double seconds = 0;  // +inf when unstable
    double blocks = 0;   // seconds / T
    IntervalMoments moments;
};

DelayEstimate delay_upper_bound(const Thresholds& thr, const ChannelPartition& part, double T);

}  // namespace diamond
