#pragma once

#include <map>
#include <utility>
#include <vector>

#include "diamond/buffered_relay.hpp"
#include "diamond/capacity.hpp"
#include "diamond/queueing.hpp"

namespace diamond {

struct PlanEntry {
    Thresholds thresholds;
    double predicted_delay_blocks = 0;
    double predicted_delay_seconds = 0;
    double rho = 0;
    double psi = 0;
    double thr1_per_T = 0;
    double thr2_per_T = 0;
    bool stable = false;
};

enum class BaselineKind {
    TriggerConditional,  // E[hybrid | front good] + E[hybrid | back good], exact
    DownThresholdBound,  // 2 * C_dwTH, C_dwTH = C_max(D, d)
    Constant             // caller-supplied per-T value
};

struct PlannerOptions {
    double T = 1e-3;        // block duration, seconds
    int band = 0;           // marker band width; 0 picks round(3N/16)
    BaselineKind baseline = BaselineKind::TriggerConditional;
    double baseline_value = 0;  // used with Constant
};

int default_band(int n_states);

// Expected ideal two-block buffered rate E[min(C_i, C_j)], i ~ U[U,N], j ~ U[u,N], u <= U.
double thr2_expected(const ChannelPartition& part, int U, int u);
// Same expectation by exhaustive enumeration of level pairs (oracle).
double thr2_bruteforce(const ChannelPartition& part, int U, int u);

// Computes THR1/T baselines, caching the trigger-conditional expectations.
class BaselineModel {
public:
    BaselineModel(const RateTable& table, PlannerOptions opt);
    double thr1_per_T(const Thresholds& thr);

private:
    double cond_front(int U, int d);
    double cond_back(int u, int D);

    const RateTable& table_;
    PlannerOptions opt_;
    std::map<std::pair<int, int>, double> front_, back_;
};

double psi_improvement(const Thresholds& thr, const ChannelPartition& part, double thr1_per_T, double T);

// Criteria 1 and 2 within the marker band, ordered D<U, d<u; no stability filter.
std::vector<Thresholds> enumerate_candidates(const ChannelPartition& part, int band = 0);

// The feasible set: candidates that are stable (both the rate test and the
// interval-model test) with delay bound <= requirement (in blocks).
std::vector<PlanEntry> enumerate_feasible(const RateTable& table, double delay_requirement_blocks,
                                          const PlannerOptions& opt = {});

PlanEntry evaluate_plan(const Thresholds& thr, const RateTable& table, BaselineModel& base,
                        const PlannerOptions& opt);

PlanEntry select_best(const std::vector<PlanEntry>& gamma);

}  // namespace diamond
