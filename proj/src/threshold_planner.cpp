#include "diamond/threshold_planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace diamond {

int default_band(int n) { return std::max(1, static_cast<int>(std::lround(3.0 * n / 16.0))); }

double thr2_expected(const ChannelPartition& part, int U, int u) {
    const int N = part.n_states();
    if (U < 1 || U > N || u < 1 || u > N) throw std::out_of_range("threshold level out of range");
    if (u > U) throw std::invalid_argument("expects u <= U");
    double low = 0;
    for (int k = u; k <= U - 1; ++k) low += part.rate_unchecked(k);
    low /= (N - u + 1);
    double high = part.rate_unchecked(N);
    for (int k = U; k <= N - 1; ++k) high += (2.0 * N - 2.0 * k + 1.0) * part.rate_unchecked(k);
    high /= static_cast<double>(N - U + 1) * (N - u + 1);
    return low + high;
}

double thr2_bruteforce(const ChannelPartition& part, int U, int u) {
    const int N = part.n_states();
    double s = 0;
    for (int i = U; i <= N; ++i)
        for (int j = u; j <= N; ++j) s += std::min(part.rate_unchecked(i), part.rate_unchecked(j));
    return s / (static_cast<double>(N - U + 1) * (N - u + 1));
}

BaselineModel::BaselineModel(const RateTable& table, PlannerOptions opt) : table_(table), opt_(opt) {}

double BaselineModel::cond_front(int U, int d) {
    auto key = std::make_pair(U, d);
    if (auto it = front_.find(key); it != front_.end()) return it->second;
    const int N = table_.n_states();
    double s = 0;
    long cnt = 0;
    BlockRealization b;
    for (int s1 = 1; s1 <= N; ++s1)
        for (int s2 = 1; s2 <= N; ++s2) {
            if (s1 < U && s2 < U) continue;
            for (int d1 = 1; d1 <= d; ++d1)
                for (int d2 = 1; d2 <= d; ++d2) {
                    b = {StateLevel(s1), StateLevel(s2), StateLevel(d1), StateLevel(d2)};
                    s += table_.hybrid(b);
                    ++cnt;
                }
        }
    double v = cnt ? s / cnt : 0.0;
    front_[key] = v;
    return v;
}

double BaselineModel::cond_back(int u, int D) {
    auto key = std::make_pair(u, D);
    if (auto it = back_.find(key); it != back_.end()) return it->second;
    const int N = table_.n_states();
    double s = 0;
    long cnt = 0;
    BlockRealization b;
    for (int d1 = 1; d1 <= N; ++d1)
        for (int d2 = 1; d2 <= N; ++d2) {
            if (d1 < u && d2 < u) continue;
            for (int s1 = 1; s1 <= D; ++s1)
                for (int s2 = 1; s2 <= D; ++s2) {
                    b = {StateLevel(s1), StateLevel(s2), StateLevel(d1), StateLevel(d2)};
                    s += table_.hybrid(b);
                    ++cnt;
                }
        }
    double v = cnt ? s / cnt : 0.0;
    back_[key] = v;
    return v;
}

double BaselineModel::thr1_per_T(const Thresholds& thr) {
    switch (opt_.baseline) {
        case BaselineKind::TriggerConditional:
            return cond_front(thr.upper_sr, thr.lower_rd) + cond_back(thr.upper_rd, thr.lower_sr);
        case BaselineKind::DownThresholdBound:
            return 2.0 * table_.partition().rate_unchecked(std::max(thr.lower_sr, thr.lower_rd));
        case BaselineKind::Constant:
            return opt_.baseline_value;
    }
    return 0.0;
}

double psi_improvement(const Thresholds& thr, const ChannelPartition& part, double thr1_per_T, double T) {
    check_levels(thr, part.n_states());
    auto p = px_py(thr, part.n_states());
    const int hi = std::max(thr.upper_sr, thr.upper_rd), lo = std::min(thr.upper_sr, thr.upper_rd);
    return p.p_x * p.p_y * (thr2_expected(part, hi, lo) - thr1_per_T) * T;
}

std::vector<Thresholds> enumerate_candidates(const ChannelPartition& part, int band) {
    const int N = part.n_states();
    if (band <= 0) band = default_band(N);
    band = std::min(band, N - 1);
    std::vector<Thresholds> out;
    for (int U = N - band + 1; U <= N; ++U)
        for (int u = N - band + 1; u <= N; ++u)
            for (int D = 1; D <= band; ++D)
                for (int d = 1; d <= band; ++d) {
                    Thresholds t{U, u, D, d};
                    auto rep = validate_thresholds(t, part);
                    if (rep.valid()) out.push_back(t);
                }
    return out;
}

PlanEntry evaluate_plan(const Thresholds& thr, const RateTable& table, BaselineModel& base,
                        const PlannerOptions& opt) {
    const auto& part = table.partition();
    PlanEntry e;
    e.thresholds = thr;
    auto rep = validate_thresholds(thr, part);
    auto bound = delay_upper_bound(thr, part, opt.T);
    e.stable = rep.stable && bound.stable;
    e.rho = bound.moments.rho;
    e.predicted_delay_seconds = bound.seconds;
    e.predicted_delay_blocks = bound.blocks;
    e.thr1_per_T = base.thr1_per_T(thr);
    const int hi = std::max(thr.upper_sr, thr.upper_rd), lo = std::min(thr.upper_sr, thr.upper_rd);
    e.thr2_per_T = thr2_expected(part, hi, lo);
    e.psi = psi_improvement(thr, part, e.thr1_per_T, opt.T);
    return e;
}

std::vector<PlanEntry> enumerate_feasible(const RateTable& table, double delay_requirement_blocks,
                                          const PlannerOptions& opt) {
    if (!(opt.T > 0.0)) throw std::invalid_argument("block duration must be positive");
    if (std::isnan(delay_requirement_blocks)) throw std::invalid_argument("delay requirement is NaN");
    std::vector<PlanEntry> gamma;
    if (delay_requirement_blocks <= 0.0) return gamma;
    BaselineModel base(table, opt);
    for (const auto& t : enumerate_candidates(table.partition(), opt.band)) {
        auto e = evaluate_plan(t, table, base, opt);
        if (e.stable && e.predicted_delay_blocks <= delay_requirement_blocks) gamma.push_back(e);
    }
    return gamma;
}

PlanEntry select_best(const std::vector<PlanEntry>& gamma) {
    if (gamma.empty()) throw std::invalid_argument("empty feasible set");
    auto key = [](const PlanEntry& e) {
        const auto& t = e.thresholds;
        return std::make_tuple(t.upper_sr, -t.upper_rd, t.lower_sr, -t.lower_rd);
    };
    auto better = [&](const PlanEntry& a, const PlanEntry& b) {
        if (a.psi != b.psi) return a.psi > b.psi;
        if (a.predicted_delay_blocks != b.predicted_delay_blocks)
            return a.predicted_delay_blocks < b.predicted_delay_blocks;
        return key(a) < key(b);
    };
    const PlanEntry* best = &gamma.front();
    for (const auto& e : gamma)
        if (better(e, *best)) best = &e;
    return *best;
}

}  // namespace diamond
