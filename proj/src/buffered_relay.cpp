#include "diamond/buffered_relay.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "diamond/queueing.hpp"

namespace diamond {

void check_levels(const Thresholds& thr, int n) {
    auto chk = [n](int v, const char* name) {
        if (v < 1 || v > n)
            throw std::out_of_range(std::string("threshold ") + name + "=" + std::to_string(v) +
                                    " outside [1, " + std::to_string(n) + "]");
    };
    chk(thr.upper_sr, "U");
    chk(thr.upper_rd, "u");
    chk(thr.lower_sr, "D");
    chk(thr.lower_rd, "d");
}

ThresholdReport validate_thresholds(const Thresholds& thr, const ChannelPartition& part) {
    check_levels(thr, part.n_states());
    const int U = thr.upper_sr, u = thr.upper_rd, D = thr.lower_sr, d = thr.lower_rd;
    const auto& c = part.state_rate();

    ThresholdReport rep;
    rep.ordered = D < U && d < u;
    rep.criterion1 = c[U - 1] > 2.0 * c[d - 1] && c[u - 1] > 2.0 * c[D - 1];
    rep.criterion2_strict = (U == u && D > d) || (U > u && D == d);
    rep.criterion2 = (U >= u && D > d) || (U > u && D >= d);
    auto sr = stability_rates(thr, part);
    rep.arrival_rate = sr.arrival;
    rep.service_rate = sr.service;
    rep.margin = sr.service - sr.arrival;
    rep.stable = sr.stable();
    return rep;
}

TriggerCase detect_trigger(const BlockRealization& b, const Thresholds& thr) {
    const int s1 = b.s1.value(), s2 = b.s2.value(), d1 = b.d1.value(), d2 = b.d2.value();
    TriggerCase t;
    if ((s1 >= thr.upper_sr || s2 >= thr.upper_sr) && d1 <= thr.lower_rd && d2 <= thr.lower_rd) {
        t.kind = TriggerKind::FrontGood;
        t.chosen_relay = s1 >= s2 ? 1 : 2;
    } else if ((d1 >= thr.upper_rd || d2 >= thr.upper_rd) && s1 <= thr.lower_sr &&
               s2 <= thr.lower_sr) {
        t.kind = TriggerKind::BackGood;
        t.chosen_relay = d1 >= d2 ? 1 : 2;
    }
    return t;
}

namespace {

StepOutcome step_impl(RelayBufferState& st, const BlockRealization& b, const Thresholds& thr,
                      const ChannelPartition& part, double hybrid, double T) {
    StepOutcome out;
    out.trigger = detect_trigger(b, thr);
    const int r = out.trigger.chosen_relay - 1;
    switch (out.trigger.kind) {
        case TriggerKind::FrontGood: {
            double in = T * part.rate_unchecked(r == 0 ? b.s1.value() : b.s2.value());
            st.backlog[r] += in;
            st.enqueued_total += in;
            break;
        }
        case TriggerKind::BackGood: {
            double cap = T * part.rate_unchecked(r == 0 ? b.d1.value() : b.d2.value());
            double o = std::min(st.backlog[r], cap);
            st.backlog[r] -= o;
            st.drained_total += o;
            st.served_total += o;
            out.delivered = o;
            break;
        }
        case TriggerKind::None: {
            double o = T * hybrid;
            st.direct_total += o;
            st.served_total += o;
            out.delivered = o;
            break;
        }
    }
    return out;
}

}  // namespace

StepOutcome step_block(RelayBufferState& state, const BlockRealization& b, const Thresholds& thr,
                       const RateTable& table, double T) {
    return step_impl(state, b, thr, table.partition(), table.hybrid(b), T);
}

StepOutcome step_block(RelayBufferState& state, const BlockRealization& b, const Thresholds& thr,
                       const ChannelPartition& part, double T) {
    double h = hybrid_rate(rates_from_block(part, b), gains_from_block(part, b));
    return step_impl(state, b, thr, part, h, T);
}

double mean_rate_above(const ChannelPartition& part, int level) {
    const int n = part.n_states();
    if (level < 1 || level > n) throw std::out_of_range("level out of range");
    double s = 0;
    for (int i = level; i <= n; ++i) s += part.rate_unchecked(i);
    return s / (n - level + 1);
}

double mean_rate_below(const ChannelPartition& part, int level) {
    if (level < 1 || level > part.n_states()) throw std::out_of_range("level out of range");
    double s = 0;
    for (int i = 1; i <= level; ++i) s += part.rate_unchecked(i);
    return s / level;
}

StabilityRates stability_rates(const Thresholds& thr, const ChannelPartition& part) {
    check_levels(thr, part.n_states());
    auto p = px_py(thr, part.n_states());
    StabilityRates r;
    r.arrival = mean_rate_above(part, thr.upper_sr) * p.p_x + mean_rate_below(part, thr.lower_sr) * p.p_y;
    r.service = mean_rate_above(part, thr.upper_rd) * p.p_y + mean_rate_below(part, thr.lower_rd) * p.p_x;
    return r;
}

ThrPair thr_pair(const LinkRates& r1, const LinkRates& r2, const LinkGains& g1,
                 const LinkGains& g2, double T) {
    ThrPair p;
    p.thr1 = T * (hybrid_rate(r1, g1) + hybrid_rate(r2, g2));
    p.thr2 = T * std::max(std::min(r1.c_s1, r2.c_1d), std::min(r1.c_s2, r2.c_2d));
    return p;
}

const char* to_string(TriggerKind k) {
    switch (k) {
        case TriggerKind::None: return "none";
        case TriggerKind::FrontGood: return "front_good";
        case TriggerKind::BackGood: return "back_good";
    }
    return "?";
}

}  // namespace diamond
