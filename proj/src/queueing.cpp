#include "diamond/queueing.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace diamond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RangeMoments {
    double m1 = 0;  // mean of 1/C over the range
    double m2 = 0;  // mean of 1/C^2
};

RangeMoments inverse_rate_moments(const std::vector<double>& rates, int lo, int hi) {
    RangeMoments r;
    for (int i = lo; i <= hi; ++i) {
        double t = 1.0 / rates[i - 1];
        r.m1 += t;
        r.m2 += t * t;
    }
    const double n = hi - lo + 1;
    r.m1 /= n;
    r.m2 /= n;
    return r;
}

// contribution of a working branch (probability w, level moments rm) to a variance about m
double branch_var(const RangeMoments& rm, double m, double w) {
    return (rm.m2 + m * m - 2.0 * m * rm.m1) * w;
}

}  // namespace

TriggerProbabilities px_py(const Thresholds& thr, int n) {
    check_levels(thr, n);
    const double N = n;
    auto dominant = [N](int upper) { return (N * N - (upper - 1.0) * (upper - 1.0)) / (2.0 * N * N); };
    TriggerProbabilities p;
    p.p_x = dominant(thr.upper_sr) * (thr.lower_rd / N) * (thr.lower_rd / N);
    p.p_y = dominant(thr.upper_rd) * (thr.lower_sr / N) * (thr.lower_sr / N);
    return p;
}

double idle_run_variance(double P, double T, double m) {
    const double q = 1.0 - P;
    return q * m * m - 2.0 * (q / P) * T * m + (q * (2.0 - P) / (P * P)) * T * T;
}

double idle_run_variance_direct(double P, double T, double m, double tail_tol) {
    const double q = 1.0 - P;
    double s = 0.0;
    double w = q * P;  // (1-P)^n P at n = 1
    for (long n = 1; n < 100000000L; ++n) {
        double dev = n * T - m;
        s += dev * dev * w;
        // remaining mass sum_{k>n} q^k P = q^{n+1}
        if (w * q / P < tail_tol && n * T > m) break;
        w *= q;
    }
    return s;
}

IntervalMoments interval_moments(const Thresholds& thr, const ChannelPartition& part, double T) {
    return interval_moments(thr, part.state_rate(), T);
}

IntervalMoments interval_moments(const Thresholds& thr, const std::vector<double>& rates, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("block duration must be positive");
    const int n = static_cast<int>(rates.size());
    check_levels(thr, n);
    for (double c : rates)
        if (!(c > 0.0)) throw std::invalid_argument("level rates must be positive");
    auto tp = px_py(thr, n);
    const double P = tp.p();
    if (!(P > 0.0)) throw std::domain_error("trigger probability is zero; intervals diverge");

    const auto tU = inverse_rate_moments(rates, thr.upper_sr, n);
    const auto tD = inverse_rate_moments(rates, 1, thr.lower_sr);
    const auto tu = inverse_rate_moments(rates, thr.upper_rd, n);
    const auto td = inverse_rate_moments(rates, 1, thr.lower_rd);
    const double idle = ((1.0 - P) / P) * T;

    IntervalMoments m;
    m.p_x = tp.p_x;
    m.p_y = tp.p_y;
    m.p = P;
    m.mean_arrival = tU.m1 * tp.p_x + tD.m1 * tp.p_y + idle;
    m.mean_service = tu.m1 * tp.p_y + td.m1 * tp.p_x + idle;
    m.var_arrival = branch_var(tU, m.mean_arrival, tp.p_x) + branch_var(tD, m.mean_arrival, tp.p_y) +
                    idle_run_variance(P, T, m.mean_arrival);
    m.var_service = branch_var(tu, m.mean_service, tp.p_y) + branch_var(td, m.mean_service, tp.p_x) +
                    idle_run_variance(P, T, m.mean_service);
    m.rho = m.mean_service / m.mean_arrival;
    return m;
}

DelayBound marshall_wait(double lambda, double var_a, double var_b, double rho,
                         std::optional<double> idle_first, std::optional<double> idle_second) {
    if (!(lambda > 0.0)) throw std::invalid_argument("arrival rate must be positive");
    if (var_a < 0.0 || var_b < 0.0) throw std::invalid_argument("variances must be non-negative");
    if (idle_first.has_value() != idle_second.has_value())
        throw std::invalid_argument("idle moments must be given together");
    DelayBound d;
    if (!(rho < 1.0)) {
        d.mean_wait_upper = kInf;
        return d;
    }
    d.bounded = true;
    d.mean_wait_upper = lambda * (var_a + var_b) / (2.0 * (1.0 - rho));
    if (idle_first) {
        if (!(*idle_first > 0.0)) throw std::invalid_argument("idle first moment must be positive");
        const double one_m = 1.0 - rho;
        d.exact_marshall = (lambda * lambda * (var_a + var_b) + one_m * one_m) / (2.0 * lambda * one_m) -
                           *idle_second / (2.0 * *idle_first);
        d.bound_condition = *idle_second / *idle_first >= one_m / lambda;
    }
    return d;
}

DelayEstimate delay_upper_bound(const Thresholds& thr, const ChannelPartition& part, double T) {
    DelayEstimate e;
    e.moments = interval_moments(thr, part, T);
    const auto& m = e.moments;
    if (!(m.mean_arrival > m.mean_service)) {
        e.seconds = e.blocks = kInf;
        return e;
    }
    e.stable = true;
    e.seconds = (m.var_arrival + m.var_service) / (2.0 * (m.mean_arrival - m.mean_service));
    e.blocks = e.seconds / T;
    return e;
}

}  // namespace diamond
