#include "diamond/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace diamond {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

double quarter_log(double v) { return 0.25 * std::log2(1.0 + v); }

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// F(x, y) = (Ax + By)^2 / (x^2 + y^2 + 1)
double f_ratio(double A, double B, double x, double y) {
    double s = A * x + B * y;
    return s * s / (x * x + y * y + 1.0);
}

}  // namespace

void LinkGains::validate() const {
    if (!finite_nonneg(g_s1) || !finite_nonneg(g_s2) || !finite_nonneg(g_1d) || !finite_nonneg(g_2d))
        throw std::invalid_argument("link gains must be finite and non-negative");
    if (!(pc_over_sigma2 > 0.0) || !std::isfinite(pc_over_sigma2))
        throw std::invalid_argument("pc_over_sigma2 must be positive");
}

void LinkRates::validate() const {
    if (!finite_nonneg(c_s1) || !finite_nonneg(c_s2) || !finite_nonneg(c_1d) || !finite_nonneg(c_2d))
        throw std::invalid_argument("link rates must be finite and non-negative");
}

LinkRates rates_from_gains(const LinkGains& g) {
    g.validate();
    return {shannon_rate(g.G_s1()), shannon_rate(g.G_s2()), shannon_rate(g.G_1d()),
            shannon_rate(g.G_2d())};
}

LinkGains gains_from_block(const ChannelPartition& part, const BlockRealization& b, double pc) {
    if (!(pc > 0.0)) throw std::invalid_argument("pc_over_sigma2 must be positive");
    auto amp = [&](StateLevel s) { return std::sqrt(part.snr(s) / pc); };
    return {amp(b.s1), amp(b.s2), amp(b.d1), amp(b.d2), pc};
}

LinkRates rates_from_block(const ChannelPartition& part, const BlockRealization& b) {
    return {part.rate(b.s1), part.rate(b.s2), part.rate(b.d1), part.rate(b.d2)};
}

double srp_objective(const LinkRates& r, double lambda) {
    return std::min(lambda * r.c_s1, (1.0 - lambda) * r.c_1d) +
           std::min((1.0 - lambda) * r.c_s2, lambda * r.c_2d);
}

SrpResult srp_capacity(const LinkRates& r) {
    r.validate();
    const double a = r.c_s1, b = r.c_1d, c = r.c_s2, e = r.c_2d;
    const double sum1 = a + b, sum2 = c + e;

    SrpResult res;
    res.x = b * e - a * c;
    res.y = c * b - a * e;
    res.lambda1 = safe_div(b, sum1);
    res.lambda2 = safe_div(c, sum2);
    if (sum1 <= 0.0 && sum2 <= 0.0) return res;

    // The objective is concave piecewise linear with breakpoints lambda1 and
    // lambda2; x >= 0 puts lambda2 first, and the segment between them has
    // slope Cs1 - Cs2 (x >= 0) or C2d - C1d (x < 0).
    bool at_lambda1;
    if (sum1 <= 0.0)
        at_lambda1 = false;
    else if (sum2 <= 0.0)
        at_lambda1 = true;
    else if (res.x >= 0.0)
        at_lambda1 = a >= c;
    else
        at_lambda1 = b >= e;

    if (res.x >= 0.0) {
        res.regime = at_lambda1 ? SrpRegime::SourceBoundRelay1 : SrpRegime::SourceBoundRelay2;
        res.rate = at_lambda1 ? safe_div(a * (b + c), sum1) : safe_div(c * (a + e), sum2);
    } else {
        res.regime = at_lambda1 ? SrpRegime::DestBoundRelay1 : SrpRegime::DestBoundRelay2;
        res.rate = at_lambda1 ? safe_div(b * (a + e), sum1) : safe_div(e * (b + c), sum2);
    }
    return res;
}

double afp_alpha_cap(const LinkGains& g) { return std::sqrt(g.G_1d() / (1.0 + g.G_s1())); }

double afp_beta_cap(const LinkGains& g) { return std::sqrt(g.G_2d() / (1.0 + g.G_s2())); }

double afp_objective(const LinkGains& g, double alpha, double beta) {
    return quarter_log(g.pc_over_sigma2 * f_ratio(g.g_s1, g.g_s2, alpha, beta));
}

bool coherent_relay1_limited(const LinkGains& g) {
    const double gs1 = g.G_s1(), gs2 = g.G_s2();
    if (gs1 <= 0.0) return false;
    if (gs2 <= 0.0) return true;
    return g.G_2d() * gs1 * (gs1 + 1.0) >= g.G_1d() * gs2 * (gs2 + 1.0);
}

AfpResult afp_capacity_coherent(const LinkGains& g) {
    g.validate();
    AfpResult res;
    const double gs1 = g.G_s1(), gs2 = g.G_s2();
    const double S = gs1 + gs2;
    if (S <= 0.0) return res;

    const double t1 = gs1 > 0.0 ? g.G_1d() * S / (gs1 * (gs1 + 1.0)) : kInf;
    const double t2 = gs2 > 0.0 ? g.G_2d() * S / (gs2 * (gs2 + 1.0)) : kInf;
    const bool r1 = coherent_relay1_limited(g);
    const double s = r1 ? t1 : t2;  // alpha^2 + beta^2 at the binding constraint

    res.branch = r1 ? AfpBranch::Relay1Limited : AfpBranch::Relay2Limited;
    res.rate = quarter_log(S * s / (s + 1.0));
    const double amp2 = g.g_s1 * g.g_s1 + g.g_s2 * g.g_s2;
    const double k = std::sqrt(s / amp2);
    res.alpha = k * g.g_s1;
    res.beta = k * g.g_s2;
    return res;
}

AfpResult afp_capacity_general(const LinkGains& g) {
    g.validate();
    AfpResult res;
    const double A = g.g_s1, B = g.g_s2;
    const double C = afp_alpha_cap(g), D = afp_beta_cap(g);
    const bool r1_dead = A <= 0.0 || C <= 0.0;
    const bool r2_dead = B <= 0.0 || D <= 0.0;

    if (r1_dead && r2_dead) return res;
    if (r1_dead || r2_dead) {
        // F = K^2 y^2 / (y^2 + 1) is increasing, so the surviving relay runs at its cap
        res.branch = AfpBranch::SingleRelay;
        res.alpha = r1_dead ? 0.0 : C;
        res.beta = r2_dead ? 0.0 : D;
        res.rate = afp_objective(g, res.alpha, res.beta);
        return res;
    }

    // No interior stationary point exists and F grows away from the axes, so the
    // optimum sits on the edge beta = D or the edge alpha = C.
    const double x_star = std::min(A * (1.0 + D * D) / (B * D), C);
    const double y_star = std::min(B * (1.0 + C * C) / (A * C), D);
    const double f_edge_beta = f_ratio(A, B, x_star, D);
    const double f_edge_alpha = f_ratio(A, B, C, y_star);

    if (f_edge_beta >= f_edge_alpha) {
        res.alpha = x_star;
        res.beta = D;
        res.branch = x_star < C ? AfpBranch::EdgeBeta : AfpBranch::Corner;
    } else {
        res.alpha = C;
        res.beta = y_star;
        res.branch = y_star < D ? AfpBranch::EdgeAlpha : AfpBranch::Corner;
    }
    res.rate = quarter_log(g.pc_over_sigma2 * std::max(f_edge_beta, f_edge_alpha));
    return res;
}

char classify_subspace(const LinkRates& r, const LinkGains& g) {
    int idx = 0;
    switch (srp_capacity(r).regime) {
        case SrpRegime::SourceBoundRelay1:
        case SrpRegime::Degenerate: idx = 0; break;
        case SrpRegime::DestBoundRelay2: idx = 1; break;
        case SrpRegime::DestBoundRelay1: idx = 2; break;
        case SrpRegime::SourceBoundRelay2: idx = 3; break;
    }
    return static_cast<char>((coherent_relay1_limited(g) ? 'a' : 'e') + idx);
}

double hybrid_rate(const LinkRates& r, const LinkGains& g) {
    return std::max(srp_capacity(r).rate, afp_capacity_general(g).rate);
}

const char* to_string(SrpRegime r) {
    switch (r) {
        case SrpRegime::SourceBoundRelay1: return "source_bound_relay1";
        case SrpRegime::DestBoundRelay2: return "dest_bound_relay2";
        case SrpRegime::DestBoundRelay1: return "dest_bound_relay1";
        case SrpRegime::SourceBoundRelay2: return "source_bound_relay2";
        case SrpRegime::Degenerate: return "degenerate";
    }
    return "?";
}

const char* to_string(AfpBranch b) {
    switch (b) {
        case AfpBranch::Relay1Limited: return "relay1_limited";
        case AfpBranch::Relay2Limited: return "relay2_limited";
        case AfpBranch::EdgeBeta: return "edge_beta";
        case AfpBranch::EdgeAlpha: return "edge_alpha";
        case AfpBranch::Corner: return "corner";
        case AfpBranch::SingleRelay: return "single_relay";
        case AfpBranch::Silent: return "silent";
    }
    return "?";
}

RateTable::RateTable(const ChannelPartition& part, double pc)
    : part_(std::make_shared<const ChannelPartition>(part)), n_(part.n_states()), pc_(pc) {
    if (!(pc > 0.0)) throw std::invalid_argument("pc_over_sigma2 must be positive");
    if (n_ > 40) return;
    const std::size_t n = static_cast<std::size_t>(n_);
    const std::size_t total = n * n * n * n;
    srp_.resize(total);
    afp_.resize(total);
    hyb_.resize(total);
    const auto& rate = part.state_rate();
    std::vector<double> amp(n);
    for (std::size_t i = 0; i < n; ++i) amp[i] = std::sqrt(part.state_mean_snr()[i] / pc);

    std::size_t k = 0;
    for (std::size_t s1 = 0; s1 < n; ++s1)
        for (std::size_t s2 = 0; s2 < n; ++s2)
            for (std::size_t d1 = 0; d1 < n; ++d1)
                for (std::size_t d2 = 0; d2 < n; ++d2, ++k) {
                    LinkRates r{rate[s1], rate[s2], rate[d1], rate[d2]};
                    LinkGains g{amp[s1], amp[s2], amp[d1], amp[d2], pc};
                    srp_[k] = srp_capacity(r).rate;
                    afp_[k] = afp_capacity_general(g).rate;
                    hyb_[k] = std::max(srp_[k], afp_[k]);
                }
}

RateTable::Triple RateTable::eval(const BlockRealization& b) const {
    Triple t;
    t.srp = srp_capacity(rates_from_block(*part_, b)).rate;
    t.afp = afp_capacity_general(gains_from_block(*part_, b, pc_)).rate;
    t.hyb = std::max(t.srp, t.afp);
    return t;
}

namespace {
double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw std::logic_error("rate table not tabulated");
    long double s = 0;
    for (double x : v) s += x;
    return static_cast<double>(s / v.size());
}
}  // namespace

double RateTable::mean_srp() const { return mean_of(srp_); }
double RateTable::mean_afp() const { return mean_of(afp_); }
double RateTable::mean_hybrid() const { return mean_of(hyb_); }

}  // namespace diamond
