#pragma once

#include <memory>
#include <vector>

#include "diamond/channel_model.hpp"

namespace diamond {

// Amplitude magnitudes |g_ij| and the power-to-noise ratio P_c / sigma^2.
struct LinkGains {
    double g_s1 = 0, g_s2 = 0, g_1d = 0, g_2d = 0;
    double pc_over_sigma2 = 1.0;

    void validate() const;
    // received SNR G_ij = (P_c / sigma^2) |g_ij|^2
    double G_s1() const { return pc_over_sigma2 * g_s1 * g_s1; }
    double G_s2() const { return pc_over_sigma2 * g_s2 * g_s2; }
    double G_1d() const { return pc_over_sigma2 * g_1d * g_1d; }
    double G_2d() const { return pc_over_sigma2 * g_2d * g_2d; }
};

struct LinkRates {
    double c_s1 = 0, c_s2 = 0, c_1d = 0, c_2d = 0;
    void validate() const;
};

LinkRates rates_from_gains(const LinkGains& g);
// Quantised block -> gains via G_ij = mean SNR of the level.
LinkGains gains_from_block(const ChannelPartition& part, const BlockRealization& b,
                           double pc_over_sigma2 = 1.0);
LinkRates rates_from_block(const ChannelPartition& part, const BlockRealization& b);

// Which breakpoint of the time-sharing curve is optimal. Source-bound regimes
// have x = C1d*C2d - Cs1*Cs2 >= 0, destination-bound ones x < 0.
enum class SrpRegime {
    SourceBoundRelay1,   // a / e
    DestBoundRelay2,     // b / f
    DestBoundRelay1,     // c / g
    SourceBoundRelay2,   // d / h
    Degenerate
};

struct SrpResult {
    double rate = 0;
    double lambda1 = 0;
    double lambda2 = 0;
    double x = 0;
    double y = 0;
    SrpRegime regime = SrpRegime::Degenerate;
};

enum class AfpBranch {
    Relay1Limited,   // coherent: relay 1 power constraint binds
    Relay2Limited,   // coherent: relay 2 power constraint binds
    EdgeBeta,        // general: beta at its cap, alpha interior
    EdgeAlpha,       // general: alpha at its cap, beta interior
    Corner,          // general: both at their caps
    SingleRelay,     // one relay carries nothing
    Silent
};

struct AfpResult {
    double rate = 0;
    double alpha = 0;
    double beta = 0;
    AfpBranch branch = AfpBranch::Silent;
};

SrpResult srp_capacity(const LinkRates& r);
// time-sharing objective for a given lambda, used by oracles
double srp_objective(const LinkRates& r, double lambda);

AfpResult afp_capacity_coherent(const LinkGains& g);
AfpResult afp_capacity_general(const LinkGains& g);
// rate reached by any (alpha, beta); used by oracles
double afp_objective(const LinkGains& g, double alpha, double beta);
// caps on alpha and beta from the relay power constraints
double afp_alpha_cap(const LinkGains& g);
double afp_beta_cap(const LinkGains& g);

// Letter a..h: SRP regime (a..d) crossed with the coherent AFP branch.
char classify_subspace(const LinkRates& r, const LinkGains& g);
bool coherent_relay1_limited(const LinkGains& g);

double hybrid_rate(const LinkRates& r, const LinkGains& g);

const char* to_string(SrpRegime r);
const char* to_string(AfpBranch b);

// Per-partition lookup of SRP / AFP / hybrid rates for all N^4 level tuples.
class RateTable {
public:
    RateTable(const ChannelPartition& part, double pc_over_sigma2 = 1.0);

    const ChannelPartition& partition() const { return *part_; }
    int n_states() const { return n_; }
    double pc_over_sigma2() const { return pc_; }

    std::size_t index(const BlockRealization& b) const {
        std::size_t n = static_cast<std::size_t>(n_);
        return ((static_cast<std::size_t>(b.s1.value() - 1) * n + (b.s2.value() - 1)) * n +
                (b.d1.value() - 1)) * n + (b.d2.value() - 1);
    }
    // Tables are built for N <= 40; larger partitions evaluate on demand.
    bool tabulated() const { return !hyb_.empty(); }
    double srp(const BlockRealization& b) const { return tabulated() ? srp_[index(b)] : eval(b).srp; }
    double afp(const BlockRealization& b) const { return tabulated() ? afp_[index(b)] : eval(b).afp; }
    double hybrid(const BlockRealization& b) const { return tabulated() ? hyb_[index(b)] : eval(b).hyb; }

    double mean_srp() const;
    double mean_afp() const;
    double mean_hybrid() const;

private:
    struct Triple {
        double srp, afp, hyb;
    };
    Triple eval(const BlockRealization& b) const;

    std::shared_ptr<const ChannelPartition> part_;
    int n_;
    double pc_;
    std::vector<double> srp_, afp_, hyb_;
};

}  // namespace diamond
