#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace diamond {

using Rng = std::mt19937_64;

// 1-based state index of a link, 1 is the worst level.
class StateLevel {
public:
    constexpr StateLevel() = default;
    constexpr explicit StateLevel(int v) : v_(v) {}
    constexpr int value() const { return v_; }
    constexpr auto operator<=>(const StateLevel&) const = default;

private:
    int v_ = 1;
};

struct BlockRealization {
    StateLevel s1, s2, d1, d2;
};

// N-level equal-probability quantisation of an exponential (Rayleigh power) SNR.
class ChannelPartition {
public:
    int n_states() const { return n_; }
    double mean_snr() const { return mean_snr_; }
    double mean_snr_db() const { return mean_snr_db_; }
    const std::vector<double>& boundaries() const { return boundaries_; }
    const std::vector<double>& state_mean_snr() const { return state_snr_; }
    const std::vector<double>& state_rate() const { return state_rate_; }

    bool contains(StateLevel s) const { return s.value() >= 1 && s.value() <= n_; }
    double rate(StateLevel s) const;
    double snr(StateLevel s) const;
    // unchecked, for hot loops with already-validated levels
    double rate_unchecked(int level) const { return state_rate_[level - 1]; }

    // lower edge of level i (0 for i = 1), upper edge (inf for i = N)
    double lower_edge(int level) const;
    double upper_edge(int level) const;

    friend ChannelPartition build_partition(double mean_snr_db, int n_states);

private:
    int n_ = 0;
    double mean_snr_db_ = 0.0;
    double mean_snr_ = 1.0;
    std::vector<double> boundaries_;
    std::vector<double> state_snr_;
    std::vector<double> state_rate_;
};

ChannelPartition build_partition(double mean_snr_db, int n_states);

// Unbiased uniform level in [1, n].
int draw_level(Rng& rng, int n);
BlockRealization sample_block(const ChannelPartition& part, Rng& rng);
double rate_of(const ChannelPartition& part, StateLevel s);

void write_partition_csv(std::ostream& os, const ChannelPartition& part);

// 0.5 * log2(1 + snr)
double shannon_rate(double snr);
double db_to_linear(double db);

}  // namespace diamond
