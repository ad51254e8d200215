#include "diamond/channel_model.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace diamond {

double shannon_rate(double snr) { return 0.5 * std::log2(1.0 + snr); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace {

// (1 + t) e^{-t}: the normalised tail integral of x e^{-x} from t to infinity
double tail_moment(double t) {
    if (std::isinf(t)) return 0.0;
    return (1.0 + t) * std::exp(-t);
}

}  // namespace

ChannelPartition build_partition(double mean_snr_db, int n_states) {
    if (n_states < 2) throw std::invalid_argument("n_states must be >= 2, got " + std::to_string(n_states));
    if (n_states > 65536) throw std::invalid_argument("n_states must be <= 65536");
    if (!std::isfinite(mean_snr_db)) throw std::invalid_argument("mean SNR must be finite");

    ChannelPartition p;
    p.n_ = n_states;
    p.mean_snr_db_ = mean_snr_db;
    p.mean_snr_ = db_to_linear(mean_snr_db);
    const double N = n_states;

    std::vector<double> b(n_states + 1);
    b[0] = 0.0;
    for (int i = 1; i < n_states; ++i) b[i] = -std::log1p(-i / N);
    b[n_states] = std::numeric_limits<double>::infinity();

    p.boundaries_.reserve(n_states - 1);
    for (int i = 1; i < n_states; ++i) p.boundaries_.push_back(p.mean_snr_ * b[i]);

    p.state_snr_.resize(n_states);
    p.state_rate_.resize(n_states);
    for (int i = 1; i <= n_states; ++i) {
        double m = N * p.mean_snr_ * (tail_moment(b[i - 1]) - tail_moment(b[i]));
        p.state_snr_[i - 1] = m;
        p.state_rate_[i - 1] = shannon_rate(m);
    }
    return p;
}

double ChannelPartition::rate(StateLevel s) const {
    if (!contains(s))
        throw std::out_of_range("state level " + std::to_string(s.value()) + " outside [1, " +
                                std::to_string(n_) + "]");
    return state_rate_[s.value() - 1];
}

double ChannelPartition::snr(StateLevel s) const {
    if (!contains(s))
        throw std::out_of_range("state level " + std::to_string(s.value()) + " outside [1, " +
                                std::to_string(n_) + "]");
    return state_snr_[s.value() - 1];
}

double ChannelPartition::lower_edge(int level) const {
    if (level < 1 || level > n_) throw std::out_of_range("level out of range");
    return level == 1 ? 0.0 : boundaries_[level - 2];
}

double ChannelPartition::upper_edge(int level) const {
    if (level < 1 || level > n_) throw std::out_of_range("level out of range");
    return level == n_ ? std::numeric_limits<double>::infinity() : boundaries_[level - 1];
}

double rate_of(const ChannelPartition& part, StateLevel s) { return part.rate(s); }

int draw_level(Rng& rng, int n) {
    // Lemire's multiply-and-reject, exact uniform on [0, n)
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * range;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t thresh = (0 - range) % range;
        while (low < thresh) {
            x = rng();
            m = static_cast<__uint128_t>(x) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<int>(m >> 64) + 1;
}

BlockRealization sample_block(const ChannelPartition& part, Rng& rng) {
    // four 16-bit lanes of one draw, each mapped to [0, n) by multiply-and-reject
    const std::uint32_t n = static_cast<std::uint32_t>(part.n_states());
    const std::uint32_t thresh = 65536u % n;
    int lv[4];
    int filled = 0;
    while (filled < 4) {
        std::uint64_t x = rng();
        for (int lane = 0; lane < 4 && filled < 4; ++lane, x >>= 16) {
            std::uint32_t m = static_cast<std::uint32_t>(x & 0xFFFFu) * n;
            if ((m & 0xFFFFu) < thresh) continue;
            lv[filled++] = static_cast<int>(m >> 16) + 1;
        }
    }
    return {StateLevel(lv[0]), StateLevel(lv[1]), StateLevel(lv[2]), StateLevel(lv[3])};
}

void write_partition_csv(std::ostream& os, const ChannelPartition& part) {
    auto old = os.precision(6);
    os << "level,boundary_low,boundary_high,mean_snr_linear,rate\n";
    for (int i = 1; i <= part.n_states(); ++i) {
        os << i << ',' << part.lower_edge(i) << ',';
        if (i == part.n_states())
            os << "inf";
        else
            os << part.upper_edge(i);
        os << ',' << part.state_mean_snr()[i - 1] << ',' << part.state_rate()[i - 1] << '\n';
    }
    os.precision(old);
}

}  // namespace diamond
