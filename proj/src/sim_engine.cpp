#include "diamond/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace diamond {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Srp: return "srp";
        case Strategy::Afp: return "afp";
        case Strategy::Hybrid: return "hybrid";
        case Strategy::Buffered: return "buffered";
    }
    return "?";
}

Strategy parse_strategy(const std::string& s) {
    if (s == "srp") return Strategy::Srp;
    if (s == "afp") return Strategy::Afp;
    if (s == "hybrid") return Strategy::Hybrid;
    if (s == "buffered") return Strategy::Buffered;
    throw std::invalid_argument("unknown strategy '" + s + "'");
}

void SimConfig::validate() const {
    if (n_states < 2) throw std::invalid_argument("n_states must be >= 2");
    if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite");
    if (n_blocks < 1) throw std::invalid_argument("n_blocks must be >= 1");
    if (!(block_ms > 0.0)) throw std::invalid_argument("block_ms must be positive");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
        throw std::invalid_argument("warmup_fraction must lie in [0, 1)");
    if (trace_points < 0) throw std::invalid_argument("trace_points must be >= 0");
    if (strategy == Strategy::Buffered) {
        if (!thresholds) throw std::invalid_argument("buffered strategy requires thresholds");
        check_levels(*thresholds, n_states);
        const auto& t = *thresholds;
        if (!(t.lower_sr < t.upper_sr && t.lower_rd < t.upper_rd))
            throw std::invalid_argument("thresholds must satisfy D < U and d < u");
    }
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::uint64_t> replication_seeds(std::uint64_t seed, int count) {
    std::vector<std::uint64_t> out(count);
    std::uint64_t st = seed;
    for (auto& s : out) s = splitmix64(st);
    return out;
}

namespace {

// Neumaier compensated sum
struct ExactSum {
    double s = 0, c = 0;
    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

struct MomentSums {
    long n = 0;
    long double sa = 0, sa2 = 0, sb = 0, sb2 = 0;
    void add(double a, double b) {
        ++n;
        sa += a;
        sa2 += static_cast<long double>(a) * a;
        sb += b;
        sb2 += static_cast<long double>(b) * b;
    }
    void merge(const MomentSums& o) {
        n += o.n;
        sa += o.sa;
        sa2 += o.sa2;
        sb += o.sb;
        sb2 += o.sb2;
    }
    StreamMoments finish() const {
        StreamMoments m;
        m.count = n;
        if (n == 0) return m;
        long double ma = sa / n, mb = sb / n;
        m.mean_a = static_cast<double>(ma);
        m.mean_b = static_cast<double>(mb);
        m.var_a = static_cast<double>(std::max<long double>(0, sa2 / n - ma * ma));
        m.var_b = static_cast<double>(std::max<long double>(0, sb2 / n - mb * mb));
        return m;
    }
};

// Unit-packet G/G/1 view of one relay buffer: every block emits one packet whose
// arrival interval and service time follow the block's link states when the relay
// is triggered, and the residual idle run otherwise.
struct RelayStream {
    double T;
    long warm;
    long idle = 0, idle_start = 0;
    bool primed = false;
    double W = 0, prev_b = 0;
    long double wait_sum = 0;
    long waits = 0;
    MomentSums mom;

    RelayStream(double t, long w) : T(t), warm(w) {}

    void packet(double a, double b, bool counted) {
        if (primed)
            W = std::max(0.0, W + prev_b - a);
        else
            primed = true;
        prev_b = b;
        if (counted) {
            wait_sum += W;
            ++waits;
            mom.add(a, b);
        }
    }
    void idle_block(long k) {
        if (idle == 0) idle_start = k;
        ++idle;
    }
    void work_block(long k, double a, double b) {
        for (long j = 0; j < idle; ++j) {
            double v = static_cast<double>(idle - j) * T;
            packet(v, v, idle_start + j >= warm);
        }
        idle = 0;
        packet(a, b, k >= warm);
    }
};

struct SlopeFit {
    long double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    void add(double x, double y) {
        n += 1;
        sx += x;
        sy += y;
        sxx += static_cast<long double>(x) * x;
        sxy += static_cast<long double>(x) * y;
    }
    double slope() const {
        long double den = n * sxx - sx * sx;
        return den > 0 ? static_cast<double>((n * sxy - sx * sy) / den) : 0.0;
    }
};

ReplicationResult run_replication(const SimConfig& cfg, const RateTable& table, std::uint64_t seed,
                                  std::vector<double>* trace, long trace_stride) {
    const auto& part = table.partition();
    Rng rng(seed);
    ReplicationResult r;
    r.seed = seed;
    const long M = cfg.n_blocks;
    ExactSum delivered, hyb;

    if (cfg.strategy != Strategy::Buffered) {
        for (long k = 0; k < M; ++k) {
            auto b = sample_block(part, rng);
            double v = cfg.strategy == Strategy::Srp   ? table.srp(b)
                       : cfg.strategy == Strategy::Afp ? table.afp(b)
                                                       : table.hybrid(b);
            delivered.add(v);
            hyb.add(table.hybrid(b));
        }
    } else {
        const Thresholds thr = *cfg.thresholds;
        const double T = cfg.T();
        const long warm = static_cast<long>(std::floor(cfg.warmup_fraction * M));
        RelayBufferState st;
        RelayStream rs[2] = {RelayStream(T, warm), RelayStream(T, warm)};
        SlopeFit fit;
        const long fit_stride = std::max(1L, M / 2000);
        for (long k = 0; k < M; ++k) {
            auto b = sample_block(part, rng);
            hyb.add(table.hybrid(b));
            // fluid amounts use a unit block so that sums are in units/s per block
            auto out = step_block(st, b, thr, table, 1.0);
            delivered.add(out.delivered);
            if (out.trigger.kind == TriggerKind::None) {
                rs[0].idle_block(k);
                rs[1].idle_block(k);
            } else {
                const int w = out.trigger.chosen_relay - 1;
                const int front = w == 0 ? b.s1.value() : b.s2.value();
                const int back = w == 0 ? b.d1.value() : b.d2.value();
                rs[w].work_block(k, 1.0 / part.rate_unchecked(front), 1.0 / part.rate_unchecked(back));
                rs[1 - w].idle_block(k);
                if (out.trigger.kind == TriggerKind::FrontGood)
                    ++r.front_good;
                else
                    ++r.back_good;
            }
            if ((k + 1) % fit_stride == 0) fit.add(static_cast<double>(k + 1), st.total_backlog());
            if (trace && (k + 1) % trace_stride == 0) trace->push_back(st.total_backlog());
        }
        long double wsum = 0;
        long wn = 0;
        MomentSums mom;
        for (int i = 0; i < 2; ++i) {
            wsum += rs[i].wait_sum;
            wn += rs[i].waits;
            mom.merge(rs[i].mom);
            r.relay_delay_seconds[i] = rs[i].waits ? static_cast<double>(rs[i].wait_sum / rs[i].waits) : 0.0;
        }
        r.packets = wn;
        r.mean_delay_seconds = wn ? static_cast<double>(wsum / wn) : 0.0;
        r.moments = mom.finish();
        r.rho_measured = r.moments.mean_a > 0 ? r.moments.mean_b / r.moments.mean_a : 0.0;
        r.backlog_slope = fit.slope();
        r.final_backlog = st.total_backlog();
        r.enqueued = st.enqueued_total;
        r.drained = st.drained_total;
        r.direct = st.direct_total;
    }
    r.delivered_total = delivered.value();
    r.throughput = r.delivered_total / static_cast<double>(M);
    r.hybrid_throughput = hyb.value() / static_cast<double>(M);
    return r;
}

std::pair<double, double> mean_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double m = 0;
    for (double x : v) m += x;
    m /= n;
    if (v.size() < 2) return {m, 0.0};
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

// raw moment sums of a replication's pooled streams, rebuilt for cross-replication pooling
MomentSums to_sums(const StreamMoments& m) {
    MomentSums s;
    s.n = m.count;
    s.sa = static_cast<long double>(m.mean_a) * m.count;
    s.sb = static_cast<long double>(m.mean_b) * m.count;
    s.sa2 = (static_cast<long double>(m.var_a) + static_cast<long double>(m.mean_a) * m.mean_a) * m.count;
    s.sb2 = (static_cast<long double>(m.var_b) + static_cast<long double>(m.mean_b) * m.mean_b) * m.count;
    return s;
}

}  // namespace

SimReport run(const SimConfig& config) {
    config.validate();
    RateTable table(build_partition(config.snr_db, config.n_states), config.pc_over_sigma2);
    return run(config, table);
}

SimReport run(const SimConfig& config, const RateTable& table) {
    config.validate();
    if (table.n_states() != config.n_states ||
        table.partition().mean_snr_db() != config.snr_db || table.pc_over_sigma2() != config.pc_over_sigma2)
        throw std::invalid_argument("rate table does not match the configuration");

    SimReport rep;
    rep.config = config;
    const auto seeds = replication_seeds(config.seed, config.replications);
    if (config.trace_points > 0)
        rep.trace_stride = std::max(1L, config.n_blocks / config.trace_points);
    for (int i = 0; i < config.replications; ++i) {
        std::vector<double>* tr = (i == 0 && config.trace_points > 0) ? &rep.backlog_trace : nullptr;
        rep.replications.push_back(run_replication(config, table, seeds[i], tr, rep.trace_stride));
    }

    std::vector<double> thr, hyb, imp, slope, delay, rho;
    MomentSums pooled;
    for (const auto& r : rep.replications) {
        thr.push_back(r.throughput);
        hyb.push_back(r.hybrid_throughput);
        imp.push_back(r.throughput - r.hybrid_throughput);
        if (config.strategy == Strategy::Buffered) {
            slope.push_back(r.backlog_slope);
            delay.push_back(r.mean_delay_seconds);
            pooled.merge(to_sums(r.moments));
        }
    }
    std::tie(rep.mean_throughput, rep.stderr_throughput) = mean_se(thr);
    std::tie(rep.hybrid_throughput, rep.stderr_hybrid) = mean_se(hyb);
    std::tie(rep.improvement, rep.stderr_improvement) = mean_se(imp);
    if (config.strategy == Strategy::Buffered) {
        std::tie(rep.backlog_slope, rep.stderr_backlog_slope) = mean_se(slope);
        rep.diverged = rep.backlog_slope >= kDivergenceSlope;
        auto [d, se] = mean_se(delay);
        rep.mean_delay_seconds = d;
        rep.stderr_delay_seconds = se;
        rep.mean_delay_blocks = d / config.T();
        rep.stderr_delay_blocks = se / config.T();
        rep.moments = pooled.finish();
        rep.rho_measured = rep.moments.mean_a > 0 ? rep.moments.mean_b / rep.moments.mean_a : 0.0;
    }
    return rep;
}

Gg1Result gg1_oracle(const IntervalSampler& arrival, const IntervalSampler& service, long n_customers,
                     std::uint64_t seed) {
    if (n_customers < 20) throw std::invalid_argument("need at least 20 customers");
    Rng rng(seed);
    const long warm = n_customers / 10;
    const long used = n_customers - warm;
    const int batches = 20;
    const long per_batch = used / batches;
    std::vector<long double> bsum(batches, 0);
    long double total = 0;
    double W = 0;
    double b = service(rng);
    for (long k = 1; k < n_customers; ++k) {
        double a = arrival(rng);
        W = std::max(0.0, W + b - a);
        b = service(rng);
        if (k >= warm) {
            total += W;
            long idx = std::min<long>((k - warm) / std::max(1L, per_batch), batches - 1);
            bsum[idx] += W;
        }
    }
    Gg1Result res;
    res.customers = used;
    res.mean_wait = static_cast<double>(total / used);
    std::vector<double> means;
    for (int i = 0; i < batches; ++i) {
        long cnt = (i == batches - 1) ? used - per_batch * (batches - 1) : per_batch;
        if (cnt > 0) means.push_back(static_cast<double>(bsum[i] / cnt));
    }
    res.stderr = mean_se(means).second;
    return res;
}

std::vector<SweepRow> sweep(const std::vector<SimConfig>& configs, unsigned threads) {
    if (configs.empty()) throw std::invalid_argument("empty sweep");
    std::vector<SweepRow> rows(configs.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(configs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            rows[i].config = configs[i];
            try {
                rows[i].report = run(configs[i]);
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace diamond
