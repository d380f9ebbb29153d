#include "aoif/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aoif/errors.hpp"

namespace aoif {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

struct SimBuilder {
    static void assemble(SourceSimStats& s, std::vector<CycleRecord>&& cycles,
                         std::vector<double>&& system_times) {
        s.cycles_ = std::move(cycles);
        s.system_times_ = std::move(system_times);
        finalize(s);
    }

    static void finalize(SourceSimStats& s) {
        const auto n = s.cycles_.size();
        double area = 0.0, horizon = 0.0;
        for (const CycleRecord& c : s.cycles_) {
            area += 0.5 * (c.peak_age * c.peak_age - c.reset_age * c.reset_age);
            horizon += c.peak_age - c.reset_age;
        }
        s.area_ = area;
        s.horizon_ = horizon;
        s.mean_aoi_ = area / horizon;

        s.sorted_resets_.reserve(n);
        s.sorted_peaks_.reserve(n);
        double peak_sum = 0.0;
        for (const CycleRecord& c : s.cycles_) {
            s.sorted_resets_.push_back(c.reset_age);
            s.sorted_peaks_.push_back(c.peak_age);
            peak_sum += c.peak_age;
        }
        std::sort(s.sorted_resets_.begin(), s.sorted_resets_.end());
        std::sort(s.sorted_peaks_.begin(), s.sorted_peaks_.end());
        s.reset_prefix_.assign(n + 1, 0.0);
        s.peak_prefix_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            s.reset_prefix_[i + 1] = s.reset_prefix_[i] + s.sorted_resets_[i];
            s.peak_prefix_[i + 1] = s.peak_prefix_[i] + s.sorted_peaks_[i];
        }
        s.mean_paoi_ = peak_sum / static_cast<double>(n);

        // Approximate 95% confidence intervals by batch means; peak samples
        // are 1-dependent across cycles, which batching absorbs.
        const std::size_t batches = std::min<std::size_t>(50, std::max<std::size_t>(1, n / 4));
        if (batches >= 2) {
            const std::size_t per = n / batches;
            double m1 = 0.0, v1 = 0.0, m2 = 0.0, v2 = 0.0;
            std::vector<double> aoi_batch(batches), paoi_batch(batches);
            for (std::size_t b = 0; b < batches; ++b) {
                double a = 0.0, t = 0.0, p = 0.0;
                for (std::size_t i = b * per; i < (b + 1) * per; ++i) {
                    const CycleRecord& c = s.cycles_[i];
                    a += 0.5 * (c.peak_age * c.peak_age - c.reset_age * c.reset_age);
                    t += c.peak_age - c.reset_age;
                    p += c.peak_age;
                }
                aoi_batch[b] = a / t;
                paoi_batch[b] = p / static_cast<double>(per);
            }
            for (std::size_t b = 0; b < batches; ++b) {
                m1 += aoi_batch[b];
                m2 += paoi_batch[b];
            }
            m1 /= static_cast<double>(batches);
            m2 /= static_cast<double>(batches);
            for (std::size_t b = 0; b < batches; ++b) {
                v1 += (aoi_batch[b] - m1) * (aoi_batch[b] - m1);
                v2 += (paoi_batch[b] - m2) * (paoi_batch[b] - m2);
            }
            v1 /= static_cast<double>(batches - 1);
            v2 /= static_cast<double>(batches - 1);
            s.mean_aoi_ci_ = 1.96 * std::sqrt(v1 / static_cast<double>(batches));
            s.mean_paoi_ci_ = 1.96 * std::sqrt(v2 / static_cast<double>(batches));
        }
    }
};

double SourceSimStats::aoi_cdf(double x) const {
    if (x <= 0.0) return 0.0;
    // sum over cycles of [min(x, peak) - reset]^+ divided by the horizon
    const auto nd = static_cast<std::size_t>(
        std::lower_bound(sorted_resets_.begin(), sorted_resets_.end(), x) -
        sorted_resets_.begin());  // #{reset < x} (ties measure zero)
    const auto np = static_cast<std::size_t>(
        std::upper_bound(sorted_peaks_.begin(), sorted_peaks_.end(), x) - sorted_peaks_.begin());
    const double val = peak_prefix_[np] + x * (static_cast<double>(nd) - static_cast<double>(np)) -
                       reset_prefix_[nd];
    return std::min(1.0, std::max(0.0, val / horizon_));
}

double SourceSimStats::paoi_cdf(double x) const {
    const auto np = static_cast<std::size_t>(
        std::upper_bound(sorted_peaks_.begin(), sorted_peaks_.end(), x) - sorted_peaks_.begin());
    return static_cast<double>(np) / static_cast<double>(sorted_peaks_.size());
}

SimResult simulate(const SystemSpec& system, const SimOptions& opts) {
    if (opts.min_cycles_per_source < 1)
        throw DomainError("simulate: min_cycles_per_source must be at least 1");
    const std::size_t count = system.source_count();
    const std::uint64_t warmup =
        std::max<std::uint64_t>(10, opts.min_cycles_per_source / 100);
    const std::uint64_t target = warmup + opts.min_cycles_per_source;
    const std::uint64_t max_events =
        opts.max_events > 0
            ? opts.max_events
            : 5000 * target * static_cast<std::uint64_t>(count) + 1000000;

    // Independent streams: one per source arrival process, one shared stream
    // for service, error, retransmission and preemption draws.
    std::vector<std::mt19937_64> arrival_rng;
    arrival_rng.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        arrival_rng.emplace_back(splitmix64(opts.seed * 0x100000001b3ULL + i + 1));
    std::mt19937_64 service_rng(splitmix64(opts.seed * 0x100000001b3ULL + 0xabcdefULL));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);

    struct PerSource {
        double next_arrival = 0.0;
        double last_success_gen = 0.0;  // age reference: Delta(0) = 0
        std::uint64_t successes = 0;
        double prev_reception = 0.0;
        double prev_reset_age = 0.0;
        std::vector<CycleRecord> cycles;
        std::vector<double> system_times;
    };
    std::vector<PerSource> src(count);
    for (std::size_t i = 0; i < count; ++i)
        src[i].next_arrival = expo(arrival_rng[i]) / system.source(i + 1).lambda;

    struct InService {
        bool busy = false;
        std::size_t source = 0;  // 0-based
        double generation = 0.0;
        double completion = 0.0;
    } server;

    std::uint64_t events = 0;
    std::uint64_t done_count = 0;
    double now = 0.0;

    auto handle_success = [&](std::size_t i, double t, double gen) {
        PerSource& s = src[i];
        const double peak = t - s.last_success_gen;
        const double reset = t - gen;
        ++s.successes;
        if (s.successes > warmup && s.cycles.size() < opts.min_cycles_per_source) {
            s.cycles.push_back({s.prev_reset_age, peak});
            s.system_times.push_back(reset);
            if (opts.debug_checks) {
                const double expect = s.prev_reset_age + (t - s.prev_reception);
                if (std::abs(peak - expect) > 1e-9 * std::max(1.0, peak))
                    throw NumericalError("simulate: regenerative identity violated",
                                         std::abs(peak - expect));
            }
            if (s.cycles.size() == opts.min_cycles_per_source) ++done_count;
        }
        s.prev_reception = t;
        s.prev_reset_age = reset;
        s.last_success_gen = gen;
    };

    while (done_count < count) {
        if (++events > max_events) {
            std::size_t worst = 0;
            for (std::size_t i = 1; i < count; ++i)
                if (src[i].successes < src[worst].successes) worst = i;
            throw StarvationError("simulate: source " + std::to_string(worst + 1) +
                                      " starved of successful deliveries (" +
                                      std::to_string(src[worst].successes) + " after " +
                                      std::to_string(events) + " events)",
                                  worst + 1);
        }

        std::size_t next_src = 0;
        for (std::size_t i = 1; i < count; ++i)
            if (src[i].next_arrival < src[next_src].next_arrival) next_src = i;
        const bool completion_first = server.busy && server.completion <= src[next_src].next_arrival;

        if (completion_first) {
            now = server.completion;
            const std::size_t i = server.source;
            const SourceSpec& spec = system.source(i + 1);
            if (unif(service_rng) < spec.error_prob) {
                if (unif(service_rng) < spec.retx_prob) {
                    // retransmit: fresh service time, original timestamp
                    server.completion = now + spec.service.sample(service_rng);
                } else {
                    server.busy = false;
                }
            } else {
                handle_success(i, now, server.generation);
                server.busy = false;
            }
        } else {
            const std::size_t m = next_src;
            now = src[m].next_arrival;
            src[m].next_arrival = now + expo(arrival_rng[m]) / system.source(m + 1).lambda;
            const SourceSpec& spec = system.source(m + 1);
            if (!server.busy) {
                server = {true, m, now, now + spec.service.sample(service_rng)};
            } else if (unif(service_rng) < system.preemption()(server.source, m)) {
                // preempted packet is discarded outright
                server = {true, m, now, now + spec.service.sample(service_rng)};
            }
            // otherwise the arrival is discarded
        }
    }

    SimResult result;
    result.per_source.resize(count);
    result.horizon = now;
    result.total_events = events;
    result.seed = opts.seed;
    result.warmup_cycles = warmup;
    for (std::size_t i = 0; i < count; ++i)
        SimBuilder::assemble(result.per_source[i], std::move(src[i].cycles),
                             std::move(src[i].system_times));
    return result;
}

double ks_distance(const std::function<double(double)>& lhs,
                   const std::function<double(double)>& rhs, const Vec& grid) {
    if (grid.empty()) throw DomainError("ks_distance: empty evaluation grid");
    double sup = 0.0;
    for (double x : grid) sup = std::max(sup, std::abs(lhs(x) - rhs(x)));
    return sup;
}

}  // namespace aoif
