#include "effcap/queue_sim.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numeric>

#include "effcap/errors.hpp"
#include "effcap/rng.hpp"

namespace effcap::queue {

namespace {

constexpr double kQueueLimitBits = 1e15;
constexpr std::uint64_t kMinTailSamples = 50;
constexpr std::uint64_t kMinFrames = 1'000'000;
constexpr std::size_t kFitPoints = 32;
constexpr std::size_t kBlocks = 100;

struct TailFitInput {
    std::array<double, kFitPoints> levels{};
    std::array<double, kFitPoints> counts{};  // #{Q >= level}
    double total = 0.0;
};

// Least-squares slope of log(count/total) against the level.
double fit_decay_rate(const TailFitInput& in)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t k = 0; k < kFitPoints; ++k) {
        if (!(in.counts[k] > 0.0))
            continue;
        const double x = in.levels[k];
        const double y = std::log(in.counts[k] / in.total);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2)
        return std::nan("");
    const double md = static_cast<double>(m);
    return -(md * sxy - sx * sy) / (md * sxx - sx * sx);
}

double percentile(std::vector<double> values, double q)
{
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

} // namespace

std::vector<std::uint8_t> bernoulli_trace(double p_on, std::uint64_t frames, std::uint64_t seed)
{
    if (!(p_on >= 0.0 && p_on <= 1.0))
        throw DomainError("ON probability must lie in [0, 1]");
    Rng rng(seed);
    std::vector<std::uint8_t> trace(frames);
    for (auto& s : trace)
        s = rng.uniform() < p_on ? 1 : 0;
    return trace;
}

std::vector<std::uint8_t> on_off_trace(const LinkConfig& cfg, const QosSpec& qos,
                                       std::uint64_t frames, std::uint64_t seed)
{
    return bernoulli_trace(spectral_efficiency(cfg, qos).on_probability, frames, seed);
}

std::vector<double> lindley_path(std::span<const std::uint8_t> on, double arrival_bits,
                                 double service_bits)
{
    std::vector<double> path(on.size());
    double q = 0.0;
    for (std::size_t i = 0; i < on.size(); ++i) {
        q = std::max(q + arrival_bits - (on[i] ? service_bits : 0.0), 0.0);
        if (q > kQueueLimitBits)
            throw DegenerateQueueError("queue length exceeded 1e15 bits");
        path[i] = q;
    }
    return path;
}

TailEstimate fit_queue_tail(std::span<const double> queue, std::size_t resamples,
                            std::uint64_t seed)
{
    const std::size_t n = queue.size();
    if (n == 0 || *std::max_element(queue.begin(), queue.end()) <= 0.0)
        throw DegenerateQueueError("queue is identically empty");
    if (n < kBlocks * kMinTailSamples)
        throw InsufficientTailError("queue path too short for a tail fit");

    // Fit range: just above the 90th percentile up to the 50th largest value.
    std::vector<double> scratch(queue.begin(), queue.end());
    const auto p90_pos = static_cast<std::ptrdiff_t>(0.9 * static_cast<double>(n - 1));
    std::nth_element(scratch.begin(), scratch.begin() + p90_pos, scratch.end());
    const double p90 = scratch[static_cast<std::size_t>(p90_pos)];
    double q_lo = std::numeric_limits<double>::infinity();
    for (const double q : queue)
        if (q > p90 && q < q_lo)
            q_lo = q;

    const auto top_pos = static_cast<std::ptrdiff_t>(n - kMinTailSamples);
    std::nth_element(scratch.begin(), scratch.begin() + top_pos, scratch.end());
    const double q_hi = scratch[static_cast<std::size_t>(top_pos)];
    scratch = {};

    if (!std::isfinite(q_lo) || !(q_hi > q_lo))
        throw InsufficientTailError("fewer than 50 samples above the 90th percentile");

    TailFitInput base;
    for (std::size_t k = 0; k < kFitPoints; ++k)
        base.levels[k] = q_lo + (q_hi - q_lo) * static_cast<double>(k) / (kFitPoints - 1);

    // hist[b][j]: samples in block b exceeding exactly j fit levels.
    const std::size_t block_len = n / kBlocks;
    std::vector<std::array<double, kFitPoints + 1>> hist(kBlocks);
    std::vector<double> block_size(kBlocks, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = std::min(i / block_len, kBlocks - 1);
        const auto j = static_cast<std::size_t>(
            std::upper_bound(base.levels.begin(), base.levels.end(), queue[i]) - base.levels.begin());
        hist[b][j] += 1.0;
        block_size[b] += 1.0;
    }

    const auto assemble = [&](auto&& block_weight) {
        TailFitInput in;
        in.levels = base.levels;
        std::array<double, kFitPoints + 1> sum{};
        for (std::size_t b = 0; b < kBlocks; ++b) {
            const double w = block_weight(b);
            if (w == 0.0)
                continue;
            for (std::size_t j = 0; j <= kFitPoints; ++j)
                sum[j] += w * hist[b][j];
            in.total += w * block_size[b];
        }
        double running = 0.0;
        for (std::size_t k = kFitPoints; k-- > 0;) {
            running += sum[k + 1];
            in.counts[k] = running;
        }
        return in;
    };

    const TailFitInput full = assemble([](std::size_t) { return 1.0; });
    if (full.counts[0] < static_cast<double>(kMinTailSamples))
        throw InsufficientTailError("fewer than 50 samples exceed the lower fit level");

    TailEstimate est;
    est.theta_hat = fit_decay_rate(full);
    est.q_lo = q_lo;
    est.q_hi = q_hi;
    est.samples_in_tail = static_cast<std::uint64_t>(full.counts[0]);
    est.rng = Rng::algorithm;

    if (resamples > 0) {
        Rng rng(seed);
        std::vector<double> boot;
        boot.reserve(resamples);
        std::vector<double> multiplicity(kBlocks);
        for (std::size_t r = 0; r < resamples; ++r) {
            std::fill(multiplicity.begin(), multiplicity.end(), 0.0);
            for (std::size_t b = 0; b < kBlocks; ++b)
                multiplicity[rng.below(kBlocks)] += 1.0;
            const double th = fit_decay_rate(assemble([&](std::size_t b) { return multiplicity[b]; }));
            if (std::isfinite(th))
                boot.push_back(th);
        }
        if (boot.size() >= 2)
            est.ci_halfwidth = 0.5 * (percentile(boot, 0.975) - percentile(boot, 0.025));
    }
    return est;
}

TailEstimate simulate_queue(const SimSpec& spec)
{
    if (spec.qos.is_limit())
        throw DomainError("queue simulation needs theta > 0");
    if (spec.frames < kMinFrames)
        throw DomainError("tail estimation needs at least 1e6 frames");
    if (!(spec.arrival_margin > 0.0 && spec.arrival_margin <= 1.0))
        throw DomainError("arrival_margin must lie in (0, 1]");

    const EffCapResult eff = spectral_efficiency(spec.cfg, spec.qos);
    if (!(eff.spectral_efficiency > 0.0))
        throw DegenerateQueueError("effective capacity is zero; no arrivals can be offered");

    const double t = spec.cfg.frame_duration_s();
    const double arrival = spec.arrival_margin * eff.spectral_efficiency * t * spec.cfg.bandwidth_hz();
    const double service = eff.rate_opt_bps * t;
    if (!(arrival > 0.0))
        throw DegenerateQueueError("zero arrival rate");
    if (arrival >= eff.on_probability * service)
        throw DegenerateQueueError("arrival rate reaches the mean service rate");

    Rng root(spec.seed);
    Rng channel = root.split();
    Rng bootstrap = root.split();

    std::vector<double> path(spec.frames);
    double q = 0.0;
    for (auto& slot : path) {
        const bool on = channel.uniform() < eff.on_probability;
        q = std::max(q + arrival - (on ? service : 0.0), 0.0);
        if (q > kQueueLimitBits)
            throw DegenerateQueueError("queue length exceeded 1e15 bits");
        slot = q;
    }

    TailEstimate est = fit_queue_tail(path, spec.bootstrap_resamples, bootstrap());
    est.arrival_bits = arrival;
    est.service_bits = service;
    est.on_probability = eff.on_probability;
    return est;
}

} // namespace effcap::queue
