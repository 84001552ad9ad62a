#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "effcap/effcap.hpp"
#include "effcap/link_model.hpp"

namespace effcap::queue {

struct SimSpec {
    LinkConfig cfg;
    QosSpec qos;
    std::uint64_t frames = 10'000'000;
    std::uint64_t seed = 1;
    double arrival_margin = 1.0;  // fraction of R_E(theta) T B offered per frame
    std::size_t bootstrap_resamples = 200;
};

struct TailEstimate {
    double theta_hat = 0.0;  // 1/bits
    double q_lo = 0.0;
    double q_hi = 0.0;
    double ci_halfwidth = 0.0;  // bootstrap 95%
    std::uint64_t samples_in_tail = 0;

    // Run metadata.
    double arrival_bits = 0.0;
    double service_bits = 0.0;
    double on_probability = 0.0;
    std::string rng = "";
};

/// Frame-level ON(1)/OFF(0) states, i.i.d. Bernoulli(e^{-alpha_opt}) at the
/// optimal rate for `qos`.
std::vector<std::uint8_t> on_off_trace(const LinkConfig& cfg, const QosSpec& qos,
                                       std::uint64_t frames, std::uint64_t seed);

std::vector<std::uint8_t> bernoulli_trace(double p_on, std::uint64_t frames, std::uint64_t seed);

/// Q_{n+1} = max(Q_n + a - s_n, 0) from Q_0 = 0; s_n = service_bits when ON.
/// Returns Q_1..Q_n.
std::vector<double> lindley_path(std::span<const std::uint8_t> on, double arrival_bits,
                                 double service_bits);

/// Decay rate of the empirical P(Q >= q): least-squares slope of the log
/// complementary CDF between the 90th percentile and the largest level with
/// 50 exceedances, plus a block-bootstrap 95% half-width.
TailEstimate fit_queue_tail(std::span<const double> queue, std::size_t resamples,
                            std::uint64_t seed);

/// Simulates the buffer fed at arrival_margin * R_E(theta) and fits the tail.
TailEstimate simulate_queue(const SimSpec& spec);

} // namespace effcap::queue
