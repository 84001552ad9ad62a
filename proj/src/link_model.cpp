#include "effcap/link_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "effcap/errors.hpp"

namespace effcap {

namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw DomainError(std::string("LinkConfig: ") + name + " must be positive and finite");
}

} // namespace

LinkConfig::LinkConfig(double frame_duration_s, double bandwidth_hz, double noise_psd,
                       double avg_power_w, double fading_variance)
    : frame_duration_s_(frame_duration_s),
      bandwidth_hz_(bandwidth_hz),
      noise_psd_(noise_psd),
      avg_power_w_(avg_power_w),
      fading_variance_(fading_variance)
{
    require_positive(frame_duration_s, "frame_duration_s");
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(noise_psd, "noise_psd");
    require_positive(avg_power_w, "avg_power_w");
    require_positive(fading_variance, "fading_variance");
    if (!(symbols_per_frame() > 2.0))
        throw DomainError("LinkConfig: frame_duration_s * bandwidth_hz must exceed 2");
}

LinkConfig LinkConfig::from_snr(double frame_duration_s, double bandwidth_hz, double snr,
                                double fading_variance)
{
    return LinkConfig(frame_duration_s, bandwidth_hz, 1.0, snr * bandwidth_hz, fading_variance);
}

LinkConfig LinkConfig::with_avg_power(double avg_power_w) const
{
    return LinkConfig(frame_duration_s_, bandwidth_hz_, noise_psd_, avg_power_w, fading_variance_);
}

LinkConfig LinkConfig::with_bandwidth(double bandwidth_hz) const
{
    return LinkConfig(frame_duration_s_, bandwidth_hz, noise_psd_, avg_power_w_, fading_variance_);
}

double nominal_snr(const LinkConfig& cfg)
{
    return cfg.avg_power_w() / (cfg.noise_psd() * cfg.bandwidth_hz());
}

EnergySplit energy_split(const LinkConfig& cfg, double rho)
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw DomainError("training fraction rho must lie in [0, 1]");
    const double frame_energy = cfg.avg_power_w() * cfg.frame_duration_s();
    return {rho, rho * frame_energy, (1.0 - rho) * frame_energy / (cfg.symbols_per_frame() - 1.0)};
}

EstimateStats effective_snr(const LinkConfig& cfg, double rho)
{
    const EnergySplit split = energy_split(cfg, rho);
    const double gamma = cfg.fading_variance();
    const double n0 = cfg.noise_psd();
    const double denom = gamma * split.pilot_energy_j + n0;

    EstimateStats stats{};
    stats.estimate_variance = gamma * gamma * split.pilot_energy_j / denom;
    stats.error_variance = gamma * n0 / denom;

    // Closed form in the nominal SNR; identical to E_s*var_hat/(var_err*E_s + N0).
    const double tb = cfg.symbols_per_frame();
    const double snr = nominal_snr(cfg);
    const double gtb_snr = gamma * tb * snr;
    stats.effective_snr = rho * (1.0 - rho) * gtb_snr * gtb_snr
                          / (rho * gtb_snr * (tb - 2.0) + gtb_snr + tb - 1.0);
    return stats;
}

double outage_threshold(const LinkConfig& cfg, double rate_bps, double snr_eff)
{
    if (!(rate_bps >= 0.0))
        throw DomainError("rate must be nonnegative");
    if (rate_bps == 0.0)
        return 0.0;
    if (!(snr_eff > 0.0))
        throw DomainError("effective SNR must be positive for a positive rate");
    const double exponent = rate_bps * cfg.frame_duration_s() / (cfg.symbols_per_frame() - 1.0);
    return std::expm1(exponent * std::numbers::ln2) / snr_eff;
}

double on_probability(double alpha)
{
    return std::exp(-alpha);
}

} // namespace effcap
