#pragma once

namespace effcap {

/// Physical-layer constants of a flat block-fading link, SI units throughout.
///
/// The number of symbols per frame T*B is kept as a real number. Construction
/// rejects non-positive fields and T*B <= 2.
class LinkConfig {
public:
    LinkConfig(double frame_duration_s, double bandwidth_hz, double noise_psd,
               double avg_power_w, double fading_variance);

    /// Unit noise PSD with avg_power_w = snr * bandwidth_hz.
    static LinkConfig from_snr(double frame_duration_s, double bandwidth_hz, double snr,
                               double fading_variance = 1.0);

    double frame_duration_s() const { return frame_duration_s_; }
    double bandwidth_hz() const { return bandwidth_hz_; }
    double noise_psd() const { return noise_psd_; }
    double avg_power_w() const { return avg_power_w_; }
    double fading_variance() const { return fading_variance_; }

    /// T*B, the number of symbols in one frame.
    double symbols_per_frame() const { return frame_duration_s_ * bandwidth_hz_; }

    LinkConfig with_avg_power(double avg_power_w) const;
    LinkConfig with_bandwidth(double bandwidth_hz) const;

private:
    double frame_duration_s_;
    double bandwidth_hz_;
    double noise_psd_;
    double avg_power_w_;
    double fading_variance_;
};

struct EnergySplit {
    double rho;
    double pilot_energy_j;
    double data_symbol_energy_j;
};

struct EstimateStats {
    double estimate_variance;
    double error_variance;
    double effective_snr;
};

/// P / (N0 B).
double nominal_snr(const LinkConfig& cfg);

/// Pilot energy rho*P*T and per-symbol data energy (1-rho)*P*T/(TB-1).
EnergySplit energy_split(const LinkConfig& cfg, double rho);

/// MMSE estimate/error variances and the effective SNR of the Gaussian-noise
/// capacity lower bound for a training fraction rho in [0, 1].
EstimateStats effective_snr(const LinkConfig& cfg, double rho);

/// Outage threshold on the unit-mean exponential gain |w|^2 for a fixed rate:
/// (2^{rT/(TB-1)} - 1) / snr_eff. Zero at zero rate.
double outage_threshold(const LinkConfig& cfg, double rate_bps, double snr_eff);

/// P{|w|^2 > alpha} = exp(-alpha).
double on_probability(double alpha);

} // namespace effcap
