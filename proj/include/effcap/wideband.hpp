#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "effcap/effcap.hpp"
#include "effcap/link_model.hpp"

namespace effcap::wideband {

/// N parallel flat-fading subchannels of bandwidth B_c; total bandwidth N*B_c.
struct WidebandConfig {
    std::size_t num_subchannels;
    double coherence_bandwidth_hz;
    LinkConfig link;  // bandwidth_hz == N * B_c, avg_power_w is the total budget
    std::vector<double> per_subchannel_variances;
    std::vector<double> per_subchannel_powers;
    std::vector<double> per_subchannel_rho;

    /// Checks sizes, the power budget and T*B_c > 2.
    void validate() const;

    /// Identical variances, equal power split and a common training fraction.
    /// A negative `rho` selects the closed-form optimal fraction.
    static WidebandConfig uniform(std::size_t n, double coherence_bandwidth_hz,
                                  double frame_duration_s, double noise_psd, double avg_power_w,
                                  double fading_variance, double rho = -1.0);

    /// Single flat link seen by subchannel k.
    LinkConfig subchannel_link(std::size_t k) const;

    bool is_iid_uniform() const;
};

/// p_j = P{exactly j ON subchannels}, j = 0..N, via the Poisson-binomial
/// recursion over per-subchannel ON probabilities e^{-alpha_k}.
std::vector<double> transition_probabilities(const WidebandConfig& wcfg, double rate_bps);

/// Poisson-binomial distribution of a set of independent Bernoulli successes.
std::vector<double> poisson_binomial(std::span<const double> success_probabilities);

/// -1/(theta T B) ln( sum_j p_j e^{-theta j r T} ), bits/s/Hz of the total
/// bandwidth. Requires theta > 0.
double effective_capacity_wideband(const WidebandConfig& wcfg, const QosSpec& qos, double rate_bps);

/// Joint (rate, rho) optimum of an i.i.d. configuration. Delegates to the flat
/// link model with bandwidth B_c and per-subchannel power P/N.
EffCapResult optimize_wideband_iid(const WidebandConfig& wcfg, const QosSpec& qos);

/// Closed-form wideband constants for a bounded number of subchannels as
/// B_c -> infinity. Only P/(N N0) enters.
struct WidebandAsymptotics {
    double phi;
    double delta;
    double alpha_star;
    double xi;
    double ebn0_min;        // linear, E_b/N0 relative to the per-path noise level
    double wideband_slope;  // bits/s/Hz/(3 dB)
    double rho_star;
    double rho_dot0;  // d rho_opt / d zeta at zeta = 1/B_c = 0
    double omega;     // second-order coefficient of snr_eff,opt in zeta
    double r_star;    // limiting optimal rate, bits/s
};

WidebandAsymptotics asymptotics_sparse_bounded(double theta, double frame_duration_s,
                                               std::size_t n, double power_over_nn0,
                                               double gamma);

/// Residual of the limiting rate stationarity condition at (alpha*, r*).
double limiting_rate_condition(const WidebandAsymptotics& a, double theta, double frame_duration_s);

/// Number of subchannels as a function of total bandwidth.
enum class GrowthKind { Linear, Bounded, Sublinear };

struct GrowthLaw {
    GrowthKind kind = GrowthKind::Bounded;
    double exponent = 0.0;               // Sublinear: N = round(scale * (B / reference)^exponent)
    double scale = 1.0;                  // Bounded: N = scale; Sublinear: N at reference
    double reference_bandwidth_hz = 1.0; // Linear: the fixed coherence bandwidth

    std::size_t subchannels(double bandwidth_hz) const;

    /// Accepts "bounded:<N>", "linear:<B_c>", "sublinear:<exponent>:<N_ref>:<B_ref>".
    static GrowthLaw parse(const std::string& descriptor);
};

enum class Scenario { Rich, SparseBounded, SparseUnbounded };

Scenario classify_scenario(const GrowthLaw& law);
const char* scenario_name(Scenario s);
bool has_finite_minimum(Scenario s);

/// One point of a bandwidth sweep with i.i.d. uniform subchannels.
struct BandwidthPoint {
    double bandwidth_hz;
    std::size_t subchannels;
    double coherence_bandwidth_hz;
    double snr;
    double spectral_efficiency;
    double ebn0;  // linear
};

/// Evaluates the i.i.d. wideband optimum along a total-bandwidth grid with a
/// fixed total power-to-noise ratio P/N0.
std::vector<BandwidthPoint> bandwidth_sweep(double theta, double frame_duration_s, double gamma,
                                            double power_over_n0, const GrowthLaw& law,
                                            std::span<const double> bandwidth_grid);

struct NumericAsymptote {
    double ebn0_min_db;     // extrapolated to B_c -> infinity
    double wideband_slope;  // from the two smallest spectral-efficiency points
    double last_decade_change_db;
    bool converged;  // last-decade variation within 0.05 dB
};

/// Numeric B_c -> infinity limit of the i.i.d. optimum for fixed N.
NumericAsymptote asymptotics_numeric_check(double theta, double frame_duration_s, std::size_t n,
                                           double power_over_nn0, double gamma,
                                           std::span<const double> bc_grid);

/// Same extrapolation along a total-bandwidth grid for any growth law.
NumericAsymptote extrapolate_sweep(std::span<const BandwidthPoint> sweep);

} // namespace effcap::wideband
