#pragma once

#include <cstddef>
#include <span>

#include "effcap/link_model.hpp"

namespace effcap {

/// QoS exponent theta (1/bits). theta == 0 selects the no-QoS limit, which is
/// evaluated by its own formula rather than by a vanishing theta.
class QosSpec {
public:
    explicit QosSpec(double theta);

    double theta() const { return theta_; }
    bool is_limit() const { return theta_ == 0.0; }

private:
    double theta_;
};

struct EffCapResult {
    double rate_opt_bps = 0.0;
    double alpha_opt = 0.0;
    double rho_used = 0.0;
    double snr_eff = 0.0;
    double spectral_efficiency = 0.0;  // bits/s/Hz
    double on_probability = 0.0;
};

/// Normalized effective capacity of the ON-OFF link at a fixed rate and
/// training fraction, in bits/s/Hz:
///   -1/(theta T B) * ln(1 - e^{-alpha} (1 - e^{-theta T r})).
/// Requires theta > 0.
double effective_capacity_at(const LinkConfig& cfg, const QosSpec& qos, double rate_bps,
                             double rho);

/// Same objective with the effective SNR given directly.
double effective_capacity_at_snr_eff(const LinkConfig& cfg, double theta, double rate_bps,
                                     double snr_eff);

/// Derivative of the inner log argument's negation with respect to r; the
/// optimal rate is its unique root:
///   2^{Tr/(TB-1)} T ln2 / ((TB-1) snr_eff) (1 - e^{-theta T r}) - theta T e^{-theta T r}.
double rate_condition(const LinkConfig& cfg, double theta, double rate_bps, double snr_eff);

/// Optimal fixed rate for theta > 0 at training fraction rho.
///
/// Brackets the root of `rate_condition` by doubling/halving from r = B, then
/// refines with Brent until the bracket collapses. Throws ConvergenceError if
/// no sign change is found or the final residual exceeds 1e-12.
EffCapResult optimal_rate(const LinkConfig& cfg, const QosSpec& qos, double rho);
EffCapResult optimal_rate_for_snr_eff(const LinkConfig& cfg, double theta, double snr_eff);

/// theta -> 0 limit: max_r (r/B) e^{-alpha(r)}.
EffCapResult effective_capacity_theta0(const LinkConfig& cfg, double rho);
EffCapResult theta0_for_snr_eff(const LinkConfig& cfg, double snr_eff);

/// Joint optimum over rate and training fraction (training fixed at its
/// closed-form optimum).
EffCapResult spectral_efficiency(const LinkConfig& cfg, const QosSpec& qos);

/// E_b/N0 = SNR / R_E, linear. +inf when R_E == 0.
double bit_energy(const LinkConfig& cfg, const QosSpec& qos);

double to_db(double ratio);

struct MinBitEnergy {
    double snr_at_min;
    double ebn0_min_db;
    std::size_t grid_index;
    bool at_grid_endpoint;  // grid too narrow to bracket the minimum
};

/// Locates the minimum of E_b/N0 over the nominal SNR. `cfg` fixes T, B, N0
/// and gamma; the power is varied. The best grid point is refined by golden
/// section in log-SNR between its neighbours.
MinBitEnergy min_bit_energy_numeric(const LinkConfig& cfg, const QosSpec& qos,
                                    std::span<const double> snr_grid);

/// First-order description of the spectral efficiency curve at vanishing SNR
/// built from two samples, with R(x)/x = R'(0) + R''(0) x / 2.
struct LowSnrExpansion {
    double first_derivative;
    double second_derivative;
    double ebn0_at_zero;    // 1 / R'(0), linear
    double wideband_slope;  // -2 R'(0)^2 ln2 / R''(0)
};

LowSnrExpansion low_snr_expansion(double snr1, double se1, double snr2, double se2);

} // namespace effcap
