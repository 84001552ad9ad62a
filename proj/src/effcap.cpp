#include "effcap/effcap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "effcap/errors.hpp"
#include "effcap/scalar_search.hpp"
#include "effcap/training.hpp"

namespace effcap {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr std::size_t kMaxIterations = 200;

// Finds the root of an increasing f with f(0+) < 0, starting the bracket at x0.
double increasing_root(auto&& f, double x0)
{
    double lo = x0, hi = x0;
    double f_lo = f(x0), f_hi = f_lo;
    if (f_lo == 0.0)
        return x0;

    std::size_t steps = 0;
    if (f_lo < 0.0) {
        while (f_hi < 0.0) {
            if (++steps > kMaxIterations)
                throw ConvergenceError("rate search: no sign change after bracket expansion");
            lo = hi;
            f_lo = f_hi;
            hi *= 2.0;
            f_hi = f(hi);
        }
    } else {
        while (f_lo > 0.0) {
            if (++steps > kMaxIterations || !(lo > std::numeric_limits<double>::min()))
                throw ConvergenceError("rate search: no sign change after bracket shrinking");
            hi = lo;
            f_hi = f_lo;
            lo *= 0.5;
            f_lo = f(lo);
        }
    }
    if (f_lo == 0.0)
        return lo;
    if (f_hi == 0.0)
        return hi;

    const auto root = search::brent_root(f, lo, hi, f_lo, f_hi, 0.0, kMaxIterations);
    if (!(std::abs(root.fx) < kResidualTol))
        throw ConvergenceError("rate search: residual " + std::to_string(root.fx)
                               + " above tolerance");
    return root.x;
}

// Bits-per-frame exponent scale: alpha(r) = (2^{c r} - 1) / snr_eff.
double rate_exponent_scale(const LinkConfig& cfg)
{
    return cfg.frame_duration_s() / (cfg.symbols_per_frame() - 1.0);
}

double alpha_derivative(const LinkConfig& cfg, double rate_bps, double snr_eff)
{
    const double c = rate_exponent_scale(cfg);
    return std::exp2(c * rate_bps) * c * std::numbers::ln2 / snr_eff;
}

EffCapResult unusable_channel()
{
    EffCapResult res;
    res.alpha_opt = std::numeric_limits<double>::infinity();
    return res;
}

} // namespace

QosSpec::QosSpec(double theta) : theta_(theta)
{
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw DomainError("QoS exponent theta must be finite and nonnegative");
}

double effective_capacity_at_snr_eff(const LinkConfig& cfg, double theta, double rate_bps,
                                     double snr_eff)
{
    if (!(theta > 0.0))
        throw DomainError("effective capacity formula requires theta > 0; use the theta -> 0 limit");
    if (!(rate_bps >= 0.0))
        throw DomainError("rate must be nonnegative");
    if (rate_bps == 0.0 || !(snr_eff > 0.0))
        return 0.0;
    const double t = cfg.frame_duration_s();
    const double p_on = on_probability(outage_threshold(cfg, rate_bps, snr_eff));
    const double served = -std::expm1(-theta * t * rate_bps);
    return -std::log1p(-p_on * served) / (theta * t * cfg.bandwidth_hz());
}

double effective_capacity_at(const LinkConfig& cfg, const QosSpec& qos, double rate_bps,
                             double rho)
{
    return effective_capacity_at_snr_eff(cfg, qos.theta(), rate_bps,
                                         effective_snr(cfg, rho).effective_snr);
}

double rate_condition(const LinkConfig& cfg, double theta, double rate_bps, double snr_eff)
{
    const double t = cfg.frame_duration_s();
    const double decay = std::exp(-theta * t * rate_bps);
    return alpha_derivative(cfg, rate_bps, snr_eff) * -std::expm1(-theta * t * rate_bps)
           - theta * t * decay;
}

EffCapResult optimal_rate_for_snr_eff(const LinkConfig& cfg, double theta, double snr_eff)
{
    if (!(theta > 0.0))
        throw DomainError("optimal_rate requires theta > 0");
    if (!(snr_eff > 0.0))
        return unusable_channel();

    const double rate = increasing_root(
        [&](double r) { return rate_condition(cfg, theta, r, snr_eff); }, cfg.bandwidth_hz());

    EffCapResult res;
    res.rate_opt_bps = rate;
    res.snr_eff = snr_eff;
    res.alpha_opt = outage_threshold(cfg, rate, snr_eff);
    res.on_probability = on_probability(res.alpha_opt);
    res.spectral_efficiency = effective_capacity_at_snr_eff(cfg, theta, rate, snr_eff);
    return res;
}

EffCapResult optimal_rate(const LinkConfig& cfg, const QosSpec& qos, double rho)
{
    EffCapResult res = optimal_rate_for_snr_eff(cfg, qos.theta(), effective_snr(cfg, rho).effective_snr);
    res.rho_used = rho;
    return res;
}

EffCapResult theta0_for_snr_eff(const LinkConfig& cfg, double snr_eff)
{
    if (!(snr_eff > 0.0))
        return unusable_channel();

    // d/dr [r e^{-alpha(r)}] = e^{-alpha} (1 - r alpha'(r)); r alpha'(r) is increasing.
    const double rate = increasing_root(
        [&](double r) { return r * alpha_derivative(cfg, r, snr_eff) - 1.0; }, cfg.bandwidth_hz());

    EffCapResult res;
    res.rate_opt_bps = rate;
    res.snr_eff = snr_eff;
    res.alpha_opt = outage_threshold(cfg, rate, snr_eff);
    res.on_probability = on_probability(res.alpha_opt);
    res.spectral_efficiency = rate / cfg.bandwidth_hz() * res.on_probability;
    return res;
}

EffCapResult effective_capacity_theta0(const LinkConfig& cfg, double rho)
{
    EffCapResult res = theta0_for_snr_eff(cfg, effective_snr(cfg, rho).effective_snr);
    res.rho_used = rho;
    return res;
}

EffCapResult spectral_efficiency(const LinkConfig& cfg, const QosSpec& qos)
{
    const TrainingSolution training = optimal_training(cfg);
    EffCapResult res = qos.is_limit() ? theta0_for_snr_eff(cfg, training.snr_eff_opt)
                                      : optimal_rate_for_snr_eff(cfg, qos.theta(), training.snr_eff_opt);
    res.rho_used = training.rho_opt;
    return res;
}

double bit_energy(const LinkConfig& cfg, const QosSpec& qos)
{
    const double se = spectral_efficiency(cfg, qos).spectral_efficiency;
    if (!(se > 0.0))
        return std::numeric_limits<double>::infinity();
    return nominal_snr(cfg) / se;
}

double to_db(double ratio)
{
    return 10.0 * std::log10(ratio);
}

MinBitEnergy min_bit_energy_numeric(const LinkConfig& cfg, const QosSpec& qos,
                                    std::span<const double> snr_grid)
{
    if (snr_grid.size() < 16)
        throw DomainError("min_bit_energy_numeric: SNR grid needs at least 16 points");
    for (std::size_t i = 0; i < snr_grid.size(); ++i) {
        if (!(snr_grid[i] > 0.0) || (i > 0 && !(snr_grid[i] > snr_grid[i - 1])))
            throw DomainError("min_bit_energy_numeric: SNR grid must be positive and increasing");
    }

    const double n0_b = cfg.noise_psd() * cfg.bandwidth_hz();
    const auto ebn0_db_at = [&](double snr) {
        return to_db(bit_energy(cfg.with_avg_power(snr * n0_b), qos));
    };

    std::size_t best = 0;
    double best_db = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < snr_grid.size(); ++i) {
        const double v = ebn0_db_at(snr_grid[i]);
        if (v < best_db) {
            best_db = v;
            best = i;
        }
    }

    MinBitEnergy out{};
    out.grid_index = best;
    out.at_grid_endpoint = best == 0 || best + 1 == snr_grid.size();
    const double lo = std::log(snr_grid[best == 0 ? 0 : best - 1]);
    const double hi = std::log(snr_grid[std::min(best + 1, snr_grid.size() - 1)]);
    const auto refined = search::golden_section_minimize(
        [&](double log_snr) { return ebn0_db_at(std::exp(log_snr)); }, lo, hi, 1e-6);

    if (refined.fx <= best_db) {
        out.snr_at_min = std::exp(refined.x);
        out.ebn0_min_db = refined.fx;
    } else {
        out.snr_at_min = snr_grid[best];
        out.ebn0_min_db = best_db;
    }
    return out;
}

LowSnrExpansion low_snr_expansion(double snr1, double se1, double snr2, double se2)
{
    if (!(snr1 > 0.0) || !(snr2 > 0.0) || snr1 == snr2)
        throw DomainError("low_snr_expansion: need two distinct positive SNR samples");
    const double q1 = se1 / snr1;
    const double q2 = se2 / snr2;
    LowSnrExpansion out{};
    out.second_derivative = 2.0 * (q2 - q1) / (snr2 - snr1);
    out.first_derivative = q1 - 0.5 * out.second_derivative * snr1;
    out.ebn0_at_zero = 1.0 / out.first_derivative;
    out.wideband_slope = -2.0 * out.first_derivative * out.first_derivative * std::numbers::ln2
                         / out.second_derivative;
    return out;
}

} // namespace effcap
