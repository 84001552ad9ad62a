#include "effcap/wideband.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "effcap/errors.hpp"
#include "effcap/training.hpp"

namespace effcap::wideband {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(name) + " must be positive and finite");
}

} // namespace

void WidebandConfig::validate() const
{
    if (num_subchannels == 0)
        throw DomainError("WidebandConfig: need at least one subchannel");
    require_positive(coherence_bandwidth_hz, "coherence_bandwidth_hz");
    if (!(coherence_bandwidth_hz * link.frame_duration_s() > 2.0))
        throw DomainError("WidebandConfig: T * B_c must exceed 2");
    const double total_bw = static_cast<double>(num_subchannels) * coherence_bandwidth_hz;
    if (std::abs(link.bandwidth_hz() - total_bw) > 1e-12 * total_bw)
        throw DomainError("WidebandConfig: link bandwidth must equal N * B_c");
    if (per_subchannel_variances.size() != num_subchannels
        || per_subchannel_powers.size() != num_subchannels
        || per_subchannel_rho.size() != num_subchannels)
        throw DomainError("WidebandConfig: per-subchannel lists must have N entries");

    double power_sum = 0.0;
    for (std::size_t k = 0; k < num_subchannels; ++k) {
        require_positive(per_subchannel_variances[k], "subchannel variance");
        if (!(per_subchannel_powers[k] >= 0.0))
            throw DomainError("WidebandConfig: subchannel powers must be nonnegative");
        if (!(per_subchannel_rho[k] >= 0.0 && per_subchannel_rho[k] <= 1.0))
            throw DomainError("WidebandConfig: subchannel rho must lie in [0, 1]");
        power_sum += per_subchannel_powers[k];
    }
    if (power_sum > link.avg_power_w() * (1.0 + 1e-12))
        throw DomainError("WidebandConfig: subchannel powers exceed the power budget");
}

WidebandConfig WidebandConfig::uniform(std::size_t n, double coherence_bandwidth_hz,
                                       double frame_duration_s, double noise_psd,
                                       double avg_power_w, double fading_variance, double rho)
{
    if (n == 0)
        throw DomainError("WidebandConfig: need at least one subchannel");
    const double nd = static_cast<double>(n);
    WidebandConfig w{
        n,
        coherence_bandwidth_hz,
        LinkConfig(frame_duration_s, nd * coherence_bandwidth_hz, noise_psd, avg_power_w,
                   fading_variance),
        std::vector<double>(n, fading_variance),
        std::vector<double>(n, avg_power_w / nd),
        {},
    };
    if (rho < 0.0) {
        const LinkConfig sub(frame_duration_s, coherence_bandwidth_hz, noise_psd, avg_power_w / nd,
                             fading_variance);
        rho = optimal_training(sub).rho_opt;
    }
    w.per_subchannel_rho.assign(n, rho);
    w.validate();
    return w;
}

LinkConfig WidebandConfig::subchannel_link(std::size_t k) const
{
    return LinkConfig(link.frame_duration_s(), coherence_bandwidth_hz, link.noise_psd(),
                      per_subchannel_powers.at(k), per_subchannel_variances.at(k));
}

bool WidebandConfig::is_iid_uniform() const
{
    const auto all_equal = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    return all_equal(per_subchannel_variances) && all_equal(per_subchannel_powers)
           && all_equal(per_subchannel_rho);
}

std::vector<double> poisson_binomial(std::span<const double> success_probabilities)
{
    std::vector<double> dist(success_probabilities.size() + 1, 0.0);
    dist[0] = 1.0;
    std::size_t seen = 0;
    for (const double p : success_probabilities) {
        ++seen;
        for (std::size_t j = seen; j > 0; --j)
            dist[j] = dist[j] * (1.0 - p) + dist[j - 1] * p;
        dist[0] *= 1.0 - p;
    }
    return dist;
}

std::vector<double> transition_probabilities(const WidebandConfig& wcfg, double rate_bps)
{
    wcfg.validate();
    if (!(rate_bps >= 0.0))
        throw DomainError("rate must be nonnegative");

    std::vector<double> p_on(wcfg.num_subchannels);
    for (std::size_t k = 0; k < wcfg.num_subchannels; ++k) {
        if (rate_bps == 0.0) {
            p_on[k] = 1.0;
            continue;
        }
        if (wcfg.per_subchannel_powers[k] == 0.0) {
            p_on[k] = 0.0;
            continue;
        }
        const LinkConfig sub = wcfg.subchannel_link(k);
        const double snr_eff = effective_snr(sub, wcfg.per_subchannel_rho[k]).effective_snr;
        p_on[k] = snr_eff > 0.0 ? on_probability(outage_threshold(sub, rate_bps, snr_eff)) : 0.0;
    }
    return poisson_binomial(p_on);
}

double effective_capacity_wideband(const WidebandConfig& wcfg, const QosSpec& qos, double rate_bps)
{
    if (qos.is_limit())
        throw DomainError("wideband effective capacity requires theta > 0");
    const std::vector<double> p = transition_probabilities(wcfg, rate_bps);
    const double theta_rt = qos.theta() * rate_bps * wcfg.link.frame_duration_s();

    // Both sums have nonnegative terms. The direct one is accurate when the
    // result is small and the loss form 1 - sum_j p_j (1 - e^{-theta j r T})
    // when it is close to one.
    double kept = 0.0, loss = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double x = theta_rt * static_cast<double>(j);
        kept += p[j] * std::exp(-x);
        loss += p[j] * -std::expm1(-x);
    }
    const double log_sum = kept < 0.5 ? std::log(kept) : std::log1p(-loss);
    return -log_sum / (qos.theta() * wcfg.link.frame_duration_s() * wcfg.link.bandwidth_hz());
}

EffCapResult optimize_wideband_iid(const WidebandConfig& wcfg, const QosSpec& qos)
{
    wcfg.validate();
    if (!wcfg.is_iid_uniform())
        throw DomainError("optimize_wideband_iid: subchannels must be i.i.d. with uniform power and training");
    const double nd = static_cast<double>(wcfg.num_subchannels);
    const LinkConfig sub(wcfg.link.frame_duration_s(), wcfg.coherence_bandwidth_hz,
                         wcfg.link.noise_psd(), wcfg.link.avg_power_w() / nd,
                         wcfg.per_subchannel_variances.front());
    return spectral_efficiency(sub, qos);
}

WidebandAsymptotics asymptotics_sparse_bounded(double theta, double frame_duration_s,
                                               std::size_t n, double power_over_nn0, double gamma)
{
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw DomainError("theta must be finite and nonnegative");
    require_positive(frame_duration_s, "frame duration");
    require_positive(power_over_nn0, "P/(N N0)");
    require_positive(gamma, "fading variance");
    if (n == 0)
        throw DomainError("need at least one subchannel");

    const double t = frame_duration_s;
    const double g = gamma * power_over_nn0;  // gamma P / (N N0)
    const double x = 1.0 / (g * t);           // N N0 / (gamma P T)
    const double gap = std::sqrt(1.0 + x) - std::sqrt(x);
    const double root_gt = std::sqrt(1.0 + g * t);

    WidebandAsymptotics a{};
    a.phi = g * gap * gap;
    a.rho_star = 1.0 / (1.0 + std::sqrt(1.0 + 1.0 / x));
    a.rho_dot0 = root_gt * gap * gap / (2.0 * t);
    a.omega = -(g / t) * gap * gap * (root_gt - 2.0);

    const double bracket_no_alpha = 1.0 / t - a.omega / a.phi;
    if (theta == 0.0) {
        // Limits of -delta ln2 / ln xi and of the slope expression as theta -> 0.
        a.alpha_star = 1.0;
        a.delta = 0.0;
        a.xi = 1.0;
        a.r_star = a.phi / kLn2;
        a.ebn0_min = power_over_nn0 * std::numbers::e * kLn2 / a.phi;
        a.wideband_slope = a.phi / (std::numbers::e * (bracket_no_alpha + a.phi / 2.0));
        return a;
    }

    const double y = theta * t * a.phi / kLn2;
    a.alpha_star = std::log1p(y) / y;
    a.r_star = a.phi * a.alpha_star / kLn2;
    a.delta = theta * t * power_over_nn0 / kLn2;
    const double loss = std::exp(-a.alpha_star) * -std::expm1(-theta * t * a.r_star);
    a.xi = 1.0 - loss;
    const double log_xi = std::log1p(-loss);
    a.ebn0_min = -a.delta * kLn2 / log_xi;
    a.wideband_slope = a.xi * log_xi * log_xi * kLn2
                       / (theta * t * a.alpha_star * loss
                          * (bracket_no_alpha + a.phi * a.alpha_star / 2.0));
    return a;
}

double limiting_rate_condition(const WidebandAsymptotics& a, double theta, double frame_duration_s)
{
    const double tt = theta * frame_duration_s;
    return (kLn2 / a.phi) * -std::expm1(-tt * a.phi * a.alpha_star / kLn2)
           - tt * std::exp(-tt * a.r_star);
}

std::size_t GrowthLaw::subchannels(double bandwidth_hz) const
{
    double n = 1.0;
    switch (kind) {
    case GrowthKind::Bounded:
        n = scale;
        break;
    case GrowthKind::Linear:
        n = bandwidth_hz / reference_bandwidth_hz;
        break;
    case GrowthKind::Sublinear:
        n = scale * std::pow(bandwidth_hz / reference_bandwidth_hz, exponent);
        break;
    }
    return static_cast<std::size_t>(std::max(1.0, std::round(n)));
}

GrowthLaw GrowthLaw::parse(const std::string& descriptor)
{
    std::vector<std::string> parts;
    std::stringstream ss(descriptor);
    for (std::string tok; std::getline(ss, tok, ':');)
        parts.push_back(tok);

    const auto number = [&](std::size_t i) {
        try {
            std::size_t used = 0;
            const double v = std::stod(parts.at(i), &used);
            if (used != parts[i].size())
                throw DomainError("");
            return v;
        } catch (const std::exception&) {
            throw DomainError("bad growth-law descriptor '" + descriptor + "'");
        }
    };

    GrowthLaw law;
    if (!parts.empty() && parts[0] == "bounded" && parts.size() == 2) {
        law.kind = GrowthKind::Bounded;
        law.scale = number(1);
        if (!(law.scale >= 1.0))
            throw DomainError("bounded growth law needs N >= 1");
    } else if (!parts.empty() && parts[0] == "linear" && parts.size() == 2) {
        law.kind = GrowthKind::Linear;
        law.reference_bandwidth_hz = number(1);
        require_positive(law.reference_bandwidth_hz, "coherence bandwidth");
    } else if (!parts.empty() && parts[0] == "sublinear" && parts.size() == 4) {
        law.kind = GrowthKind::Sublinear;
        law.exponent = number(1);
        law.scale = number(2);
        law.reference_bandwidth_hz = number(3);
        require_positive(law.scale, "reference subchannel count");
        require_positive(law.reference_bandwidth_hz, "reference bandwidth");
    } else {
        throw DomainError("unknown growth-law descriptor '" + descriptor + "'");
    }
    classify_scenario(law);
    return law;
}

Scenario classify_scenario(const GrowthLaw& law)
{
    switch (law.kind) {
    case GrowthKind::Linear:
        return Scenario::Rich;
    case GrowthKind::Bounded:
        return Scenario::SparseBounded;
    case GrowthKind::Sublinear:
        if (law.exponent > 0.0 && law.exponent < 1.0)
            return Scenario::SparseUnbounded;
        break;
    }
    throw DomainError("sublinear growth exponent must lie in (0, 1)");
}

const char* scenario_name(Scenario s)
{
    switch (s) {
    case Scenario::Rich:
        return "rich";
    case Scenario::SparseBounded:
        return "sparse_bounded";
    case Scenario::SparseUnbounded:
        return "sparse_unbounded";
    }
    return "unknown";
}

bool has_finite_minimum(Scenario s)
{
    return s == Scenario::SparseBounded;
}

std::vector<BandwidthPoint> bandwidth_sweep(double theta, double frame_duration_s, double gamma,
                                            double power_over_n0, const GrowthLaw& law,
                                            std::span<const double> bandwidth_grid)
{
    require_positive(power_over_n0, "P/N0");
    const QosSpec qos(theta);
    std::vector<BandwidthPoint> out;
    out.reserve(bandwidth_grid.size());
    for (const double b : bandwidth_grid) {
        require_positive(b, "bandwidth");
        const std::size_t n = law.subchannels(b);
        const double bc = b / static_cast<double>(n);
        const WidebandConfig w =
            WidebandConfig::uniform(n, bc, frame_duration_s, 1.0, power_over_n0, gamma);
        const EffCapResult r = optimize_wideband_iid(w, qos);

        BandwidthPoint pt{};
        pt.bandwidth_hz = b;
        pt.subchannels = n;
        pt.coherence_bandwidth_hz = bc;
        pt.snr = power_over_n0 / b;
        pt.spectral_efficiency = r.spectral_efficiency;
        pt.ebn0 = r.spectral_efficiency > 0.0 ? pt.snr / r.spectral_efficiency
                                              : std::numeric_limits<double>::infinity();
        out.push_back(pt);
    }
    return out;
}

NumericAsymptote extrapolate_sweep(std::span<const BandwidthPoint> sweep)
{
    if (sweep.size() < 2)
        throw DomainError("extrapolation needs at least two bandwidth points");
    const BandwidthPoint& last = sweep.back();
    const BandwidthPoint& prev = sweep[sweep.size() - 2];
    if (!(last.bandwidth_hz > prev.bandwidth_hz))
        throw DomainError("bandwidth grid must be increasing");

    // Grid point closest (in log scale) to one decade below the largest bandwidth.
    const double target = std::log10(last.bandwidth_hz) - 1.0;
    const BandwidthPoint* decade = &sweep.front();
    for (const auto& pt : sweep) {
        if (std::abs(std::log10(pt.bandwidth_hz) - target)
            < std::abs(std::log10(decade->bandwidth_hz) - target))
            decade = &pt;
    }

    NumericAsymptote out{};
    out.last_decade_change_db = to_db(last.ebn0) - to_db(decade->ebn0);
    out.converged = std::abs(out.last_decade_change_db) <= 0.05;

    const LowSnrExpansion ex =
        low_snr_expansion(last.snr, last.spectral_efficiency, prev.snr, prev.spectral_efficiency);
    out.ebn0_min_db = to_db(ex.ebn0_at_zero);
    out.wideband_slope = ex.wideband_slope;
    return out;
}

NumericAsymptote asymptotics_numeric_check(double theta, double frame_duration_s, std::size_t n,
                                           double power_over_nn0, double gamma,
                                           std::span<const double> bc_grid)
{
    if (bc_grid.size() < 2)
        throw DomainError("B_c grid needs at least two points");
    if (!(bc_grid.back() >= 1e3 * bc_grid.front() * (1.0 - 1e-9)))
        throw DomainError("B_c grid must span at least three decades");

    const double nd = static_cast<double>(n);
    GrowthLaw law;
    law.kind = GrowthKind::Bounded;
    law.scale = nd;
    std::vector<double> bandwidths(bc_grid.begin(), bc_grid.end());
    for (double& b : bandwidths)
        b *= nd;
    const double power_over_n0 = power_over_nn0 * nd;
    const auto sweep = bandwidth_sweep(theta, frame_duration_s, gamma, power_over_n0, law, bandwidths);
    return extrapolate_sweep(sweep);
}

} // namespace effcap::wideband
