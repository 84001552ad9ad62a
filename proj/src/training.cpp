#include "effcap/training.hpp"

#include <cmath>

namespace effcap {

TrainingSolution optimal_training(const LinkConfig& cfg)
{
    const double tb = cfg.symbols_per_frame();
    const double gtb_snr = cfg.fading_variance() * tb * nominal_snr(cfg);

    TrainingSolution sol{};
    sol.eta = (gtb_snr + tb - 1.0) / (gtb_snr * (tb - 2.0));
    // sqrt(eta^2 + eta) - eta without the cancellation at large eta.
    sol.rho_opt = 1.0 / (1.0 + std::sqrt(1.0 + 1.0 / sol.eta));
    sol.snr_eff_opt = effective_snr(cfg, sol.rho_opt).effective_snr;
    return sol;
}

} // namespace effcap
