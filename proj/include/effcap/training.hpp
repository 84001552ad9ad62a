#pragma once

#include "effcap/link_model.hpp"

namespace effcap {

struct TrainingSolution {
    double rho_opt;
    double eta;
    double snr_eff_opt;
};

/// Training-energy fraction that maximizes the effective SNR.
///
/// rho_opt = sqrt(eta(eta+1)) - eta with
/// eta = (gamma TB SNR + TB - 1) / (gamma TB (TB-2) SNR). The maximizer of the
/// effective SNR also maximizes the effective capacity for every QoS exponent
/// and rate, so no QoS input is taken.
TrainingSolution optimal_training(const LinkConfig& cfg);

} // namespace effcap
