#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "effcap/effcap.hpp"
#include "effcap/errors.hpp"
#include "effcap/link_model.hpp"
#include "effcap/queue_sim.hpp"
#include "effcap/sweep.hpp"
#include "effcap/training.hpp"
#include "effcap/wideband.hpp"

namespace py = pybind11;
using namespace effcap;

PYBIND11_MODULE(_effcap, m)
{
    m.doc() = "Effective capacity of pilot-assisted fixed-rate links under QoS constraints";
    m.attr("__version__") = sweep::kVersion;

    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<DegenerateQueueError>(m, "DegenerateQueueError", PyExc_RuntimeError);
    py::register_exception<InsufficientTailError>(m, "InsufficientTailError", PyExc_RuntimeError);

    py::class_<LinkConfig>(m, "LinkConfig")
        .def(py::init<double, double, double, double, double>(), py::arg("frame_duration_s"),
             py::arg("bandwidth_hz"), py::arg("noise_psd"), py::arg("avg_power_w"),
             py::arg("fading_variance") = 1.0)
        .def_static("from_snr", &LinkConfig::from_snr, py::arg("frame_duration_s"), py::arg("bandwidth_hz"),
                    py::arg("snr"), py::arg("fading_variance") = 1.0)
        .def_property_readonly("frame_duration_s", &LinkConfig::frame_duration_s)
        .def_property_readonly("bandwidth_hz", &LinkConfig::bandwidth_hz)
        .def_property_readonly("noise_psd", &LinkConfig::noise_psd)
        .def_property_readonly("avg_power_w", &LinkConfig::avg_power_w)
        .def_property_readonly("fading_variance", &LinkConfig::fading_variance);

    py::class_<QosSpec>(m, "QosSpec")
        .def(py::init<double>(), py::arg("theta"))
        .def_property_readonly("theta", &QosSpec::theta);

    py::class_<EstimateStats>(m, "EstimateStats")
        .def_readonly("estimate_variance", &EstimateStats::estimate_variance)
        .def_readonly("error_variance", &EstimateStats::error_variance)
        .def_readonly("effective_snr", &EstimateStats::effective_snr);

    py::class_<TrainingSolution>(m, "TrainingSolution")
        .def_readonly("rho_opt", &TrainingSolution::rho_opt)
        .def_readonly("eta", &TrainingSolution::eta)
        .def_readonly("snr_eff_opt", &TrainingSolution::snr_eff_opt);

    py::class_<EffCapResult>(m, "EffCapResult")
        .def_readonly("rate_opt_bps", &EffCapResult::rate_opt_bps)
        .def_readonly("alpha_opt", &EffCapResult::alpha_opt)
        .def_readonly("rho_used", &EffCapResult::rho_used)
        .def_readonly("snr_eff", &EffCapResult::snr_eff)
        .def_readonly("spectral_efficiency", &EffCapResult::spectral_efficiency)
        .def_readonly("on_probability", &EffCapResult::on_probability);

    py::class_<MinBitEnergy>(m, "MinBitEnergy")
        .def_readonly("snr_at_min", &MinBitEnergy::snr_at_min)
        .def_readonly("ebn0_min_db", &MinBitEnergy::ebn0_min_db)
        .def_readonly("at_grid_endpoint", &MinBitEnergy::at_grid_endpoint);

    py::class_<wideband::WidebandAsymptotics>(m, "WidebandAsymptotics")
        .def_readonly("phi", &wideband::WidebandAsymptotics::phi)
        .def_readonly("delta", &wideband::WidebandAsymptotics::delta)
        .def_readonly("alpha_star", &wideband::WidebandAsymptotics::alpha_star)
        .def_readonly("xi", &wideband::WidebandAsymptotics::xi)
        .def_readonly("ebn0_min", &wideband::WidebandAsymptotics::ebn0_min)
        .def_readonly("wideband_slope", &wideband::WidebandAsymptotics::wideband_slope)
        .def_readonly("rho_star", &wideband::WidebandAsymptotics::rho_star)
        .def_readonly("omega", &wideband::WidebandAsymptotics::omega)
        .def_readonly("r_star", &wideband::WidebandAsymptotics::r_star);

    py::class_<queue::TailEstimate>(m, "TailEstimate")
        .def_readonly("theta_hat", &queue::TailEstimate::theta_hat)
        .def_readonly("q_lo", &queue::TailEstimate::q_lo)
        .def_readonly("q_hi", &queue::TailEstimate::q_hi)
        .def_readonly("ci_halfwidth", &queue::TailEstimate::ci_halfwidth)
        .def_readonly("samples_in_tail", &queue::TailEstimate::samples_in_tail)
        .def_readonly("rng", &queue::TailEstimate::rng);

    m.def("nominal_snr", &nominal_snr);
    m.def("effective_snr", &effective_snr, py::arg("cfg"), py::arg("rho"));
    m.def("outage_threshold", &outage_threshold, py::arg("cfg"), py::arg("rate_bps"), py::arg("snr_eff"));
    m.def("optimal_training", &optimal_training, py::arg("cfg"));
    m.def("effective_capacity_at", &effective_capacity_at, py::arg("cfg"), py::arg("qos"),
          py::arg("rate_bps"), py::arg("rho"));
    m.def("optimal_rate", &optimal_rate, py::arg("cfg"), py::arg("qos"), py::arg("rho"));
    m.def("effective_capacity_theta0", &effective_capacity_theta0, py::arg("cfg"), py::arg("rho"));
    m.def("spectral_efficiency", &spectral_efficiency, py::arg("cfg"), py::arg("qos"));
    m.def("bit_energy", &bit_energy, py::arg("cfg"), py::arg("qos"));
    m.def("min_bit_energy_numeric", [](const LinkConfig& cfg, const QosSpec& qos, std::vector<double> grid) {
        return min_bit_energy_numeric(cfg, qos, grid);
    }, py::arg("cfg"), py::arg("qos"), py::arg("snr_grid"));

    m.def("poisson_binomial", [](std::vector<double> p) { return wideband::poisson_binomial(p); },
          py::arg("success_probabilities"));
    m.def("uniform_transition_probabilities",
          [](std::size_t n, double bc, double t, double n0, double power, double gamma, double rate) {
              return wideband::transition_probabilities(
                  wideband::WidebandConfig::uniform(n, bc, t, n0, power, gamma), rate);
          },
          py::arg("n"), py::arg("coherence_bandwidth_hz"), py::arg("frame_duration_s"), py::arg("noise_psd"),
          py::arg("avg_power_w"), py::arg("fading_variance"), py::arg("rate_bps"));
    m.def("asymptotics_sparse_bounded", &wideband::asymptotics_sparse_bounded, py::arg("theta"),
          py::arg("frame_duration_s"), py::arg("n"), py::arg("power_over_nn0"), py::arg("gamma"));
    m.def("asymptotics_numeric_check",
          [](double theta, double t, std::size_t n, double p, double gamma, std::vector<double> grid) {
              const auto r = wideband::asymptotics_numeric_check(theta, t, n, p, gamma, grid);
              return py::dict(py::arg("ebn0_min_db") = r.ebn0_min_db, py::arg("wideband_slope") = r.wideband_slope,
                              py::arg("last_decade_change_db") = r.last_decade_change_db,
                              py::arg("converged") = r.converged);
          },
          py::arg("theta"), py::arg("frame_duration_s"), py::arg("n"), py::arg("power_over_nn0"),
          py::arg("gamma"), py::arg("bc_grid"));
    m.def("classify_scenario", [](const std::string& descriptor) {
        return std::string(wideband::scenario_name(
            wideband::classify_scenario(wideband::GrowthLaw::parse(descriptor))));
    }, py::arg("growth"));

    m.def("simulate_queue",
          [](const LinkConfig& cfg, double theta, std::uint64_t frames, std::uint64_t seed, double margin) {
              return queue::simulate_queue({cfg, QosSpec(theta), frames, seed, margin});
          },
          py::arg("cfg"), py::arg("theta"), py::arg("frames") = 1'000'000, py::arg("seed") = 1,
          py::arg("arrival_margin") = 1.0);

    m.def("run_sweep", [](const std::string& job, const std::map<std::string, std::string>& options) {
        return sweep::run_sweep(sweep::make_job(sweep::parse_target(job), options)).csv;
    }, py::arg("job"), py::arg("options") = std::map<std::string, std::string>{});
}
