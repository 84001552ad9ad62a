// Acceptance suite: one PASS/FAIL line per criterion. Optional argument: path
// to the effcap executable for the CLI determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "effcap/effcap.hpp"
#include "effcap/queue_sim.hpp"
#include "effcap/sweep.hpp"
#include "effcap/training.hpp"
#include "effcap/wideband.hpp"
#include "support/oracles.hpp"

using namespace effcap;
namespace wb = effcap::wideband;

namespace {

constexpr double kT = 2e-3;
const std::vector<double> kThetas{0.001, 0.01, 0.1, 1.0};

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failure and keeps the worst value seen.
class Check {
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok && out_.pass) {
            out_.pass = false;
            out_.detail = what;
        }
    }
    void note(const std::string& s)
    {
        if (out_.pass)
            out_.detail = s;
    }
    Outcome result() const { return out_; }

private:
    Outcome out_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Outcome criterion1()
{
    Check c;
    const double thetas[] = {0.0, 0.001, 0.01, 0.1, 1.0};
    const double eb[] = {4.6776, 4.7029, 4.9177, 6.3828, 10.8333};
    const double s0[] = {0.4720, 0.4749, 0.4978, 0.6151, 0.6061};
    double worst_eb = 0.0, worst_s0 = 0.0;
    for (int i = 0; i < 5; ++i) {
        const auto a = wb::asymptotics_sparse_bounded(thetas[i], kT, 1, 1e4, 1.0);
        const double de = std::abs(to_db(a.ebn0_min) - eb[i]);
        const double ds = std::abs(a.wideband_slope - s0[i]);
        worst_eb = std::max(worst_eb, de);
        worst_s0 = std::max(worst_s0, ds);
        c.require(de <= 0.005, fmt("theta=%g: Eb/NN0_min off by %.4g dB", thetas[i], de));
        c.require(ds <= 5e-4, fmt("theta=%g: S0 off by %.3g", thetas[i], ds));
    }
    c.note(fmt("max |dEb| = %.2e dB, max |dS0| = %.2e", worst_eb, worst_s0));
    return c.result();
}

Outcome criterion2()
{
    Check c;
    const auto grid = oracle::log_grid(1e7, 1e10, 16);
    double worst_eb = 0.0, worst_s0 = 0.0;
    for (const double theta : kThetas) {
        const auto a = wb::asymptotics_sparse_bounded(theta, kT, 1, 1e4, 1.0);
        const auto n = wb::asymptotics_numeric_check(theta, kT, 1, 1e4, 1.0, grid);
        const double de = std::abs(n.ebn0_min_db - to_db(a.ebn0_min));
        const double ds = std::abs(n.wideband_slope / a.wideband_slope - 1.0);
        worst_eb = std::max(worst_eb, de);
        worst_s0 = std::max(worst_s0, ds);
        c.require(n.converged, fmt("theta=%g: numeric limit did not converge", theta));
        c.require(de <= 0.05, fmt("theta=%g: Eb/NN0 differs by %.4g dB", theta, de));
        c.require(ds <= 0.05, fmt("theta=%g: S0 differs by %.3g relative", theta, ds));
    }
    c.note(fmt("max |dEb| = %.2e dB, max rel dS0 = %.2e", worst_eb, worst_s0));
    return c.result();
}

Outcome criterion3()
{
    Check c;
    const auto snrs = oracle::log_grid(1e-6, 1e3, 100);
    const auto rates = oracle::log_grid(1e-16, 10.0, 200);  // multiples of B
    double worst_rho = 0.0, worst_excess = -1.0;
    for (const double b : {1e5, 1e7}) {
        for (const double snr : snrs) {
            const LinkConfig cfg = LinkConfig::from_snr(kT, b, snr);
            const double rho = optimal_training(cfg).rho_opt;
            const double d = std::abs(rho - oracle::rho_opt_numeric(cfg));
            worst_rho = std::max(worst_rho, d);
            c.require(d <= 1e-9, fmt("B=%g SNR=%g: rho_opt off by %.3g", b, snr, d));

            std::vector<double> snr_eff(199);
            for (int i = 1; i < 200; ++i)
                snr_eff[i - 1] = oracle::snr_eff_from_energies(cfg, i / 200.0);
            for (const double theta : kThetas) {
                const double composed = spectral_efficiency(cfg, QosSpec(theta)).spectral_efficiency;
                double best = 0.0;
                for (const double se : snr_eff)
                    for (const double r : rates)
                        best = std::max(best, oracle::ec_objective_fast(kT, b, theta, r * b, se));
                const double excess = best / composed - 1.0;
                worst_excess = std::max(worst_excess, excess);
                c.require(excess <= 1e-6, fmt("B=%g SNR=%g: grid beats optimum by %.3g", b, snr, excess));
            }
        }
    }
    c.note(fmt("max |d rho| = %.2e, max grid excess = %.2e", worst_rho, worst_excess));
    return c.result();
}

Outcome criterion4()
{
    Check c;
    const double low = optimal_training(LinkConfig::from_snr(kT, 1e7, 1e-8)).rho_opt;
    const double high = optimal_training(LinkConfig::from_snr(kT, 1e7, 1e6)).rho_opt;
    c.require(low >= 0.499 && low <= 0.501, fmt("rho_opt(1e-8) = %.6f", low));
    c.require(high >= 0.0065 && high <= 0.0075, fmt("rho_opt(1e6) = %.6f", high));
    c.note(fmt("rho_opt(1e-8) = %.6f, rho_opt(1e6) = %.6f", low, high));
    return c.result();
}

Outcome criterion5()
{
    Check c;
    double worst = 0.0;
    for (const double b : {1e5, 1e7}) {
        for (const double snr : oracle::log_grid(1e-6, 1e3, 100)) {
            const LinkConfig cfg = LinkConfig::from_snr(kT, b, snr);
            for (const double theta : kThetas) {
                const EffCapResult r = spectral_efficiency(cfg, QosSpec(theta));
                const double res = std::abs(rate_condition(cfg, theta, r.rate_opt_bps, r.snr_eff));
                worst = std::max(worst, res);
                c.require(res < 1e-12, fmt("B=%g SNR=%g theta=%g: residual", b, snr, theta));
            }
        }
    }
    c.note(fmt("max |residual| = %.2e", worst));
    return c.result();
}

Outcome criterion6()
{
    Check c;
    const auto grid = oracle::log_grid(1e-6, 10.0, 71);
    for (const double theta : kThetas) {
        const QosSpec qos(theta);
        const LinkConfig cfg = LinkConfig::from_snr(kT, 1e5, 1.0);
        const MinBitEnergy m = min_bit_energy_numeric(cfg, qos, grid);
        c.require(!m.at_grid_endpoint, fmt("theta=%g: minimizer at a grid endpoint", theta));
        double prev = m.ebn0_min_db;
        for (const double snr : oracle::log_grid(m.snr_at_min / 1.01, m.snr_at_min / 100.0, 60)) {
            const double eb = to_db(bit_energy(LinkConfig::from_snr(kT, 1e5, snr), qos));
            c.require(eb > prev, fmt("theta=%g: Eb/N0 not increasing at SNR=%g", theta, snr));
            prev = eb;
        }
    }

    // Monotonicity in theta (each B) and in B (each theta).
    const auto wide_grid = oracle::log_grid(1e-9, 10.0, 101);
    const double bandwidths[] = {1e4, 1e5, 1e6, 1e7};
    std::vector<std::vector<double>> table;
    for (const double theta : kThetas) {
        std::vector<double> row;
        for (const double b : bandwidths) {
            const MinBitEnergy m = min_bit_energy_numeric(LinkConfig::from_snr(kT, b, 1.0), QosSpec(theta), wide_grid);
            c.require(!m.at_grid_endpoint, fmt("theta=%g B=%g: minimizer at a grid endpoint", theta, b));
            row.push_back(m.ebn0_min_db);
        }
        table.push_back(row);
    }
    for (std::size_t i = 0; i < table.size(); ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i > 0)
                c.require(table[i][j] >= table[i - 1][j],
                          fmt("B=%g: Eb/N0_min decreases between theta=%g and %g", bandwidths[j], kThetas[i - 1], kThetas[i]));
            if (j > 0)
                c.require(table[i][j] <= table[i][j - 1],
                          fmt("theta=%g: Eb/N0_min increases between B=%g and %g", kThetas[i], bandwidths[j - 1], bandwidths[j]));
        }
    c.note(fmt("Eb/N0_min at B=1e5: %.3f dB (theta=0.001) .. %.3f dB (theta=1)", table[0][1], table[3][1]));
    return c.result();
}

Outcome criterion7()
{
    Check c;
    std::mt19937_64 gen(2024);
    double worst_p = 0.0;
    std::uniform_int_distribution<std::size_t> size(1, 12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = size(gen);
        const double bc = 2e3 + 1e5 * u(gen);
        const double total = 1e3 * bc * (0.05 + u(gen));
        wb::WidebandConfig w{n, bc, LinkConfig(kT, double(n) * bc, 1.0, total, 1.0), {}, {}, {}};
        std::vector<double> share(n);
        double sum = 0.0;
        for (double& s : share)
            sum += (s = 0.05 + u(gen));
        for (std::size_t k = 0; k < n; ++k) {
            w.per_subchannel_variances.push_back(0.2 + 2.8 * u(gen));
            w.per_subchannel_powers.push_back(total * share[k] / sum * (1.0 - 1e-14));
            w.per_subchannel_rho.push_back(0.02 + 0.58 * u(gen));
        }
        const double rate = 4.0 * bc * u(gen);
        std::vector<double> on(n);
        for (std::size_t k = 0; k < n; ++k) {
            const LinkConfig sub = w.subchannel_link(k);
            const double se = oracle::snr_eff_from_energies(sub, w.per_subchannel_rho[k]);
            on[k] = std::exp(-(std::pow(2.0, rate * kT / (kT * bc - 1.0)) - 1.0) / se);
        }
        const auto expect = oracle::subset_enumeration(on);
        const auto got = wb::transition_probabilities(w, rate);
        for (std::size_t j = 0; j <= n; ++j) {
            worst_p = std::max(worst_p, std::abs(got[j] - expect[j]));
            c.require(std::abs(got[j] - expect[j]) <= 1e-12, fmt("trial %g: p_j mismatch %.3g", trial, std::abs(got[j] - expect[j])));
        }
    }

    double worst_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(40 * u(gen));
        const double bc = std::exp(std::log(2e3) + u(gen) * std::log(5e3));
        const double snr = std::exp(std::log(1e-3) + u(gen) * std::log(1e5));
        const QosSpec qos(std::exp(std::log(1e-4) + u(gen) * std::log(2e4)));
        const auto w = wb::WidebandConfig::uniform(n, bc, kT, 1.0, snr * bc * double(n), 1.0);
        const LinkConfig sub = LinkConfig::from_snr(kT, bc, snr);
        const double rho = w.per_subchannel_rho.front();
        const double rate = (0.05 + 3.0 * u(gen)) * optimal_rate(sub, qos, rho).rate_opt_bps;
        const double general = wb::effective_capacity_wideband(w, qos, rate);
        const double reduced = effective_capacity_at(sub, qos, rate, rho);
        const double rel = std::abs(general / reduced - 1.0);
        worst_rel = std::max(worst_rel, rel);
        c.require(rel <= 1e-10, fmt("trial %g: general vs i.i.d. form differ by %.3g", trial, rel));
    }
    c.note(fmt("max |dp| = %.2e, max rel dR_E = %.2e", worst_p, worst_rel));
    return c.result();
}

Outcome criterion8()
{
    Check c;
    const auto grid = oracle::log_grid(1e6, 1e12, 25);
    double grow_change = 0.0, fixed_change = 0.0;
    for (const double theta : {0.0, 0.01, 1.0}) {
        const auto grow = wb::bandwidth_sweep(theta, kT, 1.0, 1e4, wb::GrowthLaw::parse("sublinear:0.5:1:1e4"), grid);
        const auto fixed = wb::bandwidth_sweep(theta, kT, 1.0, 1e4, wb::GrowthLaw::parse("bounded:1"), grid);
        const auto g = wb::extrapolate_sweep(grow);
        const auto f = wb::extrapolate_sweep(fixed);
        if (theta == 0.01) {
            grow_change = g.last_decade_change_db;
            fixed_change = f.last_decade_change_db;
        }
        c.require(g.last_decade_change_db > 3.0, fmt("theta=%g: sublinear last-decade change %.3f dB", theta, g.last_decade_change_db));
        c.require(f.converged, fmt("theta=%g: fixed-N last-decade change %.3f dB", theta, f.last_decade_change_db));
    }
    c.note(fmt("theta=0.01: sublinear +%.2f dB, fixed N %.3f dB over the last decade", grow_change, fixed_change));
    return c.result();
}

Outcome criterion9()
{
    Check c;
    std::string detail;
    for (const double theta : {0.005, 0.01, 0.05}) {
        queue::SimSpec spec{LinkConfig::from_snr(kT, 1e5, 1.0), QosSpec(theta)};
        spec.frames = 10'000'000;
        spec.seed = 1;
        const auto e = queue::simulate_queue(spec);
        const double ratio = e.theta_hat / theta;
        c.require(ratio >= 0.85 && ratio <= 1.15, fmt("theta=%g: theta_hat/theta = %.4f", theta, ratio));
        c.require(std::abs(e.theta_hat - theta) <= e.ci_halfwidth,
                  fmt("theta=%g: CI half-width %.3g does not cover (error %.3g)", theta, e.ci_halfwidth,
                      std::abs(e.theta_hat - theta)));
        detail += fmt("%.4f ", ratio);
    }
    c.note("theta_hat/theta = " + detail);
    return c.result();
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome criterion10(const char* cli)
{
    Check c;
    int compared = 0;
    if (cli != nullptr) {
        const auto dir = std::filesystem::temp_directory_path() / "effcap_acceptance";
        std::filesystem::create_directories(dir);
        for (const auto& entry : std::filesystem::directory_iterator(EFFCAP_CONFIG_DIR)) {
            if (entry.path().extension() != ".cfg")
                continue;
            std::string outs[2];
            for (int k = 0; k < 2; ++k) {
                const auto out = dir / (entry.path().stem().string() + std::to_string(k) + ".csv");
                const std::string cmd = std::string("\"") + cli + "\" run \"" + entry.path().string() + "\" -o \""
                                        + out.string() + "\" > /dev/null";
                c.require(std::system(cmd.c_str()) == 0, "command failed: " + cmd);
                outs[k] = slurp(out);
            }
            c.require(!outs[0].empty() && outs[0] == outs[1], entry.path().filename().string() + ": outputs differ");
            ++compared;
        }
        std::filesystem::remove_all(dir);
    }
    // Library path, including a stochastic job under different worker counts.
    for (const auto t : sweep::all_targets()) {
        sweep::Options o{{"points", "6"}, {"jobs", "1"}};
        if (t == sweep::Target::QueueValidate)
            o = {{"frames", "1000000"}, {"seed", "42"}, {"jobs", "1"}};
        if (t == sweep::Target::AsymptoticsTable)
            o = {{"jobs", "1"}};
        const std::string a = sweep::run_sweep(sweep::make_job(t, o)).csv;
        o["jobs"] = "4";
        const std::string b = sweep::run_sweep(sweep::make_job(t, o)).csv;
        c.require(a == b, std::string(sweep::target_name(t)) + ": library output differs");
        ++compared;
    }
    c.note(fmt("%g jobs rerun with identical bytes", compared));
    return c.result();
}

} // namespace

int main(int argc, char** argv)
{
    const char* cli = argc > 1 ? argv[1] : nullptr;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"closed-form wideband golden numbers", criterion1},
        {"closed-form vs numeric B_c limit", criterion2},
        {"training fraction and joint optimum oracles", criterion3},
        {"training fraction limits", criterion4},
        {"rate stationarity residual", criterion5},
        {"bit energy divergence at low SNR", criterion6},
        {"wideband state-model equivalence", criterion7},
        {"sublinear subchannel growth diverges", criterion8},
        {"queue-tail calibration", criterion9},
        {"determinism", [cli] { return criterion10(cli); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %zu (%s): %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
