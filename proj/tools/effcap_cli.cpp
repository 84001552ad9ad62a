// effcap: parameter sweeps over the effective-capacity toolkit, CSV output.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "effcap/errors.hpp"
#include "effcap/queue_sim.hpp"
#include "effcap/sweep.hpp"

namespace {

enum ExitCode { kOk = 0, kDomain = 1, kConvergence = 2, kIo = 3 };

struct OptionSpec {
    const char* flag;
    const char* help;
};

constexpr OptionSpec kOptions[] = {
    {"frame-duration", "frame duration T in seconds"},
    {"gamma", "fading variance E|h|^2"},
    {"bandwidth", "bandwidth(s) in Hz, comma separated"},
    {"theta", "QoS exponent(s) in 1/bits, comma separated"},
    {"min", "axis minimum (SNR or bandwidth)"},
    {"max", "axis maximum"},
    {"points", "axis points"},
    {"spacing", "log or linear"},
    {"snr-min", "inner SNR grid minimum (ebn0min-vs-bandwidth)"},
    {"snr-max", "inner SNR grid maximum"},
    {"snr-points", "inner SNR grid points"},
    {"power-over-n0", "P/N0 in Hz (wideband-se-vs-ebn0)"},
    {"growth", "bounded:<N> | linear:<B_c> | sublinear:<exponent>:<N_ref>:<B_ref>"},
    {"subchannels", "number of subchannels N (asymptotics-table)"},
    {"power-over-nn0", "P/(N N0) (asymptotics-table)"},
    {"snr", "nominal SNR (queue-validate)"},
    {"frames", "simulated frames (queue-validate)"},
    {"margin", "fraction of the effective capacity offered (queue-validate)"},
    {"seed", "seed for stochastic jobs (default: $EFFCAP_SEED or 1)"},
    {"jobs", "worker threads (0: available parallelism)"},
    {"output,-o", "CSV output path (default: stdout)"},
};

const char* describe(effcap::sweep::Target t)
{
    using effcap::sweep::Target;
    switch (t) {
    case Target::RhoVsSnr:
        return "optimal training fraction against SNR";
    case Target::SeVsEbn0:
        return "spectral efficiency and bit energy of the jointly optimized link";
    case Target::Ebn0VsSnr:
        return "bit energy against SNR";
    case Target::Ebn0MinVsBandwidth:
        return "minimum bit energy against bandwidth";
    case Target::WidebandSeVsEbn0:
        return "wideband spectral efficiency along a bandwidth sweep";
    case Target::AsymptoticsTable:
        return "closed-form wideband minimum bit energy and slope";
    case Target::QueueValidate:
        return "simulated queue-tail decay rate against theta";
    }
    return "";
}

struct Subcommand {
    CLI::App* app = nullptr;
    effcap::sweep::Target target{};
    std::map<std::string, std::string> flags;
    std::string config;
};

} // namespace

int main(int argc, char** argv)
{
    using namespace effcap;

    CLI::App app{"Effective capacity, training and bit-energy sweeps for pilot-assisted fixed-rate links"};
    app.require_subcommand(1);

    std::map<std::string, Subcommand> subs;
    std::string run_config;
    CLI::App* run = app.add_subcommand("run", "run the job named by 'job = ...' in a config file");
    std::string run_output;
    run->add_option("config", run_config, "config file")->required();
    run->add_option("-o,--output", run_output, "CSV output path (default: stdout)");

    for (const auto target : sweep::all_targets()) {
        Subcommand& sub = subs[sweep::target_name(target)];
        sub.target = target;
        sub.app = app.add_subcommand(sweep::target_name(target), describe(target));
        sub.app->add_option("--config", sub.config, "plain-text 'key = value' file; flags override it");
        for (const auto& opt : kOptions) {
            std::string flag = opt.flag;
            const std::string key = flag.substr(0, flag.find(','));
            std::string names = "--" + flag;
            sub.app->add_option_function<std::string>(
                names, [&flags = sub.flags, key](const std::string& v) { flags[key] = v; }, opt.help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kDomain;
    }

    try {
        sweep::Options options;
        sweep::Target target{};
        if (run->parsed()) {
            options = sweep::read_config_file(run_config);
            const auto it = options.find("job");
            if (it == options.end())
                throw DomainError("config '" + run_config + "' has no 'job' entry");
            target = sweep::parse_target(it->second);
            if (!run_output.empty())
                options["output"] = run_output;
        } else {
            for (auto& [name, sub] : subs) {
                if (!sub.app->parsed())
                    continue;
                target = sub.target;
                if (!sub.config.empty())
                    options = sweep::read_config_file(sub.config);
                for (const auto& [k, v] : sub.flags)
                    options[k] = v;
            }
        }

        sweep::SweepJob job = sweep::make_job(target, options);
        if (!job.seed && job.stochastic()) {
            if (const char* env = std::getenv("EFFCAP_SEED"))
                job.seed = sweep::make_job(target, {{"seed", env}}).seed;
        }
        if (options.find("jobs") == options.end())
            job.jobs = 0;

        const sweep::SweepOutput out = sweep::run_sweep_to_file(job);
        if (job.output.empty()) {
            std::cout << out.csv;
            std::cerr << out.summary;
        } else {
            std::cout << out.summary;
        }
        return kOk;
    } catch (const sweep::IoError& e) {
        std::cerr << "effcap: I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const ConvergenceError& e) {
        std::cerr << "effcap: convergence failure: " << e.what() << "\n";
        return kConvergence;
    } catch (const std::exception& e) {
        std::cerr << "effcap: " << e.what() << "\n";
        return kDomain;
    }
}
