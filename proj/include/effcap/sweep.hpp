#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace effcap::sweep {

inline constexpr const char* kVersion = "0.1.0";

enum class Target {
    RhoVsSnr,
    SeVsEbn0,
    Ebn0VsSnr,
    Ebn0MinVsBandwidth,
    WidebandSeVsEbn0,
    AsymptoticsTable,
    QueueValidate,
};

const char* target_name(Target t);
Target parse_target(std::string_view name);
const std::vector<Target>& all_targets();

struct Grid {
    double min = 1e-6;
    double max = 10.0;
    std::size_t points = 61;
    bool log_spacing = true;

    void validate(const char* what) const;
    std::vector<double> values() const;
};

struct SweepJob {
    Target target = Target::RhoVsSnr;
    Grid axis;  // SNR for the link targets, total bandwidth for the bandwidth targets

    double frame_duration_s = 2e-3;
    double gamma = 1.0;
    std::vector<double> bandwidths{1e5};
    std::vector<double> thetas{0.01};

    Grid snr_grid{1e-6, 10.0, 71, true};  // inner grid of ebn0min-vs-bandwidth

    double power_over_n0 = 1e4;  // wideband-se-vs-ebn0
    std::string growth = "bounded:1";

    std::size_t subchannels = 1;  // asymptotics-table
    double power_over_nn0 = 1e4;

    double snr = 1.0;  // queue-validate
    std::uint64_t frames = 10'000'000;
    double margin = 1.0;
    std::optional<std::uint64_t> seed;

    std::size_t jobs = 1;
    std::string output;

    bool stochastic() const { return target == Target::QueueValidate; }
};

/// Default job for a target (axis ranges that suit the target).
SweepJob default_job(Target target);

using Options = std::map<std::string, std::string>;

/// Reads `key = value` lines; '#' starts a comment. Keys are normalized to
/// snake_case.
Options parse_config_text(std::string_view text);
Options read_config_file(const std::string& path);

/// Applies options over the target defaults. An optional "job" key must
/// name the same target. Unknown keys and malformed values throw DomainError.
SweepJob make_job(Target target, const Options& options);

struct SweepOutput {
    std::string csv;
    std::string summary;
};

SweepOutput run_sweep(const SweepJob& job);

/// Runs the job and writes the CSV to job.output (stdout when empty is the
/// caller's business). Nothing is left on disk when the job fails.
SweepOutput run_sweep_to_file(const SweepJob& job);

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Formats with 12 significant digits; +inf prints as "inf"; NaN throws.
std::string format_value(double v);

} // namespace effcap::sweep
