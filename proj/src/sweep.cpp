#include "effcap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "effcap/effcap.hpp"
#include "effcap/errors.hpp"
#include "effcap/queue_sim.hpp"
#include "effcap/rng.hpp"
#include "effcap/training.hpp"
#include "effcap/wideband.hpp"

namespace effcap::sweep {

namespace {

struct TargetInfo {
    Target target;
    const char* name;
};

constexpr TargetInfo kTargets[] = {
    {Target::RhoVsSnr, "rho-vs-snr"},
    {Target::SeVsEbn0, "se-vs-ebn0"},
    {Target::Ebn0VsSnr, "ebn0-vs-snr"},
    {Target::Ebn0MinVsBandwidth, "ebn0min-vs-bandwidth"},
    {Target::WidebandSeVsEbn0, "wideband-se-vs-ebn0"},
    {Target::AsymptoticsTable, "asymptotics-table"},
    {Target::QueueValidate, "queue-validate"},
};

std::string normalize_key(std::string key)
{
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty() && std::isfinite(v))
            return v;
    } catch (const std::exception&) {
    }
    throw DomainError("option '" + key + "': expected a number, got '" + text + "'");
}

std::uint64_t parse_count(const std::string& key, const std::string& text)
{
    const double v = parse_double(key, text);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
        throw DomainError("option '" + key + "': expected a nonnegative integer, got '" + text + "'");
    return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        out.push_back(parse_double(key, trim(item)));
    if (out.empty())
        throw DomainError("option '" + key + "': empty list");
    return out;
}

using Row = std::vector<double>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::function<std::vector<Row>()>> tasks;  // each yields rows in order
};

std::vector<std::vector<Row>> run_tasks(const Table& table, std::size_t jobs)
{
    std::vector<std::vector<Row>> results(table.tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= table.tasks.size())
                return;
            try {
                results[i] = table.tasks[i]();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = table.tasks.size();
                return;
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, table.tasks.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

void require_positive_list(const std::vector<double>& v, const char* what)
{
    for (const double x : v)
        if (!(x > 0.0))
            throw DomainError(std::string(what) + " values must be positive");
}

void require_nonnegative_list(const std::vector<double>& v, const char* what)
{
    for (const double x : v)
        if (!(x >= 0.0))
            throw DomainError(std::string(what) + " values must be nonnegative");
}

// Per-target table builders. Each task covers one (bandwidth, theta) series or
// one grid point; rows come back in grid order.

Table rho_vs_snr(const SweepJob& job)
{
    Table t{{"bandwidth_hz", "theta", "snr", "snr_db", "eta", "rho_opt", "snr_eff_opt"}, {}};
    for (const double b : job.bandwidths)
        for (const double theta : job.thetas)
            for (const double snr : job.axis.values())
                t.tasks.push_back([=, &job] {
                    const TrainingSolution s =
                        optimal_training(LinkConfig::from_snr(job.frame_duration_s, b, snr, job.gamma));
                    return std::vector<Row>{{b, theta, snr, to_db(snr), s.eta, s.rho_opt, s.snr_eff_opt}};
                });
    return t;
}

Table se_vs_ebn0(const SweepJob& job, bool detailed)
{
    Table t;
    t.columns = detailed ? std::vector<std::string>{"bandwidth_hz", "theta", "snr", "rate_opt_bps",
                                                    "alpha_opt", "rho_opt", "spectral_efficiency", "ebn0_db"}
                         : std::vector<std::string>{"bandwidth_hz", "theta", "snr", "snr_db",
                                                    "spectral_efficiency", "ebn0_db"};
    for (const double b : job.bandwidths)
        for (const double theta : job.thetas)
            for (const double snr : job.axis.values())
                t.tasks.push_back([=, &job] {
                    const LinkConfig cfg = LinkConfig::from_snr(job.frame_duration_s, b, snr, job.gamma);
                    const EffCapResult r = spectral_efficiency(cfg, QosSpec(theta));
                    const double eb = r.spectral_efficiency > 0.0
                                          ? to_db(snr / r.spectral_efficiency)
                                          : std::numeric_limits<double>::infinity();
                    if (detailed)
                        return std::vector<Row>{{b, theta, snr, r.rate_opt_bps, r.alpha_opt, r.rho_used,
                                                 r.spectral_efficiency, eb}};
                    return std::vector<Row>{{b, theta, snr, to_db(snr), r.spectral_efficiency, eb}};
                });
    return t;
}

Table ebn0min_vs_bandwidth(const SweepJob& job)
{
    Table t{{"theta", "bandwidth_hz", "snr_at_min", "ebn0_min_db", "interior"}, {}};
    const std::vector<double> snrs = job.snr_grid.values();
    for (const double theta : job.thetas)
        for (const double b : job.axis.values())
            t.tasks.push_back([=, &job] {
                const LinkConfig cfg = LinkConfig::from_snr(job.frame_duration_s, b, 1.0, job.gamma);
                const MinBitEnergy m = min_bit_energy_numeric(cfg, QosSpec(theta), snrs);
                return std::vector<Row>{{theta, b, m.snr_at_min, m.ebn0_min_db, m.at_grid_endpoint ? 0.0 : 1.0}};
            });
    return t;
}

Table wideband_se_vs_ebn0(const SweepJob& job)
{
    Table t{{"theta", "bandwidth_hz", "subchannels", "coherence_bandwidth_hz", "snr",
             "spectral_efficiency", "ebn0_db"},
            {}};
    const wideband::GrowthLaw law = wideband::GrowthLaw::parse(job.growth);
    for (const double theta : job.thetas)
        for (const double b : job.axis.values())
            t.tasks.push_back([=, &job] {
                const std::vector<double> grid{b};
                const auto pts = wideband::bandwidth_sweep(theta, job.frame_duration_s, job.gamma,
                                                           job.power_over_n0, law, grid);
                const auto& p = pts.front();
                return std::vector<Row>{{theta, p.bandwidth_hz, static_cast<double>(p.subchannels),
                                         p.coherence_bandwidth_hz, p.snr, p.spectral_efficiency,
                                         to_db(p.ebn0)}};
            });
    return t;
}

Table asymptotics_table(const SweepJob& job)
{
    Table t{{"theta", "phi", "delta", "alpha_star", "xi", "rho_star", "ebn0_min_db", "wideband_slope"}, {}};
    for (const double theta : job.thetas)
        t.tasks.push_back([=, &job] {
            const auto a = wideband::asymptotics_sparse_bounded(theta, job.frame_duration_s, job.subchannels,
                                                                job.power_over_nn0, job.gamma);
            return std::vector<Row>{{theta, a.phi, a.delta, a.alpha_star, a.xi, a.rho_star,
                                     to_db(a.ebn0_min), a.wideband_slope}};
        });
    return t;
}

Table queue_validate(const SweepJob& job, std::uint64_t seed)
{
    Table t{{"theta", "snr", "frames", "arrival_bits", "service_bits", "on_probability", "theta_hat",
             "ci_halfwidth", "q_lo", "q_hi", "samples_in_tail", "ratio"},
            {}};
    Rng root(seed);
    for (const double theta : job.thetas) {
        const std::uint64_t task_seed = root.split()();
        t.tasks.push_back([=, &job] {
            queue::SimSpec spec{LinkConfig::from_snr(job.frame_duration_s, job.bandwidths.front(), job.snr, job.gamma),
                                QosSpec(theta), job.frames, task_seed, job.margin};
            const queue::TailEstimate e = queue::simulate_queue(spec);
            return std::vector<Row>{{theta, job.snr, static_cast<double>(job.frames), e.arrival_bits,
                                     e.service_bits, e.on_probability, e.theta_hat, e.ci_halfwidth, e.q_lo,
                                     e.q_hi, static_cast<double>(e.samples_in_tail), e.theta_hat / theta}};
        });
    }
    return t;
}

void validate_job(const SweepJob& job)
{
    if (!(job.frame_duration_s > 0.0) || !(job.gamma > 0.0))
        throw DomainError("frame_duration and gamma must be positive");
    require_positive_list(job.bandwidths, "bandwidth");
    require_nonnegative_list(job.thetas, "theta");
    switch (job.target) {
    case Target::RhoVsSnr:
    case Target::SeVsEbn0:
    case Target::Ebn0VsSnr:
        job.axis.validate("SNR axis");
        break;
    case Target::Ebn0MinVsBandwidth:
        job.axis.validate("bandwidth axis");
        job.snr_grid.validate("SNR grid");
        break;
    case Target::WidebandSeVsEbn0:
        job.axis.validate("bandwidth axis");
        if (!(job.power_over_n0 > 0.0))
            throw DomainError("power_over_n0 must be positive");
        break;
    case Target::AsymptoticsTable:
        if (job.subchannels == 0 || !(job.power_over_nn0 > 0.0))
            throw DomainError("asymptotics-table needs subchannels >= 1 and power_over_nn0 > 0");
        break;
    case Target::QueueValidate:
        for (const double th : job.thetas)
            if (!(th > 0.0))
                throw DomainError("queue-validate needs theta > 0");
        if (!(job.snr > 0.0))
            throw DomainError("snr must be positive");
        break;
    }
}

std::string summarize(const SweepJob& job, const Table& table, const std::vector<Row>& rows)
{
    std::ostringstream out;
    out << target_name(job.target) << ": " << rows.size() << " rows";

    const auto col = [&](const char* name) -> std::ptrdiff_t {
        const auto it = std::find(table.columns.begin(), table.columns.end(), name);
        return it == table.columns.end() ? -1 : it - table.columns.begin();
    };
    const std::ptrdiff_t eb = col("ebn0_db") >= 0 ? col("ebn0_db") : col("ebn0_min_db");
    if (eb >= 0 && !rows.empty()) {
        const auto best = std::min_element(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
            return a[static_cast<std::size_t>(eb)] < b[static_cast<std::size_t>(eb)];
        });
        out << "; min " << table.columns[static_cast<std::size_t>(eb)] << " = "
            << format_value((*best)[static_cast<std::size_t>(eb)]);
        for (const char* key : {"theta", "snr", "bandwidth_hz", "snr_at_min"}) {
            const std::ptrdiff_t c = col(key);
            if (c >= 0)
                out << " " << key << "=" << format_value((*best)[static_cast<std::size_t>(c)]);
        }
    }
    if (job.target == Target::WidebandSeVsEbn0) {
        const auto law = wideband::GrowthLaw::parse(job.growth);
        out << "; scenario " << wideband::scenario_name(wideband::classify_scenario(law));
    }
    out << "\n";
    return out.str();
}

} // namespace

const char* target_name(Target t)
{
    for (const auto& info : kTargets)
        if (info.target == t)
            return info.name;
    return "unknown";
}

Target parse_target(std::string_view name)
{
    for (const auto& info : kTargets)
        if (name == info.name)
            return info.target;
    throw DomainError("unknown job '" + std::string(name) + "'");
}

const std::vector<Target>& all_targets()
{
    static const std::vector<Target> targets = [] {
        std::vector<Target> v;
        for (const auto& info : kTargets)
            v.push_back(info.target);
        return v;
    }();
    return targets;
}

void Grid::validate(const char* what) const
{
    if (points < 2)
        throw DomainError(std::string(what) + ": need at least 2 points");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min <= max))
        throw DomainError(std::string(what) + ": need finite min <= max");
    if (!(min > 0.0))
        throw DomainError(std::string(what) + ": bounds must be positive");
}

std::vector<double> Grid::values() const
{
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        v[i] = log_spacing ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                           : min + f * (max - min);
    }
    if (points > 1) {
        v.front() = min;
        v.back() = max;
    }
    return v;
}

SweepJob default_job(Target target)
{
    SweepJob job;
    job.target = target;
    switch (target) {
    case Target::RhoVsSnr:
        job.axis = {1e-6, 1e3, 91, true};
        job.bandwidths = {1e7};
        break;
    case Target::SeVsEbn0:
    case Target::Ebn0VsSnr:
        job.axis = {1e-6, 10.0, 71, true};
        break;
    case Target::Ebn0MinVsBandwidth:
        job.axis = {1e4, 1e7, 13, true};
        break;
    case Target::WidebandSeVsEbn0:
        job.axis = {1e5, 1e10, 51, true};
        break;
    case Target::AsymptoticsTable:
        job.thetas = {0.0, 0.001, 0.01, 0.1, 1.0};
        break;
    case Target::QueueValidate:
        job.thetas = {0.005, 0.01, 0.05};
        break;
    }
    return job;
}

Options parse_config_text(std::string_view text)
{
    Options out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw DomainError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = normalize_key(trim(body.substr(0, eq)));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty())
            throw DomainError("config line " + std::to_string(line_no) + ": empty key or value");
        out[key] = value;
    }
    return out;
}

Options read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

SweepJob make_job(Target target, const Options& options)
{
    SweepJob job = default_job(target);
    for (const auto& [raw_key, value] : options) {
        const std::string key = normalize_key(raw_key);
        if (key == "job") {
            if (parse_target(value) != target)
                throw DomainError("config job '" + value + "' does not match subcommand '"
                                  + target_name(target) + "'");
        } else if (key == "frame_duration") {
            job.frame_duration_s = parse_double(key, value);
        } else if (key == "gamma") {
            job.gamma = parse_double(key, value);
        } else if (key == "bandwidth") {
            job.bandwidths = parse_list(key, value);
        } else if (key == "theta") {
            job.thetas = parse_list(key, value);
        } else if (key == "min") {
            job.axis.min = parse_double(key, value);
        } else if (key == "max") {
            job.axis.max = parse_double(key, value);
        } else if (key == "points") {
            job.axis.points = parse_count(key, value);
        } else if (key == "spacing") {
            if (value != "log" && value != "linear")
                throw DomainError("option 'spacing' must be 'log' or 'linear'");
            job.axis.log_spacing = value == "log";
        } else if (key == "snr_min") {
            job.snr_grid.min = parse_double(key, value);
        } else if (key == "snr_max") {
            job.snr_grid.max = parse_double(key, value);
        } else if (key == "snr_points") {
            job.snr_grid.points = parse_count(key, value);
        } else if (key == "power_over_n0") {
            job.power_over_n0 = parse_double(key, value);
        } else if (key == "growth") {
            wideband::GrowthLaw::parse(value);
            job.growth = value;
        } else if (key == "subchannels") {
            job.subchannels = parse_count(key, value);
        } else if (key == "power_over_nn0") {
            job.power_over_nn0 = parse_double(key, value);
        } else if (key == "snr") {
            job.snr = parse_double(key, value);
        } else if (key == "frames") {
            job.frames = parse_count(key, value);
        } else if (key == "margin") {
            job.margin = parse_double(key, value);
        } else if (key == "seed") {
            job.seed = parse_count(key, value);
        } else if (key == "jobs") {
            job.jobs = parse_count(key, value);
        } else if (key == "output") {
            job.output = value;
        } else {
            throw DomainError("unknown option '" + key + "'");
        }
    }
    validate_job(job);
    return job;
}

std::string format_value(double v)
{
    if (std::isnan(v))
        throw DomainError("refusing to emit NaN");
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

SweepOutput run_sweep(const SweepJob& job)
{
    validate_job(job);
    const std::uint64_t seed = job.seed.value_or(1);

    Table table;
    switch (job.target) {
    case Target::RhoVsSnr:
        table = rho_vs_snr(job);
        break;
    case Target::SeVsEbn0:
        table = se_vs_ebn0(job, true);
        break;
    case Target::Ebn0VsSnr:
        table = se_vs_ebn0(job, false);
        break;
    case Target::Ebn0MinVsBandwidth:
        table = ebn0min_vs_bandwidth(job);
        break;
    case Target::WidebandSeVsEbn0:
        table = wideband_se_vs_ebn0(job);
        break;
    case Target::AsymptoticsTable:
        table = asymptotics_table(job);
        break;
    case Target::QueueValidate:
        table = queue_validate(job, seed);
        break;
    }

    const auto chunks = run_tasks(table, job.jobs == 0 ? std::thread::hardware_concurrency() : job.jobs);
    std::vector<Row> rows;
    for (const auto& chunk : chunks)
        rows.insert(rows.end(), chunk.begin(), chunk.end());

    std::ostringstream csv;
    csv << "# effcap-kit v" << kVersion << " job=" << target_name(job.target) << " seed="
        << (job.stochastic() ? std::to_string(seed) : std::string("none"));
    if (job.stochastic())
        csv << " rng=" << Rng::algorithm;
    csv << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        csv << (c ? "," : "") << table.columns[c];
    csv << "\n";
    for (const Row& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            csv << (c ? "," : "") << format_value(row[c]);
        csv << "\n";
    }
    return {csv.str(), summarize(job, table, rows)};
}

SweepOutput run_sweep_to_file(const SweepJob& job)
{
    SweepOutput out = run_sweep(job);
    if (job.output.empty())
        return out;

    const std::filesystem::path path(job.output);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw IoError("cannot open '" + job.output + "' for writing");
    file << out.csv;
    file.close();
    if (!file) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
        throw IoError("failed writing '" + job.output + "'");
    }
    return out;
}

} // namespace effcap::sweep
