/*
Copyright 2026 The permreduce Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "CLI11.hpp"

#include "permreduce.hpp"

namespace permreduce::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::size_t sweep_grid_points = 64;
constexpr double default_m = 1e6;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write " + path);
    file << text;
}

/// PERMREDUCE_PARAMS, when set, takes precedence over --params.
CostParams load_params(const std::string& flag_path) {
    std::string path = flag_path;
    if (const char* env = std::getenv("PERMREDUCE_PARAMS"); env && *env) path = env;
    if (path.empty()) return {};
    return params_from_json(read_file(path));
}

template <typename T>
T parse_number(std::string_view text, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError(std::string("invalid ") + what + " \"" + std::string(text) + "\"");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value)) throw UsageError(std::string(what) + " must be finite");
    return value;
}

std::vector<std::size_t> parse_p_range(const std::string& text) {
    const auto colon = text.find(':');
    const auto lo = parse_number<std::size_t>(std::string_view(text).substr(0, colon), "P");
    const auto hi = colon == std::string::npos ? lo
                                               : parse_number<std::size_t>(std::string_view(text).substr(colon + 1), "P");
    if (lo < 1 || hi < lo) throw UsageError("P range \"" + text + "\" must satisfy 1 <= lo <= hi");
    std::vector<std::size_t> out;
    for (std::size_t p = lo; p <= hi; ++p) out.push_back(p);
    return out;
}

/// "v" is a single size; "lo:hi" is a log-spaced grid of 64 points.
std::vector<double> parse_m_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        const double m = parse_number<double>(text, "m");
        if (m < 0) throw UsageError("m must be non-negative");
        return {m};
    }
    const double lo = parse_number<double>(std::string_view(text).substr(0, colon), "m");
    const double hi = parse_number<double>(std::string_view(text).substr(colon + 1), "m");
    if (!(lo > 0) || hi < lo) throw UsageError("m range \"" + text + "\" must satisfy 0 < lo <= hi");
    return log_grid(lo, hi, sweep_grid_points);
}

std::shared_ptr<const PermutationGroup> make_group_from(const std::string& kind, std::size_t p) {
    if (p < 1) throw UsageError("P must be at least 1");
    return std::make_shared<const PermutationGroup>(group_from_descriptor(kind, p));
}

Schedule build_from_flags(const std::string& alg_name, std::size_t p, std::size_t r, const std::string& kind,
                          const std::string& h_text) {
    const auto alg = parse_algorithm(alg_name);
    if (!alg) throw UsageError("unknown algorithm \"" + alg_name + "\"");
    auto group = make_group_from(kind, p);
    Permutation h = parse_cycles(h_text, p);
    return build_schedule(*alg, r, std::move(group), std::move(h));
}

std::string group_table(const PermutationGroup& group) {
    std::ostringstream out;
    out << "# P=" << group.degree() << " kind=" << to_string(group.kind()) << " group=" << group.descriptor()
        << '\n';
    if (group.kind() == GroupKind::cyclic)
        out << "# t_0 = e; t_k = c^k for the generator c = " << format_cycles(group.generators().front()) << '\n';
    else
        out << "# t_0 = e; t_k is the element mapping 0 to k\n";
    out << "k | cycles\n";
    for (std::size_t k = 0; k < group.order(); ++k) out << k << " | " << format_cycles(group.element(k)) << '\n';
    return out.str();
}

double ratio_of(const CostBreakdown& b, const CostBreakdown& best) {
    return best.total > 0.0 ? b.total / best.total : 1.0;
}

std::string sweep_csv(const std::vector<std::size_t>& ps, const std::vector<double>& ms, const std::string& mode,
                      const CostParams& base) {
    std::ostringstream out;
    out << sweep_csv_header;
    if (mode == "opt-r") out << ",analytic_r,chosen_r";
    out << '\n';
    if (mode == "ratio") {
        for (const auto& row : ratio_sweep(ps, ms, base)) {
            write_csv_row(out, row.p, row.m, row.best_new, row.ratio);
            out << '\n';
        }
        return out.str();
    }
    for (std::size_t p : ps) {
        for (double m : ms) {
            const CostParams at = base.with(p, m);
            const CostBreakdown best = tau_best_baseline(at);
            if (mode == "opt-r") {
                const OptimalR opt = optimal_r(at);
                write_csv_row(out, p, m, opt.chosen, ratio_of(opt.chosen, best));
                out << ',' << format_real(opt.analytic_r) << ',' << opt.r << '\n';
                continue;
            }
            std::vector<CostBreakdown> rows{tau_naive(at), tau_bo(at)};
            for (std::size_t r = 1; r < ceil_log2(p); ++r) rows.push_back(tau_intermediate(at, r));
            rows.push_back(tau_lo(at));
            for (Baseline b : {Baseline::recursive_doubling, Baseline::recursive_halving, Baseline::ring})
                rows.push_back(tau_baseline(b, at));
            for (const auto& b : rows) {
                write_csv_row(out, p, m, b, ratio_of(b, best));
                out << '\n';
            }
        }
    }
    return out.str();
}

/// Drops or duplicates one random transfer per trial; every mutant must be
/// rejected by the simulator.
int fuzz(const Schedule& base, std::uint64_t seed, std::size_t trials, std::ostream& out, std::ostream& err) {
    const SimReport clean = simulate(base);
    if (!clean.verified) {
        err << "unmutated schedule does not verify: " << clean.failure->message << '\n';
        return exit_failure;
    }
    std::vector<std::pair<std::size_t, std::size_t>> sites;
    for (std::size_t s = 0; s < base.steps.size(); ++s)
        for (std::size_t t = 0; t < base.steps[s].transfers.size(); ++t) sites.emplace_back(s, t);

    std::mt19937_64 rng(seed);
    std::map<std::string, std::size_t> rejected;
    std::size_t survived = 0;
    std::size_t run = 0;
    for (; run < trials && !sites.empty(); ++run) {
        const auto [s, t] = sites[rng() % sites.size()];
        const bool drop = rng() % 2 == 0;
        Schedule mutant = base;
        auto& transfers = mutant.steps[s].transfers;
        if (drop)
            transfers.erase(transfers.begin() + static_cast<std::ptrdiff_t>(t));
        else
            transfers.insert(transfers.begin() + static_cast<std::ptrdiff_t>(t) + 1, transfers[t]);
        const SimReport report = simulate(mutant);
        if (report.verified) {
            ++survived;
            err << "mutant survived: " << (drop ? "dropped" : "duplicated") << " transfer " << t << " of step "
                << s << '\n';
        } else {
            ++rejected[std::string(to_string(report.failure->kind))];
        }
    }
    out << "fuzz algorithm=" << to_string(base.algorithm) << " P=" << base.p << " r=" << base.r << " seed=" << seed
        << " trials=" << run << " survived=" << survived;
    for (const auto& [kind, n] : rejected) out << ' ' << kind << '=' << n;
    out << '\n';
    return survived == 0 ? exit_ok : exit_failure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Permutation-group Allreduce: groups, schedules, simulation and cost model", "permreduce"};
    app.require_subcommand(1);

    const auto kinds_help = "cyclic, hypercube, cyclic:<cycles> or generators:<cycles>;<cycles>";

    std::size_t p = 0;
    std::size_t r = 0;
    std::string kind = "cyclic";
    std::string h_text = "()";
    std::string alg;
    std::string output;
    std::string params_path;

    auto* group_cmd = app.add_subcommand("group", "List the elements of a permutation group");
    group_cmd->add_option("--p", p, "Degree P")->required();
    group_cmd->add_option("--kind", kind, kinds_help);

    std::string format = "json";
    auto* schedule_cmd = app.add_subcommand("schedule", "Build a schedule as JSON or as an ASCII table");
    schedule_cmd->add_option("--alg", alg, "naive, ring, bo, intermediate or lo")->required();
    schedule_cmd->add_option("--p", p, "Process count P")->required();
    schedule_cmd->add_option("--r", r, "Removed distribution steps (intermediate only)");
    schedule_cmd->add_option("--kind", kind, kinds_help);
    schedule_cmd->add_option("--placement", h_text, "Initial placement h in cycle notation");
    schedule_cmd->add_option("--format", format, "json or ascii")->check(CLI::IsMember({"json", "ascii"}));
    schedule_cmd->add_option("-o,--output", output, "Output file, - for stdout");

    std::string file;
    double m = default_m;
    std::string trace_path;
    auto* simulate_cmd = app.add_subcommand("simulate", "Execute a schedule and print the report as JSON");
    auto* file_opt = simulate_cmd->add_option("--file", file, "Schedule JSON file");
    auto* alg_opt = simulate_cmd->add_option("--alg", alg, "Build the schedule: naive, ring, bo, intermediate or lo");
    file_opt->excludes(alg_opt);
    simulate_cmd->add_option("--p", p, "Process count P (with --alg)");
    simulate_cmd->add_option("--r", r, "Removed distribution steps (intermediate only)");
    simulate_cmd->add_option("--kind", kind, kinds_help);
    simulate_cmd->add_option("--placement", h_text, "Initial placement h in cycle notation");
    simulate_cmd->add_option("--m", m, "Vector size in bytes for predicted_time_s")->check(CLI::NonNegativeNumber);
    simulate_cmd->add_option("--params", params_path, "JSON file with alpha, beta, gamma");
    simulate_cmd->add_option("--trace", trace_path, "Write the step table to this file, - for stdout");

    std::string p_range;
    std::string m_range;
    std::string mode = "cost";
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate the cost model over a grid as CSV");
    sweep_cmd->add_option("--p", p_range, "P or lo:hi")->required();
    sweep_cmd->add_option("--m", m_range, "Bytes, or lo:hi for a 64-point log grid")->required();
    sweep_cmd->add_option("--mode", mode, "cost, ratio or opt-r")->check(CLI::IsMember({"cost", "ratio", "opt-r"}));
    sweep_cmd->add_option("--params", params_path, "JSON file with alpha, beta, gamma");
    sweep_cmd->add_option("-o,--output", output, "Output file, - for stdout");

    std::uint64_t seed = 1;
    std::size_t trials = 200;
    auto* fuzz_cmd = app.add_subcommand("fuzz", "Check that mutated schedules are rejected");
    fuzz_cmd->add_option("--alg", alg, "naive, ring, bo, intermediate or lo")->required();
    fuzz_cmd->add_option("--p", p, "Process count P")->required();
    fuzz_cmd->add_option("--r", r, "Removed distribution steps (intermediate only)");
    fuzz_cmd->add_option("--kind", kind, kinds_help);
    fuzz_cmd->add_option("--seed", seed, "Random seed");
    fuzz_cmd->add_option("--trials", trials, "Number of mutants");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*group_cmd) {
            out << group_table(*make_group_from(kind, p));
            return exit_ok;
        }
        if (*schedule_cmd) {
            const Schedule s = build_from_flags(alg, p, r, kind, h_text);
            if (format == "json") {
                emit(output, write_schedule_json(s), out);
            } else {
                const SimReport report = simulate(s, {.verify = true, .trace = true});
                emit(output, render_trace(s, report), out);
            }
            return exit_ok;
        }
        if (*simulate_cmd) {
            Schedule s;
            if (!file.empty())
                s = read_schedule_json(read_file(file));
            else if (!alg.empty())
                s = build_from_flags(alg, p, r, kind, h_text);
            else
                throw UsageError("simulate needs --file or --alg");
            const CostParams params = load_params(params_path).with(s.p, m);
            params.validate();
            const SimReport report = simulate(s, {.verify = true, .trace = !trace_path.empty()});
            out << report_to_json(report, params).dump(2) << '\n';
            if (!trace_path.empty()) emit(trace_path, render_trace(s, report), out);
            if (!report.verified) {
                err << to_string(report.failure->kind) << ": " << report.failure->message << '\n';
                return exit_failure;
            }
            return exit_ok;
        }
        if (*sweep_cmd) {
            const CostParams params = load_params(params_path);
            emit(output, sweep_csv(parse_p_range(p_range), parse_m_range(m_range), mode, params), out);
            return exit_ok;
        }
        if (*fuzz_cmd) return fuzz(build_from_flags(alg, p, r, kind, "()"), seed, trials, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace permreduce::cli
