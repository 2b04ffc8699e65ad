// natdim: command-line front end for the shattering-dimension laboratory.
//
//   natdim dim          --config PATH [--seed N] [--out DIR] [--format json|csv]
//   natdim growth       --config PATH ...
//   natdim signs        --config PATH ...
//   natdim bound        --theorem {1|2|3|4} --p P [--L L] --d D [--T T] [--out DIR]
//   natdim verify-suite --config SUITE [--seed N] [--out DIR] [--format json|csv]
//
// Exit status: 0 no failed check, 1 some check failed, 2 bad config or runtime error.
// NATDIM_OUT_DIR supplies the output directory when --out is absent.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "natdim/bounds.hpp"
#include "natdim/experiment.hpp"

namespace fs = std::filesystem;
using namespace natdim;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "experiment config (JSON)")->required();
    cmd->add_option("--seed", f.seed, "override the config seed");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--format", f.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

std::optional<fs::path> output_dir(const std::string& flag, const std::optional<fs::path>& from_config) {
    if (!flag.empty()) return fs::path(flag);
    if (from_config) return from_config;
    if (const char* env = std::getenv("NATDIM_OUT_DIR"); env && *env) return fs::path(env);
    return std::nullopt;
}

int exit_for(Verdict v) { return v == Verdict::fail ? kExitFail : kExitPass; }

int run_task(const CommonFlags& f, const std::vector<std::string>& keep) {
    ExperimentConfig cfg = restrict_tasks(ExperimentConfig::load(f.config), keep);
    if (f.seed) cfg.seed = *f.seed;
    const ReportFormat fmt = report_format_from_string(f.format.empty() ? cfg.output_format : f.format);
    const ExperimentResult r = run_experiment(cfg);
    if (auto dir = output_dir(f.out, cfg.output_dir)) {
        const fs::path written = emit_report(r, fmt, *dir);
        emit_timings(r, *dir);
        std::cerr << "wrote " << written.string() << '\n';
    } else {
        std::cout << render_report(r, fmt);
    }
    std::cerr << r.name << ": " << to_string(r.overall()) << '\n';
    return exit_for(r.overall());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Natarajan, graph and VC dimensions of small multi-class hypothesis classes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersionTag));

    CommonFlags dim_f, growth_f, signs_f, suite_f;
    auto* dim = app.add_subcommand("dim", "exact dimensions of a class on a sample, with bound checks");
    add_common(dim, dim_f);
    auto* growth = app.add_subcommand("growth", "distinct behaviors on a sample and a growth estimate");
    add_common(growth, growth_f);
    auto* signs = app.add_subcommand("signs", "sign configurations of a polynomial family");
    add_common(signs, signs_f);
    auto* suite = app.add_subcommand("verify-suite", "run every config of a suite and summarize");
    add_common(suite, suite_f);

    int theorem = 0, p = 0, L = 0, d = 0, T = 0;
    std::string bound_out;
    auto* bound = app.add_subcommand("bound", "solve a dimension-bound inequality exactly");
    bound->add_option("--theorem", theorem)->required()->check(CLI::IsMember({1, 2, 3, 4}));
    bound->add_option("--p", p)->required();
    bound->add_option("--L", L);
    bound->add_option("--d", d)->required();
    bound->add_option("--T", T);
    bound->add_option("--out", bound_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        if (*dim) return run_task(dim_f, {"dimension", "bounds"});
        if (*growth) return run_task(growth_f, {"growth"});
        if (*signs) return run_task(signs_f, {"signs"});
        if (*bound) {
            if ((theorem == 1 || theorem == 2) && L < 1) throw InvalidArgument("--L is required for theorems 1 and 2");
            if (theorem == 2 && T < 1) throw InvalidArgument("--T is required for theorem 2");
            BoundReport r = theorem == 1   ? solve_thm1(p, L, d)
                            : theorem == 2 ? solve_thm2(p, L, T, d)
                                           : solve_thm34(p, d, theorem);
            const std::string text = r.to_json().dump(2) + "\n";
            if (auto dir = output_dir(bound_out, std::nullopt)) {
                fs::create_directories(*dir);
                const fs::path path = *dir / ("bound_thm" + std::to_string(theorem) + ".json");
                std::ofstream(path, std::ios::binary) << text;
                std::cerr << "wrote " << path.string() << '\n';
            } else {
                std::cout << text;
            }
            return kExitPass;
        }
        if (*suite) {
            auto dir = output_dir(suite_f.out, std::nullopt).value_or(fs::path("natdim-results"));
            const ReportFormat fmt = report_format_from_string(suite_f.format.empty() ? "json" : suite_f.format);
            SuiteSummary s = run_suite(suite_f.config, dir, suite_f.seed, fmt);
            for (const auto& r : s.results) std::cout << r.name << ": " << to_string(r.overall()) << '\n';
            std::cout << "summary: " << s.summary_csv.string() << '\n';
            return exit_for(s.overall());
        }
    } catch (const ConfigError& e) {
        for (const auto& p : e.problems()) std::cerr << "config error: " << p << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
