#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "natdim/core.hpp"
#include "natdim/network.hpp"
#include "natdim/shattering.hpp"
#include "natdim/sign_patterns.hpp"
#include "natdim/tree.hpp"

namespace natdim {

inline constexpr int kConfigSchemaVersion = 1;
inline const char* const kVersionTag = "natdim 1.0.0";

/// Rejected configuration; each entry names the offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct NetworkClassSpec {
    NetworkStructure structure;
    WeightSampler sampler;
    std::size_t trials = 10'000;
    int theorem = 3;  // 3 binary/linear, 4 with ReLU nodes
};

using ClassSpec = std::variant<TreeClassSpec, ForestClassSpec, NetworkClassSpec>;

struct SampleSource {
    enum class Kind { file, generator, inline_points } kind = Kind::generator;
    std::filesystem::path file;
    std::size_t n = 0;
    double lo = 0.0;
    double hi = 1.0;
    std::optional<std::uint64_t> seed;  // generator seed; defaults to the run seed
    std::vector<std::vector<double>> points;
};

struct SignsTask {
    PolynomialFamily family;
    SignSearch search;
};

struct GrowthTask {
    std::size_t estimate_trials = 0;  // 0: growth on the configured sample only
};

struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 0;
    std::optional<ClassSpec> class_spec;
    std::optional<SampleSource> sample;
    std::vector<ShatterMode> dimensions;
    std::optional<GrowthTask> growth;
    bool bounds = false;
    std::optional<SignsTask> signs;
    SearchBudget budget;
    std::size_t enumeration_cap = kDefaultEnumerationCap;
    std::optional<std::filesystem::path> output_dir;
    std::string output_format = "json";
    Json source;  // the config as read, echoed into results

    /// Parses and validates; unknown fields and bad values raise ConfigError.
    /// Relative file paths resolve against `base_dir`.
    static ExperimentConfig from_json(const Json& j, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& path);
};

enum class QuantityKind { exact, lower, upper };

/// A number together with what is known about it relative to the true value.
struct Quantity {
    std::string name;
    double value = 0.0;
    QuantityKind kind = QuantityKind::exact;
    bool capped = false;
};

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

/// lhs <= rhs. A failure is only reported when the violation is certain:
/// lhs is exact or a lower bound and rhs is exact or an upper bound.
struct ConsistencyCheck {
    std::string name;
    Quantity lhs;
    Quantity rhs;
    Verdict verdict = Verdict::inconclusive;
    std::string note;

    Json to_json() const;
};

/// Decides a check from its quantities. `violated` overrides the numeric
/// comparison when an exact comparison is available.
ConsistencyCheck make_check(std::string name, Quantity lhs, Quantity rhs,
                            std::optional<bool> violated = std::nullopt);

struct ExperimentResult {
    std::string name;
    Json document;  // deterministic given (config, seed, version)
    std::vector<ConsistencyCheck> checks;
    std::map<std::string, double> timings_ms;

    Verdict overall() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Keeps only the listed task families ("dimension", "growth", "bounds", "signs").
ExperimentConfig restrict_tasks(ExperimentConfig config, const std::vector<std::string>& keep);

enum class ReportFormat { json, csv };

ReportFormat report_format_from_string(const std::string& s);
std::string render_report(const ExperimentResult& result, ReportFormat format);
/// Writes the report and returns the path written. Throws on an unwritable path.
std::filesystem::path emit_report(const ExperimentResult& result, ReportFormat format,
                                  const std::filesystem::path& dir);

/// Wall-clock timings go to a `<name>.timings.json` sidecar so that result
/// files stay byte-identical across runs.
std::filesystem::path emit_timings(const ExperimentResult& result, const std::filesystem::path& dir);

std::string csv_header();

struct SuiteSummary {
    std::vector<ExperimentResult> results;  // sorted by name
    std::filesystem::path summary_csv;

    Verdict overall() const;
};

/// Runs every config of a suite file ({schema_version, configs: [path | config]}),
/// writing one result file per config plus summary.csv into `out_dir`.
SuiteSummary run_suite(const std::filesystem::path& suite_path, const std::filesystem::path& out_dir,
                       std::optional<std::uint64_t> seed_override, ReportFormat format);

/// Reads an n x p CSV of coordinates; a non-numeric first line is a header.
Sample read_sample_csv(const std::filesystem::path& path);

}  // namespace natdim
