#include "natdim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "natdim/bounds.hpp"
#include "natdim/growth.hpp"

namespace natdim {

namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

/// Collects field-level problems while walking a JSON config.
class FieldReader {
public:
    explicit FieldReader(std::vector<std::string>& problems) : problems_(problems) {}

    void allow_only(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
        if (!j.is_object()) {
            problems_.push_back(where + ": expected an object");
            return;
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* k : keys) ok = ok || it.key() == k;
            if (!ok) problems_.push_back(where + "." + it.key() + ": unknown field");
        }
    }

    template <class T>
    std::optional<T> get(const Json& j, const std::string& where, const char* key, bool required) {
        if (!j.is_object() || !j.contains(key)) {
            if (required) problems_.push_back(where + "." + key + ": missing");
            return std::nullopt;
        }
        try {
            return j.at(key).get<T>();
        } catch (const Json::exception&) {
            problems_.push_back(where + "." + key + ": wrong type");
            return std::nullopt;
        }
    }

    void positive(const std::optional<long long>& v, const std::string& field) {
        if (v && *v < 1) problems_.push_back(field + ": must be >= 1");
    }

    void add(std::string problem) { problems_.push_back(std::move(problem)); }

private:
    std::vector<std::string>& problems_;
};

ClassSpec parse_class(const Json& j, FieldReader& rd) {
    auto kind = rd.get<std::string>(j, "class", "kind", true).value_or("");
    if (kind == "tree" || kind == "forest") {
        if (kind == "tree") rd.allow_only(j, "class", {"kind", "L", "p", "d"});
        else rd.allow_only(j, "class", {"kind", "L", "p", "d", "T"});
        auto L = rd.get<long long>(j, "class", "L", true);
        auto p = rd.get<long long>(j, "class", "p", true);
        auto d = rd.get<long long>(j, "class", "d", true);
        rd.positive(L, "class.L");
        rd.positive(p, "class.p");
        rd.positive(d, "class.d");
        if (L && *L > 30) rd.add("class.L: must be <= 30");
        if (d && *d > kMaxClasses) rd.add("class.d: must be <= 255");
        TreeClassSpec tree{static_cast<int>(L.value_or(1)), static_cast<int>(p.value_or(1)),
                           static_cast<int>(d.value_or(2))};
        if (kind == "tree") return tree;
        auto T = rd.get<long long>(j, "class", "T", true);
        rd.positive(T, "class.T");
        return ForestClassSpec{tree, static_cast<int>(T.value_or(1))};
    }
    if (kind == "network") {
        rd.allow_only(j, "class", {"kind", "structure", "sampler", "trials", "theorem"});
        NetworkClassSpec net;
        if (!j.contains("structure")) {
            rd.add("class.structure: missing");
        } else {
            try {
                net.structure = NetworkStructure::from_json(j.at("structure"));
                for (const auto& e : validate_structure(net.structure)) rd.add("class.structure: " + e);
            } catch (const std::exception& e) {
                rd.add(std::string("class.structure: ") + e.what());
            }
        }
        if (j.contains("sampler")) {
            try {
                net.sampler = WeightSampler::from_json(j.at("sampler"));
            } catch (const std::exception& e) {
                rd.add(std::string("class.sampler: ") + e.what());
            }
        }
        auto trials = rd.get<long long>(j, "class", "trials", false);
        rd.positive(trials, "class.trials");
        if (trials) net.trials = static_cast<std::size_t>(std::max(1LL, *trials));
        bool has_relu = false;
        for (const auto& layer : net.structure.hidden) {
            for (const auto& node : layer) has_relu = has_relu || node.activation == Activation::relu;
        }
        net.theorem = has_relu ? 4 : 3;
        if (auto th = rd.get<long long>(j, "class", "theorem", false)) {
            if (*th != 3 && *th != 4) rd.add("class.theorem: must be 3 or 4");
            else if (*th == 3 && has_relu) rd.add("class.theorem: 3 does not cover ReLU nodes");
            else net.theorem = static_cast<int>(*th);
        }
        if (net.structure.d < 2) rd.add("class.structure.d: network classes need d >= 2");
        if (net.structure.p_budget < 1) rd.add("class.structure.p_budget: must be >= 1");
        return net;
    }
    rd.add("class.kind: expected tree, forest or network");
    return TreeClassSpec{};
}

SampleSource parse_sample(const Json& j, const fs::path& base, FieldReader& rd) {
    rd.allow_only(j, "sample", {"file", "generator", "points"});
    SampleSource s;
    const int given = j.contains("file") + j.contains("generator") + j.contains("points");
    if (given != 1) {
        rd.add("sample: exactly one of file, generator, points is required");
        return s;
    }
    if (j.contains("file")) {
        s.kind = SampleSource::Kind::file;
        auto f = rd.get<std::string>(j, "sample", "file", true);
        if (f) {
            s.file = fs::path(*f).is_absolute() ? fs::path(*f) : base / *f;
            if (!fs::exists(s.file)) rd.add("sample.file: '" + s.file.string() + "' does not exist");
        }
    } else if (j.contains("generator")) {
        s.kind = SampleSource::Kind::generator;
        const Json& g = j.at("generator");
        rd.allow_only(g, "sample.generator", {"kind", "n", "lo", "hi", "seed"});
        auto kind = rd.get<std::string>(g, "sample.generator", "kind", false).value_or("generic");
        if (kind != "generic") rd.add("sample.generator.kind: only 'generic' is supported");
        auto n = rd.get<long long>(g, "sample.generator", "n", true);
        rd.positive(n, "sample.generator.n");
        s.n = static_cast<std::size_t>(std::max(0LL, n.value_or(0)));
        s.lo = rd.get<double>(g, "sample.generator", "lo", false).value_or(0.0);
        s.hi = rd.get<double>(g, "sample.generator", "hi", false).value_or(1.0);
        if (!(s.lo < s.hi)) rd.add("sample.generator: lo must be < hi");
        if (auto seed = rd.get<std::uint64_t>(g, "sample.generator", "seed", false)) s.seed = *seed;
    } else {
        s.kind = SampleSource::Kind::inline_points;
        auto pts = rd.get<std::vector<std::vector<double>>>(j, "sample", "points", true);
        if (pts) s.points = *pts;
    }
    return s;
}

std::size_t class_input_dim(const ClassSpec& c) {
    if (auto* t = std::get_if<TreeClassSpec>(&c)) return static_cast<std::size_t>(t->p);
    if (auto* f = std::get_if<ForestClassSpec>(&c)) return static_cast<std::size_t>(f->tree.p);
    return std::get<NetworkClassSpec>(c).structure.m;
}

int class_labels(const ClassSpec& c) {
    if (auto* t = std::get_if<TreeClassSpec>(&c)) return t->d;
    if (auto* f = std::get_if<ForestClassSpec>(&c)) return f->tree.d;
    return std::get<NetworkClassSpec>(c).structure.d;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems, "; ")),
      problems_(std::move(problems)) {}

ExperimentConfig ExperimentConfig::from_json(const Json& j, const fs::path& base_dir) {
    std::vector<std::string> problems;
    FieldReader rd(problems);
    ExperimentConfig c;
    c.source = j;
    rd.allow_only(j, "config",
                  {"schema_version", "name", "seed", "class", "sample", "tasks", "budget", "output"});
    if (!j.is_object()) throw ConfigError(problems);

    auto version = rd.get<long long>(j, "config", "schema_version", true);
    if (version && *version != kConfigSchemaVersion) {
        rd.add("config.schema_version: unsupported version " + std::to_string(*version));
    }
    c.name = rd.get<std::string>(j, "config", "name", false).value_or("experiment");
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
        rd.add("config.name: must be a nonempty file-name-safe string");
    }
    c.seed = rd.get<std::uint64_t>(j, "config", "seed", false).value_or(0);
    if (j.contains("class")) c.class_spec = parse_class(j.at("class"), rd);
    if (j.contains("sample")) c.sample = parse_sample(j.at("sample"), base_dir, rd);

    const Json tasks = j.value("tasks", Json::object());
    rd.allow_only(tasks, "tasks", {"dimension", "growth", "bounds", "signs"});
    if (tasks.contains("dimension")) {
        auto modes = rd.get<std::vector<std::string>>(tasks, "tasks", "dimension", true);
        for (const auto& m : modes.value_or(std::vector<std::string>{})) {
            try {
                auto mode = shatter_mode_from_string(m);
                if (std::find(c.dimensions.begin(), c.dimensions.end(), mode) == c.dimensions.end()) {
                    c.dimensions.push_back(mode);
                }
            } catch (const InvalidArgument& e) {
                rd.add(std::string("tasks.dimension: ") + e.what());
            }
        }
    }
    if (tasks.contains("growth")) {
        const Json& g = tasks.at("growth");
        rd.allow_only(g, "tasks.growth", {"estimate_trials"});
        GrowthTask gt;
        auto trials = rd.get<long long>(g, "tasks.growth", "estimate_trials", false);
        if (trials && *trials < 0) rd.add("tasks.growth.estimate_trials: must be >= 0");
        gt.estimate_trials = static_cast<std::size_t>(std::max(0LL, trials.value_or(0)));
        c.growth = gt;
    }
    c.bounds = rd.get<bool>(tasks, "tasks", "bounds", false).value_or(false);
    if (tasks.contains("signs")) {
        const Json& s = tasks.at("signs");
        rd.allow_only(s, "tasks.signs", {"family", "search"});
        SignsTask st;
        try {
            st.family = PolynomialFamily::from_json(s.at("family"));
            if (s.contains("search")) st.search = SignSearch::from_json(s.at("search"));
            c.signs = std::move(st);
        } catch (const std::exception& e) {
            rd.add(std::string("tasks.signs: ") + e.what());
        }
    }

    if (j.contains("budget")) {
        const Json& b = j.at("budget");
        rd.allow_only(b, "budget", {"max_subsets", "max_templates", "time_limit_ms", "enumeration_cap"});
        auto ms = rd.get<long long>(b, "budget", "max_subsets", false);
        auto mt = rd.get<long long>(b, "budget", "max_templates", false);
        auto tl = rd.get<long long>(b, "budget", "time_limit_ms", false);
        auto ec = rd.get<long long>(b, "budget", "enumeration_cap", false);
        rd.positive(ms, "budget.max_subsets");
        rd.positive(mt, "budget.max_templates");
        rd.positive(tl, "budget.time_limit_ms");
        rd.positive(ec, "budget.enumeration_cap");
        if (ms && *ms > 0) c.budget.max_subsets = static_cast<std::size_t>(*ms);
        if (mt && *mt > 0) c.budget.max_templates = static_cast<std::size_t>(*mt);
        if (tl && *tl > 0) c.budget.time_limit = std::chrono::milliseconds(*tl);
        if (ec && *ec > 0) c.enumeration_cap = static_cast<std::size_t>(*ec);
    }
    if (j.contains("output")) {
        const Json& o = j.at("output");
        rd.allow_only(o, "output", {"dir", "format"});
        if (auto dir = rd.get<std::string>(o, "output", "dir", false)) {
            c.output_dir = fs::path(*dir).is_absolute() ? fs::path(*dir) : base_dir / *dir;
        }
        c.output_format = rd.get<std::string>(o, "output", "format", false).value_or("json");
        if (c.output_format != "json" && c.output_format != "csv") {
            rd.add("output.format: expected json or csv");
        }
    }

    const bool needs_class = !c.dimensions.empty() || c.growth || c.bounds;
    if (needs_class && !c.class_spec) rd.add("class: required by the dimension, growth and bounds tasks");
    if ((!c.dimensions.empty() || c.growth) && !c.sample) {
        rd.add("sample: required by the dimension and growth tasks");
    }
    if (c.class_spec) {
        const bool vc = std::find(c.dimensions.begin(), c.dimensions.end(), ShatterMode::VC) !=
                        c.dimensions.end();
        if (vc && class_labels(*c.class_spec) != 2) rd.add("tasks.dimension: VC requires d = 2");
        if (c.sample && c.sample->kind == SampleSource::Kind::inline_points) {
            for (const auto& pt : c.sample->points) {
                if (pt.size() != class_input_dim(*c.class_spec)) {
                    rd.add("sample.points: point dimension does not match the class input dimension");
                    break;
                }
            }
        }
    }
    if (!problems.empty()) throw ConfigError(problems);
    return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot open '" + path.string() + "'"});
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError({"config: malformed JSON in '" + path.string() + "': " + e.what()});
    }
    return from_json(j, path.parent_path());
}

ExperimentConfig restrict_tasks(ExperimentConfig config, const std::vector<std::string>& keep) {
    auto kept = [&](const char* t) { return std::find(keep.begin(), keep.end(), t) != keep.end(); };
    if (!kept("dimension")) config.dimensions.clear();
    if (!kept("growth")) config.growth.reset();
    if (!kept("bounds")) config.bounds = false;
    if (!kept("signs")) config.signs.reset();
    return config;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::string to_string(QuantityKind k) {
    switch (k) {
        case QuantityKind::exact: return "exact";
        case QuantityKind::lower: return "lower_bound";
        case QuantityKind::upper: return "upper_bound";
    }
    return "?";
}

Json quantity_json(const Quantity& q) {
    Json j{{"name", q.name}, {"value", q.value}, {"kind", to_string(q.kind)}};
    if (q.capped) j["capped"] = true;
    return j;
}

}  // namespace

Json ConsistencyCheck::to_json() const {
    Json j{{"name", name}, {"lhs", quantity_json(lhs)}, {"rhs", quantity_json(rhs)},
           {"relation", "<="}, {"verdict", to_string(verdict)}};
    if (!note.empty()) j["note"] = note;
    return j;
}

ConsistencyCheck make_check(std::string name, Quantity lhs, Quantity rhs,
                            std::optional<bool> violated) {
    ConsistencyCheck c{std::move(name), std::move(lhs), std::move(rhs), Verdict::pass, {}};
    if (c.lhs.capped || c.rhs.capped) {
        c.verdict = Verdict::inconclusive;
        c.note = "enumeration capped";
        return c;
    }
    const bool bad = violated.value_or(c.lhs.value > c.rhs.value);
    if (!bad) return c;
    const bool lhs_certain = c.lhs.kind != QuantityKind::upper;
    const bool rhs_certain = c.rhs.kind != QuantityKind::lower;
    if (lhs_certain && rhs_certain) {
        c.verdict = Verdict::fail;
    } else {
        c.verdict = Verdict::inconclusive;
        c.note = "violation involves a one-sided estimate";
    }
    return c;
}

Verdict ExperimentResult::overall() const {
    Verdict v = Verdict::pass;
    for (const auto& c : checks) {
        if (c.verdict == Verdict::fail) return Verdict::fail;
        if (c.verdict == Verdict::inconclusive) v = Verdict::inconclusive;
    }
    return v;
}

Sample read_sample_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open sample file '" + path.string() + "'");
    std::vector<std::vector<double>> pts;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;
            }
            throw InvalidArgument("non-numeric value on line " + std::to_string(line_no) + " of '" +
                                  path.string() + "'");
        }
        first = false;
        pts.push_back(std::move(row));
    }
    const std::size_t p = pts.empty() ? 0 : pts.front().size();
    return Sample(p, std::move(pts));
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Json class_json(const ClassSpec& c) {
    if (auto* t = std::get_if<TreeClassSpec>(&c)) return t->to_json();
    if (auto* f = std::get_if<ForestClassSpec>(&c)) return f->to_json();
    const auto& n = std::get<NetworkClassSpec>(c);
    return Json{{"kind", "network"},
                {"structure", n.structure.to_json()},
                {"sampler", n.sampler.to_json()},
                {"trials", n.trials},
                {"theorem", n.theorem}};
}

std::string class_kind(const ClassSpec& c) {
    if (std::holds_alternative<TreeClassSpec>(c)) return "tree";
    if (std::holds_alternative<ForestClassSpec>(c)) return "forest";
    return "network";
}

std::string class_params(const ClassSpec& c) {
    std::ostringstream os;
    if (auto* t = std::get_if<TreeClassSpec>(&c)) {
        os << "L=" << t->L << ";p=" << t->p << ";d=" << t->d;
    } else if (auto* f = std::get_if<ForestClassSpec>(&c)) {
        os << "L=" << f->tree.L << ";p=" << f->tree.p << ";d=" << f->tree.d << ";T=" << f->T;
    } else {
        const auto& n = std::get<NetworkClassSpec>(c);
        os << "m=" << n.structure.m << ";p=" << n.structure.p_budget << ";d=" << n.structure.d;
    }
    return os.str();
}

EnumeratedBehaviors behaviors_for(const ClassSpec& c, const Sample& sample, std::size_t cap,
                                  std::uint64_t seed) {
    if (auto* t = std::get_if<TreeClassSpec>(&c)) return {enumerate_tree_behaviors(*t, sample, cap), true};
    if (auto* f = std::get_if<ForestClassSpec>(&c)) {
        return {enumerate_forest_behaviors(*f, sample, cap), true};
    }
    const auto& n = std::get<NetworkClassSpec>(c);
    return sample_behaviors(n.structure, sample, n.sampler, n.trials, seed);
}

std::optional<BoundReport> class_bound(const ClassSpec& c) {
    if (auto* t = std::get_if<TreeClassSpec>(&c)) return solve_thm1(t->p, t->L, t->d);
    if (auto* f = std::get_if<ForestClassSpec>(&c)) return solve_thm2(f->tree.p, f->tree.L, f->T, f->tree.d);
    const auto& n = std::get<NetworkClassSpec>(c);
    return solve_thm34(static_cast<int>(n.structure.p_budget), n.structure.d, n.theorem);
}

/// log2 of the closed-form growth bound for tree and forest classes.
std::optional<long double> growth_bound_log2(const ClassSpec& c, std::size_t n) {
    const auto nn = static_cast<std::int64_t>(n);
    if (auto* t = std::get_if<TreeClassSpec>(&c)) return tree_growth_bound(t->p, nn, t->L, t->d);
    if (auto* f = std::get_if<ForestClassSpec>(&c)) {
        return f->T * tree_growth_bound(f->tree.p, nn, f->tree.L, f->tree.d);
    }
    return std::nullopt;
}

Sample resolve_sample(const SampleSource& src, std::size_t p, std::uint64_t run_seed, Json& source_json) {
    switch (src.kind) {
        case SampleSource::Kind::file: {
            source_json = Json{{"kind", "file"}, {"file", src.file.filename().string()}};
            Sample s = read_sample_csv(src.file);
            if (s.n() > 0 && s.p() != p) {
                throw InvalidArgument("sample file has " + std::to_string(s.p()) +
                                      " columns, class expects " + std::to_string(p));
            }
            return s.n() > 0 ? s : Sample(p, {});
        }
        case SampleSource::Kind::generator: {
            const std::uint64_t seed = src.seed.value_or(run_seed);
            source_json = Json{{"kind", "generic"}, {"n", src.n}, {"p", p},
                               {"lo", src.lo},      {"hi", src.hi}, {"seed", seed}};
            std::mt19937_64 rng(seed);
            return generic_sampler(p, src.lo, src.hi)(src.n, rng);
        }
        case SampleSource::Kind::inline_points:
            source_json = Json{{"kind", "inline"}};
            return Sample(p, src.points);
    }
    return {};
}

Quantity dim_quantity(const std::string& name, const DimensionResult& r) {
    return {name, static_cast<double>(r.dim),
            r.exact() ? QuantityKind::exact : QuantityKind::lower, false};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result;
    result.name = config.name;
    Json& doc = result.document;
    doc["version"] = kVersionTag;
    doc["name"] = config.name;
    doc["seed"] = config.seed;
    doc["config"] = config.source;
    auto& checks = result.checks;

    std::optional<Sample> sample;
    std::optional<EnumeratedBehaviors> behaviors;
    bool capped = false;
    const bool needs_table = config.class_spec && (!config.dimensions.empty() || config.growth);

    if (config.class_spec) {
        doc["class"] = class_json(*config.class_spec);
        if (config.sample && needs_table) {
            Json source;
            sample = resolve_sample(*config.sample, class_input_dim(*config.class_spec), config.seed,
                                    source);
            Json sj = sample->to_json();
            sj["source"] = source;
            doc["sample"] = sj;
        }
    }

    if (needs_table && sample) {
        const auto t0 = Clock::now();
        try {
            behaviors = behaviors_for(*config.class_spec, *sample, config.enumeration_cap, config.seed);
            doc["table"] = Json{{"rows", behaviors->table.row_count()},
                                {"exhaustive", behaviors->exhaustive},
                                {"capped", false}};
        } catch (const EnumerationCapExceeded& e) {
            capped = true;
            doc["table"] = Json{{"rows", nullptr},
                                {"capped", true},
                                {"projected", static_cast<double>(e.projected())},
                                {"message", e.what()}};
        }
        result.timings_ms["enumerate"] = elapsed_ms(t0);
    }

    std::optional<BoundReport> bound;
    if (config.bounds && config.class_spec) {
        bound = class_bound(*config.class_spec);
        doc["bounds"] = bound->to_json();
    }

    // Dimension tasks.
    std::map<ShatterMode, DimensionResult> dims;
    if (!config.dimensions.empty() && sample) {
        Json dj = Json::object();
        for (ShatterMode mode : config.dimensions) {
            if (capped) {
                dj[to_string(mode)] = Json{{"capped", true}};
                continue;
            }
            const auto t0 = Clock::now();
            DimensionResult r = shatter_dimension(behaviors->table, mode, config.budget);
            result.timings_ms["dimension_" + to_string(mode)] = elapsed_ms(t0);
            dj[to_string(mode)] = r.to_json();
            dims.emplace(mode, std::move(r));
        }
        doc["dimension"] = dj;
    }

    const bool class_level_exact = behaviors && behaviors->exhaustive;
    const int d = config.class_spec ? class_labels(*config.class_spec) : 0;

    if (bound && !config.dimensions.empty()) {
        const Quantity rhs{"max_N(theorem " + std::to_string(bound->theorem) + ")",
                           static_cast<double>(bound->max_N), QuantityKind::upper, false};
        if (auto it = dims.find(ShatterMode::N); it != dims.end()) {
            Quantity lhs = dim_quantity("d_N", it->second);
            if (!class_level_exact) lhs.kind = QuantityKind::lower;
            checks.push_back(make_check("d_N <= theorem bound", lhs, rhs));
        } else if (capped) {
            checks.push_back(make_check("d_N <= theorem bound", Quantity{"d_N", 0, QuantityKind::lower, true}, rhs));
        }
    }

    auto dn = dims.find(ShatterMode::N);
    auto dg = dims.find(ShatterMode::G);
    auto dvc = dims.find(ShatterMode::VC);
    if (dn != dims.end() && dg != dims.end()) {
        checks.push_back(make_check("d_N <= d_G", dim_quantity("d_N", dn->second),
                                    dim_quantity("d_G", dg->second)));
        if (dn->second.dim >= 1 && d >= 2) {
            const BenDavidBound bd = bendavid_gap(dn->second.dim, d);
            Quantity rhs{"(467/100)*log2(d)*d_N", static_cast<double>(bd.value()),
                         dn->second.exact() ? QuantityKind::exact : QuantityKind::lower, false};
            checks.push_back(make_check("d_G <= (467/100) log2(d) d_N", dim_quantity("d_G", dg->second),
                                        rhs, !bd.admits(dg->second.dim)));
        }
    }
    if (dn != dims.end() && dvc != dims.end()) {
        checks.push_back(make_check("d_N <= d_VC", dim_quantity("d_N", dn->second),
                                    dim_quantity("d_VC", dvc->second)));
        checks.push_back(make_check("d_VC <= d_N", dim_quantity("d_VC", dvc->second),
                                    dim_quantity("d_N", dn->second)));
    }
    if (dn != dims.end() && behaviors) {
        const auto& r = dn->second;
        const double two_pow = std::ldexp(1.0, r.dim);
        std::size_t witness_rows = 1;
        if (r.witness) witness_rows = restrict(behaviors->table, r.witness->subset).row_count();
        checks.push_back(make_check("2^d_N <= growth on witness subset",
                                    Quantity{"2^d_N", two_pow, QuantityKind::exact, false},
                                    Quantity{"growth(witness)", static_cast<double>(witness_rows),
                                             QuantityKind::exact, false}));
        checks.push_back(make_check("2^d_N <= growth on sample",
                                    Quantity{"2^d_N", two_pow, QuantityKind::exact, false},
                                    Quantity{"growth(sample)",
                                             static_cast<double>(behaviors->table.row_count()),
                                             QuantityKind::exact, false}));
    }

    // Growth task.
    if (config.growth && sample) {
        Json gj;
        const auto& cls = *config.class_spec;
        auto bound_log2 = growth_bound_log2(cls, sample->n());
        if (capped) {
            gj["on_sample"] = Json{{"capped", true}};
            if (bound_log2) {
                checks.push_back(make_check("growth <= closed-form bound",
                                            Quantity{"growth(sample)", 0, QuantityKind::exact, true},
                                            Quantity{"bound", static_cast<double>(std::exp2(*bound_log2)),
                                                     QuantityKind::upper, false}));
            }
        } else {
            GrowthReport gr;
            gr.n = sample->n();
            gr.count = behaviors->table.row_count();
            gr.sample_used = *sample;
            gr.exhaustive = behaviors->exhaustive;
            Json on = gr.to_json();
            on.erase("sample");
            gj["on_sample"] = on;
            if (bound_log2) {
                const bool violated =
                    std::log2(static_cast<long double>(gr.count)) > *bound_log2 + 1e-9L;
                checks.push_back(make_check(
                    "growth <= closed-form bound",
                    Quantity{"growth(sample)", static_cast<double>(gr.count),
                             gr.exhaustive ? QuantityKind::exact : QuantityKind::lower, false},
                    Quantity{"bound", static_cast<double>(std::exp2(*bound_log2)), QuantityKind::upper,
                             false},
                    violated));
                gj["bound_log2"] = static_cast<double>(*bound_log2);
            }
            if (config.growth->estimate_trials > 0) {
                const auto t0 = Clock::now();
                const std::size_t cap = config.enumeration_cap;
                const std::uint64_t seed = config.seed;
                BehaviorEnumerator en = [&](const Sample& s) { return behaviors_for(cls, s, cap, seed); };
                GrowthReport est = growth_estimate(en, sample->n(), generic_sampler(sample->p()),
                                                   config.growth->estimate_trials, config.seed);
                result.timings_ms["growth_estimate"] = elapsed_ms(t0);
                Json ej = est.to_json();
                ej["trials"] = config.growth->estimate_trials;
                gj["estimate"] = ej;
                if (bound_log2) {
                    const bool violated =
                        std::log2(static_cast<long double>(est.count)) > *bound_log2 + 1e-9L;
                    checks.push_back(make_check(
                        "growth estimate <= closed-form bound",
                        Quantity{"growth_estimate", static_cast<double>(est.count), QuantityKind::lower,
                                 false},
                        Quantity{"bound", static_cast<double>(std::exp2(*bound_log2)),
                                 QuantityKind::upper, false},
                        violated));
                }
            }
        }
        doc["growth"] = gj;
    }

    // Sign-pattern task.
    if (config.signs) {
        const auto t0 = Clock::now();
        const auto& fam = config.signs->family;
        SignCount sc = count_sign_configs(fam, config.signs->search, config.seed);
        result.timings_ms["signs"] = elapsed_ms(t0);
        Json sj{{"family", fam.to_json()}, {"search", config.signs->search.to_json()},
                {"count", sc.count}};
        const double cap_bits = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(fam.size(), 1000)));
        double rhs = cap_bits;
        std::string rhs_name = "2^R";
        if (fam.size() >= fam.nvars() && fam.max_degree >= 1) {
            const long double l1 = lemma1_bound(fam.size(), static_cast<std::size_t>(fam.max_degree),
                                                fam.nvars());
            sj["lemma1_bound"] = static_cast<double>(l1);
            if (static_cast<double>(l1) < rhs) {
                rhs = static_cast<double>(l1);
                rhs_name = "lemma1_bound";
            }
            rhs_name = "min(2^R, lemma1_bound)";
        }
        doc["signs"] = sj;
        checks.push_back(make_check("sign configurations <= " + rhs_name,
                                    Quantity{"sign_configs", static_cast<double>(sc.count),
                                             QuantityKind::lower, false},
                                    Quantity{rhs_name, rhs, QuantityKind::upper, false}));
    }

    Json cj = Json::array();
    for (const auto& c : checks) cj.push_back(c.to_json());
    doc["checks"] = cj;
    doc["verdict"] = to_string(result.overall());
    if (config.class_spec) {
        doc["csv_class"] = class_kind(*config.class_spec);
        doc["csv_params"] = class_params(*config.class_spec);
    }
    return result;
}

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    throw InvalidArgument("unknown report format '" + s + "' (expected json or csv)");
}

std::string csv_header() { return "task,class,params,quantity,value,bound,verdict"; }

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string number(double v) { return Json(v).dump(); }

}  // namespace

std::string render_report(const ExperimentResult& result, ReportFormat format) {
    if (format == ReportFormat::json) return result.document.dump(2) + "\n";
    const Json& doc = result.document;
    const std::string cls = doc.value("csv_class", std::string{});
    const std::string params = doc.value("csv_params", std::string{});
    std::ostringstream os;
    os << csv_header() << '\n';
    auto row = [&](const std::string& task, const std::string& quantity, const std::string& value,
                   const std::string& bound, const std::string& verdict) {
        os << csv_field(task) << ',' << csv_field(cls) << ',' << csv_field(params) << ','
           << csv_field(quantity) << ',' << value << ',' << bound << ',' << verdict << '\n';
    };
    if (doc.contains("dimension")) {
        for (auto it = doc["dimension"].begin(); it != doc["dimension"].end(); ++it) {
            if (it->contains("dim")) row("dimension", "d_" + it.key(), it->at("dim").dump(), "", "reported");
        }
    }
    if (doc.contains("bounds")) row("bounds", "max_N", doc["bounds"]["max_N"].dump(), "", "reported");
    if (doc.contains("growth") && doc["growth"].contains("on_sample") &&
        doc["growth"]["on_sample"].contains("count")) {
        row("growth", "growth(sample)", doc["growth"]["on_sample"]["count"].dump(), "", "reported");
    }
    if (doc.contains("signs")) row("signs", "sign_configs", doc["signs"]["count"].dump(), "", "reported");
    for (const auto& c : result.checks) {
        row("check", c.name, number(c.lhs.value), number(c.rhs.value), to_string(c.verdict));
    }
    return os.str();
}

fs::path emit_report(const ExperimentResult& result, ReportFormat format, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path path = dir / (result.name + (format == ReportFormat::json ? ".json" : ".csv"));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write report to '" + path.string() + "'");
    out << render_report(result, format);
    if (!out) throw std::runtime_error("failed writing report to '" + path.string() + "'");
    return path;
}

fs::path emit_timings(const ExperimentResult& result, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path path = dir / (result.name + ".timings.json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write timings to '" + path.string() + "'");
    out << Json(result.timings_ms).dump(2) << '\n';
    return path;
}

Verdict SuiteSummary::overall() const {
    Verdict v = Verdict::pass;
    for (const auto& r : results) {
        const Verdict rv = r.overall();
        if (rv == Verdict::fail) return Verdict::fail;
        if (rv == Verdict::inconclusive) v = Verdict::inconclusive;
    }
    return v;
}

SuiteSummary run_suite(const fs::path& suite_path, const fs::path& out_dir,
                       std::optional<std::uint64_t> seed_override, ReportFormat format) {
    std::ifstream in(suite_path);
    if (!in) throw ConfigError({"suite: cannot open '" + suite_path.string() + "'"});
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError({std::string("suite: malformed JSON: ") + e.what()});
    }
    std::vector<std::string> problems;
    FieldReader rd(problems);
    rd.allow_only(j, "suite", {"schema_version", "configs"});
    auto version = rd.get<long long>(j, "suite", "schema_version", true);
    if (version && *version != kConfigSchemaVersion) rd.add("suite.schema_version: unsupported");
    if (!j.contains("configs") || !j.at("configs").is_array()) rd.add("suite.configs: expected an array");
    if (!problems.empty()) throw ConfigError(problems);

    const fs::path base = suite_path.parent_path();
    std::vector<ExperimentConfig> configs;
    std::set<std::string> names;
    std::size_t idx = 0;
    for (const auto& entry : j.at("configs")) {
        ExperimentConfig c;
        try {
            if (entry.is_string()) {
                const fs::path p = fs::path(entry.get<std::string>()).is_absolute()
                                       ? fs::path(entry.get<std::string>())
                                       : base / entry.get<std::string>();
                c = ExperimentConfig::load(p);
            } else {
                c = ExperimentConfig::from_json(entry, base);
            }
        } catch (const ConfigError& e) {
            std::vector<std::string> scoped;
            for (const auto& p : e.problems()) scoped.push_back("suite.configs[" + std::to_string(idx) + "]: " + p);
            throw ConfigError(scoped);
        }
        if (!names.insert(c.name).second) {
            throw ConfigError({"suite.configs[" + std::to_string(idx) + "]: duplicate name '" + c.name + "'"});
        }
        if (seed_override) c.seed = *seed_override;
        configs.push_back(std::move(c));
        ++idx;
    }
    std::sort(configs.begin(), configs.end(),
              [](const ExperimentConfig& a, const ExperimentConfig& b) { return a.name < b.name; });

    SuiteSummary summary;
    std::ostringstream csv;
    csv << "name,verdict,checks_pass,checks_fail,checks_inconclusive\n";
    for (const auto& c : configs) {
        ExperimentResult r = run_experiment(c);
        emit_report(r, format, out_dir);
        emit_timings(r, out_dir);
        std::size_t pass = 0, fail = 0, inc = 0;
        for (const auto& ch : r.checks) {
            (ch.verdict == Verdict::pass ? pass : ch.verdict == Verdict::fail ? fail : inc)++;
        }
        csv << csv_field(r.name) << ',' << to_string(r.overall()) << ',' << pass << ',' << fail << ','
            << inc << '\n';
        summary.results.push_back(std::move(r));
    }
    summary.summary_csv = out_dir / "summary.csv";
    std::ofstream out(summary.summary_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + summary.summary_csv.string() + "'");
    out << csv.str();
    return summary;
}

}  // namespace natdim
