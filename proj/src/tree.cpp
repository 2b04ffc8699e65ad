#include "natdim/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace natdim {

void TreeClassSpec::validate() const {
    if (L < 1 || L > 30) throw InvalidArgument("tree depth L must be in [1, 30]");
    if (p < 1) throw InvalidArgument("feature count p must be >= 1");
    if (d < 1 || d > kMaxClasses) throw InvalidArgument("class count d must be in [1, 255]");
}

Json TreeClassSpec::to_json() const { return Json{{"kind", "tree"}, {"L", L}, {"p", p}, {"d", d}}; }

void ForestClassSpec::validate() const {
    tree.validate();
    if (T < 1) throw InvalidArgument("forest size T must be >= 1");
}

Json ForestClassSpec::to_json() const {
    return Json{{"kind", "forest"}, {"L", tree.L}, {"p", tree.p}, {"d", tree.d}, {"T", T}};
}

Label eval_tree(const ConcreteTree& tree, std::span<const double> x) {
    if (x.size() != tree.p) {
        throw InvalidArgument("input has dimension " + std::to_string(x.size()) + ", tree expects " +
                              std::to_string(tree.p));
    }
    const std::size_t internal = tree.nodes.size();
    std::size_t v = 0;
    while (v < internal) {
        const SplitRule& rule = tree.nodes[v];
        v = x[rule.feature] <= rule.threshold ? 2 * v + 1 : 2 * v + 2;
    }
    return tree.leaves.at(v - internal);
}

std::vector<QueryBehavior> threshold_behaviors(const Sample& sample) {
    if (sample.n() == 0) throw InvalidArgument("threshold_behaviors needs a nonempty sample");
    const std::size_t n = sample.n();
    std::vector<QueryBehavior> out;
    std::set<std::vector<std::uint8_t>> seen;
    auto add = [&](std::size_t feature, double theta) {
        QueryBehavior q{{feature, theta}, std::vector<std::uint8_t>(n)};
        for (std::size_t i = 0; i < n; ++i) q.goes_left[i] = sample.point(i)[feature] <= theta;
        if (seen.insert(q.goes_left).second) out.push_back(std::move(q));
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sample.p(); ++s) {
        std::vector<double> values;
        values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) values.push_back(sample.point(i)[s]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        add(s, -inf);
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            add(s, values[k] + (values[k + 1] - values[k]) / 2);
        }
        add(s, inf);
    }
    return out;
}

namespace {

long double projected_tree_size(const TreeClassSpec& spec, std::size_t query_count) {
    return std::pow(static_cast<long double>(query_count),
                    static_cast<long double>(spec.internal_nodes())) *
           std::pow(static_cast<long double>(spec.d), static_cast<long double>(spec.leaves()));
}

std::string describe(long double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// Points grouped by the leaf they reach; blocks numbered by first occurrence.
struct Partition {
    std::vector<std::uint32_t> block_of_point;
    std::vector<std::size_t> leaf_of_block;
    std::vector<std::size_t> queries;
};

}  // namespace

BehaviorTable enumerate_tree_behaviors(const TreeClassSpec& spec, const Sample& sample,
                                       std::size_t cap, std::vector<TreeRowOrigin>& origins) {
    spec.validate();
    if (sample.p() != static_cast<std::size_t>(spec.p)) {
        throw InvalidArgument("sample dimension " + std::to_string(sample.p()) +
                              " does not match tree feature count " + std::to_string(spec.p));
    }
    const LabelSpace labels(spec.d);
    const std::size_t n = sample.n();
    const std::size_t internal = spec.internal_nodes();

    if (n == 0) {
        origins.assign(1, TreeRowOrigin{{}, std::vector<Label>(spec.leaves(), 1)});
        auto t = table_from_sorted_cells(0, labels, {}, 1);
        t.attach_sample(std::make_shared<const Sample>(sample));
        return t;
    }
    std::vector<QueryBehavior> queries = threshold_behaviors(sample);
    const long double projected = projected_tree_size(spec, std::max<std::size_t>(queries.size(), 1));
    if (projected > static_cast<long double>(cap)) {
        throw EnumerationCapExceeded("tree enumeration would visit " + describe(projected) +
                                         " assignments, cap is " + std::to_string(cap),
                                     projected);
    }

    // A tree's row depends on its node queries only through the partition of
    // points into leaves; leaf labels are then free per block. Enumerate
    // query assignments, deduplicate partitions, then label blocks.
    std::unordered_map<std::string, Partition> partitions;
    std::vector<std::string> partition_order;
    std::vector<std::size_t> assign(internal, 0);
    std::vector<std::size_t> leaf_of_point(n);
    const std::size_t q_count = queries.size();
    while (true) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t v = 0;
            while (v < internal) v = queries[assign[v]].goes_left[i] ? 2 * v + 1 : 2 * v + 2;
            leaf_of_point[i] = v - internal;
        }
        Partition part;
        part.block_of_point.resize(n);
        std::string key(n, '\0');
        for (std::size_t i = 0; i < n; ++i) {
            auto it = std::find(part.leaf_of_block.begin(), part.leaf_of_block.end(),
                                leaf_of_point[i]);
            std::size_t b = static_cast<std::size_t>(it - part.leaf_of_block.begin());
            if (it == part.leaf_of_block.end()) part.leaf_of_block.push_back(leaf_of_point[i]);
            part.block_of_point[i] = static_cast<std::uint32_t>(b);
            key[i] = static_cast<char>(b);
        }
        if (!partitions.count(key)) {
            part.queries = assign;
            partitions.emplace(key, std::move(part));
            partition_order.push_back(key);
        }
        // Odometer over node assignments.
        std::size_t pos = 0;
        while (pos < internal && ++assign[pos] == q_count) assign[pos++] = 0;
        if (pos == internal) break;
    }

    RowSet rows(n, labels);
    std::unordered_map<std::string, TreeRowOrigin> origin_of;
    std::vector<Label> row(n);
    for (const std::string& key : partition_order) {
        const Partition& part = partitions.at(key);
        const std::size_t blocks = part.leaf_of_block.size();
        std::vector<Label> block_label(blocks, 1);
        while (true) {
            for (std::size_t i = 0; i < n; ++i) row[i] = block_label[part.block_of_point[i]];
            if (rows.insert(row)) {
                TreeRowOrigin o;
                o.queries = part.queries;
                o.leaves.assign(spec.leaves(), 1);
                for (std::size_t b = 0; b < blocks; ++b) o.leaves[part.leaf_of_block[b]] = block_label[b];
                origin_of.emplace(std::string(row.begin(), row.end()), std::move(o));
            }
            std::size_t pos = 0;
            while (pos < blocks && ++block_label[pos] > spec.d) block_label[pos++] = 1;
            if (pos == blocks) break;
        }
    }

    BehaviorTable table = rows.to_table();
    table.attach_sample(std::make_shared<const Sample>(sample));
    origins.clear();
    origins.reserve(table.row_count());
    for (std::size_t r = 0; r < table.row_count(); ++r) {
        auto v = table.row(r);
        origins.push_back(origin_of.at(std::string(v.begin(), v.end())));
    }
    return table;
}

BehaviorTable enumerate_tree_behaviors(const TreeClassSpec& spec, const Sample& sample,
                                       std::size_t cap) {
    std::vector<TreeRowOrigin> origins;
    return enumerate_tree_behaviors(spec, sample, cap, origins);
}

ConcreteTree reconstruct_tree(const TreeClassSpec& spec, const std::vector<QueryBehavior>& queries,
                              const TreeRowOrigin& origin) {
    ConcreteTree tree;
    tree.L = spec.L;
    tree.p = static_cast<std::size_t>(spec.p);
    for (std::size_t q : origin.queries) tree.nodes.push_back(queries.at(q).rule);
    tree.leaves = origin.leaves;
    return tree;
}

Label forest_vote(std::span<const Label> votes, int d) {
    if (votes.empty()) throw InvalidArgument("forest_vote needs at least one vote");
    std::vector<std::size_t> counts(static_cast<std::size_t>(d) + 1, 0);
    for (Label v : votes) {
        if (v < 1 || v > d) throw InvalidArgument("vote label out of range");
        ++counts[v];
    }
    Label best = 1;
    for (int k = 2; k <= d; ++k) {
        if (counts[static_cast<std::size_t>(k)] > counts[best]) best = static_cast<Label>(k);
    }
    return best;
}

BehaviorTable enumerate_forest_behaviors(const ForestClassSpec& spec, const Sample& sample,
                                         std::size_t cap) {
    spec.validate();
    BehaviorTable trees = enumerate_tree_behaviors(spec.tree, sample, cap);
    const std::size_t n = sample.n();
    const std::size_t R = trees.row_count();
    const long double projected =
        std::pow(static_cast<long double>(R), static_cast<long double>(spec.T));
    if (projected > static_cast<long double>(cap)) {
        throw EnumerationCapExceeded("forest enumeration would visit " + describe(projected) +
                                         " tree tuples, cap is " + std::to_string(cap),
                                     projected);
    }
    const int d = spec.tree.d;
    RowSet rows(n, LabelSpace(d));
    // The vote ignores tree order, so nondecreasing index tuples cover every
    // T-tuple with repetition.
    const auto T = static_cast<std::size_t>(spec.T);
    std::vector<std::size_t> pick(T, 0);
    std::vector<std::uint32_t> counts(n * (static_cast<std::size_t>(d) + 1));
    std::vector<Label> row(n);
    while (R > 0) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t t = 0; t < T; ++t) {
            auto tr = trees.row(pick[t]);
            for (std::size_t i = 0; i < n; ++i) ++counts[i * (d + 1) + tr[i]];
        }
        for (std::size_t i = 0; i < n; ++i) {
            Label best = 1;
            for (int k = 2; k <= d; ++k) {
                if (counts[i * (d + 1) + k] > counts[i * (d + 1) + best]) best = static_cast<Label>(k);
            }
            row[i] = best;
        }
        rows.insert(row);
        std::size_t pos = T;
        while (pos > 0 && pick[pos - 1] == R - 1) --pos;
        if (pos == 0) break;
        const std::size_t v = ++pick[pos - 1];
        for (std::size_t t = pos; t < T; ++t) pick[t] = v;
    }
    BehaviorTable table = rows.to_table();
    table.attach_sample(std::make_shared<const Sample>(sample));
    return table;
}

}  // namespace natdim
