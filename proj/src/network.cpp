#include "natdim/network.hpp"

#include <cmath>
#include <set>

#include "natdim/tree.hpp"

namespace natdim {

std::string to_string(Activation a) {
    switch (a) {
        case Activation::binary: return "binary";
        case Activation::linear: return "linear";
        case Activation::relu: return "relu";
    }
    return "?";
}

Activation activation_from_string(const std::string& s) {
    if (s == "binary") return Activation::binary;
    if (s == "linear") return Activation::linear;
    if (s == "relu") return Activation::relu;
    throw InvalidArgument("unknown activation '" + s + "' (expected binary, linear or relu)");
}

std::size_t NetworkStructure::hidden_parameter_count() const {
    std::size_t total = 0;
    for (const auto& layer : hidden) {
        for (const auto& node : layer) total += node.inputs.size();
    }
    return total;
}

std::size_t NetworkStructure::last_hidden_width() const {
    return hidden.empty() ? m : hidden.back().size();
}

namespace {

NodeRef parse_ref(const Json& j, std::size_t layer) {
    if (j.is_number_integer()) {
        const auto idx = j.get<long long>();
        if (idx < 0) throw InvalidArgument("negative node index in inputs");
        return {layer - 1, static_cast<std::size_t>(idx)};
    }
    if (j.is_array() && j.size() == 2) {
        return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
    }
    throw InvalidArgument("node input must be an index or a [layer, index] pair");
}

Json ref_to_json(const NodeRef& r, std::size_t layer) {
    if (r.layer + 1 == layer) return r.index;
    return Json::array({r.layer, r.index});
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw InvalidArgument(std::string("unknown field '") + it.key() + "' in " + where);
    }
}

}  // namespace

NetworkStructure NetworkStructure::from_json(const Json& j) {
    reject_unknown(j, {"m", "layers", "d", "p_budget", "output"}, "network structure");
    NetworkStructure s;
    s.m = j.at("m").get<std::size_t>();
    s.d = j.at("d").get<int>();
    s.p_budget = j.at("p_budget").get<std::size_t>();
    std::size_t layer_no = 1;
    for (const auto& lj : j.at("layers")) {
        reject_unknown(lj, {"size", "nodes"}, "layer");
        std::vector<HiddenNode> layer;
        for (const auto& nj : lj.at("nodes")) {
            reject_unknown(nj, {"inputs", "activation"}, "node");
            HiddenNode node;
            node.activation = activation_from_string(nj.at("activation").get<std::string>());
            for (const auto& ij : nj.at("inputs")) node.inputs.push_back(parse_ref(ij, layer_no));
            layer.push_back(std::move(node));
        }
        if (lj.contains("size") && lj.at("size").get<std::size_t>() != layer.size()) {
            throw InvalidArgument("layer " + std::to_string(layer_no) + " declares size " +
                                  std::to_string(lj.at("size").get<std::size_t>()) + " but lists " +
                                  std::to_string(layer.size()) + " nodes");
        }
        s.hidden.push_back(std::move(layer));
        ++layer_no;
    }
    if (j.contains("output")) {
        std::vector<std::vector<NodeRef>> out;
        for (const auto& oj : j.at("output")) {
            reject_unknown(oj, {"inputs"}, "output node");
            std::vector<NodeRef> refs;
            for (const auto& ij : oj.at("inputs")) refs.push_back(parse_ref(ij, layer_no));
            out.push_back(std::move(refs));
        }
        s.output_inputs = std::move(out);
    }
    return s;
}

Json NetworkStructure::to_json() const {
    Json layers = Json::array();
    for (std::size_t l = 0; l < hidden.size(); ++l) {
        Json nodes = Json::array();
        for (const auto& node : hidden[l]) {
            Json inputs = Json::array();
            for (const auto& r : node.inputs) inputs.push_back(ref_to_json(r, l + 1));
            nodes.push_back(Json{{"inputs", inputs}, {"activation", to_string(node.activation)}});
        }
        layers.push_back(Json{{"size", hidden[l].size()}, {"nodes", nodes}});
    }
    Json j{{"m", m}, {"layers", layers}, {"d", d}, {"p_budget", p_budget}};
    if (output_inputs) {
        Json out = Json::array();
        for (const auto& refs : *output_inputs) {
            Json inputs = Json::array();
            for (const auto& r : refs) inputs.push_back(ref_to_json(r, hidden.size() + 1));
            out.push_back(Json{{"inputs", inputs}});
        }
        j["output"] = out;
    }
    return j;
}

std::vector<std::string> validate_structure(const NetworkStructure& s) {
    std::vector<std::string> errors;
    if (s.m < 1) errors.push_back("input dimension m must be >= 1");
    if (s.d < 1 || s.d > kMaxClasses) errors.push_back("class count d must be in [1, 255]");
    auto width = [&](std::size_t layer) {
        return layer == 0 ? s.m : s.hidden[layer - 1].size();
    };
    for (std::size_t l = 0; l < s.hidden.size(); ++l) {
        const std::size_t layer = l + 1;
        if (s.hidden[l].empty()) {
            errors.push_back("hidden layer " + std::to_string(layer) + " has no nodes");
        }
        for (std::size_t j = 0; j < s.hidden[l].size(); ++j) {
            const auto& node = s.hidden[l][j];
            const std::string where =
                "node (" + std::to_string(layer) + "," + std::to_string(j) + ")";
            std::set<std::size_t> seen;
            for (const auto& r : node.inputs) {
                if (r.layer + 1 != layer) {
                    errors.push_back(where + " references layer " + std::to_string(r.layer) +
                                     "; only layer " + std::to_string(layer - 1) + " is adjacent");
                    continue;
                }
                if (r.index >= width(r.layer)) {
                    errors.push_back(where + " references missing node " + std::to_string(r.index) +
                                     " of layer " + std::to_string(r.layer));
                    continue;
                }
                if (!seen.insert(r.index).second) {
                    errors.push_back(where + " lists input " + std::to_string(r.index) + " twice");
                }
            }
        }
    }
    const std::size_t params = s.hidden_parameter_count();
    if (params > s.p_budget) {
        errors.push_back("hidden-parameter count " + std::to_string(params) +
                         " exceeds budget p = " + std::to_string(s.p_budget));
    }
    if (!s.hidden.empty() && s.last_hidden_width() > s.p_budget) {
        errors.push_back("last hidden layer width " + std::to_string(s.last_hidden_width()) +
                         " exceeds p = " + std::to_string(s.p_budget) +
                         ", so output parameters exceed p*d");
    }
    if (s.output_inputs) {
        const auto& out = *s.output_inputs;
        const std::size_t last = s.hidden.size();
        if (out.size() != static_cast<std::size_t>(s.d)) {
            errors.push_back("output layer has " + std::to_string(out.size()) + " nodes, expected d = " +
                             std::to_string(s.d));
        }
        for (std::size_t k = 0; k < out.size(); ++k) {
            std::set<std::size_t> seen;
            bool adjacent = true;
            for (const auto& r : out[k]) {
                if (r.layer != last) adjacent = false;
                else if (r.index < width(last)) seen.insert(r.index);
            }
            if (!adjacent || seen.size() != width(last) || out[k].size() != width(last)) {
                errors.push_back("output node " + std::to_string(k) +
                                 " is not fully connected to layer " + std::to_string(last));
            }
        }
    }
    return errors;
}

namespace {

void require_valid(const NetworkStructure& s) {
    auto errors = validate_structure(s);
    if (errors.empty()) return;
    std::string msg = "invalid network structure:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw InvalidArgument(msg);
}

double activate(Activation a, double z) {
    switch (a) {
        case Activation::binary: return z > 0 ? 1.0 : 0.0;
        case Activation::linear: return z;
        case Activation::relu: return z > 0 ? z : 0.0;
    }
    return z;
}

}  // namespace

ForwardResult forward(const NetworkStructure& s, const WeightAssignment& w,
                      std::span<const double> x) {
    if (x.size() != s.m) {
        throw InvalidArgument("input has dimension " + std::to_string(x.size()) +
                              ", network expects m = " + std::to_string(s.m));
    }
    if (w.hidden.size() != s.hidden_parameter_count() ||
        w.output.size() != s.output_parameter_count()) {
        throw InvalidArgument("weight assignment does not match the structure's parameter counts");
    }
    std::vector<std::vector<double>> values;
    values.emplace_back(x.begin(), x.end());
    std::size_t wi = 0;
    for (const auto& layer : s.hidden) {
        std::vector<double> out(layer.size());
        for (std::size_t j = 0; j < layer.size(); ++j) {
            double z = 0.0;
            for (const auto& r : layer[j].inputs) z += w.hidden[wi++] * values[r.layer][r.index];
            out[j] = activate(layer[j].activation, z);
        }
        values.push_back(std::move(out));
    }
    const auto& last = values.back();
    ForwardResult res;
    res.scores.assign(static_cast<std::size_t>(s.d), 0.0);
    for (std::size_t k = 0; k < res.scores.size(); ++k) {
        double z = 0.0;
        for (std::size_t t = 0; t < last.size(); ++t) z += w.output[k * last.size() + t] * last[t];
        res.scores[k] = z;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < res.scores.size(); ++k) {
        if (res.scores[k] > res.scores[best]) best = k;
    }
    res.label = static_cast<Label>(best + 1);
    return res;
}

std::vector<std::uint8_t> pairwise_comparators(std::span<const double> scores) {
    std::vector<std::uint8_t> bits;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        for (std::size_t k2 = k + 1; k2 < scores.size(); ++k2) {
            bits.push_back(scores[k] - scores[k2] > 0 ? 1 : 0);
        }
    }
    return bits;
}

std::optional<Label> label_from_comparators(std::span<const std::uint8_t> bits, int d) {
    const auto dd = static_cast<std::size_t>(d);
    if (bits.size() != dd * (dd - 1) / 2) {
        throw InvalidArgument("comparator vector has the wrong length for d = " + std::to_string(d));
    }
    auto bit = [&](std::size_t k, std::size_t k2) {
        // Position of pair (k, k2), k < k2, in row-by-row order.
        const std::size_t pos = k * dd - k * (k + 1) / 2 + (k2 - k - 1);
        return bits[pos];
    };
    for (std::size_t k = 0; k < dd; ++k) {
        bool wins = true;
        for (std::size_t o = 0; o < dd && wins; ++o) {
            if (o == k) continue;
            wins = o > k ? bit(k, o) == 1 : bit(o, k) == 0;
        }
        if (wins) return static_cast<Label>(k + 1);
    }
    return std::nullopt;
}

WeightSampler WeightSampler::from_json(const Json& j) {
    reject_unknown(j, {"kind", "params"}, "weight sampler");
    WeightSampler ws;
    const auto kind = j.at("kind").get<std::string>();
    const Json params = j.value("params", Json::object());
    if (kind == "uniform") {
        reject_unknown(params, {"lo", "hi"}, "uniform sampler params");
        ws.kind = Kind::uniform;
        ws.lo = params.value("lo", -1.0);
        ws.hi = params.value("hi", 1.0);
        if (!(ws.lo <= ws.hi)) throw InvalidArgument("uniform sampler needs lo <= hi");
    } else if (kind == "grid") {
        reject_unknown(params, {"values"}, "grid sampler params");
        ws.kind = Kind::grid;
        if (params.contains("values")) ws.grid = params.at("values").get<std::vector<double>>();
        if (ws.grid.empty()) throw InvalidArgument("grid sampler needs at least one value");
    } else {
        throw InvalidArgument("unknown weight sampler kind '" + kind + "'");
    }
    return ws;
}

Json WeightSampler::to_json() const {
    if (kind == Kind::uniform) return Json{{"kind", "uniform"}, {"params", {{"lo", lo}, {"hi", hi}}}};
    return Json{{"kind", "grid"}, {"params", {{"values", grid}}}};
}

WeightAssignment WeightSampler::draw(const NetworkStructure& s, std::mt19937_64& rng) const {
    WeightAssignment w;
    w.hidden.resize(s.hidden_parameter_count());
    w.output.resize(s.output_parameter_count());
    auto fill = [&](std::vector<double>& v) {
        if (kind == Kind::uniform) {
            std::uniform_real_distribution<double> dist(lo, hi);
            for (double& x : v) x = dist(rng);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, grid.size() - 1);
            for (double& x : v) x = grid[pick(rng)];
        }
    };
    fill(w.hidden);
    fill(w.output);
    return w;
}

namespace {

void check_sample(const NetworkStructure& s, const Sample& sample) {
    require_valid(s);
    if (sample.p() != s.m && sample.n() > 0) {
        throw InvalidArgument("sample dimension " + std::to_string(sample.p()) +
                              " does not match network input dimension " + std::to_string(s.m));
    }
}

void record(const NetworkStructure& s, const WeightAssignment& w, const Sample& sample,
            std::vector<Label>& row, RowSet& rows) {
    for (std::size_t i = 0; i < sample.n(); ++i) row[i] = forward(s, w, sample.point(i)).label;
    rows.insert(row);
}

}  // namespace

EnumeratedBehaviors sample_behaviors(const NetworkStructure& s, const Sample& sample,
                                     const WeightSampler& sampler, std::size_t trials,
                                     std::uint64_t seed) {
    check_sample(s, sample);
    if (trials < 1) throw InvalidArgument("sample_behaviors needs trials >= 1");
    RowSet rows(sample.n(), LabelSpace(s.d));
    std::vector<Label> row(sample.n());
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = trial_rng(seed, t);
        record(s, sampler.draw(s, rng), sample, row, rows);
    }
    BehaviorTable table = rows.to_table();
    table.attach_sample(std::make_shared<const Sample>(sample));
    return {std::move(table), false};
}

EnumeratedBehaviors grid_behaviors(const NetworkStructure& s, const Sample& sample,
                                   std::span<const double> values, std::size_t cap) {
    check_sample(s, sample);
    if (values.empty()) throw InvalidArgument("grid sweep needs at least one value");
    const std::size_t hp = s.hidden_parameter_count();
    const std::size_t total = hp + s.output_parameter_count();
    const long double projected =
        std::pow(static_cast<long double>(values.size()), static_cast<long double>(total));
    if (projected > static_cast<long double>(cap)) {
        throw EnumerationCapExceeded("grid sweep would visit " + std::to_string(static_cast<double>(projected)) +
                                         " assignments, cap is " + std::to_string(cap),
                                     projected);
    }
    RowSet rows(sample.n(), LabelSpace(s.d));
    std::vector<Label> row(sample.n());
    std::vector<std::size_t> idx(total, 0);
    WeightAssignment w;
    w.hidden.resize(hp);
    w.output.resize(total - hp);
    while (true) {
        for (std::size_t i = 0; i < total; ++i) {
            (i < hp ? w.hidden[i] : w.output[i - hp]) = values[idx[i]];
        }
        record(s, w, sample, row, rows);
        std::size_t pos = 0;
        while (pos < total && ++idx[pos] == values.size()) idx[pos++] = 0;
        if (pos == total) break;
    }
    BehaviorTable table = rows.to_table();
    table.attach_sample(std::make_shared<const Sample>(sample));
    return {std::move(table), false};
}

}  // namespace natdim
