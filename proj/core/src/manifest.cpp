#include "muxdyn/manifest.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "muxdyn/error.hpp"

namespace muxdyn {

namespace {

using nlohmann::json;

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

std::string label_of(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    throw InputError(where + ": node labels must be strings or integers");
}

std::size_t line_of_byte(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

class LabelTable {
public:
    explicit LabelTable(std::vector<std::string> labels) : labels_(std::move(labels)) {
        for (std::size_t j = 0; j < labels_.size(); ++j) {
            if (!index_.emplace(labels_[j], j).second) {
                throw InputError("duplicate node label '" + labels_[j] + "'");
            }
        }
    }
    std::size_t at(const std::string& label, const std::string& layer) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw InputError("unknown node '" + label + "' in layer '" + layer + "'");
        return it->second;
    }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

std::string canonical_header(const std::vector<std::string>& labels) {
    std::string s;
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (j) s += '\t';
        s += labels[j];
    }
    return s + '\n';
}

}  // namespace

std::string manifest_checksum(std::string_view canonical_text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Multiplex parse_manifest_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(e.what(), line_of_byte(text, e.byte));
    }
    if (!doc.is_object()) throw ParseError("manifest must be a JSON object", 1);
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw InputError("manifest: missing 'nodes' array");
    if (!doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty()) {
        throw InputError("manifest: missing or empty 'layers' array");
    }
    const bool allow_loops = doc.value("allow_self_loops", false);

    std::vector<std::string> labels;
    for (const auto& v : doc["nodes"]) labels.push_back(label_of(v, "nodes"));
    const LabelTable table(labels);
    const std::set<std::string> label_set(labels.begin(), labels.end());

    std::string canonical = canonical_header(labels);
    std::vector<LayerGraph> layers;
    for (const auto& jl : doc["layers"]) {
        if (!jl.is_object() || !jl.contains("name")) throw InputError("manifest: layer without a name");
        const std::string name = jl["name"].is_string() ? jl["name"].get<std::string>() : jl["name"].dump();
        if (!jl.contains("directed") || !jl["directed"].is_boolean()) {
            throw InputError("layer '" + name + "': 'directed' must be a boolean");
        }
        const bool directed = jl["directed"].get<bool>();
        if (jl.contains("nodes")) {
            std::set<std::string> own;
            for (const auto& v : jl["nodes"]) own.insert(label_of(v, "layer '" + name + "'"));
            if (own != label_set) throw InputError("layer '" + name + "': inconsistent node set across layers");
        }
        canonical += name + '\n' + (directed ? "directed" : "undirected") + '\n';

        std::vector<Edge> edges;
        for (const auto& je : jl.value("edges", json::array())) {
            if (!je.is_array() || je.size() < 2 || je.size() > 3) {
                throw InputError("layer '" + name + "': edge must be [src, dst] or [src, dst, weight]");
            }
            const std::string src = label_of(je[0], "layer '" + name + "'");
            const std::string dst = label_of(je[1], "layer '" + name + "'");
            double w = 1.0;
            if (je.size() == 3) {
                if (!je[2].is_number()) throw InputError("layer '" + name + "': weight must be numeric");
                w = je[2].get<double>();
            }
            if (w < 0.0) throw InputError("layer '" + name + "': negative weight on " + src + " -> " + dst);
            edges.push_back({table.at(src, name), table.at(dst, name), w});
            canonical += src + '\t' + dst + '\t' + format_weight(w) + '\n';
        }
        layers.push_back(LayerGraph::from_edges(name, labels.size(), directed, edges, allow_loops));
    }

    if (doc.contains("checksum")) {
        const std::string expected = doc["checksum"].get<std::string>();
        const std::string actual = manifest_checksum(canonical);
        if (expected != actual) {
            throw InputError("manifest checksum mismatch: file says " + expected + ", content hashes to " + actual);
        }
    }
    return Multiplex(std::move(layers), labels);
}

Multiplex parse_manifest_tsv(std::string_view text) {
    std::vector<std::pair<std::string, bool>> layer_decl;
    std::vector<std::string> labels;
    bool labels_declared = false;
    std::unordered_map<std::string, std::size_t> label_index;
    struct RawEdge {
        std::size_t layer, src, dst;
        double weight;
        std::size_t line;
    };
    std::vector<RawEdge> raw;

    auto intern = [&](const std::string& label, std::size_t line) {
        auto it = label_index.find(label);
        if (it != label_index.end()) return it->second;
        if (labels_declared) throw ParseError("unknown node '" + label + "'", line);
        label_index.emplace(label, labels.size());
        labels.push_back(label);
        return labels.size() - 1;
    };

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream hs(line.substr(1));
            std::string tag;
            hs >> tag;
            if (tag == "layers") {
                std::string tok;
                while (hs >> tok) {
                    const auto colon = tok.rfind(':');
                    if (colon == std::string::npos) throw ParseError("layer declaration needs name:directed", lineno);
                    const std::string kind = tok.substr(colon + 1);
                    if (kind != "directed" && kind != "undirected") {
                        throw ParseError("layer kind must be 'directed' or 'undirected'", lineno);
                    }
                    layer_decl.emplace_back(tok.substr(0, colon), kind == "directed");
                }
            } else if (tag == "nodes") {
                std::string tok;
                while (hs >> tok) {
                    if (!label_index.emplace(tok, labels.size()).second) {
                        throw ParseError("duplicate node label '" + tok + "'", lineno);
                    }
                    labels.push_back(tok);
                }
                labels_declared = true;
            }
            continue;
        }
        if (layer_decl.empty()) throw ParseError("edge line before '#layers' header", lineno);
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, '\t')) fields.push_back(f);
        if (fields.size() < 3 || fields.size() > 4) {
            throw ParseError("expected layer<TAB>src<TAB>dst[<TAB>weight]", lineno);
        }
        auto lt = std::find_if(layer_decl.begin(), layer_decl.end(),
                               [&](const auto& d) { return d.first == fields[0]; });
        if (lt == layer_decl.end()) throw ParseError("undeclared layer '" + fields[0] + "'", lineno);
        double w = 1.0;
        if (fields.size() == 4) {
            try {
                std::size_t used = 0;
                w = std::stod(fields[3], &used);
                if (used != fields[3].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("bad weight '" + fields[3] + "'", lineno);
            }
            if (w < 0.0) throw ParseError("negative weight", lineno);
        }
        const auto layer = static_cast<std::size_t>(lt - layer_decl.begin());
        const std::size_t src = intern(fields[1], lineno);
        const std::size_t dst = intern(fields[2], lineno);
        raw.push_back({layer, src, dst, w, lineno});
    }
    if (layer_decl.empty()) throw ParseError("missing '#layers' header", 0);

    std::vector<std::vector<Edge>> per_layer(layer_decl.size());
    for (const auto& e : raw) per_layer[e.layer].push_back({e.src, e.dst, e.weight});
    std::vector<LayerGraph> layers;
    for (std::size_t i = 0; i < layer_decl.size(); ++i) {
        layers.push_back(LayerGraph::from_edges(layer_decl[i].first, labels.size(), layer_decl[i].second,
                                                per_layer[i]));
    }
    return Multiplex(std::move(layers), labels);
}

Multiplex load_multiplex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open manifest '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string ext = path.extension().string();
    if (ext == ".tsv" || ext == ".txt") return parse_manifest_tsv(ss.str());
    return parse_manifest_json(ss.str());
}

nlohmann::json to_manifest_json(const Multiplex& m) {
    json doc;
    doc["nodes"] = m.labels();
    json layers = json::array();
    for (const auto& layer : m.layers()) {
        json edges = json::array();
        const Matrix& w = layer.weights();
        for (Eigen::Index s = 0; s < w.cols(); ++s) {
            for (Eigen::Index d = 0; d < w.rows(); ++d) {
                if (w(d, s) <= 0.0 || (!layer.directed() && d < s)) continue;
                json e = {m.labels()[static_cast<std::size_t>(s)], m.labels()[static_cast<std::size_t>(d)]};
                if (w(d, s) != 1.0) e.push_back(w(d, s));
                edges.push_back(std::move(e));
            }
        }
        layers.push_back({{"name", layer.name()}, {"directed", layer.directed()}, {"edges", std::move(edges)}});
    }
    doc["layers"] = std::move(layers);
    return doc;
}

}  // namespace muxdyn
