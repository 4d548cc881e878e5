#include "memini/retrieval.hpp"

#include <algorithm>

#include "memini/errors.hpp"
#include "memini/ingest.hpp"

namespace memini {

namespace {

constexpr std::size_t kPassagesPerNode = 3;

std::vector<PassageRef> select_passages(const Node& node) {
    std::vector<PassageRef> refs = node.passages;
    std::sort(refs.begin(), refs.end(), [](const PassageRef& a, const PassageRef& b) {
        if (a.doc_index != b.doc_index) return a.doc_index > b.doc_index;
        return a.sentence_index < b.sentence_index;
    });
    if (refs.size() > kPassagesPerNode) refs.resize(kPassagesPerNode);
    return refs;
}

}  // namespace

void RetrievalParams::validate() const {
    if (!(retention_decay >= 0.0 && retention_decay <= 1.0)) {
        throw InvalidArgument("retention_decay must be in [0, 1]");
    }
    if (!(spreading_factor > 0.0)) {
        throw InvalidArgument("spreading_factor must be > 0");
    }
    if (iterations < 1) throw InvalidArgument("iterations must be >= 1");
    if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
}

ActivationMap seed_activations(const EntityGraph& graph,
                               const std::set<std::string>& query_entities,
                               std::vector<std::string>* skipped) {
    ActivationMap activations(graph.node_count(), 0.0);
    bool any = false;
    for (const std::string& label : query_entities) {
        if (auto id = graph.find_node(label)) {
            activations[*id] = 1.0;
            any = true;
        } else if (skipped != nullptr) {
            skipped->push_back(label);
        }
    }
    if (query_entities.empty() || !any) {
        throw EmptySeedError("no query entity matches a graph node");
    }
    return activations;
}

ActivationMap spread_step(const EntityGraph& graph, const ActivationMap& activations,
                          const RetrievalParams& params) {
    params.validate();
    ActivationMap next(graph.node_count(), 0.0);
    for (std::size_t i = 0; i < next.size() && i < activations.size(); ++i) {
        next[i] = (1.0 - params.retention_decay) * activations[i];
    }
    for (NodeId src = 0; src < graph.node_count(); ++src) {
        if (src >= activations.size() || activations[src] == 0.0) continue;
        const auto& out = graph.out_edges(src);
        if (out.empty()) continue;
        double handout = params.spreading_factor * activations[src] /
                         static_cast<double>(out.size());
        for (const auto& [dst, state] : out) {
            next[dst] += handout * state.w_fast;
        }
    }
    return next;
}

RetrievalResult retrieve(const EntityGraph& graph, std::string_view query_text,
                         const EntityLexicon& lexicon,
                         const RetrievalParams& params) {
    params.validate();
    std::set<std::string> entities = match_entities(query_text, lexicon);

    RetrievalResult result;
    ActivationMap activations =
        seed_activations(graph, entities, &result.skipped_entities);
    for (const std::string& label : entities) {
        if (graph.find_node(label)) result.seeds.push_back(label);
    }

    for (int t = 0; t < params.iterations; ++t) {
        activations = spread_step(graph, activations, params);
    }

    std::vector<NodeId> order;
    for (NodeId id = 0; id < graph.node_count(); ++id) {
        if (activations[id] > 0.0) order.push_back(id);
    }
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (activations[a] != activations[b]) return activations[a] > activations[b];
        return graph.node(a).label < graph.node(b).label;
    });
    if (order.size() > static_cast<std::size_t>(params.top_k)) {
        order.resize(static_cast<std::size_t>(params.top_k));
    }
    for (NodeId id : order) {
        const Node& node = graph.node(id);
        result.ranked.push_back(
            RankedNode{node.label, activations[id], select_passages(node)});
    }
    return result;
}

}  // namespace memini
