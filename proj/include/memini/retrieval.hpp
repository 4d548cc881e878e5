#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "memini/graph.hpp"
#include "memini/lexicon.hpp"

namespace memini {

struct RetrievalParams {
    double retention_decay = 0.2;  // delta, per-iteration retention loss
    double spreading_factor = 0.5;  // S, global gain on propagated activation
    int iterations = 3;             // T
    int top_k = 5;                  // k

    void validate() const;
};

// Per-node activation, indexed by NodeId; a node past the end is 0.
using ActivationMap = std::vector<double>;

// Seeds every query entity present in the graph with activation 1;
// entities absent from the graph are appended to *skipped when given.
// Throws EmptySeedError when nothing can be seeded.
ActivationMap seed_activations(const EntityGraph& graph,
                               const std::set<std::string>& query_entities,
                               std::vector<std::string>* skipped = nullptr);

// One synchronous propagation step:
//   u'_i = (1 - delta) u_i + sum over in-neighbors j of
//          S * w_fast(j->i) / out_degree(j) * u_j
// computed entirely from time-t values. The per-source division by
// out-degree is the fan effect that penalizes hubs.
ActivationMap spread_step(const EntityGraph& graph, const ActivationMap& activations,
                          const RetrievalParams& params);

struct RankedNode {
    std::string label;
    double activation = 0.0;
    std::vector<PassageRef> passages;
};

struct RetrievalResult {
    std::vector<RankedNode> ranked;            // length <= top_k
    std::vector<std::string> seeds;            // canonical labels seeded
    std::vector<std::string> skipped_entities;  // matched but absent from graph
};

// Read path: match query entities against the lexicon, seed, propagate
// for exactly `iterations` steps, rank nodes with positive activation
// (ties broken by ascending label) and attach each node's passages,
// most recent document first, capped at 3. Never mutates the graph.
RetrievalResult retrieve(const EntityGraph& graph, std::string_view query_text,
                         const EntityLexicon& lexicon,
                         const RetrievalParams& params);

}  // namespace memini
