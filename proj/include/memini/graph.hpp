#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace memini {

// Dense handle for a graph node. Ids are assigned sequentially at node
// creation and are never reused within a graph instance.
using NodeId = std::uint32_t;

// One sentence of one document in the ingested stream, both 0-based.
struct PassageRef {
    std::uint32_t doc_index = 0;
    std::uint32_t sentence_index = 0;

    friend auto operator<=>(const PassageRef&, const PassageRef&) = default;
};

// The coupled per-edge state. A missing edge is equivalent to (0, 0).
struct EdgeState {
    double w_fast = 0.0;
    double w_slow = 0.0;

    friend bool operator==(const EdgeState&, const EdgeState&) = default;
};

struct Node {
    std::string label;
    std::vector<PassageRef> passages;

    friend bool operator==(const Node&, const Node&) = default;
};

// Directed association graph: entity nodes with passage references and
// evolving weighted edges. Edges (A->B) and (B->A) are distinct; self
// loops are never stored.
class EntityGraph {
public:
    // Returns the existing id for a known label, otherwise creates a new
    // node. Labels must be non-empty and already canonical.
    NodeId ensure_node(std::string_view label);

    std::optional<NodeId> find_node(std::string_view label) const;

    const Node& node(NodeId id) const;
    std::size_t node_count() const { return nodes_.size(); }

    // Appends a passage reference; exact duplicates are dropped.
    void record_passage(NodeId id, PassageRef passage);

    // Stored state, or (0, 0) when the edge is absent. Never allocates.
    EdgeState edge_state(NodeId src, NodeId dst) const;

    bool has_edge(NodeId src, NodeId dst) const;
    void set_edge(NodeId src, NodeId dst, EdgeState state);
    void erase_edge(NodeId src, NodeId dst);

    // Outgoing adjacency of src, ordered by target id. Empty for nodes
    // without outgoing edges.
    const std::map<NodeId, EdgeState>& out_edges(NodeId src) const;

    std::size_t out_degree(NodeId src) const { return out_edges(src).size(); }
    std::size_t edge_count() const;

    std::uint64_t doc_clock() const { return doc_clock_; }
    void advance_doc_clock() { ++doc_clock_; }

    // Canonical line-oriented snapshot. write is deterministic (nodes by
    // id, edges by (src, dst) ascending); read(write(g)) == g bit-exactly.
    void write_snapshot(std::ostream& out) const;
    std::string snapshot_string() const;
    static EntityGraph read_snapshot(std::istream& in);
    static EntityGraph parse_snapshot(std::string_view text);

    friend bool operator==(const EntityGraph& a, const EntityGraph& b) {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ &&
               a.doc_clock_ == b.doc_clock_;
    }

private:
    void require_node(NodeId id) const;

    std::unordered_map<std::string, NodeId> label_index_;
    std::vector<Node> nodes_;
    std::vector<std::map<NodeId, EdgeState>> edges_;
    std::uint64_t doc_clock_ = 0;
};

}  // namespace memini
