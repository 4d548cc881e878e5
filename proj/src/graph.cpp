#include "memini/graph.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "memini/errors.hpp"
#include "memini/strings.hpp"

namespace memini {

namespace {

constexpr std::string_view kSnapshotHeader = "MEMINI-SNAPSHOT v1";
constexpr std::string_view kSnapshotMagic = "MEMINI-SNAPSHOT";

// Space-separated field scanner for one snapshot line.
class FieldScanner {
public:
    FieldScanner(std::string_view line, std::size_t line_no)
        : line_(line), line_no_(line_no) {}

    std::string_view next(const char* what) {
        while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
        if (pos_ >= line_.size()) {
            throw FormatError(std::string("missing field: ") + what, line_no_);
        }
        std::size_t start = pos_;
        while (pos_ < line_.size() && line_[pos_] != ' ') ++pos_;
        return line_.substr(start, pos_ - start);
    }

    bool done() {
        while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
        return pos_ >= line_.size();
    }

    template <typename Int>
    Int next_int(const char* what) {
        std::string_view f = next(what);
        Int value{};
        auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
        if (ec != std::errc{} || ptr != f.data() + f.size()) {
            throw FormatError(std::string("bad integer field: ") + what, line_no_);
        }
        return value;
    }

    double next_real(const char* what) {
        std::string_view f = next(what);
        double v = 0.0;
        try {
            v = parse_real(f);
        } catch (const InvalidArgument&) {
            throw FormatError(std::string("bad real field: ") + what, line_no_);
        }
        if (!std::isfinite(v)) {
            throw FormatError(std::string("non-finite real field: ") + what, line_no_);
        }
        return v;
    }

private:
    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

}  // namespace

NodeId EntityGraph::ensure_node(std::string_view label) {
    if (label.empty()) throw InvalidArgument("node label must be non-empty");
    if (auto it = label_index_.find(std::string(label)); it != label_index_.end()) {
        return it->second;
    }
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{std::string(label), {}});
    edges_.emplace_back();
    label_index_.emplace(std::string(label), id);
    return id;
}

std::optional<NodeId> EntityGraph::find_node(std::string_view label) const {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

const Node& EntityGraph::node(NodeId id) const {
    require_node(id);
    return nodes_[id];
}

void EntityGraph::require_node(NodeId id) const {
    if (id >= nodes_.size()) {
        throw NotFound("unknown node id " + std::to_string(id));
    }
}

void EntityGraph::record_passage(NodeId id, PassageRef passage) {
    require_node(id);
    auto& list = nodes_[id].passages;
    if (std::find(list.begin(), list.end(), passage) == list.end()) {
        list.push_back(passage);
    }
}

EdgeState EntityGraph::edge_state(NodeId src, NodeId dst) const {
    if (src >= edges_.size() || src == dst) return {};
    const auto& adj = edges_[src];
    auto it = adj.find(dst);
    return it == adj.end() ? EdgeState{} : it->second;
}

bool EntityGraph::has_edge(NodeId src, NodeId dst) const {
    return src < edges_.size() && edges_[src].contains(dst);
}

void EntityGraph::set_edge(NodeId src, NodeId dst, EdgeState state) {
    require_node(src);
    require_node(dst);
    if (src == dst) throw InvalidArgument("self-loop edges are not stored");
    edges_[src][dst] = state;
}

void EntityGraph::erase_edge(NodeId src, NodeId dst) {
    if (src < edges_.size()) edges_[src].erase(dst);
}

const std::map<NodeId, EdgeState>& EntityGraph::out_edges(NodeId src) const {
    static const std::map<NodeId, EdgeState> empty;
    if (src >= edges_.size()) return empty;
    return edges_[src];
}

std::size_t EntityGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& adj : edges_) n += adj.size();
    return n;
}

void EntityGraph::write_snapshot(std::ostream& out) const {
    out << kSnapshotHeader << '\n';
    out << "D " << doc_clock_ << '\n';
    for (std::size_t id = 0; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        out << "N " << id << ' ' << percent_encode(n.label) << ' '
            << n.passages.size();
        for (const PassageRef& p : n.passages) {
            out << ' ' << p.doc_index << ',' << p.sentence_index;
        }
        out << '\n';
    }
    for (std::size_t src = 0; src < edges_.size(); ++src) {
        for (const auto& [dst, state] : edges_[src]) {
            out << "E " << src << ' ' << dst << ' ' << format_real(state.w_fast)
                << ' ' << format_real(state.w_slow) << '\n';
        }
    }
}

std::string EntityGraph::snapshot_string() const {
    std::ostringstream out;
    write_snapshot(out);
    return out.str();
}

EntityGraph EntityGraph::parse_snapshot(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_snapshot(in);
}

EntityGraph EntityGraph::read_snapshot(std::istream& in) {
    EntityGraph g;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw FormatError("empty snapshot", 1);
    ++line_no;
    if (line != kSnapshotHeader) {
        if (line.starts_with(kSnapshotMagic)) {
            throw FormatError("unknown snapshot version '" + line + "'", line_no);
        }
        throw FormatError("malformed snapshot header", line_no);
    }

    if (!std::getline(in, line)) throw FormatError("missing doc clock line", 2);
    ++line_no;
    {
        FieldScanner fields(line, line_no);
        if (fields.next("record tag") != "D") {
            throw FormatError("expected doc clock line 'D <count>'", line_no);
        }
        g.doc_clock_ = fields.next_int<std::uint64_t>("doc clock");
        if (!fields.done()) throw FormatError("trailing fields after doc clock", line_no);
    }

    bool edges_started = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) throw FormatError("blank line in snapshot", line_no);
        FieldScanner fields(line, line_no);
        std::string_view tag = fields.next("record tag");
        if (tag == "N") {
            if (edges_started) {
                throw FormatError("node record after edge records", line_no);
            }
            auto id = fields.next_int<NodeId>("node id");
            if (id != g.nodes_.size()) {
                throw FormatError("node ids must be dense and ascending", line_no);
            }
            std::string label = percent_decode(fields.next("label"));
            if (label.empty()) throw FormatError("empty node label", line_no);
            if (g.label_index_.contains(label)) {
                throw FormatError("duplicate node label '" + label + "'", line_no);
            }
            auto count = fields.next_int<std::uint32_t>("passage count");
            Node node{std::move(label), {}};
            node.passages.reserve(count);
            for (std::uint32_t i = 0; i < count; ++i) {
                std::string_view f = fields.next("passage ref");
                auto comma = f.find(',');
                if (comma == std::string_view::npos) {
                    throw FormatError("passage ref must be doc,sentence", line_no);
                }
                FieldScanner doc_field(f.substr(0, comma), line_no);
                FieldScanner sent_field(f.substr(comma + 1), line_no);
                PassageRef ref{doc_field.next_int<std::uint32_t>("passage doc"),
                               sent_field.next_int<std::uint32_t>("passage sentence")};
                node.passages.push_back(ref);
            }
            if (!fields.done()) throw FormatError("trailing fields on node line", line_no);
            g.label_index_.emplace(node.label, static_cast<NodeId>(g.nodes_.size()));
            g.nodes_.push_back(std::move(node));
            g.edges_.emplace_back();
        } else if (tag == "E") {
            edges_started = true;
            auto src = fields.next_int<NodeId>("edge source");
            auto dst = fields.next_int<NodeId>("edge target");
            if (src >= g.nodes_.size() || dst >= g.nodes_.size()) {
                throw FormatError("edge references unknown node id", line_no);
            }
            if (src == dst) throw FormatError("self-loop edge", line_no);
            EdgeState state{fields.next_real("w_fast"), fields.next_real("w_slow")};
            if (!fields.done()) throw FormatError("trailing fields on edge line", line_no);
            if (g.edges_[src].contains(dst)) {
                throw FormatError("duplicate edge record", line_no);
            }
            g.edges_[src][dst] = state;
        } else {
            throw FormatError("unknown record tag '" + std::string(tag) + "'", line_no);
        }
    }
    return g;
}

}  // namespace memini
