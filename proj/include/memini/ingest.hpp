#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memini/dynamics.hpp"
#include "memini/graph.hpp"
#include "memini/lexicon.hpp"

namespace memini {

// Deterministic sentence split: a sentence ends after '.', '!' or '?'
// followed by whitespace and an uppercase letter (or end of text),
// unless the dotted word is on a small abbreviation stop-list.
std::vector<std::string> segment_sentences(std::string_view text);

// Canonical labels matched in one sentence: case-insensitive,
// whole-word, longest alias first; tokens consumed by a longer alias
// cannot participate in a shorter match.
std::set<std::string> match_entities(std::string_view sentence,
                                     const EntityLexicon& lexicon);

// As match_entities, also reporting the first matched token index of
// each label (used for textual-order edge direction).
std::map<std::string, std::size_t> match_entities_positions(
    std::string_view sentence, const EntityLexicon& lexicon);

// Whether symmetric co-occurrence emits both directed edges or only
// first-mention -> later-mention.
enum class DirectionMode { symmetric, textual_order };

DirectionMode parse_direction_mode(std::string_view name);

struct CooccurrenceEvent {
    std::string src;
    std::string dst;
    std::uint32_t doc_index = 0;

    friend auto operator<=>(const CooccurrenceEvent&, const CooccurrenceEvent&) =
        default;
};

struct DocumentEvents {
    std::set<std::pair<std::string, std::string>> directed_pairs;
    // Per entity, the 0-based indices of the sentences that matched it.
    std::map<std::string, std::vector<std::uint32_t>> mentions;
    std::size_t sentence_count = 0;
};

// Sentence-level co-occurrence extraction over one document: every
// unordered pair of entities sharing a sentence yields one event per
// direction (per mode), deduplicated across sentences — at most one
// event per pair per document.
DocumentEvents extract_events(std::string_view text, const EntityLexicon& lexicon,
                              DirectionMode mode = DirectionMode::symmetric);

struct IngestReport {
    std::uint32_t doc_index = 0;
    std::size_t sentence_count = 0;
    std::size_t event_count = 0;  // unordered co-occurring pairs
    std::size_t new_node_count = 0;
    std::size_t new_edge_count = 0;  // directed edges created this step
};

// Full write path for one document: create nodes for newly seen
// entities, record passage references, then advance the whole graph by
// exactly one dynamics step with this document's event edges as input.
// When event_sink is non-null the directed events are appended to it.
IngestReport ingest_document(EntityGraph& graph, std::string_view text,
                             const EntityLexicon& lexicon,
                             const DynamicsParams& params,
                             DirectionMode mode = DirectionMode::symmetric,
                             std::vector<CooccurrenceEvent>* event_sink = nullptr);

}  // namespace memini
