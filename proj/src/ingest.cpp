#include "memini/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "memini/errors.hpp"
#include "memini/strings.hpp"

namespace memini {

namespace {

// Dotted words that do not end a sentence.
constexpr std::array<std::string_view, 26> kAbbreviations = {
    "dr.",  "mr.",  "mrs.", "ms.",  "prof.",   "st.",  "jr.",   "sr.",  "vs.",
    "etc.", "approx.", "e.g.", "i.e.", "cf.",  "al.",  "fig.",  "no.",  "inc.",
    "ltd.", "co.",  "dept.", "est.", "u.s.",   "u.k.", "mg.",   "kg."};

bool is_abbreviation(std::string_view text, std::size_t dot) {
    std::size_t begin = dot;
    while (begin > 0 &&
           !std::isspace(static_cast<unsigned char>(text[begin - 1]))) {
        --begin;
    }
    std::string_view word = text.substr(begin, dot - begin + 1);
    while (!word.empty() &&
           !std::isalnum(static_cast<unsigned char>(word.front()))) {
        word.remove_prefix(1);
    }
    std::string lowered = to_lower(word);
    return std::find(kAbbreviations.begin(), kAbbreviations.end(), lowered) !=
           kAbbreviations.end();
}

bool is_sentence_boundary(std::string_view text, std::size_t i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') return false;
    if (i + 1 == text.size()) {
        return c != '.' || !is_abbreviation(text, i);
    }
    if (!std::isspace(static_cast<unsigned char>(text[i + 1]))) return false;
    std::size_t next = i + 1;
    while (next < text.size() &&
           std::isspace(static_cast<unsigned char>(text[next]))) {
        ++next;
    }
    if (next < text.size() &&
        !std::isupper(static_cast<unsigned char>(text[next]))) {
        return false;
    }
    return c != '.' || !is_abbreviation(text, i);
}

std::pair<std::string, std::string> unordered_key(const std::string& a,
                                                  const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_sentence_boundary(text, i)) continue;
        std::string sentence = trim(text.substr(start, i - start + 1));
        if (!sentence.empty()) sentences.push_back(std::move(sentence));
        start = i + 1;
    }
    if (start < text.size()) {
        std::string tail = trim(text.substr(start));
        if (!tail.empty()) sentences.push_back(std::move(tail));
    }
    return sentences;
}

std::map<std::string, std::size_t> match_entities_positions(
    std::string_view sentence, const EntityLexicon& lexicon) {
    std::vector<std::string> tokens = tokenize_words(sentence);
    std::vector<bool> consumed(tokens.size(), false);
    std::map<std::string, std::size_t> matches;

    for (const EntityLexicon::Alias& alias : lexicon.aliases()) {
        std::size_t len = alias.tokens.size();
        if (len > tokens.size()) continue;
        for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
            bool ok = true;
            for (std::size_t k = 0; k < len && ok; ++k) {
                ok = !consumed[i + k] && tokens[i + k] == alias.tokens[k];
            }
            if (!ok) continue;
            for (std::size_t k = 0; k < len; ++k) consumed[i + k] = true;
            auto [it, inserted] = matches.emplace(alias.canonical, i);
            if (!inserted) it->second = std::min(it->second, i);
            i += len - 1;
        }
    }
    return matches;
}

std::set<std::string> match_entities(std::string_view sentence,
                                     const EntityLexicon& lexicon) {
    std::set<std::string> labels;
    for (const auto& [label, pos] : match_entities_positions(sentence, lexicon)) {
        labels.insert(label);
    }
    return labels;
}

DirectionMode parse_direction_mode(std::string_view name) {
    if (name == "symmetric") return DirectionMode::symmetric;
    if (name == "textual") return DirectionMode::textual_order;
    throw InvalidArgument("unknown direction mode '" + std::string(name) +
                          "' (expected symmetric or textual)");
}

DocumentEvents extract_events(std::string_view text, const EntityLexicon& lexicon,
                              DirectionMode mode) {
    DocumentEvents out;
    std::vector<std::string> sentences = segment_sentences(text);
    out.sentence_count = sentences.size();

    std::set<std::pair<std::string, std::string>> seen_pairs;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        auto positions = match_entities_positions(sentences[s], lexicon);
        for (const auto& [label, pos] : positions) {
            out.mentions[label].push_back(static_cast<std::uint32_t>(s));
        }
        for (auto a = positions.begin(); a != positions.end(); ++a) {
            for (auto b = std::next(a); b != positions.end(); ++b) {
                if (!seen_pairs.insert(unordered_key(a->first, b->first)).second) {
                    continue;  // at most one event per pair per document
                }
                if (mode == DirectionMode::symmetric) {
                    out.directed_pairs.emplace(a->first, b->first);
                    out.directed_pairs.emplace(b->first, a->first);
                } else {
                    bool a_first = a->second < b->second ||
                                   (a->second == b->second && a->first < b->first);
                    if (a_first) {
                        out.directed_pairs.emplace(a->first, b->first);
                    } else {
                        out.directed_pairs.emplace(b->first, a->first);
                    }
                }
            }
        }
    }
    return out;
}

IngestReport ingest_document(EntityGraph& graph, std::string_view text,
                             const EntityLexicon& lexicon,
                             const DynamicsParams& params, DirectionMode mode,
                             std::vector<CooccurrenceEvent>* event_sink) {
    const auto doc_index = static_cast<std::uint32_t>(graph.doc_clock());
    DocumentEvents events = extract_events(text, lexicon, mode);

    IngestReport report;
    report.doc_index = doc_index;
    report.sentence_count = events.sentence_count;

    std::size_t nodes_before = graph.node_count();
    for (const auto& [label, sentence_indices] : events.mentions) {
        NodeId id = graph.ensure_node(label);
        for (std::uint32_t s : sentence_indices) {
            graph.record_passage(id, PassageRef{doc_index, s});
        }
    }
    report.new_node_count = graph.node_count() - nodes_before;

    std::set<EdgeKey> event_edges;
    std::set<std::pair<std::string, std::string>> unordered;
    for (const auto& [src, dst] : events.directed_pairs) {
        event_edges.emplace(*graph.find_node(src), *graph.find_node(dst));
        unordered.insert(unordered_key(src, dst));
    }
    report.event_count = unordered.size();
    for (const auto& [src, dst] : event_edges) {
        if (!graph.has_edge(src, dst)) ++report.new_edge_count;
    }

    step_graph(graph, params, event_edges);

    if (event_sink != nullptr) {
        for (const auto& [src, dst] : events.directed_pairs) {
            event_sink->push_back(CooccurrenceEvent{src, dst, doc_index});
        }
    }
    return report;
}

}  // namespace memini
