#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "memini/dynamics.hpp"
#include "memini/ingest.hpp"

namespace memini {

// Per unordered pair: the sorted document indices of its events.
struct PairRecord {
    std::string label_a;  // label_a < label_b
    std::string label_b;
    std::vector<std::uint32_t> event_steps;

    std::size_t event_count() const { return event_steps.size(); }
    std::uint32_t last_index() const { return event_steps.back(); }

    friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

enum class PatternGroup {
    repeated_old,
    few_old,
    repeated_recent,
    few_recent,
    excluded,
};

std::string_view pattern_group_name(PatternGroup group);

// Event-pattern classification cutoffs. Defaults encode a 13-document
// stream: "old" means the last event came at least five documents
// before the end (index <= 7) and "recent" means it fell in the final
// three documents (index >= 10).
struct ClassificationThresholds {
    int repeated_min = 3;
    int old_max_index = 7;
    int recent_min_index = 10;

    void validate() const;
};

PatternGroup classify_pair(const PairRecord& record,
                           const ClassificationThresholds& thresholds);

// Collapses a directed event log into unordered pair records, one per
// pair with at least one event, ordered by (label_a, label_b).
std::vector<PairRecord> build_pair_records(std::span<const CooccurrenceEvent> events);

struct AblationRow {
    std::size_t pair_count = 0;
    double coupled_mean = 0.0;
    double single_mean = 0.0;
    double uniform_mean = 0.0;
};

// Group means of final association weight under the three models; rows
// indexed by PatternGroup order (excluded pairs only counted).
struct AblationTable {
    std::array<AblationRow, 4> rows;
    std::size_t excluded_count = 0;

    const AblationRow& row(PatternGroup group) const {
        return rows[static_cast<std::size_t>(group)];
    }
    std::size_t classified_count() const {
        std::size_t n = 0;
        for (const AblationRow& r : rows) n += r.pair_count;
        return n;
    }
};

// Integrates every pair independently from zero state over the stream
// horizon under the coupled, matched single-timescale, and uniform
// models, and reports per-group means of the final values (coupled:
// final w_fast).
AblationTable ablation_table(std::span<const PairRecord> records,
                             std::uint32_t horizon, const DynamicsParams& params,
                             const ClassificationThresholds& thresholds);

// CSV rows `step,model,w_fast,w_slow,event` for the given event
// pattern under each requested model; reals carry 17 significant
// digits so external plots reproduce the run exactly.
void export_trajectory(std::ostream& out,
                       std::span<const std::uint32_t> event_steps,
                       std::uint32_t horizon, const DynamicsParams& params,
                       std::span<const MemoryModel> models);

}  // namespace memini
