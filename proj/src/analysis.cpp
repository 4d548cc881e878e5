#include "memini/analysis.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "memini/errors.hpp"
#include "memini/strings.hpp"

namespace memini {

std::string_view pattern_group_name(PatternGroup group) {
    switch (group) {
        case PatternGroup::repeated_old: return "repeated_old";
        case PatternGroup::few_old: return "few_old";
        case PatternGroup::repeated_recent: return "repeated_recent";
        case PatternGroup::few_recent: return "few_recent";
        case PatternGroup::excluded: return "excluded";
    }
    return "?";
}

void ClassificationThresholds::validate() const {
    if (repeated_min < 1) throw InvalidArgument("repeated_min must be >= 1");
    if (old_max_index < 0) throw InvalidArgument("old_max_index must be >= 0");
    if (old_max_index >= recent_min_index) {
        throw InvalidArgument("old_max_index must be < recent_min_index");
    }
}

PatternGroup classify_pair(const PairRecord& record,
                           const ClassificationThresholds& thresholds) {
    thresholds.validate();
    if (record.event_steps.empty()) {
        throw InvalidArgument("pair record has no events");
    }
    bool repeated =
        record.event_count() >= static_cast<std::size_t>(thresholds.repeated_min);
    auto last = static_cast<int>(record.last_index());
    if (last <= thresholds.old_max_index) {
        return repeated ? PatternGroup::repeated_old : PatternGroup::few_old;
    }
    if (last >= thresholds.recent_min_index) {
        return repeated ? PatternGroup::repeated_recent : PatternGroup::few_recent;
    }
    return PatternGroup::excluded;
}

std::vector<PairRecord> build_pair_records(
    std::span<const CooccurrenceEvent> events) {
    std::map<std::pair<std::string, std::string>, std::set<std::uint32_t>> pairs;
    for (const CooccurrenceEvent& e : events) {
        auto key = e.src < e.dst ? std::make_pair(e.src, e.dst)
                                 : std::make_pair(e.dst, e.src);
        pairs[std::move(key)].insert(e.doc_index);
    }
    std::vector<PairRecord> records;
    records.reserve(pairs.size());
    for (auto& [key, steps] : pairs) {
        records.push_back(PairRecord{key.first, key.second,
                                     {steps.begin(), steps.end()}});
    }
    return records;
}

AblationTable ablation_table(std::span<const PairRecord> records,
                             std::uint32_t horizon, const DynamicsParams& params,
                             const ClassificationThresholds& thresholds) {
    params.validate();
    thresholds.validate();

    AblationTable table;
    std::array<double, 4> coupled_sum{};
    std::array<double, 4> single_sum{};
    std::array<double, 4> uniform_sum{};

    for (const PairRecord& record : records) {
        PatternGroup group = classify_pair(record, thresholds);
        if (group == PatternGroup::excluded) {
            ++table.excluded_count;
            continue;
        }
        auto g = static_cast<std::size_t>(group);
        Trajectory coupled =
            integrate_pair(record.event_steps, horizon, params, MemoryModel::coupled);
        Trajectory single =
            integrate_pair(record.event_steps, horizon, params, MemoryModel::single);
        Trajectory uniform =
            integrate_pair(record.event_steps, horizon, params, MemoryModel::uniform);
        coupled_sum[g] += coupled.back().w_fast;
        single_sum[g] += single.back().w_fast;
        uniform_sum[g] += uniform.back().w_fast;
        ++table.rows[g].pair_count;
    }
    for (std::size_t g = 0; g < table.rows.size(); ++g) {
        auto n = static_cast<double>(table.rows[g].pair_count);
        if (n == 0.0) continue;
        table.rows[g].coupled_mean = coupled_sum[g] / n;
        table.rows[g].single_mean = single_sum[g] / n;
        table.rows[g].uniform_mean = uniform_sum[g] / n;
    }
    return table;
}

void export_trajectory(std::ostream& out,
                       std::span<const std::uint32_t> event_steps,
                       std::uint32_t horizon, const DynamicsParams& params,
                       std::span<const MemoryModel> models) {
    std::vector<std::uint32_t> steps(event_steps.begin(), event_steps.end());
    out << "step,model,w_fast,w_slow,event\n";
    for (MemoryModel model : models) {
        Trajectory trajectory = integrate_pair(steps, horizon, params, model);
        std::size_t next_event = 0;
        for (const TrajectorySample& sample : trajectory) {
            bool has_event =
                next_event < steps.size() && steps[next_event] == sample.step;
            if (has_event) ++next_event;
            out << sample.step << ',' << model_name(model) << ','
                << format_real(sample.w_fast) << ',' << format_real(sample.w_slow)
                << ',' << (has_event ? 1 : 0) << '\n';
        }
    }
}

}  // namespace memini
