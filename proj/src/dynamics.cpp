#include "memini/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memini/errors.hpp"
#include "memini/strings.hpp"

namespace memini {

void DynamicsParams::validate() const {
    if (!(tau_fast > 0.0)) throw InvalidArgument("tau_fast must be > 0");
    if (!(tau_slow > 0.0)) throw InvalidArgument("tau_slow must be > 0");
    if (!(tau_slow > tau_fast)) {
        throw InvalidArgument("tau_slow must exceed tau_fast (got " +
                              format_real(tau_slow) + " <= " + format_real(tau_fast) + ")");
    }
    if (!(coupling >= 0.0)) throw InvalidArgument("coupling must be >= 0");
    if (!(input_amplitude > 0.0)) throw InvalidArgument("input_amplitude must be > 0");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
    if (!(prune_epsilon >= 0.0)) throw InvalidArgument("prune_epsilon must be >= 0");
    double fast_rate = dt * (1.0 / tau_fast + coupling);
    double slow_rate = dt * (1.0 / tau_slow + coupling);
    if (fast_rate > 1.0 || slow_rate > 1.0) {
        throw InvalidArgument(
            "unstable Euler step: dt*(1/tau + coupling) = " + format_real(fast_rate) +
            " (fast), " + format_real(slow_rate) +
            " (slow); both must be <= 1");
    }
}

void SingleTimescaleParams::validate() const {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
    if (!(input_amplitude > 0.0)) throw InvalidArgument("input_amplitude must be > 0");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
    if (dt / tau > 1.0) {
        throw InvalidArgument("unstable Euler step: dt/tau = " + format_real(dt / tau) +
                              " must be <= 1");
    }
}

double effective_tau(const DynamicsParams& params) {
    return 1.0 / (1.0 / params.tau_fast + params.coupling);
}

EdgeState step_edge(EdgeState state, const DynamicsParams& params, bool has_input) {
    if (!std::isfinite(state.w_fast) || !std::isfinite(state.w_slow)) {
        throw InvalidArgument("non-finite edge state");
    }
    double input = has_input ? params.input_amplitude : 0.0;
    double w_fast = state.w_fast +
                    params.dt * (-state.w_fast / params.tau_fast +
                                 params.coupling * (state.w_slow - state.w_fast) + input);
    double w_slow = state.w_slow +
                    params.dt * (-state.w_slow / params.tau_slow +
                                 params.coupling * (state.w_fast - state.w_slow));
    return {std::max(0.0, w_fast), std::max(0.0, w_slow)};
}

double single_timescale_step(double w, const SingleTimescaleParams& params,
                             bool has_input) {
    double input = has_input ? params.input_amplitude : 0.0;
    return std::max(0.0, w + params.dt * (-w / params.tau + input));
}

std::uint64_t uniform_update(std::uint64_t count, bool has_input) {
    return has_input ? count + 1 : count;
}

StepReport step_graph(EntityGraph& graph, const DynamicsParams& params,
                      const std::set<EdgeKey>& event_edges) {
    params.validate();
    for (const auto& [src, dst] : event_edges) {
        if (src >= graph.node_count() || dst >= graph.node_count()) {
            throw NotFound("event edge references unknown node id " +
                           std::to_string(src >= graph.node_count() ? src : dst));
        }
        if (src == dst) throw InvalidArgument("event edge may not be a self-loop");
    }

    StepReport report;
    for (const auto& [src, dst] : event_edges) {
        if (!graph.has_edge(src, dst)) graph.set_edge(src, dst, {});
    }

    std::vector<EdgeKey> prune;
    for (NodeId src = 0; src < graph.node_count(); ++src) {
        // Per-edge updates are independent, so in-place assignment still
        // realizes the synchronous map.
        for (const auto& [dst, state] : graph.out_edges(src)) {
            bool has_input = event_edges.contains({src, dst});
            EdgeState next = step_edge(state, params, has_input);
            graph.set_edge(src, dst, next);
            ++report.updated;
            if (next.w_fast < params.prune_epsilon && next.w_slow < params.prune_epsilon) {
                prune.emplace_back(src, dst);
            }
        }
    }
    for (const auto& [src, dst] : prune) {
        graph.erase_edge(src, dst);
        ++report.pruned;
    }
    graph.advance_doc_clock();
    return report;
}

std::string_view model_name(MemoryModel model) {
    switch (model) {
        case MemoryModel::coupled: return "coupled";
        case MemoryModel::single: return "single";
        case MemoryModel::uniform: return "uniform";
    }
    return "?";
}

MemoryModel parse_model_name(std::string_view name) {
    if (name == "coupled") return MemoryModel::coupled;
    if (name == "single") return MemoryModel::single;
    if (name == "uniform") return MemoryModel::uniform;
    throw InvalidArgument("unknown model '" + std::string(name) +
                          "' (expected coupled, single, or uniform)");
}

Trajectory integrate_pair(const std::vector<std::uint32_t>& event_steps,
                          std::uint32_t horizon, const DynamicsParams& params,
                          MemoryModel model) {
    params.validate();
    for (std::size_t i = 0; i < event_steps.size(); ++i) {
        if (event_steps[i] >= horizon) {
            throw InvalidArgument("event step " + std::to_string(event_steps[i]) +
                                  " is outside horizon " + std::to_string(horizon));
        }
        if (i > 0 && event_steps[i] <= event_steps[i - 1]) {
            throw InvalidArgument("event steps must be strictly increasing");
        }
    }

    SingleTimescaleParams single{effective_tau(params), params.input_amplitude,
                                 params.dt};
    Trajectory trajectory;
    trajectory.reserve(horizon);
    EdgeState coupled;
    double w = 0.0;
    std::uint64_t count = 0;
    std::size_t next_event = 0;
    for (std::uint32_t step = 0; step < horizon; ++step) {
        bool has_input =
            next_event < event_steps.size() && event_steps[next_event] == step;
        if (has_input) ++next_event;
        TrajectorySample sample{step, 0.0, 0.0};
        switch (model) {
            case MemoryModel::coupled:
                coupled = step_edge(coupled, params, has_input);
                sample.w_fast = coupled.w_fast;
                sample.w_slow = coupled.w_slow;
                break;
            case MemoryModel::single:
                w = single_timescale_step(w, single, has_input);
                sample.w_fast = w;
                break;
            case MemoryModel::uniform:
                count = uniform_update(count, has_input);
                sample.w_fast = static_cast<double>(count);
                break;
        }
        trajectory.push_back(sample);
    }
    return trajectory;
}

}  // namespace memini
