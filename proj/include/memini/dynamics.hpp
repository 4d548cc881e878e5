#pragma once

#include <cstdint>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "memini/graph.hpp"

namespace memini {

// Parameters of the coupled fast/slow edge update. Time is measured in
// document steps. Defaults are the bundled experiment parameterization.
struct DynamicsParams {
    double tau_fast = 2.0;
    double tau_slow = 10.0;
    double coupling = 0.2;
    double input_amplitude = 1.0;
    double dt = 1.0;
    double prune_epsilon = 1e-9;

    // Throws InvalidArgument with a diagnostic when the parameters are
    // out of range or violate the explicit-Euler stability condition
    // dt * (1/tau + coupling) <= 1 for either variable. Inside that
    // region the update map has non-negative coefficients, so the
    // non-negativity clamp can never bind for non-negative inputs.
    void validate() const;
};

// One-variable ablation: dw/dt = -w/tau + I.
struct SingleTimescaleParams {
    double tau = 0.0;
    double input_amplitude = 1.0;
    double dt = 1.0;

    void validate() const;
};

// Decay rate the coupled model exhibits while w_slow is zero:
// 1 / (1/tau_fast + coupling). The matched single-timescale ablation
// uses this as its tau.
double effective_tau(const DynamicsParams& params);

// One synchronous forward-Euler step of the coupled pair, both results
// clamped to >= 0. Input I is input_amplitude when has_input, else 0.
EdgeState step_edge(EdgeState state, const DynamicsParams& params, bool has_input);

// One single-timescale step, clamped to >= 0.
double single_timescale_step(double w, const SingleTimescaleParams& params,
                             bool has_input);

// No-decay baseline: cumulative event count.
std::uint64_t uniform_update(std::uint64_t count, bool has_input);

struct StepReport {
    std::size_t updated = 0;
    std::size_t pruned = 0;
};

using EdgeKey = std::pair<NodeId, NodeId>;

// Advances every stored edge one document step; edges listed in
// event_edges receive input (and are created at (0,0) first when
// absent). Edges whose both variables fall below prune_epsilon are
// deleted. Increments the graph's doc clock.
StepReport step_graph(EntityGraph& graph, const DynamicsParams& params,
                      const std::set<EdgeKey>& event_edges);

enum class MemoryModel { coupled, single, uniform };

std::string_view model_name(MemoryModel model);
MemoryModel parse_model_name(std::string_view name);

struct TrajectorySample {
    std::uint32_t step = 0;
    double w_fast = 0.0;
    double w_slow = 0.0;
};

using Trajectory = std::vector<TrajectorySample>;

// Integrates one pair from zero state for `horizon` steps under the
// chosen model, with input applied at exactly the listed steps. Event
// steps must be strictly increasing and < horizon. The single and
// uniform models report their value as w_fast with w_slow = 0; the
// single model uses tau = effective_tau(params).
Trajectory integrate_pair(const std::vector<std::uint32_t>& event_steps,
                          std::uint32_t horizon, const DynamicsParams& params,
                          MemoryModel model);

}  // namespace memini
