#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "memini/dynamics.hpp"
#include "memini/errors.hpp"

using namespace memini;

namespace {

// Independent reference: literal substitution into the update rule,
// kept separate from the library code path on purpose.
struct RefState {
    double wf = 0.0;
    double ws = 0.0;
};

RefState ref_step(RefState s, const DynamicsParams& p, bool input) {
    double I = input ? p.input_amplitude : 0.0;
    RefState n;
    n.wf = s.wf + p.dt * (-s.wf / p.tau_fast + p.coupling * (s.ws - s.wf) + I);
    n.ws = s.ws + p.dt * (-s.ws / p.tau_slow + p.coupling * (s.wf - s.ws));
    n.wf = std::max(0.0, n.wf);
    n.ws = std::max(0.0, n.ws);
    return n;
}

RefState ref_run(const std::vector<std::uint32_t>& events, std::uint32_t horizon,
                 const DynamicsParams& p) {
    RefState s;
    std::size_t next = 0;
    for (std::uint32_t t = 0; t < horizon; ++t) {
        bool input = next < events.size() && events[next] == t;
        if (input) ++next;
        s = ref_step(s, p, input);
    }
    return s;
}

std::vector<std::uint32_t> random_pattern(std::mt19937& rng, std::uint32_t horizon) {
    std::vector<std::uint32_t> steps;
    std::bernoulli_distribution coin(0.3);
    for (std::uint32_t t = 0; t < horizon; ++t) {
        if (coin(rng)) steps.push_back(t);
    }
    return steps;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("step_edge matches hand-computed values under defaults") {
    DynamicsParams p;
    EdgeState s = step_edge({0.0, 0.0}, p, true);
    CHECK(s.w_fast == 1.0);  // fresh edge reads exactly b after its first event
    CHECK(s.w_slow == 0.0);

    s = step_edge({1.0, 0.0}, p, false);
    CHECK(s.w_fast == doctest::Approx(0.3).epsilon(1e-14));  // 0.3*1 + 0.2*0
    CHECK(s.w_slow == doctest::Approx(0.2).epsilon(1e-14));  // 0.2*1 + 0.7*0

    s = step_edge({0.3, 0.2}, p, false);
    CHECK(s.w_fast == doctest::Approx(0.13).epsilon(1e-14));  // 0.3*0.3 + 0.2*0.2
    CHECK(s.w_slow == doctest::Approx(0.2).epsilon(1e-14));   // 0.2*0.3 + 0.7*0.2

    CHECK(step_edge({0.0, 0.0}, p, false) == EdgeState{0.0, 0.0});
    CHECK_THROWS_AS(step_edge({std::nan(""), 0.0}, p, true), InvalidArgument);
}

TEST_CASE("parameter validation rejects bad and unstable settings") {
    DynamicsParams p;
    CHECK_NOTHROW(p.validate());

    DynamicsParams bad = p;
    bad.tau_fast = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = p;
    bad.tau_slow = 1.0;  // must exceed tau_fast
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = p;
    bad.tau_fast = 0.5;
    bad.coupling = 0.6;  // dt*(1/tau + C) = 2.6 > 1
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = p;
    bad.dt = 2.0;  // dt*(1/2 + 0.2) = 1.4 > 1
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("step_graph advances stored edges, creates event edges, prunes") {
    DynamicsParams p;
    EntityGraph g;

    StepReport r = step_graph(g, p, {});
    CHECK(r.updated == 0);
    CHECK(r.pruned == 0);
    CHECK(g.doc_clock() == 1);

    NodeId a = g.ensure_node("a");
    NodeId b = g.ensure_node("b");
    r = step_graph(g, p, {{a, b}});
    CHECK(r.updated == 1);
    CHECK(g.edge_state(a, b).w_fast == 1.0);

    r = step_graph(g, p, {});
    CHECK(r.updated == 1);
    CHECK(g.edge_state(a, b).w_fast == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(g.edge_state(a, b).w_slow == doctest::Approx(0.2).epsilon(1e-14));

    CHECK_THROWS_AS(step_graph(g, p, {{a, NodeId{7}}}), NotFound);
    CHECK_THROWS_AS(step_graph(g, p, {{a, a}}), InvalidArgument);
}

TEST_CASE("pruning removes edges once both variables sink below epsilon") {
    DynamicsParams p;
    p.prune_epsilon = 1e-3;
    EntityGraph g;
    NodeId a = g.ensure_node("a");
    NodeId b = g.ensure_node("b");
    step_graph(g, p, {{a, b}});
    std::size_t pruned_total = 0;
    for (int t = 0; t < 40 && g.has_edge(a, b); ++t) {
        pruned_total += step_graph(g, p, {}).pruned;
    }
    CHECK_FALSE(g.has_edge(a, b));
    CHECK(pruned_total == 1);
    // Missing-edge equivalence: the pruned edge reads as zero state.
    CHECK(g.edge_state(a, b) == EdgeState{0.0, 0.0});
}

TEST_CASE("effective_tau") {
    DynamicsParams p;
    CHECK(effective_tau(p) == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
    p.coupling = 0.0;
    CHECK(effective_tau(p) == doctest::Approx(2.0).epsilon(1e-15));
    p.tau_fast = 1.0;
    p.coupling = 1.0;
    CHECK(effective_tau(p) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("single_timescale_step with the matched tau") {
    SingleTimescaleParams p{10.0 / 7.0, 1.0, 1.0};
    CHECK(single_timescale_step(0.0, p, true) == 1.0);
    CHECK(single_timescale_step(1.0, p, false) ==
          doctest::Approx(0.3).epsilon(1e-14));

    // Events at 5,6,7 then decay to step 12: 1.39 * 0.3^5.
    double w = 0.0;
    for (std::uint32_t t = 0; t < 13; ++t) {
        w = single_timescale_step(w, p, t >= 5 && t <= 7);
    }
    CHECK(w == doctest::Approx(0.0033777).epsilon(1e-6));
}

TEST_CASE("uniform_update counts events and never decays") {
    CHECK(uniform_update(0, true) == 1);
    CHECK(uniform_update(2, false) == 2);
    std::uint64_t count = 0;
    for (std::uint32_t t = 0; t < 13; ++t) {
        count = uniform_update(count, t >= 5 && t <= 7);
    }
    CHECK(count == 3);
}

TEST_CASE("integrate_pair reproduces the reference iteration") {
    DynamicsParams p;
    std::vector<std::uint32_t> events{5, 6, 7};

    Trajectory t = integrate_pair(events, 13, p, MemoryModel::coupled);
    REQUIRE(t.size() == 13);
    CHECK(t.back().w_fast == doctest::Approx(0.1036741).epsilon(1e-10));
    CHECK(t.back().w_slow == doctest::Approx(0.2488174).epsilon(1e-10));
    RefState ref = ref_run(events, 13, p);
    CHECK(t.back().w_fast == ref.wf);
    CHECK(t.back().w_slow == ref.ws);

    // Later events, higher final value: recency emerges from the decay.
    Trajectory late = integrate_pair({8, 9, 10}, 13, p, MemoryModel::coupled);
    CHECK(late.back().w_fast == doctest::Approx(0.2659).epsilon(1e-10));
    CHECK(late.back().w_fast > t.back().w_fast);

    Trajectory empty = integrate_pair({}, 5, p, MemoryModel::coupled);
    for (const TrajectorySample& s : empty) {
        CHECK(s.w_fast == 0.0);
        CHECK(s.w_slow == 0.0);
    }

    CHECK_THROWS_AS(integrate_pair({3, 2}, 13, p, MemoryModel::coupled),
                    InvalidArgument);
    CHECK_THROWS_AS(integrate_pair({13}, 13, p, MemoryModel::coupled),
                    InvalidArgument);
}

TEST_CASE("uniform trajectory reports the running count as w_fast") {
    Trajectory t = integrate_pair({0}, 3, DynamicsParams{}, MemoryModel::uniform);
    REQUIRE(t.size() == 3);
    for (const TrajectorySample& s : t) {
        CHECK(s.w_fast == 1.0);
        CHECK(s.w_slow == 0.0);
    }
}

TEST_CASE("non-negativity holds and the clamp never binds inside the stable region") {
    std::mt19937 rng(7);
    DynamicsParams p;
    for (int trial = 0; trial < 50; ++trial) {
        auto events = random_pattern(rng, 20);
        Trajectory t = integrate_pair(events, 20, p, MemoryModel::coupled);
        RefState unclamped;  // same map without the clamp
        std::size_t next = 0;
        for (std::uint32_t step = 0; step < 20; ++step) {
            bool input = next < events.size() && events[next] == step;
            if (input) ++next;
            double I = input ? p.input_amplitude : 0.0;
            double wf = unclamped.wf +
                        p.dt * (-unclamped.wf / p.tau_fast +
                                p.coupling * (unclamped.ws - unclamped.wf) + I);
            double ws = unclamped.ws +
                        p.dt * (-unclamped.ws / p.tau_slow +
                                p.coupling * (unclamped.wf - unclamped.ws));
            unclamped = {wf, ws};
            CHECK(t[step].w_fast >= 0.0);
            CHECK(t[step].w_slow >= 0.0);
            CHECK(t[step].w_fast == unclamped.wf);
            CHECK(t[step].w_slow == unclamped.ws);
        }
    }
}

TEST_CASE("zero fixed point: no events, no state, forever") {
    Trajectory t = integrate_pair({}, 50, DynamicsParams{}, MemoryModel::coupled);
    for (const TrajectorySample& s : t) {
        CHECK(s.w_fast == 0.0);
        CHECK(s.w_slow == 0.0);
    }
}

TEST_CASE("hidden variable: without coupling, w_slow never moves") {
    DynamicsParams p;
    p.coupling = 0.0;
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Trajectory t =
            integrate_pair(random_pattern(rng, 15), 15, p, MemoryModel::coupled);
        for (const TrajectorySample& s : t) CHECK(s.w_slow == 0.0);
    }
}

TEST_CASE("matched-decay equivalence: C=0 with effective tau equals the ablation") {
    DynamicsParams defaults;
    DynamicsParams matched;
    matched.coupling = 0.0;
    matched.tau_fast = effective_tau(defaults);
    std::mt19937 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto events = random_pattern(rng, 13);
        Trajectory coupled = integrate_pair(events, 13, matched, MemoryModel::coupled);
        Trajectory single = integrate_pair(events, 13, defaults, MemoryModel::single);
        for (std::size_t i = 0; i < coupled.size(); ++i) {
            CHECK(coupled[i].w_fast ==
                  doctest::Approx(single[i].w_fast).epsilon(1e-12));
        }
    }
}

TEST_CASE("superposition: the unclamped map is affine in the input pattern") {
    DynamicsParams p;
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto ea = random_pattern(rng, 16);
        auto eb = random_pattern(rng, 16);
        Trajectory ta = integrate_pair(ea, 16, p, MemoryModel::coupled);
        Trajectory tb = integrate_pair(eb, 16, p, MemoryModel::coupled);

        // Sum of patterns: apply both inputs per step via the raw map.
        RefState sum;
        std::size_t na = 0;
        std::size_t nb = 0;
        for (std::uint32_t t = 0; t < 16; ++t) {
            double I = 0.0;
            if (na < ea.size() && ea[na] == t) {
                I += p.input_amplitude;
                ++na;
            }
            if (nb < eb.size() && eb[nb] == t) {
                I += p.input_amplitude;
                ++nb;
            }
            double wf = sum.wf + p.dt * (-sum.wf / p.tau_fast +
                                         p.coupling * (sum.ws - sum.wf) + I);
            double ws = sum.ws + p.dt * (-sum.ws / p.tau_slow +
                                         p.coupling * (sum.wf - sum.ws));
            sum = {wf, ws};
            CHECK(sum.wf ==
                  doctest::Approx(ta[t].w_fast + tb[t].w_fast).epsilon(1e-12));
            CHECK(sum.ws ==
                  doctest::Approx(ta[t].w_slow + tb[t].w_slow).epsilon(1e-12));
        }
    }
}

TEST_CASE("time-translation invariance of the final state") {
    DynamicsParams p;
    std::mt19937 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        auto events = random_pattern(rng, 10);
        std::uniform_int_distribution<std::uint32_t> shift_pick(1, 6);
        std::uint32_t k = shift_pick(rng);
        std::vector<std::uint32_t> shifted;
        for (std::uint32_t e : events) shifted.push_back(e + k);
        Trajectory base = integrate_pair(events, 10, p, MemoryModel::coupled);
        Trajectory moved = integrate_pair(shifted, 10 + k, p, MemoryModel::coupled);
        CHECK(moved.back().w_fast ==
              doctest::Approx(base.back().w_fast).epsilon(1e-12));
        CHECK(moved.back().w_slow ==
              doctest::Approx(base.back().w_slow).epsilon(1e-12));
    }
}

TEST_CASE("consolidation gap: coupled final exceeds matched single by >= 30x") {
    DynamicsParams p;
    Trajectory coupled = integrate_pair({5, 6, 7}, 13, p, MemoryModel::coupled);
    Trajectory single = integrate_pair({5, 6, 7}, 13, p, MemoryModel::single);
    CHECK(coupled.back().w_fast / single.back().w_fast >= 30.0);
}

TEST_CASE("regime ordering: episodic stays shallow, repetition consolidates") {
    DynamicsParams p;
    Trajectory episodic = integrate_pair({0}, 13, p, MemoryModel::coupled);
    double peak_slow = 0.0;
    for (const TrajectorySample& s : episodic) {
        peak_slow = std::max(peak_slow, s.w_slow);
    }
    CHECK(peak_slow < 0.25);

    Trajectory consolidated = integrate_pair({5, 6, 7}, 13, p, MemoryModel::coupled);
    CHECK(consolidated[8].w_slow > 0.4);  // step after the last event
}

}  // TEST_SUITE
