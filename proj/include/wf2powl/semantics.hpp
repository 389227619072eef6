#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "wf2powl/petri_net.hpp"

namespace wf2powl {

/// Multi-set of places. Stored counts are always >= 1.
class Marking {
  public:
    Marking() = default;
    explicit Marking(std::map<std::string, int> counts);

    static Marking single(const std::string& place_id) { return Marking({{place_id, 1}}); }

    int count(const std::string& place_id) const;
    void add(const std::string& place_id, int n = 1);
    void remove(const std::string& place_id, int n = 1);
    bool empty() const { return counts_.empty(); }
    int total() const;
    const std::map<std::string, int>& counts() const { return counts_; }

    std::string to_string() const;

    auto operator<=>(const Marking&) const = default;

  private:
    std::map<std::string, int> counts_;
};

struct ExplorationLimits {
    std::size_t max_states = 1'000'000;
    // Any place crossing this count is treated as evidence of unboundedness
    // and aborts exploration early.
    int max_token_count_per_place = 2;
};

class ReachabilityGraph {
  public:
    ReachabilityGraph(std::vector<Marking> states, std::size_t initial,
                      std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges)
        : states_(std::move(states)), initial_(initial), edges_(std::move(edges)) {}

    const std::vector<Marking>& states() const { return states_; }
    const Marking& initial() const { return states_[initial_]; }
    std::size_t initial_index() const { return initial_; }
    const std::vector<std::tuple<std::size_t, std::string, std::size_t>>& edges() const {
        return edges_;
    }

  private:
    std::vector<Marking> states_;
    std::size_t initial_;
    std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges_;
};

struct SoundnessReport {
    bool no_dead_transitions = false;
    bool option_to_complete = false;
    bool proper_completion = false;
    std::vector<std::string> dead_transitions;
    bool sound() const { return no_dead_transitions && option_to_complete && proper_completion; }
};

/// Sequence of visible activity names.
using Trace = std::vector<std::string>;
using TraceSet = std::set<Trace>;

std::string trace_to_string(const Trace& trace);

TransitionSet enabled(const PetriNet& net, const Marking& marking);
Marking fire(const PetriNet& net, const Marking& marking, const std::string& transition_id);

/// Breadth-first state space from [source]. With require_safe, aborts with
/// UnsafeDetectedError as soon as any place holds two tokens.
ReachabilityGraph explore(const WorkflowNet& wf, const ExplorationLimits& limits,
                          bool require_safe = false);

bool check_safe(const WorkflowNet& wf, const ExplorationLimits& limits);

/// Requires a safe net (throws UnsafeDetectedError otherwise).
SoundnessReport check_sound(const WorkflowNet& wf, const ExplorationLimits& limits);

/// Exact set of visible traces of length <= k_visible over complete runs
/// [source] -> [sink]. Requires a safe net.
TraceSet bounded_language(const WorkflowNet& wf, std::size_t k_visible,
                          const ExplorationLimits& limits);

std::string reachability_to_dot(const ReachabilityGraph& graph);

}  // namespace wf2powl
