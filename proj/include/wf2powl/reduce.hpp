#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wf2powl/petri_net.hpp"
#include "wf2powl/semantics.hpp"

namespace wf2powl {

struct RewriteReport {
    std::string rule;
    int applied = 0;
    std::vector<std::pair<int, int>> node_deltas;  // (added, removed) per application

    int nodes_added() const {
        int sum = 0;
        for (const auto& [a, r] : node_deltas) {
            (void)r;
            sum += a;
        }
        return sum;
    }
    int nodes_removed() const {
        int sum = 0;
        for (const auto& [a, r] : node_deltas) {
            (void)a;
            sum += r;
        }
        return sum;
    }
};

struct RuleSet {
    bool xor_split = true;
    bool xor_join = true;
    bool self_loop = true;
    bool loop_requirement_fix = true;
    static RuleSet all() { return RuleSet{}; }
    static RuleSet none() { return RuleSet{false, false, false, false}; }
};

/// Merges place groups that encode a decision spread over concurrent
/// places into one explicit decision place (choices: the common
/// successors plus a silent fork into the residual branches).
std::pair<WorkflowNet, RewriteReport> explicit_xor_split(const WorkflowNet& wf);

/// Mirror image of explicit_xor_split on the joining side.
std::pair<WorkflowNet, RewriteReport> explicit_xor_join(const WorkflowNet& wf);

/// Splits the single place shared by the border transitions of a self-loop
/// into an entry/exit pair joined by a fresh silent do-transition.
std::pair<WorkflowNet, RewriteReport> self_loop_do_insertion(const WorkflowNet& wf);

/// Reroutes arcs from do-part transitions back into the loop entry place
/// (and symmetrically on the redo side) through a fresh place and silent
/// transition. One pass; detection falls through when the requirement
/// still fails afterwards.
std::pair<WorkflowNet, RewriteReport> loop_requirement6_fix(const WorkflowNet& wf);

struct ReduceResult {
    WorkflowNet net;
    std::vector<RewriteReport> reports;  // one entry per rule, application counts aggregated
    int total_applied() const {
        int sum = 0;
        for (const auto& r : reports) sum += r.applied;
        return sum;
    }
};

/// Applies the enabled rules to exhaustion in a fixed order (split, join,
/// self-loop, requirement fix). With verify, every application is gated by
/// bounded-language equality plus safeness/soundness re-checks and rolled
/// back when the gate fails.
ReduceResult reduce_fixpoint(const WorkflowNet& wf, const RuleSet& rules, bool verify,
                             std::size_t language_bound = 6,
                             const ExplorationLimits& limits = {});

}  // namespace wf2powl
