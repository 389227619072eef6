#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wf2powl/petri_net.hpp"
#include "wf2powl/powl.hpp"

namespace wf2powl {

/// Transition reachability: t reaches t' iff a non-empty alternating
/// transition-place path leads from t to t'. Closed under composition;
/// a transition reaches itself only through a cycle.
class ReachabilityRelation {
  public:
    explicit ReachabilityRelation(const PetriNet& net);

    bool reaches(const std::string& from, const std::string& to) const;
    const std::vector<std::string>& transitions() const { return ids_; }
    std::set<std::pair<std::string, std::string>> pairs() const;

  private:
    std::vector<std::string> ids_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<bool>> matrix_;
};

ReachabilityRelation transition_reachability(const PetriNet& net);

/// Finest partition in which reachability never crosses parts.
Partition xor_partition(const WorkflowNet& wf);

bool check_xor_pattern(const WorkflowNet& wf, const Partition& partition);

/// PTR(p, p'): transitions on alternating paths from p to p' whose
/// intermediate places all differ from p'.
TransitionSet in_between_reachable(const PetriNet& net, const std::string& p,
                                   const std::string& p_prime);

struct LoopDecomposition {
    std::string p_do;
    std::string p_redo;
    std::string t_source;
    std::string t_sink;
    TransitionSet T_do;
    TransitionSet T_redo;
};

/// Loop candidates are fixed by the net border: the lone silent transition
/// after the source and the lone silent transition before the sink.
std::optional<LoopDecomposition> find_loop_pattern(const WorkflowNet& wf,
                                                   std::string* why_not = nullptr);

/// Finest partition merging, per decision place, the transitions whose
/// reachability from the place's successors differs. A successor counts as
/// reached by itself.
Partition po_partition(const WorkflowNet& wf);

/// Raw execution order between parts: (i, j) iff some exit point of part i
/// is an entry point of part j.
IndexRelation execution_order(const WorkflowNet& wf, const Partition& partition);

struct OrderDecomposition {
    Partition partition;
    StrictOrder order;  // transitive closure of the raw execution order
};

struct PoPatternCheck {
    std::optional<OrderDecomposition> decomposition;
    std::vector<std::string> violations;
    bool ok() const { return decomposition.has_value(); }
};

PoPatternCheck check_po_pattern(const WorkflowNet& wf, const Partition& partition);

}  // namespace wf2powl
