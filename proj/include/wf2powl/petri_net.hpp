#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wf2powl/errors.hpp"

namespace wf2powl {

/// Transition labeling: a visible activity name or the silent activity.
class Label {
  public:
    static Label visible(std::string name) {
        if (name.empty()) throw Error("visible labels must be non-empty");
        return Label(std::move(name));
    }
    static Label silent() { return Label(); }

    bool is_silent() const { return !name_.has_value(); }
    const std::string& name() const {
        if (is_silent()) throw Error("silent label has no name");
        return *name_;
    }

    bool operator==(const Label& o) const { return name_ == o.name_; }
    bool operator!=(const Label& o) const { return !(*this == o); }

  private:
    Label() = default;
    explicit Label(std::string n) : name_(std::move(n)) {}
    std::optional<std::string> name_;
};

enum class NodeKind { Place, Transition };

/// Reference to a net node. Place and transition id spaces are disjoint,
/// the kind tag keeps lookups unambiguous anyway.
struct NodeRef {
    NodeKind kind;
    std::string id;

    static NodeRef place(std::string id) { return {NodeKind::Place, std::move(id)}; }
    static NodeRef transition(std::string id) { return {NodeKind::Transition, std::move(id)}; }

    bool is_place() const { return kind == NodeKind::Place; }
    bool is_transition() const { return kind == NodeKind::Transition; }

    auto operator<=>(const NodeRef&) const = default;
};

using Arc = std::pair<NodeRef, NodeRef>;
using PlaceSet = std::set<std::string>;
using TransitionSet = std::set<std::string>;
using ArcSet = std::set<Arc>;

/// Ordinary (unweighted, duplicate-free) Petri net. Value-semantic: the
/// builder methods mutate this instance, structural queries never do.
/// Rewrites copy the net and edit the copy.
class PetriNet {
  public:
    PetriNet() = default;

    PetriNet& add_place(std::string id);
    PetriNet& add_transition(std::string id, Label label);
    PetriNet& add_arc(const NodeRef& from, const NodeRef& to);
    PetriNet& remove_place(const std::string& id);
    PetriNet& remove_transition(const std::string& id);
    PetriNet& remove_arc(const NodeRef& from, const NodeRef& to);
    PetriNet& relabel_transition(const std::string& id, Label label);

    bool has_place(const std::string& id) const { return places_.count(id) > 0; }
    bool has_transition(const std::string& id) const { return transitions_.count(id) > 0; }
    bool has_node(const NodeRef& n) const;
    bool has_arc(const NodeRef& from, const NodeRef& to) const { return arcs_.count({from, to}) > 0; }

    const PlaceSet& places() const { return places_; }
    const std::map<std::string, Label>& transitions() const { return transitions_; }
    const ArcSet& arcs() const { return arcs_; }
    const Label& label_of(const std::string& transition_id) const;

    const std::set<NodeRef>& preset(const NodeRef& node) const;
    const std::set<NodeRef>& postset(const NodeRef& node) const;

    bool operator==(const PetriNet& o) const {
        return places_ == o.places_ && transitions_eq(o) && arcs_ == o.arcs_;
    }

  private:
    void check_node(const NodeRef& n) const;
    bool transitions_eq(const PetriNet& o) const;

    PlaceSet places_;
    std::map<std::string, Label> transitions_;
    ArcSet arcs_;
    std::map<NodeRef, std::set<NodeRef>> pred_;
    std::map<NodeRef, std::set<NodeRef>> succ_;
};

/// A validated workflow net: unique source, unique sink, every node on a
/// path from source to sink. Construct via validate_workflow_net.
class WorkflowNet {
  public:
    const PetriNet& net() const { return net_; }
    const std::string& source() const { return source_; }
    const std::string& sink() const { return sink_; }

  private:
    friend WorkflowNet validate_workflow_net(const PetriNet& net);
    WorkflowNet(PetriNet net, std::string source, std::string sink)
        : net_(std::move(net)), source_(std::move(source)), sink_(std::move(sink)) {}

    PetriNet net_;
    std::string source_;
    std::string sink_;
};

/// Ordered list of pairwise-disjoint non-empty transition sets covering a universe.
class Partition {
  public:
    Partition(std::vector<TransitionSet> parts, const TransitionSet& universe);

    std::size_t size() const { return parts_.size(); }
    const std::vector<TransitionSet>& parts() const { return parts_; }
    const TransitionSet& part(std::size_t i) const { return parts_.at(i); }
    std::size_t part_index_of(const std::string& transition_id) const;
    const TransitionSet& part_of(const std::string& transition_id) const {
        return parts_[part_index_of(transition_id)];
    }

  private:
    std::vector<TransitionSet> parts_;
    std::map<std::string, std::size_t> index_;
};

// Structural queries.
std::set<NodeRef> preset(const PetriNet& net, const NodeRef& node);
std::set<NodeRef> postset(const PetriNet& net, const NodeRef& node);
PlaceSet project_places(const PetriNet& net, const TransitionSet& subset);
ArcSet project_flow(const PetriNet& net, const PlaceSet& place_subset, const TransitionSet& transition_subset);
bool places_equivalent(const PetriNet& net, const std::string& p, const std::string& q,
                       const TransitionSet& subset);
PlaceSet entry_points(const WorkflowNet& wf, const TransitionSet& subset);
PlaceSet exit_points(const WorkflowNet& wf, const TransitionSet& subset);
bool is_free_choice(const PetriNet& net);
bool is_marked_graph(const PetriNet& net);
WorkflowNet validate_workflow_net(const PetriNet& net);

// Helper views used across modules.
TransitionSet transition_ids(const PetriNet& net);
PlaceSet place_preset_transitions(const PetriNet& net, const std::string& place_id);
PlaceSet place_postset_transitions(const PetriNet& net, const std::string& place_id);
PlaceSet transition_preset_places(const PetriNet& net, const std::string& transition_id);
PlaceSet transition_postset_places(const PetriNet& net, const std::string& transition_id);

/// Deterministic generator for fresh node ids. Generated ids carry a
/// reserved prefix so they never collide with ids preserved from input
/// files; collisions with earlier generated ids are skipped.
class IdAllocator {
  public:
    explicit IdAllocator(const PetriNet& net);
    std::string fresh(const std::string& hint);
    void note_used(const std::string& id) { used_.insert(id); }

    static constexpr const char* kPrefix = "__gen_";

  private:
    std::set<std::string> used_;
    unsigned counter_ = 0;
};

}  // namespace wf2powl
