#include "wf2powl/petri_net.hpp"

#include <algorithm>
#include <deque>

namespace wf2powl {

namespace {
const std::set<NodeRef> kEmptyNodeSet;
}

PetriNet& PetriNet::add_place(std::string id) {
    if (id.empty()) throw Error("place id must be non-empty");
    if (places_.count(id) || transitions_.count(id))
        throw Error("duplicate node id '" + id + "'");
    places_.insert(std::move(id));
    return *this;
}

PetriNet& PetriNet::add_transition(std::string id, Label label) {
    if (id.empty()) throw Error("transition id must be non-empty");
    if (places_.count(id) || transitions_.count(id))
        throw Error("duplicate node id '" + id + "'");
    transitions_.emplace(std::move(id), std::move(label));
    return *this;
}

PetriNet& PetriNet::add_arc(const NodeRef& from, const NodeRef& to) {
    check_node(from);
    check_node(to);
    if (from.kind == to.kind)
        throw Error("arc (" + from.id + ", " + to.id + ") is not bipartite");
    if (!arcs_.insert({from, to}).second)
        throw Error("duplicate arc (" + from.id + ", " + to.id + ")");
    succ_[from].insert(to);
    pred_[to].insert(from);
    return *this;
}

PetriNet& PetriNet::remove_arc(const NodeRef& from, const NodeRef& to) {
    if (arcs_.erase({from, to}) == 0)
        throw NotInNetError("no arc (" + from.id + ", " + to.id + ")");
    succ_[from].erase(to);
    pred_[to].erase(from);
    return *this;
}

PetriNet& PetriNet::remove_place(const std::string& id) {
    if (!places_.count(id)) throw NotInNetError("no place '" + id + "'");
    NodeRef node = NodeRef::place(id);
    for (const NodeRef& p : preset(node)) {
        arcs_.erase({p, node});
        succ_[p].erase(node);
    }
    for (const NodeRef& s : postset(node)) {
        arcs_.erase({node, s});
        pred_[s].erase(node);
    }
    pred_.erase(node);
    succ_.erase(node);
    places_.erase(id);
    return *this;
}

PetriNet& PetriNet::remove_transition(const std::string& id) {
    if (!transitions_.count(id)) throw NotInNetError("no transition '" + id + "'");
    NodeRef node = NodeRef::transition(id);
    for (const NodeRef& p : preset(node)) {
        arcs_.erase({p, node});
        succ_[p].erase(node);
    }
    for (const NodeRef& s : postset(node)) {
        arcs_.erase({node, s});
        pred_[s].erase(node);
    }
    pred_.erase(node);
    succ_.erase(node);
    transitions_.erase(id);
    return *this;
}

PetriNet& PetriNet::relabel_transition(const std::string& id, Label label) {
    auto it = transitions_.find(id);
    if (it == transitions_.end()) throw NotInNetError("no transition '" + id + "'");
    it->second = std::move(label);
    return *this;
}

bool PetriNet::has_node(const NodeRef& n) const {
    return n.is_place() ? has_place(n.id) : has_transition(n.id);
}

const Label& PetriNet::label_of(const std::string& transition_id) const {
    auto it = transitions_.find(transition_id);
    if (it == transitions_.end()) throw NotInNetError("no transition '" + transition_id + "'");
    return it->second;
}

void PetriNet::check_node(const NodeRef& n) const {
    if (!has_node(n))
        throw NotInNetError("node '" + n.id + "' is not in the net");
}

bool PetriNet::transitions_eq(const PetriNet& o) const {
    return transitions_ == o.transitions_;
}

const std::set<NodeRef>& PetriNet::preset(const NodeRef& node) const {
    check_node(node);
    auto it = pred_.find(node);
    return it == pred_.end() ? kEmptyNodeSet : it->second;
}

const std::set<NodeRef>& PetriNet::postset(const NodeRef& node) const {
    check_node(node);
    auto it = succ_.find(node);
    return it == succ_.end() ? kEmptyNodeSet : it->second;
}

Partition::Partition(std::vector<TransitionSet> parts, const TransitionSet& universe)
    : parts_(std::move(parts)) {
    std::size_t covered = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i].empty()) throw Error("partition parts must be non-empty");
        for (const auto& t : parts_[i]) {
            if (!universe.count(t)) throw Error("partition member '" + t + "' outside universe");
            if (!index_.emplace(t, i).second) throw Error("partition parts overlap on '" + t + "'");
            ++covered;
        }
    }
    if (covered != universe.size()) throw Error("partition does not cover the universe");
}

std::size_t Partition::part_index_of(const std::string& transition_id) const {
    auto it = index_.find(transition_id);
    if (it == index_.end()) throw NotInNetError("'" + transition_id + "' is not in the partition universe");
    return it->second;
}

std::set<NodeRef> preset(const PetriNet& net, const NodeRef& node) {
    return net.preset(node);
}

std::set<NodeRef> postset(const PetriNet& net, const NodeRef& node) {
    return net.postset(node);
}

PlaceSet project_places(const PetriNet& net, const TransitionSet& subset) {
    for (const auto& t : subset)
        if (!net.has_transition(t)) throw NotInNetError("transition '" + t + "' is not in the net");
    PlaceSet out;
    for (const auto& p : net.places()) {
        NodeRef node = NodeRef::place(p);
        auto touches = [&](const std::set<NodeRef>& side) {
            return std::any_of(side.begin(), side.end(),
                               [&](const NodeRef& n) { return subset.count(n.id) > 0; });
        };
        if (touches(net.preset(node)) || touches(net.postset(node))) out.insert(p);
    }
    return out;
}

ArcSet project_flow(const PetriNet& net, const PlaceSet& place_subset,
                    const TransitionSet& transition_subset) {
    ArcSet out;
    for (const auto& arc : net.arcs()) {
        const NodeRef& p = arc.first.is_place() ? arc.first : arc.second;
        const NodeRef& t = arc.first.is_place() ? arc.second : arc.first;
        if (place_subset.count(p.id) && transition_subset.count(t.id)) out.insert(arc);
    }
    return out;
}

bool places_equivalent(const PetriNet& net, const std::string& p, const std::string& q,
                       const TransitionSet& subset) {
    auto restricted = [&](const std::set<NodeRef>& side) {
        TransitionSet out;
        for (const NodeRef& n : side)
            if (subset.count(n.id)) out.insert(n.id);
        return out;
    };
    NodeRef a = NodeRef::place(p), b = NodeRef::place(q);
    return restricted(net.preset(a)) == restricted(net.preset(b)) &&
           restricted(net.postset(a)) == restricted(net.postset(b));
}

PlaceSet entry_points(const WorkflowNet& wf, const TransitionSet& subset) {
    const PetriNet& net = wf.net();
    PlaceSet out;
    for (const auto& p : net.places()) {
        NodeRef node = NodeRef::place(p);
        bool feeds_subset = false;
        for (const NodeRef& t : net.postset(node))
            if (subset.count(t.id)) { feeds_subset = true; break; }
        if (!feeds_subset) continue;
        if (p == wf.source()) { out.insert(p); continue; }
        for (const NodeRef& t : net.preset(node))
            if (!subset.count(t.id)) { out.insert(p); break; }
    }
    return out;
}

PlaceSet exit_points(const WorkflowNet& wf, const TransitionSet& subset) {
    const PetriNet& net = wf.net();
    PlaceSet out;
    for (const auto& p : net.places()) {
        NodeRef node = NodeRef::place(p);
        bool fed_by_subset = false;
        for (const NodeRef& t : net.preset(node))
            if (subset.count(t.id)) { fed_by_subset = true; break; }
        if (!fed_by_subset) continue;
        if (p == wf.sink()) { out.insert(p); continue; }
        for (const NodeRef& t : net.postset(node))
            if (!subset.count(t.id)) { out.insert(p); break; }
    }
    return out;
}

bool is_free_choice(const PetriNet& net) {
    // Overlapping presets must coincide.
    std::vector<std::set<NodeRef>> presets;
    presets.reserve(net.transitions().size());
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        presets.push_back(net.preset(NodeRef::transition(t)));
    }
    for (std::size_t i = 0; i < presets.size(); ++i)
        for (std::size_t j = i + 1; j < presets.size(); ++j) {
            bool overlap = std::any_of(presets[i].begin(), presets[i].end(),
                                       [&](const NodeRef& n) { return presets[j].count(n) > 0; });
            if (overlap && presets[i] != presets[j]) return false;
        }
    return true;
}

bool is_marked_graph(const PetriNet& net) {
    for (const auto& p : net.places()) {
        NodeRef node = NodeRef::place(p);
        if (net.preset(node).size() > 1 || net.postset(node).size() > 1) return false;
    }
    return true;
}

WorkflowNet validate_workflow_net(const PetriNet& net) {
    std::vector<std::string> sources, sinks;
    for (const auto& p : net.places()) {
        NodeRef node = NodeRef::place(p);
        if (net.preset(node).empty()) sources.push_back(p);
        if (net.postset(node).empty()) sinks.push_back(p);
    }
    if (sources.size() != 1)
        throw WfValidationError(WfValidationError::Kind::NoUniqueSource,
                                "expected exactly one source place, found " +
                                    std::to_string(sources.size()));
    if (sinks.size() != 1)
        throw WfValidationError(WfValidationError::Kind::NoUniqueSink,
                                "expected exactly one sink place, found " +
                                    std::to_string(sinks.size()));

    // Every node must be forward-reachable from the source and
    // backward-reachable from the sink.
    auto sweep = [&](const NodeRef& start, bool forward) {
        std::set<NodeRef> seen{start};
        std::deque<NodeRef> queue{start};
        while (!queue.empty()) {
            NodeRef cur = queue.front();
            queue.pop_front();
            for (const NodeRef& next : forward ? net.postset(cur) : net.preset(cur))
                if (seen.insert(next).second) queue.push_back(next);
        }
        return seen;
    };
    std::set<NodeRef> from_source = sweep(NodeRef::place(sources[0]), true);
    std::set<NodeRef> to_sink = sweep(NodeRef::place(sinks[0]), false);

    auto check = [&](const NodeRef& n) {
        if (!from_source.count(n) || !to_sink.count(n))
            throw WfValidationError(WfValidationError::Kind::DisconnectedNode,
                                    "node '" + n.id + "' is not on a source-to-sink path", n.id);
    };
    for (const auto& p : net.places()) check(NodeRef::place(p));
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        check(NodeRef::transition(t));
    }
    return WorkflowNet(net, sources[0], sinks[0]);
}

TransitionSet transition_ids(const PetriNet& net) {
    TransitionSet out;
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        out.insert(t);
    }
    return out;
}

static std::set<std::string> side_ids(const std::set<NodeRef>& side) {
    std::set<std::string> out;
    for (const NodeRef& n : side) out.insert(n.id);
    return out;
}

PlaceSet place_preset_transitions(const PetriNet& net, const std::string& place_id) {
    return side_ids(net.preset(NodeRef::place(place_id)));
}

PlaceSet place_postset_transitions(const PetriNet& net, const std::string& place_id) {
    return side_ids(net.postset(NodeRef::place(place_id)));
}

PlaceSet transition_preset_places(const PetriNet& net, const std::string& transition_id) {
    return side_ids(net.preset(NodeRef::transition(transition_id)));
}

PlaceSet transition_postset_places(const PetriNet& net, const std::string& transition_id) {
    return side_ids(net.postset(NodeRef::transition(transition_id)));
}

IdAllocator::IdAllocator(const PetriNet& net) {
    for (const auto& p : net.places()) used_.insert(p);
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        used_.insert(t);
    }
}

std::string IdAllocator::fresh(const std::string& hint) {
    std::string id;
    do {
        id = std::string(kPrefix) + hint + "_" + std::to_string(counter_++);
    } while (used_.count(id));
    used_.insert(id);
    return id;
}

}  // namespace wf2powl
