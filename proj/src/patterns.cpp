#include "wf2powl/patterns.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace wf2powl {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::string format_part(const TransitionSet& part) {
    std::string out = "{";
    bool first = true;
    for (const auto& t : part) {
        if (!first) out += ", ";
        first = false;
        out += t;
    }
    return out + "}";
}

// One-step successor lists over transitions: t -> t' iff some place links them.
std::vector<std::vector<std::size_t>> one_step_successors(const PetriNet& net,
                                                          const std::vector<std::string>& ids,
                                                          const std::map<std::string, std::size_t>& index) {
    std::vector<std::vector<std::size_t>> succ(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::set<std::size_t> next;
        for (const NodeRef& p : net.postset(NodeRef::transition(ids[i])))
            for (const NodeRef& t : net.postset(p)) next.insert(index.at(t.id));
        succ[i].assign(next.begin(), next.end());
    }
    return succ;
}

Partition groups_to_partition(UnionFind& uf, const std::vector<std::string>& ids,
                              const TransitionSet& universe) {
    std::map<std::size_t, TransitionSet> groups;
    for (std::size_t i = 0; i < ids.size(); ++i) groups[uf.find(i)].insert(ids[i]);
    // Parts ordered by their smallest member id.
    std::vector<TransitionSet> parts;
    std::map<std::string, TransitionSet> by_min;
    for (auto& [root, members] : groups) {
        (void)root;
        by_min.emplace(*members.begin(), std::move(members));
    }
    for (auto& [min_id, members] : by_min) {
        (void)min_id;
        parts.push_back(std::move(members));
    }
    return Partition(std::move(parts), universe);
}

}  // namespace

ReachabilityRelation::ReachabilityRelation(const PetriNet& net) {
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        index_.emplace(t, ids_.size());
        ids_.push_back(t);
    }
    auto succ = one_step_successors(net, ids_, index_);
    matrix_.assign(ids_.size(), std::vector<bool>(ids_.size(), false));
    for (std::size_t start = 0; start < ids_.size(); ++start) {
        std::deque<std::size_t> queue(succ[start].begin(), succ[start].end());
        for (std::size_t s : succ[start]) matrix_[start][s] = true;
        while (!queue.empty()) {
            std::size_t cur = queue.front();
            queue.pop_front();
            for (std::size_t next : succ[cur])
                if (!matrix_[start][next]) {
                    matrix_[start][next] = true;
                    queue.push_back(next);
                }
        }
    }
}

bool ReachabilityRelation::reaches(const std::string& from, const std::string& to) const {
    auto a = index_.find(from), b = index_.find(to);
    if (a == index_.end() || b == index_.end())
        throw NotInNetError("transition not covered by the reachability relation");
    return matrix_[a->second][b->second];
}

std::set<std::pair<std::string, std::string>> ReachabilityRelation::pairs() const {
    std::set<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < ids_.size(); ++i)
        for (std::size_t j = 0; j < ids_.size(); ++j)
            if (matrix_[i][j]) out.insert({ids_[i], ids_[j]});
    return out;
}

ReachabilityRelation transition_reachability(const PetriNet& net) {
    return ReachabilityRelation(net);
}

Partition xor_partition(const WorkflowNet& wf) {
    const PetriNet& net = wf.net();
    std::vector<std::string> ids;
    std::map<std::string, std::size_t> index;
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        index.emplace(t, ids.size());
        ids.push_back(t);
    }
    // Connected components of the symmetric one-step relation coincide with
    // those of the symmetric closure of full reachability.
    auto succ = one_step_successors(net, ids, index);
    UnionFind uf(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j : succ[i]) uf.unite(i, j);
    return groups_to_partition(uf, ids, transition_ids(net));
}

bool check_xor_pattern(const WorkflowNet& wf, const Partition& partition) {
    if (partition.size() < 2) return false;
    const PetriNet& net = wf.net();
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        std::size_t part = partition.part_index_of(t);
        for (const NodeRef& p : net.postset(NodeRef::transition(t)))
            for (const NodeRef& next : net.postset(p))
                if (partition.part_index_of(next.id) != part) return false;
    }
    return true;
}

TransitionSet in_between_reachable(const PetriNet& net, const std::string& p,
                                   const std::string& p_prime) {
    if (!net.has_place(p)) throw NotInNetError("no place '" + p + "'");
    if (!net.has_place(p_prime)) throw NotInNetError("no place '" + p_prime + "'");

    // Forward: transitions on paths out of p that never fire from p_prime.
    TransitionSet forward;
    {
        std::set<std::string> seen_places;
        std::deque<std::string> queue;
        if (p != p_prime) {
            seen_places.insert(p);
            queue.push_back(p);
        }
        while (!queue.empty()) {
            std::string q = queue.front();
            queue.pop_front();
            for (const NodeRef& t : net.postset(NodeRef::place(q))) {
                bool fresh = forward.insert(t.id).second;
                if (!fresh) continue;
                for (const NodeRef& r : net.postset(t))
                    if (r.id != p_prime && seen_places.insert(r.id).second) queue.push_back(r.id);
            }
        }
    }

    // Backward: transitions with a continuation into p_prime whose
    // intermediate places differ from p_prime.
    TransitionSet backward;
    {
        std::deque<std::string> queue;
        for (const NodeRef& t : net.preset(NodeRef::place(p_prime)))
            if (backward.insert(t.id).second) queue.push_back(t.id);
        while (!queue.empty()) {
            std::string t = queue.front();
            queue.pop_front();
            for (const NodeRef& r : net.preset(NodeRef::transition(t))) {
                if (r.id == p_prime) continue;
                for (const NodeRef& producer : net.preset(r))
                    if (backward.insert(producer.id).second) queue.push_back(producer.id);
            }
        }
    }

    TransitionSet out;
    std::set_intersection(forward.begin(), forward.end(), backward.begin(), backward.end(),
                          std::inserter(out, out.end()));
    return out;
}

std::optional<LoopDecomposition> find_loop_pattern(const WorkflowNet& wf, std::string* why_not) {
    const PetriNet& net = wf.net();
    auto fail = [&](const std::string& msg) -> std::optional<LoopDecomposition> {
        if (why_not) *why_not = msg;
        return std::nullopt;
    };

    const auto& source_post = net.postset(NodeRef::place(wf.source()));
    if (source_post.size() != 1) return fail("source post-set is not a single transition");
    std::string t_source = source_post.begin()->id;
    if (!net.label_of(t_source).is_silent()) return fail("transition after the source is not silent");
    if (net.preset(NodeRef::transition(t_source)).size() != 1 ||
        net.postset(NodeRef::transition(t_source)).size() != 1)
        return fail("transition after the source lacks singleton pre/post sets");
    std::string p_do = net.postset(NodeRef::transition(t_source)).begin()->id;

    const auto& sink_pre = net.preset(NodeRef::place(wf.sink()));
    if (sink_pre.size() != 1) return fail("sink pre-set is not a single transition");
    std::string t_sink = sink_pre.begin()->id;
    if (t_sink == t_source) return fail("loop border transitions coincide");
    if (!net.label_of(t_sink).is_silent()) return fail("transition before the sink is not silent");
    if (net.preset(NodeRef::transition(t_sink)).size() != 1 ||
        net.postset(NodeRef::transition(t_sink)).size() != 1)
        return fail("transition before the sink lacks singleton pre/post sets");
    std::string p_redo = net.preset(NodeRef::transition(t_sink)).begin()->id;

    TransitionSet T_do = in_between_reachable(net, p_do, p_redo);
    TransitionSet T_redo = in_between_reachable(net, p_redo, p_do);
    if (T_do.empty()) return fail("empty do-part between the loop places");
    if (T_redo.empty()) return fail("empty redo-part between the loop places");

    // The three parts must form a partition of T.
    TransitionSet all = transition_ids(net);
    std::size_t expected = T_do.size() + T_redo.size() + 2;
    if (expected != all.size()) return fail("do/redo parts do not cover the transitions");
    TransitionSet seen;
    seen.insert(t_source);
    seen.insert(t_sink);
    for (const auto& t : T_do)
        if (!seen.insert(t).second) return fail("do/redo parts overlap on '" + t + "'");
    for (const auto& t : T_redo)
        if (!seen.insert(t).second) return fail("do/redo parts overlap on '" + t + "'");
    if (seen != all) return fail("do/redo parts do not cover the transitions");

    auto intersects = [](const PlaceSet& side, const TransitionSet& part) {
        return std::any_of(side.begin(), side.end(),
                           [&](const std::string& t) { return part.count(t) > 0; });
    };
    if (intersects(place_preset_transitions(net, p_do), T_do))
        return fail("a do-transition feeds the loop entry place '" + p_do + "'");
    if (intersects(place_preset_transitions(net, p_redo), T_redo))
        return fail("a redo-transition feeds the loop exit place '" + p_redo + "'");

    // Implied by the border conditions; kept as a consistency check.
    if (intersects(place_postset_transitions(net, p_redo), T_do) ||
        intersects(place_postset_transitions(net, p_do), T_redo))
        return fail("loop places feed the opposite part");

    return LoopDecomposition{p_do, p_redo, t_source, t_sink, std::move(T_do), std::move(T_redo)};
}

Partition po_partition(const WorkflowNet& wf) {
    const PetriNet& net = wf.net();
    std::vector<std::string> ids;
    std::map<std::string, std::size_t> index;
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        index.emplace(t, ids.size());
        ids.push_back(t);
    }
    ReachabilityRelation reach(net);
    UnionFind uf(ids.size());

    for (const auto& p : net.places()) {
        const auto& successors = net.postset(NodeRef::place(p));
        if (successors.size() < 2) continue;
        // Transitions reached by some successors but not all belong together;
        // a successor counts as reached by itself.
        std::vector<std::size_t> group;
        for (std::size_t t = 0; t < ids.size(); ++t) {
            std::size_t reached_by = 0;
            for (const NodeRef& s : successors)
                if (s.id == ids[t] || reach.reaches(s.id, ids[t])) ++reached_by;
            if (reached_by > 0 && reached_by < successors.size()) group.push_back(t);
        }
        for (std::size_t i = 1; i < group.size(); ++i) uf.unite(group[0], group[i]);
    }
    return groups_to_partition(uf, ids, transition_ids(net));
}

IndexRelation execution_order(const WorkflowNet& wf, const Partition& partition) {
    std::vector<PlaceSet> exits, entries;
    exits.reserve(partition.size());
    entries.reserve(partition.size());
    for (const TransitionSet& part : partition.parts()) {
        exits.push_back(exit_points(wf, part));
        entries.push_back(entry_points(wf, part));
    }
    IndexRelation raw;
    for (std::size_t i = 0; i < partition.size(); ++i)
        for (std::size_t j = 0; j < partition.size(); ++j) {
            bool overlap = std::any_of(exits[i].begin(), exits[i].end(), [&](const std::string& p) {
                return entries[j].count(p) > 0;
            });
            if (overlap) raw.insert({i, j});
        }
    return raw;
}

PoPatternCheck check_po_pattern(const WorkflowNet& wf, const Partition& partition) {
    PoPatternCheck result;
    if (partition.size() < 2) {
        result.violations.push_back("partition of size 1");
        return result;
    }

    IndexRelation raw = execution_order(wf, partition);
    IndexRelation closed = transitive_closure(partition.size(), raw);
    bool acyclic = true;
    for (std::size_t i = 0; i < partition.size(); ++i)
        if (closed.count({i, i})) {
            acyclic = false;
            result.violations.push_back("execution order is cyclic through part " +
                                        format_part(partition.part(i)));
            break;
        }

    for (std::size_t i = 0; i < partition.size(); ++i) {
        const TransitionSet& part = partition.part(i);
        auto first_inequivalent = [&](const PlaceSet& points) -> std::optional<std::pair<std::string, std::string>> {
            for (auto a = points.begin(); a != points.end(); ++a)
                for (auto b = std::next(a); b != points.end(); ++b)
                    if (!places_equivalent(wf.net(), *a, *b, part)) return std::make_pair(*a, *b);
            return std::nullopt;
        };
        if (auto bad = first_inequivalent(entry_points(wf, part)))
            result.violations.push_back("no unique local start in part " + format_part(part) +
                                        ": places " + bad->first + ", " + bad->second +
                                        " are not equivalent");
        if (auto bad = first_inequivalent(exit_points(wf, part)))
            result.violations.push_back("no unique local end in part " + format_part(part) +
                                        ": places " + bad->first + ", " + bad->second +
                                        " are not equivalent");
    }

    if (result.violations.empty() && acyclic)
        result.decomposition = OrderDecomposition{partition, StrictOrder(partition.size(), closed)};
    return result;
}

}  // namespace wf2powl
