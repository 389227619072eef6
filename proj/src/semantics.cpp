#include "wf2powl/semantics.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wf2powl {

Marking::Marking(std::map<std::string, int> counts) : counts_(std::move(counts)) {
    for (const auto& [p, c] : counts_)
        if (c < 1) throw Error("marking count for '" + p + "' must be positive");
}

int Marking::count(const std::string& place_id) const {
    auto it = counts_.find(place_id);
    return it == counts_.end() ? 0 : it->second;
}

void Marking::add(const std::string& place_id, int n) {
    if (n < 1) throw Error("cannot add a non-positive token count");
    counts_[place_id] += n;
}

void Marking::remove(const std::string& place_id, int n) {
    auto it = counts_.find(place_id);
    if (it == counts_.end() || it->second < n)
        throw Error("cannot remove " + std::to_string(n) + " tokens from '" + place_id + "'");
    it->second -= n;
    if (it->second == 0) counts_.erase(it);
}

int Marking::total() const {
    int sum = 0;
    for (const auto& [p, c] : counts_) {
        (void)p;
        sum += c;
    }
    return sum;
}

std::string Marking::to_string() const {
    std::string out = "[";
    bool first = true;
    for (const auto& [p, c] : counts_) {
        if (!first) out += ", ";
        first = false;
        out += p;
        if (c > 1) out += "^" + std::to_string(c);
    }
    return out + "]";
}

std::string trace_to_string(const Trace& trace) {
    std::string out = "<";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i) out += ", ";
        out += trace[i];
    }
    return out + ">";
}

TransitionSet enabled(const PetriNet& net, const Marking& marking) {
    TransitionSet out;
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        bool ok = true;
        for (const NodeRef& p : net.preset(NodeRef::transition(t)))
            if (marking.count(p.id) < 1) { ok = false; break; }
        if (ok) out.insert(t);
    }
    return out;
}

Marking fire(const PetriNet& net, const Marking& marking, const std::string& transition_id) {
    NodeRef t = NodeRef::transition(transition_id);
    if (!net.has_transition(transition_id))
        throw NotInNetError("no transition '" + transition_id + "'");
    for (const NodeRef& p : net.preset(t))
        if (marking.count(p.id) < 1)
            throw NotEnabledError("transition '" + transition_id + "' is not enabled");
    Marking out = marking;
    for (const NodeRef& p : net.preset(t)) out.remove(p.id);
    for (const NodeRef& p : net.postset(t)) out.add(p.id);
    return out;
}

namespace {

// Index-based view of a workflow net for state-space work. Node order is
// the sorted id order, which keeps exploration deterministic.
struct IndexedNet {
    std::vector<std::string> places;
    std::vector<std::string> trans;
    std::vector<int> visible_symbol;  // -1 for silent
    std::vector<std::string> symbols;
    std::vector<std::vector<int>> pre, post;
    int source = -1;
    int sink = -1;

    explicit IndexedNet(const WorkflowNet& wf) {
        const PetriNet& net = wf.net();
        places.assign(net.places().begin(), net.places().end());
        std::map<std::string, int> place_idx;
        for (std::size_t i = 0; i < places.size(); ++i) place_idx[places[i]] = static_cast<int>(i);
        source = place_idx.at(wf.source());
        sink = place_idx.at(wf.sink());

        std::map<std::string, int> symbol_idx;
        for (const auto& [t, label] : net.transitions()) {
            trans.push_back(t);
            if (label.is_silent()) {
                visible_symbol.push_back(-1);
            } else {
                auto [it, fresh] = symbol_idx.emplace(label.name(), static_cast<int>(symbols.size()));
                if (fresh) symbols.push_back(label.name());
                visible_symbol.push_back(it->second);
            }
        }
        pre.resize(trans.size());
        post.resize(trans.size());
        for (std::size_t i = 0; i < trans.size(); ++i) {
            for (const NodeRef& p : net.preset(NodeRef::transition(trans[i])))
                pre[i].push_back(place_idx.at(p.id));
            for (const NodeRef& p : net.postset(NodeRef::transition(trans[i])))
                post[i].push_back(place_idx.at(p.id));
            std::sort(pre[i].begin(), pre[i].end());
            std::sort(post[i].begin(), post[i].end());
        }
    }
};

// Sorted (place, count) pairs.
using CompactMarking = std::vector<std::pair<int, int>>;

struct MarkingHash {
    std::size_t operator()(const CompactMarking& m) const {
        std::size_t h = 1469598103934665603ULL;
        for (const auto& [p, c] : m) {
            h = (h ^ static_cast<std::size_t>(p)) * 1099511628211ULL;
            h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ULL;
        }
        return h;
    }
};

int marking_count(const CompactMarking& m, int place) {
    auto it = std::lower_bound(m.begin(), m.end(), std::make_pair(place, 0));
    return (it != m.end() && it->first == place) ? it->second : 0;
}

bool is_enabled(const IndexedNet& inet, const CompactMarking& m, int t) {
    for (int p : inet.pre[t])
        if (marking_count(m, p) < 1) return false;
    return true;
}

CompactMarking fire_compact(const IndexedNet& inet, const CompactMarking& m, int t) {
    std::map<int, int> counts(m.begin(), m.end());
    for (int p : inet.pre[t]) {
        auto it = counts.find(p);
        if (--it->second == 0) counts.erase(it);
    }
    for (int p : inet.post[t]) counts[p] += 1;
    return CompactMarking(counts.begin(), counts.end());
}

struct IndexedGraph {
    std::vector<CompactMarking> states;
    std::vector<std::tuple<int, int, int>> edges;  // (from, transition, to)
};

IndexedGraph explore_indexed(const IndexedNet& inet, const ExplorationLimits& limits,
                             bool require_safe) {
    IndexedGraph g;
    std::unordered_map<CompactMarking, int, MarkingHash> index;

    auto check_counts = [&](const CompactMarking& m) {
        for (const auto& [p, c] : m) {
            if (require_safe && c > 1) throw UnsafeDetectedError(inet.places[p]);
            if (c > limits.max_token_count_per_place) throw UnsafeDetectedError(inet.places[p]);
        }
    };

    CompactMarking initial{{inet.source, 1}};
    check_counts(initial);
    index.emplace(initial, 0);
    g.states.push_back(initial);

    for (std::size_t head = 0; head < g.states.size(); ++head) {
        CompactMarking current = g.states[head];
        for (std::size_t t = 0; t < inet.trans.size(); ++t) {
            if (!is_enabled(inet, current, static_cast<int>(t))) continue;
            CompactMarking next = fire_compact(inet, current, static_cast<int>(t));
            check_counts(next);
            auto [it, fresh] = index.emplace(next, static_cast<int>(g.states.size()));
            if (fresh) {
                if (g.states.size() >= limits.max_states)
                    throw BoundExceededError("state space exceeds " +
                                             std::to_string(limits.max_states) + " markings");
                g.states.push_back(std::move(next));
            }
            g.edges.emplace_back(static_cast<int>(head), static_cast<int>(t), it->second);
        }
    }
    return g;
}

Marking to_public_marking(const IndexedNet& inet, const CompactMarking& m) {
    std::map<std::string, int> counts;
    for (const auto& [p, c] : m) counts[inet.places[p]] = c;
    return Marking(std::move(counts));
}

int find_sink_state(const IndexedNet& inet, const IndexedGraph& g) {
    CompactMarking sink_marking{{inet.sink, 1}};
    for (std::size_t i = 0; i < g.states.size(); ++i)
        if (g.states[i] == sink_marking) return static_cast<int>(i);
    return -1;
}

}  // namespace

ReachabilityGraph explore(const WorkflowNet& wf, const ExplorationLimits& limits,
                          bool require_safe) {
    IndexedNet inet(wf);
    IndexedGraph g = explore_indexed(inet, limits, require_safe);
    std::vector<Marking> states;
    states.reserve(g.states.size());
    for (const CompactMarking& m : g.states) states.push_back(to_public_marking(inet, m));
    std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
    edges.reserve(g.edges.size());
    for (const auto& [from, t, to] : g.edges)
        edges.emplace_back(static_cast<std::size_t>(from), inet.trans[t],
                           static_cast<std::size_t>(to));
    return ReachabilityGraph(std::move(states), 0, std::move(edges));
}

bool check_safe(const WorkflowNet& wf, const ExplorationLimits& limits) {
    try {
        IndexedNet inet(wf);
        explore_indexed(inet, limits, /*require_safe=*/true);
        return true;
    } catch (const UnsafeDetectedError&) {
        return false;
    }
}

SoundnessReport check_sound(const WorkflowNet& wf, const ExplorationLimits& limits) {
    IndexedNet inet(wf);
    IndexedGraph g = explore_indexed(inet, limits, /*require_safe=*/true);

    SoundnessReport report;

    // No dead transitions: every transition labels some edge.
    std::vector<bool> fired(inet.trans.size(), false);
    for (const auto& [from, t, to] : g.edges) {
        (void)from;
        (void)to;
        fired[t] = true;
    }
    report.no_dead_transitions = true;
    for (std::size_t t = 0; t < fired.size(); ++t)
        if (!fired[t]) {
            report.no_dead_transitions = false;
            report.dead_transitions.push_back(inet.trans[t]);
        }

    // Option to complete: [sink] is backward-reachable from every state.
    int sink_state = find_sink_state(inet, g);
    if (sink_state < 0) {
        report.option_to_complete = false;
    } else {
        std::vector<std::vector<int>> rev(g.states.size());
        for (const auto& [from, t, to] : g.edges) {
            (void)t;
            rev[to].push_back(from);
        }
        std::vector<bool> can_complete(g.states.size(), false);
        std::deque<int> queue{sink_state};
        can_complete[sink_state] = true;
        while (!queue.empty()) {
            int cur = queue.front();
            queue.pop_front();
            for (int prev : rev[cur])
                if (!can_complete[prev]) {
                    can_complete[prev] = true;
                    queue.push_back(prev);
                }
        }
        report.option_to_complete =
            std::all_of(can_complete.begin(), can_complete.end(), [](bool b) { return b; });
    }

    // Proper completion: any state holding the sink place is exactly [sink].
    CompactMarking sink_marking{{inet.sink, 1}};
    report.proper_completion = true;
    for (const CompactMarking& m : g.states)
        if (marking_count(m, inet.sink) >= 1 && m != sink_marking) {
            report.proper_completion = false;
            break;
        }

    return report;
}

TraceSet bounded_language(const WorkflowNet& wf, std::size_t k_visible,
                          const ExplorationLimits& limits) {
    IndexedNet inet(wf);
    // require_safe doubles as the documented safety precondition check.
    IndexedGraph g = explore_indexed(inet, limits, /*require_safe=*/true);

    int sink_state = find_sink_state(inet, g);

    // Per-state adjacency and minimal remaining visible firings to [sink]
    // (0/1 BFS backwards). States that cannot reach [sink] keep infinity
    // and are pruned from the trace search.
    std::vector<std::vector<std::pair<int, int>>> out(g.states.size());
    std::vector<std::vector<std::pair<int, int>>> in(g.states.size());
    for (const auto& [from, t, to] : g.edges) {
        out[from].emplace_back(t, to);
        in[to].emplace_back(t, from);
    }
    const std::size_t kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> min_visible_to_sink(g.states.size(), kInf);
    if (sink_state >= 0) {
        std::deque<int> dq{sink_state};
        min_visible_to_sink[sink_state] = 0;
        while (!dq.empty()) {
            int cur = dq.front();
            dq.pop_front();
            for (const auto& [t, from] : in[cur]) {
                std::size_t w = inet.visible_symbol[t] < 0 ? 0 : 1;
                std::size_t cand = min_visible_to_sink[cur] + w;
                if (cand < min_visible_to_sink[from]) {
                    min_visible_to_sink[from] = cand;
                    if (w == 0)
                        dq.push_front(from);
                    else
                        dq.push_back(from);
                }
            }
        }
    }

    // Traces are interned in a trie so that identical emitted prefixes share
    // one id regardless of the interleaving that produced them.
    std::vector<std::pair<int, int>> trie{{-1, -1}};  // (parent, symbol), root at 0
    std::unordered_map<std::uint64_t, int> trie_index;
    auto trie_child = [&](int node, int symbol) {
        std::uint64_t key = (static_cast<std::uint64_t>(node) << 20) | static_cast<std::uint64_t>(symbol);
        auto [it, fresh] = trie_index.emplace(key, static_cast<int>(trie.size()));
        if (fresh) trie.emplace_back(node, symbol);
        return it->second;
    };

    std::unordered_set<std::uint64_t> visited;
    auto pair_key = [](int state, int trace) {
        return (static_cast<std::uint64_t>(state) << 32) | static_cast<std::uint32_t>(trace);
    };

    std::set<int> complete;
    std::deque<std::tuple<int, int, std::size_t>> queue;  // (state, trace, length)
    if (min_visible_to_sink[0] <= k_visible) {
        queue.emplace_back(0, 0, 0);
        visited.insert(pair_key(0, 0));
    }
    while (!queue.empty()) {
        auto [state, trace, len] = queue.front();
        queue.pop_front();
        if (visited.size() > limits.max_states)
            throw BoundExceededError("bounded-language search exceeds " +
                                     std::to_string(limits.max_states) + " (marking, trace) pairs");
        if (state == sink_state) complete.insert(trace);
        for (const auto& [t, to] : out[state]) {
            int symbol = inet.visible_symbol[t];
            std::size_t new_len = symbol < 0 ? len : len + 1;
            if (new_len > k_visible) continue;
            if (min_visible_to_sink[to] == kInf || new_len + min_visible_to_sink[to] > k_visible)
                continue;
            int new_trace = symbol < 0 ? trace : trie_child(trace, symbol);
            if (visited.insert(pair_key(to, new_trace)).second)
                queue.emplace_back(to, new_trace, new_len);
        }
    }

    TraceSet result;
    for (int id : complete) {
        Trace trace;
        for (int node = id; node != 0; node = trie[node].first)
            trace.push_back(inet.symbols[trie[node].second]);
        std::reverse(trace.begin(), trace.end());
        result.insert(std::move(trace));
    }
    return result;
}

std::string reachability_to_dot(const ReachabilityGraph& graph) {
    std::ostringstream out;
    out << "digraph reachability {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < graph.states().size(); ++i) {
        out << "  s" << i << " [label=\"" << graph.states()[i].to_string() << "\"";
        if (i == graph.initial_index()) out << ",style=bold";
        out << "];\n";
    }
    for (const auto& [from, t, to] : graph.edges())
        out << "  s" << from << " -> s" << to << " [label=\"" << t << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace wf2powl
