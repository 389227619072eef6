#include "wf2powl/reduce.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "wf2powl/patterns.hpp"

namespace wf2powl {

namespace {

struct SiteResult {
    PetriNet net;
    std::string site_key;
    int nodes_added = 0;
    int nodes_removed = 0;
};

std::string join_ids(const std::set<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ",";
        out += id;
    }
    return out;
}

// First matching split site, in transition id order. A site is a group of
// places with identical non-empty presets whose common successors consume
// exactly the group and whose other successors are singleton-preset
// branches; every group place must have at least one such branch.
std::optional<SiteResult> step_xor_split(const WorkflowNet& wf,
                                         const std::set<std::string>& rejected) {
    const PetriNet& net = wf.net();
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        const auto& pre = net.preset(NodeRef::transition(t));
        if (pre.size() < 2) continue;
        PlaceSet group;
        for (const NodeRef& p : pre) group.insert(p.id);

        std::string key = "split:" + join_ids(group);
        if (rejected.count(key)) continue;

        const auto& shared_pre = net.preset(*pre.begin());
        if (shared_pre.empty()) continue;
        bool uniform = std::all_of(pre.begin(), pre.end(), [&](const NodeRef& p) {
            return net.preset(p) == shared_pre;
        });
        if (!uniform) continue;

        // Common successors: transitions consuming every group place.
        std::set<NodeRef> common = net.postset(*pre.begin());
        for (const NodeRef& p : pre) {
            std::set<NodeRef> next;
            const auto& post = net.postset(p);
            std::set_intersection(common.begin(), common.end(), post.begin(), post.end(),
                                  std::inserter(next, next.end()));
            common = std::move(next);
        }
        bool exact = std::all_of(common.begin(), common.end(), [&](const NodeRef& c) {
            const auto& cpre = net.preset(c);
            if (cpre.size() != group.size()) return false;
            return std::all_of(cpre.begin(), cpre.end(),
                               [&](const NodeRef& p) { return group.count(p.id) > 0; });
        });
        if (!exact) continue;

        bool guards_ok = true;
        std::map<std::string, std::vector<NodeRef>> residual;
        for (const NodeRef& p : pre) {
            for (const NodeRef& s : net.postset(p)) {
                if (common.count(s)) continue;
                if (net.preset(s).size() != 1) {
                    guards_ok = false;
                    break;
                }
                residual[p.id].push_back(s);
            }
            if (!guards_ok || residual[p.id].empty()) {
                guards_ok = false;
                break;
            }
        }
        if (!guards_ok) continue;

        PetriNet out = net;
        IdAllocator ids(out);
        std::string merged = ids.fresh("xsplit");
        out.add_place(merged);
        for (const NodeRef& producer : shared_pre)
            out.add_arc(producer, NodeRef::place(merged));
        for (const NodeRef& c : common) out.add_arc(NodeRef::place(merged), c);

        std::string fork = ids.fresh("tau_split");
        out.add_transition(fork, Label::silent());
        out.add_arc(NodeRef::place(merged), NodeRef::transition(fork));
        int added = 2;
        for (const auto& [p, singles] : residual) {
            (void)p;
            std::string branch = ids.fresh("branch");
            out.add_place(branch);
            ++added;
            out.add_arc(NodeRef::transition(fork), NodeRef::place(branch));
            for (const NodeRef& s : singles) out.add_arc(NodeRef::place(branch), s);
        }
        for (const auto& p : group) out.remove_place(p);
        return SiteResult{std::move(out), key, added, static_cast<int>(group.size())};
    }
    return std::nullopt;
}

std::optional<SiteResult> step_xor_join(const WorkflowNet& wf,
                                        const std::set<std::string>& rejected) {
    const PetriNet& net = wf.net();
    for (const auto& [t, label] : net.transitions()) {
        (void)label;
        const auto& post = net.postset(NodeRef::transition(t));
        if (post.size() < 2) continue;
        PlaceSet group;
        for (const NodeRef& p : post) group.insert(p.id);

        std::string key = "join:" + join_ids(group);
        if (rejected.count(key)) continue;

        const auto& shared_post = net.postset(*post.begin());
        if (shared_post.empty()) continue;
        bool uniform = std::all_of(post.begin(), post.end(), [&](const NodeRef& p) {
            return net.postset(p) == shared_post;
        });
        if (!uniform) continue;

        std::set<NodeRef> common = net.preset(*post.begin());
        for (const NodeRef& p : post) {
            std::set<NodeRef> next;
            const auto& ppre = net.preset(p);
            std::set_intersection(common.begin(), common.end(), ppre.begin(), ppre.end(),
                                  std::inserter(next, next.end()));
            common = std::move(next);
        }
        bool exact = std::all_of(common.begin(), common.end(), [&](const NodeRef& c) {
            const auto& cpost = net.postset(c);
            if (cpost.size() != group.size()) return false;
            return std::all_of(cpost.begin(), cpost.end(),
                               [&](const NodeRef& p) { return group.count(p.id) > 0; });
        });
        if (!exact) continue;

        bool guards_ok = true;
        std::map<std::string, std::vector<NodeRef>> residual;
        for (const NodeRef& p : post) {
            for (const NodeRef& r : net.preset(p)) {
                if (common.count(r)) continue;
                if (net.postset(r).size() != 1) {
                    guards_ok = false;
                    break;
                }
                residual[p.id].push_back(r);
            }
            if (!guards_ok || residual[p.id].empty()) {
                guards_ok = false;
                break;
            }
        }
        if (!guards_ok) continue;

        PetriNet out = net;
        IdAllocator ids(out);
        std::string merged = ids.fresh("xjoin");
        out.add_place(merged);
        for (const NodeRef& consumer : shared_post)
            out.add_arc(NodeRef::place(merged), consumer);
        for (const NodeRef& c : common) out.add_arc(c, NodeRef::place(merged));

        std::string join = ids.fresh("tau_join");
        out.add_transition(join, Label::silent());
        out.add_arc(NodeRef::transition(join), NodeRef::place(merged));
        int added = 2;
        for (const auto& [p, singles] : residual) {
            (void)p;
            std::string branch = ids.fresh("branch");
            out.add_place(branch);
            ++added;
            out.add_arc(NodeRef::place(branch), NodeRef::transition(join));
            for (const NodeRef& r : singles) out.add_arc(r, NodeRef::place(branch));
        }
        for (const auto& p : group) out.remove_place(p);
        return SiteResult{std::move(out), key, added, static_cast<int>(group.size())};
    }
    return std::nullopt;
}

std::optional<SiteResult> step_self_loop(const WorkflowNet& wf,
                                         const std::set<std::string>& rejected) {
    const PetriNet& net = wf.net();
    const auto& source_post = net.postset(NodeRef::place(wf.source()));
    if (source_post.size() != 1) return std::nullopt;
    std::string t_source = source_post.begin()->id;
    if (!net.label_of(t_source).is_silent()) return std::nullopt;
    if (net.preset(NodeRef::transition(t_source)).size() != 1 ||
        net.postset(NodeRef::transition(t_source)).size() != 1)
        return std::nullopt;

    const auto& sink_pre = net.preset(NodeRef::place(wf.sink()));
    if (sink_pre.size() != 1) return std::nullopt;
    std::string t_sink = sink_pre.begin()->id;
    if (t_sink == t_source || !net.label_of(t_sink).is_silent()) return std::nullopt;
    if (net.preset(NodeRef::transition(t_sink)).size() != 1 ||
        net.postset(NodeRef::transition(t_sink)).size() != 1)
        return std::nullopt;

    std::string shared = net.postset(NodeRef::transition(t_source)).begin()->id;
    if (shared != net.preset(NodeRef::transition(t_sink)).begin()->id) return std::nullopt;

    std::string key = "selfloop:" + shared;
    if (rejected.count(key)) return std::nullopt;

    // Loop body entry and exit arcs on the shared place.
    std::vector<NodeRef> body_exits;
    for (const NodeRef& x : net.preset(NodeRef::place(shared)))
        if (x.id != t_source) body_exits.push_back(x);
    bool has_entry = std::any_of(net.postset(NodeRef::place(shared)).begin(),
                                 net.postset(NodeRef::place(shared)).end(),
                                 [&](const NodeRef& y) { return y.id != t_sink; });
    if (body_exits.empty() || !has_entry) return std::nullopt;

    PetriNet out = net;
    IdAllocator ids(out);
    std::string p_do = ids.fresh("do");
    std::string tau_do = ids.fresh("tau_do");
    out.add_place(p_do);
    out.add_transition(tau_do, Label::silent());
    out.remove_arc(NodeRef::transition(t_source), NodeRef::place(shared));
    out.add_arc(NodeRef::transition(t_source), NodeRef::place(p_do));
    out.add_arc(NodeRef::place(p_do), NodeRef::transition(tau_do));
    out.add_arc(NodeRef::transition(tau_do), NodeRef::place(shared));
    for (const NodeRef& x : body_exits) {
        out.remove_arc(x, NodeRef::place(shared));
        out.add_arc(x, NodeRef::place(p_do));
    }
    return SiteResult{std::move(out), key, 2, 0};
}

std::optional<SiteResult> step_requirement_fix(const WorkflowNet& wf,
                                               const std::set<std::string>& rejected) {
    const PetriNet& net = wf.net();
    const auto& source_post = net.postset(NodeRef::place(wf.source()));
    if (source_post.size() != 1) return std::nullopt;
    std::string t_source = source_post.begin()->id;
    if (!net.label_of(t_source).is_silent()) return std::nullopt;
    if (net.preset(NodeRef::transition(t_source)).size() != 1 ||
        net.postset(NodeRef::transition(t_source)).size() != 1)
        return std::nullopt;
    std::string p_do = net.postset(NodeRef::transition(t_source)).begin()->id;

    const auto& sink_pre = net.preset(NodeRef::place(wf.sink()));
    if (sink_pre.size() != 1) return std::nullopt;
    std::string t_sink = sink_pre.begin()->id;
    if (t_sink == t_source || !net.label_of(t_sink).is_silent()) return std::nullopt;
    if (net.preset(NodeRef::transition(t_sink)).size() != 1 ||
        net.postset(NodeRef::transition(t_sink)).size() != 1)
        return std::nullopt;
    std::string p_redo = net.preset(NodeRef::transition(t_sink)).begin()->id;
    if (p_do == p_redo) return std::nullopt;

    TransitionSet T_do = in_between_reachable(net, p_do, p_redo);
    TransitionSet T_redo = in_between_reachable(net, p_redo, p_do);
    if (T_do.empty() || T_redo.empty()) return std::nullopt;
    if (T_do.size() + T_redo.size() + 2 != net.transitions().size()) return std::nullopt;
    for (const auto& t : T_do)
        if (T_redo.count(t) || t == t_source || t == t_sink) return std::nullopt;
    for (const auto& t : T_redo)
        if (t == t_source || t == t_sink) return std::nullopt;

    std::vector<std::pair<std::string, std::string>> offending;  // (transition, target place)
    for (const std::string& t : place_preset_transitions(net, p_do))
        if (T_do.count(t)) offending.emplace_back(t, p_do);
    for (const std::string& t : place_preset_transitions(net, p_redo))
        if (T_redo.count(t)) offending.emplace_back(t, p_redo);
    if (offending.empty()) return std::nullopt;

    std::string key = "req6:" + p_do + "," + p_redo;
    if (rejected.count(key)) return std::nullopt;

    PetriNet out = net;
    IdAllocator ids(out);
    int added = 0;
    for (const auto& [t, target] : offending) {
        std::string q = ids.fresh("indirect");
        std::string tau = ids.fresh("tau_r6");
        out.add_place(q);
        out.add_transition(tau, Label::silent());
        out.remove_arc(NodeRef::transition(t), NodeRef::place(target));
        out.add_arc(NodeRef::transition(t), NodeRef::place(q));
        out.add_arc(NodeRef::place(q), NodeRef::transition(tau));
        out.add_arc(NodeRef::transition(tau), NodeRef::place(target));
        added += 2;
    }
    return SiteResult{std::move(out), key, added, 0};
}

using StepFn = std::optional<SiteResult> (*)(const WorkflowNet&, const std::set<std::string>&);

std::pair<WorkflowNet, RewriteReport> run_rule_unchecked(const WorkflowNet& wf, StepFn step,
                                                         const std::string& name,
                                                         bool single_pass = false) {
    WorkflowNet current = wf;
    RewriteReport report{name, 0, {}};
    std::set<std::string> rejected;
    while (auto site = step(current, rejected)) {
        current = validate_workflow_net(site->net);
        report.applied += 1;
        report.node_deltas.emplace_back(site->nodes_added, site->nodes_removed);
        if (single_pass) break;
    }
    return {std::move(current), std::move(report)};
}

}  // namespace

std::pair<WorkflowNet, RewriteReport> explicit_xor_split(const WorkflowNet& wf) {
    return run_rule_unchecked(wf, step_xor_split, "explicit-xor-split");
}

std::pair<WorkflowNet, RewriteReport> explicit_xor_join(const WorkflowNet& wf) {
    return run_rule_unchecked(wf, step_xor_join, "explicit-xor-join");
}

std::pair<WorkflowNet, RewriteReport> self_loop_do_insertion(const WorkflowNet& wf) {
    return run_rule_unchecked(wf, step_self_loop, "self-loop-do-insertion");
}

std::pair<WorkflowNet, RewriteReport> loop_requirement6_fix(const WorkflowNet& wf) {
    return run_rule_unchecked(wf, step_requirement_fix, "loop-requirement-fix", true);
}

ReduceResult reduce_fixpoint(const WorkflowNet& wf, const RuleSet& rules, bool verify,
                             std::size_t language_bound, const ExplorationLimits& limits) {
    struct RuleEntry {
        bool enabled;
        StepFn step;
        const char* name;
        bool once;
    };
    const RuleEntry order[] = {
        {rules.xor_split, step_xor_split, "explicit-xor-split", false},
        {rules.xor_join, step_xor_join, "explicit-xor-join", false},
        {rules.self_loop, step_self_loop, "self-loop-do-insertion", false},
        {rules.loop_requirement_fix, step_requirement_fix, "loop-requirement-fix", true},
    };

    ReduceResult result{wf, {}};
    for (const RuleEntry& r : order) result.reports.push_back(RewriteReport{r.name, 0, {}});

    std::set<std::string> rejected;
    bool rule_done[4] = {false, false, false, false};

    std::optional<bool> current_safe;
    std::optional<bool> current_sound;
    std::optional<TraceSet> current_lang;
    auto gate_passes = [&](const WorkflowNet& candidate) {
        if (!current_safe) current_safe = check_safe(result.net, limits);
        bool cand_safe = check_safe(candidate, limits);
        if (!*current_safe || !cand_safe) return false;
        if (!current_sound) current_sound = check_sound(result.net, limits).sound();
        if (check_sound(candidate, limits).sound() != *current_sound) return false;
        if (!current_lang) current_lang = bounded_language(result.net, language_bound, limits);
        return bounded_language(candidate, language_bound, limits) == *current_lang;
    };

    // Every accepted application either shrinks a guard measure or is
    // one-shot, so the fixpoint is reached within this cap.
    const std::size_t cap =
        2 * (wf.net().arcs().size() + wf.net().places().size() + wf.net().transitions().size()) + 16;
    std::size_t steps = 0;

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < 4; ++i) {
            if (!order[i].enabled || rule_done[i]) continue;
            auto site = order[i].step(result.net, rejected);
            if (!site) continue;
            if (++steps > cap) throw Error("reduction fixpoint did not converge");
            WorkflowNet candidate = validate_workflow_net(site->net);
            if (verify && !gate_passes(candidate)) {
                rejected.insert(site->site_key);
                changed = true;  // other sites of the same rule may still match
                break;
            }
            result.net = std::move(candidate);
            current_safe.reset();
            current_sound.reset();
            current_lang.reset();
            result.reports[i].applied += 1;
            result.reports[i].node_deltas.emplace_back(site->nodes_added, site->nodes_removed);
            if (order[i].once) rule_done[i] = true;
            changed = true;
            break;  // restart from the first rule
        }
    }
    return result;
}

}  // namespace wf2powl
