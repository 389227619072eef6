#include "wf2powl/projections.hpp"

#include <algorithm>

namespace wf2powl {

namespace {

PetriNet build_net(const PlaceSet& places, const PetriNet& source_net, const TransitionSet& transitions,
                   const ArcSet& arcs) {
    PetriNet out;
    for (const auto& p : places) out.add_place(p);
    for (const auto& t : transitions) out.add_transition(t, source_net.label_of(t));
    for (const auto& [from, to] : arcs) out.add_arc(from, to);
    return out;
}

}  // namespace

WorkflowNet xor_project(const WorkflowNet& wf, const TransitionSet& part) {
    const PetriNet& net = wf.net();
    PlaceSet places = project_places(net, part);
    ArcSet arcs = project_flow(net, places, part);
    return validate_workflow_net(build_net(places, net, part, arcs));
}

WorkflowNet loop_project(const WorkflowNet& wf, const LoopDecomposition& decomp, LoopPart which) {
    const PetriNet& net = wf.net();
    const TransitionSet& part = which == LoopPart::Do ? decomp.T_do : decomp.T_redo;
    const std::string& p_start = which == LoopPart::Do ? decomp.p_do : decomp.p_redo;
    const std::string& p_end = which == LoopPart::Do ? decomp.p_redo : decomp.p_do;

    PlaceSet places = project_places(net, part);
    places.erase(decomp.p_do);
    places.erase(decomp.p_redo);
    places.insert(wf.source());
    places.insert(wf.sink());

    ArcSet arcs = project_flow(net, places, part);
    for (const auto& t : part) {
        if (net.has_arc(NodeRef::place(p_start), NodeRef::transition(t)))
            arcs.insert({NodeRef::place(wf.source()), NodeRef::transition(t)});
        if (net.has_arc(NodeRef::transition(t), NodeRef::place(p_end)))
            arcs.insert({NodeRef::transition(t), NodeRef::place(wf.sink())});
    }
    return validate_workflow_net(build_net(places, net, part, arcs));
}

WorkflowNet normalize(const PetriNet& net, const std::string& p_s, const std::string& p_e) {
    PetriNet out = net;
    IdAllocator ids(out);
    if (!net.preset(NodeRef::place(p_s)).empty()) {
        std::string fresh_source = ids.fresh("src");
        std::string tau = ids.fresh("tau");
        out.add_place(fresh_source);
        out.add_transition(tau, Label::silent());
        out.add_arc(NodeRef::place(fresh_source), NodeRef::transition(tau));
        out.add_arc(NodeRef::transition(tau), NodeRef::place(p_s));
    }
    if (!net.postset(NodeRef::place(p_e)).empty()) {
        std::string fresh_sink = ids.fresh("snk");
        std::string tau = ids.fresh("tau");
        out.add_place(fresh_sink);
        out.add_transition(tau, Label::silent());
        out.add_arc(NodeRef::place(p_e), NodeRef::transition(tau));
        out.add_arc(NodeRef::transition(tau), NodeRef::place(fresh_sink));
    }
    return validate_workflow_net(out);
}

WorkflowNet po_project(const WorkflowNet& wf, const TransitionSet& part) {
    const PetriNet& net = wf.net();
    PlaceSet entries = entry_points(wf, part);
    PlaceSet exits = exit_points(wf, part);

    PlaceSet retained = project_places(net, part);
    for (const auto& p : entries) retained.erase(p);
    for (const auto& p : exits) retained.erase(p);

    IdAllocator ids(net);
    std::string p_s = ids.fresh("ps");
    std::string p_e = ids.fresh("pe");

    ArcSet arcs = project_flow(net, retained, part);
    for (const auto& t : part) {
        NodeRef tr = NodeRef::transition(t);
        for (const NodeRef& p : net.preset(tr)) {
            if (entries.count(p.id)) arcs.insert({NodeRef::place(p_s), tr});
            if (exits.count(p.id)) arcs.insert({NodeRef::place(p_e), tr});
        }
        for (const NodeRef& p : net.postset(tr)) {
            if (entries.count(p.id)) arcs.insert({tr, NodeRef::place(p_s)});
            if (exits.count(p.id)) arcs.insert({tr, NodeRef::place(p_e)});
        }
    }

    PlaceSet places = retained;
    places.insert(p_s);
    places.insert(p_e);
    return normalize(build_net(places, net, part, arcs), p_s, p_e);
}

}  // namespace wf2powl
