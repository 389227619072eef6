#include "wf2powl/powl_to_net.hpp"

namespace wf2powl {

namespace {

struct NetBuilder {
    PetriNet net;
    unsigned places = 0;
    unsigned visibles = 0;
    unsigned silents = 0;

    std::string place() {
        std::string id = "__gen_p" + std::to_string(places++);
        net.add_place(id);
        return id;
    }
    std::string visible(const std::string& name) {
        std::string id = "__gen_t" + std::to_string(visibles++);
        net.add_transition(id, Label::visible(name));
        return id;
    }
    std::string silent() {
        std::string id = "__gen_tau" + std::to_string(silents++);
        net.add_transition(id, Label::silent());
        return id;
    }
    void arc(const std::string& place_id, const std::string& transition_id, bool place_first) {
        if (place_first)
            net.add_arc(NodeRef::place(place_id), NodeRef::transition(transition_id));
        else
            net.add_arc(NodeRef::transition(transition_id), NodeRef::place(place_id));
    }
    void pt(const std::string& p, const std::string& t) { arc(p, t, true); }
    void tp(const std::string& t, const std::string& p) { arc(p, t, false); }
};

void build(NetBuilder& b, const PowlPtr& model, const std::string& in, const std::string& out) {
    switch (model->kind()) {
        case Powl::Kind::Leaf: {
            std::string t =
                model->label().is_silent() ? b.silent() : b.visible(model->label().name());
            b.pt(in, t);
            b.tp(t, out);
            return;
        }
        case Powl::Kind::Xor: {
            // Children share the boundary places directly.
            for (const auto& child : model->children()) build(b, child, in, out);
            return;
        }
        case Powl::Kind::Loop: {
            std::string p_do = b.place();
            std::string p_redo = b.place();
            std::string enter = b.silent();
            std::string leave = b.silent();
            b.pt(in, enter);
            b.tp(enter, p_do);
            b.pt(p_redo, leave);
            b.tp(leave, out);
            build(b, model->do_part(), p_do, p_redo);
            build(b, model->redo_part(), p_redo, p_do);
            return;
        }
        case Powl::Kind::Order: {
            const auto& children = model->children();
            const std::size_t n = children.size();
            IndexRelation reduction = model->order().reduction();

            std::vector<bool> minimal(n, true), maximal(n, true);
            for (const auto& [i, j] : reduction) {
                maximal[i] = false;
                minimal[j] = false;
            }

            std::string fan_out = b.silent();
            std::string fan_in = b.silent();
            b.pt(in, fan_out);
            b.tp(fan_in, out);

            // Entry collector and exit splitter per child; dedicated token
            // places per reduction edge keep the region a marked graph.
            std::vector<std::string> starts(n), ends(n), collectors(n), splitters(n);
            for (std::size_t i = 0; i < n; ++i) {
                starts[i] = b.place();
                ends[i] = b.place();
                collectors[i] = b.silent();
                splitters[i] = b.silent();
                b.tp(collectors[i], starts[i]);
                b.pt(ends[i], splitters[i]);
                if (minimal[i]) {
                    std::string token = b.place();
                    b.tp(fan_out, token);
                    b.pt(token, collectors[i]);
                }
                if (maximal[i]) {
                    std::string token = b.place();
                    b.tp(splitters[i], token);
                    b.pt(token, fan_in);
                }
            }
            for (const auto& [i, j] : reduction) {
                std::string produced = b.place();
                std::string handoff = b.silent();
                std::string consumed = b.place();
                b.tp(splitters[i], produced);
                b.pt(produced, handoff);
                b.tp(handoff, consumed);
                b.pt(consumed, collectors[j]);
            }
            for (std::size_t i = 0; i < n; ++i) build(b, children[i], starts[i], ends[i]);
            return;
        }
    }
    throw Error("unreachable model kind");
}

}  // namespace

WorkflowNet to_wf_net(const PowlPtr& model) {
    validate(model);
    NetBuilder b;
    std::string source = b.place();
    std::string sink = b.place();
    build(b, model, source, sink);
    return validate_workflow_net(b.net);
}

}  // namespace wf2powl
