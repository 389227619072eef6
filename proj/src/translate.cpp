#include "wf2powl/translate.hpp"

#include <cassert>

#include "wf2powl/patterns.hpp"
#include "wf2powl/projections.hpp"

namespace wf2powl {

std::string to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::NotWorkflowNet: return "not-a-workflow-net";
        case RejectReason::NotSafe: return "not-safe";
        case RejectReason::NotSound: return "not-sound";
        case RejectReason::BoundExceeded: return "bound-exceeded";
    }
    return "unknown";
}

namespace {

struct RecResult {
    PowlPtr model;       // set on success
    std::string reason;  // set otherwise
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

RecResult convert_rec(const WorkflowNet& input, const ConvertOptions& opts) {
    WorkflowNet wf = input;
    if (opts.apply_reductions) {
        RuleSet rules = RuleSet::all();
        wf = reduce_fixpoint(wf, rules, opts.verify_reductions, opts.oracle_trace_bound,
                             opts.limits)
                 .net;
    }
    const PetriNet& net = wf.net();

    // Base case: a single transition spanning source and sink.
    if (net.transitions().size() == 1 && net.places().size() == 2) {
        const auto& [t, label] = *net.transitions().begin();
        if (net.arcs().size() == 2 &&
            net.has_arc(NodeRef::place(wf.source()), NodeRef::transition(t)) &&
            net.has_arc(NodeRef::transition(t), NodeRef::place(wf.sink())))
            return {Powl::leaf(label), {}};
    }

    // XOR pattern.
    Partition xor_parts = xor_partition(wf);
    if (xor_parts.size() >= 2) {
        std::vector<PowlPtr> children;
        children.reserve(xor_parts.size());
        for (const TransitionSet& part : xor_parts.parts()) {
            RecResult sub = convert_rec(xor_project(wf, part), opts);
            if (!sub.model)
                return {nullptr, "in xor part " + format_part(part) + ": " + sub.reason};
            children.push_back(std::move(sub.model));
        }
        return {Powl::xor_of(std::move(children)), {}};
    }

    // Loop pattern.
    std::string loop_reason;
    if (auto decomp = find_loop_pattern(wf, &loop_reason)) {
        RecResult do_sub = convert_rec(loop_project(wf, *decomp, LoopPart::Do), opts);
        if (!do_sub.model) return {nullptr, "in loop do-part: " + do_sub.reason};
        RecResult redo_sub = convert_rec(loop_project(wf, *decomp, LoopPart::Redo), opts);
        if (!redo_sub.model) return {nullptr, "in loop redo-part: " + redo_sub.reason};
        return {Powl::loop_of(std::move(do_sub.model), std::move(redo_sub.model)), {}};
    }

    // Partial order pattern.
    Partition po_parts = po_partition(wf);
    PoPatternCheck check = check_po_pattern(wf, po_parts);
    if (check.ok()) {
        std::vector<PowlPtr> children;
        children.reserve(po_parts.size());
        for (const TransitionSet& part : po_parts.parts()) {
            RecResult sub = convert_rec(po_project(wf, part), opts);
            if (!sub.model)
                return {nullptr, "in order part " + format_part(part) + ": " + sub.reason};
            children.push_back(std::move(sub.model));
        }
        return {Powl::order_of(std::move(children), check.decomposition->order), {}};
    }

    // No pattern matched; report every stage's finding.
    std::string reason;
    if (xor_parts.size() < 2 && po_parts.size() < 2) {
        reason = "pattern search produced partitions of size 1 (xor and partial order)";
        reason += "; no loop pattern: " + loop_reason;
    } else {
        reason = "no pattern detected: xor partition of size " + std::to_string(xor_parts.size());
        reason += "; no loop pattern: " + loop_reason;
        reason += "; partial order pattern violated: ";
        for (std::size_t i = 0; i < check.violations.size(); ++i) {
            if (i) reason += "; ";
            reason += check.violations[i];
        }
    }
    return {nullptr, reason};
}

}  // namespace

ConvertOutcome convert(const PetriNet& net, const ConvertOptions& opts) {
    try {
        WorkflowNet wf = validate_workflow_net(net);
        return convert(wf, opts);
    } catch (const WfValidationError& e) {
        return ConvertOutcome::rejected(RejectReason::NotWorkflowNet, e.what());
    }
}

ConvertOutcome convert(const WorkflowNet& wf, const ConvertOptions& opts) {
    try {
        if (!check_safe(wf, opts.limits))
            return ConvertOutcome::rejected(RejectReason::NotSafe,
                                            "a reachable marking puts two tokens in one place");
        SoundnessReport report = check_sound(wf, opts.limits);
        if (!report.sound()) {
            std::string detail = "soundness violated:";
            if (!report.no_dead_transitions) {
                detail += " dead transitions";
                for (const auto& t : report.dead_transitions) detail += " " + t;
                detail += ";";
            }
            if (!report.option_to_complete) detail += " option to complete fails;";
            if (!report.proper_completion) detail += " proper completion fails;";
            return ConvertOutcome::rejected(RejectReason::NotSound, detail);
        }
    } catch (const BoundExceededError& e) {
        return ConvertOutcome::rejected(RejectReason::BoundExceeded, e.what());
    }

    RecResult result = convert_rec(wf, opts);
    if (!result.model) return ConvertOutcome::null(result.reason);
    assert((validate(result.model), true));
    return ConvertOutcome::model(std::move(result.model));
}

ConvertOutcome convert_verified(const PetriNet& net, ConvertOptions opts) {
    opts.verify_with_oracle = true;
    ConvertOutcome outcome = convert(net, opts);
    if (!outcome.is_model()) return outcome;

    WorkflowNet wf = validate_workflow_net(net);
    TraceSet net_lang = bounded_language(wf, opts.oracle_trace_bound, opts.limits);
    LanguageBounds bounds{opts.oracle_trace_bound, opts.oracle_trace_bound};
    TraceSet model_lang = bounded_powl_language(outcome.model(), bounds);
    if (net_lang != model_lang) {
        std::string witness;
        for (const Trace& t : net_lang)
            if (!model_lang.count(t)) {
                witness = "net-only trace " + trace_to_string(t);
                break;
            }
        if (witness.empty())
            for (const Trace& t : model_lang)
                if (!net_lang.count(t)) {
                    witness = "model-only trace " + trace_to_string(t);
                    break;
                }
        throw OracleMismatchError("conversion output language mismatch at k=" +
                                  std::to_string(opts.oracle_trace_bound) + ": " + witness);
    }
    return outcome;
}

}  // namespace wf2powl
