#pragma once

#include "wf2powl/patterns.hpp"
#include "wf2powl/petri_net.hpp"

namespace wf2powl {

/// Restriction of the net to one XOR part: the part's transitions, the
/// places touching them, and the flow between those.
WorkflowNet xor_project(const WorkflowNet& wf, const TransitionSet& part);

enum class LoopPart { Do, Redo };

/// Extraction of the do- or redo-part: the loop places are dropped and the
/// part is reattached to the original source and sink places.
WorkflowNet loop_project(const WorkflowNet& wf, const LoopDecomposition& decomp, LoopPart which);

/// Inserts a fresh source ahead of p_s (through a silent transition) when
/// p_s has producers, and symmetrically a fresh sink after p_e. Identity
/// otherwise; idempotent.
WorkflowNet normalize(const PetriNet& net, const std::string& p_s, const std::string& p_e);

/// Extraction of one partial-order part: entry and exit points collapse
/// onto fresh boundary places, then the result is normalized.
WorkflowNet po_project(const WorkflowNet& wf, const TransitionSet& part);

}  // namespace wf2powl
