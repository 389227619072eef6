#pragma once

#include "wf2powl/petri_net.hpp"
#include "wf2powl/powl.hpp"

namespace wf2powl {

/// Compositional construction of a safe and sound workflow net with the
/// same language as the model. Decision places arise only from xor and
/// loop nodes, so the result is always convertible back.
WorkflowNet to_wf_net(const PowlPtr& model);

}  // namespace wf2powl
