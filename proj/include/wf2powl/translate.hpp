#pragma once

#include <optional>
#include <string>

#include "wf2powl/powl.hpp"
#include "wf2powl/reduce.hpp"
#include "wf2powl/semantics.hpp"

namespace wf2powl {

struct ConvertOptions {
    bool apply_reductions = true;
    bool verify_reductions = true;  // oracle-gate each accepted rewrite
    bool verify_with_oracle = false;
    std::size_t oracle_trace_bound = 6;
    ExplorationLimits limits;
};

enum class RejectReason { NotWorkflowNet, NotSafe, NotSound, BoundExceeded };

std::string to_string(RejectReason reason);

class ConvertOutcome {
  public:
    enum class Kind { Model, Null, Rejected };

    static ConvertOutcome model(PowlPtr m) { return ConvertOutcome(Kind::Model, std::move(m), {}, {}); }
    static ConvertOutcome null(std::string reason) {
        return ConvertOutcome(Kind::Null, nullptr, std::move(reason), {});
    }
    static ConvertOutcome rejected(RejectReason r, std::string detail) {
        return ConvertOutcome(Kind::Rejected, nullptr, std::move(detail), r);
    }

    Kind kind() const { return kind_; }
    bool is_model() const { return kind_ == Kind::Model; }
    bool is_null() const { return kind_ == Kind::Null; }
    bool is_rejected() const { return kind_ == Kind::Rejected; }

    const PowlPtr& model() const { return model_; }
    const std::string& reason() const { return reason_; }
    RejectReason reject_reason() const { return *reject_; }

  private:
    ConvertOutcome(Kind k, PowlPtr m, std::string reason, std::optional<RejectReason> rr)
        : kind_(k), model_(std::move(m)), reason_(std::move(reason)), reject_(rr) {}

    Kind kind_;
    PowlPtr model_;
    std::string reason_;
    std::optional<RejectReason> reject_;
};

/// Conversion of a workflow net into a POWL model: base case, then xor,
/// loop, and partial-order patterns, recursing on the projections.
/// Validation (net shape, safeness, soundness) happens up front.
ConvertOutcome convert(const PetriNet& net, const ConvertOptions& opts = {});
ConvertOutcome convert(const WorkflowNet& wf, const ConvertOptions& opts = {});

/// Signals a failed conversion oracle cross-check. Always a bug.
struct OracleMismatchError : std::logic_error {
    explicit OracleMismatchError(const std::string& msg) : std::logic_error(msg) {}
};

/// convert, then assert bounded-language equality between input and output
/// at opts.oracle_trace_bound. Mismatch throws OracleMismatchError.
ConvertOutcome convert_verified(const PetriNet& net, ConvertOptions opts = {});

}  // namespace wf2powl
