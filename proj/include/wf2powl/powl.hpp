#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wf2powl/petri_net.hpp"
#include "wf2powl/semantics.hpp"

namespace wf2powl {

using IndexPair = std::pair<std::size_t, std::size_t>;
using IndexRelation = std::set<IndexPair>;

/// Saturation closure of a relation over {0..n-1}.
IndexRelation transitive_closure(std::size_t n, const IndexRelation& relation);

/// Hasse reduction of a transitively closed relation.
IndexRelation transitive_reduction(std::size_t n, const IndexRelation& closure);

/// Returns the index of a reflexive pair after closure, if any.
std::optional<std::size_t> strictness_violation(std::size_t n, const IndexRelation& relation);

/// Strict partial order over {0..n-1}, stored in closed form.
/// Construction closes the input relation and rejects non-strict results.
class StrictOrder {
  public:
    StrictOrder(std::size_t n, const IndexRelation& relation);

    std::size_t size() const { return n_; }
    bool less(std::size_t i, std::size_t j) const { return closure_.count({i, j}) > 0; }
    const IndexRelation& closure() const { return closure_; }
    IndexRelation reduction() const { return transitive_reduction(n_, closure_); }

    /// The order induced by renaming index i to permutation[i].
    StrictOrder permuted(const std::vector<std::size_t>& permutation) const;

    bool operator==(const StrictOrder& o) const { return n_ == o.n_ && closure_ == o.closure_; }

  private:
    std::size_t n_;
    IndexRelation closure_;
};

class Powl;
using PowlPtr = std::shared_ptr<const Powl>;

/// Immutable POWL model node. Children of xor/order nodes are kept in a
/// canonical order (sorted by structural key) so equal models serialize
/// identically; order relations are permuted along.
class Powl {
  public:
    enum class Kind { Leaf, Xor, Loop, Order };

    static PowlPtr leaf(Label label);
    static PowlPtr visible(std::string name) { return leaf(Label::visible(std::move(name))); }
    static PowlPtr silent() { return leaf(Label::silent()); }
    static PowlPtr xor_of(std::vector<PowlPtr> children);
    static PowlPtr loop_of(PowlPtr do_part, PowlPtr redo_part);
    static PowlPtr order_of(std::vector<PowlPtr> children, const IndexRelation& relation);
    static PowlPtr order_of(std::vector<PowlPtr> children, StrictOrder order);

    Kind kind() const { return kind_; }
    const Label& label() const;
    const std::vector<PowlPtr>& children() const { return children_; }
    const PowlPtr& do_part() const;
    const PowlPtr& redo_part() const;
    const StrictOrder& order() const;

    /// Canonical structural key; equal keys mean structurally equal models.
    const std::string& key() const { return key_; }

    std::size_t leaf_count() const;
    std::size_t node_count() const;

  private:
    Powl(Kind kind, Label label, std::vector<PowlPtr> children, std::optional<StrictOrder> order);

    Kind kind_;
    Label label_;
    std::vector<PowlPtr> children_;
    std::optional<StrictOrder> order_;
    std::string key_;
};

bool structurally_equal(const PowlPtr& a, const PowlPtr& b);

/// Re-checks the arity and strict-order invariants of a whole model tree.
void validate(const PowlPtr& model);

struct LanguageBounds {
    std::size_t loop_unroll = 6;
    std::size_t max_trace_len = 6;
};

/// All interleavings of the given sequences that respect each sequence's
/// internal order and the inter-sequence partial order.
TraceSet ordered_shuffle(const std::vector<Trace>& sequences, const StrictOrder& order);

/// Recursive model language, truncated: loops expand at most loop_unroll
/// redo iterations and traces longer than max_trace_len are discarded.
TraceSet bounded_powl_language(const PowlPtr& model, const LanguageBounds& bounds);

}  // namespace wf2powl
