#include "wf2powl/powl.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace wf2powl {

IndexRelation transitive_closure(std::size_t n, const IndexRelation& relation) {
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (const auto& [i, j] : relation) {
        if (i >= n || j >= n) throw Error("relation index out of range");
        m[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!m[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (m[k][j]) m[i][j] = true;
        }
    IndexRelation out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m[i][j]) out.insert({i, j});
    return out;
}

IndexRelation transitive_reduction(std::size_t n, const IndexRelation& closure) {
    IndexRelation out;
    for (const auto& [i, j] : closure) {
        bool redundant = false;
        for (std::size_t m = 0; m < n && !redundant; ++m)
            if (m != i && m != j && closure.count({i, m}) && closure.count({m, j}))
                redundant = true;
        if (!redundant) out.insert({i, j});
    }
    return out;
}

std::optional<std::size_t> strictness_violation(std::size_t n, const IndexRelation& relation) {
    IndexRelation closed = transitive_closure(n, relation);
    for (std::size_t i = 0; i < n; ++i)
        if (closed.count({i, i})) return i;
    return std::nullopt;
}

StrictOrder::StrictOrder(std::size_t n, const IndexRelation& relation) : n_(n) {
    if (n < 2) throw InvalidModelError("strict orders are defined for size >= 2");
    closure_ = transitive_closure(n, relation);
    for (std::size_t i = 0; i < n; ++i)
        if (closure_.count({i, i})) throw NotStrictError(i);
}

StrictOrder StrictOrder::permuted(const std::vector<std::size_t>& permutation) const {
    IndexRelation renamed;
    for (const auto& [i, j] : closure_) renamed.insert({permutation[i], permutation[j]});
    return StrictOrder(n_, renamed);
}

Powl::Powl(Kind kind, Label label, std::vector<PowlPtr> children, std::optional<StrictOrder> order)
    : kind_(kind), label_(std::move(label)), children_(std::move(children)), order_(std::move(order)) {
    switch (kind_) {
        case Kind::Leaf:
            key_ = label_.is_silent() ? "tau" : "t:" + label_.name();
            break;
        case Kind::Xor: {
            key_ = "x(";
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) key_ += ",";
                key_ += children_[i]->key();
            }
            key_ += ")";
            break;
        }
        case Kind::Loop:
            key_ = "l(" + children_[0]->key() + "," + children_[1]->key() + ")";
            break;
        case Kind::Order: {
            key_ = "o(";
            for (std::size_t i = 0; i < children_.size(); ++i) {
                if (i) key_ += ",";
                key_ += children_[i]->key();
            }
            key_ += ";";
            bool first = true;
            for (const auto& [i, j] : order_->closure()) {
                if (!first) key_ += ",";
                first = false;
                key_ += std::to_string(i) + "<" + std::to_string(j);
            }
            key_ += ")";
            break;
        }
    }
}

PowlPtr Powl::leaf(Label label) {
    return PowlPtr(new Powl(Kind::Leaf, std::move(label), {}, std::nullopt));
}

PowlPtr Powl::xor_of(std::vector<PowlPtr> children) {
    if (children.size() < 2) throw InvalidModelError("xor requires at least two children");
    for (const auto& c : children)
        if (!c) throw InvalidModelError("xor child must not be null");
    std::stable_sort(children.begin(), children.end(),
                     [](const PowlPtr& a, const PowlPtr& b) { return a->key() < b->key(); });
    return PowlPtr(new Powl(Kind::Xor, Label::silent(), std::move(children), std::nullopt));
}

PowlPtr Powl::loop_of(PowlPtr do_part, PowlPtr redo_part) {
    if (!do_part || !redo_part) throw InvalidModelError("loop children must not be null");
    return PowlPtr(new Powl(Kind::Loop, Label::silent(), {std::move(do_part), std::move(redo_part)},
                            std::nullopt));
}

PowlPtr Powl::order_of(std::vector<PowlPtr> children, const IndexRelation& relation) {
    StrictOrder order(children.size(), relation);
    return order_of(std::move(children), std::move(order));
}

PowlPtr Powl::order_of(std::vector<PowlPtr> children, StrictOrder order) {
    if (children.size() < 2) throw InvalidModelError("order requires at least two children");
    if (order.size() != children.size())
        throw InvalidModelError("order size does not match child count");
    for (const auto& c : children)
        if (!c) throw InvalidModelError("order child must not be null");

    // Canonicalize child positions and rename the relation along.
    std::vector<std::size_t> by_key(children.size());
    std::iota(by_key.begin(), by_key.end(), 0);
    std::stable_sort(by_key.begin(), by_key.end(), [&](std::size_t a, std::size_t b) {
        return children[a]->key() < children[b]->key();
    });
    std::vector<std::size_t> new_pos(children.size());
    for (std::size_t k = 0; k < by_key.size(); ++k) new_pos[by_key[k]] = k;

    std::vector<PowlPtr> sorted;
    sorted.reserve(children.size());
    for (std::size_t old : by_key) sorted.push_back(children[old]);
    return PowlPtr(new Powl(Kind::Order, Label::silent(), std::move(sorted),
                            order.permuted(new_pos)));
}

const Label& Powl::label() const {
    if (kind_ != Kind::Leaf) throw InvalidModelError("only leaves carry a label");
    return label_;
}

const PowlPtr& Powl::do_part() const {
    if (kind_ != Kind::Loop) throw InvalidModelError("not a loop node");
    return children_[0];
}

const PowlPtr& Powl::redo_part() const {
    if (kind_ != Kind::Loop) throw InvalidModelError("not a loop node");
    return children_[1];
}

const StrictOrder& Powl::order() const {
    if (kind_ != Kind::Order) throw InvalidModelError("not an order node");
    return *order_;
}

std::size_t Powl::leaf_count() const {
    if (kind_ == Kind::Leaf) return 1;
    std::size_t sum = 0;
    for (const auto& c : children_) sum += c->leaf_count();
    return sum;
}

std::size_t Powl::node_count() const {
    std::size_t sum = 1;
    for (const auto& c : children_) sum += c->node_count();
    return sum;
}

bool structurally_equal(const PowlPtr& a, const PowlPtr& b) {
    return a && b && a->key() == b->key();
}

void validate(const PowlPtr& model) {
    if (!model) throw InvalidModelError("model must not be null");
    switch (model->kind()) {
        case Powl::Kind::Leaf:
            return;
        case Powl::Kind::Xor:
            if (model->children().size() < 2) throw InvalidModelError("xor arity below 2");
            break;
        case Powl::Kind::Loop:
            if (model->children().size() != 2) throw InvalidModelError("loop arity must be 2");
            break;
        case Powl::Kind::Order: {
            if (model->children().size() < 2) throw InvalidModelError("order arity below 2");
            const StrictOrder& order = model->order();
            if (order.size() != model->children().size())
                throw InvalidModelError("order size mismatch");
            if (auto idx = strictness_violation(order.size(), order.closure()))
                throw NotStrictError(*idx);
            if (transitive_closure(order.size(), order.closure()) != order.closure())
                throw InvalidModelError("order relation is not stored in closed form");
            break;
        }
    }
    for (const auto& c : model->children()) validate(c);
}

TraceSet ordered_shuffle(const std::vector<Trace>& sequences, const StrictOrder& order) {
    if (sequences.size() != order.size())
        throw Error("sequence count does not match order size");
    const std::size_t n = sequences.size();
    TraceSet out;
    std::vector<std::size_t> pos(n, 0);
    Trace current;

    std::function<void()> step = [&]() {
        bool exhausted = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (pos[i] >= sequences[i].size()) continue;
            exhausted = false;
            // i may emit only once every order-predecessor is fully consumed.
            bool ready = true;
            for (std::size_t j = 0; j < n && ready; ++j)
                if (order.less(j, i) && pos[j] < sequences[j].size()) ready = false;
            if (!ready) continue;
            current.push_back(sequences[i][pos[i]]);
            ++pos[i];
            step();
            --pos[i];
            current.pop_back();
        }
        if (exhausted) out.insert(current);
    };
    step();
    return out;
}

namespace {

TraceSet concat_bounded(const TraceSet& a, const TraceSet& b, std::size_t max_len) {
    TraceSet out;
    for (const Trace& x : a) {
        if (x.size() > max_len) continue;
        for (const Trace& y : b) {
            if (x.size() + y.size() > max_len) continue;
            Trace t = x;
            t.insert(t.end(), y.begin(), y.end());
            out.insert(std::move(t));
        }
    }
    return out;
}

TraceSet filter_bounded(TraceSet traces, std::size_t max_len) {
    for (auto it = traces.begin(); it != traces.end();)
        it = it->size() > max_len ? traces.erase(it) : std::next(it);
    return traces;
}

}  // namespace

TraceSet bounded_powl_language(const PowlPtr& model, const LanguageBounds& bounds) {
    if (!model) throw InvalidModelError("model must not be null");
    switch (model->kind()) {
        case Powl::Kind::Leaf: {
            if (model->label().is_silent()) return {Trace{}};
            if (bounds.max_trace_len < 1) return {};
            return {Trace{model->label().name()}};
        }
        case Powl::Kind::Xor: {
            TraceSet out;
            for (const auto& c : model->children()) {
                TraceSet l = bounded_powl_language(c, bounds);
                out.insert(l.begin(), l.end());
            }
            return out;
        }
        case Powl::Kind::Loop: {
            TraceSet do_lang = bounded_powl_language(model->do_part(), bounds);
            TraceSet redo_lang = bounded_powl_language(model->redo_part(), bounds);
            TraceSet frontier = filter_bounded(do_lang, bounds.max_trace_len);
            TraceSet out = frontier;
            for (std::size_t i = 0; i < bounds.loop_unroll; ++i) {
                frontier = concat_bounded(concat_bounded(frontier, redo_lang, bounds.max_trace_len),
                                          do_lang, bounds.max_trace_len);
                std::size_t before = out.size();
                out.insert(frontier.begin(), frontier.end());
                if (out.size() == before) break;  // saturated within the length cap
            }
            return out;
        }
        case Powl::Kind::Order: {
            const auto& children = model->children();
            std::vector<TraceSet> langs;
            langs.reserve(children.size());
            for (const auto& c : children)
                langs.push_back(filter_bounded(bounded_powl_language(c, bounds), bounds.max_trace_len));

            TraceSet out;
            std::vector<Trace> combo(children.size());
            std::function<void(std::size_t, std::size_t)> pick = [&](std::size_t i, std::size_t used) {
                if (i == children.size()) {
                    TraceSet shuffled = ordered_shuffle(combo, model->order());
                    out.insert(shuffled.begin(), shuffled.end());
                    return;
                }
                for (const Trace& t : langs[i]) {
                    if (used + t.size() > bounds.max_trace_len) continue;
                    combo[i] = t;
                    pick(i + 1, used + t.size());
                }
            };
            pick(0, 0);
            return out;
        }
    }
    throw Error("unreachable model kind");
}

}  // namespace wf2powl
