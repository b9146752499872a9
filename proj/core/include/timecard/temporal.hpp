#ifndef TIMECARD_TEMPORAL_HPP
#define TIMECARD_TEMPORAL_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "timecard/model.hpp"

namespace timecard {

// One maximal span on which a fluent's value is either constant (slope 0)
// or accumulates one unit per minute (count fluents, slope 1). The piece
// covers [from, next piece's from).
struct Piece {
    Minute from = 0;
    Value value;              // value at `from`
    std::int64_t slope = 0;   // per-minute increment; value must be integer
};

// Minute-exact value history for every fluent over [0, horizon], sampled
// through a tick grid of the given granularity. Immutable once built.
class Timeline {
public:
    class Builder;

    Timeline() = default;  // empty; populated timelines come from Builder

    Minute horizon() const { return horizon_; }
    Minute granularity() const { return granularity_; }
    std::size_t tick_count() const {
        return static_cast<std::size_t>(horizon_ / granularity_) + 1;
    }

    std::size_t fluent_count() const { return names_.size(); }
    const std::vector<Name>& fluent_names() const { return names_; }
    bool has_fluent(const Name& name) const;
    std::size_t index_of(const Name& name) const;  // throws ReferenceError

    // Value at an arbitrary minute in [0, horizon].
    Value value_at(std::size_t fluent, Minute minute) const;
    Value value_at(const Name& fluent, Minute minute) const;

    // First minute of the value run containing `minute`.
    Minute run_start(std::size_t fluent, Minute minute) const;

    // Tick-level views; `tick` must be a multiple of the granularity.
    Value value_at_tick(std::size_t fluent, Minute tick) const;
    // Earliest tick since which the fluent has shown its current tick value.
    Minute became_at_tick(std::size_t fluent, Minute tick) const;

    const std::vector<Piece>& pieces(std::size_t fluent) const {
        return pieces_[fluent];
    }

private:
    friend class Builder;
    void check_tick(Minute tick) const;

    Minute horizon_ = 0;
    Minute granularity_ = 1;
    std::vector<Name> names_;
    std::unordered_map<Name, std::size_t> index_;
    std::vector<std::vector<Piece>> pieces_;
    // Materialized per-tick caches, built by finish().
    std::vector<std::vector<Value>> tick_values_;
    std::vector<std::vector<Minute>> tick_became_;
};

class Timeline::Builder {
public:
    Builder(Minute horizon, Minute granularity);
    std::size_t add_fluent(const Name& name);
    // Pieces must be appended in strictly increasing `from` order, starting
    // at 0. Equal adjacent constant pieces merge.
    void append(std::size_t fluent, Piece piece);
    Timeline finish() &&;

private:
    Timeline tl_;
};

// Length in minutes of the maximal run of ticks <= t on which the fluent
// shows `v`; 0 when the value at t differs. Each tick contributes one
// granularity step.
Minute held_for(const Timeline& tl, const Name& fluent, const Value& v,
                Minute t);

// Tick-window semantics over a finished timeline: an AtLeast{n} window spans
// the ticks of [t-n, t] and requires t >= n, so a value must have taken hold
// at least n minutes before t. Atomic windows resolve through the
// became-at bookkeeping instead of scanning.
bool holds(const TfPtr& formula, const Timeline& tl, Minute t);

// Minute-resolution state access for in-progress runs. Engines evaluate rule
// conditions through this, which keeps results independent of the tick grid.
class HistoryView {
public:
    virtual ~HistoryView() = default;
    virtual Value value_at(const Name& fluent, Minute minute) const = 0;
    // First minute of the fluent's current value run at `minute`.
    virtual Minute run_start(const Name& fluent, Minute minute) const = 0;
};

// Minute-window semantics; at granularity 1 this agrees with holds().
bool holds_at(const TfPtr& formula, const HistoryView& view, Minute minute);

// Adapts a finished Timeline to the HistoryView interface.
class TimelineView final : public HistoryView {
public:
    explicit TimelineView(const Timeline& tl) : tl_(tl) {}
    Value value_at(const Name& fluent, Minute minute) const override {
        return tl_.value_at(fluent, minute);
    }
    Minute run_start(const Name& fluent, Minute minute) const override {
        return tl_.run_start(tl_.index_of(fluent), minute);
    }

private:
    const Timeline& tl_;
};

}  // namespace timecard

#endif
