#include "timecard/temporal.hpp"

#include <algorithm>

#include "timecard/errors.hpp"

namespace timecard {

// ---------------------------------------------------------------------------
// Timeline
// ---------------------------------------------------------------------------

Timeline::Builder::Builder(Minute horizon, Minute granularity) {
    if (horizon < 0) throw RangeError("horizon must be >= 0");
    if (granularity < 1) throw RangeError("granularity must be >= 1");
    if (horizon % granularity != 0)
        throw RangeError("granularity must divide the horizon");
    tl_.horizon_ = horizon;
    tl_.granularity_ = granularity;
}

std::size_t Timeline::Builder::add_fluent(const Name& name) {
    if (tl_.index_.count(name))
        throw Error("timeline already has fluent '" + name + "'");
    tl_.index_[name] = tl_.names_.size();
    tl_.names_.push_back(name);
    tl_.pieces_.emplace_back();
    return tl_.names_.size() - 1;
}

void Timeline::Builder::append(std::size_t fluent, Piece piece) {
    auto& ps = tl_.pieces_.at(fluent);
    if (piece.slope != 0 && !piece.value.is_int())
        throw TypeError("sloped piece needs an integer value");
    if (ps.empty()) {
        if (piece.from != 0) throw RangeError("first piece must start at 0");
    } else {
        if (piece.from <= ps.back().from)
            throw RangeError("pieces must start at increasing minutes");
        // Merge a constant continuation of the same value.
        if (ps.back().slope == 0 && piece.slope == 0 &&
            ps.back().value == piece.value)
            return;
    }
    ps.push_back(std::move(piece));
}

Timeline Timeline::Builder::finish() && {
    for (std::size_t f = 0; f < tl_.names_.size(); ++f)
        if (tl_.pieces_[f].empty())
            throw Error("fluent '" + tl_.names_[f] + "' has no value pieces");

    const std::size_t ticks = tl_.tick_count();
    tl_.tick_values_.resize(tl_.names_.size());
    tl_.tick_became_.resize(tl_.names_.size());
    for (std::size_t f = 0; f < tl_.names_.size(); ++f) {
        auto& vals = tl_.tick_values_[f];
        auto& became = tl_.tick_became_[f];
        vals.reserve(ticks);
        became.reserve(ticks);
        for (std::size_t i = 0; i < ticks; ++i) {
            Minute t = static_cast<Minute>(i) * tl_.granularity_;
            vals.push_back(tl_.value_at(f, t));
            if (i == 0 || vals[i] != vals[i - 1])
                became.push_back(t);
            else
                became.push_back(became[i - 1]);
        }
    }
    return std::move(tl_);
}

bool Timeline::has_fluent(const Name& name) const {
    return index_.count(name) != 0;
}

std::size_t Timeline::index_of(const Name& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw ReferenceError("unknown fluent '" + name + "'");
    return it->second;
}

namespace {
const Piece& piece_at(const std::vector<Piece>& ps, Minute minute) {
    // Last piece with from <= minute.
    auto it = std::upper_bound(
        ps.begin(), ps.end(), minute,
        [](Minute m, const Piece& p) { return m < p.from; });
    return *(it - 1);
}
}  // namespace

Value Timeline::value_at(std::size_t fluent, Minute minute) const {
    if (minute < 0 || minute > horizon_)
        throw RangeError("minute outside [0, horizon]");
    const Piece& p = piece_at(pieces_.at(fluent), minute);
    if (p.slope == 0) return p.value;
    return Value::integer(p.value.as_int() + p.slope * (minute - p.from));
}

Value Timeline::value_at(const Name& fluent, Minute minute) const {
    return value_at(index_of(fluent), minute);
}

Minute Timeline::run_start(std::size_t fluent, Minute minute) const {
    if (minute < 0 || minute > horizon_)
        throw RangeError("minute outside [0, horizon]");
    const auto& ps = pieces_.at(fluent);
    const Piece& p = piece_at(ps, minute);
    if (p.slope != 0) return minute;  // accumulating value changes each minute
    return p.from;
}

void Timeline::check_tick(Minute tick) const {
    if (tick < 0 || tick > horizon_ || tick % granularity_ != 0)
        throw RangeError("not a tick of this timeline: " +
                         std::to_string(tick));
}

Value Timeline::value_at_tick(std::size_t fluent, Minute tick) const {
    check_tick(tick);
    return tick_values_.at(fluent)[static_cast<std::size_t>(tick /
                                                            granularity_)];
}

Minute Timeline::became_at_tick(std::size_t fluent, Minute tick) const {
    check_tick(tick);
    return tick_became_.at(fluent)[static_cast<std::size_t>(tick /
                                                            granularity_)];
}

// ---------------------------------------------------------------------------
// Tick-window evaluation
// ---------------------------------------------------------------------------

Minute held_for(const Timeline& tl, const Name& fluent, const Value& v,
                Minute t) {
    std::size_t f = tl.index_of(fluent);
    if (tl.value_at_tick(f, t) != v) return 0;
    return (t - tl.became_at_tick(f, t)) + tl.granularity();
}

namespace {

bool holds_tick(const TemporalFormula& f, const Timeline& tl, Minute t) {
    if (const auto* a = std::get_if<TfAtom>(&f.node))
        return tl.value_at_tick(tl.index_of(a->fluent), t) == a->value;
    if (const auto* c = std::get_if<TfAnd>(&f.node)) {
        for (const auto& i : c->items)
            if (!holds_tick(*i, tl, t)) return false;
        return true;
    }
    if (const auto* n = std::get_if<TfNot>(&f.node))
        return !holds_tick(*n->sub, tl, t);

    auto window = [&](Minute n, const TemporalFormula& sub) {
        if (n % tl.granularity() != 0)
            throw RangeError("granularity does not divide duration " +
                             std::to_string(n));
        if (t < n) return false;
        if (const auto* a = std::get_if<TfAtom>(&sub.node)) {
            std::size_t fi = tl.index_of(a->fluent);
            return tl.value_at_tick(fi, t) == a->value &&
                   tl.became_at_tick(fi, t) <= t - n;
        }
        for (Minute j = t - n; j <= t; j += tl.granularity())
            if (!holds_tick(sub, tl, j)) return false;
        return true;
    };

    if (const auto* al = std::get_if<TfAtLeast>(&f.node))
        return window(al->n, *al->sub);
    const auto& ex = std::get<TfExactly>(f.node);
    return window(ex.n, *ex.sub) &&
           !window(ex.n + tl.granularity(), *ex.sub);
}

}  // namespace

bool holds(const TfPtr& formula, const Timeline& tl, Minute t) {
    if (!formula) return true;
    return holds_tick(*formula, tl, t);
}

// ---------------------------------------------------------------------------
// Minute-window evaluation
// ---------------------------------------------------------------------------

namespace {

bool holds_minute(const TemporalFormula& f, const HistoryView& view,
                  Minute m) {
    if (const auto* a = std::get_if<TfAtom>(&f.node))
        return view.value_at(a->fluent, m) == a->value;
    if (const auto* c = std::get_if<TfAnd>(&f.node)) {
        for (const auto& i : c->items)
            if (!holds_minute(*i, view, m)) return false;
        return true;
    }
    if (const auto* n = std::get_if<TfNot>(&f.node))
        return !holds_minute(*n->sub, view, m);

    auto window = [&](Minute n, const TemporalFormula& sub) {
        if (m < n) return false;
        if (const auto* a = std::get_if<TfAtom>(&sub.node))
            return view.value_at(a->fluent, m) == a->value &&
                   view.run_start(a->fluent, m) <= m - n;
        for (Minute j = m - n; j <= m; ++j)
            if (!holds_minute(sub, view, j)) return false;
        return true;
    };

    if (const auto* al = std::get_if<TfAtLeast>(&f.node))
        return window(al->n, *al->sub);
    const auto& ex = std::get<TfExactly>(f.node);
    return window(ex.n, *ex.sub) && !window(ex.n + 1, *ex.sub);
}

}  // namespace

bool holds_at(const TfPtr& formula, const HistoryView& view, Minute minute) {
    if (!formula) return true;
    return holds_minute(*formula, view, minute);
}

}  // namespace timecard
