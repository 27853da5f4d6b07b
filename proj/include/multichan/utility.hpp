#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "multichan/core_model.hpp"
#include "multichan/error.hpp"
#include "multichan/rational.hpp"

namespace multichan {

/// Simplex slice of the grid {l/d}^|states|: every point whose coordinates are
/// multiples of 1/d summing to 1, in ascending lexicographic order.
class PosteriorGrid {
public:
    PosteriorGrid() = default;

    PosteriorGrid(std::size_t states, long d) : states_(states), d_(d)
    {
        if (states == 0 || d < 1) {
            fail(ErrorCode::InvalidInput, "grid needs >= 1 state and step 1/d with d >= 1");
        }
        std::vector<long> parts(states, 0);
        enumerate(parts, 0, d);
        std::sort(points_.begin(), points_.end());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            index_.emplace(points_[i], i);
        }
    }

    [[nodiscard]] std::size_t states() const noexcept { return states_; }
    [[nodiscard]] long denominator() const noexcept { return d_; }
    [[nodiscard]] Rational step() const { return Rational(1, d_); }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] const std::vector<PosteriorPoint>& points() const noexcept { return points_; }
    [[nodiscard]] const PosteriorPoint& operator[](std::size_t i) const { return points_[i]; }

    [[nodiscard]] std::optional<std::size_t> find(const PosteriorPoint& p) const
    {
        const auto it = index_.find(p);
        return it == index_.end() ? std::nullopt : std::optional<std::size_t>(it->second);
    }

private:
    void enumerate(std::vector<long>& parts, std::size_t at, long left)
    {
        if (at + 1 == parts.size()) {
            parts[at] = left;
            std::vector<Rational> coords;
            for (long v : parts) {
                coords.emplace_back(v, d_);
            }
            points_.emplace_back(std::move(coords));
            return;
        }
        for (long v = 0; v <= left; ++v) {
            parts[at] = v;
            enumerate(parts, at + 1, left - v);
        }
    }

    std::size_t states_ = 0;
    long d_ = 1;
    std::vector<PosteriorPoint> points_;
    std::map<PosteriorPoint, std::size_t> index_;
};

/// Value table on explicit posterior points.
struct TableUtility {
    std::map<PosteriorPoint, Rational> values;
};

struct ConstantUtility {
    Rational value;
};

/// `above` when q[state] >= cutoff (> cutoff if strict), else `below`.
struct ThresholdUtility {
    std::size_t state = 0;
    Rational cutoff;
    bool strict = false;
    Rational above = Rational(1);
    Rational below = Rational(0);
};

using ReceiverUtility = std::variant<TableUtility, ConstantUtility, ThresholdUtility>;

/// u(q) for one receiver; tables must contain q.
inline Rational evaluate(const ReceiverUtility& u, const PosteriorPoint& q)
{
    if (const auto* t = std::get_if<TableUtility>(&u)) {
        const auto it = t->values.find(q);
        if (it == t->values.end()) {
            fail(ErrorCode::GridMismatch, "utility table has no entry for " + q.str());
        }
        return it->second;
    }
    if (const auto* c = std::get_if<ConstantUtility>(&u)) {
        return c->value;
    }
    const auto& th = std::get<ThresholdUtility>(u);
    const Rational& x = q[th.state];
    const bool hit = th.strict ? x > th.cutoff : x >= th.cutoff;
    return hit ? th.above : th.below;
}

/// Checks that a receiver utility fits a state count.
inline void check_dimensions(const ReceiverUtility& u, std::size_t states, std::size_t receiver)
{
    const std::string who = "utility of receiver " + std::to_string(receiver + 1);
    if (const auto* t = std::get_if<TableUtility>(&u)) {
        if (t->values.empty()) {
            fail(ErrorCode::InvalidInput, who + " has an empty table");
        }
        for (const auto& [point, value] : t->values) {
            if (point.size() != states) {
                fail(ErrorCode::StateSpaceMismatch, who + " has point " + point.str() + " of wrong dimension");
            }
        }
    } else if (const auto* th = std::get_if<ThresholdUtility>(&u)) {
        if (th->state >= states) {
            fail(ErrorCode::InvalidInput, who + " thresholds an unknown state");
        }
    }
}

enum class UtilityClass { PiecewiseConstant, Lipschitz };

/// Additive sender utility: sum over receivers of u^i at their own posterior.
struct UtilitySpec {
    UtilityClass declared = UtilityClass::PiecewiseConstant;
    std::optional<Rational> lipschitz;
    std::vector<ReceiverUtility> receivers;
};

/// Sum over groups of weight * [at least `threshold` group members act]. A
/// receiver acts when its action rule evaluates to a nonzero value.
struct SupermajorityUtility {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<Rational> weights;
    std::vector<std::size_t> thresholds;
    std::vector<ReceiverUtility> action_rules;

    [[nodiscard]] Rational value(const std::vector<PosteriorPoint>& profile) const
    {
        Rational out;
        for (std::size_t l = 0; l < groups.size(); ++l) {
            std::size_t acting = 0;
            for (std::size_t i : groups[l]) {
                acting += !evaluate(action_rules[i], profile[i]).is_zero();
            }
            if (acting >= thresholds[l]) {
                out += weights[l];
            }
        }
        return out;
    }
};

} // namespace multichan
