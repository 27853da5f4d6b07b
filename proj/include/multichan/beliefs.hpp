#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "multichan/core_model.hpp"
#include "multichan/error.hpp"
#include "multichan/lp_exact.hpp"
#include "multichan/rational.hpp"

namespace multichan {

/// Finite-support distribution over posterior points. Canonical form: support
/// sorted and distinct, zero-mass points dropped, masses summing to exactly 1.
class BeliefDistribution {
public:
    BeliefDistribution() = default;

    BeliefDistribution(const std::vector<PosteriorPoint>& support, const std::vector<Rational>& mass)
    {
        if (support.size() != mass.size()) {
            fail(ErrorCode::InvalidInput, "support and mass lists differ in length");
        }
        std::map<PosteriorPoint, Rational> merged;
        Rational total;
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (mass[i].sign() < 0) {
                fail(ErrorCode::InvalidInput, "negative mass " + mass[i].str());
            }
            if (!support.empty() && support[i].size() != support.front().size()) {
                fail(ErrorCode::StateSpaceMismatch, "support points over different state spaces");
            }
            merged[support[i]] += mass[i];
            total += mass[i];
        }
        if (total != Rational(1)) {
            fail(ErrorCode::InvalidInput, "masses sum to " + total.str());
        }
        for (auto& [point, m] : merged) {
            if (!m.is_zero()) {
                support_.push_back(point);
                mass_.push_back(std::move(m));
            }
        }
    }

    static BeliefDistribution point_mass(const PosteriorPoint& p) { return BeliefDistribution({p}, {Rational(1)}); }

    [[nodiscard]] std::size_t size() const noexcept { return support_.size(); }
    [[nodiscard]] std::size_t states() const { return support_.empty() ? 0 : support_.front().size(); }
    [[nodiscard]] const std::vector<PosteriorPoint>& support() const noexcept { return support_; }
    [[nodiscard]] const std::vector<Rational>& mass() const noexcept { return mass_; }

    [[nodiscard]] std::vector<Rational> mean() const
    {
        std::vector<Rational> out(states());
        for (std::size_t i = 0; i < support_.size(); ++i) {
            for (std::size_t s = 0; s < out.size(); ++s) {
                out[s] += mass_[i] * support_[i][s];
            }
        }
        return out;
    }

    friend bool operator==(const BeliefDistribution&, const BeliefDistribution&) = default;

private:
    std::vector<PosteriorPoint> support_;
    std::vector<Rational> mass_;
};

/// Witness that `source` is a mean-preserving spread of `target`: flow[(a, b)]
/// moves mass from target point b out to source point a.
struct Coupling {
    BeliefDistribution source;
    BeliefDistribution target;
    std::map<std::pair<std::size_t, std::size_t>, Rational> flow;

    [[nodiscard]] Rational at(std::size_t source_index, std::size_t target_index) const
    {
        const auto it = flow.find({source_index, target_index});
        return it == flow.end() ? Rational() : it->second;
    }
};

/// Exact check of the Coupling invariants: nonnegative flows, both marginals,
/// and every target point equal to the flow-weighted barycenter of its sources.
inline bool is_valid_coupling(const Coupling& c)
{
    const auto& src = c.source;
    const auto& tgt = c.target;
    std::vector<Rational> row(src.size());
    std::vector<Rational> col(tgt.size());
    std::vector<std::vector<Rational>> bary(tgt.size(), std::vector<Rational>(tgt.states()));
    for (const auto& [key, f] : c.flow) {
        const auto [a, b] = key;
        if (f.sign() < 0 || a >= src.size() || b >= tgt.size()) {
            return false;
        }
        row[a] += f;
        col[b] += f;
        for (std::size_t s = 0; s < tgt.states(); ++s) {
            bary[b][s] += f * src.support()[a][s];
        }
    }
    for (std::size_t a = 0; a < src.size(); ++a) {
        if (row[a] != src.mass()[a]) {
            return false;
        }
    }
    for (std::size_t b = 0; b < tgt.size(); ++b) {
        if (col[b] != tgt.mass()[b]) {
            return false;
        }
        for (std::size_t s = 0; s < tgt.states(); ++s) {
            if (bary[b][s] != tgt.mass()[b] * tgt.support()[b][s]) {
                return false;
            }
        }
    }
    return true;
}

inline bool is_bayes_plausible(const BeliefDistribution& p, const Prior& prior)
{
    if (p.states() != prior.size()) {
        fail(ErrorCode::StateSpaceMismatch, "distribution over " + std::to_string(p.states()) +
                                                " states, prior over " + std::to_string(prior.size()));
    }
    return p.mean() == prior.point().values();
}

/// Decides whether `spread` is a mean-preserving spread of `coarse` by an exact
/// feasibility LP over the transport polytope with barycenter rows. Returns the
/// witnessing coupling, or nullopt when infeasible.
inline std::optional<Coupling> mps_coupling(const BeliefDistribution& spread, const BeliefDistribution& coarse)
{
    if (spread.states() != coarse.states()) {
        fail(ErrorCode::StateSpaceMismatch, "distributions over different state spaces");
    }
    const std::size_t ns = spread.size();
    const std::size_t nc = coarse.size();
    const std::size_t states = spread.states();
    LinearProgram lp(ns * nc);
    auto var = [nc](std::size_t a, std::size_t b) { return a * nc + b; };
    for (std::size_t a = 0; a < ns; ++a) {
        std::vector<Term> terms;
        for (std::size_t b = 0; b < nc; ++b) {
            terms.push_back({var(a, b), Rational(1)});
        }
        lp.add_constraint(std::move(terms), Relation::Equal, spread.mass()[a]);
    }
    for (std::size_t b = 0; b < nc; ++b) {
        std::vector<Term> terms;
        for (std::size_t a = 0; a < ns; ++a) {
            terms.push_back({var(a, b), Rational(1)});
        }
        lp.add_constraint(std::move(terms), Relation::Equal, coarse.mass()[b]);
        for (std::size_t s = 0; s < states; ++s) {
            std::vector<Term> bary;
            for (std::size_t a = 0; a < ns; ++a) {
                if (!spread.support()[a][s].is_zero()) {
                    bary.push_back({var(a, b), spread.support()[a][s]});
                }
            }
            lp.add_constraint(std::move(bary), Relation::Equal, coarse.mass()[b] * coarse.support()[b][s]);
        }
    }
    const auto solution = solve(lp);
    if (solution.status != LPStatus::Optimal) {
        return std::nullopt;
    }
    Coupling out{spread, coarse, {}};
    for (std::size_t a = 0; a < ns; ++a) {
        for (std::size_t b = 0; b < nc; ++b) {
            if (!solution.assignment[var(a, b)].is_zero()) {
                out.flow[{a, b}] = solution.assignment[var(a, b)];
            }
        }
    }
    return out;
}

/// Value at the prior of the concave envelope of a tabulated utility: the best
/// expected utility over Bayes-plausible distributions supported on the table's
/// points. Solved as a small exact LP.
inline Rational concavify_single(const std::map<PosteriorPoint, Rational>& utility, const Prior& prior)
{
    if (utility.empty()) {
        fail(ErrorCode::PriorOutsideHull, "empty utility table");
    }
    LinearProgram lp;
    std::vector<const PosteriorPoint*> points;
    for (const auto& [point, value] : utility) {
        if (point.size() != prior.size()) {
            fail(ErrorCode::StateSpaceMismatch, "utility point " + point.str() + " has wrong dimension");
        }
        lp.add_variable({}, value);
        points.push_back(&point);
    }
    for (std::size_t s = 0; s < prior.size(); ++s) {
        std::vector<Term> terms;
        for (std::size_t w = 0; w < points.size(); ++w) {
            if (!(*points[w])[s].is_zero()) {
                terms.push_back({w, (*points[w])[s]});
            }
        }
        lp.add_constraint(std::move(terms), Relation::Equal, prior[s]);
    }
    std::vector<Term> total;
    for (std::size_t w = 0; w < points.size(); ++w) {
        total.push_back({w, Rational(1)});
    }
    lp.add_constraint(std::move(total), Relation::Equal, Rational(1));
    const auto solution = solve(lp);
    if (solution.status != LPStatus::Optimal) {
        fail(ErrorCode::PriorOutsideHull, "prior " + prior.point().str() + " is outside the hull of the grid");
    }
    return solution.objective;
}

} // namespace multichan
