#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "multichan/core_model.hpp"
#include "multichan/dominance.hpp"
#include "multichan/error.hpp"
#include "multichan/instance.hpp"
#include "multichan/rational.hpp"
#include "multichan/secret_share.hpp"
#include "multichan/signaling_table.hpp"

namespace multichan {

/// Minimum b-union input. Set elements are 1-based members of {1, ..., w}.
struct BUnionInstance {
    std::size_t w = 0;
    std::vector<std::vector<std::size_t>> sets;
    std::size_t b = 0;

    [[nodiscard]] std::size_t t() const noexcept { return sets.size(); }
    friend bool operator==(const BUnionInstance&, const BUnionInstance&) = default;
};

/// b = 0 is accepted (the degenerate budget); everything else as stated.
inline void validate_bunion(const BUnionInstance& inst)
{
    if (inst.w == 0) {
        fail(ErrorCode::InvalidInput, "universe must be nonempty");
    }
    if (inst.sets.empty()) {
        fail(ErrorCode::InvalidInput, "at least one set is required");
    }
    for (std::size_t j = 0; j < inst.sets.size(); ++j) {
        const auto& q = inst.sets[j];
        if (q.empty()) {
            fail(ErrorCode::InvalidInput, "set " + std::to_string(j + 1) + " is empty");
        }
        std::set<std::size_t> seen;
        for (std::size_t e : q) {
            if (e < 1 || e > inst.w) {
                fail(ErrorCode::InvalidInput, "set " + std::to_string(j + 1) + " has element " + std::to_string(e) +
                                                  " outside 1.." + std::to_string(inst.w));
            }
            if (!seen.insert(e).second) {
                fail(ErrorCode::InvalidInput, "set " + std::to_string(j + 1) + " repeats element " +
                                                  std::to_string(e));
            }
        }
    }
    if (inst.b > inst.sets.size()) {
        fail(ErrorCode::InvalidInput, "budget " + std::to_string(inst.b) + " exceeds the " +
                                          std::to_string(inst.sets.size()) + " sets");
    }
}

/// Union of the chosen sets (0-based set indices), as 1-based elements.
inline std::set<std::size_t> union_of(const BUnionInstance& inst, const std::vector<std::size_t>& chosen)
{
    std::set<std::size_t> out;
    for (std::size_t j : chosen) {
        out.insert(inst.sets.at(j).begin(), inst.sets.at(j).end());
    }
    return out;
}

struct BUnionResult {
    std::size_t h = 0;
    /// 0-based set indices, ascending; the lexicographically first optimum.
    std::vector<std::size_t> witness;
};

inline BUnionResult min_b_union(const BUnionInstance& inst, unsigned long long budget = 10'000'000ULL)
{
    validate_bunion(inst);
    const auto t = static_cast<unsigned>(inst.t());
    const auto b = static_cast<unsigned>(inst.b);
    if (binomial(t, b) > budget) {
        fail(ErrorCode::BudgetExceeded, "binom(" + std::to_string(t) + ", " + std::to_string(b) + ") = " +
                                            std::to_string(binomial(t, b)) + " exceeds the budget " +
                                            std::to_string(budget));
    }
    // selector with b leading ones walks subsets in lexicographic order
    std::vector<bool> pick(t, false);
    std::fill(pick.begin(), pick.begin() + b, true);
    std::optional<BUnionResult> best;
    do {
        std::vector<std::size_t> chosen;
        for (std::size_t j = 0; j < t; ++j) {
            if (pick[j]) {
                chosen.push_back(j);
            }
        }
        const std::size_t h = union_of(inst, chosen).size();
        if (!best || h < best->h) {
            best = BUnionResult{h, chosen};
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return *best;
}

/// Receiver index of R_{Q_j} (0-based j) and of universe receiver R_e (1-based e).
inline std::size_t set_receiver(const BUnionInstance&, std::size_t j) { return j; }
inline std::size_t element_receiver(const BUnionInstance& inst, std::size_t e) { return inst.t() + e - 1; }

/// Channel j is observed by R_{Q_j} and by every R_e with e in Q_j.
inline CommunicationStructure reduction_structure(const BUnionInstance& inst)
{
    std::vector<std::vector<int>> rows(inst.t() + inst.w, std::vector<int>(inst.t(), 0));
    for (std::size_t j = 0; j < inst.t(); ++j) {
        rows[set_receiver(inst, j)][j] = 1;
        for (std::size_t e : inst.sets[j]) {
            rows[element_receiver(inst, e)][j] = 1;
        }
    }
    return CommunicationStructure(std::move(rows));
}

/// Pairs (R_e, R_{Q_j}) with e in Q_j, 0-based receiver indices.
inline DominanceSet element_set_pairs(const BUnionInstance& inst)
{
    DominanceSet out;
    for (std::size_t j = 0; j < inst.t(); ++j) {
        for (std::size_t e : inst.sets[j]) {
            out.emplace(element_receiver(inst, e), set_receiver(inst, j));
        }
    }
    return out;
}

inline SupermajorityUtility reduction_utility(const BUnionInstance& inst)
{
    SupermajorityUtility u;
    u.action_rules.resize(inst.t() + inst.w);
    for (std::size_t e = 1; e <= inst.w; ++e) {
        const std::size_t r = element_receiver(inst, e);
        u.groups.push_back({r});
        u.weights.emplace_back(1);
        u.thresholds.push_back(1);
        // acts unless the posterior on state 1 exceeds 9/10
        u.action_rules[r] = ThresholdUtility{1, Rational(9, 10), true, Rational(0), Rational(1)};
    }
    std::vector<std::size_t> q_group;
    for (std::size_t j = 0; j < inst.t(); ++j) {
        q_group.push_back(set_receiver(inst, j));
        u.action_rules[set_receiver(inst, j)] = ThresholdUtility{1, Rational(1), false, Rational(1), Rational(0)};
    }
    u.groups.push_back(q_group);
    u.weights.emplace_back(static_cast<long>(4 * inst.w));
    u.thresholds.push_back(inst.b);
    return u;
}

/// State revealed on the chosen channels, nothing elsewhere.
inline SignalingTable revealing_table(const BUnionInstance& inst, const std::vector<std::size_t>& chosen)
{
    const std::size_t k = inst.t() + inst.w;
    const PosteriorPoint half({Rational(1, 2), Rational(1, 2)});
    const auto told = union_of(inst, chosen);
    std::map<Profile, std::vector<Rational>> rows;
    for (std::size_t st = 0; st < 2; ++st) {
        Profile p(k, half);
        for (std::size_t j : chosen) {
            p[set_receiver(inst, j)] = PosteriorPoint::vertex(2, st);
        }
        for (std::size_t e : told) {
            p[element_receiver(inst, e)] = PosteriorPoint::vertex(2, st);
        }
        auto& row = rows[p];
        row.resize(2);
        row[st] += Rational(1);
    }
    return SignalingTable::from_map(2, rows);
}

struct ReductionOutput {
    BUnionInstance source;
    PersuasionInstance instance;
    std::size_t h = 0;
    std::vector<std::size_t> witness;
    /// (5w - h) / 2
    Rational closed_form;
    SignalingTable witness_table;
};

inline Rational reduction_closed_form(const BUnionInstance& inst, std::size_t h)
{
    return Rational(static_cast<long>(5 * inst.w) - static_cast<long>(h), 2);
}

inline ReductionOutput build_reduction(const BUnionInstance& inst, unsigned long long budget = 10'000'000ULL)
{
    const auto best = min_b_union(inst, budget);
    ReductionOutput out;
    out.source = inst;
    out.h = best.h;
    out.witness = best.witness;
    out.closed_form = reduction_closed_form(inst, best.h);
    out.instance.states = StateSpace(std::vector<std::string>{"0", "1"});
    out.instance.prior = Prior({Rational(1, 2), Rational(1, 2)});
    out.instance.structure = reduction_structure(inst);
    out.instance.utilities = reduction_utility(inst);
    out.witness_table = revealing_table(inst, best.witness);
    return out;
}

struct ReductionReport {
    bool table_valid = false;
    bool set_receivers_ok = false;
    bool union_ok = false;
    Rational value;
    Rational closed_form;
    bool value_matches = false;
    std::vector<std::string> failures;

    [[nodiscard]] bool passed() const { return failures.empty(); }
};

inline ReductionReport verify_reduction(const ReductionOutput& out)
{
    ReductionReport r;
    const auto& inst = out.source;
    const auto& t = out.witness_table;
    const auto& prior = out.instance.prior;

    auto problems = table_violations(t, prior);
    if (problems.empty()) {
        problems = realizability_violations(t, prior, out.instance.structure);
    }
    r.table_valid = problems.empty();
    if (!r.table_valid) {
        r.failures.push_back("witness table invalid under the structure: " + problems.front());
        return r;
    }

    const auto one = PosteriorPoint::vertex(2, 1);
    std::set<std::size_t> certain;
    std::set<std::size_t> convinced;
    for (std::size_t p = 0; p < t.profiles.size(); ++p) {
        for (std::size_t j = 0; j < inst.t(); ++j) {
            if (!t.conditional[1][p].is_zero() && t.profiles[p][set_receiver(inst, j)] == one) {
                certain.insert(j);
            }
        }
        for (std::size_t e = 1; e <= inst.w; ++e) {
            if (t.profiles[p][element_receiver(inst, e)][1] > Rational(9, 10)) {
                convinced.insert(e);
            }
        }
    }
    std::set<std::size_t> witness(out.witness.begin(), out.witness.end());
    r.set_receivers_ok = certain == witness && witness.size() == inst.b;
    if (!r.set_receivers_ok) {
        r.failures.push_back("set receivers certain of state 1 are not exactly the " + std::to_string(inst.b) +
                             " witness receivers");
    }
    r.union_ok = convinced == union_of(inst, out.witness);
    if (!r.union_ok) {
        r.failures.push_back("element receivers above 9/10 differ from the witness union");
    }
    r.value = evaluate_table(t, out.instance);
    r.closed_form = out.closed_form;
    r.value_matches = r.value == r.closed_form;
    if (!r.value_matches) {
        r.failures.push_back("witness value " + r.value.str() + " differs from (5w - h)/2 = " + r.closed_form.str());
    }
    return r;
}

} // namespace multichan
