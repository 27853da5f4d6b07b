#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "multichan/core_model.hpp"
#include "multichan/error.hpp"
#include "multichan/rational.hpp"
#include "multichan/utility.hpp"

namespace multichan {

using SenderUtility = std::variant<UtilitySpec, SupermajorityUtility>;

struct PersuasionInstance {
    StateSpace states;
    Prior prior;
    CommunicationStructure structure;
    SenderUtility utilities;
    std::optional<Rational> epsilon;

    [[nodiscard]] bool is_additive() const { return std::holds_alternative<UtilitySpec>(utilities); }
    [[nodiscard]] const UtilitySpec& additive() const
    {
        if (!is_additive()) {
            fail(ErrorCode::InvalidInput, "instance has a supermajority utility, an additive one is required");
        }
        return std::get<UtilitySpec>(utilities);
    }

    /// Sender utility of a full label profile (one posterior per receiver).
    [[nodiscard]] Rational sender_value(const std::vector<PosteriorPoint>& profile) const
    {
        if (const auto* spec = std::get_if<UtilitySpec>(&utilities)) {
            Rational out;
            for (std::size_t i = 0; i < profile.size(); ++i) {
                out += evaluate(spec->receivers[i], profile[i]);
            }
            return out;
        }
        return std::get<SupermajorityUtility>(utilities).value(profile);
    }
};

/// Instance fields as read from a document, before any semantic check.
struct RawInstance {
    std::vector<std::string> states;
    std::vector<std::string> prior;
    std::vector<std::vector<int>> structure;
    SenderUtility utilities;
    std::optional<std::string> epsilon;
};

inline void check_epsilon(const Rational& eps)
{
    if (eps.sign() <= 0 || eps >= Rational(1)) {
        fail(ErrorCode::BadEpsilon, "epsilon " + eps.str() + " is outside (0,1)");
    }
}

inline void check_utilities(const SenderUtility& u, std::size_t receivers, std::size_t states)
{
    if (const auto* spec = std::get_if<UtilitySpec>(&u)) {
        if (spec->receivers.size() != receivers) {
            fail(ErrorCode::ReceiverCountMismatch, std::to_string(spec->receivers.size()) +
                                                       " receiver utilities for " + std::to_string(receivers) +
                                                       " receivers");
        }
        if (spec->declared == UtilityClass::Lipschitz && (!spec->lipschitz || spec->lipschitz->sign() < 0)) {
            fail(ErrorCode::InvalidInput, "Lipschitz class needs a nonnegative constant");
        }
        for (std::size_t i = 0; i < receivers; ++i) {
            check_dimensions(spec->receivers[i], states, i);
        }
        return;
    }
    const auto& sm = std::get<SupermajorityUtility>(u);
    if (sm.action_rules.size() != receivers) {
        fail(ErrorCode::ReceiverCountMismatch, std::to_string(sm.action_rules.size()) + " action rules for " +
                                                   std::to_string(receivers) + " receivers");
    }
    if (sm.weights.size() != sm.groups.size() || sm.thresholds.size() != sm.groups.size()) {
        fail(ErrorCode::InvalidInput, "groups, weights and thresholds differ in length");
    }
    std::set<std::size_t> seen;
    for (std::size_t l = 0; l < sm.groups.size(); ++l) {
        for (std::size_t i : sm.groups[l]) {
            if (i >= receivers || !seen.insert(i).second) {
                fail(ErrorCode::InvalidInput, "groups must partition the receivers");
            }
        }
        if (sm.weights[l].sign() < 0) {
            fail(ErrorCode::InvalidInput, "negative group weight " + sm.weights[l].str());
        }
        if (sm.thresholds[l] > sm.groups[l].size()) {
            fail(ErrorCode::InvalidInput, "group " + std::to_string(l + 1) + " threshold exceeds its size");
        }
    }
    if (seen.size() != receivers) {
        fail(ErrorCode::InvalidInput, "groups must partition the receivers");
    }
    for (std::size_t i = 0; i < receivers; ++i) {
        check_dimensions(sm.action_rules[i], states, i);
    }
}

inline PersuasionInstance validate_instance(const RawInstance& raw)
{
    PersuasionInstance out;
    out.states = StateSpace(raw.states);
    std::vector<Rational> prior;
    for (const auto& p : raw.prior) {
        prior.push_back(Rational::parse(p));
    }
    if (prior.size() != out.states.size()) {
        fail(ErrorCode::StateSpaceMismatch, std::to_string(prior.size()) + " prior entries for " +
                                                std::to_string(out.states.size()) + " states");
    }
    out.prior = Prior(std::move(prior));
    out.structure = CommunicationStructure(raw.structure);
    check_utilities(raw.utilities, out.structure.receivers(), out.states.size());
    out.utilities = raw.utilities;
    if (raw.epsilon) {
        const Rational eps = Rational::parse(*raw.epsilon);
        check_epsilon(eps);
        out.epsilon = eps;
    }
    return out;
}

} // namespace multichan
