#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "multichan/beliefs.hpp"
#include "multichan/core_model.hpp"
#include "multichan/error.hpp"
#include "multichan/instance.hpp"
#include "multichan/rational.hpp"

namespace multichan {

/// One posterior label per receiver.
using Profile = std::vector<PosteriorPoint>;

/// For every state, a distribution over label profiles. Profiles are sorted and
/// distinct; conditional[s][p] is the probability of profiles[p] in state s.
struct SignalingTable {
    std::vector<Profile> profiles;
    std::vector<std::vector<Rational>> conditional;

    [[nodiscard]] std::size_t receivers() const { return profiles.empty() ? 0 : profiles.front().size(); }
    [[nodiscard]] std::size_t states() const { return conditional.size(); }

    /// Builds the canonical table; profiles with zero mass in every state are dropped.
    static SignalingTable from_map(std::size_t states, const std::map<Profile, std::vector<Rational>>& rows)
    {
        SignalingTable out;
        out.conditional.assign(states, {});
        for (const auto& [profile, per_state] : rows) {
            if (per_state.size() != states) {
                fail(ErrorCode::StateSpaceMismatch, "profile row has " + std::to_string(per_state.size()) +
                                                        " entries for " + std::to_string(states) + " states");
            }
            bool any = false;
            for (const auto& v : per_state) {
                any = any || !v.is_zero();
            }
            if (!any) {
                continue;
            }
            out.profiles.push_back(profile);
            for (std::size_t s = 0; s < states; ++s) {
                out.conditional[s].push_back(per_state[s]);
            }
        }
        return out;
    }

    friend bool operator==(const SignalingTable&, const SignalingTable&) = default;
};

inline SignalingTable no_revelation_table(const Prior& prior, std::size_t receivers)
{
    std::map<Profile, std::vector<Rational>> rows;
    rows[Profile(receivers, prior.point())] = std::vector<Rational>(prior.size(), Rational(1));
    return SignalingTable::from_map(prior.size(), rows);
}

/// Joint law of (state, profile index), positive entries only.
inline std::map<std::pair<std::size_t, std::size_t>, Rational> joint_law(const SignalingTable& t, const Prior& prior)
{
    std::map<std::pair<std::size_t, std::size_t>, Rational> out;
    for (std::size_t s = 0; s < t.states(); ++s) {
        for (std::size_t p = 0; p < t.profiles.size(); ++p) {
            if (!t.conditional[s][p].is_zero()) {
                out[{s, p}] = prior[s] * t.conditional[s][p];
            }
        }
    }
    return out;
}

/// Every invariant violation of the table, as readable strings; empty if valid.
inline std::vector<std::string> table_violations(const SignalingTable& t, const Prior& prior)
{
    std::vector<std::string> out;
    if (t.states() != prior.size()) {
        out.push_back("table covers " + std::to_string(t.states()) + " states, prior " +
                      std::to_string(prior.size()));
        return out;
    }
    for (std::size_t p = 0; p < t.profiles.size(); ++p) {
        if (t.profiles[p].size() != t.receivers()) {
            out.push_back("profile " + std::to_string(p + 1) + " has the wrong receiver count");
            return out;
        }
        for (const auto& label : t.profiles[p]) {
            if (label.size() != prior.size()) {
                out.push_back("label " + label.str() + " has the wrong dimension");
                return out;
            }
        }
        if (p > 0 && !(t.profiles[p - 1] < t.profiles[p])) {
            out.push_back("profiles are not sorted and distinct");
        }
    }
    for (std::size_t s = 0; s < t.states(); ++s) {
        if (t.conditional[s].size() != t.profiles.size()) {
            out.push_back("state " + std::to_string(s + 1) + " row has the wrong length");
            return out;
        }
        Rational total;
        for (const auto& v : t.conditional[s]) {
            if (v.sign() < 0) {
                out.push_back("negative probability in state " + std::to_string(s + 1));
            }
            total += v;
        }
        if (total != Rational(1)) {
            out.push_back("state " + std::to_string(s + 1) + " distribution sums to " + total.str());
        }
    }
    // posterior given one's own label must equal the label
    for (std::size_t i = 0; i < t.receivers(); ++i) {
        std::map<PosteriorPoint, std::vector<Rational>> mass;
        for (std::size_t p = 0; p < t.profiles.size(); ++p) {
            auto& row = mass[t.profiles[p][i]];
            row.resize(prior.size());
            for (std::size_t s = 0; s < prior.size(); ++s) {
                row[s] += prior[s] * t.conditional[s][p];
            }
        }
        for (const auto& [label, row] : mass) {
            Rational total;
            for (const auto& v : row) {
                total += v;
            }
            if (total.is_zero()) {
                continue;
            }
            for (std::size_t s = 0; s < prior.size(); ++s) {
                if (row[s] / total != label[s]) {
                    out.push_back("receiver " + std::to_string(i + 1) + " posterior given label " + label.str() +
                                  " differs in state " + std::to_string(s + 1));
                    break;
                }
            }
        }
    }
    return out;
}

inline void validate_table(const SignalingTable& t, const Prior& prior)
{
    const auto v = table_violations(t, prior);
    if (!v.empty()) {
        fail(ErrorCode::InvariantViolation, v.front());
    }
}

/// Distribution of receiver i's label under the table.
inline BeliefDistribution label_marginal(const SignalingTable& t, const Prior& prior, std::size_t receiver)
{
    std::vector<PosteriorPoint> support;
    std::vector<Rational> mass;
    for (std::size_t p = 0; p < t.profiles.size(); ++p) {
        Rational m;
        for (std::size_t s = 0; s < t.states(); ++s) {
            m += prior[s] * t.conditional[s][p];
        }
        support.push_back(t.profiles[p].at(receiver));
        mass.push_back(std::move(m));
    }
    return BeliefDistribution(support, mass);
}

/// Table over the labels of `subset` only (marginalizing the others).
inline SignalingTable restrict_table(const SignalingTable& t, const std::vector<std::size_t>& subset)
{
    std::map<Profile, std::vector<Rational>> rows;
    for (std::size_t p = 0; p < t.profiles.size(); ++p) {
        Profile sub;
        for (std::size_t i : subset) {
            sub.push_back(t.profiles[p].at(i));
        }
        auto& row = rows[sub];
        row.resize(t.states());
        for (std::size_t s = 0; s < t.states(); ++s) {
            row[s] += t.conditional[s][p];
        }
    }
    return SignalingTable::from_map(t.states(), rows);
}

/// Exact expected sender utility of the table.
inline Rational evaluate_table(const SignalingTable& t, const PersuasionInstance& instance)
{
    if (t.states() != instance.prior.size()) {
        fail(ErrorCode::StateSpaceMismatch, "table and instance differ in state count");
    }
    if (!t.profiles.empty() && t.receivers() != instance.structure.receivers()) {
        fail(ErrorCode::ReceiverCountMismatch, "table and instance differ in receiver count");
    }
    Rational out;
    for (std::size_t p = 0; p < t.profiles.size(); ++p) {
        Rational weight;
        for (std::size_t s = 0; s < t.states(); ++s) {
            weight += instance.prior[s] * t.conditional[s][p];
        }
        if (!weight.is_zero()) {
            out += weight * instance.sender_value(t.profiles[p]);
        }
    }
    return out;
}

} // namespace multichan
