#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "multichan/error.hpp"
#include "multichan/rational.hpp"

namespace multichan {

/// Ordered, finite set of state identifiers.
class StateSpace {
public:
    StateSpace() = default;

    explicit StateSpace(std::vector<std::string> states) : states_(std::move(states))
    {
        if (states_.empty()) {
            fail(ErrorCode::InvalidInput, "state space must contain at least one state");
        }
        std::set<std::string> seen;
        for (const auto& s : states_) {
            if (!seen.insert(s).second) {
                fail(ErrorCode::InvalidInput, "duplicate state identifier '" + s + "'");
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return states_; }
    [[nodiscard]] const std::string& name(std::size_t index) const { return states_.at(index); }

    [[nodiscard]] std::size_t index_of(const std::string& state) const
    {
        const auto it = std::find(states_.begin(), states_.end(), state);
        if (it == states_.end()) {
            fail(ErrorCode::InvalidInput, "unknown state '" + state + "'");
        }
        return static_cast<std::size_t>(it - states_.begin());
    }

    friend bool operator==(const StateSpace&, const StateSpace&) = default;

private:
    std::vector<std::string> states_;
};

/// Point of the probability simplex over the states (indexed like StateSpace).
/// Used both for priors and for posterior labels.
class PosteriorPoint {
public:
    PosteriorPoint() = default;

    explicit PosteriorPoint(std::vector<Rational> probabilities) : probabilities_(std::move(probabilities))
    {
        Rational total;
        for (const auto& p : probabilities_) {
            if (p.sign() < 0) {
                fail(ErrorCode::InvalidInput, "negative probability " + p.str() + " in posterior point");
            }
            total += p;
        }
        if (probabilities_.empty() || total != Rational(1)) {
            fail(ErrorCode::InvalidInput, "posterior point does not sum to 1");
        }
    }

    /// Degenerate belief on one state.
    static PosteriorPoint vertex(std::size_t states, std::size_t at)
    {
        std::vector<Rational> p(states);
        p.at(at) = Rational(1);
        return PosteriorPoint(std::move(p));
    }

    [[nodiscard]] std::size_t size() const noexcept { return probabilities_.size(); }
    [[nodiscard]] const Rational& operator[](std::size_t i) const { return probabilities_[i]; }
    [[nodiscard]] const std::vector<Rational>& values() const noexcept { return probabilities_; }

    [[nodiscard]] std::string str() const
    {
        std::string out = "(";
        for (std::size_t i = 0; i < probabilities_.size(); ++i) {
            out += (i ? ", " : "") + probabilities_[i].str();
        }
        return out + ")";
    }

    friend bool operator==(const PosteriorPoint&, const PosteriorPoint&) = default;
    friend auto operator<=>(const PosteriorPoint& a, const PosteriorPoint& b)
    {
        return a.probabilities_ <=> b.probabilities_;
    }
    friend std::ostream& operator<<(std::ostream& os, const PosteriorPoint& p) { return os << p.str(); }

private:
    std::vector<Rational> probabilities_;
};

/// Common prior. Every state has strictly positive mass; masses sum to 1 exactly.
class Prior {
public:
    Prior() = default;

    explicit Prior(std::vector<Rational> probabilities)
    {
        if (probabilities.empty()) {
            fail(ErrorCode::InvalidInput, "prior must cover at least one state");
        }
        Rational total;
        for (std::size_t i = 0; i < probabilities.size(); ++i) {
            if (probabilities[i].sign() <= 0) {
                fail(ErrorCode::NonPositivePrior,
                     "prior entry " + std::to_string(i + 1) + " is " + probabilities[i].str());
            }
            total += probabilities[i];
        }
        if (total != Rational(1)) {
            fail(ErrorCode::PriorNotNormalized, "prior sums to " + total.str());
        }
        point_ = PosteriorPoint(std::move(probabilities));
    }

    [[nodiscard]] std::size_t size() const noexcept { return point_.size(); }
    [[nodiscard]] const Rational& operator[](std::size_t i) const { return point_[i]; }
    [[nodiscard]] const PosteriorPoint& point() const noexcept { return point_; }

    friend bool operator==(const Prior&, const Prior&) = default;

private:
    PosteriorPoint point_;
};

/// k x n binary observation matrix: receiver i observes channel j iff observes(i, j).
/// Indices are 0-based in the API and 1-based in every external format.
class CommunicationStructure {
public:
    CommunicationStructure() = default;

    explicit CommunicationStructure(std::vector<std::vector<int>> rows)
    {
        if (rows.empty()) {
            fail(ErrorCode::MatrixShapeMismatch, "structure needs at least one receiver");
        }
        channels_ = rows.front().size();
        if (channels_ == 0) {
            fail(ErrorCode::MatrixShapeMismatch, "structure needs at least one channel");
        }
        rows_.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != channels_) {
                fail(ErrorCode::MatrixShapeMismatch, "row " + std::to_string(i + 1) + " has " +
                                                         std::to_string(rows[i].size()) + " entries, expected " +
                                                         std::to_string(channels_));
            }
            std::vector<bool> row(channels_);
            for (std::size_t j = 0; j < channels_; ++j) {
                if (rows[i][j] != 0 && rows[i][j] != 1) {
                    fail(ErrorCode::MatrixShapeMismatch, "entry (" + std::to_string(i + 1) + "," +
                                                             std::to_string(j + 1) + ") is not binary");
                }
                row[j] = rows[i][j] == 1;
            }
            rows_.push_back(std::move(row));
        }
    }

    /// Identity structure: receiver i alone observes channel i.
    static CommunicationStructure private_channels(std::size_t k)
    {
        std::vector<std::vector<int>> rows(k, std::vector<int>(k, 0));
        for (std::size_t i = 0; i < k; ++i) {
            rows[i][i] = 1;
        }
        return CommunicationStructure(std::move(rows));
    }

    [[nodiscard]] std::size_t receivers() const noexcept { return rows_.size(); }
    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
    [[nodiscard]] bool observes(std::size_t receiver, std::size_t channel) const
    {
        return rows_.at(receiver).at(channel);
    }
    [[nodiscard]] const std::vector<bool>& row(std::size_t receiver) const { return rows_.at(receiver); }

    /// Channels observed by a receiver, ascending.
    [[nodiscard]] std::vector<std::size_t> observed(std::size_t receiver) const
    {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < channels_; ++j) {
            if (rows_.at(receiver)[j]) {
                out.push_back(j);
            }
        }
        return out;
    }

    /// Receivers observing a channel, ascending.
    [[nodiscard]] std::vector<std::size_t> observers(std::size_t channel) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].at(channel)) {
                out.push_back(i);
            }
        }
        return out;
    }

    [[nodiscard]] std::vector<std::vector<int>> to_matrix() const
    {
        std::vector<std::vector<int>> out;
        for (const auto& r : rows_) {
            out.emplace_back(r.begin(), r.end());
        }
        return out;
    }

    friend bool operator==(const CommunicationStructure&, const CommunicationStructure&) = default;

private:
    std::vector<std::vector<bool>> rows_;
    std::size_t channels_ = 0;
};

struct MergedStructure {
    CommunicationStructure structure;
    /// representative[i] = row of `structure` standing for original receiver i.
    std::vector<std::size_t> representative;
    /// members[c] = original receivers collapsed into merged row c, ascending.
    std::vector<std::vector<std::size_t>> members;
};

/// Collapses receivers with identical rows. Merged rows keep the order of first
/// appearance, so a structure without duplicates maps to itself.
inline MergedStructure merge_duplicate_receivers(const CommunicationStructure& m)
{
    MergedStructure out;
    std::map<std::vector<bool>, std::size_t> seen;
    std::vector<std::vector<int>> rows;
    for (std::size_t i = 0; i < m.receivers(); ++i) {
        const auto [it, inserted] = seen.emplace(m.row(i), rows.size());
        if (inserted) {
            rows.emplace_back(m.row(i).begin(), m.row(i).end());
            out.members.emplace_back();
        }
        out.representative.push_back(it->second);
        out.members[it->second].push_back(i);
    }
    out.structure = CommunicationStructure(std::move(rows));
    return out;
}

} // namespace multichan
