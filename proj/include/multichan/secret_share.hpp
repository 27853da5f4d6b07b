#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
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
#include "multichan/signaling_table.hpp"

namespace multichan {

/// Injective coding of one receiver's labels into Z_q, in label order.
struct LabelAlphabet {
    long modulus = 2;
    std::map<PosteriorPoint, long> codes;

    static LabelAlphabet for_labels(const std::set<PosteriorPoint>& labels, long q)
    {
        if (q < 2 || static_cast<std::size_t>(q) < labels.size()) {
            fail(ErrorCode::AlphabetTooSmall,
                 "modulus " + std::to_string(q) + " cannot code " + std::to_string(labels.size()) + " labels");
        }
        LabelAlphabet out;
        out.modulus = q;
        long next = 0;
        for (const auto& l : labels) {
            out.codes.emplace(l, next++);
        }
        return out;
    }

    [[nodiscard]] long code(const PosteriorPoint& label) const
    {
        const auto it = codes.find(label);
        if (it == codes.end()) {
            fail(ErrorCode::InvalidInput, "label " + label.str() + " has no code");
        }
        return it->second;
    }

    friend bool operator==(const LabelAlphabet&, const LabelAlphabet&) = default;
};

/// One Z_q symbol: the code of `label_of`'s label (if set) plus the listed keys.
/// A slot without a label and with one key is that key's transmission.
struct Slot {
    std::optional<std::size_t> label_of;
    std::vector<std::size_t> keys;

    [[nodiscard]] bool is_key() const { return !label_of && keys.size() == 1; }
    friend bool operator==(const Slot&, const Slot&) = default;
};

/// Fixed slot layout per channel. Executions draw a profile from `source` given
/// the state and every key independently uniform on Z_q.
struct ChannelScheme {
    long modulus = 2;
    std::size_t keys = 0;
    std::vector<std::vector<Slot>> channels;
    /// alphabets[i] is set iff receiver i's label is transmitted.
    std::vector<std::optional<LabelAlphabet>> alphabets;
    /// Label law over all receivers; untransmitted receivers carry the prior.
    SignalingTable source;

    [[nodiscard]] std::size_t receivers() const { return alphabets.size(); }
    [[nodiscard]] bool encoded(std::size_t i) const { return alphabets.at(i).has_value(); }
    std::size_t new_key() { return keys++; }

    friend bool operator==(const ChannelScheme&, const ChannelScheme&) = default;
};

namespace detail {

inline std::optional<std::size_t> key_route(const CommunicationStructure& m, std::size_t reader, std::size_t avoid)
{
    for (std::size_t j = 0; j < m.channels(); ++j) {
        if (m.observes(reader, j) && !m.observes(avoid, j)) {
            return j;
        }
    }
    return std::nullopt;
}

inline PosteriorPoint normalize(const std::vector<Rational>& mass)
{
    Rational total;
    for (const auto& v : mass) {
        total += v;
    }
    std::vector<Rational> p;
    for (const auto& v : mass) {
        p.push_back(v / total);
    }
    return PosteriorPoint(std::move(p));
}

/// Payload for receiver i on its lowest channel, keyed once per co-observer
/// that does not dominate i; each key goes on the lowest channel i sees and
/// that co-observer does not.
inline void append_bundle(ChannelScheme& s, const CommunicationStructure& m, std::size_t i)
{
    const auto seen = m.observed(i);
    if (seen.empty()) {
        fail(ErrorCode::NoCarrierChannel, "receiver " + std::to_string(i + 1) + " observes no channel");
    }
    const std::size_t carrier = seen.front();
    Slot payload{i, {}};
    for (std::size_t z : m.observers(carrier)) {
        if (z == i || dominates(m, z, i)) {
            continue;
        }
        const auto route = key_route(m, i, z);
        if (!route) {
            fail(ErrorCode::NoKeyChannel, "no channel seen by receiver " + std::to_string(i + 1) +
                                              " and hidden from receiver " + std::to_string(z + 1));
        }
        const std::size_t key = s.new_key();
        payload.keys.push_back(key);
        s.channels[*route].push_back(Slot{std::nullopt, {key}});
    }
    s.channels[carrier].push_back(std::move(payload));
}

inline std::size_t distinct_labels(const SignalingTable& t, std::size_t i)
{
    std::set<PosteriorPoint> labels;
    for (const auto& p : t.profiles) {
        labels.insert(p.at(i));
    }
    return labels.size();
}

inline ChannelScheme empty_scheme(const CommunicationStructure& m, long q, const SignalingTable& source,
                                  const std::vector<std::size_t>& encoded)
{
    ChannelScheme s;
    s.modulus = q;
    s.channels.assign(m.channels(), {});
    s.alphabets.assign(m.receivers(), std::nullopt);
    s.source = source;
    for (std::size_t i : encoded) {
        std::set<PosteriorPoint> labels;
        for (const auto& p : source.profiles) {
            labels.insert(p.at(i));
        }
        s.alphabets[i] = LabelAlphabet::for_labels(labels, q);
    }
    return s;
}

inline long pick_modulus(const SignalingTable& t, const std::vector<std::size_t>& encoded, std::optional<long> q)
{
    std::size_t need = 2;
    for (std::size_t i : encoded) {
        need = std::max(need, distinct_labels(t, i));
    }
    if (!q) {
        return static_cast<long>(need);
    }
    if (*q < 2 || static_cast<std::size_t>(*q) < need) {
        fail(ErrorCode::AlphabetTooSmall,
             "modulus " + std::to_string(*q) + " is below the label count " + std::to_string(need));
    }
    return *q;
}

} // namespace detail

/// Table over k receivers that keeps the labels of `subset` and gives every
/// other receiver the prior. `table` lists either the subset's labels in order
/// or all k receivers.
inline SignalingTable private_subset_table(const SignalingTable& table, const Prior& prior, std::size_t k,
                                           const std::vector<std::size_t>& subset)
{
    const bool full = table.receivers() == k;
    if (!table.profiles.empty() && !full && table.receivers() != subset.size()) {
        fail(ErrorCode::ReceiverCountMismatch, "table has " + std::to_string(table.receivers()) +
                                                   " receivers, expected " + std::to_string(subset.size()) +
                                                   " or " + std::to_string(k));
    }
    std::map<Profile, std::vector<Rational>> rows;
    for (std::size_t p = 0; p < table.profiles.size(); ++p) {
        Profile out(k, prior.point());
        for (std::size_t n = 0; n < subset.size(); ++n) {
            out[subset[n]] = table.profiles[p].at(full ? subset[n] : n);
        }
        auto& row = rows[out];
        row.resize(table.states());
        for (std::size_t s = 0; s < table.states(); ++s) {
            row[s] += table.conditional[s][p];
        }
    }
    return SignalingTable::from_map(prior.size(), rows);
}

/// Realizes the labels of `subset` (none of which may be dominated) so that
/// every other receiver sees only uniform symbols.
inline ChannelScheme emulate_private_subset(const CommunicationStructure& m, std::vector<std::size_t> subset,
                                            const SignalingTable& table, const Prior& prior,
                                            std::optional<long> q = std::nullopt)
{
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
        fail(ErrorCode::InvalidInput, "subset lists a receiver twice");
    }
    for (std::size_t i : subset) {
        if (i >= m.receivers()) {
            fail(ErrorCode::InvalidInput, "receiver " + std::to_string(i + 1) + " is out of range");
        }
        for (std::size_t z = 0; z < m.receivers(); ++z) {
            if (z != i && dominates(m, z, i)) {
                fail(ErrorCode::DominatedTarget, "receiver " + std::to_string(i + 1) + " is dominated by receiver " +
                                                     std::to_string(z + 1));
            }
        }
        if (m.observed(i).empty()) {
            fail(ErrorCode::NoCarrierChannel, "receiver " + std::to_string(i + 1) + " observes no channel");
        }
    }
    validate_table(table, prior);
    const SignalingTable source = private_subset_table(table, prior, m.receivers(), subset);
    ChannelScheme s = detail::empty_scheme(m, detail::pick_modulus(source, subset, q), source, subset);
    for (std::size_t i : subset) {
        detail::append_bundle(s, m, i);
    }
    return s;
}

/// Re-encrypts, once per other co-observer, every foreign payload on channels
/// that i sees and none of the receivers i dominates sees. Each fresh key goes
/// on the lowest channel its co-observer sees and i does not.
inline ChannelScheme shield_receiver(const CommunicationStructure& m, std::size_t i, const ChannelScheme& base)
{
    if (base.channels.size() != m.channels() || base.receivers() != m.receivers()) {
        fail(ErrorCode::MatrixShapeMismatch, "scheme layout does not fit the structure");
    }
    const auto below = dominated_by(m, i);
    ChannelScheme out = base;
    for (std::size_t j : m.observed(i)) {
        const bool shared_below =
            std::any_of(below.begin(), below.end(), [&](std::size_t d) { return m.observes(d, j); });
        if (shared_below) {
            continue;
        }
        std::vector<Slot> rebuilt;
        for (const Slot& slot : base.channels[j]) {
            if (!slot.label_of || *slot.label_of == i) {
                rebuilt.push_back(slot);
                continue;
            }
            for (std::size_t z : m.observers(j)) {
                if (z == i) {
                    continue;
                }
                const auto route = detail::key_route(m, z, i);
                if (!route) {
                    fail(ErrorCode::NoKeyChannel, "no channel seen by receiver " + std::to_string(z + 1) +
                                                      " and hidden from receiver " + std::to_string(i + 1));
                }
                Slot copy = slot;
                const std::size_t key = out.new_key();
                copy.keys.push_back(key);
                out.channels[*route].push_back(Slot{std::nullopt, {key}});
                rebuilt.push_back(std::move(copy));
            }
        }
        out.channels[j] = std::move(rebuilt);
    }
    return out;
}

/// Every way the table violates "receiver i's label is its posterior even
/// after also learning the labels of the receivers it dominates under m".
inline std::vector<std::string> realizability_violations(const SignalingTable& t, const Prior& prior,
                                                         const CommunicationStructure& m)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < t.receivers(); ++i) {
        const auto below = dominated_by(m, i);
        std::map<Profile, std::vector<Rational>> mass;
        for (std::size_t p = 0; p < t.profiles.size(); ++p) {
            Profile key{t.profiles[p][i]};
            for (std::size_t d : below) {
                key.push_back(t.profiles[p][d]);
            }
            auto& row = mass[key];
            row.resize(prior.size());
            for (std::size_t s = 0; s < prior.size(); ++s) {
                row[s] += prior[s] * t.conditional[s][p];
            }
        }
        for (const auto& [key, row] : mass) {
            const bool any = std::any_of(row.begin(), row.end(), [](const Rational& v) { return !v.is_zero(); });
            if (any && detail::normalize(row) != key.front()) {
                out.push_back("receiver " + std::to_string(i + 1) + " label " + key.front().str() +
                              " is not its posterior given the labels it dominates");
                break;
            }
        }
    }
    return out;
}

/// Realizes under m2 a table realizable under m1, given that m2 is superior
/// (S_m1 contains S_m2). Receivers are peeled off in order: the lowest-index
/// receiver not strictly dominated among those left is added last, after the
/// rest is built and shielded from it.
inline ChannelScheme transport_scheme(const CommunicationStructure& m1, const CommunicationStructure& m2,
                                      const SignalingTable& table, const Prior& prior,
                                      std::optional<long> q = std::nullopt)
{
    if (!is_superior(m2, m1)) {
        fail(ErrorCode::SuperiorityViolated, "dominance set of the source structure does not contain the target's");
    }
    validate_table(table, prior);
    if (!table.profiles.empty() && table.receivers() != m2.receivers()) {
        fail(ErrorCode::ReceiverCountMismatch, "table has " + std::to_string(table.receivers()) + " receivers, " +
                                                   "structures have " + std::to_string(m2.receivers()));
    }
    if (const auto v = realizability_violations(table, prior, m1); !v.empty()) {
        fail(ErrorCode::InvariantViolation, "table is not realizable under the source structure: " + v.front());
    }
    std::vector<std::size_t> encoded;
    for (std::size_t i = 0; i < m2.receivers(); ++i) {
        const bool informative = std::any_of(table.profiles.begin(), table.profiles.end(),
                                             [&](const Profile& p) { return p[i] != prior.point(); });
        if (!informative) {
            continue;
        }
        if (m2.observed(i).empty()) {
            fail(ErrorCode::NoCarrierChannel, "receiver " + std::to_string(i + 1) + " observes no channel");
        }
        encoded.push_back(i);
    }
    ChannelScheme s = detail::empty_scheme(m2, detail::pick_modulus(table, encoded, q), table, encoded);

    std::vector<std::size_t> order;
    std::vector<std::size_t> left(m2.receivers());
    for (std::size_t i = 0; i < left.size(); ++i) {
        left[i] = i;
    }
    while (!left.empty()) {
        auto top = std::find_if(left.begin(), left.end(), [&](std::size_t i) {
            return std::none_of(left.begin(), left.end(),
                                [&](std::size_t z) { return z != i && dominates(m2, z, i) && !dominates(m2, i, z); });
        });
        order.push_back(*top);
        left.erase(top);
    }
    // order[0] is added last; build from the back of the peel order
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        s = shield_receiver(m2, *it, s);
        if (s.encoded(*it)) {
            detail::append_bundle(s, m2, *it);
        }
    }
    return s;
}

/// Moves the transmission of `key` to `channel`. Used to build broken schemes.
inline ChannelScheme reroute_key(const ChannelScheme& s, std::size_t key, std::size_t channel)
{
    ChannelScheme out = s;
    for (auto& slots : out.channels) {
        const auto it = std::find(slots.begin(), slots.end(), Slot{std::nullopt, {key}});
        if (it != slots.end()) {
            slots.erase(it);
            out.channels.at(channel).push_back(Slot{std::nullopt, {key}});
            return out;
        }
    }
    fail(ErrorCode::InvalidInput, "key " + std::to_string(key + 1) + " has no transmission slot");
}

struct ReceiverCheck {
    std::size_t receiver = 0;
    bool posterior_ok = true; // (a)
    bool leak_free = true;    // (b)
    std::string detail;
};

struct VerificationReport {
    std::vector<ReceiverCheck> receivers;
    bool joint_matches = false;
    std::string joint_detail;
    unsigned long long enumerated = 0;

    [[nodiscard]] bool passed() const
    {
        return joint_matches && std::all_of(receivers.begin(), receivers.end(),
                                            [](const ReceiverCheck& c) { return c.posterior_ok && c.leak_free; });
    }
};

namespace detail {

inline unsigned long long saturating_mul(unsigned long long a, unsigned long long b)
{
    if (a != 0 && b > std::numeric_limits<unsigned long long>::max() / a) {
        return std::numeric_limits<unsigned long long>::max();
    }
    return a * b;
}

inline unsigned long long saturating_add(unsigned long long a, unsigned long long b)
{
    return b > std::numeric_limits<unsigned long long>::max() - a ? std::numeric_limits<unsigned long long>::max()
                                                                   : a + b;
}

struct ReceiverLayout {
    std::vector<const Slot*> slots;
    std::vector<std::size_t> keys;
};

inline ReceiverLayout layout_for(const ChannelScheme& s, const CommunicationStructure& m, std::size_t r)
{
    ReceiverLayout out;
    std::set<std::size_t> keys;
    for (std::size_t j : m.observed(r)) {
        for (const Slot& slot : s.channels[j]) {
            out.slots.push_back(&slot);
            keys.insert(slot.keys.begin(), slot.keys.end());
        }
    }
    out.keys.assign(keys.begin(), keys.end());
    return out;
}

/// View counts of receiver r at profile p over all key values it can see.
inline std::map<std::vector<long>, unsigned long long> view_counts(const ChannelScheme& s, const ReceiverLayout& lay,
                                                                   const Profile& profile)
{
    const long q = s.modulus;
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t n = 0; n < lay.keys.size(); ++n) {
        pos[lay.keys[n]] = n;
    }
    std::vector<long> base;
    std::vector<std::vector<std::size_t>> slot_keys;
    for (const Slot* slot : lay.slots) {
        base.push_back(slot->label_of ? s.alphabets.at(*slot->label_of)->code(profile.at(*slot->label_of)) : 0);
        std::vector<std::size_t> ks;
        for (std::size_t k : slot->keys) {
            ks.push_back(pos.at(k));
        }
        slot_keys.push_back(std::move(ks));
    }
    std::map<std::vector<long>, unsigned long long> out;
    std::vector<long> value(lay.keys.size(), 0);
    std::vector<long> view(lay.slots.size());
    while (true) {
        for (std::size_t n = 0; n < view.size(); ++n) {
            long v = base[n];
            for (std::size_t k : slot_keys[n]) {
                v += value[k];
            }
            view[n] = v % q;
        }
        ++out[view];
        std::size_t d = 0;
        while (d < value.size() && ++value[d] == q) {
            value[d++] = 0;
        }
        if (d == value.size()) {
            break;
        }
    }
    return out;
}

} // namespace detail

/// Size of the enumeration verify_scheme performs: states x profiles x the
/// key values each receiver can see, summed over receivers.
inline unsigned long long verification_size(const ChannelScheme& s, const CommunicationStructure& m)
{
    unsigned long long per_profile = 0;
    for (std::size_t r = 0; r < m.receivers(); ++r) {
        unsigned long long n = 1;
        for (std::size_t k = 0; k < detail::layout_for(s, m, r).keys.size(); ++k) {
            n = detail::saturating_mul(n, static_cast<unsigned long long>(s.modulus));
        }
        per_profile = detail::saturating_add(per_profile, n);
    }
    return detail::saturating_mul(
        detail::saturating_mul(per_profile, static_cast<unsigned long long>(s.source.profiles.size())),
        static_cast<unsigned long long>(std::max<std::size_t>(s.source.states(), 1)));
}

/// Exact check by enumeration. (a) every receiver's posterior given its view
/// equals its target: its own label if transmitted, else the posterior given
/// the transmitted labels it dominates. (b) given those dominated labels the
/// view does not depend on the profile (hence on the state) and is uniform on
/// its support. The induced (state, profile) law must equal `target`.
inline VerificationReport verify_scheme(const ChannelScheme& s, const CommunicationStructure& m,
                                        const SignalingTable& target, const Prior& prior,
                                        unsigned long long budget = 10'000'000ULL)
{
    if (s.channels.size() != m.channels() || s.receivers() != m.receivers()) {
        fail(ErrorCode::MatrixShapeMismatch, "scheme layout does not fit the structure");
    }
    if (s.source.states() != prior.size()) {
        fail(ErrorCode::StateSpaceMismatch, "scheme and prior differ in state count");
    }
    for (const auto& slots : s.channels) {
        for (const Slot& slot : slots) {
            if ((slot.label_of && !s.encoded(*slot.label_of)) ||
                std::any_of(slot.keys.begin(), slot.keys.end(), [&](std::size_t k) { return k >= s.keys; })) {
                fail(ErrorCode::InvalidInput, "slot refers to an unknown label or key");
            }
        }
    }
    VerificationReport report;
    report.enumerated = verification_size(s, m);
    if (report.enumerated > budget) {
        fail(ErrorCode::BudgetExceeded, "enumeration of " + std::to_string(report.enumerated) +
                                            " cases exceeds the budget " + std::to_string(budget));
    }
    const auto& src = s.source;
    const std::size_t states = prior.size();
    std::vector<std::vector<Rational>> joint(src.profiles.size(), std::vector<Rational>(states));
    for (std::size_t p = 0; p < src.profiles.size(); ++p) {
        for (std::size_t st = 0; st < states; ++st) {
            joint[p][st] = prior[st] * src.conditional[st][p];
        }
    }
    std::vector<Profile> expected(src.profiles.size(), Profile(m.receivers()));

    for (std::size_t r = 0; r < m.receivers(); ++r) {
        ReceiverCheck check;
        check.receiver = r;
        std::vector<std::size_t> known;
        for (std::size_t z = 0; z < m.receivers(); ++z) {
            if (s.encoded(z) && (z == r || dominates(m, r, z))) {
                known.push_back(z);
            }
        }
        auto known_labels = [&](std::size_t p) {
            Profile out;
            for (std::size_t z : known) {
                out.push_back(src.profiles[p][z]);
            }
            return out;
        };
        std::map<Profile, std::vector<Rational>> class_mass;
        for (std::size_t p = 0; p < src.profiles.size(); ++p) {
            auto& row = class_mass[known_labels(p)];
            row.resize(states);
            for (std::size_t st = 0; st < states; ++st) {
                row[st] += joint[p][st];
            }
        }
        for (std::size_t p = 0; p < src.profiles.size(); ++p) {
            expected[p][r] = s.encoded(r) ? src.profiles[p][r] : detail::normalize(class_mass.at(known_labels(p)));
        }

        const auto lay = detail::layout_for(s, m, r);
        std::vector<std::map<std::vector<long>, unsigned long long>> counts;
        std::map<Profile, std::size_t> first_of_class;
        std::map<std::vector<long>, std::vector<Rational>> view_mass;
        for (std::size_t p = 0; p < src.profiles.size(); ++p) {
            counts.push_back(detail::view_counts(s, lay, src.profiles[p]));
            const auto& c = counts.back();
            for (const auto& [view, n] : c) {
                auto& row = view_mass[view];
                row.resize(states);
                for (std::size_t st = 0; st < states; ++st) {
                    row[st] += joint[p][st] * Rational(static_cast<long>(n));
                }
            }
            if (check.leak_free) {
                const unsigned long long n0 = c.begin()->second;
                if (std::any_of(c.begin(), c.end(), [&](const auto& e) { return e.second != n0; })) {
                    check.leak_free = false;
                    check.detail += "view not uniform on its support at profile " + std::to_string(p + 1) + "; ";
                }
                const auto [it, fresh] = first_of_class.emplace(known_labels(p), p);
                if (!fresh && counts[it->second] != c) {
                    check.leak_free = false;
                    check.detail += "view law differs between profiles " + std::to_string(it->second + 1) + " and " +
                                    std::to_string(p + 1) + " with the same dominated labels; ";
                }
            }
        }
        for (std::size_t p = 0; p < src.profiles.size() && check.posterior_ok; ++p) {
            const bool reachable = std::any_of(joint[p].begin(), joint[p].end(),
                                               [](const Rational& v) { return !v.is_zero(); });
            if (!reachable) {
                continue;
            }
            for (const auto& [view, n] : counts[p]) {
                const auto post = detail::normalize(view_mass.at(view));
                if (post != expected[p][r]) {
                    check.posterior_ok = false;
                    check.detail += "posterior " + post.str() + " given its view differs from target " +
                                    expected[p][r].str() + " at profile " + std::to_string(p + 1) + "; ";
                    break;
                }
            }
        }
        report.receivers.push_back(std::move(check));
    }

    const bool all_a = std::all_of(report.receivers.begin(), report.receivers.end(),
                                   [](const ReceiverCheck& c) { return c.posterior_ok; });
    if (!all_a) {
        report.joint_detail = "posterior check failed, induced law not defined by labels";
        return report;
    }
    std::map<Profile, std::vector<Rational>> induced;
    for (std::size_t p = 0; p < src.profiles.size(); ++p) {
        auto& row = induced[expected[p]];
        row.resize(states);
        for (std::size_t st = 0; st < states; ++st) {
            row[st] += src.conditional[st][p];
        }
    }
    report.joint_matches = SignalingTable::from_map(states, induced) == target;
    if (!report.joint_matches) {
        report.joint_detail = "induced (state, profile) law differs from the target table";
    }
    return report;
}

inline VerificationReport verify_scheme(const ChannelScheme& s, const CommunicationStructure& m,
                                        const SignalingTable& target, const PersuasionInstance& instance,
                                        unsigned long long budget = 10'000'000ULL)
{
    return verify_scheme(s, m, target, instance.prior, budget);
}

/// One execution: the symbol tuple on every channel and its probability.
struct Execution {
    std::vector<std::vector<long>> symbols;
    Rational probability;
};

/// Distinct executions per state with merged probabilities, in tuple order.
inline std::vector<std::vector<Execution>> executions(const ChannelScheme& s, unsigned long long budget)
{
    unsigned long long size = static_cast<unsigned long long>(s.source.profiles.size());
    for (std::size_t k = 0; k < s.keys; ++k) {
        size = detail::saturating_mul(size, static_cast<unsigned long long>(s.modulus));
    }
    size = detail::saturating_mul(size, static_cast<unsigned long long>(std::max<std::size_t>(s.source.states(), 1)));
    if (size > budget) {
        fail(ErrorCode::BudgetExceeded,
             "listing " + std::to_string(size) + " executions exceeds the budget " + std::to_string(budget));
    }
    Rational weight(1);
    for (std::size_t k = 0; k < s.keys; ++k) {
        weight /= Rational(s.modulus);
    }
    std::vector<std::vector<Execution>> out(s.source.states());
    for (std::size_t st = 0; st < s.source.states(); ++st) {
        std::map<std::vector<std::vector<long>>, Rational> merged;
        for (std::size_t p = 0; p < s.source.profiles.size(); ++p) {
            const Rational& c = s.source.conditional[st][p];
            if (c.is_zero()) {
                continue;
            }
            std::vector<long> value(s.keys, 0);
            while (true) {
                std::vector<std::vector<long>> symbols;
                for (const auto& slots : s.channels) {
                    std::vector<long> tuple;
                    for (const Slot& slot : slots) {
                        long v = slot.label_of ? s.alphabets[*slot.label_of]->code(s.source.profiles[p][*slot.label_of])
                                               : 0;
                        for (std::size_t k : slot.keys) {
                            v += value[k];
                        }
                        tuple.push_back(v % s.modulus);
                    }
                    symbols.push_back(std::move(tuple));
                }
                merged[symbols] += c * weight;
                std::size_t d = 0;
                while (d < value.size() && ++value[d] == s.modulus) {
                    value[d++] = 0;
                }
                if (d == value.size()) {
                    break;
                }
            }
        }
        for (auto& [symbols, prob] : merged) {
            out[st].push_back(Execution{symbols, prob});
        }
    }
    return out;
}

} // namespace multichan
