#pragma once

// Small instance builders shared by the test suites.

#include <functional>
#include <map>
#include <random>
#include <vector>

#include "multichan/instance.hpp"
#include "multichan/signaling_table.hpp"
#include "multichan/utility.hpp"

namespace fixture {

using namespace multichan;

/// Binary-state posterior with probability q on the second state.
inline PosteriorPoint bin(const Rational& q) { return PosteriorPoint({Rational(1) - q, q}); }

inline Prior binary_prior(const Rational& q) { return Prior({Rational(1) - q, q}); }

inline PersuasionInstance additive(const Prior& prior, const CommunicationStructure& m,
                                   std::vector<ReceiverUtility> utilities)
{
    PersuasionInstance out;
    std::vector<std::string> names;
    for (std::size_t s = 0; s < prior.size(); ++s) {
        names.push_back("w" + std::to_string(s));
    }
    out.states = StateSpace(names);
    out.prior = prior;
    out.structure = m;
    UtilitySpec spec;
    spec.receivers = std::move(utilities);
    out.utilities = spec;
    return out;
}

/// Table of f(q) over the binary grid of step 1/d.
inline TableUtility tabulate(long d, const std::function<Rational(const Rational&)>& f)
{
    TableUtility t;
    for (long l = 0; l <= d; ++l) {
        t.values[bin(Rational(l, d))] = f(Rational(l, d));
    }
    return t;
}

/// Random upper-semicontinuous step function of q with breakpoints on the
/// 1/10 grid: a value per open cell, and at each grid point a value at least
/// the larger neighbouring cell value.
inline std::function<Rational(const Rational&)> random_aligned_steps(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> val(0, 6);
    std::vector<Rational> cell(10);
    for (auto& c : cell) {
        c = Rational(val(rng), 2);
    }
    std::vector<Rational> at(11);
    for (long l = 0; l <= 10; ++l) {
        Rational hi = l > 0 ? cell[l - 1] : cell[0];
        if (l < 10 && cell[l] > hi) {
            hi = cell[l];
        }
        at[l] = hi + Rational(std::uniform_int_distribution<long>(0, 1)(rng), 2);
    }
    return [cell, at](const Rational& q) {
        const Rational scaled = q * Rational(10);
        if (scaled.is_integer()) {
            return at[scaled.numerator().get_si()];
        }
        return cell[mpz_class(scaled.ceil() - 1).get_si()];
    };
}

inline std::map<Rational, Rational> as_binary_map(long d, const std::function<Rational(const Rational&)>& f)
{
    std::map<Rational, Rational> out;
    for (long l = 0; l <= d; ++l) {
        out[Rational(l, d)] = f(Rational(l, d));
    }
    return out;
}

/// Table induced by a random binary-state scheme under m: each of `draws`
/// outcomes puts a bit on every channel, and a receiver's label is its
/// posterior given the bits it sees. Realizable under m by construction.
inline SignalingTable random_realizable_table(std::mt19937_64& rng, const CommunicationStructure& m,
                                              const Prior& prior, std::size_t draws)
{
    std::uniform_int_distribution<long> weight(0, 4);
    std::uniform_int_distribution<int> bit(0, 1);
    const std::size_t states = prior.size();
    std::vector<std::vector<int>> signal(draws, std::vector<int>(m.channels()));
    for (auto& s : signal) {
        for (auto& b : s) {
            b = bit(rng);
        }
    }
    std::vector<std::vector<Rational>> cond(states, std::vector<Rational>(draws));
    for (std::size_t st = 0; st < states; ++st) {
        std::vector<long> w(draws);
        long total = 0;
        while (total == 0) {
            total = 0;
            for (auto& x : w) {
                total += x = weight(rng);
            }
        }
        for (std::size_t d = 0; d < draws; ++d) {
            cond[st][d] = Rational(w[d], total);
        }
    }
    auto seen = [&](std::size_t i, std::size_t d) {
        std::vector<int> out;
        for (std::size_t j : m.observed(i)) {
            out.push_back(signal[d][j]);
        }
        return out;
    };
    std::map<Profile, std::vector<Rational>> rows;
    for (std::size_t d = 0; d < draws; ++d) {
        Profile profile;
        for (std::size_t i = 0; i < m.receivers(); ++i) {
            std::vector<Rational> mass(states);
            for (std::size_t e = 0; e < draws; ++e) {
                if (seen(i, e) == seen(i, d)) {
                    for (std::size_t st = 0; st < states; ++st) {
                        mass[st] += prior[st] * cond[st][e];
                    }
                }
            }
            Rational total;
            for (const auto& v : mass) {
                total += v;
            }
            if (total.is_zero()) {
                profile.push_back(prior.point());
                continue;
            }
            for (auto& v : mass) {
                v /= total;
            }
            profile.push_back(PosteriorPoint(mass));
        }
        auto& row = rows[profile];
        row.resize(states);
        for (std::size_t st = 0; st < states; ++st) {
            row[st] += cond[st][d];
        }
    }
    return SignalingTable::from_map(states, rows);
}

} // namespace fixture
