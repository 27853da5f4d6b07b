#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "multichan/beliefs.hpp"
#include "multichan/core_model.hpp"
#include "multichan/dominance.hpp"
#include "multichan/error.hpp"
#include "multichan/instance.hpp"
#include "multichan/lp_exact.hpp"
#include "multichan/rational.hpp"
#include "multichan/signaling_table.hpp"
#include "multichan/utility.hpp"

namespace multichan {

/// Grid denominator for a target accuracy: d = ceil(1/epsilon).
inline long grid_denominator(const Rational& epsilon)
{
    check_epsilon(epsilon);
    const mpz_class d = (Rational(1) / epsilon).ceil();
    if (!d.fits_slong_p()) {
        fail(ErrorCode::BadEpsilon, "epsilon " + epsilon.str() + " is too small");
    }
    return d.get_si();
}

/// The gridded program for an additive instance on a forest structure.
/// Receivers with identical rows are merged first (their utilities add up).
/// Variables: x[c][w] for merged receiver c and grid point w, then
/// y[e][w1][w2] per covering edge e = (dominating, dominated) moving mass from
/// the coarse point w2 out to the spread point w1.
struct GridLP {
    PosteriorGrid grid;
    MergedStructure merged;
    DominationGraph graph;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    LinearProgram lp;

    [[nodiscard]] std::size_t x(std::size_t c, std::size_t w) const { return c * grid.size() + w; }
    [[nodiscard]] std::size_t y(std::size_t e, std::size_t w1, std::size_t w2) const
    {
        const std::size_t g = grid.size();
        return merged.structure.receivers() * g + e * g * g + w1 * g + w2;
    }
    [[nodiscard]] std::size_t x_count() const { return merged.structure.receivers() * grid.size(); }
    [[nodiscard]] std::size_t y_count() const { return edges.size() * grid.size() * grid.size(); }
};

inline GridLP build_grid_lp(const PersuasionInstance& instance, const PosteriorGrid& grid)
{
    const auto& spec = instance.additive();
    const Prior& prior = instance.prior;
    if (grid.states() != prior.size()) {
        fail(ErrorCode::GridMismatch, "grid over " + std::to_string(grid.states()) + " states, instance over " +
                                          std::to_string(prior.size()));
    }
    GridLP out;
    out.grid = grid;
    out.merged = merge_duplicate_receivers(instance.structure);
    out.graph = domination_graph(out.merged.structure);
    if (!out.graph.is_forest) {
        fail(ErrorCode::NotAForest, "some receiver has two covering dominators");
    }
    out.edges.assign(out.graph.edges.begin(), out.graph.edges.end());

    const std::size_t k = out.merged.structure.receivers();
    const std::size_t g = grid.size();
    const std::size_t states = prior.size();
    auto& lp = out.lp;
    lp = LinearProgram();
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t w = 0; w < g; ++w) {
            Rational u;
            for (std::size_t i : out.merged.members[c]) {
                u += evaluate(spec.receivers[i], grid[w]);
            }
            lp.add_variable("x_" + std::to_string(c + 1) + "_" + std::to_string(w + 1), u);
        }
    }
    for (std::size_t e = 0; e < out.edges.size(); ++e) {
        for (std::size_t w1 = 0; w1 < g; ++w1) {
            for (std::size_t w2 = 0; w2 < g; ++w2) {
                lp.add_variable("y_" + std::to_string(e + 1) + "_" + std::to_string(w1 + 1) + "_" +
                                std::to_string(w2 + 1));
            }
        }
    }

    const auto tag = [](std::string family, std::initializer_list<std::size_t> idx) {
        for (std::size_t v : idx) {
            family += "_" + std::to_string(v + 1);
        }
        return family;
    };
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t s = 0; s < states; ++s) {
            std::vector<Term> terms;
            for (std::size_t w = 0; w < g; ++w) {
                if (!grid[w][s].is_zero()) {
                    terms.push_back({out.x(c, w), grid[w][s]});
                }
            }
            lp.add_constraint(std::move(terms), Relation::Equal, prior[s], tag("bayes", {c, s}));
        }
    }
    for (std::size_t e = 0; e < out.edges.size(); ++e) {
        const auto [spread, coarse] = out.edges[e];
        for (std::size_t w1 = 0; w1 < g; ++w1) {
            std::vector<Term> terms{{out.x(spread, w1), Rational(-1)}};
            for (std::size_t w2 = 0; w2 < g; ++w2) {
                terms.push_back({out.y(e, w1, w2), Rational(1)});
            }
            lp.add_constraint(std::move(terms), Relation::Equal, Rational(), tag("row", {e, w1}));
        }
        for (std::size_t w2 = 0; w2 < g; ++w2) {
            std::vector<Term> terms{{out.x(coarse, w2), Rational(-1)}};
            for (std::size_t w1 = 0; w1 < g; ++w1) {
                terms.push_back({out.y(e, w1, w2), Rational(1)});
            }
            lp.add_constraint(std::move(terms), Relation::Equal, Rational(), tag("col", {e, w2}));
        }
        // sum_w1 w1[s] y = w2[s] x_coarse[w2]: the mass moved out of w2 keeps w2 as its mean
        for (std::size_t w2 = 0; w2 < g; ++w2) {
            for (std::size_t s = 0; s < states; ++s) {
                std::vector<Term> terms;
                if (!grid[w2][s].is_zero()) {
                    terms.push_back({out.x(coarse, w2), -grid[w2][s]});
                }
                for (std::size_t w1 = 0; w1 < g; ++w1) {
                    if (!grid[w1][s].is_zero()) {
                        terms.push_back({out.y(e, w1, w2), grid[w1][s]});
                    }
                }
                lp.add_constraint(std::move(terms), Relation::Equal, Rational(), tag("bary", {e, w2, s}));
            }
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<Term> terms;
        for (std::size_t w = 0; w < g; ++w) {
            terms.push_back({out.x(c, w), Rational(1)});
        }
        lp.add_constraint(std::move(terms), Relation::Equal, Rational(1), tag("norm", {c}));
    }
    return out;
}

/// Optimal solution of the gridded program, in merged-receiver coordinates.
struct GridSolution {
    GridLP program;
    std::vector<Rational> values;
    Rational objective;
    /// marginals[c] = distribution of merged receiver c's posterior (the x block).
    std::vector<BeliefDistribution> marginals;
    /// couplings[e] for program.edges[e], source = dominating side.
    std::vector<Coupling> couplings;

    [[nodiscard]] Rational x(std::size_t c, std::size_t w) const { return values[program.x(c, w)]; }
    [[nodiscard]] Rational y(std::size_t e, std::size_t w1, std::size_t w2) const
    {
        return values[program.y(e, w1, w2)];
    }
    /// Marginal of an original (unmerged) receiver.
    [[nodiscard]] const BeliefDistribution& receiver_marginal(std::size_t i) const
    {
        return marginals.at(program.merged.representative.at(i));
    }
};

/// Wraps an assignment of the program's variables as a solution (marginals and
/// couplings read off the x and y blocks). No optimality is implied.
inline GridSolution make_solution(GridLP program, std::vector<Rational> values)
{
    if (values.size() != program.lp.variables()) {
        fail(ErrorCode::InvalidInput, "assignment has the wrong length");
    }
    GridSolution out;
    out.values = std::move(values);
    out.program = std::move(program);
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        out.objective += out.program.lp.objective()[j] * out.values[j];
    }
    const auto& grid = out.program.grid;
    const std::size_t k = out.program.merged.structure.receivers();
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<Rational> mass;
        for (std::size_t w = 0; w < grid.size(); ++w) {
            mass.push_back(out.x(c, w));
        }
        out.marginals.emplace_back(grid.points(), mass);
    }
    auto position = [](const BeliefDistribution& d, const PosteriorPoint& p) {
        const auto it = std::lower_bound(d.support().begin(), d.support().end(), p);
        return static_cast<std::size_t>(it - d.support().begin());
    };
    for (std::size_t e = 0; e < out.program.edges.size(); ++e) {
        const auto [spread, coarse] = out.program.edges[e];
        Coupling cp{out.marginals[spread], out.marginals[coarse], {}};
        for (std::size_t w1 = 0; w1 < grid.size(); ++w1) {
            for (std::size_t w2 = 0; w2 < grid.size(); ++w2) {
                const Rational f = out.y(e, w1, w2);
                if (!f.is_zero()) {
                    cp.flow[{position(cp.source, grid[w1]), position(cp.target, grid[w2])}] = f;
                }
            }
        }
        out.couplings.push_back(std::move(cp));
    }
    return out;
}

inline GridSolution solve_grid_lp(GridLP program)
{
    auto result = solve(program.lp);
    if (result.status != LPStatus::Optimal) {
        // Bayes rows are always satisfiable on a grid containing the simplex vertices.
        fail(ErrorCode::InvariantViolation, std::string("grid program is ") + to_string(result.status));
    }
    return make_solution(std::move(program), std::move(result.assignment));
}

/// Exact re-check of the solution invariants against the instance.
inline std::vector<std::string> solution_violations(const GridSolution& sol, const Prior& prior)
{
    std::vector<std::string> out;
    for (std::size_t c = 0; c < sol.marginals.size(); ++c) {
        if (!is_bayes_plausible(sol.marginals[c], prior)) {
            out.push_back("marginal of merged receiver " + std::to_string(c + 1) + " is not Bayes-plausible");
        }
    }
    for (std::size_t e = 0; e < sol.couplings.size(); ++e) {
        if (!is_valid_coupling(sol.couplings[e])) {
            out.push_back("coupling on edge " + std::to_string(e + 1) + " breaks a marginal or barycenter");
        }
    }
    if (!satisfies(sol.program.lp, sol.values)) {
        out.push_back("assignment violates a constraint of the grid program");
    }
    return out;
}

/// Builds the table realizing the solution: per tree, the root label follows
/// its marginal and each child label follows flow / parent mass given the
/// parent label; trees are conditionally independent given the state.
inline SignalingTable extract_table(const GridSolution& sol, const PersuasionInstance& instance)
{
    const auto violations = solution_violations(sol, instance.prior);
    if (!violations.empty()) {
        fail(ErrorCode::InvariantViolation, violations.front());
    }
    const auto& prog = sol.program;
    const auto& grid = prog.grid;
    const std::size_t k = prog.merged.structure.receivers();
    const std::size_t states = instance.prior.size();

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index;
    for (std::size_t e = 0; e < prog.edges.size(); ++e) {
        edge_index[prog.edges[e]] = e;
    }

    // Per tree: list of (assignment of grid indices to the tree's nodes, probability).
    struct TreeLaw {
        std::size_t root;
        std::vector<std::size_t> nodes; // parents before children
        std::vector<std::pair<std::vector<std::size_t>, Rational>> outcomes;
    };
    std::vector<TreeLaw> trees;
    for (std::size_t root : prog.graph.roots()) {
        TreeLaw law{root, {root}, {}};
        for (std::size_t at = 0; at < law.nodes.size(); ++at) {
            for (std::size_t child : prog.graph.children(law.nodes[at])) {
                law.nodes.push_back(child);
            }
        }
        std::map<std::size_t, std::size_t> slot;
        for (std::size_t n = 0; n < law.nodes.size(); ++n) {
            slot[law.nodes[n]] = n;
        }
        for (std::size_t w = 0; w < grid.size(); ++w) {
            if (!sol.x(root, w).is_zero()) {
                law.outcomes.push_back({{w}, sol.x(root, w)});
            }
        }
        for (std::size_t n = 1; n < law.nodes.size(); ++n) {
            const std::size_t child = law.nodes[n];
            const std::size_t parent = *prog.graph.parent[child];
            const std::size_t e = edge_index.at({parent, child});
            std::vector<std::pair<std::vector<std::size_t>, Rational>> next;
            for (const auto& [labels, prob] : law.outcomes) {
                const std::size_t wp = labels[slot.at(parent)];
                const Rational parent_mass = sol.x(parent, wp);
                for (std::size_t wc = 0; wc < grid.size(); ++wc) {
                    const Rational f = sol.y(e, wp, wc);
                    if (f.is_zero()) {
                        continue;
                    }
                    auto extended = labels;
                    extended.push_back(wc);
                    next.emplace_back(std::move(extended), prob * f / parent_mass);
                }
            }
            law.outcomes = std::move(next);
        }
        trees.push_back(std::move(law));
    }

    // Product over trees, then condition on the state.
    std::map<Profile, std::vector<Rational>> rows;
    std::function<void(std::size_t, std::vector<std::size_t>&, std::vector<Rational>&)> expand =
        [&](std::size_t t, std::vector<std::size_t>& label_of, std::vector<Rational>& weight) {
            if (t == trees.size()) {
                Profile profile;
                for (std::size_t i = 0; i < instance.structure.receivers(); ++i) {
                    profile.push_back(grid[label_of[prog.merged.representative[i]]]);
                }
                auto& row = rows[profile];
                row.resize(states);
                for (std::size_t s = 0; s < states; ++s) {
                    row[s] += weight[s];
                }
                return;
            }
            for (const auto& [labels, prob] : trees[t].outcomes) {
                for (std::size_t n = 0; n < labels.size(); ++n) {
                    label_of[trees[t].nodes[n]] = labels[n];
                }
                const auto& root_label = grid[labels[0]];
                std::vector<Rational> w2 = weight;
                for (std::size_t s = 0; s < states; ++s) {
                    w2[s] *= prob * root_label[s] / instance.prior[s];
                }
                expand(t + 1, label_of, w2);
            }
        };
    std::vector<std::size_t> label_of(k, 0);
    std::vector<Rational> unit(states, Rational(1));
    expand(0, label_of, unit);
    auto table = SignalingTable::from_map(states, rows);
    validate_table(table, instance.prior);
    return table;
}

struct FptasResult {
    long denominator = 1;
    GridSolution solution;
    SignalingTable table;
};

inline FptasResult solve_fptas(const PersuasionInstance& instance, const Rational& epsilon)
{
    const long d = grid_denominator(epsilon);
    FptasResult out;
    out.denominator = d;
    out.solution = solve_grid_lp(build_grid_lp(instance, PosteriorGrid(instance.prior.size(), d)));
    out.table = extract_table(out.solution, instance);
    return out;
}

} // namespace multichan
