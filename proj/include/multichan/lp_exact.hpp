#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "multichan/error.hpp"
#include "multichan/rational.hpp"

namespace multichan {

enum class Relation { Equal, LessEqual, GreaterEqual };

struct Term {
    std::size_t variable = 0;
    Rational coefficient;
};

struct Constraint {
    std::vector<Term> terms;
    Relation relation = Relation::Equal;
    Rational rhs;
    std::string name;
};

/// maximize c^T x subject to rows (=, <=, >=) and x >= 0, all data exact.
class LinearProgram {
public:
    explicit LinearProgram(std::size_t variables = 0) : objective_(variables), names_(variables) {}

    std::size_t add_variable(std::string name = {}, Rational objective = {})
    {
        objective_.push_back(std::move(objective));
        names_.push_back(std::move(name));
        return objective_.size() - 1;
    }

    void set_objective(std::size_t variable, Rational coefficient)
    {
        objective_.at(variable) = std::move(coefficient);
    }

    void add_constraint(std::vector<Term> terms, Relation relation, Rational rhs, std::string name = {})
    {
        for (const auto& t : terms) {
            if (t.variable >= objective_.size()) {
                fail(ErrorCode::InvalidInput, "constraint references variable " + std::to_string(t.variable) +
                                                  " of " + std::to_string(objective_.size()));
            }
        }
        constraints_.push_back({std::move(terms), relation, std::move(rhs), std::move(name)});
    }

    /// Dense row convenience; the row length must equal the variable count.
    void add_constraint(const std::vector<Rational>& row, Relation relation, Rational rhs, std::string name = {})
    {
        if (row.size() != objective_.size()) {
            fail(ErrorCode::InvalidInput, "constraint row has " + std::to_string(row.size()) +
                                              " coefficients for " + std::to_string(objective_.size()) +
                                              " variables");
        }
        std::vector<Term> terms;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!row[j].is_zero()) {
                terms.push_back({j, row[j]});
            }
        }
        add_constraint(std::move(terms), relation, std::move(rhs), std::move(name));
    }

    [[nodiscard]] std::size_t variables() const noexcept { return objective_.size(); }
    [[nodiscard]] const std::vector<Rational>& objective() const noexcept { return objective_; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    [[nodiscard]] const std::string& name(std::size_t variable) const { return names_.at(variable); }

private:
    std::vector<Rational> objective_;
    std::vector<std::string> names_;
    std::vector<Constraint> constraints_;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LPStatus s)
{
    switch (s) {
    case LPStatus::Optimal: return "Optimal";
    case LPStatus::Infeasible: return "Infeasible";
    case LPStatus::Unbounded: return "Unbounded";
    }
    return "?";
}

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rational> assignment;
    Rational objective;
    /// One multiplier per constraint; certifies optimality when status is Optimal.
    std::vector<Rational> duals;
    std::size_t pivots = 0;
};

/// Exact check that x >= 0 satisfies every constraint.
inline bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x)
{
    if (x.size() != lp.variables()) {
        return false;
    }
    for (const auto& v : x) {
        if (v.sign() < 0) {
            return false;
        }
    }
    for (const auto& c : lp.constraints()) {
        Rational lhs;
        for (const auto& t : c.terms) {
            lhs += t.coefficient * x[t.variable];
        }
        const bool ok = c.relation == Relation::Equal       ? lhs == c.rhs
                        : c.relation == Relation::LessEqual ? lhs <= c.rhs
                                                            : lhs >= c.rhs;
        if (!ok) {
            return false;
        }
    }
    return true;
}

/// Exact LP duality certificate for a maximization: dual signs match the
/// relations, A^T y >= c, and b^T y equals c^T x.
inline bool certifies_optimality(const LinearProgram& lp, const std::vector<Rational>& x, const std::vector<Rational>& y)
{
    if (y.size() != lp.constraints().size() || !satisfies(lp, x)) {
        return false;
    }
    std::vector<Rational> column(lp.variables());
    Rational dual_value;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& c = lp.constraints()[i];
        if ((c.relation == Relation::LessEqual && y[i].sign() < 0) ||
            (c.relation == Relation::GreaterEqual && y[i].sign() > 0)) {
            return false;
        }
        if (y[i].is_zero()) {
            continue;
        }
        for (const auto& t : c.terms) {
            column[t.variable] += y[i] * t.coefficient;
        }
        dual_value += y[i] * c.rhs;
    }
    Rational primal_value;
    for (std::size_t j = 0; j < lp.variables(); ++j) {
        if (column[j] < lp.objective()[j]) {
            return false;
        }
        primal_value += lp.objective()[j] * x[j];
    }
    return primal_value == dual_value;
}

namespace detail {

/// Dense two-phase tableau simplex over GMP rationals.
///
/// Entering rule is Dantzig (largest reduced profit). Ratio-test ties are broken
/// lexicographically on the rows of B^-1 (read off the initial slack/artificial
/// columns), which rules out cycling from the identity start. Driving out
/// artificials can break lex-positivity, so a very long degenerate run still
/// switches the phase to Bland's rule.
class Tableau {
public:
    explicit Tableau(const LinearProgram& lp) : lp_(lp)
    {
        const std::size_t m = lp.constraints().size();
        n_ = lp.variables();
        std::size_t slacks = 0;
        std::size_t artificials = 0;
        flipped_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = lp.constraints()[i];
            flipped_[i] = c.rhs.sign() < 0;
            Relation r = c.relation;
            if (flipped_[i] && r != Relation::Equal) {
                r = r == Relation::LessEqual ? Relation::GreaterEqual : Relation::LessEqual;
            }
            relation_.push_back(r);
            slacks += r != Relation::Equal;
            artificials += r != Relation::LessEqual;
        }
        first_artificial_ = n_ + slacks;
        width_ = first_artificial_ + artificials;

        rows_.assign(m, std::vector<mpq_class>(width_));
        rhs_.resize(m);
        basis_.resize(m);
        initial_column_.resize(m);
        std::size_t next_slack = n_;
        std::size_t next_artificial = first_artificial_;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = lp.constraints()[i];
            const int s = flipped_[i] ? -1 : 1;
            for (const auto& t : c.terms) {
                rows_[i][t.variable] += s * t.coefficient.raw();
            }
            rhs_[i] = s * c.rhs.raw();
            if (relation_[i] == Relation::LessEqual) {
                rows_[i][next_slack] = 1;
                basis_[i] = next_slack;
                initial_column_[i] = next_slack++;
            } else {
                if (relation_[i] == Relation::GreaterEqual) {
                    rows_[i][next_slack++] = -1;
                }
                rows_[i][next_artificial] = 1;
                basis_[i] = next_artificial;
                initial_column_[i] = next_artificial++;
            }
        }
        active_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            active_[i] = i;
        }
    }

    LPSolution solve()
    {
        LPSolution out;
        // Phase 1: maximize -(sum of artificials).
        cost_.assign(width_, 0);
        cost_rhs_ = 0;
        bool any_artificial = false;
        for (std::size_t i : active_) {
            if (basis_[i] >= first_artificial_) {
                any_artificial = true;
                for (std::size_t j = 0; j < first_artificial_; ++j) {
                    cost_[j] += rows_[i][j];
                }
                cost_rhs_ += rhs_[i];
            }
        }
        if (any_artificial) {
            run(first_artificial_, out.pivots);
            // phase-1 optimum is -cost_rhs_
            if (sgn(cost_rhs_) != 0) {
                out.status = LPStatus::Infeasible;
                return out;
            }
            drive_out_artificials(out.pivots);
        }

        // Phase 2.
        cost_.assign(width_, 0);
        cost_rhs_ = 0;
        for (std::size_t j = 0; j < n_; ++j) {
            cost_[j] = lp_.objective()[j].raw();
        }
        mpq_class tmp;
        for (std::size_t i : active_) {
            const mpq_class cb = basis_[i] < n_ ? lp_.objective()[basis_[i]].raw() : mpq_class(0);
            if (sgn(cb) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < width_; ++j) {
                if (sgn(rows_[i][j]) != 0) {
                    mpq_mul(tmp.get_mpq_t(), cb.get_mpq_t(), rows_[i][j].get_mpq_t());
                    mpq_sub(cost_[j].get_mpq_t(), cost_[j].get_mpq_t(), tmp.get_mpq_t());
                }
            }
            cost_rhs_ -= cb * rhs_[i];
        }
        if (!run(first_artificial_, out.pivots)) {
            out.status = LPStatus::Unbounded;
            return out;
        }

        out.status = LPStatus::Optimal;
        out.assignment.assign(n_, Rational());
        for (std::size_t i : active_) {
            if (basis_[i] < n_) {
                out.assignment[basis_[i]] = Rational(rhs_[i]);
            }
        }
        out.objective = Rational(mpq_class(-cost_rhs_));
        out.duals.reserve(rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            mpq_class y = -cost_[initial_column_[i]];
            if (flipped_[i]) {
                y = -y;
            }
            out.duals.emplace_back(std::move(y));
        }
        return out;
    }

private:
    /// Pivots until no column below `limit` has positive reduced profit.
    /// Returns false when an improving column is unbounded.
    bool run(std::size_t limit, std::size_t& pivots)
    {
        constexpr std::size_t degenerate_run_before_bland = 5000;
        bool bland = false;
        std::size_t degenerate_run = 0;
        while (true) {
            std::size_t entering = width_;
            for (std::size_t j = 0; j < limit; ++j) {
                if (sgn(cost_[j]) > 0 && (entering == width_ || (!bland && cost_[j] > cost_[entering]))) {
                    entering = j;
                    if (bland) {
                        break;
                    }
                }
            }
            if (entering == width_) {
                return true;
            }
            std::size_t leaving = rows_.size();
            mpq_class best_ratio;
            mpq_class ratio;
            for (std::size_t i : active_) {
                if (sgn(rows_[i][entering]) <= 0) {
                    continue;
                }
                mpq_div(ratio.get_mpq_t(), rhs_[i].get_mpq_t(), rows_[i][entering].get_mpq_t());
                if (leaving == rows_.size() || ratio < best_ratio ||
                    (ratio == best_ratio && tie_prefers(i, leaving, entering, bland))) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
            if (leaving == rows_.size()) {
                return false;
            }
            if (sgn(best_ratio) == 0) {
                if (++degenerate_run >= degenerate_run_before_bland) {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            pivot(leaving, entering);
            ++pivots;
        }
    }

    /// Ratio-test tie between rows a and b: lexicographic on (B^-1 row) / pivot
    /// entry, or smallest basic column under Bland.
    [[nodiscard]] bool tie_prefers(std::size_t a, std::size_t b, std::size_t entering, bool bland) const
    {
        if (!bland) {
            mpq_class ra;
            mpq_class rb;
            for (std::size_t col : initial_column_) {
                mpq_div(ra.get_mpq_t(), rows_[a][col].get_mpq_t(), rows_[a][entering].get_mpq_t());
                mpq_div(rb.get_mpq_t(), rows_[b][col].get_mpq_t(), rows_[b][entering].get_mpq_t());
                if (ra != rb) {
                    return ra < rb;
                }
            }
        }
        return basis_[a] < basis_[b];
    }

    void drive_out_artificials(std::size_t& pivots)
    {
        std::vector<std::size_t> keep;
        for (std::size_t i : active_) {
            if (basis_[i] < first_artificial_) {
                keep.push_back(i);
                continue;
            }
            std::size_t column = first_artificial_;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (sgn(rows_[i][j]) != 0) {
                    column = j;
                    break;
                }
            }
            if (column == first_artificial_) {
                continue; // redundant row: 0 = 0 over every real column
            }
            pivot(i, column);
            ++pivots;
            keep.push_back(i);
        }
        active_ = std::move(keep);
    }

    void pivot(std::size_t row, std::size_t column)
    {
        auto& pr = rows_[row];
        const mpq_class pv = pr[column];
        std::vector<std::size_t> nonzero;
        for (std::size_t j = 0; j < width_; ++j) {
            if (sgn(pr[j]) != 0) {
                mpq_div(pr[j].get_mpq_t(), pr[j].get_mpq_t(), pv.get_mpq_t());
                nonzero.push_back(j);
            }
        }
        mpq_div(rhs_[row].get_mpq_t(), rhs_[row].get_mpq_t(), pv.get_mpq_t());

        mpq_class factor;
        mpq_class tmp;
        auto eliminate = [&](std::vector<mpq_class>& target, mpq_class& target_rhs) {
            if (sgn(target[column]) == 0) {
                return;
            }
            factor = target[column];
            for (std::size_t j : nonzero) {
                mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), pr[j].get_mpq_t());
                mpq_sub(target[j].get_mpq_t(), target[j].get_mpq_t(), tmp.get_mpq_t());
            }
            mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), rhs_[row].get_mpq_t());
            mpq_sub(target_rhs.get_mpq_t(), target_rhs.get_mpq_t(), tmp.get_mpq_t());
        };
        for (std::size_t i : active_) {
            if (i != row) {
                eliminate(rows_[i], rhs_[i]);
            }
        }
        eliminate(cost_, cost_rhs_);
        basis_[row] = column;
    }

    const LinearProgram& lp_;
    std::size_t n_ = 0;
    std::size_t first_artificial_ = 0;
    std::size_t width_ = 0;
    std::vector<bool> flipped_;
    std::vector<Relation> relation_;
    std::vector<std::vector<mpq_class>> rows_;
    std::vector<mpq_class> rhs_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> initial_column_;
    std::vector<std::size_t> active_;
    std::vector<mpq_class> cost_;
    mpq_class cost_rhs_;
};

} // namespace detail

/// Solves the program exactly. An Optimal result carries a dual vector and is
/// re-checked against the original data before it is returned.
inline LPSolution solve(const LinearProgram& lp)
{
    detail::Tableau tableau(lp);
    LPSolution out = tableau.solve();
    if (out.status == LPStatus::Optimal && !certifies_optimality(lp, out.assignment, out.duals)) {
        fail(ErrorCode::InvariantViolation, "simplex result failed its optimality certificate");
    }
    return out;
}

/// Plain-text listing of the program for inspection.
inline std::string to_lp_listing(const LinearProgram& lp)
{
    auto var = [&](std::size_t j) { return lp.name(j).empty() ? "v" + std::to_string(j + 1) : lp.name(j); };
    auto write_terms = [&](std::ostringstream& os, const std::vector<Term>& terms) {
        if (terms.empty()) {
            os << " 0";
        }
        bool first = true;
        for (const auto& t : terms) {
            os << (first ? " " : " + ") << t.coefficient.str() << " " << var(t.variable);
            first = false;
        }
    };
    std::ostringstream os;
    os << "maximize\n  obj:";
    std::vector<Term> obj;
    for (std::size_t j = 0; j < lp.variables(); ++j) {
        if (!lp.objective()[j].is_zero()) {
            obj.push_back({j, lp.objective()[j]});
        }
    }
    write_terms(os, obj);
    os << "\nsubject to\n";
    for (std::size_t i = 0; i < lp.constraints().size(); ++i) {
        const auto& c = lp.constraints()[i];
        os << "  " << (c.name.empty() ? "c" + std::to_string(i + 1) : c.name) << ":";
        write_terms(os, c.terms);
        os << (c.relation == Relation::Equal ? " = " : c.relation == Relation::LessEqual ? " <= " : " >= ")
           << c.rhs.str() << "\n";
    }
    os << "bounds\n  all variables >= 0\nend\n";
    return os.str();
}

} // namespace multichan
