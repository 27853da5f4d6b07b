#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multichan/dominance.hpp"
#include "multichan/error.hpp"
#include "multichan/fptas.hpp"
#include "multichan/hardness.hpp"
#include "multichan/io.hpp"
#include "multichan/secret_share.hpp"

namespace multichan::cli {

struct CommandResult {
    int exit_status = 0;
    /// Single JSON document for stdout (empty on error).
    std::string output;
    /// Human-readable lines for stderr.
    std::string summary;
};

/// 1 usage, 2 validation, 3 infeasible or violated precondition, 4 budget.
inline int exit_status(ErrorCode code)
{
    switch (code) {
    case ErrorCode::Usage:
    case ErrorCode::UnknownCommand: return 1;
    case ErrorCode::ParseError:
    case ErrorCode::InvalidInput:
    case ErrorCode::NonPositivePrior:
    case ErrorCode::PriorNotNormalized:
    case ErrorCode::MatrixShapeMismatch:
    case ErrorCode::BadEpsilon:
    case ErrorCode::ReceiverCountMismatch:
    case ErrorCode::StateSpaceMismatch:
    case ErrorCode::GridMismatch:
    case ErrorCode::AlphabetTooSmall:
    case ErrorCode::FileError: return 2;
    case ErrorCode::DuplicateRows:
    case ErrorCode::PriorOutsideHull:
    case ErrorCode::NotAForest:
    case ErrorCode::InvariantViolation:
    case ErrorCode::DominatedTarget:
    case ErrorCode::NoCarrierChannel:
    case ErrorCode::NoKeyChannel:
    case ErrorCode::SuperiorityViolated:
    case ErrorCode::Infeasible: return 3;
    case ErrorCode::BudgetExceeded: return 4;
    }
    return 2;
}

/// Accepts "12345" or "10^7".
inline unsigned long long parse_budget(const std::string& text)
{
    auto number = [&](const std::string& s) {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
            fail(ErrorCode::Usage, "budget must be an integer or base^exponent, got \"" + text + "\"");
        }
        try {
            return std::stoull(s);
        } catch (const std::out_of_range&) {
            fail(ErrorCode::Usage, "budget " + text + " is too large");
        }
    };
    const auto caret = text.find('^');
    if (caret == std::string::npos) {
        return number(text);
    }
    const unsigned long long base = number(text.substr(0, caret));
    const unsigned long long exp = number(text.substr(caret + 1));
    unsigned long long out = 1;
    for (unsigned long long i = 0; i < exp; ++i) {
        if (base != 0 && out > UINT64_MAX / base) {
            fail(ErrorCode::Usage, "budget " + text + " is too large");
        }
        out *= base;
    }
    return out;
}

inline std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t limit)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size() || v < 1 || v > limit) {
            fail(ErrorCode::Usage, "\"" + item + "\" is not an index in 1.." + std::to_string(limit));
        }
        out.push_back(v - 1);
    }
    if (out.empty()) {
        fail(ErrorCode::Usage, "empty index list");
    }
    return out;
}

namespace detail {

inline io::Json load(const std::string& path) { return io::parse_json(io::read_text(path), path); }

/// A bare table file or a `solve` output that wraps one under "table".
inline SignalingTable load_table(const std::string& path)
{
    const auto j = load(path);
    return io::table_from_json(j.is_object() && j.contains("table") ? j.at("table") : j);
}

class Summary {
public:
    explicit Summary(bool decimal) : decimal_(decimal) {}

    std::string num(const Rational& r) const
    {
        if (!decimal_) {
            return r.str();
        }
        std::ostringstream ss;
        ss.precision(6);
        ss << r.str() << " (~" << r.to_double() << ")";
        return ss.str();
    }
    void line(const std::string& text) { text_ += text + "\n"; }
    [[nodiscard]] const std::string& str() const { return text_; }

private:
    bool decimal_;
    std::string text_;
};

inline std::string pairs_text(const DominanceSet& s)
{
    std::string out = "{";
    for (const auto& [a, b] : s) {
        out += (out.size() > 1 ? ", " : "") + std::string("(") + std::to_string(a + 1) + "," + std::to_string(b + 1) +
               ")";
    }
    return out + "}";
}

inline std::string label_of_file(const std::string& path) { return std::filesystem::path(path).stem().string(); }

inline io::Json analyze(const CommunicationStructure& m, Summary& sum)
{
    io::Json out;
    out["receivers"] = m.receivers();
    out["channels"] = m.channels();
    const auto s = dominance_set(m);
    out["dominance_set"] = io::to_json(s);
    const auto merged = merge_duplicate_receivers(m);
    io::Json classes = io::Json::array();
    for (const auto& members : merged.members) {
        io::Json c = io::Json::array();
        for (std::size_t i : members) {
            c.push_back(i + 1);
        }
        classes.push_back(c);
    }
    out["duplicate_classes"] = classes;
    const auto g = domination_graph(merged.structure);
    io::Json edges = io::Json::array();
    for (const auto& [a, b] : g.edges) {
        edges.push_back(io::Json::array({a + 1, b + 1}));
    }
    out["covering_edges"] = edges;
    out["forest"] = g.is_forest;
    sum.line("receivers " + std::to_string(m.receivers()) + ", channels " + std::to_string(m.channels()));
    sum.line("dominance set " + pairs_text(s));
    sum.line(std::string("forest: ") + (g.is_forest ? "true" : "false") +
             (merged.structure.receivers() < m.receivers() ? " (after merging identical receivers)" : ""));
    return out;
}

} // namespace detail

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"analyze", "compare",      "sperner", "netstruct", "solve",
                                                "verify-scheme", "share", "verify-share", "bunion", "reduce"};
    return names;
}

/// Parses and runs one command. Never throws; errors come back as a nonzero
/// status with the diagnostic in `summary`.
inline CommandResult run(const std::vector<std::string>& args)
{
    CommandResult result;
    if (!args.empty() && !args.front().empty() && args.front().front() != '-' &&
        std::find(command_names().begin(), command_names().end(), args.front()) == command_names().end()) {
        result.exit_status = exit_status(ErrorCode::UnknownCommand);
        result.summary = std::string(to_string(ErrorCode::UnknownCommand)) + ": " + args.front() + "\n";
        return result;
    }

    CLI::App app{"Multi-channel Bayesian persuasion toolkit", "multichan"};
    app.require_subcommand(1);
    bool decimal = false;
    app.add_flag("--decimal", decimal, "Add decimal approximations to the stderr summary");

    std::string a_path, b_path, c_path, out_path, lp_path, subset_text, from_path, eps_text, budget_text = "10^7";
    std::size_t k = 0;
    long q = 0;
    std::size_t circle = 0;
    std::string grid_text;

    auto* analyze = app.add_subcommand("analyze", "Dominance data of a structure or instance file");
    analyze->add_option("file", a_path)->required();
    auto* compare = app.add_subcommand("compare", "Superiority between two structures");
    compare->add_option("first", a_path)->required();
    compare->add_option("second", b_path)->required();
    auto* sperner = app.add_subcommand("sperner", "Dominance-free structure with the fewest channels");
    sperner->add_option("k", k)->required()->check(CLI::PositiveNumber);
    auto* netstruct = app.add_subcommand("netstruct", "Structure induced by a receiver network");
    netstruct->add_option("graph", a_path);
    netstruct->add_option("--circle", circle, "Circle on K vertices");
    netstruct->add_option("--grid", grid_text, "RxC grid");
    auto* solve = app.add_subcommand("solve", "Grid LP optimum and signaling table for a forest instance");
    solve->add_option("instance", a_path)->required();
    solve->add_option("--epsilon", eps_text, "Grid step bound, overrides the instance");
    solve->add_option("--out", out_path, "Write the signaling table here");
    solve->add_option("--dump-lp", lp_path, "Write the LP listing here");
    auto* verify_scheme_cmd = app.add_subcommand("verify-scheme", "Check a signaling table against an instance");
    verify_scheme_cmd->add_option("instance", a_path)->required();
    verify_scheme_cmd->add_option("table", b_path)->required();
    auto* share = app.add_subcommand("share", "Realize a table with one-time-pad channel slots");
    share->add_option("instance", a_path)->required();
    share->add_option("table", b_path)->required();
    share->add_option("--subset", subset_text, "Receivers to emulate privately, e.g. 1,3");
    share->add_option("--from", from_path, "Structure the table is realizable under (default: the instance's)");
    share->add_option("--q", q, "Modulus")->check(CLI::Range(2L, 1L << 20));
    share->add_option("--out", out_path, "Write the channel scheme here");
    auto* verify_share = app.add_subcommand("verify-share", "Exact zero-leak check of a channel scheme");
    verify_share->add_option("scheme", a_path)->required();
    verify_share->add_option("instance", b_path)->required();
    verify_share->add_option("table", c_path)->required();
    verify_share->add_option("--budget", budget_text, "Enumeration cap, e.g. 10^7");
    auto* bunion = app.add_subcommand("bunion", "Minimum b-union by enumeration");
    bunion->add_option("file", a_path)->required();
    bunion->add_option("--budget", budget_text, "Enumeration cap");
    auto* reduce = app.add_subcommand("reduce", "Persuasion instance and witness from a b-union instance");
    reduce->add_option("file", a_path)->required();
    reduce->add_option("--out", out_path, "instance.json,witness.json");
    reduce->add_option("--budget", budget_text, "Enumeration cap");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        result.summary = app.help();
        return result;
    } catch (const CLI::ParseError& e) {
        result.exit_status = exit_status(ErrorCode::Usage);
        result.summary = std::string(to_string(ErrorCode::Usage)) + ": " + e.what() + "\n";
        return result;
    }

    detail::Summary sum(decimal);
    try {
        io::Json out;
        if (analyze->parsed()) {
            out = detail::analyze(io::structure_from_json(detail::load(a_path)), sum);
        } else if (compare->parsed()) {
            const auto m1 = io::structure_from_json(detail::load(a_path));
            const auto m2 = io::structure_from_json(detail::load(b_path));
            const std::string n1 = detail::label_of_file(a_path), n2 = detail::label_of_file(b_path);
            const bool ab = is_superior(m1, m2), ba = is_superior(m2, m1);
            out["first"] = n1;
            out["second"] = n2;
            out["first_superior"] = ab;
            out["second_superior"] = ba;
            sum.line(n1 + " ⪰ " + n2 + ": " + (ab ? "true" : "false") + "; " + n2 + " ⪰ " + n1 + ": " +
                     (ba ? "true" : "false"));
        } else if (sperner->parsed()) {
            const auto m = sperner_structure(k);
            out["k"] = k;
            out["channels"] = m.channels();
            out["structure"] = io::to_json(m);
            out["dominance_free"] = dominance_set(m).empty();
            sum.line("k = " + std::to_string(k) + ": " + std::to_string(m.channels()) + " channels");
        } else if (netstruct->parsed()) {
            const int sources = !a_path.empty() + (circle > 0) + !grid_text.empty();
            if (sources != 1) {
                fail(ErrorCode::Usage, "give exactly one of a graph file, --circle or --grid");
            }
            NetworkGraph g;
            if (!a_path.empty()) {
                g = io::graph_from_json(detail::load(a_path));
            } else if (circle > 0) {
                g = NetworkGraph::circle(circle);
            } else {
                const auto x = grid_text.find('x');
                if (x == std::string::npos) {
                    fail(ErrorCode::Usage, "--grid expects RxC");
                }
                g = NetworkGraph::grid(std::stoul(grid_text.substr(0, x)), std::stoul(grid_text.substr(x + 1)));
            }
            const auto m = network_structure(g);
            const bool condition = check_private_equivalence_condition(g);
            const auto s = dominance_set(m);
            out["graph"] = io::to_json(g);
            out["structure"] = io::to_json(m);
            out["condition"] = condition;
            out["dominance_set"] = io::to_json(s);
            sum.line(std::string("condition: ") + (condition ? "holds" : "fails") + "; dominance set " +
                     detail::pairs_text(s));
        } else if (solve->parsed()) {
            auto inst = io::instance_from_json(detail::load(a_path));
            Rational eps;
            if (!eps_text.empty()) {
                eps = Rational::parse(eps_text);
            } else if (inst.epsilon) {
                eps = *inst.epsilon;
            } else {
                fail(ErrorCode::Usage, "no epsilon: pass --epsilon or set it in the instance");
            }
            check_epsilon(eps);
            const auto r = solve_fptas(inst, eps);
            if (!lp_path.empty()) {
                io::write_atomic(lp_path, to_lp_listing(r.solution.program.lp));
            }
            out["objective"] = r.solution.objective.str();
            out["grid_step"] = Rational(1, r.denominator).str();
            out["table_value"] = evaluate_table(r.table, inst).str();
            out["table"] = io::to_json(r.table);
            if (!out_path.empty()) {
                io::write_atomic(out_path, io::dump(out));
            }
            sum.line("objective " + sum.num(r.solution.objective) + " on the 1/" + std::to_string(r.denominator) +
                     " grid, " + std::to_string(r.table.profiles.size()) + " profiles");
        } else if (verify_scheme_cmd->parsed()) {
            const auto inst = io::instance_from_json(detail::load(a_path));
            const auto table = detail::load_table(b_path);
            auto problems = table_violations(table, inst.prior);
            if (problems.empty() && table.receivers() != inst.structure.receivers()) {
                problems.push_back("table covers " + std::to_string(table.receivers()) + " receivers");
            }
            if (problems.empty()) {
                const auto more = realizability_violations(table, inst.prior, inst.structure);
                problems.insert(problems.end(), more.begin(), more.end());
                for (const auto& [a, b] : dominance_set(inst.structure)) {
                    if (!mps_coupling(label_marginal(table, inst.prior, a), label_marginal(table, inst.prior, b))) {
                        problems.push_back("receiver " + std::to_string(a + 1) + " marginal is not a spread of " +
                                           std::to_string(b + 1) + "'s");
                    }
                }
            }
            out["valid"] = problems.empty();
            out["problems"] = problems;
            if (problems.empty()) {
                const Rational v = evaluate_table(table, inst);
                out["value"] = v.str();
                sum.line("table valid under the structure, value " + sum.num(v));
            } else {
                sum.line("table invalid: " + problems.front());
                result.exit_status = 3;
            }
        } else if (share->parsed()) {
            const auto inst = io::instance_from_json(detail::load(a_path));
            const auto table = detail::load_table(b_path);
            const std::optional<long> modulus = q > 0 ? std::optional<long>(q) : std::nullopt;
            ChannelScheme s;
            if (!subset_text.empty()) {
                if (!from_path.empty()) {
                    fail(ErrorCode::Usage, "--subset and --from exclude each other");
                }
                const auto subset = parse_index_list(subset_text, inst.structure.receivers());
                s = emulate_private_subset(inst.structure, subset, table, inst.prior, modulus);
                out["mode"] = "private_subset";
            } else {
                const auto from = from_path.empty() ? inst.structure : io::structure_from_json(detail::load(from_path));
                s = transport_scheme(from, inst.structure, table, inst.prior, modulus);
                out["mode"] = "transport";
            }
            out["modulus"] = s.modulus;
            out["keys"] = s.keys;
            if (out_path.empty()) {
                out["scheme"] = io::to_json(s);
            } else {
                io::write_atomic(out_path, io::dump(io::to_json(s)));
                out["scheme_file"] = out_path;
            }
            sum.line("scheme over Z_" + std::to_string(s.modulus) + " with " + std::to_string(s.keys) + " keys");
        } else if (verify_share->parsed()) {
            const auto s = io::channel_scheme_from_json(detail::load(a_path));
            const auto inst = io::instance_from_json(detail::load(b_path));
            const auto table = detail::load_table(c_path);
            const auto report = verify_scheme(s, inst.structure, table, inst.prior, parse_budget(budget_text));
            out = io::to_json(report);
            for (const auto& c : report.receivers) {
                sum.line("receiver " + std::to_string(c.receiver + 1) + ": (a) " + (c.posterior_ok ? "ok" : "FAIL") +
                         ", (b) " + (c.leak_free ? "ok" : "FAIL") + (c.detail.empty() ? "" : " - " + c.detail));
            }
            sum.line(std::string("joint law: ") + (report.joint_matches ? "matches" : "differs"));
            if (!report.passed()) {
                result.exit_status = 3;
            }
        } else if (bunion->parsed()) {
            const auto inst = io::bunion_from_json(detail::load(a_path));
            const auto r = min_b_union(inst, parse_budget(budget_text));
            out["h"] = r.h;
            io::Json w = io::Json::array();
            for (std::size_t j : r.witness) {
                w.push_back(j + 1);
            }
            out["witness"] = w;
            sum.line("h = " + std::to_string(r.h) + ", witness " + w.dump());
        } else if (reduce->parsed()) {
            const auto inst = io::bunion_from_json(detail::load(a_path));
            std::string inst_path, witness_path;
            if (!out_path.empty()) {
                const auto comma = out_path.find(',');
                if (comma == std::string::npos || comma == 0 || comma + 1 == out_path.size()) {
                    fail(ErrorCode::Usage, "--out expects instance.json,witness.json");
                }
                inst_path = out_path.substr(0, comma);
                witness_path = out_path.substr(comma + 1);
            }
            const auto r = build_reduction(inst, parse_budget(budget_text));
            const auto report = verify_reduction(r);
            out["h"] = r.h;
            io::Json w = io::Json::array();
            for (std::size_t j : r.witness) {
                w.push_back(j + 1);
            }
            out["witness"] = w;
            out["closed_form"] = r.closed_form.str();
            out["witness_value"] = report.value.str();
            out["checks"] = io::Json{{"table_valid", report.table_valid},
                                     {"set_receivers", report.set_receivers_ok},
                                     {"union", report.union_ok},
                                     {"value_matches_closed_form", report.value_matches}};
            out["failures"] = report.failures;
            if (inst_path.empty()) {
                out["instance"] = io::to_json(r.instance);
                out["witness_table"] = io::to_json(r.witness_table);
            } else {
                io::write_atomic(inst_path, io::dump(io::to_json(r.instance)));
                io::write_atomic(witness_path, io::dump(io::to_json(r.witness_table)));
            }
            sum.line("h = " + std::to_string(r.h) + ", closed form (5w-h)/2 = " + sum.num(r.closed_form) +
                     ", witness value " + sum.num(report.value));
            for (const auto& f : report.failures) {
                sum.line("check failed: " + f);
            }
        }
        result.output = io::dump(out);
    } catch (const Error& e) {
        result.exit_status = exit_status(e.code());
        result.output.clear();
        result.summary = sum.str() + e.what() + "\n";
        return result;
    } catch (const std::exception& e) {
        result.exit_status = 2;
        result.output.clear();
        result.summary = sum.str() + std::string("InvalidInput: ") + e.what() + "\n";
        return result;
    }
    result.summary = sum.str();
    return result;
}

} // namespace multichan::cli
