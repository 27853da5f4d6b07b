#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "multichan/core_model.hpp"
#include "multichan/dominance.hpp"
#include "multichan/error.hpp"
#include "multichan/fptas.hpp"
#include "multichan/hardness.hpp"
#include "multichan/instance.hpp"
#include "multichan/rational.hpp"
#include "multichan/secret_share.hpp"
#include "multichan/signaling_table.hpp"

// File formats. Indices (receivers, channels, states, keys, set elements) are
// 1-based; every rational is a "num/den" string.

namespace multichan::io {

using Json = nlohmann::ordered_json;

inline std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::FileError, "cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes next to the destination, then renames over it.
inline void write_atomic(const std::string& path, const std::string& text)
{
    const std::filesystem::path dest(path);
    std::filesystem::path tmp = dest;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            fail(ErrorCode::FileError, "cannot write " + tmp.string());
        }
        out << text;
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            fail(ErrorCode::FileError, "short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, dest, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        fail(ErrorCode::FileError, "cannot move " + tmp.string() + " to " + path + ": " + ec.message());
    }
}

inline Json parse_json(const std::string& text, const std::string& what)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        fail(ErrorCode::ParseError, what + ": " + e.what());
    }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) {
        fail(ErrorCode::ParseError, std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

inline std::size_t index1(const Json& j, std::size_t limit, const std::string& what)
{
    if (!j.is_number_integer() || j.get<long long>() < 1 || static_cast<std::size_t>(j.get<long long>()) > limit) {
        fail(ErrorCode::ParseError, what + " must be an integer in 1.." + std::to_string(limit));
    }
    return static_cast<std::size_t>(j.get<long long>()) - 1;
}

inline std::size_t count(const Json& j, const std::string& what)
{
    if (!j.is_number_integer() || j.get<long long>() < 0) {
        fail(ErrorCode::ParseError, what + " must be a nonnegative integer");
    }
    return static_cast<std::size_t>(j.get<long long>());
}

inline const Json& array(const Json& j, const std::string& what)
{
    if (!j.is_array()) {
        fail(ErrorCode::ParseError, what + " must be an array");
    }
    return j;
}

/// Runs a reader and turns stray JSON type errors into ParseError.
template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const Json::exception& e) {
        fail(ErrorCode::ParseError, what + ": " + e.what());
    }
}

} // namespace detail

inline Json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const Json& j)
{
    if (!j.is_string()) {
        fail(ErrorCode::ParseError, "rational values must be \"num/den\" strings");
    }
    return Rational::parse(j.get<std::string>());
}

inline Json to_json(const PosteriorPoint& p)
{
    Json out = Json::array();
    for (const auto& v : p.values()) {
        out.push_back(v.str());
    }
    return out;
}

inline PosteriorPoint point_from_json(const Json& j)
{
    std::vector<Rational> v;
    for (const auto& e : detail::array(j, "posterior point")) {
        v.push_back(rational_from_json(e));
    }
    return PosteriorPoint(std::move(v));
}

inline Json to_json(const CommunicationStructure& m) { return m.to_matrix(); }

inline std::vector<std::vector<int>> matrix_from_json(const Json& j)
{
    std::vector<std::vector<int>> rows;
    for (const auto& r : detail::array(j, "structure")) {
        std::vector<int> row;
        for (const auto& e : detail::array(r, "structure row")) {
            if (!e.is_number_integer()) {
                fail(ErrorCode::ParseError, "structure entries must be integers");
            }
            row.push_back(e.get<int>());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Accepts a bare matrix or any document with a "structure" field.
inline CommunicationStructure structure_from_json(const Json& j)
{
    return CommunicationStructure(matrix_from_json(j.is_object() ? detail::field(j, "structure") : j));
}

inline Json to_json(const ReceiverUtility& u)
{
    Json out;
    if (const auto* t = std::get_if<TableUtility>(&u)) {
        out["type"] = "table";
        out["values"] = Json::array();
        for (const auto& [point, value] : t->values) {
            out["values"].push_back(Json{{"point", to_json(point)}, {"value", value.str()}});
        }
    } else if (const auto* c = std::get_if<ConstantUtility>(&u)) {
        out["type"] = "constant";
        out["value"] = c->value.str();
    } else {
        const auto& th = std::get<ThresholdUtility>(u);
        out["type"] = "threshold";
        out["state"] = th.state + 1;
        out["cutoff"] = th.cutoff.str();
        out["strict"] = th.strict;
        out["above"] = th.above.str();
        out["below"] = th.below.str();
    }
    return out;
}

inline ReceiverUtility receiver_utility_from_json(const Json& j, std::size_t states)
{
    const Json& type = detail::field(j, "type");
    if (type == "table") {
        TableUtility t;
        for (const auto& e : detail::array(detail::field(j, "values"), "table values")) {
            const auto point = point_from_json(detail::field(e, "point"));
            if (!t.values.emplace(point, rational_from_json(detail::field(e, "value"))).second) {
                fail(ErrorCode::ParseError, "table repeats point " + point.str());
            }
        }
        return t;
    }
    if (type == "constant") {
        return ConstantUtility{rational_from_json(detail::field(j, "value"))};
    }
    if (type == "threshold") {
        ThresholdUtility th;
        th.state = detail::index1(detail::field(j, "state"), states, "threshold state");
        th.cutoff = rational_from_json(detail::field(j, "cutoff"));
        if (j.contains("strict")) {
            if (!j.at("strict").is_boolean()) {
                fail(ErrorCode::ParseError, "\"strict\" must be a boolean");
            }
            th.strict = j.at("strict").get<bool>();
        }
        if (j.contains("above")) {
            th.above = rational_from_json(j.at("above"));
        }
        if (j.contains("below")) {
            th.below = rational_from_json(j.at("below"));
        }
        return th;
    }
    fail(ErrorCode::ParseError, "unknown utility type " + type.dump());
}

inline Json to_json(const SenderUtility& u)
{
    Json out;
    if (const auto* spec = std::get_if<UtilitySpec>(&u)) {
        out["kind"] = "additive";
        out["class"] = spec->declared == UtilityClass::Lipschitz ? "lipschitz" : "piecewise_constant";
        if (spec->lipschitz) {
            out["lipschitz"] = spec->lipschitz->str();
        }
        out["receivers"] = Json::array();
        for (const auto& r : spec->receivers) {
            out["receivers"].push_back(to_json(r));
        }
        return out;
    }
    const auto& sm = std::get<SupermajorityUtility>(u);
    out["kind"] = "supermajority";
    out["groups"] = Json::array();
    for (const auto& g : sm.groups) {
        Json members = Json::array();
        for (std::size_t i : g) {
            members.push_back(i + 1);
        }
        out["groups"].push_back(members);
    }
    out["weights"] = Json::array();
    for (const auto& w : sm.weights) {
        out["weights"].push_back(w.str());
    }
    out["thresholds"] = sm.thresholds;
    out["action_rules"] = Json::array();
    for (const auto& r : sm.action_rules) {
        out["action_rules"].push_back(to_json(r));
    }
    return out;
}

inline SenderUtility sender_utility_from_json(const Json& j, std::size_t states, std::size_t receivers)
{
    const Json& kind = detail::field(j, "kind");
    if (kind == "additive") {
        UtilitySpec spec;
        if (j.contains("class")) {
            const Json& c = j.at("class");
            if (c == "lipschitz") {
                spec.declared = UtilityClass::Lipschitz;
            } else if (c != "piecewise_constant") {
                fail(ErrorCode::ParseError, "unknown utility class " + c.dump());
            }
        }
        if (j.contains("lipschitz")) {
            spec.lipschitz = rational_from_json(j.at("lipschitz"));
        }
        for (const auto& r : detail::array(detail::field(j, "receivers"), "receiver utilities")) {
            spec.receivers.push_back(receiver_utility_from_json(r, states));
        }
        return spec;
    }
    if (kind == "supermajority") {
        SupermajorityUtility sm;
        for (const auto& g : detail::array(detail::field(j, "groups"), "groups")) {
            std::vector<std::size_t> members;
            for (const auto& i : detail::array(g, "group")) {
                members.push_back(detail::index1(i, receivers, "group member"));
            }
            sm.groups.push_back(std::move(members));
        }
        for (const auto& w : detail::array(detail::field(j, "weights"), "weights")) {
            sm.weights.push_back(rational_from_json(w));
        }
        for (const auto& t : detail::array(detail::field(j, "thresholds"), "thresholds")) {
            sm.thresholds.push_back(detail::count(t, "threshold"));
        }
        for (const auto& r : detail::array(detail::field(j, "action_rules"), "action rules")) {
            sm.action_rules.push_back(receiver_utility_from_json(r, states));
        }
        return sm;
    }
    fail(ErrorCode::ParseError, "unknown utility kind " + kind.dump());
}

inline Json to_json(const PersuasionInstance& inst)
{
    Json out;
    out["states"] = inst.states.names();
    out["prior"] = to_json(inst.prior.point());
    out["structure"] = to_json(inst.structure);
    out["utilities"] = to_json(inst.utilities);
    if (inst.epsilon) {
        out["epsilon"] = inst.epsilon->str();
    }
    return out;
}

inline PersuasionInstance instance_from_json(const Json& j)
{
    return detail::guarded("instance", [&] {
        RawInstance raw;
        for (const auto& s : detail::array(detail::field(j, "states"), "states")) {
            raw.states.push_back(s.is_string() ? s.get<std::string>() : s.dump());
        }
        for (const auto& p : detail::array(detail::field(j, "prior"), "prior")) {
            if (!p.is_string()) {
                fail(ErrorCode::ParseError, "prior entries must be \"num/den\" strings");
            }
            raw.prior.push_back(p.get<std::string>());
        }
        raw.structure = matrix_from_json(detail::field(j, "structure"));
        raw.utilities = sender_utility_from_json(detail::field(j, "utilities"), raw.states.size(), raw.structure.size());
        if (j.contains("epsilon")) {
            if (!j.at("epsilon").is_string()) {
                fail(ErrorCode::ParseError, "epsilon must be a \"num/den\" string");
            }
            raw.epsilon = j.at("epsilon").get<std::string>();
        }
        return validate_instance(raw);
    });
}

inline Json to_json(const SignalingTable& t)
{
    Json out;
    out["states"] = t.states();
    out["receivers"] = t.receivers();
    out["profiles"] = Json::array();
    for (std::size_t p = 0; p < t.profiles.size(); ++p) {
        Json labels = Json::array();
        for (const auto& l : t.profiles[p]) {
            labels.push_back(to_json(l));
        }
        Json cond = Json::array();
        for (std::size_t s = 0; s < t.states(); ++s) {
            cond.push_back(t.conditional[s][p].str());
        }
        out["profiles"].push_back(Json{{"labels", labels}, {"conditional", cond}});
    }
    return out;
}

inline SignalingTable table_from_json(const Json& j)
{
    return detail::guarded("table", [&] {
        const std::size_t states = detail::count(detail::field(j, "states"), "states");
        const std::size_t receivers = detail::count(detail::field(j, "receivers"), "receivers");
        std::map<Profile, std::vector<Rational>> rows;
        for (const auto& e : detail::array(detail::field(j, "profiles"), "profiles")) {
            Profile labels;
            for (const auto& l : detail::array(detail::field(e, "labels"), "labels")) {
                labels.push_back(point_from_json(l));
            }
            if (labels.size() != receivers) {
                fail(ErrorCode::ParseError, "profile has " + std::to_string(labels.size()) + " labels, expected " +
                                                std::to_string(receivers));
            }
            std::vector<Rational> cond;
            for (const auto& c : detail::array(detail::field(e, "conditional"), "conditional")) {
                cond.push_back(rational_from_json(c));
            }
            if (cond.size() != states) {
                fail(ErrorCode::ParseError, "profile has " + std::to_string(cond.size()) +
                                                " conditional entries, expected " + std::to_string(states));
            }
            if (!rows.emplace(labels, cond).second) {
                fail(ErrorCode::ParseError, "table lists a profile twice");
            }
        }
        return SignalingTable::from_map(states, rows);
    });
}

inline Json to_json(const NetworkGraph& g)
{
    Json edges = Json::array();
    for (const auto& [a, b] : g.edges()) {
        edges.push_back(Json::array({a + 1, b + 1}));
    }
    return Json{{"k", g.size()}, {"edges", edges}};
}

inline NetworkGraph graph_from_json(const Json& j)
{
    return detail::guarded("graph", [&] {
        const std::size_t k = detail::count(detail::field(j, "k"), "k");
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& e : detail::array(detail::field(j, "edges"), "edges")) {
            if (!e.is_array() || e.size() != 2) {
                fail(ErrorCode::ParseError, "edges are pairs of vertices");
            }
            edges.emplace_back(detail::index1(e[0], k, "edge endpoint"), detail::index1(e[1], k, "edge endpoint"));
        }
        return NetworkGraph(k, edges);
    });
}

inline Json to_json(const BUnionInstance& inst)
{
    return Json{{"w", inst.w}, {"sets", inst.sets}, {"b", inst.b}};
}

inline BUnionInstance bunion_from_json(const Json& j)
{
    return detail::guarded("b-union", [&] {
        BUnionInstance inst;
        inst.w = detail::count(detail::field(j, "w"), "w");
        for (const auto& s : detail::array(detail::field(j, "sets"), "sets")) {
            std::vector<std::size_t> set;
            for (const auto& e : detail::array(s, "set")) {
                set.push_back(detail::count(e, "set element"));
            }
            inst.sets.push_back(std::move(set));
        }
        inst.b = detail::count(detail::field(j, "b"), "b");
        validate_bunion(inst);
        return inst;
    });
}

/// Channel scheme layout plus, when `execution_budget` allows, the explicit
/// per-state execution list (informational; the reader rebuilds it).
inline Json to_json(const ChannelScheme& s, unsigned long long execution_budget = 1ULL << 16)
{
    Json out;
    out["modulus"] = s.modulus;
    out["keys"] = s.keys;
    out["alphabets"] = Json::array();
    for (const auto& a : s.alphabets) {
        if (!a) {
            out["alphabets"].push_back(nullptr);
            continue;
        }
        Json codes = Json::array();
        for (const auto& [label, code] : a->codes) {
            codes.push_back(Json{{"label", to_json(label)}, {"code", code}});
        }
        out["alphabets"].push_back(codes);
    }
    out["channels"] = Json::array();
    for (const auto& slots : s.channels) {
        Json ch = Json::array();
        for (const auto& slot : slots) {
            Json keys = Json::array();
            for (std::size_t k : slot.keys) {
                keys.push_back(k + 1);
            }
            Json js{{"label_of", slot.label_of ? Json(*slot.label_of + 1) : Json(nullptr)}, {"keys", keys}};
            ch.push_back(js);
        }
        out["channels"].push_back(ch);
    }
    out["source"] = to_json(s.source);
    try {
        const auto ex = executions(s, execution_budget);
        Json per_state = Json::array();
        for (std::size_t st = 0; st < ex.size(); ++st) {
            Json runs = Json::array();
            for (const auto& e : ex[st]) {
                runs.push_back(Json{{"probability", e.probability.str()}, {"channels", e.symbols}});
            }
            per_state.push_back(Json{{"state", st + 1}, {"executions", runs}});
        }
        out["executions"] = per_state;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) {
            throw;
        }
        out["executions"] = nullptr;
    }
    return out;
}

inline ChannelScheme channel_scheme_from_json(const Json& j)
{
    return detail::guarded("channel scheme", [&] {
        ChannelScheme s;
        const Json& q = detail::field(j, "modulus");
        if (!q.is_number_integer() || q.get<long long>() < 2) {
            fail(ErrorCode::ParseError, "modulus must be an integer >= 2");
        }
        s.modulus = q.get<long>();
        s.keys = detail::count(detail::field(j, "keys"), "keys");
        s.source = table_from_json(detail::field(j, "source"));
        for (const auto& a : detail::array(detail::field(j, "alphabets"), "alphabets")) {
            if (a.is_null()) {
                s.alphabets.push_back(std::nullopt);
                continue;
            }
            LabelAlphabet alpha;
            alpha.modulus = s.modulus;
            std::set<long> used;
            for (const auto& e : detail::array(a, "alphabet")) {
                const long code = static_cast<long>(detail::count(detail::field(e, "code"), "code"));
                if (code >= s.modulus || !used.insert(code).second) {
                    fail(ErrorCode::ParseError, "alphabet codes must be distinct elements of Z_q");
                }
                alpha.codes.emplace(point_from_json(detail::field(e, "label")), code);
            }
            s.alphabets.push_back(std::move(alpha));
        }
        const std::size_t k = s.alphabets.size();
        if (!s.source.profiles.empty() && s.source.receivers() != k) {
            fail(ErrorCode::ParseError, "source table and alphabets differ in receiver count");
        }
        for (const auto& ch : detail::array(detail::field(j, "channels"), "channels")) {
            std::vector<Slot> slots;
            for (const auto& e : detail::array(ch, "channel")) {
                Slot slot;
                const Json& owner = detail::field(e, "label_of");
                if (!owner.is_null()) {
                    slot.label_of = detail::index1(owner, k, "label_of");
                    if (!s.alphabets[*slot.label_of]) {
                        fail(ErrorCode::ParseError, "slot carries a receiver without an alphabet");
                    }
                }
                for (const auto& key : detail::array(detail::field(e, "keys"), "keys")) {
                    slot.keys.push_back(detail::index1(key, s.keys, "key"));
                }
                slots.push_back(std::move(slot));
            }
            s.channels.push_back(std::move(slots));
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (!s.alphabets[i]) {
                continue;
            }
            for (const auto& p : s.source.profiles) {
                (void)s.alphabets[i]->code(p[i]);
            }
        }
        return s;
    });
}

inline Json to_json(const VerificationReport& r)
{
    Json out;
    out["passed"] = r.passed();
    out["enumerated"] = r.enumerated;
    out["joint_matches"] = r.joint_matches;
    if (!r.joint_detail.empty()) {
        out["joint_detail"] = r.joint_detail;
    }
    out["receivers"] = Json::array();
    for (const auto& c : r.receivers) {
        Json e{{"receiver", c.receiver + 1}, {"posterior_ok", c.posterior_ok}, {"leak_free", c.leak_free}};
        if (!c.detail.empty()) {
            e["detail"] = c.detail;
        }
        out["receivers"].push_back(e);
    }
    return out;
}

inline Json to_json(const DominanceSet& s)
{
    Json out = Json::array();
    for (const auto& [a, b] : s) {
        out.push_back(Json::array({a + 1, b + 1}));
    }
    return out;
}

} // namespace multichan::io
