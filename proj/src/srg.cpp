#include "wftc/srg.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <deque>
#include <functional>
#include <set>

namespace wftc {

namespace {

void hash_mix(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_value(const Value& v) {
    return v ? std::hash<std::string>{}(*v) : 0x51ed270b27ULL;
}

// trailing integer of a token, or -1
long long token_suffix(const std::string& s, std::string* prefix = nullptr) {
    size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    if (prefix) *prefix = s.substr(0, i);
    if (i == s.size() || s.size() - i > 18) return -1;
    return std::stoll(s.substr(i));
}

Value source_value(const OpSource& src, const std::vector<Value>& data) {
    if (src.is_item) return data[src.item];
    return src.constant;
}

bool record_matches(const Record& r, const std::vector<std::pair<int, OpSource>>& where,
                    const std::vector<Value>& data) {
    for (const auto& [col, src] : where) {
        Value v = source_value(src, data);
        if (!v || r[col] != v) return false;
    }
    return true;
}

Tri eval_predicate(const WftcNet& net, const Predicate& p, const std::vector<Value>& data,
                   const std::vector<Record>& table) {
    const Value& v = data[p.item];
    if (!v) return Tri::U;
    switch (p.kind) {
    case PredKind::Membership:
        for (const auto& r : table)
            if (r[p.column] == v) return Tri::T;
        return Tri::F;
    case PredKind::EqualsConst: return *v == p.constant ? Tri::T : Tri::F;
    case PredKind::IsDefined: return Tri::T;
    }
    (void)net;
    return Tri::U;
}

void apply_ops(const Transition& t, const std::vector<Value>& data, std::vector<Record>& table,
               std::size_t width) {
    for (const auto& op : t.ops) {
        switch (op.kind) {
        case TableOp::Sel: break;
        case TableOp::Ins: {
            Record rec(width);
            for (const auto& [col, src] : op.assigns) rec[col] = source_value(src, data);
            if (std::find(table.begin(), table.end(), rec) == table.end()) table.push_back(rec);
            break;
        }
        case TableOp::Del:
            table.erase(std::remove_if(table.begin(), table.end(),
                                       [&](const Record& r) { return record_matches(r, op.where, data); }),
                        table.end());
            break;
        case TableOp::Upd:
            for (auto& r : table)
                if (record_matches(r, op.where, data))
                    for (const auto& [col, src] : op.assigns) r[col] = source_value(src, data);
            break;
        }
    }
    canonicalize(table);
}

}  // namespace

std::size_t StateHash::operator()(const StateC& s) const {
    std::size_t h = 0;
    for (int m : s.marking) hash_mix(h, static_cast<std::size_t>(m));
    for (const auto& v : s.data) hash_mix(h, hash_value(v));
    for (const auto& r : s.table) {
        hash_mix(h, 0xabcdefULL);
        for (const auto& v : r) hash_mix(h, hash_value(v));
    }
    for (Tri g : s.sigma) hash_mix(h, static_cast<std::size_t>(g));
    return h;
}

void Srg::index_edges() {
    succ.assign(states.size(), {});
    pred.assign(states.size(), {});
    for (size_t i = 0; i < edges.size(); ++i) {
        succ[edges[i].from].push_back(static_cast<int>(i));
        pred[edges[i].to].push_back(static_cast<int>(i));
    }
}

StateC initial_state(const WftcNet& net) {
    StateC s;
    s.marking.assign(net.places.size(), 0);
    if (net.start >= 0) s.marking[net.start] = 1;
    s.data.assign(net.items.size(), std::nullopt);
    s.table = net.initial_table;
    canonicalize(s.table);
    s.sigma.assign(net.guards.size(), Tri::U);
    return s;
}

std::vector<std::string> refine(const WftcNet& net, const StateC& state, int item) {
    const std::string& name = net.items.at(item);
    int col = net.binding.empty() ? -1 : net.binding[item];
    if (col < 0) return {name};
    std::set<std::string> vals;
    long long top = 0;
    for (const auto& r : state.table) {
        if (!r[col]) continue;
        vals.insert(*r[col]);
        std::string prefix;
        long long k = token_suffix(*r[col], &prefix);
        if (prefix == name && k > top) top = k;
    }
    std::vector<std::string> out(vals.begin(), vals.end());
    out.push_back(name + std::to_string(top + 1));
    return out;
}

bool enabled(const WftcNet& net, const StateC& state, int ti) {
    if (ti < 0 || static_cast<size_t>(ti) >= net.transitions.size()) throw ModelError("unknown transition");
    const Transition& t = net.transitions[ti];
    for (int p : net.pre_t[ti])
        if (state.marking[p] < 1) return false;
    for (int d : t.rd)
        if (!state.data[d]) return false;
    if (t.guard >= 0 && state.sigma[t.guard] != Tri::T) return false;
    for (const auto& op : t.ops) {
        if (op.kind == TableOp::Sel) {
            bool any = false;
            for (const auto& r : state.table)
                if (op.column < 0 || r[op.column]) any = true;
            if (!any) return false;
        } else if (op.kind == TableOp::Del || op.kind == TableOp::Upd) {
            bool depends_on_write = false;
            for (const auto& [col, src] : op.where)
                if (src.is_item && std::find(t.wt.begin(), t.wt.end(), src.item) != t.wt.end())
                    depends_on_write = true;
            if (depends_on_write) continue;
            bool any = false;
            for (const auto& r : state.table)
                if (record_matches(r, op.where, state.data)) any = true;
            if (!any) return false;
        }
    }
    return true;
}

std::vector<Successor> fire(const WftcNet& net, const StateC& state, int ti, Mode mode) {
    if (!enabled(net, state, ti)) throw ModelError("transition " + net.transitions.at(ti).id + " is not enabled");
    const Transition& t = net.transitions[ti];

    StateC moved = state;
    for (int p : net.pre_t[ti]) --moved.marking[p];
    for (int p : net.post_t[ti]) ++moved.marking[p];

    std::vector<std::vector<std::string>> choices;
    for (int d : t.wt) choices.push_back(refine(net, state, d));

    std::vector<char> touched(net.items.size(), 0);
    for (int d : t.wt) touched[d] = 1;
    for (int d : t.dt) touched[d] = 1;
    std::vector<int> affected;
    for (size_t g = 0; g < net.guards.size(); ++g)
        for (int d : net.guard_items[g])
            if (touched[d]) {
                affected.push_back(static_cast<int>(g));
                break;
            }

    std::vector<Successor> out;
    std::vector<size_t> pick(choices.size(), 0);
    while (true) {
        StateC s = moved;
        for (size_t i = 0; i < t.wt.size(); ++i) s.data[t.wt[i]] = choices[i][pick[i]];
        for (int d : t.dt) s.data[d] = std::nullopt;
        apply_ops(t, s.data, s.table, net.schema.attrs.size());

        std::vector<Tri> pv(net.predicates.size());
        for (size_t p = 0; p < net.predicates.size(); ++p)
            pv[p] = eval_predicate(net, net.predicates[p], s.data, s.table);
        for (int g : affected) s.sigma[g] = eval_bool(net.guards[g].expr, pv);

        if (mode == Mode::Constrained) {
            if (constraint_consistent(s.sigma, net.constraints)) out.push_back({s, false});
        } else {
            std::vector<int> free;
            for (int g : affected)
                if (s.sigma[g] != Tri::U) free.push_back(g);
            for (unsigned long bits = 0; bits < (1UL << free.size()); ++bits) {
                StateC v = s;
                for (size_t i = 0; i < free.size(); ++i)
                    v.sigma[free[i]] = (bits >> (free.size() - 1 - i)) & 1 ? Tri::F : Tri::T;
                bool ok = constraint_consistent(v.sigma, net.constraints);
                out.push_back({std::move(v), !ok});
            }
        }

        size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < choices[i].size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    return out;
}

std::size_t default_state_limit() {
    if (const char* env = std::getenv("WFTC_STATE_LIMIT")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 1000000;
}

Srg build_srg(const WftcNet& net, Mode mode, std::size_t state_limit) {
    auto t0 = std::chrono::steady_clock::now();
    Srg g;
    g.mode = mode;
    std::unordered_map<StateC, int, StateHash> ids;

    StateC c0 = initial_state(net);
    g.states.push_back(c0);
    g.pseudo.push_back(!constraint_consistent(c0.sigma, net.constraints));
    ids.emplace(c0, 0);
    std::deque<int> work{0};

    while (!work.empty()) {
        int cur = work.front();
        work.pop_front();
        for (size_t t = 0; t < net.transitions.size(); ++t) {
            if (!enabled(net, g.states[cur], static_cast<int>(t))) continue;
            for (auto& succ : fire(net, g.states[cur], static_cast<int>(t), mode)) {
                auto it = ids.find(succ.state);
                int id;
                if (it == ids.end()) {
                    if (g.states.size() >= state_limit)
                        throw StateLimitError("state limit of " + std::to_string(state_limit) + " exceeded");
                    id = static_cast<int>(g.states.size());
                    ids.emplace(succ.state, id);
                    g.states.push_back(std::move(succ.state));
                    g.pseudo.push_back(succ.pseudo);
                    work.push_back(id);
                } else {
                    id = it->second;
                }
                g.edges.push_back({cur, static_cast<int>(t), id});
            }
        }
    }
    g.index_edges();
    g.build_millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return g;
}

SrgStats srg_stats(const Srg& srg) {
    SrgStats s;
    s.state_count = srg.states.size();
    s.arc_count = srg.edges.size();
    s.pseudo_count = static_cast<std::size_t>(std::count(srg.pseudo.begin(), srg.pseudo.end(), 1));
    s.build_millis = srg.build_millis;
    return s;
}

std::string format_value(const Value& v) { return v ? *v : "_"; }

std::string format_state(const WftcNet& net, const StateC& s) {
    std::string out = "{";
    bool first = true;
    for (size_t p = 0; p < s.marking.size(); ++p)
        for (int k = 0; k < s.marking[p]; ++k) {
            if (!first) out += ",";
            out += net.places[p];
            first = false;
        }
    out += "} {";
    for (size_t i = 0; i < s.data.size(); ++i) out += (i ? "," : "") + format_value(s.data[i]);
    out += "} {";
    for (size_t i = 0; i < s.table.size(); ++i) {
        out += i ? ",(" : "(";
        for (size_t j = 0; j < s.table[i].size(); ++j) out += (j ? "," : "") + format_value(s.table[i][j]);
        out += ")";
    }
    out += "} {";
    for (size_t i = 0; i < s.sigma.size(); ++i) out += std::string(i ? "," : "") + tri_char(s.sigma[i]);
    return out + "}";
}

}  // namespace wftc
