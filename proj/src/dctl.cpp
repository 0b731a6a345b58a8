#include "wftc/dctl.hpp"
#include "wftc/textio.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace wftc {

namespace {

struct Scope {
    std::string name;
    int key_column;
    bool literal;
};

bool is_temporal(Formula::Kind k) {
    return k == Formula::EX || k == Formula::EG || k == Formula::EU || k == Formula::AU;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string strip_digits(std::string s) {
    while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

int resolve_attr(const WftcNet& net, const std::string& attr) {
    int c = net.schema.column(attr);
    if (c >= 0) return c;
    // idK.licenseK style: attribute written as a value token of that column
    std::string want = lower(strip_digits(attr));
    for (size_t i = 0; i < net.schema.attrs.size(); ++i)
        if (lower(net.schema.attrs[i]) == want) return static_cast<int>(i);
    return -1;
}

// column whose values look like name, for names of the form <item><digits>
int literal_column(const WftcNet& net, const std::string& name) {
    std::string stem = strip_digits(name);
    if (stem.size() == name.size() || stem.empty()) return -1;
    int item = net.item_index(stem);
    if (item < 0 || net.binding.empty()) return -1;
    return net.binding[item];
}

const Scope* lookup(const std::vector<Scope>& scopes, const std::string& name) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
        if (it->name == name) return &*it;
    return nullptr;
}

void resolve_term(Term& t, const WftcNet& net, const std::vector<Scope>& scopes) {
    if (t.kind == Term::Attr) {
        const Scope* s = lookup(scopes, t.name);
        if (!s) throw DctlError("unbound record variable '" + t.name + "'");
        t.column = resolve_attr(net, t.attr);
        if (t.column < 0) throw DctlError("unknown attribute '" + t.attr + "'");
    } else if (t.kind == Term::Var || t.kind == Term::Const) {
        const Scope* s = lookup(scopes, t.name);
        if (s) {
            t.kind = Term::Var;
            t.column = s->key_column;
        } else {
            t.kind = Term::Const;
            t.column = -1;
        }
    }
}

void resolve_rec(Formula& f, const WftcNet& net, std::vector<Scope>& scopes) {
    switch (f.kind) {
    case Formula::True: return;
    case Formula::Place:
        f.place = net.place_index(f.name);
        if (f.place < 0) throw DctlError("unknown place '" + f.name + "'");
        return;
    case Formula::Cmp:
        resolve_term(f.lhs, net, scopes);
        resolve_term(f.rhs, net, scopes);
        return;
    case Formula::Forall:
    case Formula::Exists: {
        if (!net.has_table) throw DctlError("quantifier over R but the model has no table");
        f.literal_column = literal_column(net, f.name);
        scopes.push_back({f.name, f.literal_column >= 0 ? f.literal_column : 0, f.literal_column >= 0});
        resolve_rec(f.kids.at(0), net, scopes);
        scopes.pop_back();
        return;
    }
    default:
        if (is_temporal(f.kind) && !scopes.empty())
            throw DctlError("temporal operator inside a quantifier is not supported");
        for (auto& k : f.kids) resolve_rec(k, net, scopes);
    }
}

Value term_value(const Term& t, const Binding& b) {
    switch (t.kind) {
    case Term::Attr: return (*b.at(t.name))[t.column];
    case Term::Var: return (*b.at(t.name))[t.column];
    case Term::Const: return t.name;
    case Term::Empty: return std::nullopt;
    }
    return std::nullopt;
}

bool eval_local(const WftcNet& net, const StateC& s, const Formula& f, Binding& b);

bool eval_quantifier(const WftcNet& net, const StateC& s, const Formula& f, Binding& b) {
    bool all = f.kind == Formula::Forall;
    bool found = false;
    auto saved = b.find(f.name) != b.end() ? b[f.name] : nullptr;
    bool result = all;
    for (const auto& r : s.table) {
        if (f.literal_column >= 0 && r[f.literal_column] != Value(f.name)) continue;
        found = true;
        b[f.name] = &r;
        bool v = eval_local(net, s, f.kids[0], b);
        if (all && !v) { result = false; break; }
        if (!all && v) { result = true; break; }
    }
    if (saved) b[f.name] = saved; else b.erase(f.name);
    // a key literal must name an existing record
    if (f.literal_column >= 0 && !found) return false;
    return result;
}

bool eval_local(const WftcNet& net, const StateC& s, const Formula& f, Binding& b) {
    switch (f.kind) {
    case Formula::True:
    case Formula::Place:
    case Formula::Cmp: return eval_atom(net, s, f, b);
    case Formula::Forall:
    case Formula::Exists: return eval_quantifier(net, s, f, b);
    case Formula::Not: return !eval_local(net, s, f.kids[0], b);
    case Formula::And: return eval_local(net, s, f.kids[0], b) && eval_local(net, s, f.kids[1], b);
    case Formula::Or: return eval_local(net, s, f.kids[0], b) || eval_local(net, s, f.kids[1], b);
    default: throw DctlError("temporal operator in a state formula");
    }
}

// trailing integer of a token, or -1
long long suffix_of(const std::string& s, std::string& prefix) {
    size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    prefix = s.substr(0, i);
    if (i == s.size() || s.size() - i > 18) return -1;
    return std::stoll(s.substr(i));
}

int order(const std::string& a, const std::string& b) {
    std::string pa, pb;
    long long ka = suffix_of(a, pa), kb = suffix_of(b, pb);
    if (ka >= 0 && kb >= 0 && pa == pb) return ka < kb ? -1 : (ka > kb ? 1 : 0);
    return a < b ? -1 : (a > b ? 1 : 0);
}

const Formula* first_quantifier(const Formula& f) {
    if (f.kind == Formula::Forall || f.kind == Formula::Exists) return &f;
    for (const auto& k : f.kids)
        if (auto q = first_quantifier(k)) return q;
    return nullptr;
}

}  // namespace

void resolve(Formula& f, const WftcNet& net) {
    std::vector<Scope> scopes;
    resolve_rec(f, net, scopes);
}

bool compare_values(const Value& a, CmpOp op, const Value& b, bool b_is_empty) {
    if (b_is_empty) {
        if (op == CmpOp::Eq) return !a;
        if (op == CmpOp::Ne) return a.has_value();
        return false;
    }
    if (!a || !b) return false;
    int c = order(*a, *b);
    switch (op) {
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Eq: return *a == *b;
    case CmpOp::Ne: return *a != *b;
    case CmpOp::Ge: return c >= 0;
    case CmpOp::Gt: return c > 0;
    }
    return false;
}

bool eval_atom(const WftcNet& net, const StateC& state, const Formula& atom, const Binding& binding) {
    switch (atom.kind) {
    case Formula::True: return true;
    case Formula::Place: {
        int p = atom.place >= 0 ? atom.place : net.place_index(atom.name);
        if (p < 0) throw DctlError("unknown place '" + atom.name + "'");
        return state.marking[p] >= 1;
    }
    case Formula::Cmp: {
        const Term& l = atom.lhs;
        const Term& r = atom.rhs;
        for (const Term* t : {&l, &r})
            if ((t->kind == Term::Attr || t->kind == Term::Var) &&
                (t->column < 0 || binding.find(t->name) == binding.end()))
                throw DctlError("unresolved term '" + t->name + "'");
        if (l.kind == Term::Var && r.kind == Term::Var && (atom.op == CmpOp::Eq || atom.op == CmpOp::Ne)) {
            bool same = *binding.at(l.name) == *binding.at(r.name);
            return atom.op == CmpOp::Eq ? same : !same;
        }
        if (l.kind == Term::Empty && r.kind == Term::Empty)
            return atom.op == CmpOp::Eq || atom.op == CmpOp::Le || atom.op == CmpOp::Ge;
        if (l.kind == Term::Empty) {
            // mirror so empty sits on the right
            CmpOp op = atom.op;
            return compare_values(term_value(r, binding), op, std::nullopt, true);
        }
        return compare_values(term_value(l, binding), atom.op, term_value(r, binding), r.kind == Term::Empty);
    }
    default: throw DctlError("not an atomic formula");
    }
}

std::size_t count(const SatSet& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), 1)); }

SatSet sat_ex(const Srg& srg, const SatSet& s) {
    SatSet out(srg.states.size(), 0);
    for (const auto& e : srg.edges)
        if (s[e.to]) out[e.from] = 1;
    return out;
}

SatSet sat_eg(const Srg& srg, const SatSet& s) {
    const size_t n = srg.states.size();
    SatSet q = s;
    std::vector<int> cnt(n, 0);
    for (size_t c = 0; c < n; ++c)
        if (s[c]) cnt[c] = static_cast<int>(srg.succ[c].size());
    std::deque<int> drop;
    for (size_t c = 0; c < n; ++c)
        if (!s[c]) drop.push_back(static_cast<int>(c));
    while (!drop.empty()) {
        int x = drop.front();
        drop.pop_front();
        for (int ei : srg.pred[x]) {
            int c = srg.edges[ei].from;
            if (!q[c]) continue;
            if (--cnt[c] == 0) {
                q[c] = 0;
                drop.push_back(c);
            }
        }
    }
    return q;
}

SatSet sat_eu(const Srg& srg, const SatSet& s1, const SatSet& s2) {
    SatSet q = s2;
    std::deque<int> work;
    for (size_t c = 0; c < q.size(); ++c)
        if (q[c]) work.push_back(static_cast<int>(c));
    while (!work.empty()) {
        int x = work.front();
        work.pop_front();
        for (int ei : srg.pred[x]) {
            int c = srg.edges[ei].from;
            if (!q[c] && s1[c]) {
                q[c] = 1;
                work.push_back(c);
            }
        }
    }
    return q;
}

SatSet sat_au(const Srg& srg, const SatSet& s1, const SatSet& s2) {
    const size_t n = srg.states.size();
    SatSet q = s2;
    std::vector<int> cnt(n);
    for (size_t c = 0; c < n; ++c) cnt[c] = static_cast<int>(srg.succ[c].size());
    std::deque<int> work;
    for (size_t c = 0; c < n; ++c)
        if (q[c]) work.push_back(static_cast<int>(c));
    while (!work.empty()) {
        int x = work.front();
        work.pop_front();
        for (int ei : srg.pred[x]) {
            int c = srg.edges[ei].from;
            if (q[c] || !s1[c]) continue;
            if (--cnt[c] == 0) {
                q[c] = 1;
                work.push_back(c);
            }
        }
    }
    return q;
}

SatSet sat(const WftcNet& net, const Srg& srg, const Formula& f) {
    const size_t n = srg.states.size();
    switch (f.kind) {
    case Formula::Not: {
        SatSet a = sat(net, srg, f.kids[0]);
        for (auto& v : a) v = !v;
        return a;
    }
    case Formula::And:
    case Formula::Or: {
        SatSet a = sat(net, srg, f.kids[0]);
        SatSet b = sat(net, srg, f.kids[1]);
        for (size_t i = 0; i < n; ++i) a[i] = f.kind == Formula::And ? (a[i] && b[i]) : (a[i] || b[i]);
        return a;
    }
    case Formula::EX: return sat_ex(srg, sat(net, srg, f.kids[0]));
    case Formula::EG: return sat_eg(srg, sat(net, srg, f.kids[0]));
    case Formula::EU: return sat_eu(srg, sat(net, srg, f.kids[0]), sat(net, srg, f.kids[1]));
    case Formula::AU: return sat_au(srg, sat(net, srg, f.kids[0]), sat(net, srg, f.kids[1]));
    default: {
        SatSet out(n, 0);
        Binding b;
        for (size_t i = 0; i < n; ++i) out[i] = eval_local(net, srg.states[i], f, b);
        return out;
    }
    }
}

Verdict verify(const WftcNet& net, const Srg& srg, const Formula& f) {
    Verdict v;
    const size_t n = srg.states.size();
    v.pre_set.assign(n, 1);
    if (const Formula* q = first_quantifier(f)) {
        for (size_t i = 0; i < n; ++i) {
            const auto& table = srg.states[i].table;
            if (q->literal_column < 0) {
                v.pre_set[i] = !table.empty();
            } else {
                v.pre_set[i] = std::any_of(table.begin(), table.end(),
                                           [&](const Record& r) { return r[q->literal_column] == Value(q->name); });
            }
        }
    }
    if (count(v.pre_set) == 0) {
        v.sat_set.assign(n, 0);
        v.holds = false;
        v.note = "quantifier domain is empty in every state";
        return v;
    }
    v.sat_set = sat(net, srg, f);
    v.sat_initial = v.sat_set[srg.initial];
    v.holds = v.sat_initial;
    if (!v.holds) {
        // AG form: report a reachable state violating the body
        if (f.kind == Formula::Not && f.kids[0].kind == Formula::EU && f.kids[0].kids[0].kind == Formula::True) {
            SatSet bad = sat(net, srg, f.kids[0].kids[1]);
            for (size_t i = 0; i < n; ++i)
                if (bad[i]) {
                    v.evidence = static_cast<int>(i);
                    break;
                }
        }
        if (!v.evidence) v.evidence = srg.initial;
    }
    return v;
}

std::vector<MetricResult> builtin_metrics(const WftcNet& net, const Srg& srg) {
    std::vector<MetricResult> out;
    auto add = [&](const std::string& name, const std::string& formula, const std::string& reason) {
        MetricResult m;
        m.name = name;
        m.formula = formula;
        if (!reason.empty()) {
            m.reason = reason;
        } else {
            try {
                Formula f = parse_dctl(formula, &net);
                m.verdict = verify(net, srg, f);
                m.instantiable = true;
            } catch (const std::exception& e) {
                m.reason = e.what();
            }
        }
        out.push_back(std::move(m));
    };

    const auto& attrs = net.schema.attrs;
    std::vector<std::string> keys;
    int key_item = -1;
    for (size_t i = 0; i < net.items.size() && !net.binding.empty(); ++i)
        if (net.binding[i] == 0) {
            key_item = static_cast<int>(i);
            break;
        }
    if (net.has_table)
        for (const auto& r : net.initial_table)
            if (r[0] && std::find(keys.begin(), keys.end(), *r[0]) == keys.end()) keys.push_back(*r[0]);
    std::sort(keys.begin(), keys.end(), [](const std::string& a, const std::string& b) { return order(a, b) < 0; });

    std::string fresh;
    if (key_item >= 0) fresh = refine(net, initial_state(net), key_item).back();

    std::string no_table = net.has_table ? "" : "model has no table";
    auto need = [&](bool ok, const std::string& why) { return !no_table.empty() ? no_table : (ok ? "" : why); };

    std::string r1 = need(keys.size() >= 2 && attrs.size() >= 2 && key_item >= 0,
                          "needs a key item, two records and two attributes");
    add("PM1",
        r1.empty() ? "EX(forall " + keys[0] + " in R, forall " + keys[1] + " in R, [" + keys[0] + " != " + keys[1] +
                         " -> " + keys[0] + "." + attrs[1] + " < " + keys[1] + "." + attrs[1] + "])"
                   : "",
        r1);
    std::string r2 = need(!attrs.empty(), "needs an attribute");
    add("PM2",
        r2.empty() ? "AG(forall r1 in R, forall r2 in R, [r1 != r2 -> r1." + attrs[0] + " != r2." + attrs[0] + "])" : "",
        r2);
    add("PM3", "EF " + net.places.at(net.end), "");
    std::string r4 = need(!attrs.empty(), "needs an attribute");
    add("PM4", r4.empty() ? "AX(exists r1 in R, [r1." + attrs.back() + " != empty])" : "", r4);
    std::string r5 = need(!fresh.empty() && attrs.size() >= 2, "needs a key item and two attributes");
    add("PM5",
        r5.empty() ? "E(forall " + fresh + " in R, [" + fresh + " != empty] U forall " + fresh + " in R, [" + fresh +
                         "." + attrs[1] + " = empty])"
                   : "",
        r5);
    return out;
}

}  // namespace wftc
