#include "wftc/netmodel.hpp"

#include <algorithm>
#include <deque>

namespace wftc {

char tri_char(Tri v) {
    switch (v) {
    case Tri::T: return 'T';
    case Tri::F: return 'F';
    default: return '_';
    }
}

Tri tri_not(Tri v) {
    if (v == Tri::U) return Tri::U;
    return v == Tri::T ? Tri::F : Tri::T;
}

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::F || b == Tri::F) return Tri::F;
    if (a == Tri::U || b == Tri::U) return Tri::U;
    return Tri::T;
}

Tri tri_or(Tri a, Tri b) {
    if (a == Tri::T || b == Tri::T) return Tri::T;
    if (a == Tri::U || b == Tri::U) return Tri::U;
    return Tri::F;
}

int TableSchema::column(const std::string& attr) const {
    for (size_t i = 0; i < attrs.size(); ++i)
        if (attrs[i] == attr) return static_cast<int>(i);
    return -1;
}

bool record_less(const Record& a, const Record& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void canonicalize(std::vector<Record>& records) {
    std::sort(records.begin(), records.end(), record_less);
    records.erase(std::unique(records.begin(), records.end()), records.end());
}

Tri eval_bool(const BoolExpr& e, const std::vector<Tri>& atoms) {
    switch (e.kind) {
    case BoolExpr::Atom: return atoms.at(e.atom);
    case BoolExpr::Not: return tri_not(eval_bool(e.kids.at(0), atoms));
    case BoolExpr::And: {
        Tri r = Tri::T;
        for (const auto& k : e.kids) r = tri_and(r, eval_bool(k, atoms));
        return r;
    }
    case BoolExpr::Or: {
        Tri r = Tri::F;
        for (const auto& k : e.kids) r = tri_or(r, eval_bool(k, atoms));
        return r;
    }
    }
    return Tri::U;
}

void collect_atoms(const BoolExpr& e, std::vector<int>& out) {
    if (e.kind == BoolExpr::Atom) {
        if (std::find(out.begin(), out.end(), e.atom) == out.end()) out.push_back(e.atom);
        return;
    }
    for (const auto& k : e.kids) collect_atoms(k, out);
}

namespace {

template <typename T>
int find_id(const std::vector<T>& v, const std::string& name) {
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i].id == name) return static_cast<int>(i);
    return -1;
}

int find_name(const std::vector<std::string>& v, const std::string& name) {
    auto it = std::find(v.begin(), v.end(), name);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

}  // namespace

int WftcNet::place_index(const std::string& name) const { return find_name(places, name); }
int WftcNet::transition_index(const std::string& name) const { return find_id(transitions, name); }
int WftcNet::item_index(const std::string& name) const { return find_name(items, name); }
int WftcNet::guard_index(const std::string& name) const { return find_id(guards, name); }
int WftcNet::predicate_index(const std::string& name) const { return find_id(predicates, name); }

void WftcNet::finalize() {
    canonicalize(initial_table);

    binding.assign(items.size(), -1);
    for (const auto& p : predicates)
        if (p.kind == PredKind::Membership && binding[p.item] < 0) binding[p.item] = p.column;
    for (const auto& t : transitions)
        for (const auto& op : t.ops)
            for (const auto& [col, src] : op.assigns)
                if (src.is_item && binding[src.item] < 0) binding[src.item] = col;

    pre_t.assign(transitions.size(), {});
    post_t.assign(transitions.size(), {});
    for (const auto& a : arcs) {
        if (a.from.is_place && !a.to.is_place) pre_t[a.to.index].push_back(a.from.index);
        if (!a.from.is_place && a.to.is_place) post_t[a.from.index].push_back(a.to.index);
    }

    guard_items.assign(guards.size(), {});
    for (size_t g = 0; g < guards.size(); ++g) {
        std::vector<int> preds;
        collect_atoms(guards[g].expr, preds);
        for (int p : preds) {
            int it = predicates[p].item;
            auto& gi = guard_items[g];
            if (std::find(gi.begin(), gi.end(), it) == gi.end()) gi.push_back(it);
        }
    }
}

static void check_node(const WftcNet& net, Node n) {
    size_t limit = n.is_place ? net.places.size() : net.transitions.size();
    if (n.index < 0 || static_cast<size_t>(n.index) >= limit) throw ModelError("unknown node");
}

std::vector<Node> preset(const WftcNet& net, Node n) {
    check_node(net, n);
    std::vector<Node> out;
    for (const auto& a : net.arcs)
        if (a.to == n) out.push_back(a.from);
    return out;
}

std::vector<Node> postset(const WftcNet& net, Node n) {
    check_node(net, n);
    std::vector<Node> out;
    for (const auto& a : net.arcs)
        if (a.from == n) out.push_back(a.to);
    return out;
}

ValidationReport validate_workflow_structure(const WftcNet& net) {
    ValidationReport rep;
    const size_t np = net.places.size(), nt = net.transitions.size();
    auto node_id = [&](Node n) { return n.is_place ? n.index : static_cast<int>(np) + n.index; };
    auto node_name = [&](int id) {
        return id < static_cast<int>(np) ? net.places[id] : net.transitions[id - np].id;
    };

    for (const auto& a : net.arcs)
        if (a.from.is_place == a.to.is_place)
            rep.violations.push_back("arc " + node_name(node_id(a.from)) + "->" + node_name(node_id(a.to)) +
                                     " joins two nodes of the same kind");

    if (net.start < 0) rep.violations.push_back("no start place");
    if (net.end < 0) rep.violations.push_back("no end place");
    if (net.start >= 0 && net.start == net.end) rep.violations.push_back("start and end are the same place");

    std::vector<int> in(np + nt, 0), out(np + nt, 0);
    std::vector<std::vector<int>> fwd(np + nt), bwd(np + nt);
    for (const auto& a : net.arcs) {
        int f = node_id(a.from), t = node_id(a.to);
        fwd[f].push_back(t);
        bwd[t].push_back(f);
        ++out[f];
        ++in[t];
    }
    for (size_t p = 0; p < np; ++p) {
        int id = static_cast<int>(p);
        if (in[id] == 0 && id != net.start) rep.violations.push_back("extra source place " + net.places[p]);
        if (out[id] == 0 && id != net.end) rep.violations.push_back("extra sink place " + net.places[p]);
    }
    if (net.start >= 0 && in[net.start] != 0) rep.violations.push_back("start place has input arcs");
    if (net.end >= 0 && out[net.end] != 0) rep.violations.push_back("end place has output arcs");

    if (net.start >= 0 && net.end >= 0) {
        auto reach = [&](int from, const std::vector<std::vector<int>>& adj) {
            std::vector<char> seen(np + nt, 0);
            std::deque<int> q{from};
            seen[from] = 1;
            while (!q.empty()) {
                int x = q.front();
                q.pop_front();
                for (int y : adj[x])
                    if (!seen[y]) seen[y] = 1, q.push_back(y);
            }
            return seen;
        };
        auto f = reach(net.start, fwd), b = reach(net.end, bwd);
        for (size_t i = 0; i < np + nt; ++i)
            if (!f[i] || !b[i])
                rep.violations.push_back(node_name(static_cast<int>(i)) + " is not on a start->end path");
    }

    auto check_items = [&](const Transition& t, const std::vector<int>& v) {
        for (int d : v)
            if (d < 0 || static_cast<size_t>(d) >= net.items.size())
                rep.violations.push_back("transition " + t.id + " labels an undeclared data item");
    };
    for (const auto& t : net.transitions) {
        check_items(t, t.rd);
        check_items(t, t.wt);
        check_items(t, t.dt);
        if (!t.ops.empty() && !net.has_table)
            rep.violations.push_back("transition " + t.id + " has table operations but no table is declared");
    }
    return rep;
}

Tri eval_constraint(const Constraint& c, const std::vector<Tri>& sigma) {
    Tri r = Tri::F;
    for (const auto& conj : c) {
        Tri v = Tri::T;
        for (const auto& lit : conj) {
            if (lit.guard < 0 || static_cast<size_t>(lit.guard) >= sigma.size())
                throw ModelError("constraint literal references an unknown guard");
            Tri g = sigma[lit.guard];
            v = tri_and(v, lit.negated ? tri_not(g) : g);
        }
        r = tri_or(r, v);
    }
    return r;
}

bool constraint_consistent(const std::vector<Tri>& sigma, const std::vector<Constraint>& res) {
    for (const auto& c : res)
        if (eval_constraint(c, sigma) == Tri::F) return false;
    return true;
}

}  // namespace wftc
