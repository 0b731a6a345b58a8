#include "wftc/textio.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wftc {

ParseError::ParseError(const std::string& msg, int line_, int column_)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
      line(line_),
      column(column_) {}

namespace {

struct Tok {
    enum Kind { Ident, Str, Punct, Newline, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool plain_ident(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), ident_char);
}

// shared lexer for both languages; newline tokens are kept only when asked
std::vector<Tok> lex(const std::string& text, bool keep_newlines) {
    static const std::vector<std::pair<std::string, std::string>> unicode = {
        {"\xE2\x8A\xA5", "_"},  {"\xE2\x89\xA0", "!="}, {"\xE2\x89\xA4", "<="},
        {"\xE2\x89\xA5", ">="}, {"\xC2\xAC", "!"},      {"\xE2\x88\xA7", "&"},
        {"\xE2\x88\xA8", "|"},  {"\xE2\x86\x92", "->"},
    };
    static const std::vector<std::string> puncts = {"->", "!=", "<=", ">=", "==", "[", "]", "(", ")", ",",
                                                    ":",  ";",  "=",  "!",  "&",  "|", ".", "<", ">"};
    std::vector<Tok> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (c == '\n') {
            if (keep_newlines) out.push_back({Tok::Newline, "\n", line, col});
            advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Tok t;
        t.line = line;
        t.col = col;
        if (ident_char(c)) {
            size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            t.kind = Tok::Ident;
            t.text = text.substr(i, j - i);
            advance(j - i);
            out.push_back(t);
            continue;
        }
        if (c == '"') {
            std::string s;
            advance(1);
            while (i < text.size() && text[i] != '"') {
                if (text[i] == '\\' && i + 1 < text.size()) advance(1);
                s += text[i];
                advance(1);
            }
            if (i >= text.size()) throw ParseError("unterminated string", t.line, t.col);
            advance(1);
            t.kind = Tok::Str;
            t.text = s;
            out.push_back(t);
            continue;
        }
        bool matched = false;
        for (const auto& [u, rep] : unicode)
            if (text.compare(i, u.size(), u) == 0) {
                t.kind = rep == "_" ? Tok::Ident : Tok::Punct;
                t.text = rep;
                i += u.size();
                ++col;
                out.push_back(t);
                matched = true;
                break;
            }
        if (matched) continue;
        for (const auto& p : puncts)
            if (text.compare(i, p.size(), p) == 0) {
                t.kind = Tok::Punct;
                t.text = p;
                advance(p.size());
                out.push_back(t);
                matched = true;
                break;
            }
        if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Cursor {
public:
    explicit Cursor(std::vector<Tok> toks) : toks_(std::move(toks)) {}
    const Tok& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    Tok next() {
        Tok t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool at_punct(const std::string& p, size_t k = 0) const {
        return peek(k).kind == Tok::Punct && peek(k).text == p;
    }
    bool at_ident(const std::string& s, size_t k = 0) const {
        return peek(k).kind == Tok::Ident && peek(k).text == s;
    }
    bool accept(const std::string& p) {
        if (at_punct(p)) {
            next();
            return true;
        }
        return false;
    }
    void expect(const std::string& p) {
        if (!accept(p)) fail("expected '" + p + "'");
    }
    std::string ident(const std::string& what = "identifier") {
        if (peek().kind != Tok::Ident) fail("expected " + what);
        return next().text;
    }
    void skip_separators() {
        while (peek().kind == Tok::Newline || at_punct(";") || at_punct(",")) next();
    }
    void skip_newlines() {
        while (peek().kind == Tok::Newline) next();
    }
    bool at_end() const { return peek().kind == Tok::End; }
    [[noreturn]] void fail(const std::string& msg) const {
        const Tok& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : t.kind == Tok::Newline ? "end of line" : "'" + t.text + "'";
        throw ParseError(msg + ", got " + got, t.line, t.col);
    }

private:
    std::vector<Tok> toks_;
    size_t pos_ = 0;
};

const std::vector<std::string> kSections = {"PLACES",     "TRANSITIONS", "ARCS",     "DATA",
                                            "TABLE",      "OPS",         "PREDICATES", "GUARDS",
                                            "GUARDMAP",   "CONSTRAINTS", "INITIAL",  "FINAL"};

struct Section {
    std::vector<Tok> toks;
    int line = 1, col = 1;
};

class ModelParser {
public:
    explicit ModelParser(const std::string& text) {
        auto toks = lex(text, true);
        std::string cur;
        for (size_t i = 0; i < toks.size(); ++i) {
            const Tok& t = toks[i];
            bool header = t.kind == Tok::Punct && t.text == "[" && i + 2 < toks.size() &&
                          toks[i + 1].kind == Tok::Ident && toks[i + 2].kind == Tok::Punct && toks[i + 2].text == "]" &&
                          std::find(kSections.begin(), kSections.end(), toks[i + 1].text) != kSections.end();
            if (header) {
                cur = toks[i + 1].text;
                if (sections_.count(cur)) throw ParseError("duplicate section [" + cur + "]", t.line, t.col);
                sections_[cur].line = t.line;
                sections_[cur].col = t.col;
                i += 2;
                continue;
            }
            if (t.kind == Tok::End) break;
            if (cur.empty()) {
                if (t.kind == Tok::Newline) continue;
                if (t.kind == Tok::Punct && t.text == "[" && i + 1 < toks.size())
                    throw ParseError("unknown section '" + toks[i + 1].text + "'", t.line, t.col);
                throw ParseError("content before the first section", t.line, t.col);
            }
            sections_[cur].toks.push_back(t);
        }
        end_line_ = toks.back().line;
    }

    WftcNet parse() {
        WftcNet net;
        names(net.places, "PLACES", "place");
        transitions(net);
        names(net.items, "DATA", "data item");
        arcs(net);
        table(net);
        predicates(net);
        guards(net);
        ops(net);
        guardmap(net);
        constraints(net);
        net.start = single_place(net, "INITIAL");
        net.end = single_place(net, "FINAL");
        net.finalize();
        return net;
    }

private:
    std::map<std::string, Section> sections_;
    int end_line_ = 1;

    Cursor cursor(const std::string& name) {
        auto it = sections_.find(name);
        std::vector<Tok> toks = it == sections_.end() ? std::vector<Tok>{} : it->second.toks;
        int line = toks.empty() ? (it == sections_.end() ? end_line_ : it->second.line) : toks.back().line;
        toks.push_back({Tok::End, "", line, 1});
        return Cursor(std::move(toks));
    }

    [[noreturn]] static void fail_at(const Tok& t, const std::string& msg) { throw ParseError(msg, t.line, t.col); }

    void names(std::vector<std::string>& out, const std::string& sec, const std::string& what) {
        Cursor c = cursor(sec);
        std::set<std::string> seen;
        while (true) {
            c.skip_separators();
            if (c.at_end()) break;
            Tok t = c.peek();
            std::string n = c.ident(what + " name");
            if (!seen.insert(n).second) fail_at(t, "duplicate " + what + " '" + n + "'");
            out.push_back(n);
        }
    }

    void transitions(WftcNet& net) {
        std::vector<std::string> ids;
        names(ids, "TRANSITIONS", "transition");
        for (auto& id : ids) {
            Transition t;
            t.id = id;
            net.transitions.push_back(std::move(t));
        }
    }

    Node node(const WftcNet& net, const Tok& t) {
        int p = net.place_index(t.text);
        int tr = net.transition_index(t.text);
        if (p >= 0) return {true, p};
        if (tr >= 0) return {false, tr};
        fail_at(t, "unknown node '" + t.text + "'");
    }

    void arcs(WftcNet& net) {
        Cursor c = cursor("ARCS");
        while (true) {
            c.skip_separators();
            if (c.at_end()) break;
            Tok a = c.peek();
            c.ident("arc source");
            c.expect("->");
            Tok b = c.peek();
            c.ident("arc target");
            Arc arc{node(net, a), node(net, b)};
            if (std::find(net.arcs.begin(), net.arcs.end(), arc) != net.arcs.end())
                fail_at(a, "duplicate arc " + a.text + "->" + b.text);
            net.arcs.push_back(arc);
        }
    }

    Value value(Cursor& c) {
        const Tok& t = c.peek();
        if (t.kind == Tok::Str) return c.next().text;
        if (t.kind == Tok::Ident) {
            std::string s = c.next().text;
            if (s == "_") return std::nullopt;
            return s;
        }
        c.fail("expected a value");
    }

    void table(WftcNet& net) {
        if (!sections_.count("TABLE")) return;
        Cursor c = cursor("TABLE");
        c.skip_newlines();
        if (c.at_end()) return;
        net.has_table = true;
        net.schema.name = c.ident("table name");
        c.expect("(");
        std::set<std::string> seen;
        do {
            Tok t = c.peek();
            std::string a = c.ident("attribute name");
            if (!seen.insert(a).second) fail_at(t, "duplicate attribute '" + a + "'");
            net.schema.attrs.push_back(a);
        } while (c.accept(","));
        c.expect(")");
        while (true) {
            while (c.peek().kind == Tok::Newline || c.at_punct(";")) c.next();
            if (c.at_end()) break;
            Tok first = c.peek();
            Record r;
            r.push_back(value(c));
            while (c.accept(",")) r.push_back(value(c));
            if (r.size() != net.schema.attrs.size())
                fail_at(first, "record has " + std::to_string(r.size()) + " values, table has " +
                                   std::to_string(net.schema.attrs.size()) + " attributes");
            if (!(c.peek().kind == Tok::Newline || c.at_punct(";") || c.at_end())) c.fail("expected end of record");
            net.initial_table.push_back(std::move(r));
        }
    }

    int column(const WftcNet& net, Cursor& c) {
        Tok t = c.peek();
        std::string tab = c.ident("table name");
        if (!net.has_table || tab != net.schema.name) fail_at(t, "unknown table '" + tab + "'");
        c.expect(".");
        return attribute(net, c);
    }

    int attribute(const WftcNet& net, Cursor& c) {
        Tok t = c.peek();
        std::string a = c.ident("attribute name");
        int col = net.schema.column(a);
        if (col < 0) fail_at(t, "unknown attribute '" + a + "'");
        return col;
    }

    int item(const WftcNet& net, Cursor& c) {
        Tok t = c.peek();
        std::string n = c.ident("data item");
        int i = net.item_index(n);
        if (i < 0) fail_at(t, "unknown data item '" + n + "'");
        return i;
    }

    void predicates(WftcNet& net) {
        Cursor c = cursor("PREDICATES");
        while (true) {
            c.skip_separators();
            if (c.at_end()) break;
            Tok t = c.peek();
            Predicate p;
            p.id = c.ident("predicate name");
            if (net.predicate_index(p.id) >= 0) fail_at(t, "duplicate predicate '" + p.id + "'");
            c.expect("=");
            Tok kt = c.peek();
            std::string kind = c.ident("predicate kind");
            c.expect("(");
            p.item = item(net, c);
            if (kind == "in") {
                p.kind = PredKind::Membership;
                c.expect(",");
                p.column = column(net, c);
            } else if (kind == "eq") {
                p.kind = PredKind::EqualsConst;
                c.expect(",");
                Value v = value(c);
                if (!v) c.fail("constant expected");
                p.constant = *v;
            } else if (kind == "def") {
                p.kind = PredKind::IsDefined;
            } else {
                fail_at(kt, "unknown predicate kind '" + kind + "'");
            }
            c.expect(")");
            net.predicates.push_back(std::move(p));
        }
    }

    BoolExpr bool_expr(Cursor& c, const std::function<int(const Tok&)>& atom) {
        BoolExpr first = bool_and(c, atom);
        if (!c.at_punct("|")) return first;
        BoolExpr e;
        e.kind = BoolExpr::Or;
        e.kids.push_back(std::move(first));
        while (c.accept("|")) e.kids.push_back(bool_and(c, atom));
        return e;
    }

    BoolExpr bool_and(Cursor& c, const std::function<int(const Tok&)>& atom) {
        BoolExpr first = bool_unary(c, atom);
        if (!c.at_punct("&")) return first;
        BoolExpr e;
        e.kind = BoolExpr::And;
        e.kids.push_back(std::move(first));
        while (c.accept("&")) e.kids.push_back(bool_unary(c, atom));
        return e;
    }

    BoolExpr bool_unary(Cursor& c, const std::function<int(const Tok&)>& atom) {
        if (c.accept("!")) {
            BoolExpr e;
            e.kind = BoolExpr::Not;
            e.kids.push_back(bool_unary(c, atom));
            return e;
        }
        if (c.accept("(")) {
            BoolExpr e = bool_expr(c, atom);
            c.expect(")");
            return e;
        }
        Tok t = c.peek();
        c.ident("name");
        BoolExpr e;
        e.atom = atom(t);
        return e;
    }

    void end_statement(Cursor& c) {
        if (!(c.peek().kind == Tok::Newline || c.at_punct(";") || c.at_end())) c.fail("expected end of statement");
    }

    void guards(WftcNet& net) {
        Cursor c = cursor("GUARDS");
        auto atom = [&](const Tok& t) {
            int p = net.predicate_index(t.text);
            if (p < 0) fail_at(t, "unknown predicate '" + t.text + "'");
            return p;
        };
        while (true) {
            c.skip_separators();
            if (c.at_end()) break;
            Tok t = c.peek();
            Guard g;
            g.id = c.ident("guard name");
            if (net.guard_index(g.id) >= 0) fail_at(t, "duplicate guard '" + g.id + "'");
            c.expect("=");
            g.expr = bool_expr(c, atom);
            end_statement(c);
            net.guards.push_back(std::move(g));
        }
    }

    OpSource source(const WftcNet& net, Cursor& c) {
        OpSource s;
        const Tok& t = c.peek();
        if (t.kind == Tok::Ident && t.text != "_" && net.item_index(t.text) >= 0) {
            s.is_item = true;
            s.item = net.item_index(c.next().text);
            return s;
        }
        Value v = value(c);
        if (!v) c.fail("a source cannot be undefined");
        s.constant = *v;
        return s;
    }

    std::vector<std::pair<int, OpSource>> assignments(const WftcNet& net, Cursor& c) {
        std::vector<std::pair<int, OpSource>> out;
        do {
            int col = attribute(net, c);
            c.expect("=");
            out.emplace_back(col, source(net, c));
        } while (c.accept(","));
        return out;
    }

    void ops(WftcNet& net) {
        Cursor c = cursor("OPS");
        std::set<std::string> seen;
        while (true) {
            c.skip_separators();
            if (c.at_end()) break;
            Tok tt = c.peek();
            std::string tid = c.ident("transition name");
            int ti = net.transition_index(tid);
            if (ti < 0) fail_at(tt, "unknown transition '" + tid + "'");
            if (!seen.insert(tid).second) fail_at(tt, "transition '" + tid + "' listed twice in [OPS]");
            c.expect(":");
            Transition& t = net.transitions[ti];
            while (true) {
                c.skip_newlines();
                if (c.at_end() || c.at_punct(";")) break;
                if (c.peek().kind == Tok::Ident && c.at_punct(":", 1)) break;
                Tok ot = c.peek();
                std::string op = c.ident("operation");
                c.expect("(");
                if (op == "rd" || op == "wt" || op == "dt") {
                    auto& v = op == "rd" ? t.rd : op == "wt" ? t.wt : t.dt;
                    if (!c.at_punct(")")) do {
                            v.push_back(item(net, c));
                        } while (c.accept(","));
                } else if (op == "sel") {
                    TableOp o;
                    o.kind = TableOp::Sel;
                    o.column = column(net, c);
                    t.ops.push_back(std::move(o));
                } else if (op == "ins" || op == "upd" || op == "del") {
                    TableOp o;
                    o.kind = op == "ins" ? TableOp::Ins : op == "upd" ? TableOp::Upd : TableOp::Del;
                    Tok tab = c.peek();
                    std::string tn = c.ident("table name");
                    if (!net.has_table || tn != net.schema.name) fail_at(tab, "unknown table '" + tn + "'");
                    if (o.kind != TableOp::Del) {
                        c.expect(":");
                        o.assigns = assignments(net, c);
                    }
                    if (c.at_ident("where")) {
                        c.next();
                        o.where = assignments(net, c);
                    } else if (o.kind != TableOp::Ins) {
                        c.fail("expected 'where'");
                    }
                    t.ops.push_back(std::move(o));
                } else {
                    fail_at(ot, "unknown operation '" + op + "'");
                }
                c.expect(")");
            }
        }
    }

    void guardmap(WftcNet& net) {
        Cursor c = cursor("GUARDMAP");
        while (true) {
            c.skip_separators();
            if (c.at_end()) break;
            Tok tt = c.peek();
            std::string tid = c.ident("transition name");
            int ti = net.transition_index(tid);
            if (ti < 0) fail_at(tt, "unknown transition '" + tid + "'");
            if (net.transitions[ti].guard >= 0) fail_at(tt, "transition '" + tid + "' already has a guard");
            c.expect(":");
            Tok gt = c.peek();
            std::string gid = c.ident("guard name");
            int g = net.guard_index(gid);
            if (g < 0) fail_at(gt, "unknown guard '" + gid + "'");
            net.transitions[ti].guard = g;
        }
    }

    GuardLiteral literal(const BoolExpr& e, const Tok& at) {
        if (e.kind == BoolExpr::Atom) return {e.atom, false};
        if (e.kind == BoolExpr::Not && e.kids[0].kind == BoolExpr::Atom) return {e.kids[0].atom, true};
        fail_at(at, "constraint must be a disjunction of conjunctions of guard literals");
    }

    Conjunction conjunction(const BoolExpr& e, const Tok& at) {
        Conjunction out;
        if (e.kind == BoolExpr::And) {
            for (const auto& k : e.kids) out.push_back(literal(k, at));
        } else {
            out.push_back(literal(e, at));
        }
        return out;
    }

    void constraints(WftcNet& net) {
        Cursor c = cursor("CONSTRAINTS");
        auto atom = [&](const Tok& t) {
            int g = net.guard_index(t.text);
            if (g < 0) fail_at(t, "unknown guard '" + t.text + "'");
            return g;
        };
        while (true) {
            c.skip_separators();
            if (c.at_end()) break;
            Tok t = c.peek();
            BoolExpr e = bool_expr(c, atom);
            end_statement(c);
            Constraint con;
            if (e.kind == BoolExpr::Or) {
                for (const auto& k : e.kids) con.push_back(conjunction(k, t));
            } else {
                con.push_back(conjunction(e, t));
            }
            net.constraints.push_back(std::move(con));
        }
    }

    int single_place(const WftcNet& net, const std::string& sec) {
        if (!sections_.count(sec)) {
            if (net.places.empty()) return -1;
            throw ParseError("missing [" + sec + "] section", end_line_, 1);
        }
        Cursor c = cursor(sec);
        c.skip_separators();
        Tok t = c.peek();
        std::string n = c.ident("place name");
        int p = net.place_index(n);
        if (p < 0) fail_at(t, "unknown place '" + n + "'");
        c.skip_separators();
        if (!c.at_end()) c.fail("[" + sec + "] takes exactly one place");
        return p;
    }
};

std::string quote(const std::string& s) {
    if (plain_ident(s) && s != "_") return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string value_text(const Value& v) { return v ? quote(*v) : "_"; }

void print_bool(std::ostream& os, const BoolExpr& e, const std::function<std::string(int)>& name, bool nested) {
    switch (e.kind) {
    case BoolExpr::Atom: os << name(e.atom); return;
    case BoolExpr::Not:
        os << "!";
        print_bool(os, e.kids[0], name, true);
        return;
    case BoolExpr::And:
    case BoolExpr::Or: {
        if (nested) os << "(";
        for (size_t i = 0; i < e.kids.size(); ++i) {
            if (i) os << (e.kind == BoolExpr::And ? " & " : " | ");
            print_bool(os, e.kids[i], name, true);
        }
        if (nested) os << ")";
        return;
    }
    }
}

std::string source_text(const WftcNet& net, const OpSource& s) {
    return s.is_item ? net.items[s.item] : quote(s.constant);
}

std::string assigns_text(const WftcNet& net, const std::vector<std::pair<int, OpSource>>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i)
        out += (i ? ", " : "") + net.schema.attrs[v[i].first] + "=" + source_text(net, v[i].second);
    return out;
}

// DCTL

class DctlParser {
public:
    explicit DctlParser(const std::string& text) : c_(lex(text, false)) {}

    Formula parse() {
        Formula f = implication();
        if (!c_.at_end()) c_.fail("unexpected trailing input");
        return f;
    }

private:
    Cursor c_;

    static Formula make(Formula::Kind k, std::vector<Formula> kids = {}) {
        Formula f;
        f.kind = k;
        f.kids = std::move(kids);
        return f;
    }
    static Formula neg(Formula f) { return make(Formula::Not, {std::move(f)}); }

    Formula implication() {
        Formula lhs = disjunction();
        if (c_.accept("->")) return make(Formula::Or, {neg(std::move(lhs)), implication()});
        return lhs;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (c_.accept("|")) f = make(Formula::Or, {std::move(f), conjunction()});
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (c_.accept("&")) f = make(Formula::And, {std::move(f), unary()});
        return f;
    }

    Formula unary() {
        if (c_.accept("!")) return neg(unary());
        const Tok& t = c_.peek();
        if (t.kind == Tok::Ident) {
            const std::string& s = t.text;
            if (s == "EX" || s == "AX" || s == "EF" || s == "AF" || s == "EG" || s == "AG") {
                std::string op = c_.next().text;
                Formula body = unary();
                if (op == "EX") return make(Formula::EX, {std::move(body)});
                if (op == "EG") return make(Formula::EG, {std::move(body)});
                if (op == "EF") return make(Formula::EU, {make(Formula::True), std::move(body)});
                if (op == "AF") return make(Formula::AU, {make(Formula::True), std::move(body)});
                if (op == "AG") return neg(make(Formula::EU, {make(Formula::True), neg(std::move(body))}));
                // AX
                return make(Formula::And, {neg(make(Formula::EX, {neg(std::move(body))})),
                                           make(Formula::EX, {make(Formula::True)})});
            }
            if (s == "forall" || s == "exists") {
                Formula q = make(c_.next().text == "forall" ? Formula::Forall : Formula::Exists);
                q.name = c_.ident("variable name");
                if (!c_.at_ident("in")) c_.fail("expected 'in'");
                c_.next();
                c_.ident("table name");
                c_.expect(",");
                q.kids.push_back(unary());
                return q;
            }
        }
        return primary();
    }

    Formula until(Formula::Kind k) {
        c_.next();
        c_.expect("(");
        Formula a = implication();
        if (!c_.at_ident("U")) c_.fail("expected 'U'");
        c_.next();
        Formula b = implication();
        c_.expect(")");
        return make(k, {std::move(a), std::move(b)});
    }

    Term term() {
        Term t;
        const Tok& tk = c_.peek();
        if (tk.kind == Tok::Str) {
            t.kind = Term::Const;
            t.name = c_.next().text;
            return t;
        }
        std::string n = c_.ident("term");
        if (n == "empty") {
            t.kind = Term::Empty;
            return t;
        }
        t.name = n;
        if (c_.accept(".")) {
            t.kind = Term::Attr;
            t.attr = c_.ident("attribute name");
        } else {
            t.kind = Term::Const;
        }
        return t;
    }

    bool at_cmp(CmpOp& op) {
        static const std::vector<std::pair<std::string, CmpOp>> ops = {
            {"<", CmpOp::Lt},  {"<=", CmpOp::Le}, {"=", CmpOp::Eq}, {"==", CmpOp::Eq},
            {"!=", CmpOp::Ne}, {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
        for (const auto& [s, o] : ops)
            if (c_.at_punct(s)) {
                op = o;
                return true;
            }
        return false;
    }

    Formula primary() {
        const Tok& t = c_.peek();
        if (c_.accept("(")) {
            Formula f = implication();
            c_.expect(")");
            return f;
        }
        if (c_.accept("[")) {
            Formula f = implication();
            c_.expect("]");
            return f;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "true") {
                c_.next();
                return make(Formula::True);
            }
            if (t.text == "false") {
                c_.next();
                return neg(make(Formula::True));
            }
            if (t.text == "deadlock") {
                c_.next();
                return neg(make(Formula::EX, {make(Formula::True)}));
            }
            if ((t.text == "E" || t.text == "A") && c_.at_punct("(", 1))
                return until(t.text == "E" ? Formula::EU : Formula::AU);
        }
        if (t.kind != Tok::Ident && t.kind != Tok::Str) c_.fail("expected a formula");
        Tok start = t;
        Term lhs = term();
        CmpOp op;
        if (at_cmp(op)) {
            c_.next();
            Formula f = make(Formula::Cmp);
            f.op = op;
            f.lhs = lhs;
            f.rhs = term();
            return f;
        }
        if (lhs.kind != Term::Const || start.kind != Tok::Ident)
            throw ParseError("expected a comparison operator", c_.peek().line, c_.peek().col);
        Formula f = make(Formula::Place);
        f.name = lhs.name;
        return f;
    }
};

std::string term_text(const Term& t) {
    switch (t.kind) {
    case Term::Attr: return t.name + "." + t.attr;
    case Term::Empty: return "empty";
    default: {
        static const std::set<std::string> reserved = {"true",  "false", "deadlock", "forall", "exists", "in",
                                                       "empty", "EX",    "AX",       "EF",     "AF",     "EG",
                                                       "AG",    "E",     "A",        "U"};
        if (reserved.count(t.name)) return "\"" + t.name + "\"";
        return quote(t.name);
    }
    }
}

const char* op_text(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    }
    return "=";
}

}  // namespace

WftcNet parse_model(const std::string& text) { return ModelParser(text).parse(); }

std::string serialize_model(const WftcNet& net) {
    std::ostringstream os;
    auto list = [&](const char* sec, const std::vector<std::string>& v) {
        os << "[" << sec << "]";
        for (const auto& s : v) os << " " << s;
        os << "\n";
    };
    list("PLACES", net.places);
    std::vector<std::string> tids;
    for (const auto& t : net.transitions) tids.push_back(t.id);
    list("TRANSITIONS", tids);
    os << "[ARCS]";
    for (const auto& a : net.arcs) {
        auto name = [&](Node n) { return n.is_place ? net.places[n.index] : net.transitions[n.index].id; };
        os << " " << name(a.from) << "->" << name(a.to);
    }
    os << "\n";
    if (!net.items.empty()) list("DATA", net.items);
    if (net.has_table) {
        os << "[TABLE] " << net.schema.name << "(";
        for (size_t i = 0; i < net.schema.attrs.size(); ++i) os << (i ? ", " : "") << net.schema.attrs[i];
        os << ")\n";
        for (const auto& r : net.initial_table) {
            os << " ";
            for (size_t i = 0; i < r.size(); ++i) os << (i ? ", " : " ") << value_text(r[i]);
            os << "\n";
        }
    }
    bool any_ops = false;
    for (const auto& t : net.transitions)
        if (!t.rd.empty() || !t.wt.empty() || !t.dt.empty() || !t.ops.empty()) any_ops = true;
    if (any_ops) {
        os << "[OPS]\n";
        for (const auto& t : net.transitions) {
            if (t.rd.empty() && t.wt.empty() && t.dt.empty() && t.ops.empty()) continue;
            os << "  " << t.id << ":";
            auto items = [&](const char* k, const std::vector<int>& v) {
                if (v.empty()) return;
                os << " " << k << "(";
                for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << net.items[v[i]];
                os << ")";
            };
            items("rd", t.rd);
            items("wt", t.wt);
            items("dt", t.dt);
            for (const auto& op : t.ops) {
                switch (op.kind) {
                case TableOp::Sel:
                    os << " sel(" << net.schema.name << "." << net.schema.attrs[op.column] << ")";
                    break;
                case TableOp::Ins:
                    os << " ins(" << net.schema.name << ": " << assigns_text(net, op.assigns);
                    if (!op.where.empty()) os << " where " << assigns_text(net, op.where);
                    os << ")";
                    break;
                case TableOp::Upd:
                    os << " upd(" << net.schema.name << ": " << assigns_text(net, op.assigns) << " where "
                       << assigns_text(net, op.where) << ")";
                    break;
                case TableOp::Del:
                    os << " del(" << net.schema.name << " where " << assigns_text(net, op.where) << ")";
                    break;
                }
            }
            os << "\n";
        }
    }
    if (!net.predicates.empty()) {
        os << "[PREDICATES]\n";
        for (const auto& p : net.predicates) {
            os << "  " << p.id << " = ";
            switch (p.kind) {
            case PredKind::Membership:
                os << "in(" << net.items[p.item] << ", " << net.schema.name << "." << net.schema.attrs[p.column] << ")";
                break;
            case PredKind::EqualsConst: os << "eq(" << net.items[p.item] << ", " << quote(p.constant) << ")"; break;
            case PredKind::IsDefined: os << "def(" << net.items[p.item] << ")"; break;
            }
            os << "\n";
        }
    }
    if (!net.guards.empty()) {
        os << "[GUARDS]\n";
        for (const auto& g : net.guards) {
            os << "  " << g.id << " = ";
            print_bool(os, g.expr, [&](int p) { return net.predicates[p].id; }, false);
            os << "\n";
        }
    }
    bool any_guard = std::any_of(net.transitions.begin(), net.transitions.end(),
                                 [](const Transition& t) { return t.guard >= 0; });
    if (any_guard) {
        os << "[GUARDMAP]";
        for (const auto& t : net.transitions)
            if (t.guard >= 0) os << " " << t.id << ":" << net.guards[t.guard].id;
        os << "\n";
    }
    if (!net.constraints.empty()) {
        os << "[CONSTRAINTS]\n";
        for (const auto& c : net.constraints) {
            os << " ";
            for (size_t i = 0; i < c.size(); ++i) {
                os << (i ? " | " : " ");
                bool paren = c.size() > 1 && c[i].size() > 1;
                if (paren) os << "(";
                for (size_t j = 0; j < c[i].size(); ++j)
                    os << (j ? " & " : "") << (c[i][j].negated ? "!" : "") << net.guards[c[i][j].guard].id;
                if (paren) os << ")";
            }
            os << "\n";
        }
    }
    if (net.start >= 0) os << "[INITIAL] " << net.places[net.start] << "\n";
    if (net.end >= 0) os << "[FINAL] " << net.places[net.end] << "\n";
    return os.str();
}

bool same_model(const WftcNet& a, const WftcNet& b) { return a == b; }

Formula parse_dctl(const std::string& text, const WftcNet* net) {
    Formula f = DctlParser(text).parse();
    if (net) resolve(f, *net);
    return f;
}

std::string format_formula(const Formula& f) {
    switch (f.kind) {
    case Formula::True: return "true";
    case Formula::Place: return f.name;
    case Formula::Cmp: return term_text(f.lhs) + " " + op_text(f.op) + " " + term_text(f.rhs);
    case Formula::Forall:
    case Formula::Exists:
        return std::string(f.kind == Formula::Forall ? "forall " : "exists ") + f.name + " in R, [" +
               format_formula(f.kids[0]) + "]";
    case Formula::Not: return "!" + format_formula(f.kids[0]);
    case Formula::And: return "(" + format_formula(f.kids[0]) + " & " + format_formula(f.kids[1]) + ")";
    case Formula::Or: return "(" + format_formula(f.kids[0]) + " | " + format_formula(f.kids[1]) + ")";
    case Formula::EX: return "EX " + format_formula(f.kids[0]);
    case Formula::EG: return "EG " + format_formula(f.kids[0]);
    case Formula::EU: return "E(" + format_formula(f.kids[0]) + " U " + format_formula(f.kids[1]) + ")";
    case Formula::AU: return "A(" + format_formula(f.kids[0]) + " U " + format_formula(f.kids[1]) + ")";
    }
    return "";
}

std::string export_dot(const WftcNet& net, const Srg& srg) {
    std::ostringstream os;
    os << "digraph srg {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (size_t i = 0; i < srg.states.size(); ++i) {
        std::string label = format_state(net, srg.states[i]);
        std::string esc;
        for (char c : label) {
            if (c == '"' || c == '\\') esc += '\\';
            esc += c;
        }
        os << "  c" << i << " [label=\"c" << i << "\\n" << esc << "\"";
        if (srg.pseudo[i]) os << ", style=dashed";
        if (static_cast<int>(i) == srg.initial) os << ", penwidth=2";
        os << "];\n";
    }
    for (const auto& e : srg.edges)
        os << "  c" << e.from << " -> c" << e.to << " [label=\"" << net.transitions[e.transition].id << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string export_json(const WftcNet& net, const Srg& srg) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["mode"] = srg.mode == Mode::Constrained ? "constrained" : "unconstrained";
    j["initial"] = srg.initial;
    j["places"] = net.places;
    j["items"] = net.items;
    std::vector<std::string> gids, tids;
    for (const auto& g : net.guards) gids.push_back(g.id);
    for (const auto& t : net.transitions) tids.push_back(t.id);
    j["guards"] = gids;
    j["transitions"] = tids;
    j["states"] = ordered_json::array();
    for (size_t i = 0; i < srg.states.size(); ++i) {
        const auto& s = srg.states[i];
        ordered_json st;
        st["id"] = i;
        ordered_json m = ordered_json::object();
        for (size_t p = 0; p < s.marking.size(); ++p)
            if (s.marking[p]) m[net.places[p]] = s.marking[p];
        st["marking"] = m;
        ordered_json d = ordered_json::object();
        for (size_t k = 0; k < s.data.size(); ++k) d[net.items[k]] = s.data[k] ? ordered_json(*s.data[k]) : ordered_json();
        st["data"] = d;
        ordered_json tab = ordered_json::array();
        for (const auto& r : s.table) {
            ordered_json row = ordered_json::array();
            for (const auto& v : r) row.push_back(v ? ordered_json(*v) : ordered_json());
            tab.push_back(row);
        }
        st["table"] = tab;
        ordered_json sg = ordered_json::object();
        for (size_t g = 0; g < s.sigma.size(); ++g) sg[net.guards[g].id] = std::string(1, tri_char(s.sigma[g]));
        st["sigma"] = sg;
        st["pseudo"] = static_cast<bool>(srg.pseudo[i]);
        j["states"].push_back(st);
    }
    j["edges"] = ordered_json::array();
    for (const auto& e : srg.edges) j["edges"].push_back({e.from, net.transitions[e.transition].id, e.to});
    return j.dump(2) + "\n";
}

Srg import_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Srg g;
    g.mode = j.at("mode") == "constrained" ? Mode::Constrained : Mode::Unconstrained;
    g.initial = j.at("initial");
    auto places = j.at("places").get<std::vector<std::string>>();
    auto items = j.at("items").get<std::vector<std::string>>();
    auto guards = j.at("guards").get<std::vector<std::string>>();
    auto tids = j.at("transitions").get<std::vector<std::string>>();
    for (const auto& st : j.at("states")) {
        StateC s;
        s.marking.assign(places.size(), 0);
        for (auto it = st.at("marking").begin(); it != st.at("marking").end(); ++it) {
            auto p = std::find(places.begin(), places.end(), it.key());
            s.marking[p - places.begin()] = it.value();
        }
        for (const auto& d : items) {
            const auto& v = st.at("data").at(d);
            s.data.push_back(v.is_null() ? Value() : Value(v.get<std::string>()));
        }
        for (const auto& row : st.at("table")) {
            Record r;
            for (const auto& v : row) r.push_back(v.is_null() ? Value() : Value(v.get<std::string>()));
            s.table.push_back(std::move(r));
        }
        for (const auto& gid : guards) {
            std::string v = st.at("sigma").at(gid);
            s.sigma.push_back(v == "T" ? Tri::T : v == "F" ? Tri::F : Tri::U);
        }
        g.states.push_back(std::move(s));
        g.pseudo.push_back(st.at("pseudo").get<bool>());
    }
    for (const auto& e : j.at("edges")) {
        auto t = std::find(tids.begin(), tids.end(), e.at(1).get<std::string>());
        g.edges.push_back({e.at(0).get<int>(), static_cast<int>(t - tids.begin()), e.at(2).get<int>()});
    }
    g.index_edges();
    return g;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace wftc
