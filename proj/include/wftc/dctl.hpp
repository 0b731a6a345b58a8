#pragma once

#include "wftc/netmodel.hpp"
#include "wftc/srg.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wftc {

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

struct Term {
    enum Kind { Attr, Var, Const, Empty } kind = Const;
    std::string name;  // variable or constant text
    std::string attr;  // Attr only, as written
    int column = -1;   // resolved attribute column
    bool operator==(const Term& o) const {
        return kind == o.kind && name == o.name && attr == o.attr;
    }
};

struct Formula {
    enum Kind { True, Place, Cmp, Forall, Exists, Not, And, Or, EX, EG, EU, AU } kind = True;
    std::string name;  // place name or bound variable
    CmpOp op = CmpOp::Eq;
    Term lhs, rhs;
    std::vector<Formula> kids;

    // filled by resolve()
    int place = -1;
    int literal_column = -1;  // quantifier bound to a key literal

    bool operator==(const Formula& o) const {
        return kind == o.kind && name == o.name && (kind != Cmp || (op == o.op && lhs == o.lhs && rhs == o.rhs)) &&
               kids == o.kids;
    }
};

using SatSet = std::vector<char>;

struct Verdict {
    bool holds = false;
    bool sat_initial = false;
    SatSet sat_set;
    SatSet pre_set;
    std::optional<int> evidence;
    std::string note;
};

class DctlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// binds places, attributes and key-literal quantifiers against a net
void resolve(Formula& f, const WftcNet& net);

bool compare_values(const Value& a, CmpOp op, const Value& b, bool b_is_empty = false);

using Binding = std::map<std::string, const Record*>;
bool eval_atom(const WftcNet& net, const StateC& state, const Formula& atom, const Binding& binding);

SatSet sat(const WftcNet& net, const Srg& srg, const Formula& f);
SatSet sat_ex(const Srg& srg, const SatSet& s);
SatSet sat_eg(const Srg& srg, const SatSet& s);
SatSet sat_eu(const Srg& srg, const SatSet& s1, const SatSet& s2);
SatSet sat_au(const Srg& srg, const SatSet& s1, const SatSet& s2);

std::size_t count(const SatSet& s);

Verdict verify(const WftcNet& net, const Srg& srg, const Formula& f);

struct MetricResult {
    std::string name;
    std::string formula;
    bool instantiable = false;
    std::string reason;
    Verdict verdict;
};

std::vector<MetricResult> builtin_metrics(const WftcNet& net, const Srg& srg);

}  // namespace wftc
