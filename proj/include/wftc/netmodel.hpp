#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wftc {

// nullopt is the undefined value
using Value = std::optional<std::string>;
using Record = std::vector<Value>;

enum class Tri : std::uint8_t { F = 0, T = 1, U = 2 };

char tri_char(Tri v);
Tri tri_not(Tri v);
Tri tri_and(Tri a, Tri b);
Tri tri_or(Tri a, Tri b);

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TableSchema {
    std::string name;
    std::vector<std::string> attrs;
    int column(const std::string& attr) const;
    bool operator==(const TableSchema&) const = default;
};

bool record_less(const Record& a, const Record& b);
void canonicalize(std::vector<Record>& records);

enum class PredKind { Membership, EqualsConst, IsDefined };

struct Predicate {
    std::string id;
    PredKind kind = PredKind::IsDefined;
    int item = -1;
    int column = -1;        // Membership
    std::string constant;   // EqualsConst
    bool operator==(const Predicate&) const = default;
};

// boolean expression over predicate literals
struct BoolExpr {
    enum Kind { Atom, Not, And, Or } kind = Atom;
    int atom = -1;
    std::vector<BoolExpr> kids;
    bool operator==(const BoolExpr&) const = default;
};

Tri eval_bool(const BoolExpr& e, const std::vector<Tri>& atoms);
void collect_atoms(const BoolExpr& e, std::vector<int>& out);

struct Guard {
    std::string id;
    BoolExpr expr;
    bool operator==(const Guard&) const = default;
};

struct GuardLiteral {
    int guard = -1;
    bool negated = false;
    bool operator==(const GuardLiteral&) const = default;
};
using Conjunction = std::vector<GuardLiteral>;
using Constraint = std::vector<Conjunction>;

struct OpSource {
    bool is_item = false;
    int item = -1;
    std::string constant;
    bool operator==(const OpSource&) const = default;
};

struct TableOp {
    enum Kind { Sel, Ins, Del, Upd } kind = Sel;
    std::vector<std::pair<int, OpSource>> assigns;  // Ins, Upd
    std::vector<std::pair<int, OpSource>> where;    // Del, Upd
    int column = -1;                                 // Sel
    bool operator==(const TableOp&) const = default;
};

struct Transition {
    std::string id;
    std::vector<int> rd, wt, dt;
    std::vector<TableOp> ops;
    int guard = -1;
    bool operator==(const Transition&) const = default;
};

struct Node {
    bool is_place = true;
    int index = -1;
    bool operator==(const Node&) const = default;
};

struct Arc {
    Node from, to;
    bool operator==(const Arc&) const = default;
};

struct WftcNet {
    std::vector<std::string> places;
    std::vector<Transition> transitions;
    std::vector<Arc> arcs;
    std::vector<std::string> items;
    bool has_table = false;
    TableSchema schema;
    std::vector<Record> initial_table;
    std::vector<Predicate> predicates;
    std::vector<Guard> guards;
    std::vector<Constraint> constraints;
    int start = -1;
    int end = -1;

    // derived by finalize()
    std::vector<int> binding;                 // item -> column or -1
    std::vector<std::vector<int>> pre_t, post_t;  // transition -> places
    std::vector<std::vector<int>> guard_items;    // guard -> items its predicates read

    int place_index(const std::string& name) const;
    int transition_index(const std::string& name) const;
    int item_index(const std::string& name) const;
    int guard_index(const std::string& name) const;
    int predicate_index(const std::string& name) const;

    void finalize();
    bool operator==(const WftcNet&) const = default;
};

std::vector<Node> preset(const WftcNet& net, Node n);
std::vector<Node> postset(const WftcNet& net, Node n);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_workflow_structure(const WftcNet& net);

Tri eval_constraint(const Constraint& c, const std::vector<Tri>& sigma);
bool constraint_consistent(const std::vector<Tri>& sigma, const std::vector<Constraint>& res);

}  // namespace wftc
