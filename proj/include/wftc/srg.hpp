#pragma once

#include "wftc/netmodel.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace wftc {

struct StateC {
    std::vector<int> marking;
    std::vector<Value> data;
    std::vector<Record> table;
    std::vector<Tri> sigma;

    bool operator==(const StateC&) const = default;
};

struct StateHash {
    std::size_t operator()(const StateC& s) const;
};

enum class Mode { Constrained, Unconstrained };

struct Edge {
    int from = 0;
    int transition = 0;
    int to = 0;
    bool operator==(const Edge&) const = default;
};

class StateLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Srg {
    Mode mode = Mode::Constrained;
    std::vector<StateC> states;
    std::vector<Edge> edges;
    std::vector<char> pseudo;
    int initial = 0;
    double build_millis = 0.0;

    // adjacency by edge index, one entry per edge
    std::vector<std::vector<int>> succ, pred;
    void index_edges();
};

struct SrgStats {
    std::size_t state_count = 0;
    std::size_t arc_count = 0;
    std::size_t pseudo_count = 0;
    double build_millis = 0.0;
};

StateC initial_state(const WftcNet& net);
std::vector<std::string> refine(const WftcNet& net, const StateC& state, int item);
bool enabled(const WftcNet& net, const StateC& state, int t);

struct Successor {
    StateC state;
    bool pseudo = false;
};
std::vector<Successor> fire(const WftcNet& net, const StateC& state, int t, Mode mode);

std::size_t default_state_limit();
Srg build_srg(const WftcNet& net, Mode mode, std::size_t state_limit = default_state_limit());
SrgStats srg_stats(const Srg& srg);

std::string format_value(const Value& v);
std::string format_state(const WftcNet& net, const StateC& s);

}  // namespace wftc
