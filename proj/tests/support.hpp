#pragma once

#include "wftc/dctl.hpp"
#include "wftc/netmodel.hpp"
#include "wftc/srg.hpp"
#include "wftc/textio.hpp"

#include <string>

namespace testsupport {

inline std::string fixture(const std::string& name) { return std::string(WFTC_FIXTURES) + "/" + name; }

inline wftc::WftcNet load(const std::string& name) { return wftc::parse_model(wftc::read_file(fixture(name))); }

inline wftc::StateC make_state(const wftc::WftcNet& net, const std::string& place, std::vector<wftc::Value> data,
                               std::vector<wftc::Record> table, const std::string& sigma) {
    wftc::StateC s;
    s.marking.assign(net.places.size(), 0);
    s.marking[net.place_index(place)] = 1;
    s.data = std::move(data);
    s.table = std::move(table);
    wftc::canonicalize(s.table);
    for (char c : sigma) s.sigma.push_back(c == 'T' ? wftc::Tri::T : c == 'F' ? wftc::Tri::F : wftc::Tri::U);
    return s;
}

inline int find_state(const wftc::Srg& g, const wftc::StateC& s) {
    for (size_t i = 0; i < g.states.size(); ++i)
        if (g.states[i] == s) return static_cast<int>(i);
    return -1;
}

}  // namespace testsupport
