#pragma once

#include "wftc/dctl.hpp"
#include "wftc/netmodel.hpp"
#include "wftc/srg.hpp"

#include <stdexcept>
#include <string>

namespace wftc {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column);
    int line;
    int column;
};

WftcNet parse_model(const std::string& text);
std::string serialize_model(const WftcNet& net);
bool same_model(const WftcNet& a, const WftcNet& b);

// with a net, names are resolved and checked; without, the raw AST is returned
Formula parse_dctl(const std::string& text, const WftcNet* net = nullptr);
std::string format_formula(const Formula& f);

std::string export_dot(const WftcNet& net, const Srg& srg);
std::string export_json(const WftcNet& net, const Srg& srg);
Srg import_json(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace wftc
