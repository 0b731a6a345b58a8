#include "wftc/cli.hpp"

#include "wftc/dctl.hpp"
#include "wftc/netmodel.hpp"
#include "wftc/srg.hpp"
#include "wftc/textio.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <optional>

namespace wftc {

namespace {

using nlohmann::ordered_json;

struct Options {
    std::string model;
    std::string mode;
    std::string format = "text";
    std::string dot, json;
    std::vector<std::string> formulas;
    std::vector<std::string> formula_files;
};

struct VerdictRow {
    std::string name;
    std::string formula;
    bool instantiable = true;
    std::string reason;
    Verdict verdict;
};

Mode pick_mode(const WftcNet& net, const std::string& requested) {
    if (requested == "constrained") return Mode::Constrained;
    if (requested == "unconstrained") return Mode::Unconstrained;
    return net.constraints.empty() ? Mode::Unconstrained : Mode::Constrained;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

ordered_json report_json(const Options& o, const WftcNet& net, const Srg& srg, const std::vector<VerdictRow>& rows) {
    SrgStats st = srg_stats(srg);
    ordered_json j;
    j["model"] = o.model;
    j["mode"] = srg.mode == Mode::Constrained ? "constrained" : "unconstrained";
    j["stateCount"] = st.state_count;
    j["arcCount"] = st.arc_count;
    j["pseudoCount"] = st.pseudo_count;
    j["buildMillis"] = std::round(st.build_millis * 1000.0) / 1000.0;
    if (!rows.empty()) {
        j["verdicts"] = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json v;
            if (!r.name.empty()) v["name"] = r.name;
            v["formula"] = r.formula;
            if (!r.instantiable) {
                v["instantiable"] = false;
                v["reason"] = r.reason;
            } else {
                v["holds"] = r.verdict.holds;
                v["satCount"] = count(r.verdict.sat_set);
                v["preCount"] = count(r.verdict.pre_set);
                if (r.verdict.evidence)
                    v["evidence"] = {{"state", *r.verdict.evidence},
                                     {"value", format_state(net, srg.states[*r.verdict.evidence])}};
                if (!r.verdict.note.empty()) v["note"] = r.verdict.note;
            }
            j["verdicts"].push_back(v);
        }
    }
    return j;
}

void report_text(std::ostream& out, const Options& o, const WftcNet& net, const Srg& srg,
                 const std::vector<VerdictRow>& rows) {
    SrgStats st = srg_stats(srg);
    out << "model        " << o.model << "\n";
    out << "mode         " << (srg.mode == Mode::Constrained ? "constrained" : "unconstrained") << "\n";
    out << "states       " << st.state_count << "\n";
    out << "arcs         " << st.arc_count << "\n";
    out << "pseudo       " << st.pseudo_count << "\n";
    out << "build ms     " << std::fixed << std::setprecision(3) << st.build_millis << "\n";
    if (rows.empty()) return;
    size_t w = 7;
    for (const auto& r : rows) w = std::max(w, (r.name.empty() ? r.formula : r.name).size());
    out << "\n";
    for (const auto& r : rows) {
        std::string label = r.name.empty() ? r.formula : r.name;
        out << std::left << std::setw(static_cast<int>(w) + 2) << label;
        if (!r.instantiable) {
            out << "NOT INSTANTIABLE  " << r.reason << "\n";
            continue;
        }
        out << (r.verdict.holds ? "TRUE " : "FALSE") << "  sat=" << count(r.verdict.sat_set);
        if (r.verdict.evidence) out << "  at c" << *r.verdict.evidence << " " << format_state(net, srg.states[*r.verdict.evidence]);
        if (!r.verdict.note.empty()) out << "  (" << r.verdict.note << ")";
        out << "\n";
        if (!r.name.empty()) out << std::string(w + 2, ' ') << r.formula << "\n";
    }
}

int run(const std::string& cmd, const Options& o, std::ostream& out, std::ostream& err) {
    WftcNet net;
    try {
        net = parse_model(read_file(o.model));
    } catch (const ParseError& e) {
        err << o.model << ":" << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kUsageError;
    }
    ValidationReport rep = validate_workflow_structure(net);
    if (!rep.ok()) {
        for (const auto& v : rep.violations) err << o.model << ": " << v << "\n";
        return kUsageError;
    }

    std::vector<std::pair<std::string, Formula>> formulas;
    if (cmd == "verify") {
        std::vector<std::string> texts = o.formulas;
        try {
            for (const auto& path : o.formula_files) {
                std::istringstream in(read_file(path));
                std::string line;
                while (std::getline(in, line)) {
                    auto b = line.find_first_not_of(" \t\r");
                    if (b == std::string::npos || line[b] == '#') continue;
                    texts.push_back(line.substr(b));
                }
            }
            if (texts.empty()) {
                err << "verify needs --formula or --formula-file\n";
                return kUsageError;
            }
            for (const auto& t : texts) formulas.emplace_back(t, parse_dctl(t, &net));
        } catch (const std::exception& e) {
            err << "formula: " << e.what() << "\n";
            return kUsageError;
        }
    }

    Srg srg;
    try {
        srg = build_srg(net, pick_mode(net, o.mode));
    } catch (const StateLimitError& e) {
        err << e.what() << "\n";
        return kResourceError;
    }

    try {
        if (!o.dot.empty()) write_text(o.dot, export_dot(net, srg));
        if (!o.json.empty()) write_text(o.json, export_json(net, srg));
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kUsageError;
    }

    std::vector<VerdictRow> rows;
    if (cmd == "verify") {
        for (const auto& [text, f] : formulas) {
            VerdictRow r;
            r.formula = text;
            r.verdict = verify(net, srg, f);
            rows.push_back(std::move(r));
        }
    } else if (cmd == "metrics") {
        for (auto& m : builtin_metrics(net, srg)) {
            VerdictRow r;
            r.name = m.name;
            r.formula = m.formula;
            r.instantiable = m.instantiable;
            r.reason = m.reason;
            r.verdict = m.verdict;
            rows.push_back(std::move(r));
        }
    }

    if (o.format == "json")
        out << report_json(o, net, srg, rows).dump(2) << "\n";
    else
        report_text(out, o, net, srg, rows);

    for (const auto& r : rows)
        if (!r.instantiable || !r.verdict.holds) return kSomeFalse;
    return kAllTrue;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"WFTC-net model checker"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::string> modes = {"constrained", "unconstrained"};
    const std::vector<std::string> formats = {"text", "json"};

    auto common = [&](CLI::App* sub) {
        sub->add_option("model", o.model, "model file")->required();
        sub->add_option("--mode", o.mode, "constrained or unconstrained")->check(CLI::IsMember(modes));
        sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember(formats));
        sub->add_option("--dot", o.dot, "write the SRG as Graphviz DOT");
        sub->add_option("--json", o.json, "write the SRG as JSON");
    };
    auto* build = app.add_subcommand("build", "build the state reachability graph");
    common(build);
    auto* ver = app.add_subcommand("verify", "check DCTL formulas");
    common(ver);
    ver->add_option("--formula", o.formulas, "formula text");
    ver->add_option("--formula-file", o.formula_files, "file with one formula per line");
    auto* met = app.add_subcommand("metrics", "check the built-in performance metrics");
    common(met);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kAllTrue;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kAllTrue;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsageError;
    }
    std::string cmd = build->parsed() ? "build" : ver->parsed() ? "verify" : "metrics";
    return run(cmd, o, out, err);
}

}  // namespace wftc
