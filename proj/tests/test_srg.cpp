#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>

using namespace wftc;
using testsupport::find_state;
using testsupport::load;
using testsupport::make_state;

namespace {

const Record r1{"id1", "license1", "copy1"};
const Record r2{"id2", "license2", "copy2"};

}  // namespace

TEST_CASE("initial state") {
    auto net = load("motivating.wftc");
    auto c0 = initial_state(net);
    CHECK(c0 == make_state(net, "p0", {{}, {}, {}, {}}, {r1, r2}, "______"));
    auto empty = initial_state(load("empty.wftc"));
    CHECK(empty.table.empty());
}

TEST_CASE("refinement") {
    auto net = load("motivating.wftc");
    auto c0 = initial_state(net);
    CHECK(refine(net, c0, net.item_index("id")) == std::vector<std::string>{"id1", "id2", "id3"});
    CHECK(refine(net, c0, net.item_index("password")) == std::vector<std::string>{"password"});

    auto grown = c0;
    grown.table.push_back({"id3", std::nullopt, std::nullopt});
    CHECK(refine(net, grown, net.item_index("id")) == std::vector<std::string>{"id1", "id2", "id3", "id4"});

    auto bare = c0;
    bare.table = {{"id1", std::nullopt, std::nullopt}};
    CHECK(refine(net, bare, net.item_index("license")) == std::vector<std::string>{"license1"});

    std::string fresh = refine(net, grown, net.item_index("id")).back();
    for (const auto& r : grown.table) CHECK(r[0] != Value(fresh));
}

TEST_CASE("enabling") {
    auto net = load("motivating.wftc");
    auto c0 = initial_state(net);
    CHECK(enabled(net, c0, net.transition_index("t0")));
    CHECK_FALSE(enabled(net, c0, net.transition_index("t1")));
    auto c3 = make_state(net, "p1", {"id3", "password", {}, {}}, {r1, r2}, "FT____");
    CHECK_FALSE(enabled(net, c3, net.transition_index("t1")));
    CHECK(enabled(net, c3, net.transition_index("t2")));
    CHECK_THROWS_AS(enabled(net, c0, 99), ModelError);
    CHECK_THROWS_AS(fire(net, c0, net.transition_index("t1"), Mode::Constrained), ModelError);
}

TEST_CASE("firing t0 at the initial state") {
    auto net = load("motivating.wftc");
    auto succ = fire(net, initial_state(net), net.transition_index("t0"), Mode::Constrained);
    REQUIRE(succ.size() == 3);
    CHECK(succ[0].state == make_state(net, "p1", {"id1", "password", {}, {}}, {r1, r2}, "TF____"));
    CHECK(succ[1].state == make_state(net, "p1", {"id2", "password", {}, {}}, {r1, r2}, "TF____"));
    CHECK(succ[2].state == make_state(net, "p1", {"id3", "password", {}, {}}, {r1, r2}, "FT____"));

    auto wfd = load("motivating-wfd.wftc");
    auto branches = fire(wfd, initial_state(wfd), wfd.transition_index("t0"), Mode::Unconstrained);
    CHECK(branches.size() == 4);
    CHECK(std::count_if(branches.begin(), branches.end(), [](const Successor& s) { return s.pseudo; }) == 2);
}

TEST_CASE("insert grows the table") {
    auto net = load("motivating.wftc");
    auto c3 = make_state(net, "p1", {"id3", "password", {}, {}}, {r1, r2}, "FT____");
    auto succ = fire(net, c3, net.transition_index("t2"), Mode::Constrained);
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].state ==
          make_state(net, "p3", {"id3", "password", {}, {}}, {r1, r2, {"id3", {}, {}}}, "FT____"));
}

TEST_CASE("sequence net") {
    auto g = build_srg(load("empty.wftc"), Mode::Constrained);
    auto st = srg_stats(g);
    CHECK(st.state_count == 2);
    CHECK(st.arc_count == 1);
    CHECK(st.pseudo_count == 0);
}

TEST_CASE("state ceiling") {
    auto net = load("motivating.wftc");
    CHECK_THROWS_AS(build_srg(net, Mode::Constrained, 10), StateLimitError);
    setenv("WFTC_STATE_LIMIT", "5", 1);
    CHECK(default_state_limit() == 5);
    unsetenv("WFTC_STATE_LIMIT");
    CHECK(default_state_limit() == 1000000);
}

TEST_CASE("motivating graph contents") {
    auto net = load("motivating.wftc");
    auto g = build_srg(net, Mode::Constrained);
    CHECK(find_state(g, make_state(net, "p0", {{}, {}, {}, {}}, {r1, r2}, "______")) == 0);
    CHECK(find_state(g, make_state(net, "p1", {"id3", "password", {}, {}}, {r1, r2}, "FT____")) >= 0);
    CHECK(find_state(g, make_state(net, "p3", {"id3", "password", {}, {}}, {r1, r2, {"id3", {}, {}}}, "FT____")) >= 0);
    CHECK(find_state(g, make_state(net, "p13", {"id2", "password", "license1", "copy2"},
                                   {r1, {"id2", "license1", "copy2"}}, "TFFTFT")) >= 0);
    for (size_t i = 0; i < g.states.size(); ++i) CHECK(constraint_consistent(g.states[i].sigma, net.constraints));

    auto again = build_srg(net, Mode::Constrained);
    CHECK(again.states == g.states);
    CHECK(again.edges == g.edges);
}

TEST_CASE("token conservation on every edge") {
    auto net = load("motivating.wftc");
    auto g = build_srg(net, Mode::Constrained);
    for (const auto& e : g.edges) {
        std::vector<int> delta(net.places.size(), 0);
        for (int p : net.pre_t[e.transition]) --delta[p];
        for (int p : net.post_t[e.transition]) ++delta[p];
        for (size_t p = 0; p < net.places.size(); ++p)
            CHECK(g.states[e.to].marking[p] - g.states[e.from].marking[p] == delta[p]);
    }
}

TEST_CASE("table operation algebra") {
    std::string text =
        "[PLACES] a b c\n[TRANSITIONS] i d u\n[ARCS] a->i i->b b->d d->c c->u u->a\n[DATA] k v\n"
        "[TABLE] T(K, V)\n  k1, v1\n[OPS] i: ins(T: K=k) d: del(T where K=k) u: upd(T: V=v where K=k)\n"
        "[INITIAL] a\n[FINAL] c\n";
    auto net = parse_model(text);
    auto s = initial_state(net);
    s.data = {"k9", "v5"};
    auto after_ins = fire(net, s, net.transition_index("i"), Mode::Constrained).at(0).state;
    CHECK(after_ins.table.size() == 2);
    auto after_del = fire(net, after_ins, net.transition_index("d"), Mode::Constrained).at(0).state;
    CHECK(after_del.table == s.table);

    auto at_c = s;
    at_c.marking = {0, 0, 1};
    at_c.data = {"k1", "v5"};
    auto after_upd = fire(net, at_c, net.transition_index("u"), Mode::Constrained).at(0).state;
    CHECK(after_upd.table.size() == at_c.table.size());
    CHECK(after_upd.table[0] == Record{"k1", "v5"});

    // del needs a matching record
    auto miss = at_c;
    miss.marking = {0, 1, 0};
    miss.data = {"k7", "v1"};
    CHECK_FALSE(enabled(net, miss, net.transition_index("d")));
}

TEST_CASE("constrained states are non-pseudo states reachable through non-pseudo states") {
    for (const char* name : {"motivating.wftc", "motivating-wfd.wftc"}) {
        auto net = load(name);
        auto con = build_srg(net, Mode::Constrained);
        auto unc = build_srg(net, Mode::Unconstrained);
        std::vector<char> good(unc.states.size(), 0);
        std::vector<int> stack{unc.initial};
        good[unc.initial] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int ei : unc.succ[x]) {
                int y = unc.edges[ei].to;
                if (!good[y] && !unc.pseudo[y]) good[y] = 1, stack.push_back(y);
            }
        }
        for (const auto& s : con.states) {
            int id = find_state(unc, s);
            REQUIRE(id >= 0);
            CHECK(good[id]);
        }
    }
}
