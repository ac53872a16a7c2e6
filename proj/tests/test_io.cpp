#include "oracles.hpp"
#include "signet/error.hpp"
#include "signet/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace signet;

namespace {

std::string message_of(const std::function<void()>& f, ErrorCode expect) {
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.code() == expect);
        return e.what();
    }
    FAIL("expected an error");
    return {};
}

}  // namespace

TEST_CASE("graph JSON round trip") {
    const SignedGraph g = random_signed_graph({.n = 9, .edge_prob = 0.5, .negative_prob = 0.4, .seed = 3});
    const std::string text = dump_json(graph_to_json(g, {{"source", "test"}}));
    const GraphFile back = parse_graph_json(text);
    CHECK(back.graph == g);
    CHECK(back.meta["source"] == "test");
    CHECK(dump_json(graph_to_json(back.graph, back.meta)) == text);
}

TEST_CASE("graph JSON diagnostics") {
    const std::string bad = "{\n  \"n\": 3,\n  \"edges\": [[0, 1, -1],\n  [1, 2 -1]]\n}";
    const std::string msg = message_of([&] { parse_graph_json(bad); }, ErrorCode::ParseError);
    CHECK(msg.find("line 4") != std::string::npos);

    const std::string field = R"({"n": 3, "edges": [[0, 1, -1], [1, 2, "x"]]})";
    CHECK(message_of([&] { parse_graph_json(field); }, ErrorCode::ParseError).find("edges[1][2]") != std::string::npos);
    CHECK(message_of([] { parse_graph_json(R"({"edges": []})"); }, ErrorCode::ParseError).find("'n'") !=
          std::string::npos);
    message_of([] { parse_graph_json(R"({"n": 3, "edges": [[0, 1, 1]]})"); }, ErrorCode::DisconnectedGraph);
}

TEST_CASE("graph CSV import") {
    const GraphFile f = parse_graph_csv("i,j,w\n0,1,-1\n# comment\n0,2,-1\n\n1,2,-1\n");
    CHECK(f.graph == oracle::triangle());
    const std::string msg = message_of([] { parse_graph_csv("0,1,1\n1,2,abc\n"); }, ErrorCode::ParseError);
    CHECK(msg.find("line 2, field 3") != std::string::npos);
    message_of([] { parse_graph_csv("0,1\n"); }, ErrorCode::ParseError);
}

TEST_CASE("floats are written with 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    Json j;
    j["a"] = 0.1;
    j["b"] = std::vector<double>{1.0, 1.0 / 3.0};
    j["c"] = std::numeric_limits<double>::infinity();
    CHECK(dump_json(j, -1) == R"({"a":0.10000000000000001,"b":[1.0, 0.33333333333333331],"c":null})");
}

TEST_CASE("spectral summary JSON") {
    const Json j = to_json(thresholds(oracle::triangle(), 0.3));
    CHECK(j["lambda"].size() == 3);
    CHECK(j["pi1"].get<double>() == doctest::Approx(2.0));
    CHECK(j["pi1d"].get<double>() == doctest::Approx(7.0 / 3.0));
    CHECK(j["eps_step"].get<double>() == 0.3);
    CHECK(to_json(thresholds(build_graph(2, {{0, 1, 1}})))["pi2"].is_null());
}

TEST_CASE("frustration JSON") {
    const Json j = to_json(frustration_exact(oracle::triangle()));
    CHECK(j["value"].get<double>() == doctest::Approx(1.0));
    CHECK(j["exact"] == true);
    CHECK(j["signature"].size() == 3);
    CHECK(j.contains("restarts"));
}

TEST_CASE("CSV writers") {
    std::ostringstream tr;
    write_trajectory_csv(tr, {0.0, 0.5}, {Vector::Zero(2), Vector::Ones(2)});
    CHECK(tr.str() == "t,x1,x2\n0,0,0\n0.5,1,1\n");

    const EquilibriumSet set =
        find_equilibria(oracle::triangle(), make_profile("tanh", {}, 3), 2.5, {.n_seeds = 30});
    std::ostringstream eq;
    write_equilibria_csv(eq, set);
    std::istringstream in(eq.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "pi,branch_id,norm2,norm1,stability");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(set.records.size()));

    const SweepResult r = sweep_ct(oracle::triangle(), make_profile("tanh", {}, 3), make_grid(1.5, 2.5, 0.5));
    std::ostringstream sw;
    write_sweep_csv(sw, r);
    CHECK(sw.str().rfind("pi,branch,norm1,norm2,stability,kind\n", 0) == 0);
    const Json summary = sweep_summary(r);
    CHECK(summary["onsets"]["pi1_hat"]["value"].get<double>() == doctest::Approx(2.25));
    CHECK(summary["onsets"]["pi1d_hat"].is_null());
}

TEST_CASE("parse_state") {
    const Vector x = parse_state("1, -2.5\n3", 3);
    CHECK(x(1) == -2.5);
    message_of([] { parse_state("1 2", 3); }, ErrorCode::ParseError);
    message_of([] { parse_state("1 x 3", 3); }, ErrorCode::ParseError);
}
