#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "rh/flow_model.hpp"

#include <random>

using namespace rh;

namespace {

FlowSpec make(std::vector<OrbitDatum> orbits, std::vector<SmaleEdge> edges, bool orientable = true)
{
    FlowSpec s;
    s.orientable = orientable;
    s.orbits = std::move(orbits);
    s.smale_edges = std::move(edges);
    return s;
}

BettiVector betti(std::array<int, 5> b) { return {b, "test"}; }

PartialHandleCounts partial(std::optional<int> k0, std::optional<int> k1, std::optional<int> k2, std::optional<int> k3)
{
    PartialHandleCounts k;
    k.k = {k0, k1, k2, k3};
    return k;
}

}  // namespace

TEST_CASE("validate_flow")
{
    CHECK(validate_flow(make({{"a", 0}, {"r", 3}}, {{"a", "r"}})).empty());

    auto bad_index = validate_flow(make({{"x", 4}}, {}));
    REQUIRE(bad_index.size() == 1);
    CHECK(bad_index[0].find("index out of range (i=4)") != std::string::npos);

    auto twisted = validate_flow(make({{"a", 0, -1, 1}, {"r", 3, 1, -1}}, {}));
    REQUIRE(twisted.size() == 2);
    CHECK(twisted[0].find("attracting orbit twisted") != std::string::npos);
    CHECK(twisted[1].find("repelling orbit twisted") != std::string::npos);
    CHECK(validate_flow(make({{"a", 0, -1, 1}}, {}, false)).empty());

    CHECK(validate_flow(make({{"a", 0}, {"a", 1}}, {})).size() == 1);
    CHECK(validate_flow(make({{"a", 0}}, {{"a", "zz"}})).size() == 1);
}

TEST_CASE("dynamic_order examples")
{
    auto order = dynamic_order(make({{"r", 3}, {"s", 1}, {"a2", 0}, {"a1", 0}}, {{"a1", "s"}, {"a2", "s"}, {"s", "r"}}));
    REQUIRE(std::holds_alternative<std::vector<std::string>>(order));
    CHECK(std::get<0>(order) == std::vector<std::string>{"a1", "a2", "s", "r"});

    // equal indices are ordered by id unless an edge says otherwise
    auto same = dynamic_order(make({{"a", 1}, {"b", 1}}, {{"b", "a"}}));
    CHECK(std::get<0>(same) == std::vector<std::string>{"b", "a"});

    FlowSpec cyclic = make({{"x", 1}, {"y", 1}, {"z", 1}}, {{"x", "y"}, {"y", "z"}, {"z", "x"}});
    auto c = dynamic_order(cyclic);
    REQUIRE(std::holds_alternative<CycleError>(c));
    CHECK(std::get<1>(c).cycle.size() == 3);
    CHECK_FALSE(std::get<1>(c).through_index_order);
    CHECK(is_valid_cycle_witness(cyclic, std::get<1>(c)));

    FlowSpec inverted = make({{"x", 2}, {"y", 1}}, {{"x", "y"}});
    auto inv = dynamic_order(inverted);
    REQUIRE(std::holds_alternative<CycleError>(inv));
    CHECK(std::get<1>(inv).cycle == std::vector<std::string>{"x", "y"});
    CHECK(std::get<1>(inv).through_index_order);
    CHECK(is_valid_cycle_witness(inverted, std::get<1>(inv)));

    CHECK_FALSE(is_valid_cycle_witness(cyclic, CycleError{{"x", "z"}, false}));
}

TEST_CASE("dynamic_order matches the brute-force linear extension oracle")
{
    std::mt19937 rng(2024);
    int cycles = 0;
    for (int trial = 0; trial < 300; ++trial) {
        FlowSpec spec = testgen::random_flow(rng, 7, 0.25, true, trial % 2 == 0);
        auto expected = oracle::brute_force_order(spec);
        auto got = dynamic_order(spec);
        if (expected) {
            REQUIRE(std::holds_alternative<std::vector<std::string>>(got));
            CHECK(std::get<0>(got) == *expected);
        } else {
            ++cycles;
            REQUIRE(std::holds_alternative<CycleError>(got));
            CHECK(is_valid_cycle_witness(spec, std::get<1>(got)));
        }
    }
    CHECK(cycles > 0);
}

TEST_CASE("Franks inequalities")
{
    FranksReport r = franks_check(partial(std::nullopt, std::nullopt, 0, std::nullopt), betti({1, 0, 1, 0, 1}));
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].clause == "a");
    CHECK(r.violations[0].summary == "k₂ ≥ 2");
    CHECK(r.violations[0].detail.find("k₂ ≥ β₂−β₁+β₀ = 2") != std::string::npos);
    CHECK_FALSE(r.not_evaluated.empty());

    CHECK(franks_check(HandleCounts{{1, 0, 0, 1}}, betti({1, 1, 0, 1, 1})).pass());

    FranksReport none = franks_check(HandleCounts{{0, 0, 0, 1}}, betti({1, 1, 0, 1, 1}));
    REQUIRE_FALSE(none.pass());
    CHECK(none.violations[0].summary == "k₀ ≥ 1");

    // (b): k₁ ≥ k₀−1
    FranksReport b = franks_check(HandleCounts{{3, 1, 0, 1}}, betti({1, 1, 0, 1, 1}));
    REQUIRE(b.violations.size() == 1);
    CHECK(b.violations[0].clause == "b");

    // (c): premise k₀ = k₂ = 0 with β₁−β₀ ≤ 0 forces k₁ = 0
    FranksReport c = franks_check(HandleCounts{{0, 2, 0, 1}}, betti({0, 0, 0, 0, 0}));
    CHECK(std::any_of(c.violations.begin(), c.violations.end(), [](const auto& v) { return v.clause == "c"; }));

    CHECK(alternating_betti_sum(betti({1, 1, 0, 1, 1}), 3) == 1);
}

TEST_CASE("raising a handle count never creates an (a) violation")
{
    const BettiVector b = betti({1, 1, 0, 1, 1});
    for (int i = 0; i < 4; ++i)
        for (int base = 0; base < 4; ++base) {
            HandleCounts k{{base, base, base, base}};
            HandleCounts more = k;
            ++more.k[i];
            auto count_a = [](const FranksReport& r) {
                return std::count_if(r.violations.begin(), r.violations.end(), [](const auto& v) { return v.clause == "a"; });
            };
            CHECK(count_a(franks_check(more, b)) <= count_a(franks_check(k, b)));
        }
}

TEST_CASE("Poincaré–Hopf")
{
    CHECK(poincare_hopf_check(0));
    CHECK_FALSE(poincare_hopf_check(2));
}

TEST_CASE("saddle_structure")
{
    CHECK(std::holds_alternative<HandleCounts>(saddle_structure(HandleCounts{{1, 0, 0, 1}})));
    auto n1 = saddle_structure(HandleCounts{{3, 1, 0, 1}});
    REQUIRE(std::holds_alternative<StructureViolation>(n1));
    CHECK(std::get<1>(n1).equation == "N1");
    CHECK(std::get<1>(n1).message.rfind("N1:", 0) == 0);
    CHECK(std::get<1>(saddle_structure(HandleCounts{{0, 0, 0, 1}})).equation == "N0");
    CHECK(std::get<1>(saddle_structure(HandleCounts{{1, 0, 1, 1}})).equation == "N2");
    CHECK(std::get<1>(saddle_structure(HandleCounts{{1, 0, 0, 2}})).equation == "N3");

    for (int k0 = 0; k0 <= 6; ++k0)
        for (int k1 = 0; k1 <= 6; ++k1) {
            const bool expected = k0 >= 1 && k1 >= k0 - 1;
            CHECK(std::holds_alternative<HandleCounts>(saddle_structure(HandleCounts{{k0, k1, 0, 1}})) == expected);
        }
}

TEST_CASE("period_double")
{
    FlowSpec spec = make({{"a", 0}, {"s", 1, -1, -1}, {"r", 3}}, {{"a", "s"}});
    FlowSpec doubled = period_double(spec);
    CHECK(doubled.orbits.size() == 3);
    CHECK(doubled.orbits[1].rho == 1);
    CHECK(doubled.orbits[1].nu == -1);
    CHECK(period_double(doubled) == doubled);
    CHECK(doubled.smale_edges == spec.smale_edges);

    CHECK_THROWS_AS(period_double(make({{"a", 0, -1, 1}}, {}, false)), TwistedExtreme);
}

TEST_CASE("invariant manifold types")
{
    auto t = invariant_manifold_types({"s", 1, -1, 1});
    CHECK(t.unstable.to_string() == "R^1~xS^1");
    CHECK(t.stable.to_string() == "R^2xS^1");
    auto a = invariant_manifold_types({"a", 0, 1, 1});
    CHECK(a.unstable.euclidean_dim == 0);
    CHECK(a.stable.euclidean_dim == 3);
}

TEST_CASE("free-involution quotients")
{
    QuotientVerdict v = kwasik_exclusion(Manifold4::S3xS1, false);
    CHECK(v.precondition_ok);
    REQUIRE(v.manifold);
    CHECK(*v.manifold == Manifold4::S3twistS1);
    bool rp4_eliminated = false;
    for (const auto& line : v.trace)
        rp4_eliminated |= line.find("RP4#RP4: eliminated") != std::string::npos && line.find("k₂ ≥") != std::string::npos;
    CHECK(rp4_eliminated);

    CHECK_FALSE(kwasik_exclusion(Manifold4::S3xS1, true).precondition_ok);
    CHECK_FALSE(kwasik_exclusion(Manifold4::RP3xS1, false).precondition_ok);

    std::vector<QuotientCandidate> orientable_only;
    for (const auto& c : kwasik_quotients())
        if (c.orientable)
            orientable_only.push_back(c);
    CHECK_FALSE(kwasik_exclusion(Manifold4::S3xS1, false, orientable_only).manifold);
}

TEST_CASE("flow text format")
{
    const char* text = "; one attractor\nflow dim=4 orientable=true\norbit a index=0 rho=+1 nu=+1\n"
                       "orbit r index=3 rho=+1 nu=+1  ; repeller\nedge a < r\n";
    FlowSpec spec = parse_flow(text);
    CHECK(spec.orbits.size() == 2);
    CHECK(spec.smale_edges == std::vector<SmaleEdge>{{"a", "r"}});
    CHECK(serialize_flow(spec) == "flow dim=4 orientable=true\norbit a index=0 rho=+1 nu=+1\n"
                                  "orbit r index=3 rho=+1 nu=+1\nedge a < r\n");

    auto error_at = [](const char* bad) -> std::pair<int, int> {
        try {
            parse_flow(bad);
        } catch (const FlowParseError& e) {
            return {e.line(), e.column()};
        }
        return {0, 0};
    };
    CHECK(error_at("flow dim=4 orientable=true\norbit a index=0 rho=2 nu=+1\n") == std::pair{2, 17});
    CHECK(error_at("flow dim=4 orientable=true\n  bogus\n") == std::pair{2, 3});
    CHECK(error_at("flow dim=3 orientable=true\n").first == 1);
    CHECK(error_at("orbit a index=0 rho=+1 nu=+1\n").first == 1);
    CHECK(error_at("flow dim=4 orientable=true\norbit a index=0 rho=+1\n").first == 2);
    CHECK(error_at("flow dim=4 orientable=true\nedge a > b\n").first == 2);
}

TEST_CASE("parse_flow(serialize_flow(x)) == x")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        FlowSpec spec = testgen::random_flow(rng, 7, 0.2, trial % 3 != 0);
        CHECK(parse_flow(serialize_flow(spec)) == spec);
    }
}
