// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "cli_harness.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "rh/filtration.hpp"
#include "rh/sweep.hpp"

#include <chrono>
#include <functional>
#include <iostream>

using namespace rh;

namespace {

constexpr int kExpressionSamples = 1000;
constexpr int kOrderSamples = 500;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what)
    {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string flow_path(const char* name) { return std::string(RH_DATA_DIR) + "/" + name; }

// Shared randomized corpora, reused by the CLI round-trip criterion.
const std::vector<Manifold3Expression>& expression_corpus()
{
    static const std::vector<Manifold3Expression> corpus = [] {
        std::mt19937 rng(1);
        std::vector<Manifold3Expression> out;
        for (int i = 0; i < kExpressionSamples; ++i)
            out.push_back(testgen::random_expression(rng, 20, 6, false));
        return out;
    }();
    return corpus;
}

const std::vector<FlowSpec>& flow_corpus()
{
    static const std::vector<FlowSpec> corpus = [] {
        std::mt19937 rng(2);
        std::vector<FlowSpec> out;
        for (int i = 0; i < kOrderSamples; ++i)
            out.push_back(testgen::random_flow(rng, 7, i % 3 == 0 ? 0.2 : 0.3, true, i % 3 != 0));
        return out;
    }();
    return corpus;
}

Check franks_exclusion()
{
    Check c;
    auto o = clitest::run({"check-franks", "--betti", "1,0,1,0,1", "--k", "*,*,0,*"});
    c.expect(o.code == 1, "exit status " + std::to_string(o.code));
    c.expect(o.out.find("violation: (a) k₂ ≥ 2  [k₂ ≥ β₂−β₁+β₀ = 2 (k₂ = 0)]") != std::string::npos,
             "violated instance not reported");
    c.detail = c.ok ? "k₂ ≥ β₂−β₁+β₀ = 2 reported, exit 1" : c.detail;
    return c;
}

Check no_saddle_base_case()
{
    Check c;
    auto o = clitest::run({"verify", "--flow", flow_path("one_attractor.flow"), "--pq-bound", "5"});
    c.expect(o.code == 0 && o.out.rfind("S3xS1\n", 0) == 0, "orientable spec gave: " + o.out.substr(0, o.out.find('\n')));

    FlowSpec spec = parse_flow("flow dim=4 orientable=false\norbit a index=0 rho=+1 nu=+1\n"
                               "orbit r index=3 rho=+1 nu=+1\nedge a < r\n");
    TheoremReport r = verify_main_theorem(spec, 5);
    c.expect(r.result.verdict == Verdict::S3twistS1, "non-orientable spec gave " + to_string(r.result));
    QuotientVerdict q = kwasik_exclusion(Manifold4::S3xS1, false);
    c.expect(q.manifold == Manifold4::S3twistS1, "quotient exclusion did not single out S3twistS1");
    c.detail = c.ok ? "S3xS1 (orientable), S3twistS1 (non-orientable)" : c.detail;
    return c;
}

Check theorem_sweep()
{
    Check c;
    const auto rows = run_sweep(4, 2, 5);
    std::size_t admissible = 0, obstructed = 0;
    for (const auto& row : rows) {
        const std::string where = "k0=" + std::to_string(row.k0) + " k1=" + std::to_string(row.k1) + ": ";
        if (row.admissible) {
            ++admissible;
            c.expect(row.result.verdict == Verdict::S3xS1, where + to_string(row.result));
            c.expect(row.evidence_complete, where + "incomplete evidence");
        } else {
            ++obstructed;
            c.expect(row.result.verdict == Verdict::Obstructed && row.result.reason.rfind("N1:", 0) == 0,
                     where + to_string(row.result));
        }
        c.expect(row.as_expected, where + "unexpected row");
    }
    if (c.ok)
        c.detail = std::to_string(admissible) + " admissible specs → S3xS1, " + std::to_string(obstructed) +
                   " with k₁ < k₀−1 → Obstructed(N1)";
    return c;
}

Check compr_certification()
{
    Check c;
    std::size_t eliminated = 0, splits = 0;
    for (int k0 = 1; k0 <= 4; ++k0)
        for (int k1 = k0 - 1; k1 <= k0 + 2; ++k1) {
            const std::string where = "k0=" + std::to_string(k0) + " k1=" + std::to_string(k1) + ": ";
            ComprResult r = verify_compr(k0, k1, 5);
            c.expect(r.certified && r.counterexamples.empty(), where + "not certified");
            c.expect(r.eliminated == r.eliminated_by_irreducibility, where + "elimination without a verdict");
            c.expect(r.branch_splits == r.branch_splits_closed, where + "open branch");
            if (k1 > 0)
                c.expect(r.branch_splits > 0, where + "branch piece never met");

            // every eliminated node in the trace carries its verdict, and each
            // split has both resolutions closed
            std::function<void(const TraceNode&)> walk = [&](const TraceNode& n) {
                if (n.status == NodeStatus::Eliminated)
                    c.expect(n.reason.rfind("is_E_irreducible(", 0) == 0, where + "bare elimination");
                if (n.status == NodeStatus::Counterexample)
                    c.expect(false, where + "counterexample node " + to_string(n.expr));
                if (n.status == NodeStatus::Split)
                    c.expect(n.children.size() == 2, where + "split without two resolutions");
                for (const auto& child : n.children)
                    walk(child);
            };
            walk(r.root);
            eliminated += r.eliminated;
            splits += r.branch_splits;
        }
    if (c.ok)
        c.detail = "16 parameter sets certified, " + std::to_string(eliminated) + " eliminations with verdicts, " +
                   std::to_string(splits) + " branch splits closed";
    return c;
}

Check homology_oracle()
{
    Check c;
    std::size_t components = 0;
    for (const auto& e : expression_corpus())
        for (const auto& comp : e.components) {
            ++components;
            const auto a = h1(comp);
            const auto b = h1_oracle(comp);
            c.expect(a == b, "mismatch on " + to_string(comp) + ": " + to_string(a) + " vs " + to_string(b));
            c.expect(a == oracle::determinantal_oracle(oracle::diagonal_entries(comp)),
                     "determinantal divisors disagree on " + to_string(comp));
        }
    if (c.ok)
        c.detail = std::to_string(kExpressionSamples) + " expressions, " + std::to_string(components) +
                   " components, 0 mismatches";
    return c;
}

Check normalization_confluence()
{
    Check c;
    std::mt19937 rng(3);
    for (int i = 0; i < kExpressionSamples; ++i) {
        Manifold3Expression e = testgen::random_expression(rng, 20, 6, true);
        Manifold3Expression n = normalize(e);
        c.expect(normalize(n) == n, "not idempotent on " + to_string(e));
        for (int k = 0; k < 3; ++k)
            c.expect(normalize(testgen::shuffled(e, rng)) == n, "permutation changes " + to_string(e));
    }
    if (c.ok)
        c.detail = std::to_string(kExpressionSamples) + " expressions, 3 permutations each";
    return c;
}

Check irreducibility_propagation()
{
    Check c;
    std::mt19937 rng(4);
    std::size_t expressions = 0, moves = 0;
    while (expressions < 200) {
        ConnectedSum3 core = testgen::random_component(rng, 10, 3, false);
        if (is_E_irreducible(normalize(core)) != Irreducibility::True)
            continue;
        Manifold3Expression e{core};
        // companions without an E-irreducible verdict of their own
        const long extra = testgen::uniform(rng, 0, 2);
        for (long i = 0; i < extra; ++i) {
            ConnectedSum3 companion = testgen::random_component(rng, 10, 2, false);
            companion.summands.push_back(Prime3::sphere_circle());
            e.components.push_back(companion);
        }
        ++expressions;
        for (const auto& m : enumerate_moves(e, 5)) {
            ++moves;
            const auto& out = m.result.result.components;
            const bool kept = std::any_of(out.begin(), out.end(),
                                          [](const auto& x) { return is_E_irreducible(x) == Irreducibility::True; });
            c.expect(kept, "move " + describe(m.move) + " on " + to_string(e) + " gave " + to_string(m.result.result));
        }
    }
    if (c.ok)
        c.detail = std::to_string(expressions) + " expressions, " + std::to_string(moves) + " moves, 100% keep one";
    return c;
}

Check order_correctness()
{
    Check c;
    std::size_t cycles = 0;
    for (const auto& spec : flow_corpus()) {
        auto expected = oracle::brute_force_order(spec);
        auto got = dynamic_order(spec);
        if (expected) {
            c.expect(std::holds_alternative<std::vector<std::string>>(got) && std::get<0>(got) == *expected,
                     "order differs from brute force on\n" + serialize_flow(spec));
        } else {
            ++cycles;
            c.expect(std::holds_alternative<CycleError>(got) && is_valid_cycle_witness(spec, std::get<1>(got)),
                     "missing or invalid cycle witness on\n" + serialize_flow(spec));
        }
    }
    if (c.ok)
        c.detail = std::to_string(kOrderSamples) + " specs, " + std::to_string(cycles) + " cyclic with valid witnesses";
    return c;
}

Check cli_contracts()
{
    Check c;
    std::size_t runs = 0;
    for (const auto& e : expression_corpus()) {
        c.expect(parse_expression(to_string(e)) == e, "parse(to_string) differs on " + to_string(e));
        auto o = clitest::run({"h1", "--expr", to_string(e)});
        ++runs;
        std::string expected;
        for (const auto& g : h1(normalize(e)))
            expected += to_string(g) + "\n";
        c.expect(o.code == 0 && o.out == expected && o.contract_holds(), "h1 on " + to_string(e));
    }
    for (const auto& spec : flow_corpus()) {
        c.expect(parse_flow(serialize_flow(spec)) == spec, "flow round trip");
        clitest::TempFile file(serialize_flow(spec));
        auto o = clitest::run({"order", "--flow", file.path()});
        ++runs;
        const bool cyclic = std::holds_alternative<CycleError>(dynamic_order(spec));
        c.expect(o.contract_holds() && o.code == (cyclic ? 1 : 0), "order exit status on\n" + serialize_flow(spec));
    }
    for (std::vector<std::string> args : {std::vector<std::string>{"check-franks", "--betti", "1,1,0,1,1", "--k", "1,0,0,1"},
                                          {"check-franks", "--betti", "1,0,1,0,1", "--k", "*,*,0,*"},
                                          {"verify", "--flow", flow_path("three_attractors.flow"), "--pq-bound", "3"},
                                          {"compr", "--k0", "2", "--k1", "2", "--pq-bound", "3"},
                                          {"h1", "--expr", "L(4,2)"},
                                          {"verify", "--flow", flow_path("absent.flow"), "--pq-bound", "3"},
                                          {"nonsense"}}) {
        ++runs;
        c.expect(clitest::run(args).contract_holds(), "exit contract broken for " + args[0]);
    }
    if (c.ok)
        c.detail = std::to_string(runs) + " invocations honour round trips and exit statuses";
    return c;
}

}  // namespace

int main()
{
    struct Criterion {
        int number;
        const char* name;
        Check (*run)();
        double limit_seconds;  // 0 = no limit
    };
    const Criterion criteria[] = {
        {1, "Franks exclusion", franks_exclusion, 1.0},
        {2, "no-saddle base case", no_saddle_base_case, 1.0},
        {3, "exhaustive theorem sweep", theorem_sweep, 300.0},
        {4, "backward induction certification", compr_certification, 0},
        {5, "homology oracle equivalence", homology_oracle, 0},
        {6, "normalization confluence", normalization_confluence, 0},
        {7, "E-irreducibility propagation", irreducibility_propagation, 0},
        {8, "dynamic order correctness", order_correctness, 0},
        {9, "CLI round trips and exit statuses", cli_contracts, 0},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Check result = criterion.run();
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.limit_seconds > 0 && seconds >= criterion.limit_seconds)
            result.expect(false, "took " + std::to_string(seconds) + " s");
        std::cout << "criterion " << criterion.number << " [" << (result.ok ? "PASS" : "FAIL") << "] "
                  << criterion.name << ": " << result.detail << " (" << std::fixed;
        std::cout.precision(3);
        std::cout << seconds << " s)\n";
        failures += result.ok ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
