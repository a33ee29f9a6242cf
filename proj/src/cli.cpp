#include "rh/cli.hpp"

#include "rh/filtration.hpp"
#include "rh/flow_model.hpp"
#include "rh/presentation3.hpp"
#include "rh/surgery.hpp"
#include "rh/sweep.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rh::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_commas(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        parts.push_back(item);
    if (!text.empty() && text.back() == ',')
        parts.emplace_back();
    return parts;
}

int parse_count(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    int v = -1;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || v < 0)
        throw UsageError(what + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream outfile(path);
    if (!outfile)
        throw UsageError("cannot write '" + path + "'");
    outfile << text;
}

int check_franks(const std::string& betti_text, const std::string& k_text, std::ostream& out)
{
    auto betti_parts = split_commas(betti_text);
    if (betti_parts.size() != 5)
        throw UsageError("--betti expects five values b0,b1,b2,b3,b4");
    BettiVector b;
    b.source_note = "command line";
    for (int i = 0; i < 5; ++i)
        b.b[i] = parse_count(betti_parts[i], "--betti");

    auto k_parts = split_commas(k_text);
    if (k_parts.size() != 4)
        throw UsageError("--k expects four values k0,k1,k2,k3 ('*' leaves one unspecified)");
    PartialHandleCounts k;
    for (int i = 0; i < 4; ++i)
        if (k_parts[i] != "*")
            k.k[i] = parse_count(k_parts[i], "--k");

    FranksReport report = franks_check(k, b);
    for (const auto& s : report.satisfied)
        out << "ok " << s << "\n";
    for (const auto& s : report.not_evaluated)
        out << "skipped " << s << "\n";
    for (const auto& v : report.violations)
        out << "violation: (" << v.clause << ") " << v.summary << "  [" << v.detail << "]\n";
    out << (report.pass() ? "pass" : "fail") << "\n";
    return report.pass() ? 0 : 1;
}

int order(const std::string& path, std::ostream& out)
{
    FlowSpec spec = parse_flow(read_file(path));
    auto problems = validate_flow(spec);
    if (!problems.empty()) {
        for (const auto& p : problems)
            out << "violation: " << p << "\n";
        return 1;
    }
    auto result = dynamic_order(spec);
    if (auto* cycle = std::get_if<CycleError>(&result)) {
        out << "violation: cycle ";
        for (const auto& id : cycle->cycle)
            out << id << " < ";
        out << cycle->cycle.front() << (cycle->through_index_order ? " (closed by index order)" : "") << "\n";
        return 1;
    }
    const auto& ids = std::get<std::vector<std::string>>(result);
    for (std::size_t i = 0; i < ids.size(); ++i)
        out << (i ? " " : "") << ids[i];
    out << "\n";
    return 0;
}

int h1_command(const std::string& text, std::ostream& out)
{
    Manifold3Expression expr = normalize(parse_expression(text));
    for (const auto& group : h1(expr))
        out << to_string(group) << "\n";
    return 0;
}

int surger(const std::string& text, std::size_t component, const std::string& case_name,
           const std::string& disk_side, long p, long q, std::ostream& out)
{
    Manifold3Expression expr = normalize(parse_expression(text));
    if (component >= expr.components.size())
        throw UsageError("--component out of range");
    const ConnectedSum3& source = expr.components[component];

    auto without = [&](const Prime3& piece) {
        ConnectedSum3 rest = source;
        auto it = std::find(rest.summands.begin(), rest.summands.end(), piece);
        if (it == rest.summands.end())
            throw UsageError("component " + to_string(source) + " has no " + to_string(piece) + " summand");
        rest.summands.erase(it);
        return normalize(rest);
    };

    SurgeryMove move;
    move.component = component;
    move.p = p;
    move.q = q;
    if (case_name == "dividing") {
        if (disk_side == "S3")
            move.split = DividingSplit{source, ConnectedSum3{Prime3::three_sphere()}};
        else if (disk_side == "E")
            move.split = DividingSplit{without(Prime3::sphere_circle()), ConnectedSum3{Prime3::sphere_circle()}};
        else
            throw UsageError("--disk-side must be S3 or E");
    } else if (case_name == "nondividing") {
        move.split = NonDividingSplit{without(Prime3::sphere_circle())};
    } else {
        throw UsageError("--case must be dividing or nondividing");
    }
    MoveResult r = surger_backward(expr, move);
    out << "move: " << describe(move) << "\n";
    out << "result: " << to_string(r.result) << "\n";
    out << "note: " << r.solid_torus_note << "\n";
    return 0;
}

int compr(int k0, int k1, int bound, const std::string& trace_path, std::ostream& out)
{
    if (k0 < 1 || k1 < k0 - 1)
        throw UsageError("compr requires k1 >= k0 - 1 >= 0");
    ComprResult r = verify_compr(k0, k1, bound);
    out << "k0=" << k0 << " k1=" << k1 << " pq_bound=" << bound << "\n";
    out << "candidates " << r.candidates << ", eliminated " << r.eliminated << ", pruned " << r.pruned
        << ", branch splits " << r.branch_splits << " (closed " << r.branch_splits_closed << ")\n";
    for (auto it = r.survivors.rbegin(); it != r.survivors.rend(); ++it) {
        out << "Q_" << it->first << ":";
        for (const auto& e : it->second)
            out << " {" << to_string(e) << "}";
        out << "\n";
    }
    for (const auto& c : r.counterexamples)
        out << "violation: counterexample " << to_string(c) << "\n";
    if (!r.certified && r.counterexamples.empty())
        out << "violation: no realizable boundary chain\n";
    out << (r.certified ? "certified" : "not certified") << "\n";
    if (!trace_path.empty())
        write_file(trace_path, render_trace(r.root));
    return r.certified ? 0 : 1;
}

int verify(const std::string& path, int bound, const std::string& trace_path, std::ostream& out)
{
    FlowSpec spec = parse_flow(read_file(path));
    TheoremReport report = verify_main_theorem(spec, bound);
    if (report.result.accepted())
        out << to_string(report.result) << "\n";
    else
        out << "violation: " << to_string(report.result) << "\n";
    for (const auto& s : report.evidence.sections)
        out << "gate " << s.gate << ": " << (s.passed ? "PASS" : "FAIL") << "\n";
    if (!trace_path.empty())
        write_file(trace_path, report.evidence.serialize());
    return report.result.accepted() ? 0 : 1;
}

int sweep(int k0_max, int k1_extra, int bound, unsigned threads, std::ostream& out)
{
    auto rows = run_sweep(k0_max, k1_extra, bound, threads);
    out << render_sweep(rows);
    std::size_t mismatches = 0;
    for (const auto& r : rows)
        if (!r.as_expected) {
            ++mismatches;
            out << "violation: k0=" << r.k0 << " k1=" << r.k1 << " unexpected " << to_string(r.result) << "\n";
        }
    out << rows.size() << " specs, " << mismatches << " mismatches\n";
    return mismatches == 0 ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Round-handle calculus for non-singular flows on 4-manifolds", "rhflow"};
    app.require_subcommand(1, 1);

    std::string betti, kcounts;
    auto* franks_cmd = app.add_subcommand("check-franks", "Evaluate Franks' round-handle inequalities");
    franks_cmd->add_option("--betti", betti, "b0,b1,b2,b3,b4")->required();
    franks_cmd->add_option("--k", kcounts, "k0,k1,k2,k3 ('*' = unspecified)")->required();

    std::string flow_path;
    auto* order_cmd = app.add_subcommand("order", "Dynamic order of a flow spec");
    order_cmd->add_option("--flow", flow_path, "flow spec file")->required();

    std::string expr_text;
    auto* h1_cmd = app.add_subcommand("h1", "First homology of each component");
    h1_cmd->add_option("--expr", expr_text, "manifold expression")->required();

    std::size_t component = 0;
    std::string case_name, disk_side = "S3";
    long p = 0, q = 1;
    auto* surger_cmd = app.add_subcommand("surger", "Apply one backward torus surgery");
    surger_cmd->add_option("--expr", expr_text, "manifold expression")->required();
    surger_cmd->add_option("--component", component, "component index after normalization");
    surger_cmd->add_option("--case", case_name, "dividing | nondividing")->required();
    surger_cmd->add_option("--disk-side", disk_side, "S3 | E, the summand holding the disk (dividing)");
    surger_cmd->add_option("--p", p)->required();
    surger_cmd->add_option("--q", q)->required();

    int k0 = 1, k1 = 0, bound = 3;
    std::string trace_path;
    auto* compr_cmd = app.add_subcommand("compr", "Backward induction on filtration boundaries");
    compr_cmd->add_option("--k0", k0)->required();
    compr_cmd->add_option("--k1", k1)->required();
    compr_cmd->add_option("--pq-bound", bound)->required();
    compr_cmd->add_option("--trace", trace_path, "write the elimination tree to a file");

    auto* verify_cmd = app.add_subcommand("verify", "Run the classification pipeline on a flow spec");
    verify_cmd->add_option("--flow", flow_path, "flow spec file")->required();
    verify_cmd->add_option("--pq-bound", bound)->required();
    verify_cmd->add_option("--trace", trace_path, "write the evidence bundle to a file");

    int k0_max = 4, k1_extra = 2;
    unsigned threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Classify a grid of generated flow specs");
    sweep_cmd->add_option("--k0-max", k0_max)->required();
    sweep_cmd->add_option("--k1-extra", k1_extra)->required();
    sweep_cmd->add_option("--pq-bound", bound)->required();
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*franks_cmd)
            return check_franks(betti, kcounts, out);
        if (*order_cmd)
            return order(flow_path, out);
        if (*h1_cmd)
            return h1_command(expr_text, out);
        if (*surger_cmd)
            return surger(expr_text, component, case_name, disk_side, p, q, out);
        if (*compr_cmd)
            return compr(k0, k1, bound, trace_path, out);
        if (*verify_cmd) {
            if (bound < 1)
                throw UsageError("--pq-bound must be at least 1");
            return verify(flow_path, bound, trace_path, out);
        }
        if (*sweep_cmd) {
            if (bound < 1 || k0_max < 1 || k1_extra < 0)
                throw UsageError("sweep needs k0-max >= 1, k1-extra >= 0, pq-bound >= 1");
            return sweep(k0_max, k1_extra, bound, threads, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace rh::cli
