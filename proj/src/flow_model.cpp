#include "rh/flow_model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace rh {

const OrbitDatum* FlowSpec::find(std::string_view id) const
{
    for (const auto& o : orbits)
        if (o.id == id)
            return &o;
    return nullptr;
}

PartialHandleCounts::PartialHandleCounts(const HandleCounts& full)
{
    for (int i = 0; i < 4; ++i)
        k[i] = full.k[i];
}

std::vector<std::string> validate_flow(const FlowSpec& spec)
{
    std::vector<std::string> report;
    if (spec.dimension != kFlowDimension)
        report.push_back("dimension " + std::to_string(spec.dimension) + " unsupported (must be 4)");

    std::set<std::string> seen;
    for (const auto& o : spec.orbits) {
        const std::string where = "orbit '" + o.id + "': ";
        if (o.id.empty())
            report.push_back("orbit with empty id");
        if (!seen.insert(o.id).second)
            report.push_back(where + "duplicate id");
        if (o.morse_index < 0 || o.morse_index > kFlowDimension - 1)
            report.push_back(where + "index out of range (i=" + std::to_string(o.morse_index) + ")");
        if (o.rho != 1 && o.rho != -1)
            report.push_back(where + "rho must be +1 or -1");
        if (o.nu != 1 && o.nu != -1)
            report.push_back(where + "nu must be +1 or -1");
        if (spec.orientable && (o.rho == -1 || o.nu == -1)) {
            if (o.morse_index == 0)
                report.push_back(where + "attracting orbit twisted");
            else if (o.morse_index == kFlowDimension - 1)
                report.push_back(where + "repelling orbit twisted");
        }
    }
    for (const auto& e : spec.smale_edges) {
        for (const std::string* end : {&e.lower, &e.upper})
            if (!seen.contains(*end))
                report.push_back("edge " + e.lower + " < " + e.upper + ": unknown orbit '" + *end + "'");
    }
    return report;
}

namespace {

// Adjacency lower -> uppers, restricted to known ids, without self-loops.
std::map<std::string, std::vector<std::string>> smale_successors(const FlowSpec& spec)
{
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& o : spec.orbits)
        succ[o.id];
    for (const auto& e : spec.smale_edges) {
        if (e.lower == e.upper || !succ.contains(e.lower) || !succ.contains(e.upper))
            continue;
        auto& out = succ[e.lower];
        if (std::find(out.begin(), out.end(), e.upper) == out.end())
            out.push_back(e.upper);
    }
    for (auto& [id, out] : succ)
        std::sort(out.begin(), out.end());
    return succ;
}

std::optional<std::vector<std::string>> find_cycle(const std::map<std::string, std::vector<std::string>>& succ)
{
    enum class Color { White, Grey, Black };
    std::map<std::string, Color> color;
    for (const auto& [id, out] : succ)
        color[id] = Color::White;
    std::vector<std::string> stack;
    std::optional<std::vector<std::string>> found;

    std::function<bool(const std::string&)> visit = [&](const std::string& v) {
        color[v] = Color::Grey;
        stack.push_back(v);
        for (const auto& w : succ.at(v)) {
            if (color[w] == Color::Grey) {
                auto start = std::find(stack.begin(), stack.end(), w);
                found = std::vector<std::string>(start, stack.end());
                return true;
            }
            if (color[w] == Color::White && visit(w))
                return true;
        }
        stack.pop_back();
        color[v] = Color::Black;
        return false;
    };
    for (const auto& [id, out] : succ)
        if (color[id] == Color::White && visit(id))
            return found;
    return std::nullopt;
}

}  // namespace

OrderResult dynamic_order(const FlowSpec& spec)
{
    const auto succ = smale_successors(spec);
    if (auto cycle = find_cycle(succ))
        return CycleError{std::move(*cycle), false};

    std::map<std::string, int> index;
    for (const auto& o : spec.orbits)
        index[o.id] = o.morse_index;
    for (const auto& [lower, uppers] : succ)
        for (const auto& upper : uppers)
            if (index[lower] > index[upper])
                return CycleError{{lower, upper}, true};

    std::map<std::string, int> indegree;
    for (const auto& [id, out] : succ)
        indegree[id];
    for (const auto& [id, out] : succ)
        for (const auto& w : out)
            ++indegree[w];

    using Key = std::pair<int, std::string>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (const auto& [id, deg] : indegree)
        if (deg == 0)
            ready.emplace(index[id], id);

    std::vector<std::string> order;
    while (!ready.empty()) {
        auto [i, id] = ready.top();
        ready.pop();
        order.push_back(id);
        for (const auto& w : succ.at(id))
            if (--indegree[w] == 0)
                ready.emplace(index[w], w);
    }
    return order;
}

bool is_valid_cycle_witness(const FlowSpec& spec, const CycleError& error)
{
    const auto& c = error.cycle;
    if (c.size() < 2)
        return false;
    if (std::set<std::string>(c.begin(), c.end()).size() != c.size())
        return false;
    auto has_edge = [&](const std::string& a, const std::string& b) {
        return std::any_of(spec.smale_edges.begin(), spec.smale_edges.end(),
                           [&](const SmaleEdge& e) { return e.lower == a && e.upper == b; });
    };
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        if (!has_edge(c[i], c[i + 1]))
            return false;
    if (!error.through_index_order)
        return has_edge(c.back(), c.front());
    const OrbitDatum* last = spec.find(c.back());
    const OrbitDatum* first = spec.find(c.front());
    return last && first && last->morse_index < first->morse_index;
}

namespace {

std::string sub(int i)
{
    static const char* digits[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
    return digits[i];
}

std::string alternating_sum_text(int i)
{
    std::string out;
    for (int j = i; j >= 0; --j) {
        if (j != i)
            out += ((i - j) % 2 == 0) ? "+" : "−";
        out += "β" + sub(j);
    }
    return out;
}

}  // namespace

int alternating_betti_sum(const BettiVector& b, int i)
{
    int sum = 0;
    for (int j = i; j >= 0; --j)
        sum += ((i - j) % 2 == 0 ? 1 : -1) * b.b[j];
    return sum;
}

FranksReport franks_check(const PartialHandleCounts& counts, const BettiVector& b)
{
    FranksReport report;
    const auto& k = counts.k;
    auto require = [&](std::string clause, std::initializer_list<int> uses, bool holds, std::string summary,
                       std::string detail) {
        for (int u : uses)
            if (!k[u]) {
                report.not_evaluated.push_back("(" + clause + ") " + detail);
                return;
            }
        if (holds)
            report.satisfied.push_back("(" + clause + ") " + detail);
        else
            report.violations.push_back({std::move(clause), std::move(summary), std::move(detail)});
    };
    auto val = [&](int i) { return k[i].value_or(0); };

    // (a)
    for (int i = 0; i < 4; ++i) {
        const int bound = alternating_betti_sum(b, i);
        std::string summary = "k" + sub(i) + " ≥ " + std::to_string(bound);
        std::string detail = "k" + sub(i) + " ≥ " + alternating_sum_text(i) + " = " + std::to_string(bound) +
                             " (k" + sub(i) + " = " + (k[i] ? std::to_string(*k[i]) : "*") + ")";
        require("a", {i}, val(i) >= bound, summary, detail);
    }
    // (b), for n = 4: k₁ ≥ k₀−1 and k₂ ≥ k₃−1
    for (auto [lhs, rhs] : {std::pair{1, 0}, std::pair{2, 3}}) {
        const int bound = val(rhs) - 1;
        std::string summary = "k" + sub(lhs) + " ≥ " + std::to_string(bound);
        std::string detail = "k" + sub(lhs) + " ≥ k" + sub(rhs) + "−1";
        if (k[lhs] && k[rhs])
            detail += " = " + std::to_string(bound) + " (k" + sub(lhs) + " = " + std::to_string(*k[lhs]) + ")";
        require("b", {lhs, rhs}, val(lhs) >= bound, summary, detail);
    }
    // (c), for the indices whose two neighbours exist
    for (int i = 1; i <= 2; ++i) {
        const int bound = alternating_betti_sum(b, i);
        std::string detail = "k" + sub(i - 1) + " = k" + sub(i + 1) + " = 0 and " + alternating_sum_text(i) +
                             " = " + std::to_string(bound) + " ≤ 0 ⇒ k" + sub(i) + " = 0";
        if (!k[i - 1] || !k[i + 1]) {
            report.not_evaluated.push_back("(c) " + detail);
            continue;
        }
        const bool applies = *k[i - 1] == 0 && *k[i + 1] == 0 && bound <= 0;
        if (!applies) {
            report.satisfied.push_back("(c) " + detail + " [premise false]");
            continue;
        }
        require("c", {i}, val(i) == 0, "k" + sub(i) + " = 0",
                detail + " (k" + sub(i) + " = " + (k[i] ? std::to_string(*k[i]) : "*") + ")");
    }
    return report;
}

bool poincare_hopf_check(int euler_characteristic)
{
    return euler_characteristic == 0;
}

HandleCounts count_handles(const FlowSpec& spec)
{
    HandleCounts counts;
    for (const auto& o : spec.orbits)
        if (o.morse_index >= 0 && o.morse_index < 4)
            ++counts.k[o.morse_index];
    return counts;
}

StructureResult saddle_structure(const HandleCounts& c)
{
    const auto& k = c.k;
    auto state = " (k₀ = " + std::to_string(k[0]) + ", k₁ = " + std::to_string(k[1]) +
                 ", k₂ = " + std::to_string(k[2]) + ", k₃ = " + std::to_string(k[3]) + ")";
    if (k[0] < 1)
        return StructureViolation{"N0", "N0: k₀ ≥ 1" + state};
    if (k[1] < k[0] - 1)
        return StructureViolation{"N1", "N1: k₁ ≥ k₀−1" + state};
    if (k[2] != 0)
        return StructureViolation{"N2", "N2: k₂ = 0" + state};
    if (k[3] != 1)
        return StructureViolation{"N3", "N3: k₃ = 1" + state};
    return c;
}

StructureResult saddle_structure(const FlowSpec& spec)
{
    return saddle_structure(count_handles(spec));
}

FlowSpec period_double(const FlowSpec& spec)
{
    FlowSpec out = spec;
    for (auto& o : out.orbits) {
        const bool extreme = o.morse_index == 0 || o.morse_index == kFlowDimension - 1;
        if (extreme && o.rho == -1)
            throw TwistedExtreme("orbit '" + o.id + "' is an attracting or repelling orbit with rho = -1");
        if (!extreme && o.rho == -1)
            o.rho = +1;
    }
    return out;
}

std::string ManifoldTypeTag::to_string() const
{
    return "R^" + std::to_string(euclidean_dim) + (twisted ? "~xS^1" : "xS^1");
}

InvariantManifoldTypes invariant_manifold_types(const OrbitDatum& orbit)
{
    return {{orbit.morse_index, orbit.rho == -1},
            {kFlowDimension - orbit.morse_index - 1, orbit.nu == -1}};
}

std::string to_string(Manifold4 m)
{
    switch (m) {
    case Manifold4::S3xS1:
        return "S3xS1";
    case Manifold4::S3twistS1:
        return "S3twistS1";
    case Manifold4::RP3xS1:
        return "RP3xS1";
    case Manifold4::RP4sharpRP4:
        return "RP4#RP4";
    }
    return "?";
}

std::vector<QuotientCandidate> kwasik_quotients()
{
    return {
        {Manifold4::S3xS1, true, {{1, 1, 0, 1, 1}, "integer coefficients"}},
        {Manifold4::S3twistS1, false, {{1, 1, 0, 1, 1}, "Z/2 coefficients"}},
        {Manifold4::RP3xS1, true, {{1, 1, 0, 1, 1}, "rational coefficients"}},
        {Manifold4::RP4sharpRP4, false, {{1, 0, 1, 0, 1}, "values as quoted for RP4#RP4"}},
    };
}

QuotientVerdict kwasik_exclusion(Manifold4 cover, bool quotient_orientable,
                                 const std::vector<QuotientCandidate>& candidates)
{
    QuotientVerdict verdict;
    if (cover != Manifold4::S3xS1) {
        verdict.precondition_ok = false;
        verdict.trace.push_back("rejected: cover must be S3xS1, got " + to_string(cover));
        return verdict;
    }
    if (quotient_orientable) {
        verdict.precondition_ok = false;
        verdict.trace.push_back("rejected: quotient must be non-orientable");
        return verdict;
    }

    std::string listed;
    for (const auto& c : candidates)
        listed += (listed.empty() ? "" : ", ") + to_string(c.manifold);
    verdict.trace.push_back("free involution quotients of S3xS1: {" + listed + "}");

    std::vector<const QuotientCandidate*> remaining;
    for (const auto& c : candidates)
        if (!c.orientable)
            remaining.push_back(&c);
    listed.clear();
    for (const auto* c : remaining)
        listed += (listed.empty() ? "" : ", ") + to_string(c->manifold);
    verdict.trace.push_back("non-orientable: {" + listed + "}");

    // all saddles have index 1, so no round 2-handles
    PartialHandleCounts k;
    k.k[2] = 0;
    std::vector<Manifold4> survivors;
    for (const auto* c : remaining) {
        FranksReport report = franks_check(k, c->betti);
        if (report.pass()) {
            verdict.trace.push_back(to_string(c->manifold) + ": consistent with k₂ = 0");
            survivors.push_back(c->manifold);
        } else {
            verdict.trace.push_back(to_string(c->manifold) + ": eliminated by (" + report.violations[0].clause +
                                    ") " + report.violations[0].detail);
        }
    }
    if (survivors.size() == 1) {
        verdict.manifold = survivors[0];
        verdict.trace.push_back("quotient ≅ " + to_string(survivors[0]));
    } else if (survivors.empty()) {
        verdict.trace.push_back("no candidate remains");
    } else {
        verdict.trace.push_back("ambiguous: " + std::to_string(survivors.size()) + " candidates remain");
    }
    return verdict;
}

// --- text format -------------------------------------------------------------

FlowParseError::FlowParseError(const std::string& what, int line, int column)
    : FlowError(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column)
{
}

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ';')
            break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ';' && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        tokens.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return tokens;
}

bool valid_id(const std::string& id)
{
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

int parse_sign(const Token& t, const std::string& value, int line)
{
    if (value == "+1" || value == "1")
        return 1;
    if (value == "-1")
        return -1;
    throw FlowParseError("expected +1 or -1, got '" + value + "'", line, t.column);
}

int parse_integer(const Token& t, const std::string& value, int line)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size())
        throw FlowParseError("expected an integer, got '" + value + "'", line, t.column);
    return v;
}

// key=value pairs; every key must appear exactly once
std::map<std::string, std::pair<std::string, Token>> parse_keys(const std::vector<Token>& tokens, std::size_t from,
                                                                const std::set<std::string>& allowed, int line)
{
    std::map<std::string, std::pair<std::string, Token>> out;
    for (std::size_t i = from; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        auto eq = t.text.find('=');
        if (eq == std::string::npos)
            throw FlowParseError("expected key=value, got '" + t.text + "'", line, t.column);
        std::string key = t.text.substr(0, eq);
        if (!allowed.contains(key))
            throw FlowParseError("unknown key '" + key + "'", line, t.column);
        if (out.contains(key))
            throw FlowParseError("duplicate key '" + key + "'", line, t.column);
        out.emplace(key, std::pair{t.text.substr(eq + 1), t});
    }
    for (const auto& key : allowed)
        if (!out.contains(key))
            throw FlowParseError("missing key '" + key + "'", line, tokens[0].column);
    return out;
}

}  // namespace

FlowSpec parse_flow(std::string_view text)
{
    FlowSpec spec;
    bool header = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        auto tokens = tokenize(line);
        if (tokens.empty())
            continue;
        const std::string& word = tokens[0].text;
        if (!header) {
            if (word != "flow")
                throw FlowParseError("expected 'flow' header", line_no, tokens[0].column);
            auto keys = parse_keys(tokens, 1, {"dim", "orientable"}, line_no);
            auto& [dim, dim_tok] = keys.at("dim");
            spec.dimension = parse_integer(dim_tok, dim, line_no);
            if (spec.dimension != kFlowDimension)
                throw FlowParseError("only dim=4 is supported", line_no, dim_tok.column);
            auto& [ori, ori_tok] = keys.at("orientable");
            if (ori != "true" && ori != "false")
                throw FlowParseError("orientable must be true or false", line_no, ori_tok.column);
            spec.orientable = ori == "true";
            header = true;
        } else if (word == "orbit") {
            if (tokens.size() < 2 || !valid_id(tokens[1].text))
                throw FlowParseError("expected orbit id", line_no, tokens.size() < 2 ? tokens[0].column : tokens[1].column);
            auto keys = parse_keys(tokens, 2, {"index", "rho", "nu"}, line_no);
            OrbitDatum o;
            o.id = tokens[1].text;
            o.morse_index = parse_integer(keys.at("index").second, keys.at("index").first, line_no);
            o.rho = parse_sign(keys.at("rho").second, keys.at("rho").first, line_no);
            o.nu = parse_sign(keys.at("nu").second, keys.at("nu").first, line_no);
            spec.orbits.push_back(std::move(o));
        } else if (word == "edge") {
            if (tokens.size() != 4 || tokens[2].text != "<")
                throw FlowParseError("expected 'edge <id> < <id>'", line_no, tokens[0].column);
            for (int i : {1, 3})
                if (!valid_id(tokens[i].text))
                    throw FlowParseError("invalid orbit id '" + tokens[i].text + "'", line_no, tokens[i].column);
            spec.smale_edges.push_back({tokens[1].text, tokens[3].text});
        } else if (word == "flow") {
            throw FlowParseError("duplicate 'flow' header", line_no, tokens[0].column);
        } else {
            throw FlowParseError("unknown directive '" + word + "'", line_no, tokens[0].column);
        }
    }
    if (!header)
        throw FlowParseError("missing 'flow' header", line_no, 1);
    return spec;
}

std::string serialize_flow(const FlowSpec& spec)
{
    std::ostringstream os;
    os << "flow dim=" << spec.dimension << " orientable=" << (spec.orientable ? "true" : "false") << "\n";
    for (const auto& o : spec.orbits)
        os << "orbit " << o.id << " index=" << o.morse_index << " rho=" << (o.rho < 0 ? "-1" : "+1")
           << " nu=" << (o.nu < 0 ? "-1" : "+1") << "\n";
    for (const auto& e : spec.smale_edges)
        os << "edge " << e.lower << " < " << e.upper << "\n";
    return os.str();
}

}  // namespace rh
