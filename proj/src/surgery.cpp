#include "rh/surgery.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace rh {

std::string to_string(CaseTag tag)
{
    return tag == CaseTag::Dividing ? "Dividing" : "NonDividing";
}

std::string to_string(NodeStatus status)
{
    switch (status) {
    case NodeStatus::Survives:
        return "SURVIVES";
    case NodeStatus::Pruned:
        return "SURVIVES";
    case NodeStatus::Eliminated:
        return "ELIMINATED";
    case NodeStatus::Split:
        return "SPLIT";
    case NodeStatus::Counterexample:
        return "COUNTEREXAMPLE";
    }
    return "?";
}

std::string describe(const SurgeryMove& move)
{
    std::ostringstream os;
    os << "component " << move.component << " " << to_string(move.case_tag()) << " ";
    if (const auto* d = std::get_if<DividingSplit>(&move.split))
        os << "(" << to_string(d->first) << ", " << to_string(d->second) << ")";
    else
        os << "(E # " << to_string(std::get<NonDividingSplit>(move.split).rest) << ")";
    os << " p=" << move.p << " q=" << move.q;
    return os.str();
}

namespace {

ConnectedSum3 join(const ConnectedSum3& a, const ConnectedSum3& b)
{
    ConnectedSum3 out = a;
    out.summands.insert(out.summands.end(), b.summands.begin(), b.summands.end());
    return out;
}

// (X)_{p,q} for X in {S3, E}; anything else is outside the modeled calculus.
Prime3 surgered_over(const ConnectedSum3& base, long p, long q)
{
    ConnectedSum3 n = normalize(base);
    SurgeryBase tag;
    if (n.summands.size() == 1 && n.summands[0].is_three_sphere())
        tag = SurgeryBase::ThreeSphere;
    else if (n.summands.size() == 1 && n.summands[0].is_sphere_circle())
        tag = SurgeryBase::SphereCircle;
    else
        throw OpaqueBase("surgery wrapper over " + to_string(n) + " is not modeled (only S3 and E)");
    return Prime3::surgered(tag, p, q);
}

}  // namespace

MoveResult surger_backward(const Manifold3Expression& expr, const SurgeryMove& move)
{
    if (move.component >= expr.components.size())
        throw IllFormedMove("component index " + std::to_string(move.component) + " out of range");
    if (std::gcd(move.p, move.q) != 1)
        throw NonCoprimeParameters("surgery slope (" + std::to_string(move.p) + "," + std::to_string(move.q) +
                                   ") is not primitive");

    const ConnectedSum3 source = normalize(expr.components[move.component]);
    const Prime3 lens = Prime3::lens(move.p, move.q);

    std::vector<ConnectedSum3> replacement;
    if (const auto* d = std::get_if<DividingSplit>(&move.split)) {
        if (normalize(join(d->first, d->second)) != source)
            throw IllFormedMove("split " + to_string(d->first) + " # " + to_string(d->second) +
                                " does not recombine to " + to_string(source));
        ConnectedSum3 with_lens = d->first;
        with_lens.summands.push_back(lens);
        replacement.push_back(with_lens);
        replacement.push_back(ConnectedSum3{surgered_over(d->second, move.p, move.q)});
    } else {
        const auto& rest = std::get<NonDividingSplit>(move.split).rest;
        if (normalize(join(ConnectedSum3{Prime3::sphere_circle()}, rest)) != source)
            throw IllFormedMove("E # " + to_string(rest) + " does not recombine to " + to_string(source));
        replacement.push_back(ConnectedSum3{lens, surgered_over(rest, move.p, move.q)});
    }

    Manifold3Expression out;
    for (std::size_t i = 0; i < expr.components.size(); ++i) {
        if (i == move.component)
            out.components.insert(out.components.end(), replacement.begin(), replacement.end());
        else
            out.components.push_back(expr.components[i]);
    }

    MoveResult result;
    result.result = normalize(out);
    result.solid_torus_note = "associated solid torus P²_T ⊂ " + to_string(normalize(lens)) +
                              " with complement P³ (labelling convention)";
    return result;
}

std::vector<std::pair<long, long>> enumerate_slopes(int bound)
{
    std::vector<std::pair<long, long>> slopes;
    for (long p = -bound; p <= bound; ++p)
        for (long q = 0; q <= bound; ++q) {
            if (q == 0 && p <= 0)
                continue;
            if (std::gcd(p, q) == 1)
                slopes.emplace_back(p, q);
        }
    return slopes;
}

std::vector<EnumeratedMove> enumerate_moves(const Manifold3Expression& expr, int pq_bound)
{
    const Manifold3Expression base = normalize(expr);
    const auto slopes = enumerate_slopes(pq_bound);
    const ConnectedSum3 sphere{Prime3::three_sphere()};
    const ConnectedSum3 e{Prime3::sphere_circle()};

    std::vector<EnumeratedMove> moves;
    std::set<std::tuple<std::size_t, CaseTag, Manifold3Expression>> seen;
    auto emit = [&](SurgeryMove move) {
        MoveResult r;
        try {
            r = surger_backward(base, move);
        } catch (const OpaqueBase&) {
            return;
        }
        if (seen.emplace(move.component, move.case_tag(), r.result).second)
            moves.push_back({std::move(move), std::move(r)});
    };

    for (std::size_t c = 0; c < base.components.size(); ++c) {
        const ConnectedSum3& component = base.components[c];
        auto e_at = std::find(component.summands.begin(), component.summands.end(), Prime3::sphere_circle());
        std::optional<ConnectedSum3> without_e;
        if (e_at != component.summands.end()) {
            ConnectedSum3 rest = component;
            rest.summands.erase(rest.summands.begin() + (e_at - component.summands.begin()));
            without_e = normalize(rest);
        }

        // the disk side must be S3 or E for the wrapper to be modeled
        std::vector<DividingSplit> splits{{component, sphere}};
        if (without_e)
            splits.push_back({*without_e, e});

        for (auto [p, q] : slopes)
            for (const auto& split : splits)
                emit(SurgeryMove{c, split, p, q});
        if (without_e)
            for (auto [p, q] : slopes)
                emit(SurgeryMove{c, NonDividingSplit{*without_e}, p, q});
    }
    return moves;
}

namespace {

bool all_components_e(const Manifold3Expression& expr)
{
    return !expr.components.empty() &&
           std::all_of(expr.components.begin(), expr.components.end(), [](const auto& c) { return is_E(c); });
}

Manifold3Expression copies_of_e(int n)
{
    Manifold3Expression out;
    for (int i = 0; i < n; ++i)
        out.components.push_back(ConnectedSum3{Prime3::sphere_circle()});
    return out;
}

class BackwardInduction {
public:
    BackwardInduction(int k0, int k1, int bound) : k0_(k0), k1_(k1), bound_(bound) {}

    ComprResult run()
    {
        ComprResult result;
        result.k0 = k0_;
        result.k1 = k1_;
        result.pq_bound = bound_;
        result_ = &result;

        const int top = k0_ + k1_;  // Q_{k-1} with k = k0 + k1 + 1
        result.root.stage = top;
        result.root.expr = copies_of_e(1);
        result.root.via = "Q_{k-1} ≅ E";
        result.root.status = NodeStatus::Survives;
        result.survivors[top].push_back(result.root.expr);

        std::vector<TraceNode*> frontier{&result.root};
        for (int stage = top; stage > k0_; --stage) {
            std::vector<TraceNode*> next;
            seen_.clear();
            for (TraceNode* node : frontier) {
                node->expanded = true;
                const auto moves = enumerate_moves(node->expr, bound_);
                node->children.reserve(moves.size());
                for (const auto& m : moves) {
                    ++result.candidates;
                    TraceNode child = classify(m.result.result, stage - 1, describe(m.move));
                    node->children.push_back(std::move(child));
                }
                for (auto& child : node->children)
                    collect_new_survivors(child, next);
            }
            frontier = std::move(next);
        }

        const Manifold3Expression expected = copies_of_e(k0_);
        const auto& bottom = result.survivors[k0_];
        const bool chain_closes = std::find(bottom.begin(), bottom.end(), expected) != bottom.end();
        result.certified = result.counterexamples.empty() && chain_closes;
        return result;
    }

private:
    bool feasible(std::size_t components, int stage) const
    {
        // going backward the count grows by at most one per surgery
        const int m = static_cast<int>(components);
        return m <= k0_ && k0_ - m <= stage - k0_;
    }

    TraceNode classify(const Manifold3Expression& expr, int stage, std::string via)
    {
        TraceNode node;
        node.stage = stage;
        node.expr = expr;
        node.via = std::move(via);

        if (all_components_e(expr)) {
            if (feasible(expr.components.size(), stage)) {
                node.status = NodeStatus::Survives;
            } else {
                node.status = NodeStatus::Pruned;
                node.reason = "pruned: " + std::to_string(expr.components.size()) + " component(s) cannot become " +
                              std::to_string(k0_) + " copies of E by Q_" + std::to_string(k0_);
                ++result_->pruned;
            }
            return node;
        }
        for (const auto& c : expr.components)
            if (is_E_irreducible(c) == Irreducibility::True) {
                eliminate(node, "is_E_irreducible(" + to_string(c) + ") = true");
                return node;
            }

        const bool has_branch = std::any_of(expr.components.begin(), expr.components.end(), [](const auto& c) {
            return is_E_irreducible(c) == Irreducibility::BranchEOrIrreducible;
        });
        if (has_branch) {
            split(node);
            return node;
        }
        counterexample(node, "no E-irreducible component and not all components ≅ E");
        return node;
    }

    void eliminate(TraceNode& node, std::string reason)
    {
        node.status = NodeStatus::Eliminated;
        node.reason = std::move(reason);
        ++result_->eliminated;
        if (node.reason.starts_with("is_E_irreducible"))
            ++result_->eliminated_by_irreducibility;
    }

    void counterexample(TraceNode& node, std::string reason)
    {
        node.status = NodeStatus::Counterexample;
        node.reason = std::move(reason);
        result_->counterexamples.push_back(node.expr);
    }

    // Both readings of Surg(S3,±1,0): first ≅ E, then E-irreducible.
    void split(TraceNode& node)
    {
        ++result_->branch_splits;
        node.status = NodeStatus::Split;
        node.reason = "Surg(S3,±1,0) is E or E-irreducible";

        Manifold3Expression as_e = node.expr;
        for (auto& c : as_e.components)
            for (auto& s : c.summands)
                if (s.is_branch_piece())
                    s = Prime3::sphere_circle();
        TraceNode e_child = classify(normalize(as_e), node.stage, "resolution: Surg(S3,±1,0) ≅ E");

        TraceNode irr_child;
        irr_child.stage = node.stage;
        irr_child.expr = node.expr;
        irr_child.via = "resolution: Surg(S3,±1,0) E-irreducible";
        bool closed = false;
        for (const auto& c : node.expr.components)
            if (is_E_irreducible_resolved(c, false) == Irreducibility::True) {
                eliminate(irr_child, "is_E_irreducible(" + to_string(c) + ") = true under this resolution");
                closed = true;
                break;
            }
        if (!closed)
            counterexample(irr_child, "no E-irreducible component under the irreducible resolution");

        const bool e_closed = e_child.status == NodeStatus::Survives || e_child.status == NodeStatus::Pruned ||
                              e_child.status == NodeStatus::Eliminated;
        if (closed && e_closed)
            ++result_->branch_splits_closed;
        node.children.push_back(std::move(e_child));
        node.children.push_back(std::move(irr_child));
    }

    void collect_new_survivors(TraceNode& node, std::vector<TraceNode*>& next)
    {
        if (node.status == NodeStatus::Split) {
            for (auto& c : node.children)
                collect_new_survivors(c, next);
            return;
        }
        if (node.status != NodeStatus::Survives)
            return;
        if (!seen_.insert(node.expr).second) {
            node.reason = "already expanded at this stage";
            return;
        }
        result_->survivors[node.stage].push_back(node.expr);
        if (node.stage > k0_)
            next.push_back(&node);
    }

    int k0_;
    int k1_;
    int bound_;
    ComprResult* result_ = nullptr;
    std::set<Manifold3Expression> seen_;
};

void render(const TraceNode& node, int depth, std::ostringstream& os)
{
    os << std::string(2 * static_cast<std::size_t>(depth), ' ') << "Q_" << node.stage << " = "
       << to_string(node.expr) << "  " << to_string(node.status);
    if (node.status == NodeStatus::Eliminated)
        os << "(" << node.reason << ")";
    else if (!node.reason.empty())
        os << " [" << node.reason << "]";
    if (!node.via.empty())
        os << "  <- " << node.via;
    os << "\n";
    for (const auto& child : node.children)
        render(child, depth + 1, os);
}

}  // namespace

ComprResult verify_compr(int k0, int k1, int pq_bound)
{
    if (k0 < 1 || k1 < k0 - 1)
        throw std::invalid_argument("backward induction requires k₁ ≥ k₀−1 ≥ 0");
    if (pq_bound < 1)
        throw std::invalid_argument("pq_bound must be at least 1");
    return BackwardInduction(k0, k1, pq_bound).run();
}

std::string render_trace(const TraceNode& root)
{
    std::ostringstream os;
    render(root, 0, os);
    return os.str();
}

}  // namespace rh
