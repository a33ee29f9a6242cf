#pragma once

// Torus surgery on boundary 3-manifolds and the backward induction that
// certifies every boundary component of a dynamically ordered filtration
// is S2xS1.

#include "rh/presentation3.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rh {

class IllFormedMove : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OpaqueBase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class CaseTag { Dividing, NonDividing };

std::string to_string(CaseTag tag);

// The associated sphere separates the component: A = first # second, and
// `second` is the side holding the compressing disk.
struct DividingSplit {
    ConnectedSum3 first;
    ConnectedSum3 second;
};

// The associated sphere does not separate: A = E # rest.
struct NonDividingSplit {
    ConnectedSum3 rest;
};

struct SurgeryMove {
    std::size_t component = 0;
    std::variant<DividingSplit, NonDividingSplit> split;
    long p = 0;
    long q = 1;

    CaseTag case_tag() const
    {
        return std::holds_alternative<DividingSplit>(split) ? CaseTag::Dividing : CaseTag::NonDividing;
    }
};

std::string describe(const SurgeryMove& move);

struct MoveResult {
    Manifold3Expression result;
    std::string solid_torus_note;
};

// Replaces the moved component by L(p,q)#Ã₁ ⊔ (Ã₂)_{p,q} (dividing) or by
// L(p,q)#(Ã)_{p,q} (non-dividing). Surgered wrappers exist over S3 and E only.
MoveResult surger_backward(const Manifold3Expression& expr, const SurgeryMove& move);

// Slopes (p,q) with |p|,|q| <= bound, gcd 1, one sign representative each
// (q > 0, or q = 0 and p > 0), sorted by (p, q).
std::vector<std::pair<long, long>> enumerate_slopes(int bound);

struct EnumeratedMove {
    SurgeryMove move;
    MoveResult result;
};

// Every well-formed move on every component of normalize(expr), one per
// (component, case, normalized result), ordered by (component, case, p, q).
std::vector<EnumeratedMove> enumerate_moves(const Manifold3Expression& expr, int pq_bound);

// --- backward induction ------------------------------------------------------

enum class NodeStatus { Survives, Pruned, Eliminated, Split, Counterexample };

std::string to_string(NodeStatus status);

struct TraceNode {
    int stage = 0;  // j in Q_j
    Manifold3Expression expr;
    std::string via;  // move or resolution that produced this node
    NodeStatus status = NodeStatus::Survives;
    std::string reason;
    bool expanded = false;
    std::vector<TraceNode> children;
};

struct ComprResult {
    int k0 = 0;
    int k1 = 0;
    int pq_bound = 0;
    bool certified = false;
    TraceNode root;
    // realizable all-E boundaries per stage j
    std::map<int, std::vector<Manifold3Expression>> survivors;
    std::vector<Manifold3Expression> counterexamples;
    std::size_t candidates = 0;
    std::size_t eliminated = 0;
    std::size_t eliminated_by_irreducibility = 0;
    std::size_t pruned = 0;
    std::size_t branch_splits = 0;
    std::size_t branch_splits_closed = 0;
};

// Walks backward from Q_{k-1} = E through k1 surgeries down to Q_{k0}.
// Requires k1 >= k0 - 1 >= 0.
ComprResult verify_compr(int k0, int k1, int pq_bound);

std::string render_trace(const TraceNode& root);

}  // namespace rh
