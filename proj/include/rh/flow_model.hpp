#pragma once

// Combinatorial model of a non-singular flow on a closed 4-manifold: periodic
// orbits with Morse index and twist flags, the Smale relation between them,
// and the counting constraints that round-handle decompositions must obey.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rh {

inline constexpr int kFlowDimension = 4;

struct OrbitDatum {
    std::string id;
    int morse_index = 0;
    int rho = +1;  // +1 untwisted unstable manifold, -1 twisted
    int nu = +1;   // same for the stable manifold

    bool operator==(const OrbitDatum&) const = default;
};

// Ordered pair (lower, upper) meaning lower ≺ upper: the stable manifold of
// `lower` meets the unstable manifold of `upper`.
struct SmaleEdge {
    std::string lower;
    std::string upper;

    bool operator==(const SmaleEdge&) const = default;
};

struct FlowSpec {
    int dimension = kFlowDimension;
    bool orientable = true;
    std::vector<OrbitDatum> orbits;
    std::vector<SmaleEdge> smale_edges;

    const OrbitDatum* find(std::string_view id) const;
    bool operator==(const FlowSpec&) const = default;
};

struct HandleCounts {
    std::array<int, 4> k{};

    int total() const { return k[0] + k[1] + k[2] + k[3]; }
    bool operator==(const HandleCounts&) const = default;
};

// Handle counts where some entries may be left unspecified.
struct PartialHandleCounts {
    std::array<std::optional<int>, 4> k{};

    PartialHandleCounts() = default;
    PartialHandleCounts(const HandleCounts& full);
};

struct BettiVector {
    std::array<int, 5> b{};
    std::string source_note;
};

class FlowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TwistedExtreme : public FlowError {
public:
    using FlowError::FlowError;
};

class FlowParseError : public FlowError {
public:
    FlowParseError(const std::string& what, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// --- validation --------------------------------------------------------------

// One human-readable line per violated invariant; empty iff well-formed.
std::vector<std::string> validate_flow(const FlowSpec& spec);

// --- dynamic order -----------------------------------------------------------

struct CycleError {
    // x1 ≺ x2 ≺ ... ≺ xm ≺ x1
    std::vector<std::string> cycle;
    // true when the closing step is the index ordering rather than a Smale edge
    bool through_index_order = false;
};

using OrderResult = std::variant<std::vector<std::string>, CycleError>;

// Linear extension of the Smale relation that is non-decreasing in Morse
// index; among those, the lexicographically least by (index, id).
OrderResult dynamic_order(const FlowSpec& spec);

// Checks that `cycle` is a genuine cycle of the relation used by dynamic_order.
bool is_valid_cycle_witness(const FlowSpec& spec, const CycleError& error);

// --- Franks inequalities ---------------------------------------------------

struct FranksViolation {
    std::string clause;   // "a", "b" or "c"
    std::string summary;  // e.g. "k₂ ≥ 2"
    std::string detail;   // instantiated inequality
};

struct FranksReport {
    std::vector<FranksViolation> violations;
    std::vector<std::string> not_evaluated;
    std::vector<std::string> satisfied;

    bool pass() const { return violations.empty(); }
};

// Alternating sum β_i − β_{i−1} + … ± β_0.
int alternating_betti_sum(const BettiVector& b, int i);

FranksReport franks_check(const PartialHandleCounts& k, const BettiVector& b);

bool poincare_hopf_check(int euler_characteristic);

// --- orbit structure -------------------------------------------------------

HandleCounts count_handles(const FlowSpec& spec);

struct StructureViolation {
    std::string equation;  // "N0".."N3"
    std::string message;
};

using StructureResult = std::variant<HandleCounts, StructureViolation>;

// Applies the orbit-count constraints N0: k₀ ≥ 1, N1: k₁ ≥ k₀−1, N2: k₂ = 0,
// N3: k₃ = 1 to a flow whose saddles all have index 1.
StructureResult saddle_structure(const FlowSpec& spec);
StructureResult saddle_structure(const HandleCounts& counts);

// Untwists every saddle with ρ = −1 (period-doubling bifurcation, kept as a
// single orbit). Throws TwistedExtreme for a twisted attractor or repeller.
FlowSpec period_double(const FlowSpec& spec);

struct ManifoldTypeTag {
    int euclidean_dim = 0;
    bool twisted = false;

    std::string to_string() const;
    bool operator==(const ManifoldTypeTag&) const = default;
};

struct InvariantManifoldTypes {
    ManifoldTypeTag unstable;
    ManifoldTypeTag stable;
};

InvariantManifoldTypes invariant_manifold_types(const OrbitDatum& orbit);

// --- non-orientable quotients ----------------------------------------------

enum class Manifold4 { S3xS1, S3twistS1, RP3xS1, RP4sharpRP4 };

std::string to_string(Manifold4 m);

struct QuotientCandidate {
    Manifold4 manifold;
    bool orientable;
    BettiVector betti;
};

// Free-involution quotients of S3×S1.
std::vector<QuotientCandidate> kwasik_quotients();

struct QuotientVerdict {
    bool precondition_ok = true;
    std::optional<Manifold4> manifold;
    std::vector<std::string> trace;
};

QuotientVerdict kwasik_exclusion(Manifold4 cover, bool quotient_orientable,
                                 const std::vector<QuotientCandidate>& candidates = kwasik_quotients());

// --- text format -------------------------------------------------------------

FlowSpec parse_flow(std::string_view text);
std::string serialize_flow(const FlowSpec& spec);

}  // namespace rh
