#pragma once

// Symbolic round-handle filtration M_0 ⊂ M_1 ⊂ ... ⊂ M_k of a flow whose
// saddles all have index 1, and the classification verdict it yields.

#include "rh/flow_model.hpp"
#include "rh/presentation3.hpp"
#include "rh/surgery.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rh {

class UnsupportedPiece : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class StructureError : public std::runtime_error {
public:
    explicit StructureError(StructureViolation v) : std::runtime_error(v.message), violation(std::move(v)) {}
    StructureViolation violation;
};

enum class PieceTag { P4, B4, Other };

struct Piece4 {
    PieceTag tag = PieceTag::P4;
    std::string description;  // for Other
    Manifold3Expression boundary;

    static Piece4 solid_torus();  // P4 = B3 x S1, boundary E
    static Piece4 ball();         // B4, boundary S3
    bool operator==(const Piece4&) const = default;
};

std::string to_string(const Piece4& piece);

// Which pieces of the current stage the two feet of a round 1-handle land in.
struct Feet {
    std::size_t first = 0;
    std::size_t second = 0;
};

struct Attachment {
    std::string orbit_id;
    int morse_index = 0;
    std::optional<Feet> feet;  // round 1-handles only
    std::string side_condition;
};

struct Stage {
    std::vector<Piece4> pieces;
    std::optional<Attachment> attachment;  // absent for stage 0
    Manifold3Expression boundary;          // Q_j
};

struct Filtration4 {
    std::vector<Stage> stages;  // stages[j] = M_j
    int k0 = 0;
    int k1 = 0;
};

// Merges the two foot pieces (distinct feet) or keeps the piece (equal feet).
std::vector<Piece4> attach_round_one_handle(const std::vector<Piece4>& stage, Feet feet);

// Explicit feet per saddle id; saddles not listed get feet from Smale edges.
using FeetPlan = std::vector<std::pair<std::string, Feet>>;

// Requires `order` to be a dynamic order of `spec` whose counts satisfy N0-N3.
Filtration4 build_filtration(const FlowSpec& spec, const std::vector<std::string>& order,
                             const FeetPlan& plan = {});

Manifold3Expression boundary_of(const std::vector<Piece4>& pieces);

enum class Verdict { S3xS1, S3twistS1, Obstructed };

struct ClassificationResult {
    Verdict verdict = Verdict::Obstructed;
    std::string reason;  // gate and instantiation when obstructed

    bool accepted() const { return verdict != Verdict::Obstructed; }
};

std::string to_string(Verdict verdict);
std::string to_string(const ClassificationResult& result);

ClassificationResult cap_with_repeller(const std::vector<Piece4>& pre_cap, bool orientable);

struct EvidenceSection {
    std::string gate;
    bool passed = true;
    std::string body;
};

struct Evidence {
    std::vector<EvidenceSection> sections;

    std::string serialize() const;
};

struct TheoremReport {
    ClassificationResult result;
    Evidence evidence;
    std::optional<Filtration4> filtration;
    std::optional<ComprResult> compr;
};

// Full pipeline: validation, period doubling, dynamic order, orbit structure,
// Franks cross-check, backward induction on boundaries, filtration, cap.
TheoremReport verify_main_theorem(const FlowSpec& spec, int pq_bound);

}  // namespace rh
