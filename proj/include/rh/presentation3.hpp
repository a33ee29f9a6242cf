#pragma once

// Symbolic algebra of closed orientable 3-manifolds built from S3, E = S2xS1,
// lens spaces and opaque Dehn-surgered pieces, combined by connected sum (#)
// and disjoint union (|).

#include <compare>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rh {

class NonCoprimeParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedOpaquePiece : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

enum class PrimeKind : std::uint8_t { ThreeSphere, SphereCircle, Lens, Surgered };

// Base of a surgered piece; only S3 and E are ever wrapped.
enum class SurgeryBase : std::uint8_t { ThreeSphere, SphereCircle };

struct Prime3 {
    PrimeKind kind = PrimeKind::ThreeSphere;
    SurgeryBase base = SurgeryBase::ThreeSphere;  // meaningful for Surgered only
    long p = 0;
    long q = 0;

    static Prime3 three_sphere() { return {}; }
    static Prime3 sphere_circle() { return {PrimeKind::SphereCircle, SurgeryBase::ThreeSphere, 0, 0}; }
    static Prime3 lens(long p, long q) { return {PrimeKind::Lens, SurgeryBase::ThreeSphere, p, q}; }
    static Prime3 surgered(SurgeryBase b, long p, long q) { return {PrimeKind::Surgered, b, p, q}; }

    bool is_three_sphere() const { return kind == PrimeKind::ThreeSphere; }
    bool is_sphere_circle() const { return kind == PrimeKind::SphereCircle; }
    // Surgered(E,·,·): no homology facts are available for it.
    bool is_opaque() const { return kind == PrimeKind::Surgered && base == SurgeryBase::SphereCircle; }
    // Surgered(S3,±1,0): either E or E-irreducible, undetermined which.
    bool is_branch_piece() const
    {
        return kind == PrimeKind::Surgered && base == SurgeryBase::ThreeSphere && q == 0 && (p == 1 || p == -1);
    }

    auto operator<=>(const Prime3&) const = default;
};

struct ConnectedSum3 {
    std::vector<Prime3> summands;

    ConnectedSum3() = default;
    ConnectedSum3(std::initializer_list<Prime3> s) : summands(s) {}
    explicit ConnectedSum3(std::vector<Prime3> s) : summands(std::move(s)) {}

    auto operator<=>(const ConnectedSum3&) const = default;
};

struct Manifold3Expression {
    std::vector<ConnectedSum3> components;

    Manifold3Expression() = default;
    Manifold3Expression(std::initializer_list<ConnectedSum3> c) : components(c) {}
    explicit Manifold3Expression(std::vector<ConnectedSum3> c) : components(std::move(c)) {}

    auto operator<=>(const Manifold3Expression&) const = default;
};

struct AbelianGroupDescriptor {
    bool known = true;
    int free_rank = 0;
    std::vector<long> torsion;  // t1 | t2 | ... , each >= 2

    static AbelianGroupDescriptor unknown() { return {false, 0, {}}; }
    bool operator==(const AbelianGroupDescriptor&) const = default;
};

// Optional non-negative integer; nullopt means "unknown".
using MaybeCount = std::optional<int>;

enum class Irreducibility : std::uint8_t { True, False, Unknown, BranchEOrIrreducible };

// --- canonical forms -------------------------------------------------------

// Canonical lens representative: p >= 2, 1 <= q < p, q minimal among
// {±q, ±q^-1 mod p}. Degenerate symbols map to S3 / E.
Prime3 normalize(const Prime3& prime);
ConnectedSum3 normalize(const ConnectedSum3& component);
Manifold3Expression normalize(const Manifold3Expression& expr);

bool equivalent(const Manifold3Expression& a, const Manifold3Expression& b);

// gcd(|p|,|q|) must be 1 for every lens and surgery symbol.
void check_parameters(const Prime3& prime);

// --- homology --------------------------------------------------------------

MaybeCount betti1(const Prime3& prime);
MaybeCount betti1(const ConnectedSum3& component);
std::vector<MaybeCount> betti1(const Manifold3Expression& expr);

AbelianGroupDescriptor h1(const ConnectedSum3& component);
std::vector<AbelianGroupDescriptor> h1(const Manifold3Expression& expr);

// Independent route through a block-diagonal presentation matrix and Smith
// normal form. Throws UnsupportedOpaquePiece on Surgered(E,·,·).
AbelianGroupDescriptor h1_oracle(const ConnectedSum3& component);
std::vector<AbelianGroupDescriptor> h1_oracle(const Manifold3Expression& expr);

// Non-zero invariant factors d1 | d2 | ... of an integer matrix.
struct SmithForm {
    std::vector<long> diagonal;
    int rank = 0;
};
SmithForm smith_normal_form(std::vector<std::vector<long>> matrix);

// --- E-irreducibility ------------------------------------------------------

Irreducibility is_E_irreducible(const ConnectedSum3& component);

// Verdict after replacing every Surgered(S3,±1,0) piece by E (resolve_as_e)
// or by an E-irreducible manifold with β1 = 1.
Irreducibility is_E_irreducible_resolved(const ConnectedSum3& component, bool resolve_as_e);

bool is_E(const ConnectedSum3& component);

// --- text form -------------------------------------------------------------

std::string to_string(const Prime3& prime);
std::string to_string(const ConnectedSum3& component);
std::string to_string(const Manifold3Expression& expr);
std::string to_string(const AbelianGroupDescriptor& group);
std::string to_string(Irreducibility verdict);

Manifold3Expression parse_expression(std::string_view text);

}  // namespace rh
