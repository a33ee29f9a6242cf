#include "rh/presentation3.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

namespace rh {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column)
{
}

namespace {

long floor_mod(long a, long m)
{
    long r = a % m;
    return r < 0 ? r + m : r;
}

long modular_inverse(long a, long m)
{
    // extended Euclid; caller guarantees gcd(a, m) = 1
    long old_r = a, r = m, old_s = 1, s = 0;
    while (r != 0) {
        long quotient = old_r / r;
        old_r -= quotient * r;
        std::swap(old_r, r);
        old_s -= quotient * s;
        std::swap(old_s, s);
    }
    return floor_mod(old_s, m);
}

Prime3 canonical_lens(long p, long q)
{
    if (p < 0) {
        p = -p;
        if (p >= 2)
            q = p - floor_mod(q, p);
    }
    if (p == 0)
        return Prime3::sphere_circle();
    if (p == 1)
        return Prime3::three_sphere();
    q = floor_mod(q, p);
    long inverse = modular_inverse(q, p);
    long best = std::min({q, p - q, inverse, p - inverse});
    return Prime3::lens(p, best);
}

// Primary route for H1: cyclic orders are split into prime powers and
// regrouped into invariant factors.
std::vector<long> invariant_factors(const std::vector<long>& cyclic_orders)
{
    std::map<long, std::vector<long>> powers_by_prime;
    for (long order : cyclic_orders) {
        long n = order;
        for (long f = 2; f * f <= n; ++f) {
            if (n % f != 0)
                continue;
            long power = 1;
            while (n % f == 0) {
                n /= f;
                power *= f;
            }
            powers_by_prime[f].push_back(power);
        }
        if (n > 1)
            powers_by_prime[n].push_back(n);
    }
    std::size_t length = 0;
    for (auto& [prime, powers] : powers_by_prime) {
        std::sort(powers.begin(), powers.end(), std::greater<>());
        length = std::max(length, powers.size());
    }
    // factors[0] is the largest
    std::vector<long> factors(length, 1);
    for (const auto& [prime, powers] : powers_by_prime)
        for (std::size_t i = 0; i < powers.size(); ++i)
            factors[i] *= powers[i];
    std::reverse(factors.begin(), factors.end());
    return factors;
}

}  // namespace

void check_parameters(const Prime3& prime)
{
    if (prime.kind != PrimeKind::Lens && prime.kind != PrimeKind::Surgered)
        return;
    if (std::gcd(prime.p, prime.q) != 1)
        throw NonCoprimeParameters("non-coprime parameters in " + to_string(prime));
}

Prime3 normalize(const Prime3& prime)
{
    switch (prime.kind) {
    case PrimeKind::ThreeSphere:
        return Prime3::three_sphere();
    case PrimeKind::SphereCircle:
        return Prime3::sphere_circle();
    case PrimeKind::Lens:
        check_parameters(prime);
        return canonical_lens(prime.p, prime.q);
    case PrimeKind::Surgered:
        check_parameters(prime);
        // (0,±1) is the trivial regluing and returns the base
        if (prime.p == 0)
            return prime.base == SurgeryBase::ThreeSphere ? Prime3::three_sphere() : Prime3::sphere_circle();
        return prime;
    }
    return prime;
}

ConnectedSum3 normalize(const ConnectedSum3& component)
{
    ConnectedSum3 out;
    for (const Prime3& s : component.summands) {
        Prime3 n = normalize(s);
        if (!n.is_three_sphere())
            out.summands.push_back(n);
    }
    if (out.summands.empty())
        out.summands.push_back(Prime3::three_sphere());
    std::sort(out.summands.begin(), out.summands.end());
    return out;
}

Manifold3Expression normalize(const Manifold3Expression& expr)
{
    Manifold3Expression out;
    out.components.reserve(expr.components.size());
    for (const auto& c : expr.components)
        out.components.push_back(normalize(c));
    std::sort(out.components.begin(), out.components.end());
    return out;
}

bool equivalent(const Manifold3Expression& a, const Manifold3Expression& b)
{
    return normalize(a) == normalize(b);
}

MaybeCount betti1(const Prime3& prime)
{
    switch (prime.kind) {
    case PrimeKind::ThreeSphere:
        return 0;
    case PrimeKind::SphereCircle:
        return 1;
    case PrimeKind::Lens:
        return prime.p == 0 ? 1 : 0;
    case PrimeKind::Surgered:
        if (prime.is_opaque())
            return std::nullopt;
        return prime.q == 0 ? 1 : 0;
    }
    return std::nullopt;
}

MaybeCount betti1(const ConnectedSum3& component)
{
    int total = 0;
    for (const auto& s : component.summands) {
        MaybeCount b = betti1(s);
        if (!b)
            return std::nullopt;
        total += *b;
    }
    return total;
}

std::vector<MaybeCount> betti1(const Manifold3Expression& expr)
{
    std::vector<MaybeCount> out;
    for (const auto& c : expr.components)
        out.push_back(betti1(c));
    return out;
}

AbelianGroupDescriptor h1(const ConnectedSum3& component)
{
    AbelianGroupDescriptor group;
    std::vector<long> orders;
    for (const auto& s : component.summands) {
        long order = 1;
        switch (s.kind) {
        case PrimeKind::ThreeSphere:
            continue;
        case PrimeKind::SphereCircle:
            order = 0;
            break;
        case PrimeKind::Lens:
            order = std::labs(s.p);
            break;
        case PrimeKind::Surgered:
            if (s.is_opaque())
                return AbelianGroupDescriptor::unknown();
            order = std::labs(s.q);
            break;
        }
        if (order == 0)
            ++group.free_rank;
        else if (order > 1)
            orders.push_back(order);
    }
    group.torsion = invariant_factors(orders);
    return group;
}

std::vector<AbelianGroupDescriptor> h1(const Manifold3Expression& expr)
{
    std::vector<AbelianGroupDescriptor> out;
    for (const auto& c : expr.components)
        out.push_back(h1(c));
    return out;
}

SmithForm smith_normal_form(std::vector<std::vector<long>> m)
{
    SmithForm form;
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // pivot: smallest non-zero |entry| in the trailing block
        std::size_t pr = rows, pc = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (pr == rows || std::labs(m[i][j]) < std::labs(m[pr][pc]))) {
                    pr = i;
                    pc = j;
                }
        if (pr == rows)
            break;
        std::swap(m[t], m[pr]);
        for (auto& row : m)
            std::swap(row[t], row[pc]);

        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
            long f = m[i][t] / m[t][t];
            for (std::size_t j = t; j < cols; ++j)
                m[i][j] -= f * m[t][j];
            clean = clean && m[i][t] == 0;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            long f = m[t][j] / m[t][t];
            for (std::size_t i = t; i < rows; ++i)
                m[i][j] -= f * m[i][t];
            clean = clean && m[t][j] == 0;
        }
        if (!clean)
            continue;

        // divisibility: fold an offending row into row t and retry
        bool divides = true;
        for (std::size_t i = t + 1; i < rows && divides; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    for (std::size_t k = t; k < cols; ++k)
                        m[t][k] += m[i][k];
                    divides = false;
                    break;
                }
        if (!divides)
            continue;
        form.diagonal.push_back(std::labs(m[t][t]));
        ++t;
    }
    form.rank = static_cast<int>(form.diagonal.size());
    return form;
}

AbelianGroupDescriptor h1_oracle(const ConnectedSum3& component)
{
    std::vector<long> blocks;
    for (const auto& s : component.summands) {
        switch (s.kind) {
        case PrimeKind::ThreeSphere:
            break;
        case PrimeKind::SphereCircle:
            blocks.push_back(0);
            break;
        case PrimeKind::Lens:
            blocks.push_back(s.p);
            break;
        case PrimeKind::Surgered:
            if (s.is_opaque())
                throw UnsupportedOpaquePiece("no presentation for " + to_string(s));
            blocks.push_back(s.q);
            break;
        }
    }
    const std::size_t n = blocks.size();
    std::vector<std::vector<long>> matrix(n, std::vector<long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        matrix[i][i] = blocks[i];
    SmithForm form = smith_normal_form(std::move(matrix));

    AbelianGroupDescriptor group;
    group.free_rank = static_cast<int>(n) - form.rank;
    for (long d : form.diagonal)
        if (d > 1)
            group.torsion.push_back(d);
    return group;
}

std::vector<AbelianGroupDescriptor> h1_oracle(const Manifold3Expression& expr)
{
    std::vector<AbelianGroupDescriptor> out;
    for (const auto& c : expr.components)
        out.push_back(h1_oracle(c));
    return out;
}

Irreducibility is_E_irreducible_resolved(const ConnectedSum3& component, bool resolve_as_e)
{
    bool has_e = false;
    bool unknown = false;
    int beta = 0;
    for (const auto& s : component.summands) {
        if (s.is_sphere_circle() || (s.kind == PrimeKind::Lens && s.p == 0)) {
            has_e = true;
            beta += 1;
        } else if (s.is_branch_piece()) {
            has_e = has_e || resolve_as_e;
            beta += 1;
        } else if (s.is_opaque()) {
            unknown = true;
        } else {
            beta += *betti1(s);
        }
    }
    if (has_e || beta >= 2)
        return Irreducibility::False;
    if (unknown)
        return Irreducibility::Unknown;
    return Irreducibility::True;
}

Irreducibility is_E_irreducible(const ConnectedSum3& component)
{
    const bool has_branch = std::any_of(component.summands.begin(), component.summands.end(),
                                        [](const Prime3& s) { return s.is_branch_piece(); });
    const Irreducibility as_irreducible = is_E_irreducible_resolved(component, false);
    if (!has_branch)
        return as_irreducible;
    const Irreducibility as_e = is_E_irreducible_resolved(component, true);
    if (as_e == as_irreducible)
        return as_e;
    if (as_e == Irreducibility::Unknown || as_irreducible == Irreducibility::Unknown)
        return Irreducibility::Unknown;
    return Irreducibility::BranchEOrIrreducible;
}

bool is_E(const ConnectedSum3& component)
{
    ConnectedSum3 n = normalize(component);
    return n.summands.size() == 1 && n.summands[0].is_sphere_circle();
}

std::string to_string(const Prime3& prime)
{
    switch (prime.kind) {
    case PrimeKind::ThreeSphere:
        return "S3";
    case PrimeKind::SphereCircle:
        return "E";
    case PrimeKind::Lens:
        return "L(" + std::to_string(prime.p) + "," + std::to_string(prime.q) + ")";
    case PrimeKind::Surgered:
        return std::string("Surg(") + (prime.base == SurgeryBase::ThreeSphere ? "S3" : "E") + "," +
               std::to_string(prime.p) + "," + std::to_string(prime.q) + ")";
    }
    return "?";
}

std::string to_string(const ConnectedSum3& component)
{
    if (component.summands.empty())
        return "S3";
    std::string out;
    for (std::size_t i = 0; i < component.summands.size(); ++i) {
        if (i)
            out += "#";
        out += to_string(component.summands[i]);
    }
    return out;
}

std::string to_string(const Manifold3Expression& expr)
{
    std::string out;
    for (std::size_t i = 0; i < expr.components.size(); ++i) {
        if (i)
            out += " | ";
        out += to_string(expr.components[i]);
    }
    return out;
}

std::string to_string(const AbelianGroupDescriptor& group)
{
    if (!group.known)
        return "unknown";
    std::ostringstream os;
    os << "rank " << group.free_rank << ", torsion [";
    for (std::size_t i = 0; i < group.torsion.size(); ++i)
        os << (i ? ", " : "") << group.torsion[i];
    os << "]";
    return os.str();
}

std::string to_string(Irreducibility verdict)
{
    switch (verdict) {
    case Irreducibility::True:
        return "true";
    case Irreducibility::False:
        return "false";
    case Irreducibility::Unknown:
        return "unknown";
    case Irreducibility::BranchEOrIrreducible:
        return "branch-E-or-irreducible";
    }
    return "?";
}

namespace {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    Manifold3Expression parse()
    {
        Manifold3Expression expr;
        expr.components.push_back(parse_sum());
        while (accept('|'))
            expr.components.push_back(parse_sum());
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return expr;
    }

private:
    ConnectedSum3 parse_sum()
    {
        ConnectedSum3 sum;
        sum.summands.push_back(parse_prime());
        while (accept('#'))
            sum.summands.push_back(parse_prime());
        return sum;
    }

    Prime3 parse_prime()
    {
        skip_space();
        if (accept_word("Surg")) {
            expect('(');
            SurgeryBase base;
            skip_space();
            if (accept_word("S3"))
                base = SurgeryBase::ThreeSphere;
            else if (accept_word("E"))
                base = SurgeryBase::SphereCircle;
            else
                fail("expected surgery base S3 or E");
            expect(',');
            long p = parse_int();
            expect(',');
            long q = parse_int();
            expect(')');
            return Prime3::surgered(base, p, q);
        }
        if (accept_word("S3"))
            return Prime3::three_sphere();
        if (accept_word("E"))
            return Prime3::sphere_circle();
        if (accept_word("L")) {
            expect('(');
            long p = parse_int();
            expect(',');
            long q = parse_int();
            expect(')');
            return Prime3::lens(p, q);
        }
        fail(pos_ < text_.size() ? "expected a prime manifold" : "unexpected end of expression");
    }

    long parse_int()
    {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
            ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == digits) {
            pos_ = start;
            fail("expected an integer");
        }
        if (pos_ - digits > 12)
            fail("integer too large");
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept_word(std::string_view word)
    {
        if (text_.substr(pos_, word.size()) != word)
            return false;
        std::size_t end = pos_ + word.size();
        // "E" must not swallow the start of a longer identifier
        if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end])))
            return false;
        pos_ = end;
        return true;
    }

    void expect(char c)
    {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& message) const
    {
        int line = 1, column = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(message, line, column);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Manifold3Expression parse_expression(std::string_view text)
{
    return ExpressionParser(text).parse();
}

}  // namespace rh
