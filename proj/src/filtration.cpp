#include "rh/filtration.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace rh {

Piece4 Piece4::solid_torus()
{
    return {PieceTag::P4, "", Manifold3Expression{ConnectedSum3{Prime3::sphere_circle()}}};
}

Piece4 Piece4::ball()
{
    return {PieceTag::B4, "", Manifold3Expression{ConnectedSum3{Prime3::three_sphere()}}};
}

std::string to_string(const Piece4& piece)
{
    switch (piece.tag) {
    case PieceTag::P4:
        return "P4";
    case PieceTag::B4:
        return "B4";
    case PieceTag::Other:
        return "Other(" + piece.description + ")";
    }
    return "?";
}

Manifold3Expression boundary_of(const std::vector<Piece4>& pieces)
{
    Manifold3Expression out;
    for (const auto& p : pieces)
        out.components.insert(out.components.end(), p.boundary.components.begin(), p.boundary.components.end());
    return normalize(out);
}

std::vector<Piece4> attach_round_one_handle(const std::vector<Piece4>& stage, Feet feet)
{
    for (std::size_t f : {feet.first, feet.second}) {
        if (f >= stage.size())
            throw UnsupportedPiece("foot " + std::to_string(f) + " is not a piece of the stage");
        if (stage[f].tag != PieceTag::P4)
            throw UnsupportedPiece("foot lands in " + to_string(stage[f]) + ", only P4 pieces are covered");
    }
    if (feet.first == feet.second)
        return stage;  // self-attachment: the piece is again P4
    std::vector<Piece4> out;
    out.reserve(stage.size() - 1);
    for (std::size_t i = 0; i < stage.size(); ++i)
        if (i != feet.second)
            out.push_back(stage[i]);
    return out;
}

namespace {

std::string render_pieces(const std::vector<Piece4>& pieces)
{
    std::string out = "{";
    for (std::size_t i = 0; i < pieces.size(); ++i)
        out += (i ? ", " : "") + to_string(pieces[i]);
    return out + "}";
}

}  // namespace

Filtration4 build_filtration(const FlowSpec& spec, const std::vector<std::string>& order, const FeetPlan& plan)
{
    const HandleCounts counts = count_handles(spec);
    auto structure = saddle_structure(counts);
    if (auto* v = std::get_if<StructureViolation>(&structure))
        throw StructureError(*v);

    Filtration4 filtration;
    filtration.k0 = counts.k[0];
    filtration.k1 = counts.k[1];
    filtration.stages.push_back(Stage{});

    std::vector<Piece4> pieces;
    std::vector<std::set<std::string>> members;  // orbits inside each piece

    auto piece_of = [&](const std::string& id) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i].contains(id))
                return i;
        return std::nullopt;
    };

    for (const auto& id : order) {
        const OrbitDatum* orbit = spec.find(id);
        if (!orbit)
            throw std::invalid_argument("order mentions unknown orbit '" + id + "'");
        Stage stage;
        Attachment record{id, orbit->morse_index, std::nullopt, ""};

        switch (orbit->morse_index) {
        case 0:
            pieces.push_back(Piece4::solid_torus());
            members.push_back({id});
            break;
        case 1: {
            if (pieces.empty())
                throw StructureError({"N0", "round 1-handle attached before any attracting orbit"});
            Feet feet;
            auto planned = std::find_if(plan.begin(), plan.end(), [&](const auto& entry) { return entry.first == id; });
            if (planned != plan.end()) {
                feet = planned->second;
            } else {
                std::set<std::size_t> landing;
                for (const auto& e : spec.smale_edges)
                    if (e.upper == id)
                        if (auto p = piece_of(e.lower))
                            landing.insert(*p);
                if (landing.size() >= 2)
                    feet = {*landing.begin(), *std::next(landing.begin())};
                else if (landing.size() == 1)
                    feet = {*landing.begin(), *landing.begin()};
            }
            pieces = attach_round_one_handle(pieces, feet);
            if (feet.first != feet.second) {
                members[feet.first].insert(members[feet.second].begin(), members[feet.second].end());
                members.erase(members.begin() + static_cast<std::ptrdiff_t>(feet.second));
            }
            members[feet.first].insert(id);
            record.feet = feet;
            record.side_condition =
                "A₂ \\ int P₂ ≅ P³ certified: every boundary component is E before attaching";
            break;
        }
        case 3:
            record.side_condition = "repelling orbit neighbourhood ≅ P4 glued along E";
            pieces = {Piece4{PieceTag::Other, "closed: M_{k-1} ∪ P4", {}}};
            members = {{}};
            break;
        default:
            throw StructureError({"N2", "round 2-handle in a flow whose saddles must all have index 1"});
        }
        stage.pieces = pieces;
        stage.attachment = record;
        stage.boundary = boundary_of(pieces);
        filtration.stages.push_back(std::move(stage));
    }
    return filtration;
}

std::string to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::S3xS1:
        return "S3xS1";
    case Verdict::S3twistS1:
        return "S3twistS1";
    case Verdict::Obstructed:
        return "Obstructed";
    }
    return "?";
}

std::string to_string(const ClassificationResult& result)
{
    if (result.verdict == Verdict::Obstructed)
        return "Obstructed(" + result.reason + ")";
    return to_string(result.verdict);
}

ClassificationResult cap_with_repeller(const std::vector<Piece4>& pre_cap, bool orientable)
{
    if (pre_cap.size() != 1)
        return {Verdict::Obstructed,
                "pre-cap stage not connected (" + std::to_string(pre_cap.size()) + " pieces)"};
    if (pre_cap[0].tag != PieceTag::P4)
        return {Verdict::Obstructed, "pre-cap piece is " + to_string(pre_cap[0]) + ", not P4"};
    // P4 ∪_E P4 ≅ S3xS1 is taken as a known classification fact
    if (orientable)
        return {Verdict::S3xS1, ""};
    QuotientVerdict quotient = kwasik_exclusion(Manifold4::S3xS1, false);
    if (quotient.manifold == Manifold4::S3twistS1)
        return {Verdict::S3twistS1, ""};
    return {Verdict::Obstructed, "non-orientable quotient not determined"};
}

std::string Evidence::serialize() const
{
    std::ostringstream os;
    for (const auto& s : sections) {
        os << "== " << s.gate << ": " << (s.passed ? "PASS" : "FAIL") << " ==\n" << s.body;
        if (!s.body.empty() && s.body.back() != '\n')
            os << "\n";
    }
    return os.str();
}

namespace {

// Stand-in for the orientation double cover: the lift of individual orbits is
// not modeled, only that the cover is orientable with untwisted extremes.
FlowSpec orientable_cover_proxy(const FlowSpec& spec)
{
    FlowSpec cover = spec;
    cover.orientable = true;
    for (auto& o : cover.orbits)
        if (o.morse_index == 0 || o.morse_index == kFlowDimension - 1)
            o.rho = o.nu = +1;
    return cover;
}

std::string join_lines(const std::vector<std::string>& lines)
{
    std::string out;
    for (const auto& l : lines)
        out += l + "\n";
    return out;
}

}  // namespace

TheoremReport verify_main_theorem(const FlowSpec& input, int pq_bound)
{
    TheoremReport report;
    auto& sections = report.evidence.sections;
    auto obstruct = [&](std::string gate, std::string reason, std::string body = "") {
        sections.push_back({gate, false, body.empty() ? reason + "\n" : body});
        report.result = {Verdict::Obstructed, std::move(reason)};
        return report;
    };

    const auto violations = validate_flow(input);
    if (!violations.empty())
        return obstruct("validate_flow", "validate_flow: " + violations.front(), join_lines(violations));
    sections.push_back({"validate_flow", true, "well-formed, " + std::to_string(input.orbits.size()) + " orbits\n"});

    FlowSpec spec = input;
    if (!input.orientable) {
        spec = orientable_cover_proxy(input);
        sections.push_back({"orientation_cover", true,
                            "non-orientable: checks run on the orientable double cover's combinatorial proxy\n"});
    }

    for (const auto& o : spec.orbits)
        if (o.morse_index == 2)
            return obstruct("precondition", "precondition: all saddles index 1",
                            "orbit '" + o.id + "' has index 2\n");
    sections.push_back({"precondition", true, "all saddle orbits have index 1\n"});

    try {
        spec = period_double(spec);
    } catch (const TwistedExtreme& e) {
        return obstruct("period_double", std::string("period_double: ") + e.what());
    }
    sections.push_back({"period_double", true, serialize_flow(spec)});

    auto ordered = dynamic_order(spec);
    if (auto* cycle = std::get_if<CycleError>(&ordered)) {
        std::string text;
        for (const auto& id : cycle->cycle)
            text += id + " ≺ ";
        text += cycle->cycle.front();
        return obstruct("dynamic_order", "dynamic_order: cycle " + text);
    }
    const auto& order = std::get<std::vector<std::string>>(ordered);
    {
        std::string body;
        for (std::size_t i = 0; i < order.size(); ++i)
            body += (i ? " ≺ " : "") + order[i];
        sections.push_back({"dynamic_order", true, body + "\n"});
    }

    auto structure = saddle_structure(spec);
    if (auto* v = std::get_if<StructureViolation>(&structure))
        return obstruct("saddle_structure", v->message);
    const HandleCounts counts = std::get<HandleCounts>(structure);
    const int k0 = counts.k[0], k1 = counts.k[1];
    sections.push_back({"saddle_structure", true,
                        "k = (" + std::to_string(k0) + ", " + std::to_string(k1) + ", 0, 1), total " +
                            std::to_string(counts.total()) + "\n"});

    const BettiVector target{{1, 1, 0, 1, 1}, "S3xS1, integer coefficients"};
    FranksReport franks = franks_check(counts, target);
    {
        std::string body = "against β(S3xS1) = (1,1,0,1,1)\n";
        for (const auto& s : franks.satisfied)
            body += "ok " + s + "\n";
        for (const auto& v : franks.violations)
            body += "violated (" + v.clause + ") " + v.detail + "\n";
        if (!franks.pass())
            return obstruct("franks", "franks: (" + franks.violations[0].clause + ") " + franks.violations[0].detail,
                            body);
        sections.push_back({"franks", true, body});
    }

    ComprResult compr = verify_compr(k0, k1, pq_bound);
    {
        std::ostringstream body;
        body << "k0=" << k0 << " k1=" << k1 << " pq_bound=" << pq_bound << " candidates=" << compr.candidates
             << " eliminated=" << compr.eliminated << " branch_splits=" << compr.branch_splits << "\n"
             << render_trace(compr.root);
        if (!compr.certified) {
            std::string reason = compr.counterexamples.empty()
                                     ? "verify_compr: no realizable boundary chain"
                                     : "verify_compr: counterexample " + to_string(compr.counterexamples.front());
            report.compr = std::move(compr);
            return obstruct("verify_compr", reason, body.str());
        }
        sections.push_back({"verify_compr", true, body.str()});
    }

    FeetPlan plan;
    Filtration4 filtration = build_filtration(spec, order, plan);
    {
        std::ostringstream body;
        for (std::size_t j = 0; j < filtration.stages.size(); ++j) {
            const auto& st = filtration.stages[j];
            body << "M_" << j << " = " << render_pieces(st.pieces) << "  Q_" << j << " = "
                 << (st.boundary.components.empty() ? "∅" : to_string(st.boundary));
            if (st.attachment) {
                body << "  <- " << st.attachment->orbit_id << " (index " << st.attachment->morse_index << ")";
                if (st.attachment->feet)
                    body << " feet " << st.attachment->feet->first << "," << st.attachment->feet->second;
                if (!st.attachment->side_condition.empty())
                    body << " [" << st.attachment->side_condition << "]";
            }
            body << "\n";
        }
        sections.push_back({"build_filtration", true, body.str()});
    }

    const int top = k0 + k1;  // k - 1
    {
        std::string body;
        for (int j = k0; j <= top; ++j) {
            const auto& boundary = filtration.stages[static_cast<std::size_t>(j)].boundary;
            const auto& certified = compr.survivors[j];
            const bool ok = std::find(certified.begin(), certified.end(), boundary) != certified.end();
            body += "Q_" + std::to_string(j) + " = " + to_string(boundary) + (ok ? " certified\n" : " NOT certified\n");
            if (!ok) {
                report.compr = std::move(compr);
                report.filtration = std::move(filtration);
                return obstruct("boundary_coherence",
                                "boundary coherence: Q_" + std::to_string(j) + " = " + to_string(boundary) +
                                    " not among certified boundaries",
                                body);
            }
        }
        sections.push_back({"boundary_coherence", true, body});
    }

    const auto& pre_cap = filtration.stages[static_cast<std::size_t>(top)].pieces;
    report.result = cap_with_repeller(pre_cap, input.orientable);
    {
        std::string body = "M_{k-1} = " + render_pieces(pre_cap) + "\n";
        if (!input.orientable)
            body += join_lines(kwasik_exclusion(Manifold4::S3xS1, false).trace);
        body += "verdict: " + to_string(report.result) + "\n";
        sections.push_back({"cap_with_repeller", report.result.accepted(), body});
    }
    report.compr = std::move(compr);
    report.filtration = std::move(filtration);
    return report;
}

}  // namespace rh
