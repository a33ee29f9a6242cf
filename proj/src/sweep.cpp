#include "rh/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

namespace rh {

FlowSpec make_sweep_spec(int k0, int k1, AttachmentPattern pattern, bool orientable)
{
    FlowSpec spec;
    spec.orientable = orientable;
    auto attractor = [](int i) { return "a" + std::to_string(i); };
    auto saddle = [](int i) { return "s" + std::to_string(i); };
    for (int i = 1; i <= k0; ++i)
        spec.orbits.push_back({attractor(i), 0, +1, +1});

    const int merges = std::min(k1, k0 - 1);
    const int selfs = k1 - merges;
    // ids sort in construction order for k1 <= 9, so ties break as built
    int next = 1;
    auto add_saddle = [&](std::initializer_list<std::string> lowers) {
        const std::string id = saddle(next);
        const int rho = next % 2 == 0 ? -1 : +1;
        spec.orbits.push_back({id, 1, rho, rho});
        for (const auto& low : lowers)
            spec.smale_edges.push_back({low, id});
        ++next;
    };
    auto add_merges = [&] {
        for (int i = 1; i <= merges; ++i)
            add_saddle({attractor(i), attractor(i + 1)});
    };
    auto add_selfs = [&] {
        for (int i = 0; i < selfs; ++i)
            add_saddle({attractor(1)});
    };
    if (pattern == AttachmentPattern::MergeFirst) {
        add_merges();
        add_selfs();
    } else {
        add_selfs();
        add_merges();
    }

    spec.orbits.push_back({"r", 3, +1, +1});
    if (k1 == 0)
        for (int i = 1; i <= k0; ++i)
            spec.smale_edges.push_back({attractor(i), "r"});
    else
        spec.smale_edges.push_back({saddle(k1), "r"});
    return spec;
}

namespace {

bool evidence_complete(const TheoremReport& report)
{
    static const std::vector<std::string> gates{"validate_flow",    "precondition",     "period_double",
                                                "dynamic_order",    "saddle_structure", "franks",
                                                "verify_compr",     "build_filtration", "boundary_coherence",
                                                "cap_with_repeller"};
    const auto& s = report.evidence.sections;
    return std::all_of(gates.begin(), gates.end(), [&](const std::string& gate) {
        return std::any_of(s.begin(), s.end(), [&](const auto& sec) { return sec.gate == gate && sec.passed; });
    });
}

}  // namespace

std::vector<SweepRow> run_sweep(int k0_max, int k1_extra, int pq_bound, unsigned threads)
{
    std::vector<SweepRow> rows;
    for (int k0 = 1; k0 <= k0_max; ++k0)
        for (int k1 = 0; k1 <= k0 + k1_extra; ++k1)
            for (auto pattern : {AttachmentPattern::MergeFirst, AttachmentPattern::SelfFirst}) {
                SweepRow row;
                row.k0 = k0;
                row.k1 = k1;
                row.pattern = pattern;
                row.admissible = k1 >= k0 - 1;
                rows.push_back(row);
            }

    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t i = cursor++; i < rows.size(); i = cursor++) {
            SweepRow& row = rows[i];
            TheoremReport report = verify_main_theorem(make_sweep_spec(row.k0, row.k1, row.pattern), pq_bound);
            row.result = report.result;
            row.evidence_complete = evidence_complete(report);
            if (row.admissible)
                row.as_expected = row.result.verdict == Verdict::S3xS1 && row.evidence_complete;
            else
                row.as_expected = row.result.verdict == Verdict::Obstructed && row.result.reason.starts_with("N1:");
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    pool.clear();
    return rows;
}

std::string render_sweep(const std::vector<SweepRow>& rows)
{
    std::ostringstream os;
    os << "k0  k1  pattern     verdict\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(4) << r.k0 << std::setw(4) << r.k1 << std::setw(12)
           << (r.pattern == AttachmentPattern::MergeFirst ? "merge-first" : "self-first") << to_string(r.result);
        if (!r.as_expected)
            os << "  MISMATCH";
        os << "\n";
    }
    return os.str();
}

}  // namespace rh
