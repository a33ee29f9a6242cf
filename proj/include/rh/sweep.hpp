#pragma once

#include "rh/filtration.hpp"

#include <string>
#include <vector>

namespace rh {

enum class AttachmentPattern {
    MergeFirst,  // saddles 1..k0-1 join the attractors, the rest self-attach
    SelfFirst,   // self-attaching saddles come first in the dynamic order
};

// Flow with k0 attractors a1.., k1 saddles s1.. and one repeller r; even
// saddles are twisted (rho = -1) so period doubling has work to do. When
// k1 >= k0 - 1 the saddles connect all attractor pieces.
FlowSpec make_sweep_spec(int k0, int k1, AttachmentPattern pattern, bool orientable = true);

struct SweepRow {
    int k0 = 0;
    int k1 = 0;
    AttachmentPattern pattern = AttachmentPattern::MergeFirst;
    bool admissible = false;  // k1 >= k0 - 1
    ClassificationResult result;
    bool evidence_complete = false;
    bool as_expected = false;
};

// k0 in [1, k0_max], k1 in [0, k0 + k1_extra]; rows in deterministic order.
std::vector<SweepRow> run_sweep(int k0_max, int k1_extra, int pq_bound, unsigned threads = 0);

std::string render_sweep(const std::vector<SweepRow>& rows);

}  // namespace rh
