#pragma once

#include <cstdint>
#include <vector>

namespace mnet::aggregate {

// Per-class vote counts plus the nominal size of the emitting ensemble
// (the normalizer for certainty terms). Abstentions allowed: sum <= size.
struct VoteTally {
    std::vector<long> votes;      // indexed by class
    long size = 0;                // nominal ensemble size
    double validation_error = -1; // <0 = unknown; used only for exact ties

    long total() const;
};

struct Decision {
    int cls = 0;
    bool tie = false;
};

Decision plurality(const VoteTally& tally);

// OVA MAX rule: argmax of the per-class classifier outputs.
Decision ova_max_confidence(const std::vector<double>& scores);

// OVO VOTE (Max-Wins): winners[j] is the winning class of the j-th pair in
// ovo_pairs order; each adds one vote, plurality decides.
Decision ovo_vote(int n_classes, const std::vector<int>& winners);

struct CertaintyResult {
    int cls = 0;
    std::vector<double> scores; // per-class sum of vote fractions
    bool tie = false;           // exact certainty tie occurred
    bool rule_invoked = false;  // false when all pluralities agreed
};

// Cross-ensemble rule: score(c) = sum_j votes_j(c)/size_j, argmax wins.
// Applied only when component pluralities disagree; exact score ties fall
// back to the plurality winner of the lowest-validation-error tally, then
// the lowest class index.
CertaintyResult degree_of_certainty(const std::vector<VoteTally>& tallies);

// Probability averaging across per-ensemble score vectors; extra rule for
// experiments, never the default for the named schemes.
Decision soft_vote(const std::vector<std::vector<double>>& probability_vectors);

} // namespace mnet::aggregate
