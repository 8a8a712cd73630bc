#include "mnet/aggregate.hpp"

#include "mnet/errors.hpp"

#include <numeric>

namespace mnet::aggregate {

long VoteTally::total() const {
    return std::accumulate(votes.begin(), votes.end(), 0L);
}

Decision plurality(const VoteTally& tally) {
    if (tally.votes.empty() || tally.size < 1) throw ConfigError("plurality: empty tally");
    Decision d;
    long best = -1;
    for (std::size_t c = 0; c < tally.votes.size(); ++c) {
        if (tally.votes[c] > best) {
            best = tally.votes[c];
            d.cls = static_cast<int>(c);
            d.tie = false;
        } else if (tally.votes[c] == best) {
            d.tie = true;
        }
    }
    return d;
}

Decision ova_max_confidence(const std::vector<double>& scores) {
    if (scores.empty()) throw DimensionError("ova_max_confidence: empty score vector");
    Decision d;
    double best = scores[0];
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > best) {
            best = scores[c];
            d.cls = static_cast<int>(c);
            d.tie = false;
        } else if (scores[c] == best) {
            d.tie = true;
        }
    }
    return d;
}

Decision ovo_vote(int n_classes, const std::vector<int>& winners) {
    const std::size_t expected = static_cast<std::size_t>(n_classes) * (n_classes - 1) / 2;
    if (winners.size() != expected)
        throw DimensionError("ovo_vote: expected " + std::to_string(expected) +
                             " pairwise decisions, got " + std::to_string(winners.size()));
    VoteTally tally;
    tally.votes.assign(n_classes, 0);
    tally.size = static_cast<long>(expected);
    for (int w : winners) {
        if (w < 0 || w >= n_classes) throw ConfigError("ovo_vote: winner class out of range");
        ++tally.votes[w];
    }
    return plurality(tally);
}

CertaintyResult degree_of_certainty(const std::vector<VoteTally>& tallies) {
    if (tallies.size() < 2)
        throw ConfigError("degree_of_certainty: need at least two tallies");
    std::size_t n_classes = 0;
    for (const VoteTally& t : tallies) {
        if (t.size < 1) throw ConfigError("degree_of_certainty: tally with size 0");
        n_classes = std::max(n_classes, t.votes.size());
    }

    CertaintyResult result;
    result.scores.assign(n_classes, 0.0);
    for (const VoteTally& t : tallies)
        for (std::size_t c = 0; c < t.votes.size(); ++c)
            result.scores[c] += static_cast<double>(t.votes[c]) / static_cast<double>(t.size);

    // Pass-through when every component plurality agrees.
    const Decision first = plurality(tallies[0]);
    bool all_agree = true;
    for (std::size_t j = 1; j < tallies.size() && all_agree; ++j)
        all_agree = plurality(tallies[j]).cls == first.cls;
    if (all_agree) {
        result.cls = first.cls;
        return result;
    }

    result.rule_invoked = true;
    double best = -1.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (result.scores[c] > best) {
            best = result.scores[c];
            result.cls = static_cast<int>(c);
            result.tie = false;
        } else if (result.scores[c] == best) {
            result.tie = true;
        }
    }
    if (result.tie) {
        // Prefer the plurality winner of the lowest-validation-error tally,
        // provided that class is among the tied argmax set.
        const VoteTally* preferred = nullptr;
        for (const VoteTally& t : tallies) {
            if (t.validation_error < 0) continue;
            if (!preferred || t.validation_error < preferred->validation_error) preferred = &t;
        }
        if (preferred) {
            const int candidate = plurality(*preferred).cls;
            if (candidate < static_cast<int>(n_classes) &&
                result.scores[candidate] == best)
                result.cls = candidate;
        }
    }
    return result;
}

Decision soft_vote(const std::vector<std::vector<double>>& probability_vectors) {
    if (probability_vectors.empty()) throw DimensionError("soft_vote: no inputs");
    std::vector<double> mean(probability_vectors.front().size(), 0.0);
    for (const auto& p : probability_vectors) {
        if (p.size() != mean.size()) throw DimensionError("soft_vote: length mismatch");
        for (std::size_t c = 0; c < p.size(); ++c) mean[c] += p[c];
    }
    return ova_max_confidence(mean);
}

} // namespace mnet::aggregate
