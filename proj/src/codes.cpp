#include "mnet/codes.hpp"

#include "mnet/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mnet::codes {

CodeMatrix::CodeMatrix(int n_classes, int m_dichotomies, std::vector<std::int8_t> entries)
    : n_classes_(n_classes), m_(m_dichotomies), entries_(std::move(entries)) {
    if (n_classes_ < 2) throw ConfigError("code matrix: need at least 2 classes");
    if (m_ < 1) throw ConfigError("code matrix: need at least 1 dichotomy");
    if (entries_.size() != static_cast<std::size_t>(n_classes_) * m_)
        throw DimensionError("code matrix: entry count mismatch");
    for (std::int8_t e : entries_)
        if (e != -1 && e != 0 && e != 1)
            throw ConfigError("code matrix: entries must be in {-1,0,+1}");
    for (int a = 0; a < n_classes_; ++a)
        for (int b = a + 1; b < n_classes_; ++b) {
            bool identical = true;
            for (int j = 0; j < m_; ++j)
                if (at(a, j) != at(b, j)) { identical = false; break; }
            if (identical) throw ConfigError("code matrix: duplicate codewords");
        }
    for (int j = 0; j < m_; ++j) {
        bool has_pos = false, has_neg = false;
        for (int i = 0; i < n_classes_; ++i) {
            if (at(i, j) == 1) has_pos = true;
            if (at(i, j) == -1) has_neg = true;
        }
        if (!has_pos || !has_neg)
            throw ConfigError("code matrix: column " + std::to_string(j) +
                              " does not separate any classes");
    }
}

int CodeMatrix::row_distance(int a, int b) const {
    int d = 0;
    for (int j = 0; j < m_; ++j) {
        const std::int8_t ea = at(a, j);
        const std::int8_t eb = at(b, j);
        if (ea != 0 && eb != 0 && ea != eb) ++d;
    }
    return d;
}

int CodeMatrix::min_row_distance() const {
    int best = std::numeric_limits<int>::max();
    for (int a = 0; a < n_classes_; ++a)
        for (int b = a + 1; b < n_classes_; ++b) best = std::min(best, row_distance(a, b));
    return best;
}

std::string CodeMatrix::to_csv() const {
    std::ostringstream out;
    for (int i = 0; i < n_classes_; ++i) {
        for (int j = 0; j < m_; ++j) {
            if (j) out << ',';
            out << int(at(i, j));
        }
        out << '\n';
    }
    return out.str();
}

CodeMatrix ova_matrix(int n_classes) {
    if (n_classes < 2) throw ConfigError("ova_matrix: need at least 2 classes");
    std::vector<std::int8_t> entries(static_cast<std::size_t>(n_classes) * n_classes, -1);
    for (int i = 0; i < n_classes; ++i)
        entries[static_cast<std::size_t>(i) * n_classes + i] = 1;
    return CodeMatrix(n_classes, n_classes, std::move(entries));
}

std::vector<std::pair<int, int>> ovo_pairs(int n_classes) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n_classes; ++a)
        for (int b = a + 1; b < n_classes; ++b) pairs.emplace_back(a, b);
    return pairs;
}

CodeMatrix ovo_matrix(int n_classes) {
    if (n_classes < 2) throw ConfigError("ovo_matrix: need at least 2 classes");
    const auto pairs = ovo_pairs(n_classes);
    const int m = static_cast<int>(pairs.size());
    std::vector<std::int8_t> entries(static_cast<std::size_t>(n_classes) * m, 0);
    for (int j = 0; j < m; ++j) {
        entries[static_cast<std::size_t>(pairs[j].first) * m + j] = 1;
        entries[static_cast<std::size_t>(pairs[j].second) * m + j] = -1;
    }
    return CodeMatrix(n_classes, m, std::move(entries));
}

namespace {

// Frozen output of generate_ecoc_10x15(): min pairwise row distance 7.
constexpr std::int8_t kEcoc10x15[10 * 15] = {
    +1, +1, +1, +1, +1, +1, +1, +1, +1, +1, +1, +1, +1, +1, +1,
    +1, +1, -1, -1, -1, -1, +1, +1, +1, -1, -1, -1, +1, +1, -1,
    +1, -1, +1, -1, -1, +1, -1, +1, -1, -1, +1, +1, -1, +1, -1,
    +1, -1, -1, +1, -1, +1, +1, -1, -1, -1, -1, +1, +1, -1, +1,
    +1, -1, -1, -1, +1, +1, -1, -1, +1, +1, +1, -1, -1, -1, +1,
    -1, +1, +1, -1, +1, -1, -1, -1, +1, +1, -1, +1, +1, -1, -1,
    -1, +1, -1, +1, -1, +1, -1, +1, -1, +1, +1, -1, +1, -1, -1,
    -1, -1, +1, +1, -1, -1, +1, +1, -1, +1, -1, +1, -1, +1, +1,
    -1, -1, -1, +1, +1, -1, -1, +1, +1, -1, +1, +1, +1, +1, -1,
    -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,
};

} // namespace

const CodeMatrix& ecoc_matrix_10x15() {
    static const CodeMatrix table(10, 15,
                                  std::vector<std::int8_t>(kEcoc10x15, kEcoc10x15 + 150));
    return table;
}

CodeMatrix generate_ecoc_10x15() {
    constexpr int n = 10;
    // Candidate pool: all sign columns with class 0 fixed to +1 (this
    // canonical form rules out complementary duplicates), excluding the
    // constant column. Ordered by pattern value.
    std::vector<std::vector<std::int8_t>> candidates;
    for (int bits = 0; bits < (1 << (n - 1)); ++bits) {
        std::vector<std::int8_t> col(n);
        col[0] = 1;
        bool all_pos = true;
        for (int i = 1; i < n; ++i) {
            col[i] = (bits >> (i - 1)) & 1 ? 1 : -1;
            if (col[i] != 1) all_pos = false;
        }
        if (!all_pos) candidates.push_back(std::move(col));
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        int va = 0, vb = 0;
        for (int i = 0; i < n; ++i) {
            va |= (a[i] == 1) << i;
            vb |= (b[i] == 1) << i;
        }
        return va < vb;
    });

    constexpr int n_pairs = n * (n - 1) / 2;
    std::vector<int> pair_dist(n_pairs, 0);
    auto key_with = [&](const std::vector<std::int8_t>& col) {
        int min_d = std::numeric_limits<int>::max();
        int at_min = 0;
        int p = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b, ++p) {
                const int d = pair_dist[p] + (col[a] != col[b] ? 1 : 0);
                if (d < min_d) {
                    min_d = d;
                    at_min = 1;
                } else if (d == min_d) {
                    ++at_min;
                }
            }
        return std::pair<int, int>(min_d, -at_min);
    };

    // Greedy: at each step pick the column maximizing (min pairwise row
    // distance, fewest pairs at the minimum); ties -> lowest pattern value.
    std::vector<std::vector<std::int8_t>> chosen;
    std::vector<bool> used(candidates.size(), false);
    for (int step = 0; step < 15; ++step) {
        int best = -1;
        std::pair<int, int> best_key{-1, 0};
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (used[c]) continue;
            const auto key = key_with(candidates[c]);
            if (best < 0 || key > best_key) {
                best = static_cast<int>(c);
                best_key = key;
            }
        }
        used[best] = true;
        chosen.push_back(candidates[best]);
        int p = 0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b, ++p)
                if (candidates[best][a] != candidates[best][b]) ++pair_dist[p];
    }

    std::vector<std::int8_t> entries(static_cast<std::size_t>(n) * 15);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 15; ++j)
            entries[static_cast<std::size_t>(i) * 15 + j] = chosen[j][i];
    return CodeMatrix(n, 15, std::move(entries));
}

Dataset DichotomyDataset::materialize(const Dataset& source) const {
    std::vector<Image> images;
    std::vector<int> labels;
    images.reserve(sample_indices.size());
    labels.reserve(sample_indices.size());
    for (std::size_t i = 0; i < sample_indices.size(); ++i) {
        images.push_back(source.images()[sample_indices[i]]);
        labels.push_back(targets[i] > 0 ? 1 : 0);
    }
    return Dataset(std::move(images), std::move(labels), 2, "dichotomy");
}

DichotomyDataset derive_dichotomy(const Dataset& data, const CodeMatrix& matrix, int column) {
    if (column < 0 || column >= matrix.m_dichotomies())
        throw ConfigError("derive_dichotomy: column out of range");
    DichotomyDataset out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::int8_t code = matrix.at(data.labels()[i], column);
        if (code == 0) continue;
        out.sample_indices.push_back(i);
        out.targets.push_back(code);
    }
    return out;
}

DecodeResult hamming_decode(const CodeMatrix& matrix, const std::vector<double>& outputs) {
    if (outputs.size() != static_cast<std::size_t>(matrix.m_dichotomies()))
        throw DimensionError("hamming_decode: output length != dichotomy count");
    DecodeResult result;
    result.distances.resize(matrix.n_classes());
    int best = std::numeric_limits<int>::max();
    for (int cls = 0; cls < matrix.n_classes(); ++cls) {
        int d = 0;
        for (int j = 0; j < matrix.m_dichotomies(); ++j) {
            const std::int8_t code = matrix.at(cls, j);
            if (code == 0) continue;
            const int sign = outputs[j] < 0.0 ? -1 : 1; // exact 0 hardens to +1
            if (sign != code) ++d;
        }
        result.distances[cls] = d;
        if (d < best) {
            best = d;
            result.cls = cls;
            result.tie = false;
        } else if (d == best) {
            result.tie = true;
        }
    }
    return result;
}

DecodeResult soft_decode(const CodeMatrix& matrix, const std::vector<double>& outputs) {
    if (outputs.size() != static_cast<std::size_t>(matrix.m_dichotomies()))
        throw DimensionError("soft_decode: output length != dichotomy count");
    DecodeResult result;
    result.soft_distances.resize(matrix.n_classes());
    double best = std::numeric_limits<double>::max();
    for (int cls = 0; cls < matrix.n_classes(); ++cls) {
        double d = 0.0;
        for (int j = 0; j < matrix.m_dichotomies(); ++j) {
            const std::int8_t code = matrix.at(cls, j);
            if (code == 0) continue;
            d += std::abs(outputs[j] - code);
        }
        result.soft_distances[cls] = d;
        if (d < best) {
            best = d;
            result.cls = cls;
            result.tie = false;
        } else if (d == best) {
            result.tie = true;
        }
    }
    return result;
}

} // namespace mnet::codes
