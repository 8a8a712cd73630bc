#pragma once

#include "mnet/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mnet::codes {

// n_classes x m_dichotomies signed code table. Entries in {-1,+1} for
// OVA/ECOC, {-1,0,+1} for OVO (0 = class unused by that dichotomy).
class CodeMatrix {
public:
    CodeMatrix(int n_classes, int m_dichotomies, std::vector<std::int8_t> entries);

    int n_classes() const { return n_classes_; }
    int m_dichotomies() const { return m_; }
    std::int8_t at(int cls, int dichotomy) const {
        return entries_[static_cast<std::size_t>(cls) * m_ + dichotomy];
    }

    // Pairwise row Hamming distance over positions where both entries are
    // nonzero.
    int row_distance(int a, int b) const;
    int min_row_distance() const;

    std::string to_csv() const;

private:
    int n_classes_;
    int m_;
    std::vector<std::int8_t> entries_;
};

// +1 on the diagonal, -1 elsewhere (n x n).
CodeMatrix ova_matrix(int n_classes);

// One column per pair (a,b), a<b: +1 at a, -1 at b, 0 elsewhere.
CodeMatrix ovo_matrix(int n_classes);

// The pairs (a,b) in ovo_matrix column order.
std::vector<std::pair<int, int>> ovo_pairs(int n_classes);

// Canonical 10-class, 15-column code. The table is an embedded constant;
// generate_ecoc_10x15() rebuilds it from the exhaustive column pool and is
// self-tested against the constant.
const CodeMatrix& ecoc_matrix_10x15();
CodeMatrix generate_ecoc_10x15();

// Binary problem induced by one code column: indices into the source
// dataset plus +/-1 targets.
struct DichotomyDataset {
    std::vector<std::size_t> sample_indices;
    std::vector<std::int8_t> targets;

    // Materializes a 2-class Dataset (target -1 -> class 0, +1 -> class 1).
    Dataset materialize(const Dataset& source) const;
};

DichotomyDataset derive_dichotomy(const Dataset& data, const CodeMatrix& matrix, int column);

struct DecodeResult {
    int cls = 0;
    std::vector<int> distances; // hamming_decode; empty for soft
    std::vector<double> soft_distances;
    bool tie = false;
};

// Hardened minimum-Hamming decoding: sign(output) vs codeword per column
// (exact 0 hardens to +1), zero code entries skipped. Ties -> lowest class.
DecodeResult hamming_decode(const CodeMatrix& matrix, const std::vector<double>& outputs);

// L1 distance between raw outputs and codewords; not the default.
DecodeResult soft_decode(const CodeMatrix& matrix, const std::vector<double>& outputs);

} // namespace mnet::codes
