#pragma once

#include <span>
#include <string>
#include <vector>

#include "sapfocs/dataset.hpp"

namespace sapfocs {

enum class MatrixKind { similarity, distance };

/// Dense symmetric matrix over parts. kind=similarity has a unit diagonal,
/// kind=distance a zero diagonal; all entries lie in [0, 1].
class SymmetricMatrix {
public:
    SymmetricMatrix(int size, MatrixKind kind, double diagonal);

    int size() const { return size_; }
    MatrixKind kind() const { return kind_; }

    double operator()(int i, int j) const { return values_[idx(i, j)]; }
    void set(int i, int j, double v) {
        values_[idx(i, j)] = v;
        values_[idx(j, i)] = v;
    }

    /// CSV with a header row/column of part indices, entries printed to 6 decimals.
    std::string to_csv() const;
    std::string to_json() const;

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * size_ + j;
    }
    int size_;
    MatrixKind kind_;
    std::vector<double> values_;
};

/// Assignment of each part (0-based position) to a family index in [1..n_families].
struct Partition {
    std::vector<int> assignment;
    int n_families = 0;

    int size() const { return static_cast<int>(assignment.size()); }
    /// Families as sorted member lists (0-based part indices), ordered by smallest member.
    std::vector<std::vector<int>> families() const;
    /// Relabel families by smallest member index (family of part 0 becomes 1, ...).
    Partition canonical() const;

    bool operator==(const Partition&) const = default;
};

/// Similarity of two digits on one attribute: 1 - |a - b| / range. Requires range > 0.
double attribute_similarity(int b_ik, int b_jk, double range);

/// Mean attribute similarity of two code rows. A zero range marks a constant
/// column and contributes similarity 1; negative ranges are rejected.
double pairwise_similarity(std::span<const int> row_i, std::span<const int> row_j,
                           std::span<const double> ranges);

/// The fixed digit span 0..9 gives every attribute range 9.
std::vector<double> default_ranges(int attribute_count);

/// Observed per-column ranges (max - min) of a dataset; constant columns give 0,
/// which pairwise_similarity treats as "identical".
std::vector<double> column_ranges(const PartCodeMatrix& m);

SymmetricMatrix similarity_matrix(const PartCodeMatrix& m, std::span<const double> ranges);
SymmetricMatrix similarity_matrix(const PartCodeMatrix& m);  // default ranges

/// Elementwise 1 - S. Input must be kind=similarity.
SymmetricMatrix distance_matrix(const SymmetricMatrix& sim);

/// Family quality: sum of in-family pairwise similarities over (0.001 + pair count).
/// A singleton family scores 0. Members are 0-based part indices.
double family_score(std::span<const int> members, const SymmetricMatrix& sim);

/// Sum of family scores over all nonempty families; this is the quantity the
/// annealer maximizes. Empty families contribute 0.
double objective(const Partition& p, const SymmetricMatrix& sim);

} // namespace sapfocs
