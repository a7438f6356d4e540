#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sapfocs/similarity.hpp"

namespace sapfocs {

/// Count of set partitions of p elements into exactly n nonempty blocks,
/// saturating at UINT64_MAX on overflow.
std::uint64_t stirling2(int p, int n);

/// Streams every partition of p parts into exactly n nonempty families, each
/// one exactly once, in restricted-growth-string order. The yielded Partition
/// uses canonical labels (block of part 0 is family 1, and so on).
class PartitionEnumerator {
public:
    PartitionEnumerator(int p, int n);

    /// Advance to the next partition; false once exhausted.
    bool next(Partition& out);

    std::uint64_t count() const { return count_; }  // partitions yielded so far

private:
    int p_;
    int n_;
    bool done_ = false;
    bool fresh_ = true;
    std::vector<int> rgs_;   // rgs_[i] in [0, min(i, n-1)]
    std::vector<int> maxp_;  // running prefix maximum of rgs_
    std::uint64_t count_ = 0;

    bool block_count_ok() const { return maxp_[p_ - 1] + 1 == n_; }
    bool advance();
    bool advance_to_valid();
};

struct OracleResult {
    Partition best;
    double objective = 0.0;
    std::uint64_t enumerated = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Exact maximizer of objective() over all partitions into n families.
/// Throws cap_error (carrying the computed partition count) when the search
/// space exceeds the cap. Ties keep the first partition in enumeration order.
OracleResult brute_force_optimum(const PartCodeMatrix& matrix, int n,
                                 std::uint64_t cap = kDefaultEnumerationCap);

OracleResult brute_force_optimum(const SymmetricMatrix& sim, int n,
                                 std::uint64_t cap = kDefaultEnumerationCap);

} // namespace sapfocs
