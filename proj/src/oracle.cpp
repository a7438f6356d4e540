#include "sapfocs/oracle.hpp"

#include <limits>
#include <string>

#include "sapfocs/errors.hpp"

namespace sapfocs {

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > kMax - b ? kMax : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kMax / b ? kMax : a * b;
}

} // namespace

std::uint64_t stirling2(int p, int n) {
    if (p < 0 || n < 0) throw validation_error("stirling2 arguments must be non-negative");
    if (n > p) return 0;
    if (n == 0) return p == 0 ? 1 : 0;
    // S(i,j) = j*S(i-1,j) + S(i-1,j-1), one rolling row
    std::vector<std::uint64_t> row(n + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= p; ++i) {
        for (int j = std::min(i, n); j >= 1; --j)
            row[j] = sat_add(sat_mul(static_cast<std::uint64_t>(j), row[j]), row[j - 1]);
        row[0] = 0;
    }
    return row[n];
}

PartitionEnumerator::PartitionEnumerator(int p, int n) : p_(p), n_(n) {
    if (p < 1) throw validation_error("enumeration needs at least 1 part");
    if (n < 1 || n > p)
        throw validation_error("family count " + std::to_string(n) + " outside [1.." +
                               std::to_string(p) + "]");
    rgs_.assign(p, 0);
    maxp_.assign(p, 0);
}

bool PartitionEnumerator::advance() {
    for (int i = p_ - 1; i >= 1; --i) {
        int limit = std::min(maxp_[i - 1] + 1, n_ - 1);
        if (rgs_[i] < limit) {
            ++rgs_[i];
            maxp_[i] = std::max(maxp_[i - 1], rgs_[i]);
            for (int k = i + 1; k < p_; ++k) {
                rgs_[k] = 0;
                maxp_[k] = maxp_[k - 1];
            }
            return true;
        }
    }
    return false;
}

bool PartitionEnumerator::next(Partition& out) {
    if (done_) return false;
    if (fresh_) {
        fresh_ = false;
        if (!block_count_ok() && !advance_to_valid()) return false;
    } else if (!advance_to_valid()) {
        return false;
    }
    out.n_families = n_;
    out.assignment.resize(p_);
    for (int i = 0; i < p_; ++i) out.assignment[i] = rgs_[i] + 1;
    ++count_;
    return true;
}

bool PartitionEnumerator::advance_to_valid() {
    while (advance()) {
        if (block_count_ok()) return true;
    }
    done_ = true;
    return false;
}

OracleResult brute_force_optimum(const SymmetricMatrix& sim, int n, std::uint64_t cap) {
    if (sim.kind() != MatrixKind::similarity)
        throw validation_error("oracle expects a similarity matrix");
    const int p = sim.size();
    const std::uint64_t total = stirling2(p, n);
    if (total > cap) {
        std::string count_str = total == kMax ? "more than 18446744073709551614"
                                              : std::to_string(total);
        throw cap_error("exhaustive search needs " + count_str +
                        " partitions of " + std::to_string(p) + " parts into " +
                        std::to_string(n) + " families, above the cap of " +
                        std::to_string(cap));
    }
    PartitionEnumerator en(p, n);
    OracleResult result;
    Partition cand;
    bool first = true;
    while (en.next(cand)) {
        double f = objective(cand, sim);
        if (first || f > result.objective) {
            first = false;
            result.objective = f;
            result.best = cand;
        }
    }
    result.enumerated = en.count();
    return result;
}

OracleResult brute_force_optimum(const PartCodeMatrix& matrix, int n, std::uint64_t cap) {
    return brute_force_optimum(similarity_matrix(matrix), n, cap);
}

} // namespace sapfocs
