#include "sapfocs/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sapfocs/errors.hpp"

namespace sapfocs {

SymmetricMatrix::SymmetricMatrix(int size, MatrixKind kind, double diagonal)
    : size_(size), kind_(kind), values_(static_cast<std::size_t>(size) * size, 0.0) {
    if (size < 1) throw validation_error("matrix size must be positive");
    for (int i = 0; i < size; ++i) values_[idx(i, i)] = diagonal;
}

std::string SymmetricMatrix::to_csv() const {
    std::ostringstream out;
    out << (kind_ == MatrixKind::similarity ? "similarity" : "distance");
    for (int j = 0; j < size_; ++j) out << ",p" << (j + 1);
    out << '\n';
    char buf[32];
    for (int i = 0; i < size_; ++i) {
        out << 'p' << (i + 1);
        for (int j = 0; j < size_; ++j) {
            std::snprintf(buf, sizeof buf, "%.6f", (*this)(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string SymmetricMatrix::to_json() const {
    nlohmann::json j;
    j["kind"] = kind_ == MatrixKind::similarity ? "similarity" : "distance";
    j["size"] = size_;
    auto& rows = j["values"] = nlohmann::json::array();
    for (int i = 0; i < size_; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int jj = 0; jj < size_; ++jj) row.push_back((*this)(i, jj));
        rows.push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

std::vector<std::vector<int>> Partition::families() const {
    std::vector<std::vector<int>> fams(n_families);
    for (int part = 0; part < size(); ++part) {
        int f = assignment[part];
        if (f < 1 || f > n_families)
            throw validation_error("family index " + std::to_string(f) + " of part " +
                                   std::to_string(part + 1) + " outside [1.." +
                                   std::to_string(n_families) + "]");
        fams[f - 1].push_back(part);
    }
    return fams;
}

Partition Partition::canonical() const {
    std::vector<int> relabel(n_families + 1, 0);
    int next = 0;
    Partition out;
    out.n_families = n_families;
    out.assignment.reserve(assignment.size());
    for (int f : assignment) {
        if (f < 1 || f > n_families)
            throw validation_error("family index out of range in partition");
        if (relabel[f] == 0) relabel[f] = ++next;
        out.assignment.push_back(relabel[f]);
    }
    return out;
}

double attribute_similarity(int b_ik, int b_jk, double range) {
    if (!(range > 0.0))
        throw validation_error("attribute range must be positive, got " +
                               std::to_string(range));
    return 1.0 - std::abs(b_ik - b_jk) / range;
}

double pairwise_similarity(std::span<const int> row_i, std::span<const int> row_j,
                           std::span<const double> ranges) {
    if (row_i.size() != row_j.size() || row_i.size() != ranges.size())
        throw validation_error("row/range length mismatch: " + std::to_string(row_i.size()) +
                               " vs " + std::to_string(row_j.size()) + " vs " +
                               std::to_string(ranges.size()));
    if (row_i.empty()) throw validation_error("empty code rows");
    // Accumulated in attribute order; the clustering tie rules depend on this
    // exact evaluation sequence.
    double sum = 0.0;
    for (std::size_t k = 0; k < row_i.size(); ++k) {
        double r = ranges[k];
        if (r == 0.0) {
            sum += 1.0;
        } else {
            sum += attribute_similarity(row_i[k], row_j[k], r);
        }
    }
    return sum / static_cast<double>(row_i.size());
}

std::vector<double> default_ranges(int attribute_count) {
    return std::vector<double>(attribute_count, 9.0);
}

std::vector<double> column_ranges(const PartCodeMatrix& m) {
    validate(m);
    std::vector<double> out(m.cols());
    for (int c = 0; c < m.cols(); ++c) {
        int lo = m.codes[0][c], hi = m.codes[0][c];
        for (int r = 1; r < m.rows(); ++r) {
            lo = std::min(lo, m.codes[r][c]);
            hi = std::max(hi, m.codes[r][c]);
        }
        out[c] = static_cast<double>(hi - lo);
    }
    return out;
}

SymmetricMatrix similarity_matrix(const PartCodeMatrix& m, std::span<const double> ranges) {
    validate(m);
    for (double r : ranges)
        if (r < 0.0) throw validation_error("negative attribute range");
    SymmetricMatrix s(m.rows(), MatrixKind::similarity, 1.0);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.rows(); ++j)
            s.set(i, j, pairwise_similarity(m.codes[i], m.codes[j], ranges));
    return s;
}

SymmetricMatrix similarity_matrix(const PartCodeMatrix& m) {
    return similarity_matrix(m, default_ranges(m.cols()));
}

SymmetricMatrix distance_matrix(const SymmetricMatrix& sim) {
    if (sim.kind() != MatrixKind::similarity)
        throw validation_error("distance_matrix expects a similarity matrix");
    SymmetricMatrix d(sim.size(), MatrixKind::distance, 0.0);
    for (int i = 0; i < sim.size(); ++i)
        for (int j = i + 1; j < sim.size(); ++j)
            d.set(i, j, 1.0 - sim(i, j));
    return d;
}

double family_score(std::span<const int> members, const SymmetricMatrix& sim) {
    if (members.empty()) throw validation_error("family_score of empty member set");
    std::vector<int> ms(members.begin(), members.end());
    std::sort(ms.begin(), ms.end());
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < ms.size(); ++a) {
        if (ms[a] < 0 || ms[a] >= sim.size())
            throw validation_error("member index out of range");
        if (a > 0 && ms[a] == ms[a - 1]) throw validation_error("duplicate member index");
        for (std::size_t b = a + 1; b < ms.size(); ++b) {
            sum += sim(ms[a], ms[b]);
            ++pairs;
        }
    }
    return sum / (0.001 + static_cast<double>(pairs));
}

double objective(const Partition& p, const SymmetricMatrix& sim) {
    if (p.size() != sim.size())
        throw validation_error("partition covers " + std::to_string(p.size()) +
                               " parts but matrix has " + std::to_string(sim.size()));
    double total = 0.0;
    for (const auto& fam : p.families())
        if (!fam.empty()) total += family_score(fam, sim);
    return total;
}

} // namespace sapfocs
