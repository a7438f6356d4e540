#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sapfocs/similarity.hpp"

namespace sapfocs {

/// One agglomerative merge joining the clusters rooted at node_a and node_b.
/// Leaves are numbered 1..p; the k-th merge (k = 1..p-1) creates node p+k.
struct LinkageMerge {
    int node_a = 0;
    int node_b = 0;
    double height = 0.0;
};

struct LinkageTree {
    int leaf_count = 0;
    std::vector<LinkageMerge> merges;  // exactly leaf_count - 1, heights non-decreasing
};

/// Furthest-neighbour agglomeration: repeatedly merge the two clusters whose
/// maximum pairwise member distance is smallest. Equal linkage values are
/// resolved deterministically: the pair whose clusters carry the largest
/// leading (smallest-member) part index wins, then the smallest other one.
LinkageTree complete_linkage(const SymmetricMatrix& dist);

/// Undo the last (n_families - 1) merges; remaining components become families,
/// renumbered 1..N by smallest member index.
Partition cut_tree(const LinkageTree& tree, int n_families);

/// Default family count: one family per four parts, rounded up.
int default_family_count(int part_count);

enum class DendrogramFormat { newick, dot, json };

std::string export_dendrogram(const LinkageTree& tree, DendrogramFormat format);
/// String-keyed variant ("newick" | "dot" | "json"); rejects anything else.
std::string export_dendrogram(const LinkageTree& tree, std::string_view format);

/// CSV of (node_a, node_b, height) with heights printed to 6 decimals.
std::string linkage_csv(const LinkageTree& tree);

} // namespace sapfocs
