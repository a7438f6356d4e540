#include "sapfocs/clustering.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sapfocs/errors.hpp"

namespace sapfocs {

namespace {

// "%.6f" with trailing zeros (and a bare trailing dot) removed: 0.25, 0.08642, 0.
std::string trimmed6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
    }
    return s;
}

} // namespace

LinkageTree complete_linkage(const SymmetricMatrix& dist) {
    if (dist.kind() != MatrixKind::distance)
        throw validation_error("complete_linkage expects a distance matrix");
    const int p = dist.size();
    if (p < 2) throw validation_error("clustering needs at least 2 parts");

    std::vector<double> d(static_cast<std::size_t>(p) * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) d[static_cast<std::size_t>(i) * p + j] = dist(i, j);

    std::vector<bool> alive(p, true);
    std::vector<int> rep(p);   // smallest member part index of the cluster in this slot
    std::vector<int> node(p);  // current tree node id of the cluster in this slot
    for (int i = 0; i < p; ++i) rep[i] = i, node[i] = i + 1;

    LinkageTree tree;
    tree.leaf_count = p;
    tree.merges.reserve(p - 1);

    for (int step = 0; step < p - 1; ++step) {
        double best = 2.0;
        int bi = -1, bj = -1;
        for (int i = 0; i < p; ++i) {
            if (!alive[i]) continue;
            for (int j = i + 1; j < p; ++j) {
                if (!alive[j]) continue;
                double v = d[static_cast<std::size_t>(i) * p + j];
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                } else if (v == best) {
                    // Tie: largest max-rep wins, then smallest min-rep.
                    int tmax = std::max(rep[i], rep[j]), tmin = std::min(rep[i], rep[j]);
                    int cmax = std::max(rep[bi], rep[bj]), cmin = std::min(rep[bi], rep[bj]);
                    if (tmax > cmax || (tmax == cmax && tmin < cmin)) {
                        bi = i;
                        bj = j;
                    }
                }
            }
        }
        tree.merges.push_back({std::min(node[bi], node[bj]), std::max(node[bi], node[bj]), best});
        // Fold slot bj into slot bi (complete linkage: keep the larger distance).
        for (int k = 0; k < p; ++k) {
            if (!alive[k] || k == bi || k == bj) continue;
            double v = std::max(d[static_cast<std::size_t>(bi) * p + k],
                                d[static_cast<std::size_t>(bj) * p + k]);
            d[static_cast<std::size_t>(bi) * p + k] = v;
            d[static_cast<std::size_t>(k) * p + bi] = v;
        }
        alive[bj] = false;
        rep[bi] = std::min(rep[bi], rep[bj]);
        node[bi] = p + 1 + step;
    }
    return tree;
}

Partition cut_tree(const LinkageTree& tree, int n_families) {
    const int p = tree.leaf_count;
    if (n_families < 1 || n_families > p)
        throw validation_error("family count " + std::to_string(n_families) +
                               " outside [1.." + std::to_string(p) + "]");
    // Child links: applying the first p - n merges leaves n components.
    std::vector<int> parent(2 * p, 0);  // node id -> merged-into node id (0 = root of component)
    for (int k = 0; k < p - n_families; ++k) {
        parent[tree.merges[k].node_a] = p + 1 + k;
        parent[tree.merges[k].node_b] = p + 1 + k;
    }
    Partition out;
    out.n_families = n_families;
    out.assignment.assign(p, 0);
    std::vector<int> family_of_node(2 * p, 0);
    int next_family = 0;
    for (int leaf = 1; leaf <= p; ++leaf) {
        int n = leaf;
        while (parent[n] != 0) n = parent[n];
        if (family_of_node[n] == 0) family_of_node[n] = ++next_family;
        out.assignment[leaf - 1] = family_of_node[n];
    }
    // leaves are scanned in index order, so labels are already canonical
    return out;
}

int default_family_count(int part_count) {
    if (part_count < 1) throw validation_error("part count must be positive");
    return (part_count + 3) / 4;
}

namespace {

struct NodeView {
    const LinkageTree& tree;
    int leaf_count;

    bool is_leaf(int id) const { return id <= leaf_count; }
    const LinkageMerge& merge_of(int id) const { return tree.merges[id - leaf_count - 1]; }
    double height(int id) const { return is_leaf(id) ? 0.0 : merge_of(id).height; }

    void newick(int id, double parent_height, std::ostream& out) const {
        if (is_leaf(id)) {
            out << id;
        } else {
            const auto& m = merge_of(id);
            out << '(';
            newick(m.node_a, m.height, out);
            out << ',';
            newick(m.node_b, m.height, out);
            out << ')';
        }
        out << ':' << trimmed6(parent_height - height(id));
    }

    nlohmann::json json(int id) const {
        nlohmann::json j;
        j["node"] = id;
        if (is_leaf(id)) {
            j["leaf"] = id;
        } else {
            const auto& m = merge_of(id);
            j["height"] = m.height;
            j["children"] = nlohmann::json::array({json(m.node_a), json(m.node_b)});
        }
        return j;
    }
};

} // namespace

std::string export_dendrogram(const LinkageTree& tree, DendrogramFormat format) {
    if (tree.leaf_count < 2 || tree.merges.size() != static_cast<std::size_t>(tree.leaf_count) - 1)
        throw validation_error("malformed linkage tree");
    NodeView view{tree, tree.leaf_count};
    int root = 2 * tree.leaf_count - 1;
    switch (format) {
        case DendrogramFormat::newick: {
            std::ostringstream out;
            const auto& m = tree.merges.back();
            out << '(';
            view.newick(m.node_a, m.height, out);
            out << ',';
            view.newick(m.node_b, m.height, out);
            out << ");";
            return out.str();
        }
        case DendrogramFormat::dot: {
            std::ostringstream out;
            out << "graph dendrogram {\n";
            for (int leaf = 1; leaf <= tree.leaf_count; ++leaf)
                out << "  n" << leaf << " [shape=box,label=\"" << leaf << "\"];\n";
            for (std::size_t k = 0; k < tree.merges.size(); ++k) {
                int id = tree.leaf_count + 1 + static_cast<int>(k);
                const auto& m = tree.merges[k];
                out << "  n" << id << " [label=\"" << trimmed6(m.height) << "\"];\n";
                out << "  n" << id << " -- n" << m.node_a << ";\n";
                out << "  n" << id << " -- n" << m.node_b << ";\n";
            }
            out << "}\n";
            return out.str();
        }
        case DendrogramFormat::json:
            return view.json(root).dump(2) + "\n";
    }
    throw validation_error("unknown dendrogram format");
}

std::string export_dendrogram(const LinkageTree& tree, std::string_view format) {
    if (format == "newick") return export_dendrogram(tree, DendrogramFormat::newick);
    if (format == "dot") return export_dendrogram(tree, DendrogramFormat::dot);
    if (format == "json") return export_dendrogram(tree, DendrogramFormat::json);
    throw validation_error("unknown dendrogram format '" + std::string(format) +
                           "' (expected newick, dot or json)");
}

std::string linkage_csv(const LinkageTree& tree) {
    std::ostringstream out;
    out << "node_a,node_b,height\n";
    char buf[40];
    for (const auto& m : tree.merges) {
        std::snprintf(buf, sizeof buf, "%.6f", m.height);
        out << m.node_a << ',' << m.node_b << ',' << buf << '\n';
    }
    return out.str();
}

} // namespace sapfocs
