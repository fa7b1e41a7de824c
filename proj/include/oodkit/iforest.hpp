#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "oodkit/csv.hpp"
#include "oodkit/data.hpp"
#include "oodkit/random.hpp"

namespace oodkit {

/// Expected path length of an unsuccessful search in a binary search tree of
/// n points; normalizes isolation path lengths. Base cases c(0)=c(1)=0 and
/// c(2)=1 follow the reference implementation convention.
inline double expected_path_c(std::size_t n) {
    constexpr double kEulerGamma = 0.57721566490153286060;
    if (n <= 1) return 0.0;
    if (n == 2) return 1.0;
    double nd = static_cast<double>(n);
    return 2.0 * (std::log(nd - 1.0) + kEulerGamma) - 2.0 * (nd - 1.0) / nd;
}

struct IsolationForestParams {
    int n_trees = 100;
    int subsample = 256;  // effective sample size is min(subsample, n)
    std::uint64_t seed = 0;
};

/// One randomly built isolation tree, stored as a pre-order node list.
/// Internal nodes route x[feature] < split to left; leaves record how many
/// training points terminated there.
struct IsolationTree {
    struct Node {
        int feature = -1;
        double split = 0.0;
        int left = -1;
        int right = -1;
        int size = 0;

        bool is_leaf() const { return left < 0; }
    };

    std::vector<Node> nodes;

    double path_length(std::span<const double> x) const {
        int idx = 0;
        double edges = 0.0;
        while (!nodes[idx].is_leaf()) {
            const Node& node = nodes[idx];
            idx = x[node.feature] < node.split ? node.left : node.right;
            edges += 1.0;
        }
        return edges + expected_path_c(nodes[idx].size);
    }
};

class IsolationForest {
public:
    /// Builds n_trees trees, each on an independent subsample of size
    /// min(params.subsample, n) drawn without replacement. Node splits pick a
    /// feature uniformly at random and a split value uniform in the open
    /// (min, max) interval of that feature over the routed points; features
    /// with zero range are re-drawn up to d times before the node becomes a
    /// leaf. Recursion stops on single points, duplicate points, or depth
    /// ceil(log2 psi). Tree i uses its own generator seeded from
    /// mix_seed(seed, i), so the build is reproducible tree by tree.
    static IsolationForest fit(const std::vector<std::vector<double>>& points,
                               const IsolationForestParams& params = {}) {
        if (points.size() < 2) throw FitError("isolation forest: need at least 2 points");
        if (params.n_trees < 1) throw FitError("isolation forest: n_trees must be >= 1");
        if (params.subsample < 2) throw FitError("isolation forest: subsample must be >= 2");
        const std::size_t dim = points[0].size();
        for (const auto& p : points)
            if (p.size() != dim) throw FitError("isolation forest: inconsistent dimensions");

        IsolationForest forest;
        forest.subsample_ = std::min<std::size_t>(params.subsample, points.size());
        forest.seed_ = params.seed;
        forest.depth_limit_ =
            static_cast<int>(std::ceil(std::log2(static_cast<double>(forest.subsample_))));
        forest.trees_.resize(params.n_trees);

        for (int t = 0; t < params.n_trees; ++t) {
            std::mt19937_64 rng(mix_seed(params.seed, static_cast<std::uint64_t>(t)));
            auto subset = sample_without_replacement(points.size(), forest.subsample_, rng);
            build_node(forest.trees_[t], points, subset, 0, forest.depth_limit_, rng);
        }
        return forest;
    }

    double mean_path_length(std::span<const double> x) const {
        double sum = 0.0;
        for (const auto& tree : trees_) sum += tree.path_length(x);
        return sum / static_cast<double>(trees_.size());
    }

    /// Anomaly score s(x) = 2^(-E[h(x)] / c(psi)), in (0, 1]. A point whose
    /// mean path length equals c(psi) scores exactly 0.5.
    double anomaly_score(std::span<const double> x) const {
        return std::exp2(-mean_path_length(x) / expected_path_c(subsample_));
    }

    double anomaly_score(const ProbVector& p) const {
        return anomaly_score(std::span<const double>(p.values()));
    }

    const std::vector<IsolationTree>& trees() const { return trees_; }
    std::size_t subsample_size() const { return subsample_; }
    int depth_limit() const { return depth_limit_; }
    std::uint64_t seed() const { return seed_; }

    void save(std::ostream& out) const {
        out << "oodkit-iforest v1\n";
        out << "trees " << trees_.size() << " subsample " << subsample_ << " seed " << seed_
            << " depth_limit " << depth_limit_ << "\n";
        for (const auto& tree : trees_) {
            out << "tree " << tree.nodes.size() << "\n";
            for (const auto& node : tree.nodes) {
                if (node.is_leaf())
                    out << "l " << node.size << "\n";
                else
                    out << "s " << node.feature << " " << format_double(node.split) << "\n";
            }
        }
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ParseError(path + ": cannot open for writing");
        save(out);
    }

    static IsolationForest load(std::istream& in, const std::string& context = "iforest") {
        std::string header;
        std::getline(in, header);
        if (header != "oodkit-iforest v1")
            throw ParseError(context + ": unsupported forest format '" + header + "'");
        std::string word;
        std::size_t n_trees = 0;
        IsolationForest forest;
        in >> word >> n_trees >> word >> forest.subsample_ >> word >> forest.seed_ >> word >>
            forest.depth_limit_;
        if (!in) throw ParseError(context + ": bad forest header line");
        forest.trees_.resize(n_trees);
        for (auto& tree : forest.trees_) {
            std::size_t n_nodes = 0;
            in >> word >> n_nodes;
            if (!in || word != "tree") throw ParseError(context + ": bad tree header");
            tree.nodes.resize(n_nodes);
            for (auto& node : tree.nodes) {
                in >> word;
                if (word == "l") {
                    in >> node.size;
                } else if (word == "s") {
                    std::string value;
                    in >> node.feature >> value;
                    node.split = parse_double(value, context);
                } else {
                    throw ParseError(context + ": bad node tag '" + word + "'");
                }
            }
            if (!in) throw ParseError(context + ": truncated tree");
            link_preorder(tree, context);
        }
        return forest;
    }

    static IsolationForest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError(path + ": cannot open file");
        return load(in, path);
    }

private:
    IsolationForest() = default;

    static int build_node(IsolationTree& tree, const std::vector<std::vector<double>>& points,
                          const std::vector<std::size_t>& idx, int depth, int depth_limit,
                          std::mt19937_64& rng) {
        int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[node_index].size = static_cast<int>(idx.size());

        if (static_cast<int>(idx.size()) <= 1 || depth >= depth_limit) return node_index;

        const std::size_t dim = points[idx[0]].size();
        bool all_equal = true;
        for (std::size_t i = 1; i < idx.size() && all_equal; ++i)
            all_equal = points[idx[i]] == points[idx[0]];
        if (all_equal) return node_index;

        // Pick a usable feature; zero-range features are re-drawn up to d times.
        std::uniform_int_distribution<std::size_t> feature_dist(0, dim - 1);
        int feature = -1;
        double lo = 0.0, hi = 0.0;
        for (std::size_t attempt = 0; attempt < dim; ++attempt) {
            std::size_t f = feature_dist(rng);
            lo = std::numeric_limits<double>::infinity();
            hi = -lo;
            for (std::size_t i : idx) {
                lo = std::min(lo, points[i][f]);
                hi = std::max(hi, points[i][f]);
            }
            if (hi > lo) {
                feature = static_cast<int>(f);
                break;
            }
        }
        if (feature < 0) return node_index;

        std::uniform_real_distribution<double> split_dist(lo, hi);
        double split;
        do {
            split = split_dist(rng);
        } while (!(split > lo && split < hi));

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx)
            (points[i][feature] < split ? left_idx : right_idx).push_back(i);

        tree.nodes[node_index].feature = feature;
        tree.nodes[node_index].split = split;
        int left = build_node(tree, points, left_idx, depth + 1, depth_limit, rng);
        int right = build_node(tree, points, right_idx, depth + 1, depth_limit, rng);
        tree.nodes[node_index].left = left;
        tree.nodes[node_index].right = right;
        return node_index;
    }

    // Reconstructs child indices of a pre-order node list: left child follows
    // the parent immediately, right child follows the left subtree.
    static void link_preorder(IsolationTree& tree, const std::string& context) {
        std::size_t cursor = 0;
        link_subtree(tree, cursor, context);
        if (cursor != tree.nodes.size()) throw ParseError(context + ": dangling nodes in tree");
    }

    static int link_subtree(IsolationTree& tree, std::size_t& cursor, const std::string& context) {
        if (cursor >= tree.nodes.size()) throw ParseError(context + ": truncated pre-order list");
        int index = static_cast<int>(cursor++);
        if (tree.nodes[index].feature >= 0) {
            tree.nodes[index].left = link_subtree(tree, cursor, context);
            tree.nodes[index].right = link_subtree(tree, cursor, context);
        }
        return index;
    }

    std::vector<IsolationTree> trees_;
    std::size_t subsample_ = 0;
    int depth_limit_ = 0;
    std::uint64_t seed_ = 0;
};

}  // namespace oodkit
