#ifndef MIXEDSCORE_GRAPH_HPP
#define MIXEDSCORE_GRAPH_HPP

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mixedscore/errors.hpp"

namespace mixedscore {

/// Undirected, unweighted, loop-free graph on nodes 0..n-1.
///
/// Each internal node keeps the label it had in the source data so results
/// can be reported against the original ids. Immutable after construction.
class Graph {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    /// Builds the graph from an arbitrary list of node pairs. Pairs are
    /// symmetrized and deduplicated; a pair (i, i) or an id >= n throws
    /// ValidationError. `labels` defaults to 0..n-1.
    Graph(std::size_t n, std::span<const Edge> edges, std::vector<std::int64_t> labels = {});

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Unique edges with first < second, sorted lexicographically.
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Sorted neighbor ids of node i.
    std::span<const std::size_t> neighbors(std::size_t i) const;

    std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

    /// Adjacency entry A(i, j) in {0, 1}.
    int operator()(std::size_t i, std::size_t j) const;

    const std::vector<std::int64_t>& labels() const noexcept { return labels_; }

    /// Dense 0/1 adjacency matrix.
    template <typename Scalar = double>
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> adjacency() const {
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
        for (const auto& [i, j] : edges_) a(i, j) = a(j, i) = Scalar(1);
        return a;
    }

private:
    std::size_t n_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> adjacency_;
    std::vector<std::int64_t> labels_;
};

struct DegreeVector {
    Eigen::VectorXi d;
    int max = 0;
    int min = 0;
};

DegreeVector degrees(const Graph& g);

/// 0.1 * (d_max + d_min) / 2.
double default_tau(const DegreeVector& d);

/// Subgraph induced by the largest connected component (ties go to the
/// component containing the smallest node id). Original labels carry over.
Graph largest_component(const Graph& g);

enum class Indexing { ZeroBased, OneBased };

/// Reads a whitespace-separated edge list. Blank lines and lines starting
/// with '#' or '%' are skipped. Node i of the result is source id i (or i+1
/// when one-based); n is 1 + the largest id unless `node_count` is given.
Graph load_edge_list(std::istream& in, Indexing indexing = Indexing::ZeroBased,
                     std::optional<std::size_t> node_count = std::nullopt);

Graph load_edge_list(const std::string& path, Indexing indexing = Indexing::ZeroBased,
                     std::optional<std::size_t> node_count = std::nullopt);

template <typename Scalar>
struct RegularizedLaplacian {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix;
    Scalar tau;
};

/// L_tau = D_tau^{-1/2} A D_tau^{-1/2} with D_tau = D + tau I.
///
/// tau defaults to default_tau(degrees(g)). With tau = 0 an isolated node
/// would divide by zero, so that case throws and names the node.
template <typename Scalar = double>
RegularizedLaplacian<Scalar> regularized_laplacian(const Graph& g,
                                                   std::optional<Scalar> tau = std::nullopt) {
    const auto deg = degrees(g);
    const Scalar t = tau ? *tau : static_cast<Scalar>(default_tau(deg));
    if (!(t >= Scalar(0)))
        throw ValidationError("regularizer tau must be nonnegative, got " + std::to_string(double(t)));
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> shifted(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        shifted(i) = static_cast<Scalar>(deg.d(i)) + t;
        if (shifted(i) == Scalar(0))
            throw ValidationError("tau = 0 with isolated node " + std::to_string(g.labels()[i]) +
                                  " (internal id " + std::to_string(i) + ") divides by zero");
    }
    RegularizedLaplacian<Scalar> out{Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n), t};
    for (const auto& [i, j] : g.edges()) {
        using std::sqrt;
        const Scalar v = Scalar(1) / sqrt(shifted(i) * shifted(j));
        out.matrix(i, j) = v;
        out.matrix(j, i) = v;
    }
    return out;
}

}  // namespace mixedscore

#endif  // MIXEDSCORE_GRAPH_HPP
