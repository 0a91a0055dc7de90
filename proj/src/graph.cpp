#include "mixedscore/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <string_view>

namespace mixedscore {

Graph::Graph(std::size_t n, std::span<const Edge> edges, std::vector<std::int64_t> labels)
    : n_(n), labels_(std::move(labels)) {
    if (n_ == 0) throw ValidationError("graph must have at least one node");
    if (labels_.empty()) {
        labels_.resize(n_);
        std::iota(labels_.begin(), labels_.end(), std::int64_t{0});
    } else if (labels_.size() != n_) {
        throw ValidationError("label count " + std::to_string(labels_.size()) + " does not match n = " +
                              std::to_string(n_));
    }

    edges_.reserve(edges.size());
    for (auto [i, j] : edges) {
        if (i >= n_ || j >= n_)
            throw ValidationError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                  ") references a node outside [0, " + std::to_string(n_) + ")");
        if (i == j) throw ValidationError("self-loop on node " + std::to_string(labels_[i]));
        if (i > j) std::swap(i, j);
        edges_.emplace_back(i, j);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    offsets_.assign(n_ + 1, 0);
    for (const auto& [i, j] : edges_) {
        ++offsets_[i + 1];
        ++offsets_[j + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [i, j] : edges_) {
        adjacency_[cursor[i]++] = j;
        adjacency_[cursor[j]++] = i;
    }
    for (std::size_t i = 0; i < n_; ++i)
        std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
}

std::span<const std::size_t> Graph::neighbors(std::size_t i) const {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

int Graph::operator()(std::size_t i, std::size_t j) const {
    const auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j) ? 1 : 0;
}

DegreeVector degrees(const Graph& g) {
    DegreeVector out;
    const auto n = static_cast<Eigen::Index>(g.size());
    out.d.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.d(i) = static_cast<int>(g.degree(i));
    out.max = out.d.maxCoeff();
    out.min = out.d.minCoeff();
    return out;
}

double default_tau(const DegreeVector& d) {
    return 0.1 * (static_cast<double>(d.max) + static_cast<double>(d.min)) / 2.0;
}

Graph largest_component(const Graph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> component(n, n);
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (component[s] != n) continue;
        const std::size_t id = sizes.size();
        sizes.push_back(0);
        component[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            ++sizes[id];
            for (auto w : g.neighbors(v)) {
                if (component[w] == n) {
                    component[w] = id;
                    stack.push_back(w);
                }
            }
        }
    }
    // max_element returns the first maximum, i.e. the component found first.
    const auto best = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    std::vector<std::size_t> remap(n, n);
    std::vector<std::int64_t> labels;
    for (std::size_t v = 0; v < n; ++v) {
        if (component[v] == best) {
            remap[v] = labels.size();
            labels.push_back(g.labels()[v]);
        }
    }
    std::vector<Graph::Edge> edges;
    for (const auto& [i, j] : g.edges())
        if (component[i] == best) edges.emplace_back(remap[i], remap[j]);
    const std::size_t kept = labels.size();
    return Graph(kept, edges, std::move(labels));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool next_token(std::string_view& rest, std::string_view& token) {
    const auto start = rest.find_first_not_of(" \t\r\n");
    if (start == std::string_view::npos) return false;
    rest.remove_prefix(start);
    const auto end = rest.find_first_of(" \t\r\n");
    token = rest.substr(0, end);
    rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
    return true;
}

std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError("expected a nonnegative integer node id, got '" + std::string(token) + "'", line_no);
    return value;
}

}  // namespace

Graph load_edge_list(std::istream& in, Indexing indexing, std::optional<std::size_t> node_count) {
    const std::uint64_t base = indexing == Indexing::OneBased ? 1 : 0;
    std::vector<Graph::Edge> edges;
    std::uint64_t max_id = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest = trim(line);
        if (rest.empty() || rest.front() == '#' || rest.front() == '%') continue;
        std::string_view a, b, extra;
        if (!next_token(rest, a) || !next_token(rest, b) || next_token(rest, extra))
            throw ParseError("expected exactly two node ids", line_no);
        std::uint64_t u = parse_id(a, line_no);
        std::uint64_t v = parse_id(b, line_no);
        if (u < base || v < base) throw ParseError("node id 0 is invalid with one-based indexing", line_no);
        u -= base;
        v -= base;
        if (u == v) throw ValidationError("line " + std::to_string(line_no) + ": self-loop on node " +
                                          std::to_string(u + base));
        max_id = std::max({max_id, u, v});
        edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    }
    if (edges.empty()) throw ValidationError("edge list contains no edges");

    std::size_t n = static_cast<std::size_t>(max_id) + 1;
    if (node_count) {
        if (*node_count < n)
            throw ValidationError("node count override " + std::to_string(*node_count) +
                                  " is smaller than 1 + largest node id (" + std::to_string(n) + ")");
        n = *node_count;
    }
    std::vector<std::int64_t> labels(n);
    std::iota(labels.begin(), labels.end(), static_cast<std::int64_t>(base));
    return Graph(n, edges, std::move(labels));
}

Graph load_edge_list(const std::string& path, Indexing indexing, std::optional<std::size_t> node_count) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open edge list '" + path + "'");
    return load_edge_list(in, indexing, node_count);
}

}  // namespace mixedscore
