#include "ctqw/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "ctqw/rng.hpp"

namespace ctqw {

std::string to_string(GraphModel m) {
    switch (m) {
        case GraphModel::erdos_renyi: return "erdos_renyi";
        case GraphModel::random_regular: return "random_regular";
        case GraphModel::complete: return "complete";
        case GraphModel::custom: return "custom";
    }
    throw std::logic_error("unknown GraphModel");
}

GraphModel graph_model_from_string(const std::string& s) {
    if (s == "erdos_renyi") return GraphModel::erdos_renyi;
    if (s == "random_regular") return GraphModel::random_regular;
    if (s == "complete") return GraphModel::complete;
    if (s == "custom") return GraphModel::custom;
    throw std::invalid_argument("model: unknown graph model '" + s + "'");
}

int Graph::degree(int v) const {
    return static_cast<int>(adjacency.row(v).sum());
}

Eigen::VectorXd Graph::degrees() const {
    return adjacency.rowwise().sum();
}

std::size_t Graph::edge_count() const {
    return static_cast<std::size_t>(adjacency.sum() / 2.0 + 0.5);
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adjacency(i, j) != 0.0) out.emplace_back(i, j);
    return out;
}

std::vector<int> Graph::neighbors(int v) const {
    std::vector<int> out;
    for (int u = 0; u < n; ++u)
        if (adjacency(v, u) != 0.0) out.push_back(u);
    return out;
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n: vertex count must be >= 1");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("p: edge probability must be in [0, 1]");
    Graph g;
    g.n = n;
    g.model = GraphModel::erdos_renyi;
    g.seed = seed;
    g.param = p;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    Rng rng(seed);
    // Fixed draw order (row-major upper triangle) pins the sample to the seed.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(p)) g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
    return g;
}

Graph random_regular(int n, int d, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n: vertex count must be >= 1");
    if (d < 0 || d >= n) throw std::invalid_argument("d: degree must satisfy 0 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw std::invalid_argument("d: n*d must be even (handshake parity)");

    constexpr int kMaxAttempts = 1000;
    Rng rng(seed);
    std::vector<int> stubs(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < d; ++k) stubs[static_cast<std::size_t>(v) * d + k] = v;

    for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        rng.shuffle(stubs);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        bool ok = true;
        for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
            int u = stubs[k], v = stubs[k + 1];
            if (u == v || a(u, v) != 0.0) {  // self-loop or multi-edge
                ok = false;
                break;
            }
            a(u, v) = a(v, u) = 1.0;
        }
        if (ok) {
            Graph g;
            g.n = n;
            g.adjacency = std::move(a);
            g.model = GraphModel::random_regular;
            g.seed = seed;
            g.param = d;
            return g;
        }
    }
    throw std::runtime_error("random_regular: no simple matching found in " +
                             std::to_string(kMaxAttempts) + " attempts (n=" +
                             std::to_string(n) + ", d=" + std::to_string(d) + ")");
}

Graph complete(int n) {
    if (n < 1) throw std::invalid_argument("n: vertex count must be >= 1");
    Graph g;
    g.n = n;
    g.adjacency = Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
    g.model = GraphModel::complete;
    g.seed = 0;
    g.param = n - 1;
    return g;
}

Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw std::invalid_argument("n: vertex count must be >= 1");
    Graph g;
    g.n = n;
    g.adjacency = Eigen::MatrixXd::Zero(n, n);
    g.model = GraphModel::custom;
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("edges: vertex index out of range");
        if (i == j) throw std::invalid_argument("edges: self-loop not allowed");
        g.adjacency(i, j) = g.adjacency(j, i) = 1.0;
    }
    return g;
}

bool is_connected(const Graph& g) {
    if (g.n == 0) return false;
    std::vector<char> seen(g.n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u = 0; u < g.n; ++u) {
            if (!seen[u] && g.adjacency(v, u) != 0.0) {
                seen[u] = 1;
                ++reached;
                q.push(u);
            }
        }
    }
    return reached == g.n;
}

int isolated_vertex_count(const Graph& g) {
    int count = 0;
    for (int v = 0; v < g.n; ++v)
        if (g.degree(v) == 0) ++count;
    return count;
}

void validate_graph(const Graph& g) {
    if (g.n < 1 || g.adjacency.rows() != g.n || g.adjacency.cols() != g.n)
        throw std::runtime_error("graph: adjacency shape does not match n");
    for (int i = 0; i < g.n; ++i) {
        if (g.adjacency(i, i) != 0.0)
            throw std::runtime_error("graph: nonzero diagonal at vertex " + std::to_string(i));
        for (int j = i + 1; j < g.n; ++j) {
            double v = g.adjacency(i, j);
            if (v != 0.0 && v != 1.0)
                throw std::runtime_error("graph: entry not in {0,1} at (" + std::to_string(i) +
                                         "," + std::to_string(j) + ")");
            if (v != g.adjacency(j, i))
                throw std::runtime_error("graph: asymmetric at (" + std::to_string(i) + "," +
                                         std::to_string(j) + ")");
        }
    }
    if (g.model == GraphModel::random_regular) {
        int d = static_cast<int>(g.param);
        for (int v = 0; v < g.n; ++v)
            if (g.degree(v) != d)
                throw std::runtime_error("graph: vertex " + std::to_string(v) +
                                         " degree != " + std::to_string(d));
    }
}

}  // namespace ctqw
