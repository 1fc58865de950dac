#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ctqw {

enum class GraphModel { erdos_renyi, random_regular, complete, custom };

std::string to_string(GraphModel m);
GraphModel graph_model_from_string(const std::string& s);

// Undirected simple graph: dense symmetric 0/1 adjacency, zero diagonal.
// Immutable after construction; safe to share read-only across threads.
struct Graph {
    int n = 0;
    Eigen::MatrixXd adjacency;
    GraphModel model = GraphModel::custom;
    std::uint64_t seed = 0;
    double param = 0.0;  // edge probability p, or degree d

    bool adjacent(int i, int j) const { return adjacency(i, j) != 0.0; }
    int degree(int v) const;
    Eigen::VectorXd degrees() const;
    std::size_t edge_count() const;
    std::vector<std::pair<int, int>> edges() const;  // sorted, i < j
    std::vector<int> neighbors(int v) const;
};

// G(n,p): each of the n(n-1)/2 possible edges present independently with
// probability p. Deterministic in (n, p, seed).
Graph erdos_renyi(int n, double p, std::uint64_t seed);

// Uniform-ish d-regular graph via the pairing (configuration) model:
// n*d stubs, random perfect matching, whole matching rejected on any
// self-loop or multi-edge. Retry cap 1000 attempts.
Graph random_regular(int n, int d, std::uint64_t seed);

Graph complete(int n);

// Custom graph from an i<j edge list; throws on out-of-range or self-loop.
Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

// BFS from vertex 0 reaches all n vertices.
bool is_connected(const Graph& g);

int isolated_vertex_count(const Graph& g);

// Throws std::runtime_error if symmetry / zero-diagonal / 0-1 entries /
// regular row-sum invariants are broken.
void validate_graph(const Graph& g);

}  // namespace ctqw
