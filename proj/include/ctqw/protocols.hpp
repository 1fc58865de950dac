#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ctqw/dynamics.hpp"
#include "ctqw/graph.hpp"

namespace ctqw {

enum class ProtocolKind { transfer, bell };

std::string to_string(ProtocolKind k);

// Tuned-site-energy protocol on a graph. Transfer uses endpoints[0..1] as
// (sender, receiver); bell uses endpoints[0..2] as (charlie, alice, bob).
// The protocol regime assumes pairwise non-adjacent endpoints; adjacency is a
// warning (query adjacent_endpoint_pairs), not an error.
struct ProtocolSpec {
    Graph graph;
    ProtocolKind kind = ProtocolKind::transfer;
    std::array<int, 3> endpoints{-1, -1, -1};
    double gamma = 0.0;
    double charlie_coupling = 0.0;  // bell only; 0 selects sqrt(2)/deg(charlie)
};

// gamma = 0 selects the mean-field coupling for the graph model.
ProtocolSpec make_transfer_spec(Graph g, int sender, int receiver, double gamma = 0.0);
ProtocolSpec make_bell_spec(Graph g, int charlie, int alice, int bob, double gamma = 0.0,
                            double charlie_coupling = 0.0);

std::vector<std::pair<int, int>> adjacent_endpoint_pairs(const ProtocolSpec& spec);

// H = -|i><i| - |j><j| - gamma A.
Hamiltonian build_transfer_hamiltonian(const ProtocolSpec& spec);

// Site energies -1 at (w, a, b); edges incident to w coupled at
// -charlie_coupling, every other edge at -gamma.
Hamiltonian build_bell_hamiltonian(const ProtocolSpec& spec);

// The projected 3x3 chain: diagonal -1, couplings -1/sqrt(n) (transfer)
// or -sqrt(2/n) (bell), zero corners.
Eigen::Matrix3d effective_3level(ProtocolKind kind, int n);

struct ProtocolResult {
    EvolutionTrace trace;  // fidelity vs time
    double predicted_time = 0.0;  // pi sqrt(n/2) transfer, pi sqrt(n)/2 bell
    double fidelity_at_predicted_time = 0.0;
    double peak_fidelity = 0.0;
};

// |<j|exp(-iHt)|i>|^2 from initial state |i>.
ProtocolResult run_transfer(const ProtocolSpec& spec, double t_max = 0.0,
                            int steps = kDefaultTraceSteps);

// |<s_ab|exp(-iHt)|w>|^2 with s_ab = (|a>+|b>)/sqrt(2), initial state |w>.
ProtocolResult run_bell(const ProtocolSpec& spec, double t_max = 0.0,
                        int steps = kDefaultTraceSteps);

double protocol_predicted_time(ProtocolKind kind, int n);
double default_protocol_t_max(ProtocolKind kind, int n);  // 2x predicted time

// Deterministic endpoint choices: lexicographically smallest non-adjacent
// pair (i < j), or pairwise non-adjacent triple (w < a < b).
std::pair<int, int> smallest_nonadjacent_pair(const Graph& g);
std::array<int, 3> smallest_nonadjacent_triple(const Graph& g);

}  // namespace ctqw
