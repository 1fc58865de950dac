#include "ctqw/protocols.hpp"

#include <cmath>
#include <stdexcept>

#include "ctqw/search.hpp"

namespace ctqw {

namespace {
constexpr double kPi = 3.14159265358979323846;

double model_gamma(const Graph& g, double gamma) {
    if (gamma > 0.0) return gamma;
    return choose_gamma(g, GammaMode::mean_field_inv_np);
}

void check_endpoints(const Graph& g, const std::vector<int>& eps) {
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i] < 0 || eps[i] >= g.n)
            throw std::invalid_argument("endpoints: vertex index out of range");
        for (std::size_t j = i + 1; j < eps.size(); ++j)
            if (eps[i] == eps[j])
                throw std::invalid_argument("endpoints: must be pairwise distinct");
    }
}
}  // namespace

std::string to_string(ProtocolKind k) {
    return k == ProtocolKind::transfer ? "transfer" : "bell";
}

ProtocolSpec make_transfer_spec(Graph g, int sender, int receiver, double gamma) {
    check_endpoints(g, {sender, receiver});
    ProtocolSpec spec;
    spec.gamma = model_gamma(g, gamma);
    spec.graph = std::move(g);
    spec.kind = ProtocolKind::transfer;
    spec.endpoints = {sender, receiver, -1};
    return spec;
}

ProtocolSpec make_bell_spec(Graph g, int charlie, int alice, int bob, double gamma,
                            double charlie_coupling) {
    check_endpoints(g, {charlie, alice, bob});
    const int d_c = g.degree(charlie);
    if (d_c < 1) throw std::invalid_argument("charlie: vertex is isolated (degree 0)");
    ProtocolSpec spec;
    spec.gamma = model_gamma(g, gamma);
    spec.graph = std::move(g);
    spec.kind = ProtocolKind::bell;
    spec.endpoints = {charlie, alice, bob};
    spec.charlie_coupling =
        charlie_coupling > 0.0 ? charlie_coupling : std::sqrt(2.0) / double(d_c);
    return spec;
}

std::vector<std::pair<int, int>> adjacent_endpoint_pairs(const ProtocolSpec& spec) {
    std::vector<int> eps(spec.endpoints.begin(), spec.endpoints.end());
    if (spec.kind == ProtocolKind::transfer) eps.pop_back();
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < eps.size(); ++i)
        for (std::size_t j = i + 1; j < eps.size(); ++j)
            if (spec.graph.adjacent(eps[i], eps[j])) out.emplace_back(eps[i], eps[j]);
    return out;
}

Hamiltonian build_transfer_hamiltonian(const ProtocolSpec& spec) {
    if (spec.kind != ProtocolKind::transfer)
        throw std::invalid_argument("spec: not a transfer spec");
    Eigen::MatrixXd h = -spec.gamma * spec.graph.adjacency;
    h(spec.endpoints[0], spec.endpoints[0]) -= 1.0;
    h(spec.endpoints[1], spec.endpoints[1]) -= 1.0;
    return Hamiltonian(std::move(h));
}

Hamiltonian build_bell_hamiltonian(const ProtocolSpec& spec) {
    if (spec.kind != ProtocolKind::bell) throw std::invalid_argument("spec: not a bell spec");
    const auto [w, a, b] = spec.endpoints;
    if (spec.graph.degree(w) < 1)
        throw std::invalid_argument("charlie: vertex is isolated (degree 0)");
    Eigen::MatrixXd h = -spec.gamma * spec.graph.adjacency;
    for (int u : spec.graph.neighbors(w)) {
        h(w, u) = -spec.charlie_coupling;
        h(u, w) = -spec.charlie_coupling;
    }
    h(w, w) -= 1.0;
    h(a, a) -= 1.0;
    h(b, b) -= 1.0;
    return Hamiltonian(std::move(h));
}

Eigen::Matrix3d effective_3level(ProtocolKind kind, int n) {
    if (n < 3) throw std::invalid_argument("n: need at least 3 vertices");
    const double g =
        kind == ProtocolKind::transfer ? 1.0 / std::sqrt(double(n)) : std::sqrt(2.0 / n);
    Eigen::Matrix3d m;
    m << -1.0, -g, 0.0,
         -g, -1.0, -g,
         0.0, -g, -1.0;
    return m;
}

double protocol_predicted_time(ProtocolKind kind, int n) {
    return kind == ProtocolKind::transfer ? kPi * std::sqrt(n / 2.0)
                                          : kPi * std::sqrt(double(n)) / 2.0;
}

double default_protocol_t_max(ProtocolKind kind, int n) {
    return 2.0 * protocol_predicted_time(kind, n);
}

namespace {
ProtocolResult finish_result(const Hamiltonian& h, const QuantumState& from,
                             const QuantumState& to, ProtocolKind kind, int n, double t_max,
                             int steps) {
    if (t_max <= 0.0) t_max = default_protocol_t_max(kind, n);
    ProtocolResult res;
    res.trace = trace_probability(h, from, to, t_max, steps);
    res.predicted_time = protocol_predicted_time(kind, n);
    QuantumState at_t = evolve(h, from, res.predicted_time);
    res.fidelity_at_predicted_time = std::norm(to.amplitudes.dot(at_t.amplitudes));
    res.peak_fidelity = res.trace.peak_value;
    return res;
}
}  // namespace

ProtocolResult run_transfer(const ProtocolSpec& spec, double t_max, int steps) {
    Hamiltonian h = build_transfer_hamiltonian(spec);
    const int n = spec.graph.n;
    return finish_result(h, state_basis(n, spec.endpoints[0]), state_basis(n, spec.endpoints[1]),
                         ProtocolKind::transfer, n, t_max, steps);
}

ProtocolResult run_bell(const ProtocolSpec& spec, double t_max, int steps) {
    Hamiltonian h = build_bell_hamiltonian(spec);
    const int n = spec.graph.n;
    const auto [w, a, b] = spec.endpoints;
    QuantumState bell;
    bell.amplitudes = Eigen::VectorXcd::Zero(n);
    bell.amplitudes(a) = bell.amplitudes(b) = std::complex<double>(1.0 / std::sqrt(2.0), 0.0);
    return finish_result(h, state_basis(n, w), bell, ProtocolKind::bell, n, t_max, steps);
}

std::pair<int, int> smallest_nonadjacent_pair(const Graph& g) {
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (!g.adjacent(i, j)) return {i, j};
    throw std::runtime_error("graph: no non-adjacent vertex pair exists");
}

std::array<int, 3> smallest_nonadjacent_triple(const Graph& g) {
    for (int w = 0; w < g.n; ++w) {
        if (g.degree(w) < 1) continue;  // Charlie needs neighbours to couple through
        for (int a = w + 1; a < g.n; ++a) {
            if (g.adjacent(w, a)) continue;
            for (int b = a + 1; b < g.n; ++b)
                if (!g.adjacent(w, b) && !g.adjacent(a, b)) return {w, a, b};
        }
    }
    throw std::runtime_error("graph: no pairwise non-adjacent triple exists");
}

}  // namespace ctqw
