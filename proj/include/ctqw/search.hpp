#pragma once

#include <optional>

#include "ctqw/dynamics.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectra.hpp"

namespace ctqw {

enum class GammaMode { exact_inverse_lambda1, mean_field_inv_np, manual };

std::string to_string(GammaMode m);

// One spatial-search run: graph, marked vertex, hopping rate gamma, and an
// optional spectral rescaling r (the (1+r)H1 + H2 construction).
struct SearchInstance {
    Graph graph;
    int marked = 0;
    double gamma = 0.0;
    GammaMode gamma_mode = GammaMode::manual;
    std::optional<double> rescale_r;
};

// exact:      1/lambda1 of the adjacency matrix,
// mean_field: 1/(np) for Erdos-Renyi, 1/d for regular, 1/(n-1) for complete.
double choose_gamma(const Graph& g, GammaMode mode);

// Default marked vertex: degree closest to the mean degree, lowest index
// on ties. A degree-atypical vertex detunes the Rabi frequency away from
// the 1/sqrt(n) prediction at finite n.
int typical_degree_vertex(const Graph& g);

// H = -|w><w| - gamma (1+r) A, with r = rescale_r or 0. When rescale_r is
// present it is validated against the measured bracket [-c/(1+c), c/(1-c)].
Hamiltonian build_search_hamiltonian(const SearchInstance& si);

// Eigenvalues lambda -> (1+r) lambda - r, eigenvectors unchanged.
Spectrum rescale_spectrum(const Spectrum& s, double r);

// Root r of  sum_{i>=2} a_i^2 / ((1+r)(1 - lambda_i)) = sum_{i>=2} a_i^2
// inside [-c/(1+c), c/(1-c)], where a_i = <w|v_i> and c = max_{i>=2}|lambda_i|.
// Requires lambda1 = 1 (pre-normalized) and c < 1. Bisection to 1e-12 in r.
double rescaling_root(const Spectrum& h1, int w);

// residual of the rescaling equation at a given r (diagnostic / oracle hook).
double rescaling_residual(const Spectrum& h1, int w, double r);

// (1-c)/(1+c), the guaranteed squared overlap with |w> after evolution.
double overlap_bound(double c);

// Positive root  a_1 / sqrt(sum_{i>=2} a_i^2/(1-lambda_i)^2), evaluated on
// the already-rescaled spectrum. Evolving for pi/(2 delta) lands on |f>.
double delta_estimate(const Spectrum& h1_rescaled, int w);

// Degenerate-perturbation two-level prediction around gamma*lambda1 = 1.
struct PerturbationPrediction {
    double delta = 0.0;      // gamma*lambda1 - 1, signed
    double omega = 0.0;      // sqrt(delta^2/4 + 1/n)
    double amplitude = 0.0;  // 1 / (1 + n delta^2/4)
    double mu = 0.0;         // delta/2 + sqrt(delta^2/4 + 1/n)
    double kappa = 0.0;      // sqrt(mu^2 + 1/n)
    double predicted_peak_time = 0.0;  // pi/omega
};

PerturbationPrediction perturbation_prediction(int n, double gamma, double lambda1);

// Success probability |<w|exp(-iHt)|s>|^2; t_max = 0 selects 2*pi*sqrt(n).
EvolutionTrace run_search(const SearchInstance& si, double t_max = 0.0,
                          int steps = kDefaultTraceSteps);

struct OptimalityReport {
    bool condition_met = false;
    double c = 0.0;
    double alpha = 0.0;
    double bound = 0.0;  // overlap_bound(c); NaN when c >= 1
};

// condition_met = (c < 1 - margin) and (alpha >= 1 - margin).
OptimalityReport check_optimality_condition(const Graph& g, double gamma,
                                            double margin = 0.05);

}  // namespace ctqw
