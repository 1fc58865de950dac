#include "ctqw/search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctqw {

namespace {
constexpr double kPi = 3.14159265358979323846;

void validate_instance(const SearchInstance& si) {
    if (si.marked < 0 || si.marked >= si.graph.n)
        throw std::invalid_argument("marked: vertex index out of range");
    if (!(si.gamma > 0.0)) throw std::invalid_argument("gamma: must be > 0");
}
}  // namespace

std::string to_string(GammaMode m) {
    switch (m) {
        case GammaMode::exact_inverse_lambda1: return "exact";
        case GammaMode::mean_field_inv_np: return "meanfield";
        case GammaMode::manual: return "manual";
    }
    throw std::logic_error("unknown GammaMode");
}

double choose_gamma(const Graph& g, GammaMode mode) {
    switch (mode) {
        case GammaMode::exact_inverse_lambda1: {
            const double lambda1 = eigendecompose(g.adjacency).eigenvalues(0);
            if (!(lambda1 > 0.0))
                throw std::invalid_argument("gamma: lambda1 <= 0 (graph has no edges?)");
            return 1.0 / lambda1;
        }
        case GammaMode::mean_field_inv_np:
            switch (g.model) {
                case GraphModel::erdos_renyi: {
                    const double np = g.n * g.param;
                    if (!(np > 0.0)) throw std::invalid_argument("gamma: n*p must be > 0");
                    return 1.0 / np;
                }
                case GraphModel::random_regular: {
                    if (!(g.param > 0.0)) throw std::invalid_argument("gamma: degree must be > 0");
                    return 1.0 / g.param;
                }
                case GraphModel::complete:
                    return 1.0 / (g.n - 1);
                case GraphModel::custom:
                    throw std::invalid_argument(
                        "gamma: mean-field mode needs a generated model (use exact or manual)");
            }
            throw std::logic_error("unknown GraphModel");
        case GammaMode::manual:
            throw std::invalid_argument("gamma: manual mode carries its own value");
    }
    throw std::logic_error("unknown GammaMode");
}

int typical_degree_vertex(const Graph& g) {
    Eigen::VectorXd deg = g.degrees();
    const double mean = deg.mean();
    int best = 0;
    double best_gap = std::abs(deg(0) - mean);
    for (int v = 1; v < g.n; ++v) {
        const double gap = std::abs(deg(v) - mean);
        if (gap < best_gap) {
            best_gap = gap;
            best = v;
        }
    }
    return best;
}

Hamiltonian build_search_hamiltonian(const SearchInstance& si) {
    validate_instance(si);
    double r = 0.0;
    if (si.rescale_r) {
        r = *si.rescale_r;
        // Bracket check against the measured spectral ratio. The bracket
        // opens up to [-1/2, inf) as c -> 1.
        Spectrum s = eigendecompose(si.graph.adjacency);
        const double lambda1 = s.eigenvalues(0);
        if (!(lambda1 > 0.0))
            throw std::invalid_argument("rescale_r: lambda1 <= 0, no Perron value to normalize");
        const double c =
            std::max(std::abs(s.eigenvalues(1)), std::abs(s.eigenvalues(s.dim() - 1))) / lambda1;
        const double lo = -c / (1.0 + c);
        const double hi =
            c < 1.0 ? c / (1.0 - c) : std::numeric_limits<double>::infinity();
        if (r < lo - 1e-12 || r > hi + 1e-12)
            throw std::invalid_argument("rescale_r: outside the rescaling bracket [-c/(1+c), c/(1-c)]");
    }
    Eigen::MatrixXd h = -si.gamma * (1.0 + r) * si.graph.adjacency;
    h(si.marked, si.marked) -= 1.0;
    return Hamiltonian(std::move(h));
}

Spectrum rescale_spectrum(const Spectrum& s, double r) {
    Spectrum out;
    out.eigenvalues = (1.0 + r) * s.eigenvalues.array() - r;
    out.eigenvectors = s.eigenvectors;
    return out;
}

double rescaling_residual(const Spectrum& h1, int w, double r) {
    double lhs = 0.0, rhs = 0.0;
    for (int i = 1; i < h1.dim(); ++i) {
        const double a2 = h1.eigenvectors(w, i) * h1.eigenvectors(w, i);
        lhs += a2 / ((1.0 + r) * (1.0 - h1.eigenvalues(i)));
        rhs += a2;
    }
    return lhs - rhs;
}

double rescaling_root(const Spectrum& h1, int w) {
    if (w < 0 || w >= h1.dim()) throw std::invalid_argument("w: vertex index out of range");
    if (std::abs(h1.eigenvalues(0) - 1.0) > 1e-9)
        throw std::invalid_argument("spectrum: lambda1 must be pre-normalized to 1");

    double c = 0.0;
    double weight = 0.0;
    for (int i = 1; i < h1.dim(); ++i) {
        c = std::max(c, std::abs(h1.eigenvalues(i)));
        weight += h1.eigenvectors(w, i) * h1.eigenvectors(w, i);
    }
    if (c >= 1.0) throw std::invalid_argument("spectrum: |lambda_i| <= c < 1 violated");
    if (weight < 1e-300) return 0.0;  // |w> = |v1>, equation holds for any r

    double lo = -c / (1.0 + c);
    double hi = c / (1.0 - c);
    double f_lo = rescaling_residual(h1, w, lo);
    double f_hi = rescaling_residual(h1, w, hi);
    // The proof's monotonicity argument: residual >= 0 at the left end,
    // <= 0 at the right end. Rounding slack for exactly-degenerate spectra.
    const double eps = 1e-11 * weight;
    if (f_lo < -eps || f_hi > eps)
        throw std::runtime_error("rescaling_root: bracket endpoints do not straddle the root");
    if (std::abs(f_lo) <= eps) return lo;
    if (std::abs(f_hi) <= eps) return hi;

    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = rescaling_residual(h1, w, mid);
        if (f_mid > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double overlap_bound(double c) {
    if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("c: must be in [0, 1)");
    return (1.0 - c) / (1.0 + c);
}

double delta_estimate(const Spectrum& h1_rescaled, int w) {
    if (w < 0 || w >= h1_rescaled.dim())
        throw std::invalid_argument("w: vertex index out of range");
    const double a1 = std::abs(h1_rescaled.eigenvectors(w, 0));
    double denom = 0.0;
    for (int i = 1; i < h1_rescaled.dim(); ++i) {
        const double a2 = h1_rescaled.eigenvectors(w, i) * h1_rescaled.eigenvectors(w, i);
        const double gap = 1.0 - h1_rescaled.eigenvalues(i);
        denom += a2 / (gap * gap);
    }
    if (denom < 1e-300)
        throw std::invalid_argument("spectrum: |w> is the Perron vector, delta undefined");
    return a1 / std::sqrt(denom);
}

PerturbationPrediction perturbation_prediction(int n, double gamma, double lambda1) {
    if (n < 2) throw std::invalid_argument("n: need at least 2 vertices");
    PerturbationPrediction p;
    p.delta = gamma * lambda1 - 1.0;
    if (!std::isfinite(p.delta)) throw std::invalid_argument("delta: gamma*lambda1 not finite");
    p.omega = std::sqrt(p.delta * p.delta / 4.0 + 1.0 / n);
    p.amplitude = 1.0 / (1.0 + n * p.delta * p.delta / 4.0);
    p.mu = p.delta / 2.0 + p.omega;
    p.kappa = std::sqrt(p.mu * p.mu + 1.0 / n);
    p.predicted_peak_time = kPi / p.omega;
    return p;
}

EvolutionTrace run_search(const SearchInstance& si, double t_max, int steps) {
    validate_instance(si);
    Hamiltonian h = build_search_hamiltonian(si);
    if (t_max <= 0.0) t_max = default_t_max(si.graph.n);
    return trace_probability(h, state_uniform(si.graph.n), state_basis(si.graph.n, si.marked),
                             t_max, steps);
}

OptimalityReport check_optimality_condition(const Graph& g, double gamma, double margin) {
    SpectralReport rep = spectral_report(g, gamma);
    OptimalityReport out;
    out.c = rep.ratio_c;
    out.alpha = rep.alpha;
    out.condition_met = (out.c < 1.0 - margin) && (out.alpha >= 1.0 - margin);
    out.bound = out.c < 1.0 ? overlap_bound(out.c) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace ctqw
