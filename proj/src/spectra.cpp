#include "ctqw/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctqw {

namespace {
constexpr double kPi = 3.14159265358979323846;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    // Largest-magnitude component positive; first occurrence wins ties.
    int best = 0;
    double mag = std::abs(v(0));
    for (int i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > mag) {
            mag = std::abs(v(i));
            best = i;
        }
    }
    if (v(best) < 0.0) v = -v;
}
}  // namespace

Spectrum eigendecompose(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("matrix: not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("matrix: not symmetric within 1e-12 relative tolerance");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: solver failed to converge");

    const int n = static_cast<int>(a.rows());
    Spectrum s;
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    // Eigen returns ascending order; store descending.
    for (int k = 0; k < n; ++k) {
        s.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        s.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
        fix_sign(s.eigenvectors.col(k));
    }
    return s;
}

int multiplicity(const Spectrum& s, double value) {
    const double tol = 1e-9 * std::max(1.0, std::abs(s.eigenvalues(0)));
    int count = 0;
    for (int k = 0; k < s.dim(); ++k)
        if (std::abs(s.eigenvalues(k) - value) <= tol) ++count;
    return count;
}

SpectralReport spectral_report(const Graph& g, double gamma) {
    return spectral_report(g, gamma, eigendecompose(g.adjacency));
}

SpectralReport spectral_report(const Graph& g, double gamma, const Spectrum& s) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma: must be > 0");
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SpectralReport rep;
    rep.lambda1 = s.eigenvalues(0);
    rep.lambda2 = g.n >= 2 ? s.eigenvalues(1) : nan;
    rep.lambda_min = s.eigenvalues(g.n - 1);

    if (g.n >= 2 && rep.lambda1 > 0.0) {
        rep.ratio_c = std::max(std::abs(rep.lambda2), std::abs(rep.lambda_min)) / rep.lambda1;
    } else if (g.n == 1) {
        rep.ratio_c = 0.0;
    } else {
        rep.ratio_c = std::numeric_limits<double>::infinity();
    }

    const double alpha = s.eigenvectors.col(0).sum() / std::sqrt(double(g.n));
    rep.alpha = std::abs(alpha);

    if (g.model == GraphModel::erdos_renyi && g.param > 0.0) {
        const double np = g.n * g.param;
        rep.delocalization_rhs =
            gamma * rep.lambda1 - (2.0 + std::pow(np, -0.25) * std::log(double(g.n))) / std::sqrt(np);
        rep.wigner_radius = 2.0 * std::sqrt((1.0 - g.param) / np);
    } else {
        rep.delocalization_rhs = nan;
        rep.wigner_radius = nan;
    }
    return rep;
}

double semicircle_density(double lambda, int n, double p) {
    if (n < 1) throw std::invalid_argument("n: vertex count must be >= 1");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("p: semicircle density needs 0 < p < 1");
    const double var = n * p * (1.0 - p);
    const double support = 4.0 * var - lambda * lambda;
    if (support <= 0.0) return 0.0;
    return std::sqrt(support) / (2.0 * kPi * var);
}

Histogram empirical_bulk_density(const Spectrum& s, int bins) {
    if (bins < 2) throw std::invalid_argument("bins: need at least 2");
    if (s.dim() < 2) throw std::invalid_argument("spectrum: need dimension >= 2 for a bulk");

    const int count = s.dim() - 1;  // drop lambda1
    double lo = s.eigenvalues(s.dim() - 1);
    double hi = s.eigenvalues(1);
    if (hi - lo <= 0.0) {  // fully degenerate bulk
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bins;

    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges(b) = lo + b * width;
    h.density = Eigen::VectorXd::Zero(bins);
    for (int k = 1; k < s.dim(); ++k) {
        int b = static_cast<int>((s.eigenvalues(k) - lo) / width);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        h.density(b) += 1.0;
    }
    h.density /= count * width;
    return h;
}

double semicircle_l1_distance(const Histogram& h, int n, double p) {
    const double radius = 2.0 * std::sqrt(n * p * (1.0 - p));
    const double lo = std::min(h.edges(0), -radius);
    const double hi = std::max(h.edges(h.edges.size() - 1), radius);
    const int bins = static_cast<int>(h.density.size());

    // Midpoint rule, fine enough that bin and support edges do not bias it.
    const int cells = 20000;
    const double dx = (hi - lo) / cells;
    double total = 0.0;
    for (int c = 0; c < cells; ++c) {
        const double x = lo + (c + 0.5) * dx;
        double hist = 0.0;
        if (x >= h.edges(0) && x < h.edges(bins)) {
            int b = static_cast<int>((x - h.edges(0)) / (h.edges(1) - h.edges(0)));
            if (b >= bins) b = bins - 1;
            hist = h.density(b);
        }
        total += std::abs(hist - semicircle_density(x, n, p)) * dx;
    }
    return total;
}

Eigen::MatrixXd normalized_laplacian(const Graph& g) {
    Eigen::VectorXd deg = g.degrees();
    Eigen::VectorXd inv_sqrt(g.n);
    for (int v = 0; v < g.n; ++v)
        inv_sqrt(v) = deg(v) > 0.0 ? 1.0 / std::sqrt(deg(v)) : 0.0;
    Eigen::MatrixXd norm_adj = inv_sqrt.asDiagonal() * g.adjacency * inv_sqrt.asDiagonal();
    return Eigen::MatrixXd::Identity(g.n, g.n) - norm_adj;
}

}  // namespace ctqw
