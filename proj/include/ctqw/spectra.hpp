#pragma once

#include <Eigen/Dense>

#include "ctqw/graph.hpp"

namespace ctqw {

// Full eigendecomposition of a real symmetric matrix, eigenvalues sorted
// descending, column k of `eigenvectors` paired with eigenvalues[k].
// Sign convention: the largest-magnitude component of each eigenvector is
// positive (ties broken by lowest index) so serialized output is stable.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
};

// Throws std::invalid_argument if A is not symmetric within 1e-12 relative.
Spectrum eigendecompose(const Eigen::MatrixXd& a);

// Number of eigenvalues equal to `value` within 1e-9 * max(1, |lambda1|).
int multiplicity(const Spectrum& s, double value);

struct SpectralReport {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda_min = 0.0;
    double ratio_c = 0.0;             // max(|lambda2|, |lambda_n|) / lambda1
    double alpha = 0.0;               // |<s|v1>|
    double delocalization_rhs = 0.0;  // lower bound on alpha^2; NaN unless Erdos-Renyi
    double wigner_radius = 0.0;       // gamma * 2 sqrt(np(1-p)); NaN unless Erdos-Renyi
};

SpectralReport spectral_report(const Graph& g, double gamma);
// Same, reusing an adjacency spectrum the caller already has.
SpectralReport spectral_report(const Graph& g, double gamma, const Spectrum& s);

// Bulk spectral density sqrt(4np(1-p) - x^2) / (2 pi np(1-p)) inside
// |x| < 2 sqrt(np(1-p)), zero outside. Throws for p in {0, 1}.
double semicircle_density(double lambda, int n, double p);

struct Histogram {
    Eigen::VectorXd edges;    // bins+1 ascending edges
    Eigen::VectorXd density;  // bins values, integrates to 1
};

// Histogram over the eigenvalues excluding lambda1 (the isolated Perron
// value), normalized as a probability density.
Histogram empirical_bulk_density(const Spectrum& s, int bins);

// integral |histogram - semicircle| dx over the union of both supports.
double semicircle_l1_distance(const Histogram& h, int n, double p);

// L' = I - D^{-1/2} A D^{-1/2}; rows/columns of the normalized adjacency
// belonging to isolated vertices are set to 0.
Eigen::MatrixXd normalized_laplacian(const Graph& g);

}  // namespace ctqw
