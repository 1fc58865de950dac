#include "ctqw/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>

namespace ctqw {

namespace {
constexpr double kPi = 3.14159265358979323846;
using complexd = std::complex<double>;
}  // namespace

QuantumState state_uniform(int n) {
    if (n < 1) throw std::invalid_argument("n: dimension must be >= 1");
    QuantumState s;
    s.amplitudes = Eigen::VectorXcd::Constant(n, complexd(1.0 / std::sqrt(double(n)), 0.0));
    return s;
}

QuantumState state_basis(int n, int k) {
    if (n < 1) throw std::invalid_argument("n: dimension must be >= 1");
    if (k < 0 || k >= n) throw std::invalid_argument("k: basis index out of range");
    QuantumState s;
    s.amplitudes = Eigen::VectorXcd::Zero(n);
    s.amplitudes(k) = complexd(1.0, 0.0);
    return s;
}

QuantumState state_uniform_excluding(int n, const std::vector<int>& excluded) {
    if (n < 1) throw std::invalid_argument("n: dimension must be >= 1");
    std::set<int> ex(excluded.begin(), excluded.end());
    for (int v : ex)
        if (v < 0 || v >= n) throw std::invalid_argument("excluded: vertex index out of range");
    const int support = n - static_cast<int>(ex.size());
    if (support <= 0) throw std::invalid_argument("excluded: support is empty");
    QuantumState s;
    s.amplitudes = Eigen::VectorXcd::Zero(n);
    const double amp = 1.0 / std::sqrt(double(support));
    for (int v = 0; v < n; ++v)
        if (!ex.count(v)) s.amplitudes(v) = complexd(amp, 0.0);
    return s;
}

struct Hamiltonian::Cache {
    std::once_flag once;
    Spectrum spectrum;
};

Hamiltonian::Hamiltonian(Eigen::MatrixXd matrix)
    : mat_(std::move(matrix)), cache_(std::make_shared<Cache>()) {
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("hamiltonian: not square");
    const double scale = std::max(1.0, mat_.cwiseAbs().maxCoeff());
    if ((mat_ - mat_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("hamiltonian: not symmetric within 1e-12");
}

const Spectrum& Hamiltonian::spectrum() const {
    std::call_once(cache_->once, [this] { cache_->spectrum = eigendecompose(mat_); });
    return cache_->spectrum;
}

QuantumState evolve(const Hamiltonian& h, const QuantumState& psi0, double t) {
    if (psi0.dim() != h.dim())
        throw std::invalid_argument("psi0: dimension does not match Hamiltonian");
    if (!std::isfinite(t)) throw std::invalid_argument("t: must be finite");
    const Spectrum& s = h.spectrum();
    // psi(t) = V exp(-i lambda t) V^T psi0; V is real so only the phases
    // are complex.
    Eigen::VectorXcd coeff = s.eigenvectors.transpose() * psi0.amplitudes;
    for (int k = 0; k < s.dim(); ++k)
        coeff(k) *= std::polar(1.0, -s.eigenvalues(k) * t);
    QuantumState out;
    out.amplitudes = s.eigenvectors * coeff;
    return out;
}

QuantumState evolve_ode(const Hamiltonian& h, const QuantumState& psi0, double t, double dt) {
    if (psi0.dim() != h.dim())
        throw std::invalid_argument("psi0: dimension does not match Hamiltonian");
    if (!(dt > 0.0)) throw std::invalid_argument("dt: step size must be > 0");
    if (!std::isfinite(t)) throw std::invalid_argument("t: must be finite");

    const Eigen::MatrixXd& m = h.matrix();
    // -iH psi with H real: split into two real mat-vecs.
    auto rhs = [&m](const Eigen::VectorXcd& psi) -> Eigen::VectorXcd {
        Eigen::VectorXd hr = m * psi.real();
        Eigen::VectorXd hi = m * psi.imag();
        return hi.cast<complexd>() - complexd(0.0, 1.0) * hr.cast<complexd>();
    };

    const long steps = static_cast<long>(std::ceil(std::abs(t) / dt));
    if (steps == 0) return psi0;
    const double hstep = t / double(steps);

    Eigen::VectorXcd psi = psi0.amplitudes;
    for (long s = 0; s < steps; ++s) {
        Eigen::VectorXcd k1 = rhs(psi);
        Eigen::VectorXcd k2 = rhs(psi + 0.5 * hstep * k1);
        Eigen::VectorXcd k3 = rhs(psi + 0.5 * hstep * k2);
        Eigen::VectorXcd k4 = rhs(psi + hstep * k3);
        psi += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(psi.squaredNorm()))
            throw std::runtime_error("evolve_ode: non-finite state at step " + std::to_string(s));
    }
    QuantumState out;
    out.amplitudes = std::move(psi);
    return out;
}

namespace {

// |<target|psi(t)>|^2 evaluated from the precomputed overlap coefficients
// c_k = <target|v_k><v_k|psi0>: O(n) per time point.
double overlap_probability(const Eigen::VectorXcd& coeff, const Eigen::VectorXd& eigenvalues,
                           double t) {
    complexd amp(0.0, 0.0);
    for (int k = 0; k < eigenvalues.size(); ++k)
        amp += coeff(k) * std::polar(1.0, -eigenvalues(k) * t);
    return std::norm(amp);
}

}  // namespace

EvolutionTrace trace_probability(const Hamiltonian& h, const QuantumState& psi0,
                                 const QuantumState& target, double t_max, int steps) {
    if (steps < 2) throw std::invalid_argument("steps: need at least 2 grid points");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max: must be > 0");
    if (psi0.dim() != h.dim() || target.dim() != h.dim())
        throw std::invalid_argument("state: dimension does not match Hamiltonian");

    const Spectrum& s = h.spectrum();
    Eigen::VectorXcd from = s.eigenvectors.transpose() * psi0.amplitudes;
    Eigen::VectorXcd to = s.eigenvectors.transpose() * target.amplitudes;
    Eigen::VectorXcd coeff = to.conjugate().cwiseProduct(from);

    EvolutionTrace trace;
    trace.times.resize(steps);
    trace.probabilities.resize(steps);
    const double delta = t_max / (steps - 1);
    int argmax = 0;
    for (int k = 0; k < steps; ++k) {
        const double t = k * delta;
        trace.times(k) = t;
        trace.probabilities(k) = overlap_probability(coeff, s.eigenvalues, t);
        if (trace.probabilities(k) > trace.probabilities(argmax)) argmax = k;
    }

    // Golden-section refinement within one grid step of the grid argmax;
    // the grid peak is only as good as the sampling.
    double lo = std::max(0.0, trace.times(argmax) - delta);
    double hi = std::min(t_max, trace.times(argmax) + delta);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = overlap_probability(coeff, s.eigenvalues, x1);
    double f2 = overlap_probability(coeff, s.eigenvalues, x2);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = overlap_probability(coeff, s.eigenvalues, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = overlap_probability(coeff, s.eigenvalues, x1);
        }
    }
    const double t_star = 0.5 * (lo + hi);
    const double p_star = overlap_probability(coeff, s.eigenvalues, t_star);
    if (p_star >= trace.probabilities(argmax)) {
        trace.peak_time = t_star;
        trace.peak_value = p_star;
    } else {
        trace.peak_time = trace.times(argmax);
        trace.peak_value = trace.probabilities(argmax);
    }
    return trace;
}

double default_t_max(int n) { return 2.0 * kPi * std::sqrt(double(n)); }

}  // namespace ctqw
