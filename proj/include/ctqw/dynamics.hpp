#pragma once

#include <Eigen/Dense>

#include <memory>
#include <mutex>
#include <vector>

#include "ctqw/spectra.hpp"

namespace ctqw {

struct QuantumState {
    Eigen::VectorXcd amplitudes;

    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }
};

QuantumState state_uniform(int n);
QuantumState state_basis(int n, int k);
// Amplitude 1/sqrt(n - |excluded|) on every vertex not excluded.
QuantumState state_uniform_excluding(int n, const std::vector<int>& excluded);

// Real symmetric Hamiltonian with a lazily computed, shared spectrum.
// Copies share the cache; spectrum() is safe to call concurrently.
class Hamiltonian {
public:
    explicit Hamiltonian(Eigen::MatrixXd matrix);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    const Spectrum& spectrum() const;

private:
    struct Cache;
    Eigen::MatrixXd mat_;
    std::shared_ptr<Cache> cache_;
};

// exp(-iHt) psi0 through the spectral decomposition; exact up to the
// eigensolver tolerance, norm preserved to ~1e-12.
QuantumState evolve(const Hamiltonian& h, const QuantumState& psi0, double t);

// Classical RK4 integration of dpsi/dt = -iH psi with ceil(|t|/dt) steps
// and no renormalization (norm drift is a diagnostic). Independent of the
// spectral path; used as a cross-check oracle.
QuantumState evolve_ode(const Hamiltonian& h, const QuantumState& psi0, double t, double dt);

struct EvolutionTrace {
    Eigen::VectorXd times;          // strictly increasing, starts at 0
    Eigen::VectorXd probabilities;  // |<target|psi(t)>|^2 per grid point
    double peak_value = 0.0;
    double peak_time = 0.0;
};

// |<target|exp(-iHt)|psi0>|^2 on a uniform grid of `steps` points over
// [0, t_max]; the peak is refined off-grid by golden-section search within
// one grid step of the grid argmax (tolerance 1e-6 in t).
EvolutionTrace trace_probability(const Hamiltonian& h, const QuantumState& psi0,
                                 const QuantumState& target, double t_max, int steps);

// Default trace window 2*pi*sqrt(n): at least two Rabi periods of the
// 1/sqrt(n)-coupled two-level dynamics.
double default_t_max(int n);

inline constexpr int kDefaultTraceSteps = 400;

}  // namespace ctqw
