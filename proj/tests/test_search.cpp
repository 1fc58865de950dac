#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "ctqw/graph.hpp"
#include "ctqw/rng.hpp"
#include "ctqw/search.hpp"

using namespace ctqw;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Orthonormal basis whose row `0` equals the unit vector a: Householder
// reflection mapping e0 <-> a. Column k is eigenvector |v_k>, so the
// overlaps <w=0|v_k> = a_k by symmetry of the reflector.
Eigen::MatrixXd basis_with_overlaps(const Eigen::VectorXd& a) {
    const int k = static_cast<int>(a.size());
    Eigen::VectorXd u = -a;
    u(0) += 1.0;  // e0 - a
    const double nrm = u.norm();
    if (nrm < 1e-14) return Eigen::MatrixXd::Identity(k, k);
    u /= nrm;
    return Eigen::MatrixXd::Identity(k, k) - 2.0 * u * u.transpose();
}

Spectrum synthetic_spectrum(const Eigen::VectorXd& eigenvalues, const Eigen::VectorXd& a) {
    Spectrum s;
    s.eigenvalues = eigenvalues;
    s.eigenvectors = basis_with_overlaps(a);
    return s;
}

Eigen::VectorXd random_unit_vector(int k, Rng& rng) {
    Eigen::VectorXd a(k);
    for (int i = 0; i < k; ++i) a(i) = rng.normal();
    a /= a.norm();
    if (a(0) < 0.0) a = -a;  // fix the sign of the Perron overlap
    return a;
}

// Exact two-level reduction of complete-graph search: the dynamics stays
// in span{|w>, |s_wbar>}. Closed-form diagonalization of the 2x2 block,
// entirely independent of the library solver.
struct TwoLevelOracle {
    double e1, e2;     // eigenvalues
    double c1w, c2w;   // eigenvector components on |w>
    double c1s, c2s;   // components on |s_wbar>
    double a_w, a_s;   // initial state |s> in this basis

    explicit TwoLevelOracle(int n, double gamma) {
        const double h11 = -1.0;
        const double h22 = -gamma * (n - 2.0);
        const double h12 = -gamma * std::sqrt(n - 1.0);
        const double mean = 0.5 * (h11 + h22);
        const double disc = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
        e1 = mean - disc;
        e2 = mean + disc;
        const double theta1 = std::atan2(e1 - h11, h12);
        c1w = std::cos(theta1);
        c1s = std::sin(theta1);
        const double theta2 = std::atan2(e2 - h11, h12);
        c2w = std::cos(theta2);
        c2s = std::sin(theta2);
        a_w = 1.0 / std::sqrt(double(n));
        a_s = std::sqrt((n - 1.0) / n);
    }

    double probability(double t) const {
        const std::complex<double> phase1 = std::polar(1.0, -e1 * t);
        const std::complex<double> phase2 = std::polar(1.0, -e2 * t);
        const std::complex<double> amp =
            phase1 * c1w * (c1w * a_w + c1s * a_s) + phase2 * c2w * (c2w * a_w + c2s * a_s);
        return std::norm(amp);
    }
};
}  // namespace

TEST_SUITE_BEGIN("search");

TEST_CASE("search Hamiltonian entries") {
    SearchInstance empty{erdos_renyi(4, 0.0, 1), 0, 1.0, GammaMode::manual, std::nullopt};
    Eigen::MatrixXd h = build_search_hamiltonian(empty).matrix();
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
    expected(0, 0) = -1.0;
    CHECK(h == expected);

    SearchInstance k2{complete(2), 0, 1.0, GammaMode::manual, 0.0};
    Eigen::MatrixXd h2 = build_search_hamiltonian(k2).matrix();
    Eigen::MatrixXd e2(2, 2);
    e2 << -1, -1, -1, 0;
    CHECK(h2 == e2);

    SearchInstance k3{complete(3), 1, 0.5, GammaMode::manual, std::nullopt};
    Eigen::MatrixXd h3 = build_search_hamiltonian(k3).matrix();
    CHECK(h3(1, 1) == -1.0);
    CHECK(h3(0, 1) == -0.5);
    CHECK(h3(0, 2) == -0.5);
    CHECK(h3(0, 0) == 0.0);
}

TEST_CASE("choose_gamma per mode") {
    CHECK(choose_gamma(complete(5), GammaMode::exact_inverse_lambda1) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(choose_gamma(erdos_renyi(1000, 0.1, 3), GammaMode::mean_field_inv_np) ==
          doctest::Approx(0.01).epsilon(1e-15));
    CHECK(choose_gamma(random_regular(20, 3, 3), GammaMode::mean_field_inv_np) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(choose_gamma(erdos_renyi(5, 0.0, 1), GammaMode::exact_inverse_lambda1),
                    std::invalid_argument);
}

TEST_CASE("overlap_bound") {
    CHECK(overlap_bound(0.0) == 1.0);
    CHECK(overlap_bound(1.0 / 3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(overlap_bound(1.0 / 99.0) == doctest::Approx(98.0 / 100.0).epsilon(1e-12));
    CHECK_THROWS_AS(overlap_bound(1.0), std::invalid_argument);
    CHECK_THROWS_AS(overlap_bound(-0.1), std::invalid_argument);
}

TEST_CASE("rescaling_root closed cases") {
    Rng rng(31);
    Eigen::VectorXd a = random_unit_vector(12, rng);

    Eigen::VectorXd flat(12);
    flat.setZero();
    flat(0) = 1.0;
    CHECK(rescaling_root(synthetic_spectrum(flat, a), 0) == doctest::Approx(0.0).epsilon(1e-12));

    const double c = 0.4;
    Eigen::VectorXd level(12);
    level.setConstant(c);
    level(0) = 1.0;
    CHECK(rescaling_root(synthetic_spectrum(level, a), 0) ==
          doctest::Approx(c / (1.0 - c)).epsilon(1e-10));
}

TEST_CASE("rescaling_root matches a dense grid scan of the bracket") {
    Rng rng(77);
    const int k = 30;
    Eigen::VectorXd lambdas(k);
    lambdas(0) = 1.0;
    for (int i = 1; i < k; ++i) lambdas(i) = (rng.uniform() * 2.0 - 1.0) * 0.5;
    std::sort(lambdas.data() + 1, lambdas.data() + k, std::greater<double>());
    Eigen::VectorXd a = random_unit_vector(k, rng);
    Spectrum s = synthetic_spectrum(lambdas, a);

    double c = 0.0;
    for (int i = 1; i < k; ++i) c = std::max(c, std::abs(lambdas(i)));
    const double lo = -c / (1.0 + c), hi = c / (1.0 - c);

    // Oracle: locate the sign change of the residual over 1e6 grid points.
    const int grid = 1000000;
    double bracket_lo = lo, bracket_hi = hi;
    double prev = rescaling_residual(s, 0, lo);
    for (int i = 1; i <= grid; ++i) {
        const double r = lo + (hi - lo) * double(i) / grid;
        const double cur = rescaling_residual(s, 0, r);
        if (prev >= 0.0 && cur <= 0.0) {
            bracket_lo = lo + (hi - lo) * double(i - 1) / grid;
            bracket_hi = r;
            break;
        }
        prev = cur;
    }

    const double r = rescaling_root(s, 0);
    CHECK(r >= bracket_lo - 1e-12);
    CHECK(r <= bracket_hi + 1e-12);
    CHECK(std::abs(rescaling_residual(s, 0, r)) < 1e-10);

    // Bracket endpoints must straddle (module invariant).
    CHECK(rescaling_residual(s, 0, lo) >= 0.0);
    CHECK(rescaling_residual(s, 0, hi) <= 0.0);
}

TEST_CASE("rescaling_root rejects c >= 1") {
    Rng rng(5);
    Eigen::VectorXd a = random_unit_vector(6, rng);
    Eigen::VectorXd bad(6);
    bad << 1.0, 0.5, 0.0, 0.0, -0.5, -1.0;
    CHECK_THROWS_AS(rescaling_root(synthetic_spectrum(bad, a), 0), std::invalid_argument);
}

TEST_CASE("delta_estimate closed cases") {
    const int k = 25;
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(k, 1.0 / std::sqrt(double(k)));
    Eigen::VectorXd flat(k);
    flat.setZero();
    flat(0) = 1.0;
    const double expected = (1.0 / std::sqrt(double(k))) / std::sqrt(1.0 - 1.0 / k);
    CHECK(delta_estimate(synthetic_spectrum(flat, uniform), 0) ==
          doctest::Approx(expected).epsilon(1e-12));

    // Eigenvalues +-c with equal weight: every gap term scales the flat
    // case by (1-c^2)/sqrt(1+c^2) under the closed form.
    const double c = 0.3;
    Eigen::VectorXd paired(k);
    paired(0) = 1.0;
    for (int i = 1; i < k; ++i) paired(i) = (i % 2 == 1) ? c : -c;
    std::sort(paired.data() + 1, paired.data() + k, std::greater<double>());
    double denom = 0.0;
    const double w2 = (1.0 - 1.0 / k) / (k - 1);  // each a_i^2, i >= 2
    for (int i = 1; i < k; ++i) {
        const double gap = 1.0 - paired(i);
        denom += w2 / (gap * gap);
    }
    const double oracle = (1.0 / std::sqrt(double(k))) / std::sqrt(denom);
    CHECK(delta_estimate(synthetic_spectrum(paired, uniform), 0) ==
          doctest::Approx(oracle).epsilon(1e-12));
    // (k even split between +c and -c makes the scaled form exact)
    if ((k - 1) % 2 == 0)
        CHECK(oracle == doctest::Approx(expected * (1.0 - c * c) / std::sqrt(1.0 + c * c))
                            .epsilon(1e-12));

    CHECK_THROWS_AS(delta_estimate(synthetic_spectrum(flat, flat), 0), std::invalid_argument);
}

TEST_CASE("delta_estimate predicts the complete-graph peak time within 2%") {
    const int n = 1024;
    Graph g = complete(n);
    Spectrum s = eigendecompose(g.adjacency);
    Spectrum normalized = s;
    normalized.eigenvalues /= s.eigenvalues(0);
    const double delta = delta_estimate(normalized, 0);

    SearchInstance si{g, 0, 1.0 / s.eigenvalues(0), GammaMode::exact_inverse_lambda1,
                      std::nullopt};
    EvolutionTrace tr = run_search(si, kPi * std::sqrt(double(n)), 400);
    CHECK(std::abs(kPi / (2.0 * delta) - tr.peak_time) <= 0.02 * tr.peak_time);
}

TEST_CASE("perturbation prediction closed forms") {
    PerturbationPrediction flat = perturbation_prediction(1000, 1.0, 1.0);  // delta = 0
    CHECK(flat.delta == 0.0);
    CHECK(flat.amplitude == 1.0);
    CHECK(flat.omega == doctest::Approx(1.0 / std::sqrt(1000.0)).epsilon(1e-12));
    CHECK(flat.mu == doctest::Approx(1.0 / std::sqrt(1000.0)).epsilon(1e-12));
    CHECK(flat.kappa == doctest::Approx(std::sqrt(2.0 / 1000.0)).epsilon(1e-12));
    CHECK(flat.predicted_peak_time == doctest::Approx(kPi * std::sqrt(1000.0)).epsilon(1e-12));
    // mu = 1/sqrt(n) makes the predicted eigenstates (|w> -+ |s_wbar>)/sqrt(2).
    CHECK(flat.mu / flat.kappa == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    const int n = 10000;
    const double delta = 2.0 / std::sqrt(double(n));
    PerturbationPrediction detuned = perturbation_prediction(n, 1.0 + delta, 1.0);
    CHECK(detuned.amplitude == doctest::Approx(0.5).epsilon(1e-9));

    // kappa normalization identity.
    PerturbationPrediction any = perturbation_prediction(137, 1.01, 1.03);
    CHECK((any.mu * any.mu + 1.0 / 137.0) / (any.kappa * any.kappa) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("run_search starts at 1/n") {
    SearchInstance si{complete(64), 5, 1.0 / 63.0, GammaMode::exact_inverse_lambda1,
                      std::nullopt};
    EvolutionTrace tr = run_search(si, 10.0, 50);
    CHECK(tr.probabilities(0) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
}

TEST_CASE("complete-graph search matches the two-level closed form") {
    const int n = 256;
    const double gamma = 1.0 / (n - 1.0);
    SearchInstance si{complete(n), 0, gamma, GammaMode::exact_inverse_lambda1, std::nullopt};
    EvolutionTrace tr = run_search(si, kPi * std::sqrt(double(n)), 400);

    TwoLevelOracle oracle(n, gamma);
    for (int k = 0; k < tr.times.size(); k += 7)
        CHECK(tr.probabilities(k) ==
              doctest::Approx(oracle.probability(tr.times(k))).epsilon(1e-9));

    // Grid-scan the oracle for its peak; both routes must agree.
    double best_t = 0.0, best_p = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double t = kPi * std::sqrt(double(n)) * i / 20000.0;
        const double p = oracle.probability(t);
        if (p > best_p) {
            best_p = p;
            best_t = t;
        }
    }
    CHECK(std::abs(tr.peak_time - best_t) < 0.05 * best_t);
    CHECK(tr.peak_value == doctest::Approx(best_p).epsilon(1e-6));
    CHECK(std::abs(tr.peak_time - kPi * std::sqrt(double(n)) / 2.0) <=
          0.05 * kPi * std::sqrt(double(n)) / 2.0);
}

TEST_CASE("rescaled regular-graph search reaches the overlap bound at pi/(2 delta)") {
    // Complete multipartite K_{4x6}: 18-regular on 24 vertices, spectrum
    // {18, 0^20, (-6)^3}, so c = 1/3 and the guaranteed overlap is a solid 1/2.
    const int parts = 4, size = 6, n = parts * size;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (u / size != v / size) edges.emplace_back(u, v);
    Graph g = graph_from_edges(n, edges);
    Spectrum s = eigendecompose(g.adjacency);
    const double lambda1 = s.eigenvalues(0);
    const double c =
        std::max(std::abs(s.eigenvalues(1)), std::abs(s.eigenvalues(n - 1))) / lambda1;
    REQUIRE(c == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    Spectrum normalized = s;
    normalized.eigenvalues /= lambda1;
    const double r = rescaling_root(normalized, 0);
    const double delta = delta_estimate(rescale_spectrum(normalized, r), 0);

    SearchInstance si{g, 0, 1.0 / lambda1, GammaMode::exact_inverse_lambda1, r};
    Hamiltonian h = build_search_hamiltonian(si);
    QuantumState f = evolve(h, state_uniform(g.n), kPi / (2.0 * delta));
    const double overlap = std::norm(f.amplitudes(0));
    CHECK(overlap >= overlap_bound(c) - 0.1);

    // Same machinery on a drawn regular graph (weak bound, full pipeline).
    Graph rr = random_regular(100, 4, 2);
    Spectrum rs = eigendecompose(rr.adjacency);
    const double rc =
        std::max(std::abs(rs.eigenvalues(1)), std::abs(rs.eigenvalues(99))) / rs.eigenvalues(0);
    REQUIRE(rc < 1.0);
    rs.eigenvalues /= 4.0;
    const double rr_r = rescaling_root(rs, 0);
    const double rr_delta = delta_estimate(rescale_spectrum(rs, rr_r), 0);
    SearchInstance rr_si{rr, 0, 0.25, GammaMode::mean_field_inv_np, rr_r};
    QuantumState rf =
        evolve(build_search_hamiltonian(rr_si), state_uniform(100), kPi / (2.0 * rr_delta));
    CHECK(std::norm(rf.amplitudes(0)) >= overlap_bound(rc) - 0.1);
}

TEST_CASE("rescale_r outside the bracket is rejected") {
    Graph g = complete(10);  // c = 1/9
    SearchInstance si{g, 0, 1.0 / 9.0, GammaMode::exact_inverse_lambda1, 5.0};
    CHECK_THROWS_AS(build_search_hamiltonian(si), std::invalid_argument);
}

TEST_CASE("check_optimality_condition") {
    OptimalityReport good = check_optimality_condition(complete(100), 1.0 / 99.0);
    CHECK(good.condition_met);
    CHECK(good.bound == doctest::Approx(98.0 / 100.0).epsilon(1e-12));

    OptimalityReport empty = check_optimality_condition(erdos_renyi(8, 0.0, 1), 1.0);
    CHECK_FALSE(empty.condition_met);

    // Percolation regime: the spectral condition degrades.
    OptimalityReport sparse = check_optimality_condition(erdos_renyi(1000, 0.002, 3), 500.0);
    CHECK((sparse.c >= 0.95 || sparse.alpha < 0.95));
}

TEST_CASE("spectral gap below the bulk shrinks from p=0.1 to p=0.01 but stays open") {
    double gaps[2];
    const double ps[2] = {0.1, 0.01};
    for (int k = 0; k < 2; ++k) {
        const int n = 1000;
        Graph g = erdos_renyi(n, ps[k], 42);
        const double gamma = 1.0 / (n * ps[k]);
        SearchInstance si{g, typical_degree_vertex(g), gamma, GammaMode::mean_field_inv_np,
                          std::nullopt};
        const Spectrum& s = build_search_hamiltonian(si).spectrum();
        const double low2 = s.eigenvalues(n - 2);
        const double low3 = s.eigenvalues(n - 3);
        const double radius = gamma * 2.0 * std::sqrt(n * ps[k] * (1.0 - ps[k]));
        gaps[k] = low3 - low2;
        CHECK(gaps[k] > 0.25 * radius);  // lowest pair isolated from the bulk
        CHECK(low2 < -radius);
    }
    CHECK(gaps[1] < gaps[0]);
}

TEST_CASE("mean-field gamma*lambda1 lands within 1/sqrt(n) of 1") {
    const int n = 1000;
    const double p = 0.05;
    int inside = 0;
    for (int s = 0; s < 10; ++s) {
        Graph g = erdos_renyi(n, p, 4000 + s);
        const double lambda1 = eigendecompose(g.adjacency).eigenvalues(0);
        const double product = lambda1 / (n * p);
        if (product >= 1.0 - 1.0 / std::sqrt(double(n)) &&
            product <= 1.0 + 1.0 / std::sqrt(double(n)))
            ++inside;
    }
    CHECK(inside >= 9);
}

TEST_CASE("exact-gamma search on G(1000,0.1) reaches the delta=0 amplitude") {
    Graph g = erdos_renyi(1000, 0.1, 6);
    const double lambda1 = eigendecompose(g.adjacency).eigenvalues(0);
    SearchInstance si{g, 0, 1.0 / lambda1, GammaMode::exact_inverse_lambda1, std::nullopt};
    EvolutionTrace tr = run_search(si, kPi * std::sqrt(1000.0), 400);
    PerturbationPrediction pred = perturbation_prediction(1000, 1.0 / lambda1, lambda1);
    CHECK(std::abs(tr.peak_value - pred.amplitude) <= 0.1);
}

TEST_SUITE_END();
