#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ctqw/protocols.hpp"
#include "ctqw/search.hpp"

namespace ctqw {

// Flat experiment configuration shared by every CLI subcommand. Fields map
// 1:1 onto flags / config-file keys.
struct ExperimentConfig {
    int n = 1000;
    double p = 0.1;
    int d = 3;
    std::string model = "erdos_renyi";
    std::uint64_t seed = 42;
    std::string gamma_mode = "meanfield";  // exact | meanfield | manual:<x>
    int marked = -1;  // -1: degree-typical vertex
    int sender = -1;    // -1: pick deterministically (smallest non-adjacent)
    int receiver = -1;
    int charlie = -1;
    int alice = -1;
    int bob = -1;
    double t_max = 0.0;  // 0: module default window
    int steps = kDefaultTraceSteps;
    int bins = 50;
    bool laplacian = false;  // spectrum command: also export I - D^{-1/2} A D^{-1/2}
    int ensemble_size = 10;
    std::string task = "search";  // ensemble task: search | transfer | bell
    int jobs = 1;
    std::vector<double> p_list = {0.1, 0.01, 0.002};
    std::filesystem::path out_dir = "out";
};

// Resolved gamma for a generated graph per the config's gamma_mode string.
double resolve_gamma(const Graph& g, const std::string& gamma_mode);
Graph generate_graph(const ExperimentConfig& cfg);
Graph generate_graph(const ExperimentConfig& cfg, std::uint64_t seed);

// Everything the per-instance search JSON report carries.
struct SearchRecord {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    int w = 0;
    double gamma = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double c = 0.0;
    double alpha = 0.0;
    double r = 0.0;       // rescaling root for H1 = A/lambda1
    double delta = 0.0;   // gamma*lambda1 - 1
    double peak_value = 0.0;
    double peak_time = 0.0;
    double predicted_amplitude = 0.0;
    double predicted_peak_time = 0.0;
};

SearchRecord run_search_experiment(const ExperimentConfig& cfg, std::uint64_t seed);
nlohmann::json to_json(const SearchRecord& rec);

struct ProtocolRecord {
    std::string kind;
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::vector<int> endpoints;
    std::vector<std::pair<int, int>> adjacent_endpoints;  // flagged, not fatal
    double gamma = 0.0;
    double predicted_time = 0.0;
    double fidelity_at_predicted_time = 0.0;
    double peak_fidelity = 0.0;
    double peak_time = 0.0;
};

ProtocolRecord run_transfer_experiment(const ExperimentConfig& cfg, std::uint64_t seed);
ProtocolRecord run_bell_experiment(const ExperimentConfig& cfg, std::uint64_t seed);
nlohmann::json to_json(const ProtocolRecord& rec);

// Command runners: write CSV/JSON artifacts under cfg.out_dir and return
// the written paths. Used directly by the CLI subcommands.
std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_spectrum(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_search(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_transfer(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_bell(const ExperimentConfig& cfg);

// The figure1 command: per p, the numeric-vs-predicted success curve and
// the tagged search-Hamiltonian spectrum.
std::vector<std::filesystem::path> run_figure1(const ExperimentConfig& cfg);
// The figure2 command: state transfer on G(100, 0.2) between the smallest
// non-adjacent endpoint pair.
std::vector<std::filesystem::path> run_figure2(const ExperimentConfig& cfg);

struct EnsembleSummary {
    std::vector<nlohmann::json> records;   // per-instance, index order
    nlohmann::json aggregate;              // mean/std/min/max per scalar
    int failures = 0;
    std::vector<std::filesystem::path> files;
};

// ensemble_size independent instances with seeds seed+0 ... seed+k-1, run
// with up to cfg.jobs threads. Individual failures are recorded per line
// and counted, not fatal. The aggregate written to disk is re-read and
// recomputed from the persisted records as a self-check.
EnsembleSummary run_ensemble(const ExperimentConfig& cfg);

// Aggregate statistics {mean, std, min, max} per numeric key over records.
nlohmann::json aggregate_records(const std::vector<nlohmann::json>& records);

// Chunked parallel map used for ensembles; results land in index order.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace ctqw
