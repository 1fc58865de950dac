#include "ctqw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ctqw/io.hpp"

namespace ctqw {

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double resolve_gamma(const Graph& g, const std::string& gamma_mode) {
    if (gamma_mode == "exact") return choose_gamma(g, GammaMode::exact_inverse_lambda1);
    if (gamma_mode == "meanfield") return choose_gamma(g, GammaMode::mean_field_inv_np);
    if (gamma_mode.rfind("manual:", 0) == 0) {
        const std::string value = gamma_mode.substr(7);
        std::size_t used = 0;
        double gamma = 0.0;
        try {
            gamma = std::stod(value, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("gamma: cannot parse manual value '" + value + "'");
        }
        if (used != value.size() || !(gamma > 0.0))
            throw std::invalid_argument("gamma: manual value must be a positive number");
        return gamma;
    }
    throw std::invalid_argument("gamma: expected exact, meanfield or manual:<x>, got '" +
                                gamma_mode + "'");
}

Graph generate_graph(const ExperimentConfig& cfg) { return generate_graph(cfg, cfg.seed); }

Graph generate_graph(const ExperimentConfig& cfg, std::uint64_t seed) {
    GraphModel model = graph_model_from_string(cfg.model);
    switch (model) {
        case GraphModel::erdos_renyi: return erdos_renyi(cfg.n, cfg.p, seed);
        case GraphModel::random_regular: return random_regular(cfg.n, cfg.d, seed);
        case GraphModel::complete: return complete(cfg.n);
        case GraphModel::custom:
            throw std::invalid_argument("model: custom graphs cannot be generated");
    }
    throw std::logic_error("unknown GraphModel");
}

namespace {
struct SearchRun {
    SearchRecord record;
    EvolutionTrace trace;
};

SearchRun search_full(const ExperimentConfig& cfg, std::uint64_t seed) {
    Graph g = generate_graph(cfg, seed);
    Spectrum adj_spec = eigendecompose(g.adjacency);
    const double gamma = cfg.gamma_mode == "exact" ? 1.0 / adj_spec.eigenvalues(0)
                                                    : resolve_gamma(g, cfg.gamma_mode);
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma: lambda1 <= 0 (graph has no edges?)");

    SpectralReport spec_rep = spectral_report(g, gamma, adj_spec);
    PerturbationPrediction pred = perturbation_prediction(g.n, gamma, spec_rep.lambda1);

    SearchInstance si;
    si.marked = cfg.marked >= 0 ? cfg.marked : typical_degree_vertex(g);
    si.graph = std::move(g);
    si.gamma = gamma;
    si.gamma_mode = cfg.gamma_mode == "exact"       ? GammaMode::exact_inverse_lambda1
                    : cfg.gamma_mode == "meanfield" ? GammaMode::mean_field_inv_np
                                                    : GammaMode::manual;

    SearchRun run;
    run.trace = run_search(si, cfg.t_max, cfg.steps);

    SearchRecord& rec = run.record;
    rec.n = si.graph.n;
    rec.p = si.graph.param;
    rec.seed = seed;
    rec.w = si.marked;
    rec.gamma = gamma;
    rec.lambda1 = spec_rep.lambda1;
    rec.lambda2 = spec_rep.lambda2;
    rec.c = spec_rep.ratio_c;
    rec.alpha = spec_rep.alpha;
    rec.delta = pred.delta;
    rec.peak_value = run.trace.peak_value;
    rec.peak_time = run.trace.peak_time;
    rec.predicted_amplitude = pred.amplitude;
    rec.predicted_peak_time = pred.predicted_peak_time;

    // Rescaling root for H1 = A/lambda1; undefined when the
    // spectral condition fails (percolation regime).
    rec.r = kNaN;
    if (spec_rep.ratio_c < 1.0 && spec_rep.lambda1 > 0.0) {
        adj_spec.eigenvalues /= spec_rep.lambda1;
        rec.r = rescaling_root(adj_spec, si.marked);
    }
    return run;
}
}  // namespace

SearchRecord run_search_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
    return search_full(cfg, seed).record;
}

nlohmann::json to_json(const SearchRecord& rec) {
    return {{"n", rec.n},
            {"p", rec.p},
            {"seed", rec.seed},
            {"w", rec.w},
            {"gamma", rec.gamma},
            {"lambda1", rec.lambda1},
            {"lambda2", rec.lambda2},
            {"c", rec.c},
            {"alpha", rec.alpha},
            {"r", rec.r},
            {"delta", rec.delta},
            {"peak_value", rec.peak_value},
            {"peak_time", rec.peak_time},
            {"predicted_amplitude", rec.predicted_amplitude},
            {"predicted_peak_time", rec.predicted_peak_time}};
}

namespace {
ProtocolRecord protocol_record(const ProtocolSpec& spec, const ProtocolResult& res,
                               std::uint64_t seed) {
    ProtocolRecord rec;
    rec.kind = to_string(spec.kind);
    rec.n = spec.graph.n;
    rec.p = spec.graph.param;
    rec.seed = seed;
    rec.endpoints.assign(spec.endpoints.begin(),
                         spec.endpoints.begin() + (spec.kind == ProtocolKind::transfer ? 2 : 3));
    rec.adjacent_endpoints = adjacent_endpoint_pairs(spec);
    rec.gamma = spec.gamma;
    rec.predicted_time = res.predicted_time;
    rec.fidelity_at_predicted_time = res.fidelity_at_predicted_time;
    rec.peak_fidelity = res.peak_fidelity;
    rec.peak_time = res.trace.peak_time;
    return rec;
}
}  // namespace

namespace {
struct ProtocolRun {
    ProtocolRecord record;
    ProtocolResult result;
};

ProtocolRun transfer_full(const ExperimentConfig& cfg, std::uint64_t seed) {
    Graph g = generate_graph(cfg, seed);
    int sender = cfg.sender, receiver = cfg.receiver;
    if (sender < 0 || receiver < 0) std::tie(sender, receiver) = smallest_nonadjacent_pair(g);
    double gamma = cfg.gamma_mode == "meanfield" ? 0.0 : resolve_gamma(g, cfg.gamma_mode);
    ProtocolSpec spec = make_transfer_spec(std::move(g), sender, receiver, gamma);
    ProtocolRun run;
    run.result = run_transfer(spec, cfg.t_max, cfg.steps);
    run.record = protocol_record(spec, run.result, seed);
    return run;
}

ProtocolRun bell_full(const ExperimentConfig& cfg, std::uint64_t seed) {
    Graph g = generate_graph(cfg, seed);
    int charlie = cfg.charlie, alice = cfg.alice, bob = cfg.bob;
    if (charlie < 0 || alice < 0 || bob < 0) {
        auto triple = smallest_nonadjacent_triple(g);
        charlie = triple[0];
        alice = triple[1];
        bob = triple[2];
    }
    double gamma = cfg.gamma_mode == "meanfield" ? 0.0 : resolve_gamma(g, cfg.gamma_mode);
    ProtocolSpec spec = make_bell_spec(std::move(g), charlie, alice, bob, gamma);
    ProtocolRun run;
    run.result = run_bell(spec, cfg.t_max, cfg.steps);
    run.record = protocol_record(spec, run.result, seed);
    return run;
}
}  // namespace

ProtocolRecord run_transfer_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
    return transfer_full(cfg, seed).record;
}

ProtocolRecord run_bell_experiment(const ExperimentConfig& cfg, std::uint64_t seed) {
    return bell_full(cfg, seed).record;
}

nlohmann::json to_json(const ProtocolRecord& rec) {
    nlohmann::json adjacent = nlohmann::json::array();
    for (auto [u, v] : rec.adjacent_endpoints) adjacent.push_back({u, v});
    return {{"kind", rec.kind},
            {"n", rec.n},
            {"p", rec.p},
            {"seed", rec.seed},
            {"endpoints", rec.endpoints},
            {"adjacent_endpoints", std::move(adjacent)},
            {"gamma", rec.gamma},
            {"predicted_time", rec.predicted_time},
            {"fidelity_at_predicted_time", rec.fidelity_at_predicted_time},
            {"peak_fidelity", rec.peak_fidelity},
            {"peak_time", rec.peak_time}};
}

std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& cfg) {
    Graph g = generate_graph(cfg);
    validate_graph(g);
    const auto json_path = cfg.out_dir / "graph.json";
    const auto edges_path = cfg.out_dir / "edges.txt";
    write_text_file(json_path, graph_to_json(g).dump(2) + "\n");
    write_text_file(edges_path, graph_to_edge_list(g));
    return {json_path, edges_path};
}

std::vector<std::filesystem::path> cmd_spectrum(const ExperimentConfig& cfg) {
    Graph g = generate_graph(cfg);
    Spectrum s = eigendecompose(g.adjacency);
    const double gamma = cfg.gamma_mode == "exact" ? 1.0 / s.eigenvalues(0)
                                                   : resolve_gamma(g, cfg.gamma_mode);
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("gamma: lambda1 <= 0 (graph has no edges?)");

    nlohmann::json report = spectral_report_to_json(spectral_report(g, gamma, s));
    report["n"] = g.n;
    report["model"] = to_string(g.model);
    report["seed"] = g.seed;
    report["param"] = g.param;
    report["gamma"] = gamma;
    report["isolated_vertices"] = isolated_vertex_count(g);
    report["lambda1_multiplicity"] = multiplicity(s, s.eigenvalues(0));

    std::vector<std::filesystem::path> files;
    files.push_back(cfg.out_dir / "spectrum.csv");
    write_text_file(files.back(), spectrum_to_csv(s));
    files.push_back(cfg.out_dir / "spectral_report.json");
    write_text_file(files.back(), report.dump(2) + "\n");
    files.push_back(cfg.out_dir / "bulk_histogram.csv");
    write_text_file(files.back(), histogram_to_csv(empirical_bulk_density(s, cfg.bins)));
    if (cfg.laplacian) {
        files.push_back(cfg.out_dir / "laplacian_spectrum.csv");
        write_text_file(files.back(), spectrum_to_csv(eigendecompose(normalized_laplacian(g))));
    }
    return files;
}

std::vector<std::filesystem::path> cmd_search(const ExperimentConfig& cfg) {
    SearchRun run = search_full(cfg, cfg.seed);

    std::vector<std::filesystem::path> files;
    files.push_back(cfg.out_dir / "search_trace.csv");
    write_text_file(files.back(), trace_to_csv(run.trace));
    files.push_back(cfg.out_dir / "search_report.json");
    write_text_file(files.back(), to_json(run.record).dump(2) + "\n");
    return files;
}

namespace {
std::string protocol_trace_csv(const EvolutionTrace& t) {
    std::string out = "t,fidelity\n";
    for (int k = 0; k < t.times.size(); ++k) {
        out += fmt_g15(t.times(k));
        out += ',';
        out += fmt_g15(t.probabilities(k));
        out += '\n';
    }
    return out;
}
}  // namespace

std::vector<std::filesystem::path> cmd_transfer(const ExperimentConfig& cfg) {
    ProtocolRun run = transfer_full(cfg, cfg.seed);

    std::vector<std::filesystem::path> files;
    files.push_back(cfg.out_dir / "transfer_trace.csv");
    write_text_file(files.back(), protocol_trace_csv(run.result.trace));
    files.push_back(cfg.out_dir / "transfer_report.json");
    write_text_file(files.back(), to_json(run.record).dump(2) + "\n");
    return files;
}

std::vector<std::filesystem::path> cmd_bell(const ExperimentConfig& cfg) {
    ProtocolRun run = bell_full(cfg, cfg.seed);

    std::vector<std::filesystem::path> files;
    files.push_back(cfg.out_dir / "bell_trace.csv");
    write_text_file(files.back(), protocol_trace_csv(run.result.trace));
    files.push_back(cfg.out_dir / "bell_report.json");
    write_text_file(files.back(), to_json(run.record).dump(2) + "\n");
    return files;
}

std::vector<std::filesystem::path> run_figure1(const ExperimentConfig& cfg) {
    std::vector<std::filesystem::path> files;
    nlohmann::json summary = nlohmann::json::array();
    for (double p : cfg.p_list) {
        ExperimentConfig sub = cfg;
        sub.p = p;
        sub.model = "erdos_renyi";
        if (sub.t_max <= 0.0) sub.t_max = kPi * std::sqrt(double(sub.n));

        Graph g = generate_graph(sub);
        const double gamma = resolve_gamma(g, sub.gamma_mode);
        const int marked = sub.marked >= 0 ? sub.marked : typical_degree_vertex(g);
        SearchInstance si{g, marked, gamma, GammaMode::manual, std::nullopt};
        Hamiltonian h = build_search_hamiltonian(si);
        EvolutionTrace trace = trace_probability(h, state_uniform(g.n),
                                                 state_basis(g.n, si.marked), sub.t_max, sub.steps);

        std::string curve = "t,numeric,predicted\n";
        const double sqrt_n = std::sqrt(double(g.n));
        for (int k = 0; k < trace.times.size(); ++k) {
            const double sn = std::sin(trace.times(k) / sqrt_n);
            curve += fmt_g15(trace.times(k));
            curve += ',';
            curve += fmt_g15(trace.probabilities(k));
            curve += ',';
            curve += fmt_g15(sn * sn);
            curve += '\n';
        }
        const std::string tag = "p" + fmt_g15(p);
        files.push_back(cfg.out_dir / ("figure1_" + tag + "_curve.csv"));
        write_text_file(files.back(), curve);
        files.push_back(cfg.out_dir / ("figure1_" + tag + "_spectrum.csv"));
        write_text_file(files.back(), spectrum_to_csv_tagged(h.spectrum(), 2));

        summary.push_back({{"p", p},
                           {"n", g.n},
                           {"seed", g.seed},
                           {"gamma", gamma},
                           {"peak_value", trace.peak_value},
                           {"peak_time", trace.peak_time}});
    }
    files.push_back(cfg.out_dir / "figure1_summary.json");
    write_text_file(files.back(), summary.dump(2) + "\n");
    return files;
}

std::vector<std::filesystem::path> run_figure2(const ExperimentConfig& cfg) {
    ExperimentConfig sub = cfg;
    sub.model = "erdos_renyi";
    ProtocolRun run = transfer_full(sub, sub.seed);

    std::vector<std::filesystem::path> files;
    files.push_back(cfg.out_dir / "figure2_trace.csv");
    write_text_file(files.back(), protocol_trace_csv(run.result.trace));
    files.push_back(cfg.out_dir / "figure2_summary.json");
    write_text_file(files.back(), to_json(run.record).dump(2) + "\n");
    return files;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int threads = std::min(jobs, count);
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

nlohmann::json aggregate_records(const std::vector<nlohmann::json>& records) {
    // Identifiers are not observables; keep them out of the statistics.
    static const std::vector<std::string> kSkip = {"index", "seed", "n", "w"};
    nlohmann::json agg = nlohmann::json::object();
    std::vector<std::string> keys;
    for (const auto& rec : records)
        for (auto it = rec.begin(); it != rec.end(); ++it)
            if (it.value().is_number() &&
                std::find(kSkip.begin(), kSkip.end(), it.key()) == kSkip.end() &&
                std::find(keys.begin(), keys.end(), it.key()) == keys.end())
                keys.push_back(it.key());
    std::sort(keys.begin(), keys.end());

    for (const auto& key : keys) {
        std::vector<double> values;
        for (const auto& rec : records) {
            if (!rec.contains(key) || !rec[key].is_number()) continue;
            const double v = rec[key].get<double>();
            if (std::isfinite(v)) values.push_back(v);
        }
        if (values.empty()) continue;
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= values.size();
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        const double stddev = values.size() > 1 ? std::sqrt(var / (values.size() - 1)) : 0.0;
        agg[key] = {{"mean", mean},
                    {"std", stddev},
                    {"min", *std::min_element(values.begin(), values.end())},
                    {"max", *std::max_element(values.begin(), values.end())},
                    {"count", values.size()}};
    }
    return agg;
}

EnsembleSummary run_ensemble(const ExperimentConfig& cfg) {
    if (cfg.ensemble_size < 1)
        throw std::invalid_argument("size: ensemble size must be >= 1");
    if (cfg.task != "search" && cfg.task != "transfer" && cfg.task != "bell")
        throw std::invalid_argument("task: expected search, transfer or bell, got '" + cfg.task +
                                    "'");

    EnsembleSummary summary;
    summary.records.resize(cfg.ensemble_size);
    std::atomic<int> failures{0};

    parallel_for(cfg.ensemble_size, cfg.jobs, [&](int i) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        nlohmann::json rec;
        try {
            if (cfg.task == "search")
                rec = to_json(run_search_experiment(cfg, seed));
            else if (cfg.task == "transfer")
                rec = to_json(run_transfer_experiment(cfg, seed));
            else
                rec = to_json(run_bell_experiment(cfg, seed));
        } catch (const std::exception& e) {
            rec = {{"seed", seed}, {"error", e.what()}};
            failures.fetch_add(1);
        }
        rec["index"] = i;
        summary.records[i] = std::move(rec);
    });
    summary.failures = failures.load();
    summary.aggregate = aggregate_records(summary.records);
    summary.aggregate["instances"] = cfg.ensemble_size;
    summary.aggregate["failures"] = summary.failures;

    std::string lines;
    for (const auto& rec : summary.records) {
        lines += rec.dump();
        lines += '\n';
    }
    const auto records_path = cfg.out_dir / "ensemble_records.jsonl";
    const auto aggregate_path = cfg.out_dir / "ensemble_summary.json";
    write_text_file(records_path, lines);
    write_text_file(aggregate_path, summary.aggregate.dump(2) + "\n");
    summary.files = {records_path, aggregate_path};

    // Invariant: the persisted per-instance lines must reproduce the
    // persisted aggregate.
    std::istringstream in(read_text_file(records_path));
    std::vector<nlohmann::json> reread;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) reread.push_back(nlohmann::json::parse(line));
    nlohmann::json recheck = aggregate_records(reread);
    recheck["instances"] = cfg.ensemble_size;
    recheck["failures"] = summary.failures;
    if (recheck != summary.aggregate)
        throw std::runtime_error("ensemble: aggregate is not recomputable from written records");

    return summary;
}

}  // namespace ctqw
