#include "ctqw/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ctqw {

std::string fmt_g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory " + path.parent_path().string() +
                                     ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [i, j] : g.edges()) edges.push_back({i, j});
    return {{"n", g.n},
            {"model", to_string(g.model)},
            {"seed", g.seed},
            {"param", g.param},
            {"edges", std::move(edges)}};
}

Graph graph_from_json(const nlohmann::json& j) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    Graph g = graph_from_edges(j.at("n").get<int>(), edges);
    g.model = graph_model_from_string(j.at("model").get<std::string>());
    g.seed = j.at("seed").get<std::uint64_t>();
    g.param = j.at("param").get<double>();
    return g;
}

std::string graph_to_edge_list(const Graph& g) {
    std::string out;
    for (auto [i, j] : g.edges()) {
        out += std::to_string(i);
        out += ' ';
        out += std::to_string(j);
        out += '\n';
    }
    return out;
}

Graph graph_from_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::pair<int, int>> edges;
    int n = 0;
    int i, j;
    while (in >> i >> j) {
        edges.emplace_back(std::min(i, j), std::max(i, j));
        n = std::max({n, i + 1, j + 1});
    }
    if (n == 0) throw std::runtime_error("edge list: no edges found");
    return graph_from_edges(n, edges);
}

std::string spectrum_to_csv(const Spectrum& s) {
    std::string out = "index,eigenvalue\n";
    for (int k = 0; k < s.dim(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += fmt_g15(s.eigenvalues(k));
        out += '\n';
    }
    return out;
}

std::string spectrum_to_csv_tagged(const Spectrum& s, int tagged_lowest) {
    std::string out = "index,eigenvalue,is_lowest_pair\n";
    for (int k = 0; k < s.dim(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += fmt_g15(s.eigenvalues(k));
        out += ',';
        out += (k >= s.dim() - tagged_lowest) ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string histogram_to_csv(const Histogram& h) {
    std::string out = "bin_left,bin_right,density\n";
    for (int b = 0; b < h.density.size(); ++b) {
        out += fmt_g15(h.edges(b));
        out += ',';
        out += fmt_g15(h.edges(b + 1));
        out += ',';
        out += fmt_g15(h.density(b));
        out += '\n';
    }
    return out;
}

std::string trace_to_csv(const EvolutionTrace& t) {
    std::string out = "t,probability\n";
    for (int k = 0; k < t.times.size(); ++k) {
        out += fmt_g15(t.times(k));
        out += ',';
        out += fmt_g15(t.probabilities(k));
        out += '\n';
    }
    return out;
}

nlohmann::json spectral_report_to_json(const SpectralReport& r) {
    return {{"lambda1", r.lambda1},
            {"lambda2", r.lambda2},
            {"lambda_min", r.lambda_min},
            {"ratio_c", r.ratio_c},
            {"alpha", r.alpha},
            {"delocalization_rhs", r.delocalization_rhs},
            {"wigner_radius", r.wigner_radius}};
}

}  // namespace ctqw
