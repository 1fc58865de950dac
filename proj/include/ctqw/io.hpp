#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ctqw/dynamics.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectra.hpp"

namespace ctqw {

// Every CSV number goes through this: 15 significant digits, '.' decimal,
// no separators, bit-stable across runs.
std::string fmt_g15(double v);

// Throw with the offending path in the message on any I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// {n, model, seed, param, edges: [[i,j],...]} with i<j, 0-indexed.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

// "i j" per line, i<j. Reading infers n as max vertex index + 1, so
// trailing isolated vertices do not survive the text round trip.
std::string graph_to_edge_list(const Graph& g);
Graph graph_from_edge_list(const std::string& text);

// CSV layouts named in the module interfaces.
std::string spectrum_to_csv(const Spectrum& s);
// Extra 0/1 column marking the `tagged_lowest` smallest eigenvalues.
std::string spectrum_to_csv_tagged(const Spectrum& s, int tagged_lowest);
std::string histogram_to_csv(const Histogram& h);
std::string trace_to_csv(const EvolutionTrace& t);
nlohmann::json spectral_report_to_json(const SpectralReport& r);

}  // namespace ctqw
