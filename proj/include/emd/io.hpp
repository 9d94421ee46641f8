#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emd/chain.hpp"
#include "emd/cost_matrix.hpp"
#include "emd/distribution.hpp"

namespace emd {

// Distribution file: one decimal value per line, blank lines and '#' comments
// ignored. Order is bin order (chains) or leaf order (trees).
Distribution load_distribution(std::istream& in);
Distribution load_distribution_file(const std::string& path);

// Chain metric file: one positive cost per line, N-1 lines.
ChainMetric load_chain_metric(std::istream& in);
ChainMetric load_chain_metric_file(const std::string& path);

// Cost matrix: CSV, N rows of N comma-separated values.
CostMatrix load_cost_matrix(std::istream& in);
CostMatrix load_cost_matrix_file(const std::string& path);

void write_matrix_csv(std::ostream& out, const SquareMatrix& m);

// Shortest decimal string that round-trips to the same double.
std::string format_shortest(double v);
// 17 significant digits, the fixed width used in CSV output.
std::string format_sig17(double v);

std::string read_text_file(const std::string& path);

}  // namespace emd
