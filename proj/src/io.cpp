#include "emd/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace emd {
namespace {

// Strip comments and surrounding whitespace; empty result means "skip".
std::string clean_line(std::string line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  const auto first = line.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = line.find_last_not_of(" \t\r\n");
  return line.substr(first, last - first + 1);
}

double parse_double(const std::string& token, int lineno) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    raise(errc::parse_error, "line " + std::to_string(lineno) + ": bad number '" + token + "'");
  }
  if (pos != token.size())
    raise(errc::parse_error, "line " + std::to_string(lineno) + ": bad number '" + token + "'");
  return v;
}

std::vector<double> load_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = clean_line(line);
    if (body.empty()) continue;
    values.push_back(parse_double(body, lineno));
  }
  return values;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open '" + path + "'");
  return in;
}

}  // namespace

Distribution load_distribution(std::istream& in) { return Distribution(load_values(in)); }

Distribution load_distribution_file(const std::string& path) {
  auto in = open_file(path);
  return load_distribution(in);
}

ChainMetric load_chain_metric(std::istream& in) { return ChainMetric(load_values(in)); }

ChainMetric load_chain_metric_file(const std::string& path) {
  auto in = open_file(path);
  return load_chain_metric(in);
}

CostMatrix load_cost_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = clean_line(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::string cell;
    std::istringstream ls(body);
    while (std::getline(ls, cell, ',')) row.push_back(parse_double(clean_line(cell), lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(errc::parse_error, "empty cost matrix");
  const size_t n = rows.size();
  std::vector<double> data;
  data.reserve(n * n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      raise(errc::parse_error, "row " + std::to_string(i + 1) + " has " +
                                   std::to_string(rows[i].size()) + " values, expected " +
                                   std::to_string(n));
    data.insert(data.end(), rows[i].begin(), rows[i].end());
  }
  return CostMatrix(static_cast<int>(n), std::move(data));
}

CostMatrix load_cost_matrix_file(const std::string& path) {
  auto in = open_file(path);
  return load_cost_matrix(in);
}

void write_matrix_csv(std::ostream& out, const SquareMatrix& m) {
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      if (j) out << ',';
      out << format_sig17(m.at(i, j));
    }
    out << '\n';
  }
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  auto in = open_file(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace emd
