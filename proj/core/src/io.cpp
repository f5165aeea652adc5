#include "l0ssc/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace l0ssc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(const char* what, std::size_t line_no, const std::string& detail) {
  throw invalid_input(std::string(what) + ": line " + std::to_string(line_no) + ": " + detail);
}

double parse_double(const std::string& field, const char* what, std::size_t line_no) {
  const std::string t = trim(field);
  if (t.empty()) parse_fail(what, line_no, "empty field");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) parse_fail(what, line_no, "not a number: '" + t + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_data_csv(std::ostream& os, const Matrix& x) {
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (r) os << ',';
      os << format_double(x(r, j));
    }
    os << '\n';
  }
}

Matrix read_data_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string field =
          comma == std::string::npos ? line.substr(start) : line.substr(start, comma - start);
      row.push_back(parse_double(field, "data csv", line_no));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      parse_fail("data csv", line_no,
                 "expected " + std::to_string(rows.front().size()) + " fields, got " +
                     std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw invalid_input("data csv: no data rows");
  Matrix x(rows.front().size(), rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t r = 0; r < rows[j].size(); ++r) x(r, j) = rows[j][r];
  }
  return x;
}

void write_labels(std::ostream& os, const std::vector<int>& labels) {
  for (int l : labels) os << l << '\n';
}

std::vector<int> read_labels(std::istream& is) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size()) parse_fail("labels", line_no, "not an integer: '" + t + "'");
    if (v < 0) parse_fail("labels", line_no, "labels are 0-based, got " + t);
    labels.push_back(static_cast<int>(v));
  }
  if (labels.empty()) throw invalid_input("labels: no entries");
  return labels;
}

void write_ensemble_json(std::ostream& os, const SubspaceEnsemble& ensemble,
                         std::uint64_t seed) {
  nlohmann::json doc;
  doc["noise_bound"] = ensemble.noise_bound;
  doc["seed"] = seed;
  doc["dims"] = ensemble.dims;
  doc["labels"] = ensemble.labels;
  nlohmann::json bases = nlohmann::json::array();
  for (const Matrix& b : ensemble.bases) {
    nlohmann::json m;
    m["rows"] = b.rows();
    m["cols"] = b.cols();
    std::vector<double> data(b.data(), b.data() + b.rows() * b.cols());
    m["data"] = data;  // column-major
    bases.push_back(std::move(m));
  }
  doc["bases"] = std::move(bases);
  os << doc.dump(2) << '\n';
}

EnsembleFile read_ensemble_json(std::istream& is) {
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("ensemble json: ") + e.what());
  }
  try {
    EnsembleFile out;
    out.ensemble.noise_bound = doc.at("noise_bound").get<double>();
    out.seed = doc.at("seed").get<std::uint64_t>();
    out.ensemble.dims = doc.at("dims").get<std::vector<int>>();
    out.ensemble.labels = doc.at("labels").get<std::vector<int>>();
    for (const auto& m : doc.at("bases")) {
      const auto rows = m.at("rows").get<std::size_t>();
      const auto cols = m.at("cols").get<std::size_t>();
      const auto data = m.at("data").get<std::vector<double>>();
      if (data.size() != rows * cols)
        throw invalid_input("ensemble json: basis data length mismatch");
      Matrix b(rows, cols);
      std::copy(data.begin(), data.end(), b.data());
      out.ensemble.bases.push_back(std::move(b));
    }
    if (out.ensemble.bases.size() != out.ensemble.dims.size())
      throw invalid_input("ensemble json: bases and dims disagree");
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("ensemble json: ") + e.what());
  }
}

std::vector<std::pair<std::string, std::string>> read_config(std::istream& is) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) parse_fail("config", line_no, "expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) parse_fail("config", line_no, "empty key");
    for (const auto& [k, v] : entries) {
      if (k == key) parse_fail("config", line_no, "duplicate key '" + key + "'");
    }
    entries.emplace_back(key, value);
  }
  return entries;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot open file for writing: " + path);
  f << body;
  if (!f) throw invalid_input("write failed: " + path);
}

}  // namespace l0ssc
