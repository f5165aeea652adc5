#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "l0ssc/model.hpp"
#include "l0ssc/numkern.hpp"

namespace l0ssc {

// Decimal rendering shared by every writer: 17 significant digits, enough
// for a double to survive a write/read round trip bit-exactly.
std::string format_double(double v);

// Data files carry one point per row (n rows of d comma-separated values, no
// header); in memory points are columns, so readers transpose. Parse errors
// report the 1-based line number.
void write_data_csv(std::ostream& os, const Matrix& x);
Matrix read_data_csv(std::istream& is);

// One 0-based class index per line.
void write_labels(std::ostream& os, const std::vector<int>& labels);
std::vector<int> read_labels(std::istream& is);

// Ground-truth sidecar written next to a generated dataset.
struct EnsembleFile {
  SubspaceEnsemble ensemble;
  std::uint64_t seed = 0;
};

void write_ensemble_json(std::ostream& os, const SubspaceEnsemble& ensemble,
                         std::uint64_t seed);
EnsembleFile read_ensemble_json(std::istream& is);

// key=value lines; '#' starts a comment, blank lines are skipped, repeated
// keys are rejected. Values stay raw text; interpretation is the caller's.
std::vector<std::pair<std::string, std::string>> read_config(std::istream& is);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& body);

}  // namespace l0ssc
