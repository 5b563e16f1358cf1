#include "glwire/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace glwire {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("write_csv: cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
  if (!out) throw NumericalFailure("write_csv: write failed for " + path);
}

void write_snapshot_csv(const std::string& path, const SnapshotData& snap) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(snap.x.size());
  for (size_t k = 0; k < snap.x.size(); ++k) {
    rows.push_back({format_g17(snap.x[k]), format_g17(snap.psi[k].real()),
                    format_g17(snap.psi[k].imag()), format_g17(snap.phi[k].real()),
                    format_g17(snap.phi[k].imag())});
  }
  write_csv(path, {"x", "re_psi", "im_psi", "re_phi", "im_phi"}, rows);
}

SnapshotData read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("read_snapshot_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw InvalidInput("read_snapshot_csv: empty file " + path);
  if (line.rfind("x,re_psi,im_psi", 0) != 0)
    throw InvalidInput("read_snapshot_csv: unexpected header in " + path);
  SnapshotData snap;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double vals[5] = {0, 0, 0, 0, 0};
    char comma;
    for (int i = 0; i < 5; ++i) {
      if (!(ss >> vals[i]))
        throw InvalidInput("read_snapshot_csv: bad row '" + line + "'");
      if (i < 4) ss >> comma;
    }
    snap.x.push_back(vals[0]);
    snap.psi.emplace_back(vals[1], vals[2]);
    snap.phi.emplace_back(vals[3], vals[4]);
  }
  return snap;
}

}  // namespace glwire
