#pragma once

#include <string>
#include <vector>

#include "glwire/types.hpp"

namespace glwire {

/// Floating-point formatting used for every CSV/JSON number the tools emit:
/// 17 significant digits round-trip doubles exactly, which keeps golden-file
/// comparisons meaningful.
std::string format_g17(double v);

/// Comma-separated, dot-decimal, LF-terminated, UTF-8.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// One wire snapshot: header "x,re_psi,im_psi,re_phi,im_phi".
struct SnapshotData {
  std::vector<double> x;
  std::vector<Complex> psi;
  std::vector<Complex> phi;
};

void write_snapshot_csv(const std::string& path, const SnapshotData& snap);
SnapshotData read_snapshot_csv(const std::string& path);

}  // namespace glwire
