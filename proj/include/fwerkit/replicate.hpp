#ifndef FWERKIT_REPLICATE_HPP
#define FWERKIT_REPLICATE_HPP

#include <string>
#include <vector>

#include "fwerkit/io.hpp"

namespace fwerkit {

struct ReplicationCell {
  std::string row;
  std::string column;
  std::string computed;   // formatted value, or a placeholder when not recomputable
  std::string published;
  bool comparable = true; // false: informational only (resampling columns)
  bool ok = true;         // within tolerance; true for non-comparable cells
};

struct ReplicationReport {
  std::string table_id;
  int model = 3;
  double tolerance = 0.010;
  std::vector<ReplicationCell> cells;
  std::vector<std::string> notes;

  bool all_ok() const {
    for (const auto& c : cells)
      if (c.comparable && !c.ok) return false;
    return true;
  }
};

// Recomputes one published table from the embedded fixtures. Accepted ids:
// 1, 2, 3, 4 and the appendix variants 1A, 2A, 3A; models 1-3 (table 4 is
// published for model 3 only).
ReplicationReport replicate_table(const std::string& table_id, int model);

std::string render(const ReplicationReport& report, RenderFormat format);

}  // namespace fwerkit

#endif
