#ifndef FWERKIT_PVALUE_TABLE_HPP
#define FWERKIT_PVALUE_TABLE_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace fwerkit {

struct PValueEntry {
  std::string hypothesis_id;
  double p = 0.0;
};

// Named hypotheses with unadjusted p-values. Entry order is the user's
// presentation order and is preserved in every output.
struct PValueTable {
  std::vector<PValueEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  void add(std::string id, double p) { entries.push_back({std::move(id), p}); }

  // Index of a hypothesis, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const std::string& id) const {
    for (std::size_t i = 0; i < entries.size(); ++i)
      if (entries[i].hypothesis_id == id) return i;
    return npos;
  }
};

// Throws input_error on empty/duplicate ids or p outside [0,1].
void validate_table(const PValueTable& table);

enum class Method {
  bonferroni,
  holm,
  hochberg,
  sidak_holm,
  westfall_young,
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);  // accepts "sidak-holm" and "sidak_holm"

struct AdjustmentEntry {
  std::string hypothesis_id;
  double p_raw = 0.0;
  double p_adjusted = 0.0;
  bool rejected = false;
  int rank = 0;  // 1-based position in the sorted-by-p_raw order
};

// Per-hypothesis adjusted p-values plus the accept/reject decisions.
// Entries keep the input order of the table they were computed from.
struct AdjustmentResult {
  std::vector<AdjustmentEntry> entries;
  Method method = Method::bonferroni;
  double alpha = 0.05;

  std::vector<std::string> rejected_ids() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
      if (e.rejected) out.push_back(e.hypothesis_id);
    return out;
  }
};

}  // namespace fwerkit

#endif
