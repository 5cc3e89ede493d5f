#include "fwerkit/adjust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "fwerkit/errors.hpp"

namespace fwerkit {

void validate_table(const PValueTable& table) {
  std::unordered_set<std::string> seen;
  for (const auto& e : table.entries) {
    if (e.hypothesis_id.empty())
      throw input_error("hypothesis_id must be non-empty");
    if (!seen.insert(e.hypothesis_id).second)
      throw input_error("duplicate hypothesis_id '" + e.hypothesis_id + "'");
    if (!(e.p >= 0.0 && e.p <= 1.0))
      throw input_error("p-value " + std::to_string(e.p) + " for '" +
                        e.hypothesis_id + "' outside [0,1]");
  }
}

std::string method_name(Method m) {
  switch (m) {
    case Method::bonferroni: return "bonferroni";
    case Method::holm: return "holm";
    case Method::hochberg: return "hochberg";
    case Method::sidak_holm: return "sidak_holm";
    case Method::westfall_young: return "westfall_young";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "bonferroni") return Method::bonferroni;
  if (s == "holm") return Method::holm;
  if (s == "hochberg") return Method::hochberg;
  if (s == "sidak_holm") return Method::sidak_holm;
  if (s == "westfall_young") return Method::westfall_young;
  throw input_error("unknown method '" + name + "'");
}

double global_null_fwer(std::size_t m, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw input_error("alpha must lie in [0,1]");
  if (m == 0) return 0.0;
  return 1.0 - std::pow(1.0 - alpha, static_cast<double>(m));
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw input_error("alpha must lie in (0,1]");
}

// Indices of the table sorted by p ascending; ties keep input order.
std::vector<std::size_t> sorted_order(const PValueTable& table) {
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.entries[a].p < table.entries[b].p;
  });
  return order;
}

AdjustmentResult assemble(const PValueTable& table,
                          const std::vector<std::size_t>& order,
                          const std::vector<double>& adjusted_by_rank,
                          Method method, double alpha) {
  AdjustmentResult result;
  result.method = method;
  result.alpha = alpha;
  result.entries.resize(table.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& src = table.entries[order[r]];
    auto& dst = result.entries[order[r]];
    dst.hypothesis_id = src.hypothesis_id;
    dst.p_raw = src.p;
    dst.p_adjusted = std::min(1.0, adjusted_by_rank[r]);
    dst.rank = static_cast<int>(r + 1);
    dst.rejected = dst.p_adjusted <= alpha;
  }
  return result;
}

}  // namespace

AdjustmentResult bonferroni_adjust(const PValueTable& table, double alpha) {
  check_alpha(alpha);
  validate_table(table);
  const double m = static_cast<double>(table.size());
  auto order = sorted_order(table);
  std::vector<double> adj(order.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    adj[r] = m * table.entries[order[r]].p;
  return assemble(table, order, adj, Method::bonferroni, alpha);
}

AdjustmentResult holm_adjust(const PValueTable& table, double alpha) {
  check_alpha(alpha);
  validate_table(table);
  const std::size_t m = table.size();
  auto order = sorted_order(table);
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    running = std::max(running, static_cast<double>(m - r) * table.entries[order[r]].p);
    adj[r] = running;
  }
  return assemble(table, order, adj, Method::holm, alpha);
}

AdjustmentResult hochberg_adjust(const PValueTable& table, double alpha) {
  check_alpha(alpha);
  validate_table(table);
  const std::size_t m = table.size();
  auto order = sorted_order(table);
  std::vector<double> adj(m);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    running = std::min(running, static_cast<double>(m - r) * table.entries[order[r]].p);
    adj[r] = running;
  }
  return assemble(table, order, adj, Method::hochberg, alpha);
}

AdjustmentResult sidak_holm_adjust(const PValueTable& table, double alpha) {
  check_alpha(alpha);
  validate_table(table);
  const std::size_t m = table.size();
  auto order = sorted_order(table);
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double p = table.entries[order[r]].p;
    running = std::max(running, 1.0 - std::pow(1.0 - p, static_cast<double>(m - r)));
    adj[r] = running;
  }
  return assemble(table, order, adj, Method::sidak_holm, alpha);
}

AdjustmentResult adjust(const PValueTable& table, Method method, double alpha) {
  switch (method) {
    case Method::bonferroni: return bonferroni_adjust(table, alpha);
    case Method::holm: return holm_adjust(table, alpha);
    case Method::hochberg: return hochberg_adjust(table, alpha);
    case Method::sidak_holm: return sidak_holm_adjust(table, alpha);
    case Method::westfall_young:
      throw input_error("westfall_young requires a data matrix, not a p-value table");
  }
  throw input_error("unknown method");
}

AdjustmentResult decide(AdjustmentResult result, double alpha) {
  check_alpha(alpha);
  result.alpha = alpha;
  for (auto& e : result.entries) e.rejected = e.p_adjusted <= alpha;
  return result;
}

}  // namespace fwerkit
