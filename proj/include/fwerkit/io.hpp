#ifndef FWERKIT_IO_HPP
#define FWERKIT_IO_HPP

#include <string>
#include <variant>
#include <vector>

#include "fwerkit/data_matrix.hpp"
#include "fwerkit/hierarchy.hpp"
#include "fwerkit/pvalue_table.hpp"
#include "fwerkit/simulate.hpp"

namespace fwerkit {

enum class RenderFormat { csv, pretty };
RenderFormat render_format_from_name(const std::string& name);

// Optional per-row columns of a p-value CSV. A NaN weight/order or empty
// family string means the cell (or the whole column) was absent.
struct PValueHints {
  bool has_family = false;
  bool has_weight = false;
  bool has_order = false;
  std::vector<std::string> family;
  std::vector<double> weight;
  std::vector<double> order;
};

struct ParsedPValues {
  PValueTable table;  // file order
  PValueHints hints;
};

// Delimited text with a header; required columns hypothesis_id and p_value,
// optional family/weight/order. Malformed rows are reported with their line
// number via input_error.
ParsedPValues parse_pvalue_csv(const std::string& text);

// Builds a fallback plan from a parsed file carrying a weight column
// (ordered by the order column when present, file order otherwise). The
// weights must sum to 1 within 1e-6.
FallbackPlan fallback_plan_from_hints(const ParsedPValues& parsed, double alpha);

using Plan = std::variant<FallbackPlan, GatePlan>;

// JSON plan document: {"alpha":..., "steps":[{"id":..., "weight":...}]} for
// fallback, or {"alpha":..., "mode":..., "intra_method":...,
// "families":[{"id":..., "members":[...]}]} for gatekeeping. The parsed plan
// is validated; every violation is listed in the thrown plan_error.
Plan parse_plan(const std::string& text);

// unit_id,group,<outcome...> with group in {0,1}; an empty cell is missing.
DataMatrix parse_data_matrix_csv(const std::string& text);

std::string render(const AdjustmentResult& result, RenderFormat format, int decimals = 3);
std::string render(const FallbackTrace& trace, RenderFormat format, int decimals = 3);
std::string render(const GateTrace& trace, RenderFormat format, int decimals = 3);
std::string render(const WYResult& result, RenderFormat format, int decimals = 3,
                   double alpha = 0.05);
std::string render(const SimulationReport& report, RenderFormat format, int decimals = 3);

// Inverses of the csv renderings, at the printed precision.
AdjustmentResult parse_adjustment_csv(const std::string& text);
FallbackTrace parse_fallback_trace_csv(const std::string& text);

// Low-level helpers shared with tests.
std::vector<std::vector<std::string>> split_csv(const std::string& text);
std::string format_real(double x, int decimals);  // "NA" for NaN
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fwerkit

#endif
