#ifndef FWERKIT_FIXTURES_HPP
#define FWERKIT_FIXTURES_HPP

#include <string>
#include <vector>

#include "fwerkit/hierarchy.hpp"
#include "fwerkit/pvalue_table.hpp"

// Published values from the Piso Firme evaluation tables, embedded so the
// replicate command runs self-contained. Models 1-3 are the study's
// covariate specifications; published numbers are printed at 3 decimals.
namespace fwerkit::fixtures {

const std::vector<std::string>& floor_ids();   // 5 housing outcomes
const std::vector<std::string>& health_ids();  // 7 child health outcomes

struct AdjustFixture {
  std::vector<std::string> ids;
  std::vector<double> p_raw;
  std::vector<double> published_wy;     // not recomputable without microdata
  std::vector<double> published_holm;
  std::vector<double> published_sidak;
  std::vector<bool> published_significant_10pct;
};

AdjustFixture table1(int model);  // housing outcomes; identical across models
AdjustFixture table2(int model);  // health outcomes

struct FallbackFixture {
  FallbackPlan plan;   // 12 ordered steps, alpha 0.10
  PValueTable table;   // unadjusted p-values for the model
  std::vector<double> published_initial;
  std::vector<double> published_propagation;
  std::vector<bool> published_reject;
};

FallbackFixture table3(int model);

struct GateFixture {
  GatePlan plan;       // F1 housing / F2 health / F3 cognitive, serial Holm, alpha 0.10
  PValueTable table;
  // Published adjusted values per family, sorted ascending: the F2 rows are
  // printed against the wrong hypotheses, so only the multiset is meaningful.
  std::vector<std::vector<double>> published_holm_sorted;
  std::vector<std::vector<double>> published_sidak_sorted;
  std::vector<std::vector<double>> published_wy_sorted;
  std::vector<std::string> notes;
};

GateFixture table4();

PValueTable table2_inputs(int model);    // the 7 health rows
PValueTable extended_inputs(int model);  // housing + health (12 rows)

}  // namespace fwerkit::fixtures

#endif
