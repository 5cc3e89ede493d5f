#include "fwerkit/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fwerkit/adjust.hpp"
#include "fwerkit/errors.hpp"
#include "fwerkit/resample.hpp"

namespace fwerkit {

namespace {

constexpr double kWeightSumTol = 1e-9;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw input_error("alpha must lie in (0,1]");
}

void require_valid(const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid plan:";
  for (const auto& v : violations) msg << "\n  - " << v;
  throw plan_error(msg.str());
}

double lookup_p(const PValueTable& table, const std::string& id) {
  const auto idx = table.find(id);
  if (idx == PValueTable::npos)
    throw input_error("hypothesis '" + id + "' is planned but missing from the p-value table");
  return table.entries[idx].p;
}

}  // namespace

std::string gate_mode_name(GateMode mode) {
  return mode == GateMode::serial ? "serial" : "parallel";
}

GateMode gate_mode_from_name(const std::string& name) {
  if (name == "serial") return GateMode::serial;
  if (name == "parallel") return GateMode::parallel;
  throw input_error("unknown gate mode '" + name + "'");
}

std::vector<SequenceDecision> fixed_sequence_test(const PValueTable& table, double alpha) {
  check_alpha(alpha);
  validate_table(table);
  std::vector<SequenceDecision> decisions;
  decisions.reserve(table.size());
  bool stopped = false;
  for (const auto& e : table.entries) {
    SequenceDecision d{e.hypothesis_id, e.p, SequenceStatus::untested};
    if (!stopped) {
      if (e.p <= alpha) {
        d.status = SequenceStatus::rejected;
      } else {
        d.status = SequenceStatus::retained;
        stopped = true;
      }
    }
    decisions.push_back(std::move(d));
  }
  return decisions;
}

std::vector<std::string> validate_plan(const FallbackPlan& plan) {
  std::vector<std::string> violations;
  if (!(plan.alpha > 0.0 && plan.alpha <= 1.0))
    violations.push_back("alpha must lie in (0,1]");
  if (plan.steps.empty()) violations.push_back("plan has no steps");
  std::unordered_set<std::string> seen;
  double sum = 0.0;
  for (const auto& s : plan.steps) {
    if (s.hypothesis_id.empty()) violations.push_back("empty hypothesis_id");
    else if (!seen.insert(s.hypothesis_id).second)
      violations.push_back("duplicate hypothesis_id '" + s.hypothesis_id + "'");
    if (s.weight < 0.0)
      violations.push_back("negative weight for '" + s.hypothesis_id + "'");
    sum += s.weight;
  }
  if (!plan.steps.empty() && std::fabs(sum - 1.0) > kWeightSumTol) {
    std::ostringstream msg;
    msg << "weight sum " << sum << " (must be 1)";
    violations.push_back(msg.str());
  }
  return violations;
}

std::vector<std::string> validate_plan(const GatePlan& plan) {
  std::vector<std::string> violations;
  if (!(plan.alpha > 0.0 && plan.alpha <= 1.0))
    violations.push_back("alpha must lie in (0,1]");
  if (plan.families.empty()) violations.push_back("plan has no families");
  std::unordered_set<std::string> family_ids;
  std::unordered_set<std::string> hypothesis_ids;
  for (const auto& f : plan.families) {
    if (!family_ids.insert(f.family_id).second)
      violations.push_back("duplicate family_id '" + f.family_id + "'");
    if (f.members.empty())
      violations.push_back("family '" + f.family_id + "' has no members");
    for (const auto& id : f.members) {
      if (id.empty()) violations.push_back("empty hypothesis_id in family '" + f.family_id + "'");
      else if (!hypothesis_ids.insert(id).second)
        violations.push_back("hypothesis '" + id + "' appears in more than one family");
    }
  }
  return violations;
}

FallbackTrace fallback_test(const FallbackPlan& plan, const PValueTable& table) {
  require_valid(validate_plan(plan));
  validate_table(table);

  FallbackTrace trace;
  trace.plan = plan;
  trace.steps.reserve(plan.steps.size());

  double carried = 0.0;  // alpha' of the previous step, if it rejected
  for (const auto& step : plan.steps) {
    FallbackStepTrace row;
    row.hypothesis_id = step.hypothesis_id;
    row.p_raw = lookup_p(table, step.hypothesis_id);
    row.initial_alpha = step.weight * plan.alpha;
    // Exact arithmetic keeps the running level within alpha; the clamp only
    // strips accumulated rounding.
    row.effective_alpha = std::min(row.initial_alpha + carried, plan.alpha);
    row.rejected = row.effective_alpha > 0.0 && row.p_raw <= row.effective_alpha;
    carried = row.rejected ? row.effective_alpha : 0.0;
    trace.steps.push_back(std::move(row));
  }
  return trace;
}

namespace {

// Intra-family adjustment for one opened family.
AdjustmentResult adjust_family(const GatePlan& plan, const GateFamily& family,
                               const PValueTable& table,
                               const ResampleContext* resample_ctx) {
  if (plan.intra_method != Method::westfall_young) {
    PValueTable sub;
    for (const auto& id : family.members) sub.add(id, lookup_p(table, id));
    return adjust(sub, plan.intra_method, plan.alpha);
  }

  if (resample_ctx == nullptr)
    throw input_error("intra_method westfall_young requires a resampling context");

  DataMatrix sub;
  sub.group = resample_ctx->data.group;
  for (const auto& id : family.members) {
    const auto& names = resample_ctx->data.outcome_names;
    const auto it = std::find(names.begin(), names.end(), id);
    if (it == names.end())
      throw input_error("hypothesis '" + id + "' has no outcome column in the data matrix");
    sub.outcome_names.push_back(id);
    sub.columns.push_back(resample_ctx->data.columns[static_cast<std::size_t>(it - names.begin())]);
  }
  const WYResult wy = wy_minp_adjust(sub, resample_ctx->spec);

  AdjustmentResult result;
  result.method = Method::westfall_young;
  result.alpha = plan.alpha;
  std::vector<std::size_t> order(wy.outcomes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return wy.outcomes[a].raw_p < wy.outcomes[b].raw_p;
  });
  std::vector<int> rank(wy.outcomes.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r + 1);
  for (std::size_t i = 0; i < wy.outcomes.size(); ++i) {
    const auto& o = wy.outcomes[i];
    if (!o.valid)
      throw input_error("outcome '" + o.name + "': " + o.error);
    result.entries.push_back({o.name, o.raw_p, o.adjusted_p,
                              o.adjusted_p <= plan.alpha, rank[i]});
  }
  return result;
}

bool gate_condition(const AdjustmentResult& adjustment, GateMode mode) {
  if (adjustment.entries.empty()) return false;
  std::size_t rejected = 0;
  for (const auto& e : adjustment.entries) rejected += e.rejected;
  return mode == GateMode::serial ? rejected == adjustment.entries.size() : rejected > 0;
}

}  // namespace

GateTrace gatekeep_test(const GatePlan& plan, const PValueTable& table,
                        const ResampleContext* resample_ctx) {
  require_valid(validate_plan(plan));
  validate_table(table);
  if (plan.intra_method != Method::westfall_young) {
    for (const auto& f : plan.families)
      for (const auto& id : f.members) lookup_p(table, id);  // fail fast on missing ids
  }

  GateTrace trace;
  trace.plan = plan;
  trace.families.reserve(plan.families.size());

  bool open = true;
  std::string closed_by;
  for (std::size_t k = 0; k < plan.families.size(); ++k) {
    const auto& family = plan.families[k];
    GateFamilyTrace row;
    row.family_id = family.family_id;
    if (k == 0) {
      row.tested = true;
      row.gate_reason = "first family is always tested";
    } else if (open) {
      row.tested = true;
      const auto& prev = plan.families[k - 1].family_id;
      row.gate_reason = plan.mode == GateMode::serial
                            ? "all rejected in " + prev
                            : "at least one rejected in " + prev;
    } else {
      row.tested = false;
      row.gate_reason = "gate closed by " + closed_by;
    }

    if (row.tested) {
      row.adjustment = adjust_family(plan, family, table, resample_ctx);
      if (open && !gate_condition(row.adjustment, plan.mode)) {
        open = false;
        closed_by = family.family_id;
      }
    }
    trace.families.push_back(std::move(row));
  }
  return trace;
}

}  // namespace fwerkit
