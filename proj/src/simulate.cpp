#include "fwerkit/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "fwerkit/adjust.hpp"
#include "fwerkit/errors.hpp"
#include "fwerkit/resample.hpp"
#include "fwerkit/rng.hpp"

namespace fwerkit {

std::string procedure_name(Procedure p) {
  switch (p) {
    case Procedure::unadjusted: return "unadjusted";
    case Procedure::bonferroni: return "bonferroni";
    case Procedure::holm: return "holm";
    case Procedure::hochberg: return "hochberg";
    case Procedure::sidak_holm: return "sidak_holm";
    case Procedure::fixed_sequence: return "fixed_sequence";
    case Procedure::fallback: return "fallback";
    case Procedure::gatekeeping: return "gatekeeping";
    case Procedure::westfall_young: return "westfall_young";
  }
  return "?";
}

Procedure procedure_from_name(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "unadjusted") return Procedure::unadjusted;
  if (s == "bonferroni") return Procedure::bonferroni;
  if (s == "holm") return Procedure::holm;
  if (s == "hochberg") return Procedure::hochberg;
  if (s == "sidak_holm") return Procedure::sidak_holm;
  if (s == "fixed_sequence") return Procedure::fixed_sequence;
  if (s == "fallback") return Procedure::fallback;
  if (s == "gatekeeping") return Procedure::gatekeeping;
  if (s == "westfall_young") return Procedure::westfall_young;
  throw input_error("unknown procedure '" + name + "'");
}

void validate_config(const SimulationConfig& config) {
  if (config.m < 1) throw input_error("m must be at least 1");
  if (config.n_reps < 100) throw input_error("n_reps must be at least 100");
  if (!(config.rho >= 0.0 && config.rho < 1.0)) throw input_error("rho must lie in [0,1)");
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0))
    throw input_error("alpha must lie in [0,1]");
  if (!config.effects.empty() && config.effects.size() != config.m)
    throw input_error("effects vector must have one entry per hypothesis");
  if (!config.fallback_weights.empty() && config.fallback_weights.size() != config.m)
    throw input_error("fallback weights must have one entry per hypothesis");
  if (!config.gate_family_sizes.empty()) {
    std::size_t total = 0;
    for (auto s : config.gate_family_sizes) total += s;
    if (total != config.m)
      throw input_error("gate family sizes must sum to the hypothesis count");
  }
  if (config.procedure == Procedure::westfall_young) {
    if (config.wy_units < 4) throw input_error("westfall_young scenarios need at least 4 units");
    if (config.wy_B == 0) throw input_error("B must be positive");
  }
}

namespace {

std::string hypothesis_name(std::size_t j) { return "H" + std::to_string(j + 1); }

double two_sided_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

FallbackPlan simulation_fallback_plan(const SimulationConfig& config) {
  FallbackPlan plan;
  plan.alpha = config.alpha;
  const double equal = 1.0 / static_cast<double>(config.m);
  for (std::size_t j = 0; j < config.m; ++j)
    plan.steps.push_back({hypothesis_name(j),
                          config.fallback_weights.empty() ? equal : config.fallback_weights[j]});
  return plan;
}

GatePlan simulation_gate_plan(const SimulationConfig& config) {
  GatePlan plan;
  plan.alpha = config.alpha;
  plan.mode = config.gate_mode;
  plan.intra_method = config.gate_intra;
  std::vector<std::size_t> sizes = config.gate_family_sizes;
  if (sizes.empty()) sizes.assign(config.m, 1);
  std::size_t j = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    GateFamily family;
    family.family_id = "F" + std::to_string(k + 1);
    for (std::size_t i = 0; i < sizes[k]; ++i) family.members.push_back(hypothesis_name(j++));
    plan.families.push_back(std::move(family));
  }
  return plan;
}

}  // namespace

PValueTable generate_scenario(const SimulationConfig& config, std::size_t rep) {
  Philox rng(config.seed, rep);
  const double shared = std::sqrt(config.rho);
  const double own = std::sqrt(1.0 - config.rho);
  const double z0 = rng.next_gaussian();
  PValueTable table;
  for (std::size_t j = 0; j < config.m; ++j) {
    const double x = shared * z0 + own * rng.next_gaussian() + config.effect(j);
    table.add(hypothesis_name(j), two_sided_p(x));
  }
  return table;
}

DataMatrix generate_scenario_matrix(const SimulationConfig& config, std::size_t rep) {
  Philox rng(config.seed, rep);
  const double shared = std::sqrt(config.rho);
  const double own = std::sqrt(1.0 - config.rho);
  DataMatrix data;
  const std::size_t n = config.wy_units;
  data.group.resize(n);
  for (std::size_t u = 0; u < n; ++u) data.group[u] = u < n / 2 ? 1 : 0;
  data.outcome_names.resize(config.m);
  data.columns.assign(config.m, std::vector<double>(n));
  for (std::size_t j = 0; j < config.m; ++j) data.outcome_names[j] = hypothesis_name(j);
  for (std::size_t u = 0; u < n; ++u) {
    const double z0 = rng.next_gaussian();
    for (std::size_t j = 0; j < config.m; ++j) {
      double y = shared * z0 + own * rng.next_gaussian();
      if (data.group[u]) y += config.effect(j);
      data.columns[j][u] = y;
    }
  }
  return data;
}

std::vector<bool> apply_procedure(const SimulationConfig& config, const PValueTable& table,
                                  std::size_t rep) {
  std::vector<bool> rejected(config.m, false);
  if (config.alpha == 0.0) return rejected;  // nothing can ever be rejected

  switch (config.procedure) {
    case Procedure::unadjusted:
      for (std::size_t j = 0; j < config.m; ++j)
        rejected[j] = table.entries[j].p <= config.alpha;
      break;
    case Procedure::bonferroni:
    case Procedure::holm:
    case Procedure::hochberg:
    case Procedure::sidak_holm: {
      const Method method = config.procedure == Procedure::bonferroni ? Method::bonferroni
                            : config.procedure == Procedure::holm     ? Method::holm
                            : config.procedure == Procedure::hochberg ? Method::hochberg
                                                                      : Method::sidak_holm;
      const auto result = adjust(table, method, config.alpha);
      for (std::size_t j = 0; j < config.m; ++j) rejected[j] = result.entries[j].rejected;
      break;
    }
    case Procedure::fixed_sequence: {
      const auto decisions = fixed_sequence_test(table, config.alpha);
      for (std::size_t j = 0; j < config.m; ++j)
        rejected[j] = decisions[j].status == SequenceStatus::rejected;
      break;
    }
    case Procedure::fallback: {
      const auto trace = fallback_test(simulation_fallback_plan(config), table);
      for (std::size_t j = 0; j < config.m; ++j) rejected[j] = trace.steps[j].rejected;
      break;
    }
    case Procedure::gatekeeping: {
      const auto trace = gatekeep_test(simulation_gate_plan(config), table);
      for (const auto& family : trace.families)
        for (const auto& e : family.adjustment.entries)
          if (e.rejected) {
            // ids are H<j+1>
            const std::size_t j = std::stoul(e.hypothesis_id.substr(1)) - 1;
            rejected[j] = true;
          }
      break;
    }
    case Procedure::westfall_young: {
      const DataMatrix data = generate_scenario_matrix(config, rep);
      ResamplingSpec spec;
      spec.scheme = Scheme::permutation;
      spec.B = config.wy_B;
      spec.statistic = config.wy_statistic;
      // fresh engine seed per replication, decoupled from the data draws
      Philox mix(config.seed ^ 0x5DEECE66Dull, rep);
      spec.seed = mix.next_u64();
      const WYResult wy = wy_minp_adjust(data, spec);
      for (std::size_t j = 0; j < config.m; ++j)
        rejected[j] = wy.outcomes[j].valid && wy.outcomes[j].adjusted_p <= config.alpha;
      break;
    }
  }
  return rejected;
}

namespace {

SimulationReport run_simulation(const SimulationConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::size_t> reject_count(config.m, 0);
  std::size_t any_count = 0;
  std::size_t false_positive_reps = 0;

  const bool needs_table = config.procedure != Procedure::westfall_young;
  for (std::size_t rep = 0; rep < config.n_reps; ++rep) {
    const PValueTable table = needs_table ? generate_scenario(config, rep) : PValueTable{};
    const auto rejected = apply_procedure(config, table, rep);
    bool any = false, any_true_null = false;
    for (std::size_t j = 0; j < config.m; ++j) {
      if (!rejected[j]) continue;
      ++reject_count[j];
      any = true;
      if (config.is_true_null(j)) any_true_null = true;
    }
    any_count += any;
    false_positive_reps += any_true_null;
  }

  SimulationReport report;
  report.config = config;
  const double n = static_cast<double>(config.n_reps);
  report.empirical_fwer = static_cast<double>(false_positive_reps) / n;
  const double se = std::sqrt(report.empirical_fwer * (1.0 - report.empirical_fwer) / n);
  report.fwer_ci_low = std::max(0.0, report.empirical_fwer - 1.96 * se);
  report.fwer_ci_high = std::min(1.0, report.empirical_fwer + 1.96 * se);
  report.any_rejection_rate = static_cast<double>(any_count) / n;
  report.per_hypothesis_rejection_rate.resize(config.m);
  for (std::size_t j = 0; j < config.m; ++j)
    report.per_hypothesis_rejection_rate[j] = static_cast<double>(reject_count[j]) / n;
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

SimulationReport estimate_fwer(const SimulationConfig& config) { return run_simulation(config); }

SimulationReport estimate_power(const SimulationConfig& config) {
  bool any_effect = false;
  for (std::size_t j = 0; j < config.m; ++j) any_effect |= !config.is_true_null(j);
  if (!any_effect) throw input_error("power estimation needs at least one nonzero effect");
  return run_simulation(config);
}

}  // namespace fwerkit
