#ifndef FWERKIT_SIMULATE_HPP
#define FWERKIT_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fwerkit/data_matrix.hpp"
#include "fwerkit/hierarchy.hpp"
#include "fwerkit/pvalue_table.hpp"

namespace fwerkit {

enum class Procedure {
  unadjusted,
  bonferroni,
  holm,
  hochberg,
  sidak_holm,
  fixed_sequence,
  fallback,
  gatekeeping,
  westfall_young,
};

std::string procedure_name(Procedure p);
Procedure procedure_from_name(const std::string& name);

// Monte Carlo scenario: m equicorrelated standard-normal test statistics
// shifted by per-hypothesis effects (0 = true null), converted to two-sided
// p-values. Hypotheses are named H1..Hm in config order; plans for the
// hierarchical procedures follow that order.
struct SimulationConfig {
  std::size_t m = 1;
  double rho = 0.0;                   // equicorrelation of the statistics, [0,1)
  std::vector<double> effects;        // size m; empty means all zero
  std::size_t n_reps = 10000;         // >= 100
  double alpha = 0.05;
  std::uint64_t seed = 0;
  Procedure procedure = Procedure::bonferroni;

  std::vector<double> fallback_weights;       // procedure == fallback; empty = equal
  std::vector<std::size_t> gate_family_sizes; // procedure == gatekeeping; empty = singletons
  GateMode gate_mode = GateMode::serial;
  Method gate_intra = Method::holm;

  // westfall_young scenario: a fresh unit-by-outcome matrix per replication,
  // permutation-adjusted with B resamples.
  std::size_t wy_units = 40;
  std::size_t wy_B = 500;
  Statistic wy_statistic = Statistic::mean_difference;

  double effect(std::size_t j) const { return effects.empty() ? 0.0 : effects[j]; }
  bool is_true_null(std::size_t j) const { return effect(j) == 0.0; }
};

struct SimulationReport {
  double empirical_fwer = 0.0;     // share of reps with >= 1 rejected true null
  double fwer_ci_low = 0.0;        // 95% binomial interval around the estimate
  double fwer_ci_high = 0.0;
  double any_rejection_rate = 0.0;
  std::vector<double> per_hypothesis_rejection_rate;
  double runtime_seconds = 0.0;
  SimulationConfig config;
};

void validate_config(const SimulationConfig& config);

// Deterministic per (config.seed, rep).
PValueTable generate_scenario(const SimulationConfig& config, std::size_t rep);
DataMatrix generate_scenario_matrix(const SimulationConfig& config, std::size_t rep);

// Which hypotheses (H1..Hm, by index) the configured procedure rejects on
// one replication's table.
std::vector<bool> apply_procedure(const SimulationConfig& config, const PValueTable& table,
                                  std::size_t rep);

SimulationReport estimate_fwer(const SimulationConfig& config);

// Same report; read per_hypothesis_rejection_rate at the false nulls for
// power. Two configs differing only in procedure share every random draw,
// so side-by-side runs are paired automatically.
SimulationReport estimate_power(const SimulationConfig& config);

}  // namespace fwerkit

#endif
