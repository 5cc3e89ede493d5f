#ifndef FWERKIT_HIERARCHY_HPP
#define FWERKIT_HIERARCHY_HPP

#include <string>
#include <vector>

#include "fwerkit/data_matrix.hpp"
#include "fwerkit/pvalue_table.hpp"

namespace fwerkit {

// ---------------------------------------------------------------------------
// Fixed sequence
// ---------------------------------------------------------------------------

enum class SequenceStatus {
  rejected,   // tested, p <= alpha
  retained,   // tested, p > alpha (testing stops here)
  untested,   // after the first non-rejection; retained without a test
};

struct SequenceDecision {
  std::string hypothesis_id;
  double p_raw = 0.0;
  SequenceStatus status = SequenceStatus::untested;
};

// Each hypothesis is tested at the full alpha in table order; testing stops
// at the first p > alpha and everything after is retained untested.
std::vector<SequenceDecision> fixed_sequence_test(const PValueTable& table, double alpha);

// ---------------------------------------------------------------------------
// Fallback
// ---------------------------------------------------------------------------

struct FallbackStep {
  std::string hypothesis_id;
  double weight = 0.0;  // >= 0; the step's share of alpha
};

// Pre-specified testing sequence with an alpha split. Weights must sum to 1
// (zero-weight steps are allowed; they live off propagated alpha only).
struct FallbackPlan {
  std::vector<FallbackStep> steps;
  double alpha = 0.05;
};

struct FallbackStepTrace {
  std::string hypothesis_id;
  double p_raw = 0.0;
  double initial_alpha = 0.0;    // w_i * alpha
  double effective_alpha = 0.0;  // initial plus propagation from a rejected predecessor
  bool rejected = false;
};

// The full alpha-propagation ledger: one row per step, no early stopping.
struct FallbackTrace {
  std::vector<FallbackStepTrace> steps;
  FallbackPlan plan;

  std::vector<std::string> rejected_ids() const {
    std::vector<std::string> out;
    for (const auto& s : steps)
      if (s.rejected) out.push_back(s.hypothesis_id);
    return out;
  }
};

// Runs the fallback sequence: step i is tested at
//   alpha'_i = alpha_i                 if step i-1 was not rejected
//   alpha'_i = alpha_i + alpha'_{i-1}  if step i-1 was rejected
// with alpha'_1 = alpha_1. Rejection needs p <= alpha'_i and alpha'_i > 0.
// Throws plan_error on an invalid plan and input_error on ids missing from
// the table.
FallbackTrace fallback_test(const FallbackPlan& plan, const PValueTable& table);

// ---------------------------------------------------------------------------
// Gatekeeping
// ---------------------------------------------------------------------------

enum class GateMode { serial, parallel };

std::string gate_mode_name(GateMode mode);
GateMode gate_mode_from_name(const std::string& name);

struct GateFamily {
  std::string family_id;
  std::vector<std::string> members;
};

struct GatePlan {
  std::vector<GateFamily> families;  // tested in order
  GateMode mode = GateMode::serial;
  Method intra_method = Method::holm;
  double alpha = 0.05;
};

struct GateFamilyTrace {
  std::string family_id;
  bool tested = false;       // family 1 always; later families iff their gate opened
  std::string gate_reason;
  AdjustmentResult adjustment;  // empty when untested
};

struct GateTrace {
  std::vector<GateFamilyTrace> families;
  GatePlan plan;

  std::vector<std::string> rejected_ids() const {
    std::vector<std::string> out;
    for (const auto& f : families)
      for (const auto& e : f.adjustment.entries)
        if (e.rejected) out.push_back(e.hypothesis_id);
    return out;
  }
};

// Data context for westfall_young as the intra-family method: hypothesis ids
// must name outcome columns of the matrix.
struct ResampleContext {
  DataMatrix data;
  ResamplingSpec spec;
};

// Tests ordered families, each opened family adjusted independently with the
// plan's intra-family method at the full plan alpha. Serial mode opens the
// next gate when every hypothesis of the current family is rejected;
// parallel mode when at least one is. Hypotheses in unopened families are
// never rejected.
GateTrace gatekeep_test(const GatePlan& plan, const PValueTable& table,
                        const ResampleContext* resample_ctx = nullptr);

// ---------------------------------------------------------------------------
// Plan validation
// ---------------------------------------------------------------------------

// Violations are data, not faults: an empty list means the plan is valid.
std::vector<std::string> validate_plan(const FallbackPlan& plan);
std::vector<std::string> validate_plan(const GatePlan& plan);

}  // namespace fwerkit

#endif
