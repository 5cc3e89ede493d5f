#ifndef FWERKIT_ADJUST_HPP
#define FWERKIT_ADJUST_HPP

#include <cstddef>

#include "fwerkit/pvalue_table.hpp"

namespace fwerkit {

// Probability of at least one false rejection when m independent true nulls
// are each tested at level alpha: 1 - (1 - alpha)^m. Zero for m = 0.
double global_null_fwer(std::size_t m, double alpha);

// Single-family adjustments. Each returns adjusted p-values in the table's
// input order with decisions taken at `alpha` (p_adjusted <= alpha rejects).
// An empty table yields an empty result.
AdjustmentResult bonferroni_adjust(const PValueTable& table, double alpha = 0.05);
AdjustmentResult holm_adjust(const PValueTable& table, double alpha = 0.05);
AdjustmentResult hochberg_adjust(const PValueTable& table, double alpha = 0.05);
AdjustmentResult sidak_holm_adjust(const PValueTable& table, double alpha = 0.05);

// Dispatch by method enum (westfall_young is not a table-only method and
// is rejected here with input_error).
AdjustmentResult adjust(const PValueTable& table, Method method, double alpha = 0.05);

// Re-threshold the decisions at a new alpha. Idempotent; only `rejected`
// and `alpha` change.
AdjustmentResult decide(AdjustmentResult result, double alpha);

}  // namespace fwerkit

#endif
