#ifndef FWERKIT_RESAMPLE_HPP
#define FWERKIT_RESAMPLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fwerkit/data_matrix.hpp"

namespace fwerkit {

// Reproducible random-access stream of resampled group labelings (or unit
// index draws for bootstrap). Resample i depends only on (seed, i), never on
// how many other resamples were generated or by which thread.
class ResampleStream {
 public:
  // group sizes come from the matrix's labels; throws input_error when the
  // exhaustive assignment count exceeds spec.exhaustive_cap.
  ResampleStream(const DataMatrix& data, const ResamplingSpec& spec);

  Scheme scheme() const { return scheme_; }
  std::size_t size() const { return size_; }  // B, or the full assignment count

  // Group labels for resample i (permutation and exhaustive schemes).
  std::vector<std::uint8_t> labels(std::size_t i) const;

  // Unit indices (n_units draws with replacement) for resample i (bootstrap).
  std::vector<std::uint32_t> indices(std::size_t i) const;

 private:
  Scheme scheme_;
  std::uint64_t seed_;
  std::size_t size_;
  std::size_t n_units_;
  std::size_t n_treated_;
  std::vector<std::uint8_t> observed_;
};

// Number of distinct label assignments C(n, k); saturates at the cap + 1 to
// avoid overflow while still signalling "too many".
std::size_t assignment_count(std::size_t n, std::size_t k, std::size_t cap);

// Two-sided raw p-values, one per outcome. Permutation and exhaustive
// schemes use the statistic's resampling distribution (the observed
// assignment counts as one draw); bootstrap uses the Welch-t reference.
// Outcomes with fewer than two non-missing observations in either group come
// back with valid = false.
std::vector<OutcomeP> raw_pvalues(const DataMatrix& data, const ResamplingSpec& spec);

// Free step-down min-p adjusted p-values. Labels are permuted as whole
// units, so the cross-outcome dependence structure rides along.
WYResult wy_minp_adjust(const DataMatrix& data, const ResamplingSpec& spec);

namespace detail {

// Group-difference statistic for one outcome column under a given labeling.
// Missing cells are dropped pairwise; an empty group yields 0 (no evidence).
double group_statistic(const std::vector<double>& column,
                       const std::vector<std::uint8_t>& labels,
                       Statistic statistic);

// Same, for a bootstrap draw of unit indices.
double group_statistic_bootstrap(const std::vector<double>& column,
                                 const std::vector<std::uint8_t>& group,
                                 const std::vector<std::uint32_t>& draw,
                                 Statistic statistic);

// Two-sided p from the Welch t reference (Welch-Satterthwaite df).
double welch_t_pvalue(const std::vector<double>& column,
                      const std::vector<std::uint8_t>& labels);
double welch_t_pvalue_bootstrap(const std::vector<double>& column,
                                const std::vector<std::uint8_t>& group,
                                const std::vector<std::uint32_t>& draw);

}  // namespace detail

}  // namespace fwerkit

#endif
