#ifndef FWERKIT_DATA_MATRIX_HPP
#define FWERKIT_DATA_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace fwerkit {

// Unit-by-outcome observations with a binary group label per unit.
// Cells are doubles; NaN marks a missing observation.
struct DataMatrix {
  std::vector<std::string> outcome_names;        // m columns
  std::vector<std::uint8_t> group;               // per unit: 1 treated, 0 control
  std::vector<std::vector<double>> columns;      // columns[j][unit]

  static constexpr double missing = std::numeric_limits<double>::quiet_NaN();

  std::size_t n_units() const { return group.size(); }
  std::size_t n_outcomes() const { return outcome_names.size(); }

  std::size_t treated_count() const {
    std::size_t n = 0;
    for (auto g : group) n += (g != 0);
    return n;
  }
};

// Throws input_error when a group is empty, n_units < 2, column names
// collide, or column lengths disagree.
void validate_matrix(const DataMatrix& data);

enum class Scheme { permutation, bootstrap, exhaustive };
enum class Statistic { mean_difference, t_welch };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
std::string statistic_name(Statistic s);
Statistic statistic_from_name(const std::string& name);  // accepts "-" and "_"

struct ResamplingSpec {
  Scheme scheme = Scheme::permutation;
  std::size_t B = 10000;  // ignored for exhaustive
  std::uint64_t seed = 0;
  Statistic statistic = Statistic::mean_difference;
  std::size_t exhaustive_cap = 200000;  // max label assignments to enumerate
};

// Per-outcome raw p-value; `valid` is false when the outcome had fewer than
// two non-missing observations in either group.
struct OutcomeP {
  std::string name;
  double p = 1.0;
  bool valid = true;
  std::string error;
};

struct WYEntry {
  std::string name;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  bool valid = true;
  std::string error;
};

// Westfall-Young free step-down min-p adjustment, input column order.
struct WYResult {
  std::vector<WYEntry> outcomes;
  std::size_t B_used = 0;  // resampled datasets actually evaluated
  Scheme scheme = Scheme::permutation;
  std::uint64_t seed = 0;
};

}  // namespace fwerkit

#endif
