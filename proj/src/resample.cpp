#include "fwerkit/resample.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

#include "fwerkit/errors.hpp"
#include "fwerkit/rng.hpp"

namespace fwerkit {

void validate_matrix(const DataMatrix& data) {
  if (data.n_units() < 2) throw input_error("data matrix needs at least 2 units");
  const std::size_t treated = data.treated_count();
  if (treated == 0 || treated == data.n_units())
    throw input_error("both groups must be non-empty");
  if (data.columns.size() != data.outcome_names.size())
    throw input_error("outcome name/column count mismatch");
  std::unordered_set<std::string> seen;
  for (const auto& name : data.outcome_names)
    if (!seen.insert(name).second)
      throw input_error("duplicate outcome column '" + name + "'");
  for (std::size_t j = 0; j < data.columns.size(); ++j)
    if (data.columns[j].size() != data.n_units())
      throw input_error("column '" + data.outcome_names[j] + "' length does not match unit count");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::permutation: return "permutation";
    case Scheme::bootstrap: return "bootstrap";
    case Scheme::exhaustive: return "exhaustive";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "permutation") return Scheme::permutation;
  if (name == "bootstrap") return Scheme::bootstrap;
  if (name == "exhaustive") return Scheme::exhaustive;
  throw input_error("unknown scheme '" + name + "'");
}

std::string statistic_name(Statistic s) {
  return s == Statistic::mean_difference ? "mean_difference" : "t_welch";
}

Statistic statistic_from_name(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "mean_difference") return Statistic::mean_difference;
  if (s == "t_welch") return Statistic::t_welch;
  throw input_error("unknown statistic '" + name + "'");
}

std::size_t assignment_count(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;  // exact: the partial product is C(n-k+i, i)
    if (c > cap) return cap + 1;
  }
  return static_cast<std::size_t>(c);
}

ResampleStream::ResampleStream(const DataMatrix& data, const ResamplingSpec& spec)
    : scheme_(spec.scheme),
      seed_(spec.seed),
      n_units_(data.n_units()),
      n_treated_(data.treated_count()),
      observed_(data.group) {
  validate_matrix(data);
  if (scheme_ == Scheme::exhaustive) {
    size_ = assignment_count(n_units_, n_treated_, spec.exhaustive_cap);
    if (size_ > spec.exhaustive_cap) {
      std::ostringstream msg;
      msg << "exhaustive enumeration would need more than " << spec.exhaustive_cap
          << " label assignments; use the permutation scheme instead";
      throw input_error(msg.str());
    }
  } else {
    if (spec.B == 0) throw input_error("B must be positive");
    size_ = spec.B;
  }
}

std::vector<std::uint8_t> ResampleStream::labels(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("resample index out of range");
  if (scheme_ == Scheme::bootstrap)
    throw std::logic_error("bootstrap streams carry unit indices, not labels");

  if (scheme_ == Scheme::permutation) {
    std::vector<std::uint8_t> v = observed_;
    Philox rng(seed_, i);
    for (std::size_t j = v.size(); j-- > 1;)
      std::swap(v[j], v[rng.next_below(j + 1)]);
    return v;
  }

  // Exhaustive: unrank the i-th k-combination (lexicographic) of unit
  // indices as the treated set.
  std::vector<std::uint8_t> v(n_units_, 0);
  std::size_t rank = i;
  std::size_t k = n_treated_;
  std::size_t unit = 0;
  while (k > 0) {
    const std::size_t rest = assignment_count(n_units_ - unit - 1, k - 1, SIZE_MAX - 1);
    if (rank < rest) {
      v[unit] = 1;
      --k;
    } else {
      rank -= rest;
    }
    ++unit;
  }
  return v;
}

std::vector<std::uint32_t> ResampleStream::indices(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("resample index out of range");
  if (scheme_ != Scheme::bootstrap)
    throw std::logic_error("only bootstrap streams carry unit indices");
  std::vector<std::uint32_t> draw(n_units_);
  Philox rng(seed_, i);
  for (auto& d : draw) d = static_cast<std::uint32_t>(rng.next_below(n_units_));
  return draw;
}

namespace detail {
namespace {

struct GroupMoments {
  std::size_t n_t = 0, n_c = 0;
  double mean_t = 0.0, mean_c = 0.0;
  double var_t = 0.0, var_c = 0.0;  // sample variances (n-1), 0 when n < 2
};

// Two-pass moments over non-missing cells; accumulation is left-to-right in
// unit order so identical inputs give bit-identical doubles everywhere.
template <typename TreatedOf, typename ValueOf>
GroupMoments moments(std::size_t n, TreatedOf treated, ValueOf value) {
  GroupMoments g;
  double sum_t = 0.0, sum_c = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    const double x = value(u);
    if (std::isnan(x)) continue;
    if (treated(u)) { sum_t += x; ++g.n_t; } else { sum_c += x; ++g.n_c; }
  }
  if (g.n_t > 0) g.mean_t = sum_t / static_cast<double>(g.n_t);
  if (g.n_c > 0) g.mean_c = sum_c / static_cast<double>(g.n_c);
  if (g.n_t > 1 || g.n_c > 1) {
    double ss_t = 0.0, ss_c = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const double x = value(u);
      if (std::isnan(x)) continue;
      if (treated(u)) ss_t += (x - g.mean_t) * (x - g.mean_t);
      else ss_c += (x - g.mean_c) * (x - g.mean_c);
    }
    if (g.n_t > 1) g.var_t = ss_t / static_cast<double>(g.n_t - 1);
    if (g.n_c > 1) g.var_c = ss_c / static_cast<double>(g.n_c - 1);
  }
  return g;
}

double statistic_from(const GroupMoments& g, Statistic statistic) {
  if (g.n_t == 0 || g.n_c == 0) return 0.0;  // degenerate split carries no evidence
  const double diff = g.mean_t - g.mean_c;
  if (statistic == Statistic::mean_difference) return diff;
  const double se2 = g.var_t / static_cast<double>(g.n_t) + g.var_c / static_cast<double>(g.n_c);
  if (se2 <= 0.0) return diff == 0.0 ? 0.0 : (diff > 0.0 ? 1e300 : -1e300);
  return diff / std::sqrt(se2);
}

double welch_p_from(const GroupMoments& g) {
  if (g.n_t < 2 || g.n_c < 2) return 1.0;
  const double diff = g.mean_t - g.mean_c;
  const double a = g.var_t / static_cast<double>(g.n_t);
  const double b = g.var_c / static_cast<double>(g.n_c);
  const double se2 = a + b;
  if (se2 <= 0.0) return diff == 0.0 ? 1.0 : 0.0;
  const double t = diff / std::sqrt(se2);
  const double df = se2 * se2 /
      (a * a / static_cast<double>(g.n_t - 1) + b * b / static_cast<double>(g.n_c - 1));
  const boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

}  // namespace

double group_statistic(const std::vector<double>& column,
                       const std::vector<std::uint8_t>& labels,
                       Statistic statistic) {
  const auto g = moments(
      column.size(), [&](std::size_t u) { return labels[u] != 0; },
      [&](std::size_t u) { return column[u]; });
  return statistic_from(g, statistic);
}

double group_statistic_bootstrap(const std::vector<double>& column,
                                 const std::vector<std::uint8_t>& group,
                                 const std::vector<std::uint32_t>& draw,
                                 Statistic statistic) {
  const auto g = moments(
      draw.size(), [&](std::size_t u) { return group[draw[u]] != 0; },
      [&](std::size_t u) { return column[draw[u]]; });
  return statistic_from(g, statistic);
}

double welch_t_pvalue(const std::vector<double>& column,
                      const std::vector<std::uint8_t>& labels) {
  const auto g = moments(
      column.size(), [&](std::size_t u) { return labels[u] != 0; },
      [&](std::size_t u) { return column[u]; });
  return welch_p_from(g);
}

double welch_t_pvalue_bootstrap(const std::vector<double>& column,
                                const std::vector<std::uint8_t>& group,
                                const std::vector<std::uint32_t>& draw) {
  const auto g = moments(
      draw.size(), [&](std::size_t u) { return group[draw[u]] != 0; },
      [&](std::size_t u) { return column[draw[u]]; });
  return welch_p_from(g);
}

}  // namespace detail

namespace {

// Per-outcome usability under the observed grouping.
struct OutcomeStatus {
  bool valid = true;
  std::string error;
};

OutcomeStatus outcome_status(const DataMatrix& data, std::size_t j) {
  std::size_t n_t = 0, n_c = 0;
  for (std::size_t u = 0; u < data.n_units(); ++u) {
    if (std::isnan(data.columns[j][u])) continue;
    (data.group[u] != 0 ? n_t : n_c) += 1;
  }
  if (n_t < 2 || n_c < 2) {
    std::ostringstream msg;
    msg << "fewer than 2 non-missing observations in the "
        << (n_t < 2 ? "treated" : "control") << " group";
    return {false, msg.str()};
  }
  return {true, {}};
}

// |statistic| for every draw of the stream, column j. Draw 0 is the observed
// assignment for the Monte Carlo schemes; exhaustive already contains it.
std::vector<double> abs_statistics(const DataMatrix& data, const ResampleStream& stream,
                                   const ResamplingSpec& spec, std::size_t j) {
  const auto& column = data.columns[j];
  std::vector<double> out;
  if (spec.scheme == Scheme::exhaustive) {
    out.reserve(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i)
      out.push_back(std::fabs(detail::group_statistic(column, stream.labels(i), spec.statistic)));
  } else if (spec.scheme == Scheme::permutation) {
    out.reserve(stream.size() + 1);
    out.push_back(std::fabs(detail::group_statistic(column, data.group, spec.statistic)));
    for (std::size_t i = 0; i < stream.size(); ++i)
      out.push_back(std::fabs(detail::group_statistic(column, stream.labels(i), spec.statistic)));
  } else {
    throw std::logic_error("abs_statistics: bootstrap handled separately");
  }
  return out;
}

double tail_share(const std::vector<double>& sorted_abs, double threshold) {
  const auto it = std::lower_bound(sorted_abs.begin(), sorted_abs.end(), threshold);
  return static_cast<double>(sorted_abs.end() - it) / static_cast<double>(sorted_abs.size());
}

}  // namespace

std::vector<OutcomeP> raw_pvalues(const DataMatrix& data, const ResamplingSpec& spec) {
  validate_matrix(data);
  std::vector<OutcomeP> out(data.n_outcomes());

  const bool needs_stream = spec.scheme != Scheme::bootstrap;
  ResampleStream stream(data, spec);  // also enforces the exhaustive cap

  for (std::size_t j = 0; j < data.n_outcomes(); ++j) {
    auto& o = out[j];
    o.name = data.outcome_names[j];
    const auto status = outcome_status(data, j);
    if (!status.valid) {
      o.valid = false;
      o.error = status.error;
      o.p = DataMatrix::missing;
      continue;
    }
    if (!needs_stream) {
      o.p = detail::welch_t_pvalue(data.columns[j], data.group);
      continue;
    }
    auto abs_t = abs_statistics(data, stream, spec, j);
    const double observed = spec.scheme == Scheme::permutation
        ? abs_t.front()
        : std::fabs(detail::group_statistic(data.columns[j], data.group, spec.statistic));
    std::sort(abs_t.begin(), abs_t.end());
    o.p = tail_share(abs_t, observed);
  }
  return out;
}

WYResult wy_minp_adjust(const DataMatrix& data, const ResamplingSpec& spec) {
  validate_matrix(data);
  WYResult result;
  result.scheme = spec.scheme;
  result.seed = spec.seed;
  result.outcomes.resize(data.n_outcomes());

  ResampleStream stream(data, spec);
  result.B_used = stream.size();

  // Usable outcomes form the family; the rest carry their error through.
  std::vector<std::size_t> family;
  for (std::size_t j = 0; j < data.n_outcomes(); ++j) {
    auto& o = result.outcomes[j];
    o.name = data.outcome_names[j];
    const auto status = outcome_status(data, j);
    if (!status.valid) {
      o.valid = false;
      o.error = status.error;
      o.raw_p = DataMatrix::missing;
      o.adjusted_p = DataMatrix::missing;
    } else {
      family.push_back(j);
    }
  }
  if (family.empty()) return result;

  // Per-outcome p for every draw, on a common scale: empirical tail shares
  // for permutation/exhaustive (observed assignment included as a draw),
  // Welch-t reference p for bootstrap.
  const std::size_t m = family.size();
  std::vector<std::vector<double>> draw_p(m);
  std::vector<double> raw(m);

  if (spec.scheme == Scheme::bootstrap) {
    // One shared index draw per resample keeps cross-outcome dependence.
    for (std::size_t f = 0; f < m; ++f) {
      draw_p[f].reserve(stream.size() + 1);
      draw_p[f].push_back(detail::welch_t_pvalue(data.columns[family[f]], data.group));
      raw[f] = draw_p[f].front();
    }
    for (std::size_t i = 0; i < stream.size(); ++i) {
      const auto draw = stream.indices(i);
      for (std::size_t f = 0; f < m; ++f)
        draw_p[f].push_back(
            detail::welch_t_pvalue_bootstrap(data.columns[family[f]], data.group, draw));
    }
  } else {
    for (std::size_t f = 0; f < m; ++f) {
      auto abs_t = abs_statistics(data, stream, spec, family[f]);
      std::vector<double> sorted_abs = abs_t;
      std::sort(sorted_abs.begin(), sorted_abs.end());
      std::vector<double>& p = draw_p[f];
      p.resize(abs_t.size());
      for (std::size_t d = 0; d < abs_t.size(); ++d)
        p[d] = tail_share(sorted_abs, abs_t[d]);
      const double observed = spec.scheme == Scheme::permutation
          ? abs_t.front()
          : std::fabs(detail::group_statistic(data.columns[family[f]], data.group,
                                              spec.statistic));
      raw[f] = tail_share(sorted_abs, observed);
    }
  }

  // Step-down min-p over the family ordered by raw p (ties keep column
  // order): adjusted(i) is the share of draws whose minimum p over ranks
  // >= i is at most the observed p(i), made monotone down the ranks.
  std::vector<std::size_t> order(m);
  for (std::size_t f = 0; f < m; ++f) order[f] = f;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });

  const std::size_t n_draws = draw_p[0].size();
  std::vector<double> suffix_min(n_draws, 2.0);
  std::vector<double> adjusted_by_rank(m);
  for (std::size_t r = m; r-- > 0;) {
    const auto& p = draw_p[order[r]];
    std::size_t count = 0;
    for (std::size_t d = 0; d < n_draws; ++d) {
      suffix_min[d] = std::min(suffix_min[d], p[d]);
      count += suffix_min[d] <= raw[order[r]];
    }
    adjusted_by_rank[r] = static_cast<double>(count) / static_cast<double>(n_draws);
  }
  for (std::size_t r = 1; r < m; ++r)
    adjusted_by_rank[r] = std::max(adjusted_by_rank[r], adjusted_by_rank[r - 1]);

  for (std::size_t r = 0; r < m; ++r) {
    auto& o = result.outcomes[family[order[r]]];
    o.raw_p = raw[order[r]];
    // A multiplicity adjustment never strengthens the evidence; exact for
    // permutation/exhaustive by construction, enforced for bootstrap.
    o.adjusted_p = std::max(adjusted_by_rank[r], o.raw_p);
  }
  return result;
}

}  // namespace fwerkit
