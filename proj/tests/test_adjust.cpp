#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fwerkit/adjust.hpp"
#include "fwerkit/errors.hpp"
#include "fwerkit/rng.hpp"

using namespace fwerkit;

namespace {

PValueTable make_table(const std::vector<double>& ps) {
  PValueTable t;
  for (std::size_t i = 0; i < ps.size(); ++i) t.add("H" + std::to_string(i + 1), ps[i]);
  return t;
}

std::vector<double> adjusted_of(const AdjustmentResult& r) {
  std::vector<double> v;
  for (const auto& e : r.entries) v.push_back(e.p_adjusted);
  return v;
}

PValueTable random_table(Philox& rng, std::size_t m) {
  PValueTable t;
  for (std::size_t i = 0; i < m; ++i) t.add("H" + std::to_string(i + 1), rng.next_double());
  return t;
}

}  // namespace

TEST_CASE("global_null_fwer") {
  CHECK(global_null_fwer(1, 0.05) == doctest::Approx(0.05));
  CHECK(global_null_fwer(0, 0.05) == 0.0);
  CHECK(global_null_fwer(10, 0.05) == doctest::Approx(0.4013).epsilon(1e-4 / 0.4013));
  CHECK(global_null_fwer(5, 0.0) == 0.0);
  CHECK(global_null_fwer(3, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(global_null_fwer(2, 1.5), input_error);
}

TEST_CASE("bonferroni examples") {
  auto r = bonferroni_adjust(make_table({0.01, 0.02, 0.03}));
  const std::vector<double> expected = {0.03, 0.06, 0.09};
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(r.entries[i].p_adjusted == doctest::Approx(expected[i]));

  r = bonferroni_adjust(make_table({0.5, 0.6}));
  CHECK(adjusted_of(r) == std::vector<double>{1.0, 1.0});

  // five zero p-values stay zero at any multiplicity
  r = bonferroni_adjust(make_table({0.0, 0.0, 0.0, 0.0, 0.0}));
  for (const auto& e : r.entries) CHECK(e.p_adjusted == 0.0);
}

TEST_CASE("holm examples") {
  CHECK(adjusted_of(holm_adjust(make_table({0.04})))[0] == doctest::Approx(0.04));

  auto adj = adjusted_of(holm_adjust(make_table({0.01, 0.04, 0.03})));
  CHECK(adj[0] == doctest::Approx(0.03));
  CHECK(adj[1] == doctest::Approx(0.06));
  CHECK(adj[2] == doctest::Approx(0.06));
}

TEST_CASE("holm on the published health p-values") {
  // parasites, diarrhea, anemia, vocabulary (MacArthur), vocabulary
  // (Peabody), height, weight
  const auto table = make_table({0.046, 0.046, 0.002, 0.001, 0.029, 0.959, 0.766});
  const auto adj = adjusted_of(holm_adjust(table, 0.10));

  const std::vector<double> exact = {0.184, 0.184, 0.012, 0.007, 0.145, 1.0, 1.0};
  const std::vector<double> published = {0.186, 0.186, 0.015, 0.007, 0.153, 1.0, 1.0};
  for (std::size_t i = 0; i < adj.size(); ++i) {
    CHECK(adj[i] == doctest::Approx(exact[i]));
    CHECK(std::fabs(adj[i] - published[i]) <= 0.010);
  }
}

TEST_CASE("hochberg examples") {
  CHECK(adjusted_of(hochberg_adjust(make_table({0.04})))[0] == doctest::Approx(0.04));

  // step-up rescues a pair of equal borderline p-values where step-down fails
  const auto table = make_table({0.04, 0.04});
  const auto hb = hochberg_adjust(table, 0.05);
  const auto hm = holm_adjust(table, 0.05);
  CHECK(hb.entries[0].p_adjusted == doctest::Approx(0.04));
  CHECK(hb.entries[1].p_adjusted == doctest::Approx(0.04));
  CHECK(hb.entries[0].rejected);
  CHECK(hb.entries[1].rejected);
  CHECK(hm.entries[0].p_adjusted == doctest::Approx(0.08));
  CHECK(!hm.entries[0].rejected);
  CHECK(!hm.entries[1].rejected);

  const auto adj = adjusted_of(hochberg_adjust(make_table({0.01, 0.04, 0.03})));
  CHECK(adj[0] == doctest::Approx(0.03));
  CHECK(adj[1] == doctest::Approx(0.04));
  CHECK(adj[2] == doctest::Approx(0.04));
}

TEST_CASE("sidak-holm examples") {
  CHECK(adjusted_of(sidak_holm_adjust(make_table({0.04})))[0] == doctest::Approx(0.04));

  const auto table = make_table({0.046, 0.046, 0.002, 0.001, 0.029, 0.959, 0.766});
  const auto adj = adjusted_of(sidak_holm_adjust(table, 0.10));
  // rank 1 of 7: 1 - 0.999^7
  CHECK(adj[3] == doctest::Approx(1.0 - std::pow(0.999, 7)));
  CHECK(std::fabs(adj[3] - 0.007) <= 0.010);
  // rank 4 of 7: 1 - 0.954^4 dominates the running maximum
  CHECK(adj[0] == doctest::Approx(1.0 - std::pow(0.954, 4)));
  CHECK(std::fabs(adj[0] - 0.173) <= 0.010);
}

TEST_CASE("decide") {
  auto r = holm_adjust(make_table({0.001, 0.08}), 0.05);
  r.entries[0].p_adjusted = 0.007;
  r.entries[1].p_adjusted = 0.186;
  r = decide(std::move(r), 0.05);
  CHECK(r.entries[0].rejected);
  CHECK(!r.entries[1].rejected);

  // boundary is inclusive
  auto b = bonferroni_adjust(make_table({0.05}), 0.05);
  CHECK(b.entries[0].rejected);

  // idempotent
  const auto once = decide(r, 0.05);
  const auto twice = decide(once, 0.05);
  for (std::size_t i = 0; i < once.entries.size(); ++i)
    CHECK(once.entries[i].rejected == twice.entries[i].rejected);
}

TEST_CASE("published health table at the 10% level flags anemia and MacArthur only") {
  PValueTable table;
  table.add("parasites", 0.046);
  table.add("diarrhea", 0.046);
  table.add("anemia", 0.002);
  table.add("macarthur", 0.001);
  table.add("peabody", 0.029);
  table.add("height", 0.959);
  table.add("weight", 0.766);
  const auto r = holm_adjust(table, 0.10);
  CHECK(r.rejected_ids() == std::vector<std::string>{"anemia", "macarthur"});
}

TEST_CASE("empty table yields an empty result") {
  const PValueTable empty;
  CHECK(bonferroni_adjust(empty).entries.empty());
  CHECK(holm_adjust(empty).entries.empty());
  CHECK(hochberg_adjust(empty).entries.empty());
  CHECK(sidak_holm_adjust(empty).entries.empty());
}

TEST_CASE("input validation") {
  PValueTable dup;
  dup.add("same", 0.1);
  dup.add("same", 0.2);
  CHECK_THROWS_AS(holm_adjust(dup), input_error);

  CHECK_THROWS_AS(holm_adjust(make_table({1.5})), input_error);
  CHECK_THROWS_AS(holm_adjust(make_table({-0.1})), input_error);
  CHECK_THROWS_AS(holm_adjust(make_table({0.5}), 0.0), input_error);
  CHECK_THROWS_AS(holm_adjust(make_table({0.5}), 1.5), input_error);
}

TEST_CASE("ranks are 1-based sorted positions") {
  const auto r = holm_adjust(make_table({0.9, 0.1, 0.5}));
  CHECK(r.entries[0].rank == 3);
  CHECK(r.entries[1].rank == 1);
  CHECK(r.entries[2].rank == 2);
}

TEST_CASE("dominance and nesting over random tables") {
  Philox rng(2024, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng.next_below(10);
    const auto table = random_table(rng, m);
    const double alpha = 0.05;
    const auto bonf = bonferroni_adjust(table, alpha);
    const auto holm = holm_adjust(table, alpha);
    const auto hoch = hochberg_adjust(table, alpha);
    const auto sidak = sidak_holm_adjust(table, alpha);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(bonf.entries[i].p_adjusted >= holm.entries[i].p_adjusted);
      CHECK(holm.entries[i].p_adjusted >= table.entries[i].p);
      CHECK(hoch.entries[i].p_adjusted <= holm.entries[i].p_adjusted);
      CHECK(sidak.entries[i].p_adjusted >= table.entries[i].p);
      CHECK(sidak.entries[i].p_adjusted <= 1.0);
      // rejection nesting follows the adjusted-value ordering
      if (bonf.entries[i].rejected) CHECK(holm.entries[i].rejected);
      if (holm.entries[i].rejected) CHECK(hoch.entries[i].rejected);
    }
  }
}

TEST_CASE("adjusted values are monotone in the sorted order") {
  Philox rng(99, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto table = random_table(rng, 1 + rng.next_below(12));
    for (const auto* r : {&holm_adjust, &hochberg_adjust, &sidak_holm_adjust}) {
      const auto result = (*r)(table, 0.05);
      std::vector<std::pair<int, double>> by_rank;
      for (const auto& e : result.entries) by_rank.emplace_back(e.rank, e.p_adjusted);
      std::sort(by_rank.begin(), by_rank.end());
      for (std::size_t i = 1; i < by_rank.size(); ++i)
        CHECK(by_rank[i].second >= by_rank[i - 1].second);
    }
  }
}

TEST_CASE("permutation equivariance with distinct p-values") {
  Philox rng(7, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.next_below(8);
    std::vector<double> ps;
    std::set<double> used;
    while (ps.size() < m) {
      const double p = rng.next_double();
      if (used.insert(p).second) ps.push_back(p);
    }
    const auto base = holm_adjust(make_table(ps), 0.05);

    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    for (std::size_t i = m; i-- > 1;) std::swap(perm[i], perm[rng.next_below(i + 1)]);

    std::vector<double> shuffled(m);
    for (std::size_t i = 0; i < m; ++i) shuffled[i] = ps[perm[i]];
    const auto moved = holm_adjust(make_table(shuffled), 0.05);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(moved.entries[i].p_adjusted == base.entries[perm[i]].p_adjusted);
  }
}

TEST_CASE("holm with two hypotheses matches the closed form") {
  const std::vector<double> grid = {0.001, 0.01, 0.02, 0.05, 0.1, 0.2,
                                    0.3, 0.5, 0.7, 0.9, 0.99};
  for (double p1 : grid)
    for (double p2 : grid) {
      const auto r = holm_adjust(make_table({p1, p2}));
      const double small = std::min(p1, p2), large = std::max(p1, p2);
      const double small_exp = std::min(1.0, 2.0 * small);
      const double large_exp = std::min(1.0, std::max(2.0 * small, large));
      const double adj_small = p1 <= p2 ? r.entries[0].p_adjusted : r.entries[1].p_adjusted;
      const double adj_large = p1 <= p2 ? r.entries[1].p_adjusted : r.entries[0].p_adjusted;
      CHECK(adj_small == doctest::Approx(small_exp));
      CHECK(adj_large == doctest::Approx(large_exp));
      (void)large;
    }
}
