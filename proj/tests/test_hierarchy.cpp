#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fwerkit/adjust.hpp"
#include "fwerkit/errors.hpp"
#include "fwerkit/fixtures.hpp"
#include "fwerkit/hierarchy.hpp"
#include "fwerkit/rng.hpp"

using namespace fwerkit;

namespace {

PValueTable make_table(const std::vector<double>& ps) {
  PValueTable t;
  for (std::size_t i = 0; i < ps.size(); ++i) t.add("H" + std::to_string(i + 1), ps[i]);
  return t;
}

FallbackPlan uniform_plan(std::size_t m, double alpha) {
  FallbackPlan plan;
  plan.alpha = alpha;
  for (std::size_t i = 0; i < m; ++i)
    plan.steps.push_back({"H" + std::to_string(i + 1), 1.0 / static_cast<double>(m)});
  return plan;
}

FallbackPlan first_only_plan(std::size_t m, double alpha) {
  FallbackPlan plan;
  plan.alpha = alpha;
  for (std::size_t i = 0; i < m; ++i)
    plan.steps.push_back({"H" + std::to_string(i + 1), i == 0 ? 1.0 : 0.0});
  return plan;
}

PValueTable random_table(Philox& rng, std::size_t m) {
  PValueTable t;
  for (std::size_t i = 0; i < m; ++i) t.add("H" + std::to_string(i + 1), rng.next_double());
  return t;
}

}  // namespace

TEST_CASE("fixed sequence examples") {
  auto d = fixed_sequence_test(make_table({0.0, 0.0, 0.0}), 0.05);
  for (const auto& x : d) CHECK(x.status == SequenceStatus::rejected);

  d = fixed_sequence_test(make_table({0.01, 0.2, 0.01}), 0.05);
  CHECK(d[0].status == SequenceStatus::rejected);
  CHECK(d[1].status == SequenceStatus::retained);
  CHECK(d[2].status == SequenceStatus::untested);
}

TEST_CASE("fallback reproduces the twelve-step propagation ledger") {
  const auto fixture = fixtures::table3(3);
  const auto trace = fallback_test(fixture.plan, fixture.table);

  REQUIRE(trace.steps.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(trace.steps[i].initial_alpha ==
          doctest::Approx(fixture.published_initial[i]).epsilon(1e-9));
    CHECK(trace.steps[i].effective_alpha ==
          doctest::Approx(fixture.published_propagation[i]).epsilon(1e-9));
    CHECK(trace.steps[i].rejected == fixture.published_reject[i]);
  }
  // ten rejections, then the zero-weight tail fails
  CHECK(trace.rejected_ids().size() == 10);
}

TEST_CASE("fallback single step at full alpha") {
  FallbackPlan plan;
  plan.alpha = 0.05;
  plan.steps.push_back({"only", 1.0});
  PValueTable t;
  t.add("only", 0.03);
  const auto trace = fallback_test(plan, t);
  CHECK(trace.steps[0].effective_alpha == doctest::Approx(0.05));
  CHECK(trace.steps[0].rejected);
}

TEST_CASE("fallback model-1 inputs flip the tail") {
  const auto fixture = fixtures::table3(1);
  const auto trace = fallback_test(fixture.plan, fixture.table);
  // Peabody tested at the full propagated 0.100 but p = 0.114
  CHECK(trace.steps[9].effective_alpha == doctest::Approx(0.10));
  CHECK(!trace.steps[9].rejected);
  // nothing propagates into the zero-weight steps
  CHECK(trace.steps[10].effective_alpha == 0.0);
  CHECK(!trace.steps[10].rejected);
  CHECK(trace.steps[11].effective_alpha == 0.0);
  CHECK(!trace.steps[11].rejected);
}

TEST_CASE("fallback errors") {
  auto plan = uniform_plan(2, 0.05);
  PValueTable missing;
  missing.add("H1", 0.01);
  CHECK_THROWS_WITH_AS(fallback_test(plan, missing),
                       doctest::Contains("H2"), input_error);

  FallbackPlan bad = plan;
  bad.steps[0].weight = 0.9;  // sum 1.4
  CHECK_THROWS_AS(fallback_test(bad, make_table({0.1, 0.1})), plan_error);
}

TEST_CASE("validate_plan") {
  CHECK(validate_plan(fixtures::table3(3).plan).empty());

  FallbackPlan bad;
  bad.alpha = 0.05;
  bad.steps.push_back({"a", 0.6});
  bad.steps.push_back({"b", 0.6});
  const auto violations = validate_plan(bad);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("1.2") != std::string::npos);

  GatePlan gate;
  gate.alpha = 0.05;
  gate.families.push_back({"F1", {"x", "y"}});
  gate.families.push_back({"F2", {"y"}});
  const auto gate_violations = validate_plan(gate);
  REQUIRE(gate_violations.size() == 1);
  CHECK(gate_violations[0].find("'y'") != std::string::npos);

  GatePlan empty_family;
  empty_family.alpha = 0.05;
  empty_family.families.push_back({"F1", {}});
  CHECK(!validate_plan(empty_family).empty());
}

TEST_CASE("fallback trace satisfies the budget invariants") {
  Philox rng(11, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + rng.next_below(8);
    // random non-negative weights, normalized; occasionally zero some out
    std::vector<double> w(m);
    double sum = 0.0;
    for (auto& x : w) { x = rng.next_double(); sum += x; }
    for (auto& x : w) x /= sum;
    FallbackPlan plan;
    plan.alpha = 0.01 + 0.2 * rng.next_double();
    for (std::size_t i = 0; i < m; ++i) plan.steps.push_back({"H" + std::to_string(i + 1), w[i]});
    const auto table = random_table(rng, m);
    const auto trace = fallback_test(plan, table);

    double prev_effective = 0.0;
    bool prev_rejected = false;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& s = trace.steps[i];
      CHECK(s.effective_alpha <= plan.alpha + 1e-12);
      const double expected = i == 0 ? s.initial_alpha
                                     : (prev_rejected ? s.initial_alpha + prev_effective
                                                      : s.initial_alpha);
      CHECK(s.effective_alpha == doctest::Approx(std::min(expected, plan.alpha)).epsilon(1e-12));
      CHECK(s.rejected == (s.effective_alpha > 0.0 && s.p_raw <= s.effective_alpha));
      // fallback dominates the weighted Bonferroni split
      if (s.p_raw <= s.initial_alpha && s.initial_alpha > 0.0) CHECK(s.rejected);
      prev_effective = s.effective_alpha;
      prev_rejected = s.rejected;
    }
  }
}

TEST_CASE("fallback with weight (1,0,...,0) equals the fixed sequence") {
  Philox rng(5150, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng.next_below(8);
    const auto table = random_table(rng, m);
    const double alpha = 0.01 + 0.2 * rng.next_double();
    const auto seq = fixed_sequence_test(table, alpha);
    const auto trace = fallback_test(first_only_plan(m, alpha), table);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(trace.steps[i].rejected == (seq[i].status == SequenceStatus::rejected));
  }
}

TEST_CASE("lowering a p-value never shrinks the fallback rejection set") {
  Philox rng(808, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + rng.next_below(6);
    const auto plan = uniform_plan(m, 0.1);
    auto table = random_table(rng, m);
    const auto before = fallback_test(plan, table);

    const std::size_t target = rng.next_below(m);
    table.entries[target].p *= rng.next_double();
    const auto after = fallback_test(plan, table);
    for (std::size_t i = 0; i < m; ++i)
      if (before.steps[i].rejected) CHECK(after.steps[i].rejected);
  }
}

TEST_CASE("gatekeeping reproduces the three-family serial run") {
  const auto fixture = fixtures::table4();
  const auto trace = gatekeep_test(fixture.plan, fixture.table);

  REQUIRE(trace.families.size() == 3);
  for (const auto& f : trace.families) CHECK(f.tested);
  CHECK(trace.families[1].gate_reason == "all rejected in F1");
  CHECK(trace.families[2].gate_reason == "all rejected in F2");
  CHECK(trace.rejected_ids().size() == 10);

  auto sorted_adjusted = [](const GateFamilyTrace& f) {
    std::vector<double> v;
    for (const auto& e : f.adjustment.entries) v.push_back(e.p_adjusted);
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto f2 = sorted_adjusted(trace.families[1]);
  CHECK(f2[0] == doctest::Approx(0.006));
  CHECK(f2[1] == doctest::Approx(0.092));
  CHECK(f2[2] == doctest::Approx(0.092));
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::fabs(f2[i] - fixture.published_holm_sorted[1][i]) <= 0.010);

  const auto f3 = sorted_adjusted(trace.families[2]);
  CHECK(f3[0] == doctest::Approx(0.002));
  CHECK(f3[1] == doctest::Approx(0.029));
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(std::fabs(f3[i] - fixture.published_holm_sorted[2][i]) <= 0.010);
}

TEST_CASE("a single family degenerates to the standalone adjustment") {
  const auto table = make_table({0.01, 0.2, 0.04});
  for (Method method : {Method::bonferroni, Method::holm, Method::hochberg, Method::sidak_holm}) {
    GatePlan plan;
    plan.alpha = 0.05;
    plan.mode = GateMode::serial;
    plan.intra_method = method;
    plan.families.push_back({"F1", {"H1", "H2", "H3"}});
    const auto trace = gatekeep_test(plan, table);
    const auto standalone = adjust(table, method, 0.05);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(trace.families[0].adjustment.entries[i].p_adjusted ==
            standalone.entries[i].p_adjusted);
      CHECK(trace.families[0].adjustment.entries[i].rejected == standalone.entries[i].rejected);
    }
  }
}

TEST_CASE("serial gatekeeping over singleton families equals the fixed sequence") {
  Philox rng(66, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + rng.next_below(6);
    const auto table = random_table(rng, m);
    const double alpha = 0.01 + 0.2 * rng.next_double();

    GatePlan plan;
    plan.alpha = alpha;
    plan.mode = GateMode::serial;
    plan.intra_method = Method::holm;
    for (std::size_t i = 0; i < m; ++i)
      plan.families.push_back({"F" + std::to_string(i + 1), {"H" + std::to_string(i + 1)}});

    const auto trace = gatekeep_test(plan, table);
    const auto seq = fixed_sequence_test(table, alpha);
    for (std::size_t i = 0; i < m; ++i) {
      const bool gate_rejected = trace.families[i].tested &&
                                 !trace.families[i].adjustment.entries.empty() &&
                                 trace.families[i].adjustment.entries[0].rejected;
      CHECK(gate_rejected == (seq[i].status == SequenceStatus::rejected));
    }
  }
}

TEST_CASE("parallel mode opens on a single rejection, serial does not") {
  GatePlan plan;
  plan.alpha = 0.05;
  plan.intra_method = Method::holm;
  plan.families.push_back({"F1", {"H1", "H2"}});
  plan.families.push_back({"F2", {"H3"}});
  const auto table = make_table({0.001, 0.9, 0.01});

  plan.mode = GateMode::serial;
  auto trace = gatekeep_test(plan, table);
  CHECK(!trace.families[1].tested);
  CHECK(trace.families[1].gate_reason == "gate closed by F1");
  CHECK(trace.families[1].adjustment.entries.empty());
  CHECK(trace.rejected_ids() == std::vector<std::string>{"H1"});

  plan.mode = GateMode::parallel;
  trace = gatekeep_test(plan, table);
  CHECK(trace.families[1].tested);
  CHECK(trace.families[1].gate_reason == "at least one rejected in F1");
  CHECK(trace.rejected_ids() == std::vector<std::string>{"H1", "H3"});
}

TEST_CASE("hypotheses in unopened families are never rejected") {
  Philox rng(4242, 0);
  for (int trial = 0; trial < 200; ++trial) {
    GatePlan plan;
    plan.alpha = 0.05;
    plan.mode = rng.next_below(2) ? GateMode::serial : GateMode::parallel;
    plan.intra_method = Method::holm;
    const std::size_t m = 4 + rng.next_below(4);
    std::size_t next = 0;
    while (next < m) {
      const std::size_t size = std::min(m - next, 1 + rng.next_below(3));
      GateFamily f;
      f.family_id = "F" + std::to_string(plan.families.size() + 1);
      for (std::size_t i = 0; i < size; ++i) f.members.push_back("H" + std::to_string(++next));
      plan.families.push_back(std::move(f));
    }
    const auto table = random_table(rng, m);
    const auto trace = gatekeep_test(plan, table);
    for (const auto& f : trace.families)
      if (!f.tested) CHECK(f.adjustment.entries.empty());
  }
}

TEST_CASE("gatekeeping input errors") {
  GatePlan plan = fixtures::table4().plan;
  PValueTable incomplete;
  incomplete.add("Anemia", 0.002);
  CHECK_THROWS_AS(gatekeep_test(plan, incomplete), input_error);

  plan.intra_method = Method::westfall_young;
  CHECK_THROWS_WITH_AS(gatekeep_test(plan, fixtures::table4().table),
                       doctest::Contains("resampling context"), input_error);
}
