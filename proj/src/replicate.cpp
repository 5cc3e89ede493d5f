#include "fwerkit/replicate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fwerkit/adjust.hpp"
#include "fwerkit/errors.hpp"
#include "fwerkit/fixtures.hpp"

namespace fwerkit {

namespace {

constexpr double kTolerance = 0.010;
constexpr int kDecimals = 3;

ReplicationCell value_cell(const std::string& row, const std::string& column,
                           double computed, double published) {
  ReplicationCell cell;
  cell.row = row;
  cell.column = column;
  cell.computed = format_real(computed, kDecimals);
  cell.published = format_real(published, kDecimals);
  cell.ok = std::fabs(computed - published) <= kTolerance;
  return cell;
}

ReplicationCell text_cell(const std::string& row, const std::string& column,
                          const std::string& computed, const std::string& published) {
  ReplicationCell cell;
  cell.row = row;
  cell.column = column;
  cell.computed = computed;
  cell.published = published;
  cell.ok = computed == published;
  return cell;
}

ReplicationCell info_cell(const std::string& row, const std::string& column,
                          const std::string& published) {
  ReplicationCell cell;
  cell.row = row;
  cell.column = column;
  cell.computed = "(not recomputable)";
  cell.published = published;
  cell.comparable = false;
  return cell;
}

ReplicationReport replicate_adjust_table(const std::string& table_id, int model,
                                         const fixtures::AdjustFixture& fixture) {
  ReplicationReport report;
  report.table_id = table_id;
  report.model = model;
  report.tolerance = kTolerance;

  PValueTable table;
  for (std::size_t i = 0; i < fixture.ids.size(); ++i) table.add(fixture.ids[i], fixture.p_raw[i]);
  const auto holm = holm_adjust(table, 0.10);
  const auto sidak = sidak_holm_adjust(table, 0.10);

  for (std::size_t i = 0; i < fixture.ids.size(); ++i) {
    const auto& id = fixture.ids[i];
    report.cells.push_back(
        value_cell(id, "holm", holm.entries[i].p_adjusted, fixture.published_holm[i]));
    report.cells.push_back(
        value_cell(id, "sidak_holm", sidak.entries[i].p_adjusted, fixture.published_sidak[i]));
    report.cells.push_back(info_cell(
        id, "westfall_young",
        format_real(fixture.published_wy[i], kDecimals) +
            " (not recomputable: microdata unavailable)"));
    const bool computed_sig = holm.entries[i].rejected && sidak.entries[i].rejected;
    report.cells.push_back(text_cell(id, "significant@0.10", computed_sig ? "yes" : "no",
                                     fixture.published_significant_10pct[i] ? "yes" : "no"));
  }
  report.notes.push_back("published inputs are rounded to 3 decimals; adjusted "
                         "values are compared within +/-0.010");
  return report;
}

ReplicationReport replicate_table3(const std::string& table_id, int model) {
  const auto fixture = fixtures::table3(model);
  ReplicationReport report;
  report.table_id = table_id;
  report.model = model;
  report.tolerance = kTolerance;

  const auto trace = fallback_test(fixture.plan, fixture.table);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    report.cells.push_back(text_cell(s.hypothesis_id, "initial_alpha",
                                     format_real(s.initial_alpha, kDecimals),
                                     format_real(fixture.published_initial[i], kDecimals)));
    report.cells.push_back(text_cell(s.hypothesis_id, "alpha_propagation",
                                     format_real(s.effective_alpha, kDecimals),
                                     format_real(fixture.published_propagation[i], kDecimals)));
    report.cells.push_back(text_cell(s.hypothesis_id, "H0",
                                     s.rejected ? "Reject" : "No Reject",
                                     fixture.published_reject[i] ? "Reject" : "No Reject"));
  }
  if (model != 1)
    report.notes.push_back(
        "the appendix prints 'No Reject' for the Peabody score in this "
        "specification even though its p-value is below the propagated level "
        "and the next row's 0.100 shows the level did propagate; the "
        "expected decision here follows the rule (Reject)");
  return report;
}

ReplicationReport replicate_table4(const std::string& table_id, int model) {
  if (model != 3)
    throw input_error("table 4 is published for model 3 only");
  const auto fixture = fixtures::table4();
  ReplicationReport report;
  report.table_id = table_id;
  report.model = model;
  report.tolerance = kTolerance;
  report.notes = fixture.notes;

  const auto run = [&](Method intra) {
    GatePlan plan = fixture.plan;
    plan.intra_method = intra;
    return gatekeep_test(plan, fixture.table);
  };
  const GateTrace holm_trace = run(Method::holm);
  const GateTrace sidak_trace = run(Method::sidak_holm);

  for (std::size_t k = 0; k < holm_trace.families.size(); ++k) {
    const auto& family = holm_trace.families[k];
    report.cells.push_back(text_cell(family.family_id, "gate", family.tested ? "opened" : "closed",
                                     "opened"));

    auto sorted_adjusted = [](const GateFamilyTrace& f) {
      std::vector<double> v;
      for (const auto& e : f.adjustment.entries) v.push_back(e.p_adjusted);
      std::sort(v.begin(), v.end());
      return v;
    };
    const auto compare_multiset = [&](const char* column, const GateFamilyTrace& f,
                                      const std::vector<double>& published) {
      const auto computed = sorted_adjusted(f);
      for (std::size_t i = 0; i < computed.size(); ++i)
        report.cells.push_back(value_cell(
            family.family_id + " (sorted " + std::to_string(i + 1) + ")", column,
            computed[i], published[i]));
    };
    compare_multiset("holm", family, fixture.published_holm_sorted[k]);
    compare_multiset("sidak_holm", sidak_trace.families[k], fixture.published_sidak_sorted[k]);

    std::string wy;
    for (std::size_t i = 0; i < fixture.published_wy_sorted[k].size(); ++i) {
      if (i) wy += " ";
      wy += format_real(fixture.published_wy_sorted[k][i], kDecimals);
    }
    report.cells.push_back(info_cell(family.family_id, "westfall_young",
                                     wy + " (not recomputable: microdata unavailable)"));
  }
  return report;
}

}  // namespace

ReplicationReport replicate_table(const std::string& table_id, int model) {
  if (table_id == "1" || table_id == "1A")
    return replicate_adjust_table(table_id, model, fixtures::table1(model));
  if (table_id == "2" || table_id == "2A")
    return replicate_adjust_table(table_id, model, fixtures::table2(model));
  if (table_id == "3" || table_id == "3A") return replicate_table3(table_id, model);
  if (table_id == "4") return replicate_table4(table_id, model);
  throw input_error("unknown table id '" + table_id + "' (expected 1, 2, 3, 4, 1A, 2A or 3A)");
}

std::string render(const ReplicationReport& report, RenderFormat format) {
  if (format == RenderFormat::csv) {
    std::string out = "table,model,row,column,computed,published,verdict\n";
    for (const auto& c : report.cells) {
      std::ostringstream line;
      const std::string verdict = !c.comparable ? "published-only" : (c.ok ? "ok" : "DIFF");
      out += report.table_id + "," + std::to_string(report.model) + ",";
      std::string cells[5] = {c.row, c.column, c.computed, c.published, verdict};
      for (int i = 0; i < 5; ++i) {
        std::string cell = cells[i];
        if (cell.find(',') != std::string::npos) cell = "\"" + cell + "\"";
        out += cell + (i < 4 ? "," : "\n");
      }
    }
    return out;
  }

  std::ostringstream out;
  out << "table " << report.table_id << ", model " << report.model
      << "  (tolerance +/-" << format_real(report.tolerance, 3)
      << " on recomputed values; decisions use p <= threshold)\n";
  std::vector<std::size_t> width(4, 0);
  for (const auto& c : report.cells) {
    width[0] = std::max(width[0], c.row.size());
    width[1] = std::max(width[1], c.column.size());
    width[2] = std::max(width[2], c.computed.size());
    width[3] = std::max(width[3], c.published.size());
  }
  for (const auto& c : report.cells) {
    const std::string verdict = !c.comparable ? "published-only" : (c.ok ? "ok" : "DIFF");
    out << "  " << c.row << std::string(width[0] - c.row.size() + 2, ' ')
        << c.column << std::string(width[1] - c.column.size() + 2, ' ')
        << "computed " << c.computed << std::string(width[2] - c.computed.size() + 2, ' ')
        << "published " << c.published << std::string(width[3] - c.published.size() + 2, ' ')
        << verdict << '\n';
  }
  for (const auto& note : report.notes) out << "note: " << note << '\n';
  out << (report.all_ok() ? "all comparable cells within tolerance\n"
                          : "SOME CELLS OUTSIDE TOLERANCE\n");
  return out.str();
}

}  // namespace fwerkit
