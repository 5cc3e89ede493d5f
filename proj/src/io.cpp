#include "fwerkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "fwerkit/errors.hpp"

namespace fwerkit {

RenderFormat render_format_from_name(const std::string& name) {
  if (name == "csv") return RenderFormat::csv;
  if (name == "pretty") return RenderFormat::pretty;
  throw input_error("unknown format '" + name + "' (expected csv or pretty)");
}

std::string format_real(double x, int decimals) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// CSV primitives
// ---------------------------------------------------------------------------

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool line_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') { cell += '"'; ++i; }
        else quoted = false;
      } else cell += c;
      continue;
    }
    switch (c) {
      case '"': quoted = true; line_has_content = true; break;
      case ',': row.push_back(std::move(cell)); cell.clear(); line_has_content = true; break;
      case '\r': break;
      case '\n':
        if (line_has_content || !cell.empty() || !row.empty()) {
          row.push_back(std::move(cell));
          cell.clear();
          rows.push_back(std::move(row));
          row.clear();
        }
        line_has_content = false;
        break;
      default: cell += c; line_has_content = true; break;
    }
  }
  if (line_has_content || !cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  out += '\n';
  return out;
}

double parse_real(const std::string& cell, const std::string& where) {
  const std::string trimmed = cell;
  if (trimmed.empty()) throw input_error(where + ": empty numeric cell");
  char* end = nullptr;
  const double v = std::strtod(trimmed.c_str(), &end);
  if (end != trimmed.c_str() + trimmed.size())
    throw input_error(where + ": '" + cell + "' is not a number");
  return v;
}

bool parse_bool(const std::string& cell, const std::string& where) {
  if (cell == "true") return true;
  if (cell == "false") return false;
  throw input_error(where + ": '" + cell + "' is not a boolean");
}

// Aligned plain-text table; `flag` rows get a marker in the last column.
std::string pretty_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << cells[c];
      if (c + 1 < cells.size())
        out << std::string(width[c] - cells[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(header);
  {
    std::vector<std::string> rule(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) rule[c] = std::string(width[c], '-');
    emit(rule);
  }
  for (const auto& r : rows) emit(r);
  return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// p-value CSV
// ---------------------------------------------------------------------------

ParsedPValues parse_pvalue_csv(const std::string& text) {
  const auto rows = split_csv(text);
  if (rows.empty()) throw input_error("empty file: missing header row");
  const auto& header = rows.front();

  auto column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? SIZE_MAX : static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id_col = column("hypothesis_id");
  const std::size_t p_col = column("p_value");
  if (id_col == SIZE_MAX) throw input_error("missing required column 'hypothesis_id'");
  if (p_col == SIZE_MAX) throw input_error("missing required column 'p_value'");
  const std::size_t family_col = column("family");
  const std::size_t weight_col = column("weight");
  const std::size_t order_col = column("order");

  ParsedPValues parsed;
  parsed.hints.has_family = family_col != SIZE_MAX;
  parsed.hints.has_weight = weight_col != SIZE_MAX;
  parsed.hints.has_order = order_col != SIZE_MAX;

  std::unordered_set<std::string> ids;
  std::unordered_set<double> orders;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "line " + std::to_string(r + 1);
    if (row.size() != header.size())
      throw input_error(where + ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(row.size()));
    const std::string& id = row[id_col];
    if (id.empty()) throw input_error(where + ": empty hypothesis_id");
    if (!ids.insert(id).second)
      throw input_error(where + ": duplicate hypothesis_id '" + id + "'");
    const double p = parse_real(row[p_col], where + ", column p_value");
    if (!(p >= 0.0 && p <= 1.0))
      throw input_error(where + ", column p_value: " + row[p_col] + " outside [0,1]");
    parsed.table.add(id, p);

    parsed.hints.family.push_back(parsed.hints.has_family ? row[family_col] : "");
    if (parsed.hints.has_weight) {
      const double w = parse_real(row[weight_col], where + ", column weight");
      if (w < 0.0) throw input_error(where + ", column weight: negative weight");
      parsed.hints.weight.push_back(w);
    } else {
      parsed.hints.weight.push_back(DataMatrix::missing);
    }
    if (parsed.hints.has_order) {
      const double o = parse_real(row[order_col], where + ", column order");
      if (!orders.insert(o).second)
        throw input_error(where + ", column order: duplicate order value " + row[order_col]);
      parsed.hints.order.push_back(o);
    } else {
      parsed.hints.order.push_back(DataMatrix::missing);
    }
  }
  return parsed;
}

FallbackPlan fallback_plan_from_hints(const ParsedPValues& parsed, double alpha) {
  if (!parsed.hints.has_weight)
    throw input_error("building a fallback plan needs a 'weight' column");
  FallbackPlan plan;
  plan.alpha = alpha;
  std::vector<std::size_t> order(parsed.table.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (parsed.hints.has_order)
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return parsed.hints.order[a] < parsed.hints.order[b];
    });
  double sum = 0.0;
  for (auto i : order) {
    plan.steps.push_back({parsed.table.entries[i].hypothesis_id, parsed.hints.weight[i]});
    sum += parsed.hints.weight[i];
  }
  if (std::fabs(sum - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "weight column sums to " << sum << " (must be 1 within 1e-6)";
    throw input_error(msg.str());
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Plan files
// ---------------------------------------------------------------------------

namespace {

void require_violations_empty(const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "plan validation failed:";
  for (const auto& v : violations) msg << "\n  - " << v;
  throw plan_error(msg.str());
}

}  // namespace

Plan parse_plan(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("plan file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw input_error("plan file must be a JSON object");
  if (!doc.contains("alpha") || !doc["alpha"].is_number())
    throw input_error("plan file needs a numeric 'alpha'");
  const double alpha = doc["alpha"].get<double>();

  const bool has_steps = doc.contains("steps");
  const bool has_families = doc.contains("families");
  if (has_steps == has_families)
    throw input_error("plan file must declare exactly one of 'steps' (fallback) "
                      "or 'families' (gatekeeping)");

  if (has_steps) {
    if (!doc["steps"].is_array()) throw input_error("'steps' must be an array");
    FallbackPlan plan;
    plan.alpha = alpha;
    for (const auto& step : doc["steps"]) {
      if (!step.is_object() || !step.contains("id") || !step["id"].is_string() ||
          !step.contains("weight") || !step["weight"].is_number())
        throw input_error("each step needs a string 'id' and a numeric 'weight'");
      plan.steps.push_back({step["id"].get<std::string>(), step["weight"].get<double>()});
    }
    require_violations_empty(validate_plan(plan));
    return plan;
  }

  if (!doc["families"].is_array()) throw input_error("'families' must be an array");
  GatePlan plan;
  plan.alpha = alpha;
  if (!doc.contains("mode") || !doc["mode"].is_string())
    throw input_error("gate plan needs a string 'mode'");
  plan.mode = gate_mode_from_name(doc["mode"].get<std::string>());
  if (!doc.contains("intra_method") || !doc["intra_method"].is_string())
    throw input_error("gate plan needs a string 'intra_method'");
  plan.intra_method = method_from_name(doc["intra_method"].get<std::string>());
  for (const auto& family : doc["families"]) {
    if (!family.is_object() || !family.contains("id") || !family["id"].is_string() ||
        !family.contains("members") || !family["members"].is_array())
      throw input_error("each family needs a string 'id' and a 'members' array");
    GateFamily f;
    f.family_id = family["id"].get<std::string>();
    for (const auto& member : family["members"]) {
      if (!member.is_string()) throw input_error("family members must be strings");
      f.members.push_back(member.get<std::string>());
    }
    plan.families.push_back(std::move(f));
  }
  require_violations_empty(validate_plan(plan));
  return plan;
}

// ---------------------------------------------------------------------------
// Data matrix CSV
// ---------------------------------------------------------------------------

DataMatrix parse_data_matrix_csv(const std::string& text) {
  const auto rows = split_csv(text);
  if (rows.empty()) throw input_error("empty file: missing header row");
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "unit_id" || header[1] != "group")
    throw input_error("data matrix header must start with unit_id,group and "
                      "carry at least one outcome column");

  DataMatrix data;
  data.outcome_names.assign(header.begin() + 2, header.end());
  data.columns.assign(data.outcome_names.size(), {});
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "line " + std::to_string(r + 1);
    if (row.size() != header.size())
      throw input_error(where + ": expected " + std::to_string(header.size()) +
                        " fields, got " + std::to_string(row.size()));
    if (row[1] != "0" && row[1] != "1")
      throw input_error(where + ": group must be 0 or 1, got '" + row[1] + "'");
    data.group.push_back(row[1] == "1" ? 1 : 0);
    for (std::size_t j = 0; j < data.outcome_names.size(); ++j) {
      const std::string& cell = row[j + 2];
      data.columns[j].push_back(cell.empty() ? DataMatrix::missing
                                             : parse_real(cell, where));
    }
  }
  validate_matrix(data);
  return data;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string render(const AdjustmentResult& result, RenderFormat format, int decimals) {
  if (format == RenderFormat::csv) {
    std::string out = "hypothesis_id,p_raw,p_adjusted,rank,rejected,method,alpha\n";
    for (const auto& e : result.entries)
      out += csv_line({e.hypothesis_id, format_real(e.p_raw, decimals),
                       format_real(e.p_adjusted, decimals), std::to_string(e.rank),
                       e.rejected ? "true" : "false", method_name(result.method),
                       format_real(result.alpha, decimals)});
    return out;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : result.entries)
    rows.push_back({e.hypothesis_id, format_real(e.p_raw, decimals),
                    format_real(e.p_adjusted, decimals), std::to_string(e.rank),
                    e.rejected ? "*" : ""});
  std::string out = pretty_table({"hypothesis", "p_raw", "p_adjusted", "rank", "sig"}, rows);
  out += "method: " + method_name(result.method) +
         "  alpha: " + format_real(result.alpha, decimals) +
         "  (* = rejected)\n";
  return out;
}

AdjustmentResult parse_adjustment_csv(const std::string& text) {
  const auto rows = split_csv(text);
  if (rows.empty() || rows.front() != std::vector<std::string>{
      "hypothesis_id", "p_raw", "p_adjusted", "rank", "rejected", "method", "alpha"})
    throw input_error("not an adjustment result csv");
  AdjustmentResult result;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "line " + std::to_string(r + 1);
    if (row.size() != 7) throw input_error(where + ": expected 7 fields");
    AdjustmentEntry e;
    e.hypothesis_id = row[0];
    e.p_raw = parse_real(row[1], where);
    e.p_adjusted = parse_real(row[2], where);
    e.rank = static_cast<int>(parse_real(row[3], where));
    e.rejected = parse_bool(row[4], where);
    result.entries.push_back(std::move(e));
    result.method = method_from_name(row[5]);
    result.alpha = parse_real(row[6], where);
  }
  return result;
}

std::string render(const FallbackTrace& trace, RenderFormat format, int decimals) {
  if (format == RenderFormat::csv) {
    std::string out = "hypothesis_id,p_value,weight,initial_alpha,alpha_propagation,H0,alpha\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const auto& s = trace.steps[i];
      out += csv_line({s.hypothesis_id, format_real(s.p_raw, decimals),
                       format_real(trace.plan.steps[i].weight, decimals),
                       format_real(s.initial_alpha, decimals),
                       format_real(s.effective_alpha, decimals),
                       s.rejected ? "Reject" : "No Reject",
                       format_real(trace.plan.alpha, decimals)});
    }
    return out;
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    rows.push_back({s.hypothesis_id, format_real(s.p_raw, decimals),
                    format_real(trace.plan.steps[i].weight, decimals),
                    format_real(s.initial_alpha, decimals),
                    format_real(s.effective_alpha, decimals),
                    s.rejected ? "Reject" : "No Reject", s.rejected ? "*" : ""});
  }
  std::string out = pretty_table(
      {"hypothesis", "p_value", "weight", "initial_alpha", "alpha_propagation", "H0", "sig"},
      rows);
  out += "alpha: " + format_real(trace.plan.alpha, decimals) + "  (* = rejected)\n";
  return out;
}

FallbackTrace parse_fallback_trace_csv(const std::string& text) {
  const auto rows = split_csv(text);
  if (rows.empty() || rows.front() != std::vector<std::string>{
      "hypothesis_id", "p_value", "weight", "initial_alpha", "alpha_propagation", "H0", "alpha"})
    throw input_error("not a fallback trace csv");
  FallbackTrace trace;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "line " + std::to_string(r + 1);
    if (row.size() != 7) throw input_error(where + ": expected 7 fields");
    FallbackStepTrace s;
    s.hypothesis_id = row[0];
    s.p_raw = parse_real(row[1], where);
    s.initial_alpha = parse_real(row[3], where);
    s.effective_alpha = parse_real(row[4], where);
    if (row[5] != "Reject" && row[5] != "No Reject")
      throw input_error(where + ": H0 must be Reject or No Reject");
    s.rejected = row[5] == "Reject";
    trace.steps.push_back(std::move(s));
    trace.plan.steps.push_back({row[0], parse_real(row[2], where)});
    trace.plan.alpha = parse_real(row[6], where);
  }
  return trace;
}

std::string render(const GateTrace& trace, RenderFormat format, int decimals) {
  if (format == RenderFormat::csv) {
    std::string out =
        "family_id,hypothesis_id,status,p_raw,p_adjusted,rank,rejected,gate_reason,method,alpha\n";
    for (const auto& f : trace.families) {
      if (f.tested) {
        for (const auto& e : f.adjustment.entries)
          out += csv_line({f.family_id, e.hypothesis_id, "tested",
                           format_real(e.p_raw, decimals), format_real(e.p_adjusted, decimals),
                           std::to_string(e.rank), e.rejected ? "true" : "false", f.gate_reason,
                           method_name(trace.plan.intra_method),
                           format_real(trace.plan.alpha, decimals)});
      } else {
        // look the members up in the plan echo so untested rows still appear
        for (const auto& family : trace.plan.families)
          if (family.family_id == f.family_id)
            for (const auto& id : family.members)
              out += csv_line({f.family_id, id, "untested", "NA", "NA", "NA", "false",
                               f.gate_reason, method_name(trace.plan.intra_method),
                               format_real(trace.plan.alpha, decimals)});
      }
    }
    return out;
  }
  std::ostringstream out;
  for (const auto& f : trace.families) {
    out << f.family_id << " [" << (f.tested ? "tested" : "untested") << ": " << f.gate_reason
        << "]\n";
    if (!f.tested) {
      for (const auto& family : trace.plan.families)
        if (family.family_id == f.family_id)
          for (const auto& id : family.members) out << "  " << id << "  (untested)\n";
      continue;
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : f.adjustment.entries)
      rows.push_back({e.hypothesis_id, format_real(e.p_raw, decimals),
                      format_real(e.p_adjusted, decimals), std::to_string(e.rank),
                      e.rejected ? "*" : ""});
    std::istringstream table(pretty_table({"hypothesis", "p_raw", "p_adjusted", "rank", "sig"},
                                          rows));
    std::string line;
    while (std::getline(table, line)) out << "  " << line << '\n';
  }
  out << "mode: " << gate_mode_name(trace.plan.mode)
      << "  intra_method: " << method_name(trace.plan.intra_method)
      << "  alpha: " << format_real(trace.plan.alpha, decimals) << "  (* = rejected)\n";
  return out.str();
}

std::string render(const WYResult& result, RenderFormat format, int decimals, double alpha) {
  if (format == RenderFormat::csv) {
    std::string out = "outcome,raw_p,adjusted_p,error,B_used,scheme,seed\n";
    for (const auto& o : result.outcomes)
      out += csv_line({o.name, format_real(o.raw_p, decimals),
                       format_real(o.adjusted_p, decimals), o.error,
                       std::to_string(result.B_used), scheme_name(result.scheme),
                       std::to_string(result.seed)});
    return out;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& o : result.outcomes)
    rows.push_back({o.name, format_real(o.raw_p, decimals), format_real(o.adjusted_p, decimals),
                    o.valid ? (o.adjusted_p <= alpha ? "*" : "") : "error: " + o.error});
  std::string out = pretty_table({"outcome", "raw_p", "adjusted_p", "sig"}, rows);
  out += "scheme: " + scheme_name(result.scheme) + "  B_used: " + std::to_string(result.B_used) +
         "  seed: " + std::to_string(result.seed) +
         "  (* = adjusted_p <= " + format_real(alpha, decimals) + ")\n";
  return out;
}

std::string render(const SimulationReport& report, RenderFormat format, int decimals) {
  std::vector<std::pair<std::string, std::string>> fields;
  const auto& c = report.config;
  fields.emplace_back("procedure", procedure_name(c.procedure));
  fields.emplace_back("m", std::to_string(c.m));
  fields.emplace_back("rho", format_real(c.rho, decimals));
  fields.emplace_back("alpha", format_real(c.alpha, decimals));
  fields.emplace_back("n_reps", std::to_string(c.n_reps));
  fields.emplace_back("seed", std::to_string(c.seed));
  {
    std::string effects;
    for (std::size_t j = 0; j < c.m; ++j) {
      if (j) effects += ' ';
      effects += format_real(c.effect(j), decimals);
    }
    fields.emplace_back("effects", effects);
  }
  fields.emplace_back("empirical_fwer", format_real(report.empirical_fwer, decimals));
  fields.emplace_back("fwer_ci_low", format_real(report.fwer_ci_low, decimals));
  fields.emplace_back("fwer_ci_high", format_real(report.fwer_ci_high, decimals));
  fields.emplace_back("any_rejection_rate", format_real(report.any_rejection_rate, decimals));
  for (std::size_t j = 0; j < report.per_hypothesis_rejection_rate.size(); ++j)
    fields.emplace_back("reject_rate_H" + std::to_string(j + 1),
                        format_real(report.per_hypothesis_rejection_rate[j], decimals));

  if (format == RenderFormat::csv) {
    std::string out = "metric,value\n";
    for (const auto& [k, v] : fields) out += csv_line({k, v});
    return out;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, v] : fields) rows.push_back({k, v});
  return pretty_table({"metric", "value"}, rows);
}

}  // namespace fwerkit
