#include "fwerkit/cli.hpp"

#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fwerkit/adjust.hpp"
#include "fwerkit/errors.hpp"
#include "fwerkit/io.hpp"
#include "fwerkit/replicate.hpp"
#include "fwerkit/resample.hpp"
#include "fwerkit/simulate.hpp"

namespace fwerkit {

namespace {

std::uint64_t parse_seed_text(const std::string& text, const std::string& source) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw input_error(source + " '" + text + "' is not a valid 64-bit seed");
  }
}

// --seed wins; FWERKIT_SEED is the fallback; otherwise a fixed default so
// repeated invocations stay byte-identical.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FWERKIT_SEED"))
    return parse_seed_text(env, "FWERKIT_SEED");
  return 12345;
}

std::vector<double> parse_effects(const std::string& text) {
  std::vector<double> effects;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw input_error("empty entry in --effects list");
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size())
      throw input_error("--effects entry '" + item + "' is not a number");
    effects.push_back(v);
  }
  if (effects.empty()) throw input_error("--effects list is empty");
  return effects;
}

void deliver(const std::string& text, const std::string& output_path, std::ostream& out) {
  if (output_path.empty()) out << text;
  else write_file(output_path, text);
}

struct CommonFlags {
  std::string input;
  std::string plan;
  std::string output;
  std::string format = "csv";
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"FWER correction toolkit: classical, resampling-based and "
               "hierarchical multiple-testing procedures"};
  app.require_subcommand(1);

  CommonFlags adjust_flags, fallback_flags, gate_flags, wy_flags, sim_flags, rep_flags;

  // adjust
  auto* cmd_adjust = app.add_subcommand("adjust", "Single-family p-value adjustment");
  std::string adjust_method = "holm";
  cmd_adjust->add_option("--method", adjust_method,
                         "bonferroni, holm, hochberg or sidak-holm")->required();
  cmd_adjust->add_option("--alpha", adjust_flags.alpha, "significance level (default 0.05)");
  cmd_adjust->add_option("--input", adjust_flags.input, "p-value csv")->required();
  cmd_adjust->add_option("--output", adjust_flags.output, "write here instead of stdout");
  cmd_adjust->add_option("--format", adjust_flags.format, "csv or pretty");

  // fallback
  auto* cmd_fallback = app.add_subcommand("fallback", "Fallback sequence with alpha propagation");
  cmd_fallback->add_option("--plan", fallback_flags.plan, "fallback plan (json)")->required();
  cmd_fallback->add_option("--input", fallback_flags.input, "p-value csv")->required();
  double fallback_alpha_override = -1.0;
  cmd_fallback->add_option("--alpha", fallback_alpha_override,
                           "override the plan's alpha");
  cmd_fallback->add_option("--output", fallback_flags.output, "write here instead of stdout");
  cmd_fallback->add_option("--format", fallback_flags.format, "csv or pretty");

  // gatekeep
  auto* cmd_gate = app.add_subcommand("gatekeep", "Serial/parallel gatekeeping over families");
  cmd_gate->add_option("--plan", gate_flags.plan, "gate plan (json)")->required();
  cmd_gate->add_option("--input", gate_flags.input, "p-value csv")->required();
  double gate_alpha_override = -1.0;
  cmd_gate->add_option("--alpha", gate_alpha_override, "override the plan's alpha");
  cmd_gate->add_option("--output", gate_flags.output, "write here instead of stdout");
  cmd_gate->add_option("--format", gate_flags.format, "csv or pretty");
  std::string gate_data, gate_scheme = "permutation", gate_statistic = "mean-difference";
  std::size_t gate_B = 10000;
  cmd_gate->add_option("--data", gate_data,
                       "data matrix csv (needed when intra_method is westfall_young)");
  cmd_gate->add_option("--B", gate_B, "resamples for westfall_young intra");
  cmd_gate->add_option("--scheme", gate_scheme, "permutation, bootstrap or exhaustive");
  cmd_gate->add_option("--statistic", gate_statistic, "mean-difference or t-welch");
  cmd_gate->add_option("--seed", gate_flags.seed, "resampling seed");

  // wy
  auto* cmd_wy = app.add_subcommand("wy", "Westfall-Young free step-down min-p adjustment");
  cmd_wy->add_option("--input", wy_flags.input, "data matrix csv")->required();
  std::string wy_scheme = "permutation", wy_statistic = "mean-difference";
  std::size_t wy_B = 10000;
  cmd_wy->add_option("--B", wy_B, "number of resamples (default 10000)");
  cmd_wy->add_option("--scheme", wy_scheme, "permutation, bootstrap or exhaustive");
  cmd_wy->add_option("--statistic", wy_statistic, "mean-difference or t-welch");
  cmd_wy->add_option("--seed", wy_flags.seed, "resampling seed (FWERKIT_SEED as fallback)");
  cmd_wy->add_option("--alpha", wy_flags.alpha, "level used to flag rejections (pretty format)");
  cmd_wy->add_option("--output", wy_flags.output, "write here instead of stdout");
  cmd_wy->add_option("--format", wy_flags.format, "csv or pretty");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo FWER / power estimation");
  std::string sim_procedure, sim_effects = "0";
  std::size_t sim_reps = 10000;
  double sim_rho = 0.0;
  cmd_sim->add_option("--procedure", sim_procedure,
                      "unadjusted, bonferroni, holm, hochberg, sidak-holm, "
                      "fixed-sequence, fallback, gatekeeping or westfall-young")->required();
  cmd_sim->add_option("--effects", sim_effects,
                      "comma list of per-hypothesis effect sizes (0 = true null); "
                      "its length sets the hypothesis count")->required();
  cmd_sim->add_option("--reps", sim_reps, "replications (default 10000, minimum 100)");
  cmd_sim->add_option("--rho", sim_rho, "equicorrelation of the test statistics, in [0,1)");
  cmd_sim->add_option("--alpha", sim_flags.alpha, "significance level (default 0.05)");
  cmd_sim->add_option("--seed", sim_flags.seed, "seed (FWERKIT_SEED as fallback)");
  cmd_sim->add_option("--output", sim_flags.output, "write here instead of stdout");
  cmd_sim->add_option("--format", sim_flags.format, "csv or pretty");

  // replicate
  auto* cmd_rep = app.add_subcommand("replicate",
                                     "Recompute a published table from embedded fixtures");
  std::string rep_table;
  int rep_model = 0;
  cmd_rep->add_option("--table", rep_table, "1, 2, 3, 4, 1A, 2A or 3A")->required();
  cmd_rep->add_option("--model", rep_model,
                      "specification 1-3 (default: 3 for main tables, 1 for appendix)");
  cmd_rep->add_option("--output", rep_flags.output, "write here instead of stdout");
  cmd_rep->add_option("--format", rep_flags.format, "csv or pretty");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*cmd_adjust) {
      const auto parsed = parse_pvalue_csv(read_file(adjust_flags.input));
      const auto result = adjust(parsed.table, method_from_name(adjust_method),
                                 adjust_flags.alpha);
      deliver(render(result, render_format_from_name(adjust_flags.format)),
              adjust_flags.output, out);
    } else if (*cmd_fallback) {
      auto plan_doc = parse_plan(read_file(fallback_flags.plan));
      auto* plan = std::get_if<FallbackPlan>(&plan_doc);
      if (!plan) throw input_error("plan file declares a gate plan; expected a fallback plan");
      if (fallback_alpha_override > 0.0) plan->alpha = fallback_alpha_override;
      const auto parsed = parse_pvalue_csv(read_file(fallback_flags.input));
      const auto trace = fallback_test(*plan, parsed.table);
      deliver(render(trace, render_format_from_name(fallback_flags.format)),
              fallback_flags.output, out);
    } else if (*cmd_gate) {
      auto plan_doc = parse_plan(read_file(gate_flags.plan));
      auto* plan = std::get_if<GatePlan>(&plan_doc);
      if (!plan) throw input_error("plan file declares a fallback plan; expected a gate plan");
      if (gate_alpha_override > 0.0) plan->alpha = gate_alpha_override;
      const auto parsed = parse_pvalue_csv(read_file(gate_flags.input));
      GateTrace trace;
      if (plan->intra_method == Method::westfall_young) {
        if (gate_data.empty())
          throw input_error("intra_method westfall_young needs --data <matrix.csv>");
        ResampleContext ctx;
        ctx.data = parse_data_matrix_csv(read_file(gate_data));
        ctx.spec.scheme = scheme_from_name(gate_scheme);
        ctx.spec.B = gate_B;
        ctx.spec.statistic = statistic_from_name(gate_statistic);
        ctx.spec.seed = resolve_seed(gate_flags.seed);
        err << "seed: " << ctx.spec.seed << '\n';
        trace = gatekeep_test(*plan, parsed.table, &ctx);
      } else {
        trace = gatekeep_test(*plan, parsed.table);
      }
      deliver(render(trace, render_format_from_name(gate_flags.format)),
              gate_flags.output, out);
    } else if (*cmd_wy) {
      ResamplingSpec spec;
      spec.scheme = scheme_from_name(wy_scheme);
      spec.B = wy_B;
      spec.statistic = statistic_from_name(wy_statistic);
      spec.seed = resolve_seed(wy_flags.seed);
      err << "seed: " << spec.seed << '\n';
      const auto data = parse_data_matrix_csv(read_file(wy_flags.input));
      const auto result = wy_minp_adjust(data, spec);
      deliver(render(result, render_format_from_name(wy_flags.format), 3, wy_flags.alpha),
              wy_flags.output, out);
    } else if (*cmd_sim) {
      SimulationConfig config;
      config.effects = parse_effects(sim_effects);
      config.m = config.effects.size();
      config.procedure = procedure_from_name(sim_procedure);
      config.n_reps = sim_reps;
      config.rho = sim_rho;
      config.alpha = sim_flags.alpha;
      config.seed = resolve_seed(sim_flags.seed);
      err << "seed: " << config.seed << '\n';
      const auto report = estimate_fwer(config);
      err << "runtime: " << format_real(report.runtime_seconds, 3) << "s\n";
      deliver(render(report, render_format_from_name(sim_flags.format)),
              sim_flags.output, out);
    } else if (*cmd_rep) {
      const bool appendix = rep_table.size() == 2;
      const int model = rep_model != 0 ? rep_model : (appendix ? 1 : 3);
      const auto report = replicate_table(rep_table, model);
      deliver(render(report, render_format_from_name(rep_flags.format)),
              rep_flags.output, out);
    }
    return 0;
  } catch (const input_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace fwerkit
