#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>

#include "labelmorph/fixtures.hpp"
#include "labelmorph/io.hpp"
#include "labelmorph/penalty.hpp"
#include "labelmorph/scenario.hpp"

namespace labelmorph {

namespace {

namespace fs = std::filesystem;

struct InputError : Error {
  using Error::Error;
};

std::vector<TransitionStyle> styles_from(const std::string& s) {
  if (s == "all") return {TransitionStyle::Naive, TransitionStyle::Dag, TransitionStyle::Simultaneous};
  return {parse_style(s)};
}

std::shared_ptr<const PointStore> open_dataset(const std::string& spec, std::uint64_t seed,
                                               const ScenarioPreset& preset) {
  if (spec == "synthetic") return std::make_shared<const PointStore>(synthetic_dataset(synthetic_options(preset, seed)));
  try {
    return std::make_shared<const PointStore>(load_dataset(spec));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

std::string fixed(double v, int digits = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct SimulateArgs {
  std::string dataset = "synthetic";
  std::string script = "sweep3h";
  std::string style = "all";
  std::uint64_t seed = 1;
  std::string scenario = "italy";
  std::string policy = "pin-on-zoom";
  std::string out = ".";
};

int simulate(const SimulateArgs& a, std::ostream& out) {
  const ScenarioPreset& preset = scenario_preset(a.scenario);
  const auto store = open_dataset(a.dataset, a.seed, preset);
  const auto script = parse_script(a.script);
  const auto styles = styles_from(a.style);
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (!fs::is_directory(a.out)) throw InputError("cannot create output directory '" + a.out + "'");

  std::string csv = metrics_csv_header();
  out << "style   trans  ovl avg  ovl tot  dur max  dur avg  moved  added  removed\n";
  for (auto style : styles) {
    ScenarioConfig config;
    config.style = style;
    config.policy = parse_policy(a.policy);
    const ScriptRun run = run_script(store, preset_view(preset, config.screen), script, config);
    csv += metrics_csv_row(run.metrics);
    Json log = Json::array();
    for (const auto& r : run.records) log.push_back(transition_to_json(r, false));
    write_text_file((fs::path(a.out) / ("transitions_" + std::string(to_string(style)) + ".json")).string(),
                    log.dump(2) + "\n");
    const auto& m = run.metrics;
    out << std::left << std::setw(8) << to_string(style) << std::right << std::setw(5) << m.transitions
        << std::setw(9) << fixed(m.overlaps_avg) << std::setw(9) << m.overlaps_total << std::setw(9)
        << fixed(m.duration_max, 1) << std::setw(9) << fixed(m.duration_avg) << std::setw(7) << m.moved
        << std::setw(7) << m.added << std::setw(9) << m.removed << "\n";
  }
  write_text_file((fs::path(a.out) / "metrics.csv").string(), csv);
  out << "wrote " << (fs::path(a.out) / "metrics.csv").string() << "\n";
  return kExitOk;
}

int verify(const std::vector<std::string>& names, std::ostream& out) {
  bool all = true;
  for (const auto& name : names) {
    const VerifyResult r = verify_fixture(name);
    out << (r.passed() ? "PASS " : "FAIL ") << r.fixture << "\n";
    for (const auto& c : r.checks) {
      out << "  " << (c.ok() ? "ok   " : "DIFF ") << c.what << ": expected " << c.expected << ", actual " << c.actual
          << "\n";
    }
    for (const auto& e : r.report.events) {
      out << "  overlap " << e.id_a << " " << e.id_b << " [" << fixed(e.interval.start, 3) << ", "
          << fixed(e.interval.end, 3) << "]\n";
    }
    all = all && r.passed();
  }
  return all ? kExitOk : kExitFailed;
}

int solve(const std::string& input, const std::string& mode, std::optional<double> k, std::ostream& out) {
  WeightedInstance inst;
  try {
    inst = instance_from_json(read_json_file(input));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (k) inst.k = *k;
  DirectionSolution sol;
  if (mode == "exact") {
    try {
      sol = solve_directions_exact(inst);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  } else if (mode == "heuristic") {
    sol = solve_directions_heuristic(inst);
  } else {
    throw InputError("unknown mode '" + mode + "' (exact, heuristic)");
  }
  for (const auto& m : inst.diff.movements) {
    if (!m.diagonal()) continue;
    const auto it = sol.assignment.find(m.label_id);
    const AxisOrder o = it == sol.assignment.end() ? m.axis_order : it->second;
    out << m.label_id << " " << to_string(o) << (inst.frozen.contains(m.label_id) ? " (frozen)" : "") << "\n";
  }
  const bool yes = sol.penalty <= inst.k + 1e-9 * std::max(1.0, std::abs(inst.k));
  out << "W = " << sol.penalty << "\n";
  out << "k = " << inst.k << "\n";
  out << (yes ? "YES" : "NO") << (mode == "heuristic" && !yes ? " (heuristic; not a proof)" : "") << "\n";
  return kExitOk;
}

int export_plan(const std::string& from, const std::string& to, const std::string& style, const std::string& axis,
                const std::string& out_file, std::ostream& out) {
  LabelingFile a, b;
  Catalog catalog;
  LabelingDiff diff;
  try {
    a = labeling_from_json(read_json_file(from));
    b = labeling_from_json(read_json_file(to));
    catalog = merge_catalogs(a.catalog, b.catalog);
    diff = diff_labelings(catalog, a.labeling, b.labeling, parse_axis_order(axis));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  TransitionPlan plan;
  switch (parse_style(style)) {
    case TransitionStyle::Naive:
      plan = plan_naive(diff);
      break;
    case TransitionStyle::Dag:
      plan = plan_dag(catalog, diff);
      break;
    case TransitionStyle::Simultaneous:
      plan = plan_simultaneous(diff);
      break;
  }
  const OverlapReport report = evaluate_plan(plan, catalog);
  const std::string text = plan_to_json(plan, catalog, &report).dump(2) + "\n";
  if (out_file.empty() || out_file == "-") {
    out << text;
  } else {
    write_text_file(out_file, text);
  }
  return kExitOk;
}

int export_fixture(const std::string& name, bool frozen, const std::string& dir, std::ostream& out) {
  const Fixture f = make_fixture(name);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::string stem = f.name;
  for (char& c : stem) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
  }
  while (!stem.empty() && stem.back() == '_') stem.pop_back();
  WeightedInstance inst;
  inst.catalog = f.catalog;
  inst.diff = f.diff();
  if (frozen) {
    for (const auto& m : inst.diff.movements) {
      if (m.diagonal()) inst.frozen.insert(m.label_id);
    }
  }
  const fs::path base(dir);
  write_text_file((base / (stem + "_from.json")).string(), labeling_to_json(f.catalog, f.before).dump(2) + "\n");
  write_text_file((base / (stem + "_to.json")).string(), labeling_to_json(f.catalog, f.after).dump(2) + "\n");
  const std::string inst_name = stem + (frozen ? "_frozen" : "") + ".json";
  write_text_file((base / inst_name).string(), instance_to_json(inst).dump(2) + "\n");
  out << "wrote " << (base / (stem + "_from.json")).string() << ", " << (base / (stem + "_to.json")).string() << ", "
      << (base / inst_name).string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plan and measure animated transitions between map labelings"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "run an interaction script, write metrics CSV and JSON logs");
  simulate_cmd->add_option("--dataset", sim.dataset, "CSV/JSON point file, or 'synthetic'");
  simulate_cmd->add_option("--script", sim.script, "a, b, c, sweep3h, or 'zoom(+1); time(+5)'");
  simulate_cmd->add_option("--style", sim.style, "naive, dag, simul or all");
  simulate_cmd->add_option("--seed", sim.seed, "seed of the synthetic dataset");
  simulate_cmd->add_option("--scenario", sim.scenario, "start state: italy, lausanne, leeds, los_angeles, "
                                                       "new_delhi, sao_paulo");
  simulate_cmd->add_option("--policy", sim.policy, "pin-on-zoom, pin-always or pin-never");
  simulate_cmd->add_option("--out", sim.out, "output directory");

  std::vector<std::string> fixtures;
  bool verify_all = false;
  auto* verify_cmd = app.add_subcommand("verify", "check a fixture's overlap counts");
  verify_cmd->add_option("--fixture", fixtures, "fixture name, e.g. lemma1 or shift_chain(5)");
  verify_cmd->add_flag("--all", verify_all, "every fixture");

  std::string input, mode = "exact";
  std::optional<double> k;
  auto* solve_cmd = app.add_subcommand("solve", "choose diagonal directions of a weighted instance");
  solve_cmd->add_option("--input", input, "instance JSON")->required();
  solve_cmd->add_option("--mode", mode, "exact or heuristic");
  solve_cmd->add_option("--k", k, "penalty budget (defaults to the file's k)");

  std::string from, to, style = "dag", axis = "horizontal_first", plan_out;
  auto* export_cmd = app.add_subcommand("export-plan", "plan JSON with keyframes for two labeling files");
  export_cmd->add_option("--from", from, "labeling JSON")->required();
  export_cmd->add_option("--to", to, "labeling JSON")->required();
  export_cmd->add_option("--style", style, "naive, dag or simul");
  export_cmd->add_option("--axis-order", axis, "horizontal_first or vertical_first");
  export_cmd->add_option("--out", plan_out, "output file (default stdout)");

  std::string fixture_name, fixture_dir = ".";
  bool frozen = false;
  auto* fixture_cmd = app.add_subcommand("export-fixture", "write a fixture as labeling and instance files");
  fixture_cmd->add_option("--fixture", fixture_name, "fixture name")->required();
  fixture_cmd->add_option("--out", fixture_dir, "output directory");
  fixture_cmd->add_flag("--frozen", frozen, "freeze every diagonal movement at its fixture direction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*simulate_cmd) return simulate(sim, out);
    if (*verify_cmd) {
      if (verify_all) fixtures = fixture_names();
      if (fixtures.empty()) throw InputError("give --fixture NAME or --all");
      return verify(fixtures, out);
    }
    if (*solve_cmd) return solve(input, mode, k, out);
    if (*export_cmd) return export_plan(from, to, style, axis, plan_out, out);
    if (*fixture_cmd) return export_fixture(fixture_name, frozen, fixture_dir, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace labelmorph
