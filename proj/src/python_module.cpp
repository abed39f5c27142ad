// JSON text crosses the boundary; python/labelmorph/__init__.py turns it into
// dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "labelmorph/fixtures.hpp"
#include "labelmorph/io.hpp"
#include "labelmorph/labeler.hpp"
#include "labelmorph/penalty.hpp"
#include "labelmorph/scenario.hpp"
#include "labelmorph/service.hpp"

namespace py = pybind11;
using namespace labelmorph;

namespace {

std::string plan_text(const std::string& from, const std::string& to, const std::string& style,
                      const std::string& axis_order) {
  const LabelingFile a = labeling_from_json(parse_json(from));
  const LabelingFile b = labeling_from_json(parse_json(to));
  const Catalog catalog = merge_catalogs(a.catalog, b.catalog);
  const LabelingDiff diff = diff_labelings(catalog, a.labeling, b.labeling, parse_axis_order(axis_order));
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
  return plan_to_json(plan, catalog, &report).dump();
}

std::string solve_text(const std::string& instance, const std::string& mode, std::optional<double> k) {
  WeightedInstance inst = instance_from_json(parse_json(instance));
  if (k) inst.k = *k;
  DirectionSolution sol;
  if (mode == "exact") {
    sol = solve_directions_exact(inst);
  } else if (mode == "heuristic") {
    sol = solve_directions_heuristic(inst);
  } else {
    throw Error("unknown mode '" + mode + "' (exact, heuristic)");
  }
  Json assignment = Json::object();
  for (const auto& m : inst.diff.movements) {
    if (!m.diagonal()) continue;
    const auto it = sol.assignment.find(m.label_id);
    assignment[m.label_id] = to_string(it == sol.assignment.end() ? m.axis_order : it->second);
  }
  return Json{{"mode", mode},
              {"assignment", assignment},
              {"penalty", sol.penalty},
              {"k", inst.k},
              {"decision", sol.penalty <= inst.k + 1e-9 * std::max(1.0, std::abs(inst.k))}}
      .dump();
}

std::string verify_text(const std::string& name) {
  const VerifyResult r = verify_fixture(name);
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"what", c.what}, {"expected", c.expected}, {"actual", c.actual}, {"ok", c.ok()}});
  }
  return Json{{"fixture", r.fixture}, {"passed", r.passed()}, {"checks", checks}, {"overlaps", report_to_json(r.report)}}
      .dump();
}

std::string fixture_text(const std::string& name, bool frozen) {
  const Fixture f = make_fixture(name);
  WeightedInstance inst;
  inst.catalog = f.catalog;
  inst.diff = f.diff();
  if (frozen) {
    for (const auto& m : inst.diff.movements) {
      if (m.diagonal()) inst.frozen.insert(m.label_id);
    }
  }
  return Json{{"from", labeling_to_json(f.catalog, f.before)},
              {"to", labeling_to_json(f.catalog, f.after)},
              {"instance", instance_to_json(inst)}}
      .dump();
}

std::string label_text(const std::string& labels) {
  const Json j = parse_json(labels);
  if (!j.is_array()) throw Error("expected an array of labels");
  std::vector<LabelSpec> specs;
  for (const auto& e : j) specs.push_back(spec_from_json(e));
  const Catalog catalog = make_catalog(specs);
  return labeling_to_json(catalog, greedy_mis(build_conflict_graph(specs))).dump();
}

std::string simulate_text(const std::string& dataset, const std::string& script, const std::string& style,
                          std::uint64_t seed, const std::string& scenario, const std::string& policy) {
  const ScenarioPreset& preset = scenario_preset(scenario);
  const auto store = dataset == "synthetic"
                         ? std::make_shared<const PointStore>(synthetic_dataset(synthetic_options(preset, seed)))
                         : std::make_shared<const PointStore>(load_dataset(dataset));
  ScenarioConfig config;
  config.style = parse_style(style);
  config.policy = parse_policy(policy);
  const ScriptRun run = run_script(store, preset_view(preset, config.screen), parse_script(script), config);
  Json log = Json::array();
  for (const auto& r : run.records) log.push_back(transition_to_json(r, false));
  return Json{{"metrics", metrics_to_json(run.metrics)}, {"transitions", log}}.dump();
}

py::tuple reply(const Response& r) { return py::make_tuple(r.status, r.body.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transitions between point labelings";

  py::register_exception<Error>(m, "LabelmorphError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("plan", &plan_text, py::arg("from_doc"), py::arg("to_doc"), py::arg("style") = "dag",
        py::arg("axis_order") = "horizontal_first");
  m.def("solve", &solve_text, py::arg("instance"), py::arg("mode") = "exact", py::arg("k") = py::none());
  m.def("verify", &verify_text, py::arg("name"));
  m.def("fixture", &fixture_text, py::arg("name"), py::arg("frozen") = false);
  m.def("fixture_names", &fixture_names);
  m.def("label", &label_text, py::arg("labels"));
  m.def("simulate", &simulate_text, py::arg("dataset") = "synthetic", py::arg("script") = "sweep3h",
        py::arg("style") = "dag", py::arg("seed") = 1, py::arg("scenario") = "italy",
        py::arg("policy") = "pin-on-zoom");
  m.def("rect_overlap_bound", [](const std::vector<double>& w, const std::vector<double>& h) {
    return rect_overlap_bound(w, h);
  });

  py::class_<Service>(m, "Service")
      .def(py::init([](const std::string& config) {
             return std::make_unique<Service>(service_config_from_json(parse_json(config)));
           }),
           py::arg("config") = "{}")
      .def("create_session",
           [](Service& s, const std::string& body) { return reply(s.create_session(parse_json(body))); })
      .def("interact",
           [](Service& s, const std::string& id, const std::string& body) {
             return reply(s.interact(id, parse_json(body)));
           })
      .def("state", [](const Service& s, const std::string& id) { return reply(s.state(id)); })
      .def("datasets", [](const Service& s) { return reply(s.list_datasets()); });
}
