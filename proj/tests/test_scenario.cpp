#include <doctest.h>

#include <ctime>
#include <random>

#include "labelmorph/scenario.hpp"

using namespace labelmorph;

namespace {

TimePoint oracle_time(int y, int mo, int d, int h, int mi, int s) {
  std::tm tm{};
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  return static_cast<TimePoint>(timegm(&tm));
}

SpatioPoint pt(std::string id, double lon, double lat, TimePoint t) { return {std::move(id), lon, lat, t, "", 1.0}; }

const TimePoint t0 = parse_rfc3339("2021-05-29T13:20:00Z");

std::shared_ptr<const PointStore> small_store(std::uint64_t seed, std::size_t n = 900) {
  SyntheticOptions o;
  o.seed = seed;
  o.points = n;
  return std::make_shared<const PointStore>(synthetic_dataset(o));
}

ViewState italy() {
  const auto& p = scenario_preset("italy");
  return make_view(p.lon, p.lat, p.zoom, p.time);
}

}  // namespace

TEST_CASE("rfc3339 against libc") {
  CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_rfc3339("2021-05-29T13:20:00Z") == oracle_time(2021, 5, 29, 13, 20, 0));
  CHECK(parse_rfc3339("2021-05-29T15:20:00+02:00") == parse_rfc3339("2021-05-29T13:20:00Z"));
  CHECK(parse_rfc3339("2021-05-29T13:20:00.75Z") == parse_rfc3339("2021-05-29T13:20:00Z"));
  CHECK(parse_rfc3339("2021-05-29") == oracle_time(2021, 5, 29, 0, 0, 0));
  CHECK(format_rfc3339(t0) == "2021-05-29T13:20:00Z");
  CHECK(format_rfc3339(-1) == "1969-12-31T23:59:59Z");
  for (const char* bad : {"", "2021-13-01T00:00:00Z", "2021-02-29T00:00:00Z", "2021-05-29T25:00:00Z",
                          "2021-05-29T13:20Z", "yesterday", "2021-05-29T13:20:00+0200"}) {
    CHECK_THROWS_AS(parse_rfc3339(bad), Error);
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> year(1900, 2200), month(1, 12), day(1, 28), hour(0, 23), minute(0, 59);
  for (int i = 0; i < 2000; ++i) {
    const int y = year(rng), mo = month(rng), d = day(rng), h = hour(rng), mi = minute(rng), s = minute(rng);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d, h, mi, s);
    const TimePoint t = parse_rfc3339(buf);
    REQUIRE(t == oracle_time(y, mo, d, h, mi, s));
    REQUIRE(format_rfc3339(t) == buf);
  }
}

TEST_CASE("relevance window is half-open") {
  const PointStore store({pt("a", 0, 0, t0)});
  CHECK(relevant_points(store, t0).size() == 1);
  CHECK(relevant_points(store, t0 + 2 * 3600 + 59 * 60).size() == 1);
  CHECK(relevant_points(store, t0 + 3 * 3600).empty());
  CHECK(relevant_points(store, t0 - 1).empty());
}

TEST_CASE("relevant_points matches a membership filter and is monotone in the window") {
  const auto store = small_store(5);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<TimePoint> when(t0 - 6 * 3600, t0 + 6 * 3600), win(0, 5 * 3600);
  for (int i = 0; i < 200; ++i) {
    const TimePoint t = when(rng), w = win(rng);
    std::vector<std::string> expect;
    for (const auto& p : store->points()) {
      if (p.timestamp > t - w && p.timestamp <= t) expect.push_back(p.id);
    }
    std::vector<std::string> got;
    for (const auto& p : relevant_points(*store, t, w)) got.push_back(p.id);
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got == expect);
    const auto smaller = relevant_points(*store, t, w / 2);
    for (const auto& p : smaller) CHECK(std::find(got.begin(), got.end(), p.id) != got.end());
  }
}

TEST_CASE("projection and viewport") {
  const Point o = project(0, 0);
  CHECK(o.x == doctest::Approx(128.0));
  CHECK(o.y == doctest::Approx(128.0));
  CHECK(project(180, 85.0511287798066).x == doctest::Approx(256.0));
  CHECK(project(0, 85.0511287798066).y == doctest::Approx(256.0));
  CHECK(project(0, 10).y > project(0, 5).y);

  // center x = 132, viewport 8 units wide at zoom 7
  const ViewState v = make_view(5.625, 0.0, 7, t0);
  CHECK(v.viewport.min_x == 128.0);
  CHECK(v.viewport.width == 8.0);
  CHECK(v.viewport.height == 6.0);
  const std::vector<SpatioPoint> pts{pt("edge", 0.0, 0.0, t0), pt("out", -0.01, 0.0, t0), pt("in", 5, 1, t0)};
  const auto vis = visible_subset(pts, v);
  REQUIRE(vis.size() == 2);
  CHECK(vis[0].id == "edge");
  CHECK(vis[1].id == "in");
  CHECK(visible_subset(pts, make_view(-120, 0, 7, t0)).empty());
}

TEST_CASE("pan changes membership by containment") {
  const auto store = small_store(7, 3000);
  const ViewState a = italy();
  const ViewState b = apply_interaction(a, Action::pan(0, 0.28));
  CHECK(b.lat == doctest::Approx(a.lat + 0.28));
  CHECK(b.lon == a.lon);
  auto inside = [](const SpatioPoint& p, const Rect& r) {
    const Point q = project(p.lon, p.lat);
    return q.x >= r.min_x && q.x <= r.min_x + r.width && q.y >= r.min_y && q.y <= r.min_y + r.height;
  };
  const auto va = visible_subset(store->points(), a), vb = visible_subset(store->points(), b);
  std::size_t ia = 0, ib = 0;
  for (const auto& p : store->points()) {
    ia += inside(p, a.viewport);
    ib += inside(p, b.viewport);
  }
  CHECK(va.size() == ia);
  CHECK(vb.size() == ib);
  CHECK(va.size() != vb.size());
}

TEST_CASE("interactions") {
  const ViewState v = italy();
  const ViewState later = apply_interaction(v, Action::time_shift(30));
  CHECK(later.time == v.time + 1800);
  CHECK(later.viewport == v.viewport);
  CHECK(apply_interaction(v, Action::time_shift(-5)).time == v.time - 300);

  const ViewState in = apply_interaction(v, Action::zoom(1));
  CHECK(in.zoom == 8);
  CHECK(in.viewport.width == doctest::Approx(v.viewport.width / 2));
  const ViewState back = apply_interaction(in, Action::zoom(-1));
  CHECK(back.viewport == v.viewport);

  ScreenConfig narrow;
  narrow.min_zoom = 7;
  narrow.max_zoom = 8;
  CHECK_THROWS_AS(apply_interaction(v, Action::zoom(-1), narrow), Error);
  CHECK_THROWS_AS(apply_interaction(in, Action::zoom(1), narrow), Error);
  CHECK_THROWS_AS(apply_interaction(v, Action::pan(0, 60)), Error);
  CHECK(apply_interaction(make_view(179.5, 0, 7, 0), Action::pan(1, 0)).lon == doctest::Approx(-179.5));
}

TEST_CASE("actions and scripts") {
  CHECK(to_string(parse_action("pan(0, +0.28)")) == "pan(+0,+0.28)");
  CHECK(to_string(parse_action(" zoom(-1) ")) == "zoom(-1)");
  CHECK(to_string(parse_action("time_shift(30)")) == "time(+30)");
  CHECK(parse_action("time(-5)").minutes == -5.0);
  for (const char* bad : {"zoom(0.5)", "pan(1)", "fly(1)", "time()", "zoom+1"}) {
    CHECK_THROWS_AS(parse_action(bad), Error);
  }

  auto text = [](const std::vector<Action>& s) {
    std::string out;
    for (const auto& a : s) out += to_string(a) + ";";
    return out;
  };
  CHECK(text(builtin_script("a")) == "time(+30);zoom(+1);pan(+0,+0.28);time(+5);");
  CHECK(text(builtin_script("b")) == "time(+5);pan(+0,+0.28);zoom(+1);time(+30);");
  CHECK(text(builtin_script("c")) == "zoom(+1);time(-5);pan(-1.7,+0);time(+20);");
  const auto sweep = builtin_script("sweep3h");
  CHECK(sweep.size() == 36);
  double minutes = 0;
  for (const auto& a : sweep) minutes += a.minutes;
  CHECK(minutes == 180.0);
  CHECK_THROWS_AS(builtin_script("d"), Error);
  CHECK(text(parse_script("zoom(+1); time(+5)")) == "zoom(+1);time(+5);");
  CHECK(parse_script("a").size() == 4);

  CHECK(scenario_presets().size() == 6);
  CHECK(scenario_preset("los_angeles").zoom == 9);
  CHECK(format_rfc3339(scenario_preset("italy").time) == "2021-05-29T13:20:00Z");
}

TEST_CASE("dataset formats") {
  const std::string csv =
      "id,lon,lat,timestamp,text,weight\n"
      "b,14.5,41.3,2021-05-29T13:00:00Z,\"hello, \"\"world\"\"\",2\n"
      "a,14.4,41.2,2021-05-29T12:00:00+01:00,plain,\n";
  const auto store = parse_dataset(csv);
  REQUIRE(store.size() == 2);
  CHECK(store.points()[0].id == "a");  // sorted by time
  CHECK(store.points()[0].weight == 1.0);
  CHECK(store.points()[1].text == "hello, \"world\"");
  CHECK(store.points()[1].weight == 2.0);
  CHECK(store.find("b")->lon == 14.5);
  CHECK(store.find("zz") == nullptr);

  const auto again = parse_dataset(dataset_to_csv(store));
  CHECK(dataset_to_csv(again) == dataset_to_csv(store));

  const auto json = parse_dataset(
      R"([{"id":"x","lon":1,"lat":2,"timestamp":"2021-05-29T13:00:00Z"},
          {"id":"y","lon":-1,"lat":-2,"timestamp":"2021-05-29T14:00:00Z","text":"t","weight":0.5}])");
  REQUIRE(json.size() == 2);
  CHECK(json.points()[1].weight == 0.5);

  CHECK(parse_dataset("id,lon,lat,timestamp,text,weight\n").empty());
  CHECK_THROWS_AS(parse_dataset("id,lat,timestamp\n"), Error);
  CHECK_THROWS_AS(parse_dataset("id,lon,lat,timestamp\na,1,2,never\n"), Error);
  CHECK_THROWS_AS(parse_dataset("id,lon,lat,timestamp\na,200,2,2021-05-29T13:00:00Z\n"), Error);
  CHECK_THROWS_AS(parse_dataset("id,lon,lat,timestamp\na,1,2,2021-05-29T13:00:00Z\na,1,2,2021-05-29T13:00:00Z\n"),
                  Error);
  CHECK_THROWS_AS(parse_dataset("id,lon,lat,timestamp\na,1,2\n"), Error);
  CHECK_THROWS_AS(parse_dataset(R"([{"id":"x"}])"), Error);
  CHECK_THROWS_AS(load_dataset("/nonexistent/points.csv"), Error);
}

TEST_CASE("synthetic data is seeded") {
  SyntheticOptions o;
  o.points = 500;
  const auto a = synthetic_dataset(o), b = synthetic_dataset(o);
  CHECK(dataset_to_csv(a) == dataset_to_csv(b));
  o.seed = 2;
  CHECK(dataset_to_csv(synthetic_dataset(o)) != dataset_to_csv(a));
  CHECK(a.size() == 500);
}

TEST_CASE("aggregate metrics") {
  auto record = [](std::size_t overlaps, double makespan) {
    TransitionRecord r;
    r.report.pair_count = overlaps;
    r.plan.makespan = makespan;
    return r;
  };
  CHECK_THROWS_AS(aggregate_metrics({}), Error);
  const auto one = aggregate_metrics({record(3, 2.5)});
  CHECK(one.overlaps_avg == 3.0);
  CHECK(one.overlaps_total == 3);
  CHECK(one.duration_max == 2.5);
  CHECK(one.duration_avg == 2.5);
  const auto three = aggregate_metrics({record(2, 0), record(0, 0), record(4, 0)});
  CHECK(three.overlaps_avg == 2.0);
  CHECK(three.overlaps_total == 6);
  CHECK(three.overlaps_max == 4);
  const auto two = aggregate_metrics({record(0, 1.0), record(0, 2.5)});
  CHECK(two.duration_max == 2.5);
  CHECK(two.duration_avg == 1.75);
}

TEST_CASE("empty store gives empty transitions") {
  const auto store = std::make_shared<const PointStore>();
  const auto run = run_script(store, italy(), builtin_script("a"), {});
  CHECK(run.records.size() == 4);
  for (const auto& r : run.records) {
    CHECK(r.to.empty());
    CHECK(r.plan.makespan == 0.0);
  }
  CHECK(run.metrics.overlaps_total == 0);
  CHECK(run.metrics.duration_max == 0.0);
  CHECK(run.metrics.moved + run.metrics.added + run.metrics.removed == 0);
  CHECK_THROWS_AS(run_script(store, italy(), {}, {}), Error);
}

TEST_CASE("scripted runs: continuity, validity, monotonicity, determinism") {
  const auto store = small_store(11, 2500);
  for (const char* script : {"a", "b", "c", "sweep3h"}) {
    std::vector<ScriptRun> runs;
    for (auto style : {TransitionStyle::Simultaneous, TransitionStyle::Dag, TransitionStyle::Naive}) {
      ScenarioConfig c;
      c.style = style;
      runs.push_back(run_script(store, italy(), builtin_script(script), c));
    }
    const auto& recs = runs[1].records;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      if (i > 0) CHECK(r.from == recs[i - 1].to);
      CHECK(is_overlap_free(r.catalog, r.from));
      CHECK(is_overlap_free(r.catalog, r.to));
      CHECK(check_bound(r.report, TransitionStyle::Dag, r.moved(), r.dag_back_edges));
      CHECK(runs[0].records[i].to == r.to);
      CHECK(runs[2].records[i].to == r.to);
      CHECK(runs[0].records[i].plan.makespan <= r.plan.makespan);
      CHECK(r.plan.makespan <= runs[2].records[i].plan.makespan);
      CHECK(check_bound(runs[0].records[i].report, TransitionStyle::Simultaneous, r.moved(), 0));
      CHECK(check_bound(runs[2].records[i].report, TransitionStyle::Naive, r.moved(), 0));
    }
    ScenarioConfig c;
    const auto replay = run_script(store, italy(), builtin_script(script), c);
    CHECK(replay.metrics.overlaps_total == runs[1].metrics.overlaps_total);
    CHECK(replay.metrics.duration_avg == runs[1].metrics.duration_avg);
    CHECK(replay.records.back().to == recs.back().to);
  }
  ScenarioConfig c;
  CHECK(run_script(store, italy(), builtin_script("sweep3h"), c).records.size() == 36);
}

TEST_CASE("zoom in keeps every label that stays in view") {
  std::vector<SpatioPoint> pts;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      pts.push_back(pt("g" + std::to_string(10 * i + j), 14.3 + 0.05 * i, 41.2 + 0.04 * j, t0 - 60));
    }
  }
  const auto store = std::make_shared<const PointStore>(std::move(pts));
  Session s(store, italy());
  const auto before = s.labeling();
  CHECK(before.size() < 36);
  const auto r = s.interact(Action::zoom(1));
  CHECK(r.removed() == 0);
  CHECK(r.moved() == 0);
  CHECK(r.added() > 0);
  CHECK(r.plan.movement_start == 0.0);
  CHECK(r.plan.makespan == 1.0);
  for (const auto& [id, slot] : before) CHECK(r.to.at(id) == slot);

  Session never(store, italy(), {.policy = StabilityPolicy::PinNever});
  CHECK(never.interact(Action::zoom(1)).to.size() >= r.to.size());
  CHECK(parse_policy("pin-always") == StabilityPolicy::PinAlways);
  CHECK_THROWS_AS(parse_policy("sometimes"), Error);
}

TEST_CASE("session catalog describes the shown labels") {
  const auto store = small_store(13, 1500);
  Session s(store, italy());
  const auto cat = s.catalog();
  CHECK(cat.size() == s.labeling().size());
  CHECK(is_overlap_free(cat, s.labeling()));
  CHECK_THROWS_AS(s.interact(Action::zoom(30)), Error);
  CHECK(s.transitions() == 0);
  s.interact(Action::time_shift(5));
  CHECK(s.transitions() == 1);
  CHECK(is_overlap_free(s.catalog(), s.labeling()));
}
