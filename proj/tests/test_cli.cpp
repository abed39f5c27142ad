#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "labelmorph/io.hpp"

using namespace labelmorph;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "labelmorph");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Scratch {
  fs::path path;
  explicit Scratch(const std::string& tag) {
    path = fs::temp_directory_path() / ("labelmorph_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> csv_lines(const std::string& file) {
  std::istringstream in(read_text_file(file));
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

double csv_field(const std::string& line, std::size_t col) {
  std::istringstream in(line);
  std::string cell;
  for (std::size_t i = 0; i <= col; ++i) std::getline(in, cell, ',');
  return std::stod(cell);
}

}  // namespace

TEST_CASE("cli argument handling") {
  CHECK(cli({}).code == kExitInput);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"frobnicate"}).code == kExitInput);
  CHECK(cli({"solve"}).code == kExitInput);
  CHECK(cli({"verify"}).code == kExitInput);
}

TEST_CASE("cli verify") {
  for (const auto& name : {"lemma1", "fig4b_degree14", "fig5_n_plus_m", "shift_chain(5)", "fig8b_twelve",
                           "clause_gadget", "swap_cycle(2)", "corollary1"}) {
    const auto r = cli({"verify", "--fixture", name});
    CHECK_MESSAGE(r.code == kExitOk, name);
    CHECK(r.out.rfind("PASS ", 0) == 0);
  }
  const auto lemma = cli({"verify", "--fixture", "lemma1"});
  CHECK(lemma.out.find("overlap ") != std::string::npos);
  CHECK(cli({"verify", "--all"}).code == kExitOk);
  const auto bad = cli({"verify", "--fixture", "fig99"});
  CHECK(bad.code == kExitInput);
  CHECK(bad.err.find("unknown fixture") != std::string::npos);
}

TEST_CASE("cli simulate") {
  Scratch dir("simulate");
  write_text_file(dir / "empty.csv", "id,lon,lat,timestamp,text,weight\n");
  const auto empty = cli({"simulate", "--dataset", dir / "empty.csv", "--script", "a", "--out", dir / "empty"});
  REQUIRE(empty.code == kExitOk);
  const auto rows = csv_lines(dir / "empty/metrics.csv");
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t col = 2; col < 12; ++col) CHECK(csv_field(rows[i], col) == 0.0);
  }

  const auto missing = cli({"simulate", "--dataset", dir / "none.csv", "--out", dir / "x"});
  CHECK(missing.code == kExitInput);
  CHECK(missing.err.find("cannot read") != std::string::npos);
  CHECK(cli({"simulate", "--script", "z", "--out", dir / "x"}).code == kExitInput);
  CHECK(cli({"simulate", "--style", "fast", "--out", dir / "x"}).code == kExitInput);

  const std::vector<std::string> args{"simulate", "--dataset", "synthetic", "--script", "sweep3h", "--seed", "3"};
  auto first = args, second = args;
  first.insert(first.end(), {"--out", dir / "one"});
  second.insert(second.end(), {"--out", dir / "two"});
  REQUIRE(cli(first).code == kExitOk);
  REQUIRE(cli(second).code == kExitOk);
  const auto one = csv_lines(dir / "one/metrics.csv");
  CHECK(one == csv_lines(dir / "two/metrics.csv"));
  for (const char* style : {"naive", "dag", "simul"}) {
    const std::string name = std::string("transitions_") + style + ".json";
    CHECK(read_text_file(dir / ("one/" + name)) == read_text_file(dir / ("two/" + name)));
    CHECK(read_json_file(dir / ("one/" + name)).size() == 36);
  }
  REQUIRE(one.size() == 4);
  CHECK(one[1].rfind("naive,36,", 0) == 0);
  CHECK(one[2].rfind("dag,36,", 0) == 0);
  CHECK(one[3].rfind("simul,36,", 0) == 0);
  CHECK(csv_field(one[2], 6) <= csv_field(one[1], 6));  // duration_avg
  CHECK(csv_field(one[3], 6) <= csv_field(one[2], 6));
}

TEST_CASE("cli solve") {
  Scratch dir("solve");
  REQUIRE(cli({"export-fixture", "--fixture", "clause_gadget", "--out", dir.path.string()}).code == kExitOk);
  REQUIRE(cli({"export-fixture", "--fixture", "clause_gadget", "--frozen", "--out", dir.path.string()}).code ==
          kExitOk);
  REQUIRE(cli({"export-fixture", "--fixture", "shift_chain(5)", "--out", dir.path.string()}).code == kExitOk);

  const auto yes = cli({"solve", "--input", dir / "clause_gadget.json", "--mode", "exact", "--k", "0"});
  CHECK(yes.code == kExitOk);
  CHECK(yes.out.find("W = 0\n") != std::string::npos);
  CHECK(yes.out.find("YES") != std::string::npos);

  const auto no = cli({"solve", "--input", dir / "clause_gadget_frozen.json", "--mode", "exact", "--k", "0"});
  CHECK(no.code == kExitOk);
  CHECK(no.out.find("W = 1\n") != std::string::npos);
  CHECK(no.out.find("NO") != std::string::npos);
  CHECK(no.out.find("(frozen)") != std::string::npos);

  const auto flat = cli({"solve", "--input", dir / "shift_chain_5.json"});
  CHECK(flat.code == kExitOk);
  CHECK(flat.out.find("W = 0\n") != std::string::npos);

  const auto heur = cli({"solve", "--input", dir / "clause_gadget.json", "--mode", "heuristic", "--k", "0"});
  CHECK(heur.code == kExitOk);
  CHECK(heur.out.find("YES") != std::string::npos);

  // 21 free diagonals
  Json big = read_json_file(dir / "clause_gadget.json");
  big["labels"] = Json::array();
  big["from"] = Json::object();
  big["to"] = Json::object();
  big["axis_order"] = Json::object();
  for (int i = 0; i < 21; ++i) {
    const std::string id = "d" + std::to_string(i);
    big["labels"].push_back({{"id", id}, {"x", 5.0 * i}, {"y", 0.0}});
    big["from"][id] = "TL";
    big["to"][id] = "BR";
  }
  write_text_file(dir / "big.json", big.dump());
  const auto limit = cli({"solve", "--input", dir / "big.json"});
  CHECK(limit.code == kExitInput);
  CHECK(limit.err.find("heuristic") != std::string::npos);
  CHECK(cli({"solve", "--input", dir / "big.json", "--mode", "heuristic"}).code == kExitOk);
  CHECK(cli({"solve", "--input", dir / "big.json", "--mode", "magic"}).code == kExitInput);
  CHECK(cli({"solve", "--input", dir / "absent.json"}).code == kExitInput);
}

TEST_CASE("cli export-plan") {
  Scratch dir("export");
  REQUIRE(cli({"export-fixture", "--fixture", "shift_chain(5)", "--out", dir.path.string()}).code == kExitOk);
  const auto from = dir / "shift_chain_5_from.json", to = dir / "shift_chain_5_to.json";

  const auto same = cli({"export-plan", "--from", from, "--to", from, "--style", "dag"});
  REQUIRE(same.code == kExitOk);
  const auto empty = parse_json(same.out);
  CHECK(empty.at("makespan") == 0.0);
  CHECK(empty.at("movements").empty());

  const auto simul = parse_json(cli({"export-plan", "--from", from, "--to", to, "--style", "simul"}).out);
  std::set<double> starts;
  for (const auto& m : simul.at("movements")) starts.insert(m.at("start_time").get<double>());
  CHECK(starts.size() == 1);

  REQUIRE(cli({"export-plan", "--from", from, "--to", to, "--style", "dag", "--out", dir / "dag.json"}).code ==
          kExitOk);
  const auto dag = read_json_file(dir / "dag.json");
  starts.clear();
  for (const auto& m : dag.at("movements")) starts.insert(m.at("start_time").get<double>());
  CHECK(starts.size() == 5);
  CHECK(dag.at("overlaps").at("pair_count") == 0);
  CHECK(dag.at("movements").at(0).at("keyframes").size() == 11);

  Json clash = read_json_file(from);
  clash["labels"][1]["x"] = clash["labels"][0]["x"];
  clash["labels"][1]["y"] = clash["labels"][0]["y"];
  clash["labels"][1]["slot"] = clash["labels"][0]["slot"];
  write_text_file(dir / "clash.json", clash.dump());
  const auto bad = cli({"export-plan", "--from", dir / "clash.json", "--to", dir / "clash.json"});
  CHECK(bad.code != kExitOk);
  CHECK(bad.err.find("overlap") != std::string::npos);
  CHECK(cli({"export-plan", "--from", from, "--to", to, "--style", "fast"}).code == kExitInput);
}
