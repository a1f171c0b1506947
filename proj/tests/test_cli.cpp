#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vrtos/data.hpp"

namespace fs = std::filesystem;

static std::string g_binary;

namespace {

struct ToolResult {
  int exit_code = -1;
  std::string output;
};

ToolResult run_tool(const std::string& args) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() /
                       ("vrtos_cli_out_" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      g_binary + " " + args + " >" + out.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  ToolResult res;
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  res.output = ss.str();
  fs::remove(out);
  return res;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

fs::path fresh_dir(const char* stem) {
  const fs::path dir = fs::temp_directory_path() / stem;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen-data writes a reparsable deterministic dataset") {
  const fs::path dir = fresh_dir("vrtos_cli_gendata");
  const std::string out1 = (dir / "a.libsvm").string();
  const std::string out2 = (dir / "b.libsvm").string();
  const std::string args =
      "gen-data --n 30 --p 12 --density 1.0 --task logistic --seed 5 --out ";
  CHECK(run_tool(args + out1).exit_code == 0);
  CHECK(run_tool(args + out2).exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));

  const vrtos::LabeledDataset ds = vrtos::load_libsvm_file(out1);
  CHECK(ds.n_rows() == 30);
  for (std::size_t i = 0; i < ds.n_rows(); ++i)
    CHECK(ds.features.row_nnz(i) == 12);  // density 1.0

  CHECK(run_tool("gen-data --n 5 --p 4 --out /nonexistent_dir_xyz/f.libsvm")
            .exit_code == 4);
}

TEST_CASE("run produces the trace schema and a summary") {
  const fs::path dir = fresh_dir("vrtos_cli_run");
  const fs::path config = dir / "config.json";
  {
    std::ofstream cf(config);
    cf << R"({
      "dataset": {"source": "synthetic", "n": 60, "p": 20, "density": 0.4, "seed": 3},
      "loss": "squared",
      "penalty": {"kind": "lasso", "lambda1": 0.05, "lambda2": 0.02},
      "reference": {"tolerance": 1e-12, "max_epochs": 200000},
      "solvers": [
        {"name": "vrtos-saga", "kind": "vrtos", "scheme": "saga", "max_epochs": 6, "seed": 1}
      ],
      "output_dir": ")" << (dir / "out1").string() << R"("
    })";
  }
  const ToolResult first = run_tool("run --config " + config.string());
  CHECK(first.exit_code == 0);

  const std::string csv = slurp(dir / "out1" / "vrtos-saga.csv");
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 8);  // header + epochs 0..6
  CHECK(rows[0] == std::vector<std::string>{"epoch", "grad_evals", "prox_evals",
                                            "wall_time", "objective",
                                            "residual", "nnz"});
  CHECK(rows[1][0] == "0");
  CHECK(rows[7][0] == "6");

  CHECK(fs::exists(dir / "out1" / "summary.json"));
  const std::string summary = slurp(dir / "out1" / "summary.json");
  CHECK(summary.find("\"reference\"") != std::string::npos);
  CHECK(summary.find("\"suboptimality\"") != std::string::npos);

  // Same config and seed: byte identical modulo the wall_time column.
  const ToolResult second =
      run_tool("run --config " + config.string() + " --out " + (dir / "out2").string());
  CHECK(second.exit_code == 0);
  const auto rows2 = parse_csv(slurp(dir / "out2" / "vrtos-saga.csv"));
  REQUIRE(rows2.size() == rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      if (c != 3) CHECK(rows[r][c] == rows2[r][c]);

  // The seed flag overrides the configured solver seed.
  const ToolResult reseeded = run_tool("run --config " + config.string() +
                                       " --seed 99 --out " +
                                       (dir / "out3").string());
  CHECK(reseeded.exit_code == 0);
  const auto rows3 = parse_csv(slurp(dir / "out3" / "vrtos-saga.csv"));
  REQUIRE(rows3.size() == rows.size());
  CHECK(rows3[4][4] != rows[4][4]);  // different sample path, same schema
}

TEST_CASE("run exit codes for bad configurations") {
  const fs::path dir = fresh_dir("vrtos_cli_bad");
  const fs::path empty_solvers = dir / "empty.json";
  {
    std::ofstream cf(empty_solvers);
    cf << R"({"solvers": []})";
  }
  CHECK(run_tool("run --config " + empty_solvers.string()).exit_code == 2);

  const fs::path malformed = dir / "broken.json";
  {
    std::ofstream cf(malformed);
    cf << "{ not json";
  }
  CHECK(run_tool("run --config " + malformed.string()).exit_code == 2);

  CHECK(run_tool("run --config /nonexistent_config.json").exit_code == 4);
  CHECK(run_tool("run").exit_code == 2);  // missing required flag

  const fs::path unwritable = dir / "unwritable.json";
  {
    std::ofstream cf(unwritable);
    cf << R"({
      "dataset": {"source": "synthetic", "n": 10, "p": 5, "density": 0.5},
      "penalty": {"kind": "lasso", "lambda2": 0.01},
      "solvers": [{"name": "v", "kind": "vrtos", "max_epochs": 1}],
      "output_dir": "/proc/vrtos_cannot_write_here"
    })";
  }
  CHECK(run_tool("run --config " + unwritable.string()).exit_code == 4);
}

TEST_CASE("run handles divergent solvers with exit 3 and partial traces") {
  const fs::path dir = fresh_dir("vrtos_cli_div");
  const fs::path config = dir / "config.json";
  {
    std::ofstream cf(config);
    cf << R"({
      "dataset": {"source": "synthetic", "n": 20, "p": 8, "density": 1.0, "seed": 2},
      "loss": "squared",
      "penalty": {"kind": "lasso", "lambda1": 0.0, "lambda2": 0.01},
      "reference": {"tolerance": 1e-10, "max_epochs": 100000},
      "solvers": [
        {"name": "explode", "kind": "vrtos", "max_epochs": 5000, "step_size": 80.0}
      ],
      "output_dir": ")" << (dir / "out").string() << R"("
    })";
  }
  CHECK(run_tool("run --config " + config.string()).exit_code == 3);
  CHECK(fs::exists(dir / "out" / "explode.csv"));  // partial trace flushed
}

TEST_CASE("check-prox validates the closed forms") {
  for (const char* kind : {"l1", "group-lasso", "fused2", "consensus"}) {
    const ToolResult res = run_tool(
        std::string("check-prox --penalty ") + kind + " --trials 60 --seed 9");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("max deviation") != std::string::npos);
  }
  CHECK(run_tool("check-prox --penalty nuclear --trials 5").exit_code == 2);
}

TEST_CASE("run on a file dataset with the ogl consensus split") {
  const fs::path dir = fresh_dir("vrtos_cli_ogl");
  const std::string data = (dir / "data.libsvm").string();
  REQUIRE(run_tool("gen-data --n 80 --p 26 --density 0.5 --task logistic "
                   "--seed 4 --out " + data)
              .exit_code == 0);
  const fs::path config = dir / "config.json";
  {
    std::ofstream cf(config);
    cf << R"({
      "dataset": {"source": "file", "path": ")" << data << R"(", "n_cols": 26},
      "loss": "logistic",
      "penalty": {"kind": "ogl", "lambda1": 0.0125, "lambda2": 0.05,
                  "group_size": 10, "overlap": 2},
      "reference": {"tolerance": 1e-10, "max_epochs": 300000},
      "solvers": [
        {"name": "vrtos-k", "kind": "vrtos-k", "scheme": "saga", "max_epochs": 40, "seed": 1},
        {"name": "saga", "kind": "saga", "scheme": "saga", "max_epochs": 40, "seed": 1}
      ],
      "output_dir": ")" << (dir / "out").string() << R"("
    })";
  }
  const ToolResult res = run_tool("run --config " + config.string());
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "vrtos-k.csv"));
  CHECK(fs::exists(dir / "out" / "saga.csv"));
}

int main(int argc, char** argv) {
  doctest::Context context;
  if (argc > 1 && argv[argc - 1][0] != '-') {
    g_binary = argv[argc - 1];
    --argc;
  }
  context.applyCommandLine(argc, argv);
  if (g_binary.empty()) {
    std::fprintf(stderr, "usage: test_cli [doctest flags] <path-to-vrtos-binary>\n");
    return 1;
  }
  return context.run();
}
