#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vrtos/problem.hpp"
#include "vrtos/solver.hpp"

namespace vrtos::bench {

struct DatasetConfig {
  std::string source = "synthetic";  // synthetic | file
  std::string path;
  std::optional<std::size_t> n_cols;
  std::size_t n = 200, p = 100;
  double density = 0.1;
  std::uint64_t seed = 1;
};

struct PenaltyConfig {
  std::string kind = "lasso";  // none | lasso | fused | ogl | groups
  double lambda1 = 0.0;        // ridge strength inside the smooth part
  double lambda2 = 0.0;        // penalty strength
  std::size_t group_size = 10, overlap = 2;
  std::string groups_file;
  double extra_l1 = 0.0;  // optional third separable term in the consensus split
};

struct SolverEntry {
  std::string name;  // trace file stem
  SolverKind kind = SolverKind::vrtos;
  SolverConfig config;
};

struct BenchConfig {
  DatasetConfig dataset;
  PenaltyConfig penalty;
  LossKind loss = LossKind::logistic;
  double reference_tolerance = 1e-12;
  std::size_t reference_max_epochs = 500000;
  std::vector<SolverEntry> solvers;
  std::string output_dir = "out";
};

BenchConfig load_bench_config(const std::string& path);

// Materialized problems: the (g, h) pair and, when needed, the consensus
// formulation of the same objective.
struct BenchProblems {
  Problem two_term;
  std::optional<Problem> consensus;
  bool overlapping = false;  // penalty only block separable through the split
};

BenchProblems build_problems(const BenchConfig& config);

// Picks the formulation a solver kind runs on.
const Problem& problem_for(const BenchProblems& problems, SolverKind kind);

// Runs every solver (one worker each), streaming one CSV per solver into
// output_dir plus a summary json. Returns the process exit code.
int run_benchmark(const BenchConfig& config);

// Closed form vs search oracle over random trials; returns the exit code.
int check_prox(const std::string& penalty_kind, std::size_t trials,
               std::uint64_t seed, double tol = 1e-5, bool quiet = false,
               double* max_deviation_out = nullptr);

int generate_data_file(std::size_t n, std::size_t p, double density,
                       const std::string& task, std::uint64_t seed,
                       const std::string& out_path);

}  // namespace vrtos::bench
