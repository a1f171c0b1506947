#include "bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "vrtos/data.hpp"
#include "vrtos/diagnostics.hpp"
#include "vrtos/errors.hpp"
#include "vrtos/oracle.hpp"
#include "vrtos/prox.hpp"
#include "vrtos/rng.hpp"

namespace vrtos::bench {

using nlohmann::json;

namespace {

LossKind parse_loss(const std::string& s) {
  if (s == "logistic") return LossKind::logistic;
  if (s == "squared") return LossKind::squared;
  throw ConfigError("unknown loss '" + s + "'");
}

MemoryScheme parse_scheme(const std::string& s) {
  if (s == "saga") return MemoryScheme::saga_like;
  if (s == "svrg") return MemoryScheme::svrg_like;
  throw ConfigError("unknown memory scheme '" + s + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  BenchConfig cfg;
  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    cfg.dataset.source = d.value("source", cfg.dataset.source);
    cfg.dataset.path = d.value("path", std::string{});
    if (d.contains("n_cols")) cfg.dataset.n_cols = d["n_cols"].get<std::size_t>();
    cfg.dataset.n = d.value("n", cfg.dataset.n);
    cfg.dataset.p = d.value("p", cfg.dataset.p);
    cfg.dataset.density = d.value("density", cfg.dataset.density);
    cfg.dataset.seed = d.value("seed", cfg.dataset.seed);
  }
  if (j.contains("penalty")) {
    const auto& p = j["penalty"];
    cfg.penalty.kind = p.value("kind", cfg.penalty.kind);
    cfg.penalty.lambda1 = p.value("lambda1", 0.0);
    cfg.penalty.lambda2 = p.value("lambda2", 0.0);
    cfg.penalty.group_size = p.value("group_size", cfg.penalty.group_size);
    cfg.penalty.overlap = p.value("overlap", cfg.penalty.overlap);
    cfg.penalty.groups_file = p.value("groups_file", std::string{});
    cfg.penalty.extra_l1 = p.value("extra_l1", 0.0);
    if (cfg.penalty.lambda1 < 0.0 || cfg.penalty.lambda2 < 0.0)
      throw ConfigError("penalty strengths must be >= 0");
  }
  cfg.loss = parse_loss(j.value("loss", std::string("logistic")));
  if (j.contains("reference")) {
    const std::string method =
        j["reference"].value("method", std::string("tos"));
    if (method != "tos")
      throw ConfigError("reference method must be 'tos' (full-gradient)");
    cfg.reference_tolerance = j["reference"].value("tolerance", 1e-12);
    cfg.reference_max_epochs =
        j["reference"].value("max_epochs", cfg.reference_max_epochs);
  }
  cfg.output_dir = j.value("output_dir", cfg.output_dir);

  if (!j.contains("solvers") || !j["solvers"].is_array() || j["solvers"].empty())
    throw ConfigError("config needs a non-empty 'solvers' array");
  for (const auto& s : j["solvers"]) {
    SolverEntry entry;
    const std::string kind_name = s.value("kind", std::string("vrtos"));
    const auto kind = solver_kind_from_name(kind_name);
    if (!kind) throw ConfigError("unknown solver kind '" + kind_name + "'");
    entry.kind = *kind;
    entry.name = s.value("name", kind_name);
    entry.config.scheme = parse_scheme(s.value("scheme", std::string("saga")));
    entry.config.svrg_q = s.value("q", 1.0);
    entry.config.max_epochs = s.value("max_epochs", std::size_t{100});
    entry.config.tolerance = s.value("tolerance", 0.0);
    entry.config.step_size = s.value("step_size", 0.0);
    entry.config.seed = s.value("seed", std::uint64_t{0});
    entry.config.trace_every = s.value("trace_every", std::size_t{1});
    entry.config.dr_iters = s.value("dr_iters", std::size_t{10});
    cfg.solvers.push_back(std::move(entry));
  }
  return cfg;
}

BenchProblems build_problems(const BenchConfig& config) {
  LabeledDataset ds;
  if (config.dataset.source == "synthetic") {
    ds = generate_synthetic(config.dataset.n, config.dataset.p,
                            config.dataset.density,
                            config.loss == LossKind::logistic
                                ? TaskKind::logistic
                                : TaskKind::squared,
                            config.dataset.seed);
  } else if (config.dataset.source == "file") {
    ds = load_libsvm_file(config.dataset.path, config.dataset.n_cols);
  } else {
    throw ConfigError("dataset source must be 'synthetic' or 'file'");
  }
  const std::size_t p = ds.n_cols();
  auto model =
      std::make_shared<SmoothModel>(std::move(ds), config.loss, config.penalty.lambda1);

  BenchProblems out{Problem{}, std::nullopt, false};
  const auto& pen = config.penalty;
  if (pen.kind == "none") {
    out.two_term = Problem::two_term(model, std::make_shared<ZeroPenalty>(p),
                                     std::make_shared<ZeroPenalty>(p));
    out.consensus = Problem::k_term(model, {std::make_shared<ZeroPenalty>(p),
                                            std::make_shared<ZeroPenalty>(p)});
  } else if (pen.kind == "lasso") {
    auto g = std::make_shared<L1Penalty>(p, pen.lambda2);
    auto h = std::make_shared<ZeroPenalty>(p);
    out.two_term = Problem::two_term(model, g, h);
    out.consensus = Problem::k_term(model, {g, h});
  } else if (pen.kind == "fused") {
    auto [g, h] = fused_lasso_split(p, pen.lambda2);
    std::shared_ptr<Penalty> gs = std::move(g), hs = std::move(h);
    out.two_term = Problem::two_term(model, gs, hs);
    out.consensus = Problem::k_term(model, {gs, hs});
  } else if (pen.kind == "ogl" || pen.kind == "groups") {
    std::vector<std::vector<Index>> groups;
    double strength = pen.lambda2;
    if (pen.kind == "ogl") {
      groups = chained_groups(p, pen.group_size, pen.overlap);
    } else {
      std::ifstream in(pen.groups_file);
      if (!in) throw IoError("cannot open groups file '" + pen.groups_file + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      const GroupSpec spec = load_groups_json(ss.str());
      groups = spec.groups;
      if (spec.strength > 0.0) strength = spec.strength;
    }
    const auto [odd, even] = split_groups_odd_even(groups);
    auto g = std::make_shared<GroupLassoPenalty>(p, odd, strength);
    auto h = std::make_shared<GroupLassoPenalty>(p, even, strength);
    out.two_term = Problem::two_term(model, g, h);
    std::vector<std::shared_ptr<const Penalty>> gs = {g, h};
    if (pen.extra_l1 > 0.0)
      gs.push_back(std::make_shared<L1Penalty>(p, pen.extra_l1));
    out.consensus = Problem::k_term(model, std::move(gs));
    out.overlapping = true;

    // The true objective evaluates the overlapping norm directly.
    const double extra = pen.extra_l1;
    auto direct = [groups, strength, extra](std::span<const double> x) {
      double val = overlapping_group_lasso_value(x, groups, strength);
      if (extra > 0.0) {
        double l1 = 0.0;
        for (double v : x) l1 += std::abs(v);
        val += extra * l1;
      }
      return val;
    };
    out.two_term.penalty_value_override = direct;
    out.consensus->penalty_value_override = direct;
  } else {
    throw ConfigError("unknown penalty kind '" + pen.kind + "'");
  }
  return out;
}

const Problem& problem_for(const BenchProblems& problems, SolverKind kind) {
  const bool wants_consensus =
      kind == SolverKind::vrtos_k ||
      (kind == SolverKind::vrtos_sparse && problems.overlapping);
  if (wants_consensus) {
    if (!problems.consensus)
      throw ConfigError("no consensus formulation available for this penalty");
    return *problems.consensus;
  }
  return problems.two_term;
}

namespace {

struct WorkerResult {
  bool diverged = false;
  std::string error;
  double final_objective = std::nan("");
  double final_residual = std::nan("");
  std::size_t epochs = 0;
  Termination reason = Termination::epoch_budget;
  OracleCounters counters;
  double wall_time = 0.0;
};

// Streams trace rows so partial progress survives a divergence abort.
WorkerResult run_streaming(const Problem& problem, const SolverEntry& entry,
                           const std::filesystem::path& csv_path) {
  WorkerResult out;
  std::ofstream csv(csv_path, std::ios::binary);  // LF line endings everywhere
  if (!csv) throw IoError("cannot write '" + csv_path.string() + "'");
  csv << "epoch,grad_evals,prox_evals,wall_time,objective,residual,nnz\n";

  const auto start = std::chrono::steady_clock::now();
  auto solver = make_solver(problem, entry.kind, entry.config);
  const SolverConfig& cfg = entry.config;

  auto record = [&](std::size_t epoch) {
    const std::vector<double> z = solver->solution();
    const double objective = primal_objective(z, problem);
    const double residual = solver->residual();
    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    csv << epoch << ',' << solver->counters().grad_evals << ','
        << solver->counters().prox_evals << ',' << format_double(wall) << ','
        << format_double(objective) << ',' << format_double(residual) << ','
        << count_nnz(z) << '\n';
    csv.flush();
    out.final_objective = objective;
    out.final_residual = residual;
    out.wall_time = wall;
    return residual;
  };

  try {
    double res = record(0);
    const std::size_t cadence = cfg.trace_every == 0 ? 1 : cfg.trace_every;
    if (cfg.tolerance > 0.0 && res <= cfg.tolerance) {
      out.reason = Termination::tolerance;
    } else {
      for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const std::size_t steps = solver->steps_per_epoch();
        for (std::size_t s = 0; s < steps; ++s) solver->step();
        out.epochs = epoch;
        if (epoch % cadence == 0 || epoch == cfg.max_epochs) {
          res = record(epoch);
          if (cfg.tolerance > 0.0 && res <= cfg.tolerance) {
            out.reason = Termination::tolerance;
            break;
          }
        }
      }
    }
  } catch (const DivergenceError& e) {
    out.diverged = true;
    out.error = e.what();
  }
  out.counters = solver->counters();
  return out;
}

}  // namespace

int run_benchmark(const BenchConfig& config) {
  const BenchProblems problems = build_problems(config);

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError("cannot create output dir '" + config.output_dir + "'");
  {
    std::ofstream probe(std::filesystem::path(config.output_dir) / ".write_probe");
    if (!probe) throw IoError("output dir '" + config.output_dir + "' not writable");
  }
  std::filesystem::remove(std::filesystem::path(config.output_dir) / ".write_probe");

  // Reference optimum: full-gradient splitting driven to a tight residual,
  // shared by every solver in the run.
  SolverConfig ref_cfg;
  ref_cfg.tolerance = config.reference_tolerance;
  ref_cfg.max_epochs = config.reference_max_epochs;
  const RunResult ref = run(problems.two_term, SolverKind::tos, ref_cfg);
  const double p_star = primal_objective(ref.solution, problems.two_term);

  // One worker per solver; each one owns its state and trace file.
  std::vector<std::future<WorkerResult>> futures;
  for (const SolverEntry& entry : config.solvers) {
    const Problem& problem = problem_for(problems, entry.kind);
    const auto csv_path =
        std::filesystem::path(config.output_dir) / (entry.name + ".csv");
    futures.push_back(std::async(std::launch::async, [&problem, entry, csv_path] {
      return run_streaming(problem, entry, csv_path);
    }));
  }

  json summary;
  summary["reference"] = {{"objective", p_star},
                          {"residual", ref.trace.back().residual},
                          {"epochs", ref.epochs},
                          {"terminated_by_tolerance",
                           ref.reason == Termination::tolerance}};
  bool any_divergence = false;
  for (std::size_t s = 0; s < config.solvers.size(); ++s) {
    const WorkerResult w = futures[s].get();
    json entry = {{"final_objective", w.final_objective},
                  {"suboptimality", w.final_objective - p_star},
                  {"final_residual", w.final_residual},
                  {"epochs", w.epochs},
                  {"grad_evals", w.counters.grad_evals},
                  {"prox_evals", w.counters.prox_evals},
                  {"wall_time", w.wall_time},
                  {"terminated_by_tolerance", w.reason == Termination::tolerance},
                  {"diverged", w.diverged}};
    if (w.diverged) {
      any_divergence = true;
      entry["error"] = w.error;
    }
    summary["solvers"][config.solvers[s].name] = entry;
  }
  std::ofstream sum_out(std::filesystem::path(config.output_dir) / "summary.json");
  if (!sum_out) throw IoError("cannot write summary.json");
  sum_out << summary.dump(2) << '\n';

  std::cout << "reference objective " << format_double(p_star) << '\n';
  for (const auto& [name, entry] : summary["solvers"].items())
    std::cout << name << ": suboptimality "
              << format_double(entry["suboptimality"].get<double>())
              << (entry["diverged"].get<bool>() ? " (diverged)" : "") << '\n';
  return any_divergence ? 3 : 0;
}

int check_prox(const std::string& penalty_kind, std::size_t trials,
               std::uint64_t seed, double tol, bool quiet,
               double* max_deviation_out) {
  RandomStream rng(seed);
  double worst = 0.0;

  auto note = [&](double dev) { worst = std::max(worst, dev); };

  for (std::size_t t = 0; t < trials; ++t) {
    const double gamma = t == 0 ? 0.0 : rng.uniform(0.05, 1.5);  // include gamma=0

    if (penalty_kind == "l1") {
      const std::size_t p = 1 + rng.bounded(6);
      std::vector<double> x(p), d(p), closed(p);
      for (auto& v : x) v = rng.uniform(-2.0, 2.0);
      for (auto& v : d) v = rng.uniform(1.0, 3.0);
      prox_l1_scaled(x, gamma, d, closed);
      const auto ref = gamma == 0.0 ? x : oracle::prox_l1_reference(x, gamma, d);
      for (std::size_t j = 0; j < p; ++j)
        note(std::abs(closed[j] - ref[j]));
    } else if (penalty_kind == "group-lasso") {
      const std::size_t p = 2 + rng.bounded(7);
      std::vector<double> x(p), closed(p);
      for (auto& v : x) v = rng.uniform(-2.0, 2.0);
      const double d_b = rng.uniform(1.0, 3.0);
      const double strength = rng.uniform(0.1, 2.0);
      std::vector<double> d(p, d_b);
      std::vector<Index> block(p);
      for (std::size_t j = 0; j < p; ++j) block[j] = static_cast<Index>(j);
      prox_group_lasso_scaled(x, gamma, d, {block}, strength, closed);
      const auto ref = gamma == 0.0
                           ? x
                           : oracle::prox_group_block_reference(x, gamma, d_b,
                                                                strength);
      for (std::size_t j = 0; j < p; ++j) note(std::abs(closed[j] - ref[j]));
    } else if (penalty_kind == "fused2") {
      const double x1 = rng.uniform(-2.0, 2.0), x2 = rng.uniform(-2.0, 2.0);
      const double q1 = rng.uniform(0.3, 3.0), q2 = rng.uniform(0.3, 3.0);
      const auto [z1, z2] = prox_fused_block2_scaled(x1, x2, gamma, q1, q2);
      const auto [r1, r2] =
          gamma == 0.0 ? std::pair{x1, x2}
                       : oracle::prox_fused2_reference(x1, x2, gamma, q1, q2);
      note(std::abs(z1 - r1));
      note(std::abs(z2 - r2));
    } else if (penalty_kind == "consensus") {
      const std::size_t k = 2 + rng.bounded(3), p = 1 + rng.bounded(4);
      std::vector<double> stacked(k * p), w(k * p);
      for (auto& v : stacked) v = rng.uniform(-2.0, 2.0);
      for (auto& v : w) v = rng.uniform(0.2, 3.0);
      const auto closed = consensus_projection(stacked, w, k, p);
      const auto ref = oracle::consensus_reference(stacked, w, k, p);
      for (std::size_t j = 0; j < p; ++j) note(std::abs(closed[j] - ref[j]));
    } else {
      throw ConfigError("unknown penalty kind '" + penalty_kind +
                        "' (expected l1, group-lasso, fused2 or consensus)");
    }
  }

  if (max_deviation_out != nullptr) *max_deviation_out = worst;
  if (!quiet)
    std::cout << penalty_kind << ": max deviation " << format_double(worst)
              << " over " << trials << " trials\n";
  return worst > tol ? 3 : 0;
}

int generate_data_file(std::size_t n, std::size_t p, double density,
                       const std::string& task, std::uint64_t seed,
                       const std::string& out_path) {
  const TaskKind kind = task == "logistic" ? TaskKind::logistic
                        : task == "squared"
                            ? TaskKind::squared
                            : throw ConfigError("task must be logistic or squared");
  const LabeledDataset ds = generate_synthetic(n, p, density, kind, seed);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << serialize_libsvm(ds);
  if (!out) throw IoError("write failed for '" + out_path + "'");
  return 0;
}

}  // namespace vrtos::bench
