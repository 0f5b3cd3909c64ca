// Command-line front end: instance generation, the two solvers, evaluation
// on sampled realizations, and the two experiment protocols (compare/sweep).

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drosvi/gap.hpp"
#include "drosvi/harness.hpp"
#include "drosvi/json_io.hpp"
#include "drosvi/nsdp.hpp"
#include "drosvi/qmc.hpp"
#include "drosvi/solver.hpp"

using namespace drosvi;

namespace {

// "0.5", "0.1,0.5,1", or "0.1:2:0.1" (inclusive endpoint, half-ulp slack).
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
      throw CLI::ValidationError("grid", "expected start:stop:step, got " + spec);
    for (double g = a; g <= b + 0.5 * step; g += step) out.push_back(g);
    return out;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw CLI::ValidationError("grid", "empty grid spec");
  return out;
}

void write_output(const std::string& path, const nlohmann::json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(f);
}

struct InstanceFile {
  AffineSvip inst;
  MomentAmbiguity amb;
  double alpha;
};

InstanceFile load_instance(const std::string& path, double gamma1, double gamma2) {
  const nlohmann::json j = read_json(path);
  AffineSvip inst = svip_from_json(j.at("instance"));
  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(inst.m());
  Eigen::MatrixXd sigma0 = nominal_ambiguity(inst.m(), 0.0, 1.0).sigma0();
  if (j.contains("ambiguity")) {
    const MomentAmbiguity file_amb = ambiguity_from_json(j["ambiguity"]);
    mu0 = file_amb.mu0();
    sigma0 = file_amb.sigma0();
  }
  const double alpha = j.value("alpha", 1.0 / inst.beta0());
  return {std::move(inst), MomentAmbiguity(mu0, sigma0, gamma1, gamma2), alpha};
}

nlohmann::json report_json(const SolveReport& rep) {
  return {{"status", to_string(rep.status)},
          {"objective", rep.objective},
          {"kkt_residual", rep.kkt_residual},
          {"iterations", rep.iterations},
          {"t_solve", rep.wall_time}};
}

int cmd_generate(std::uint64_t seed, const GameConfig& game, const std::string& out) {
  const GameInstance g = generate_game(game, seed);
  const AffineSvip inst = to_svip(g);
  nlohmann::json j;
  j["seed"] = seed;
  j["game"] = {{"n1", game.n1}, {"n2", game.n2}, {"l1", game.l1}, {"l2", game.l2}};
  j["instance"] = to_json(inst);
  j["ambiguity"] = to_json(nominal_ambiguity(inst.m(), 0.0, 1.0));
  j["alpha"] = 1.0 / inst.beta0();
  j["x_star0"] = vector_to_json(g.x_star0);
  write_output(out, j);
  return 0;
}

int cmd_solve_drerm(const std::string& in, double gamma1, double gamma2,
                    const ConicSettings& settings, const std::string& out) {
  const InstanceFile f = load_instance(in, gamma1, gamma2);
  const ConicProgram prog = build(f.inst, f.alpha, f.amb, SupportSpec::full());
  const ConicResult r = solve_conic(prog, settings);
  nlohmann::json j = report_json(r.report);
  j["x"] = vector_to_json(r.point.x);
  j["alpha"] = f.alpha;
  j["gamma1"] = gamma1;
  j["gamma2"] = gamma2;
  write_output(out, j);
  return r.report.status == SolveStatus::Optimal ? 0 : 1;
}

int cmd_solve_erm(const std::string& in, int n_k, SamplingMode sampling, double tol,
                  int max_iter, const std::string& out) {
  const InstanceFile f = load_instance(in, 0.0, 1.0);
  const QmcSampleSet samples = qmc_samples(f.amb, n_k, sampling);
  const Eigen::VectorXd x0 =
      project(f.inst.feasible(), Eigen::VectorXd::Zero(f.inst.n())).point;
  const ErmResult r = solve_erm(f.inst, f.alpha, samples, f.amb, x0, tol, max_iter);
  nlohmann::json j = report_json(r.report);
  j["x"] = vector_to_json(r.x);
  j["alpha"] = f.alpha;
  j["nk"] = n_k;
  write_output(out, j);
  return r.report.status == SolveStatus::Optimal ? 0 : 1;
}

int cmd_evaluate(const std::string& in, const std::string& solution, int realizations,
                 std::uint64_t seed, const std::string& out) {
  const InstanceFile f = load_instance(in, 0.0, 1.0);
  const nlohmann::json sj = read_json(solution);
  const Eigen::VectorXd x = vector_from_json(sj.at("x"));
  const auto reals = sample_realizations(f.amb, realizations, seed);
  const EvaluationSummary s = evaluate(x, f.inst, f.alpha, reals);
  write_output(out, {{"count", s.count},
                     {"min", s.min},
                     {"max", s.max},
                     {"mean", s.mean},
                     {"median", s.median},
                     {"sd", s.sd}});
  return 0;
}

int cmd_experiment(const ExperimentConfig& cfg) {
  const ExperimentResult res = run_experiment(cfg);
  std::cout << res.csv_path << ": " << res.rows << " rows, " << res.failures
            << " failures (" << res.manifest_path << ")\n";
  return res.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributionally robust solutions of affine stochastic "
               "variational inequalities"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  GameConfig game;
  ConicSettings settings;
  int instances = 10, n_k = 80, realizations = 5000, erm_max_iter = 1000;
  double gamma1 = 0.0, gamma2 = 1.0;
  std::string in, solution, out, grid1 = "0.0", grid2 = "1.0", grid,
                            sampling_name = "per-coordinate";

  const std::map<std::string, SamplingMode> sampling_map{
      {"paper-literal", SamplingMode::PaperLiteral},
      {"per-coordinate", SamplingMode::PerCoordinate}};

  auto* gen = app.add_subcommand("generate", "emit a random game instance as JSON");
  gen->add_option("--seed", seed);
  gen->add_option("--n1", game.n1);
  gen->add_option("--n2", game.n2);
  gen->add_option("--l1", game.l1);
  gen->add_option("--l2", game.l2);
  gen->add_option("--out", out, "output path, - for stdout");

  auto* drerm = app.add_subcommand(
      "solve-drerm", "solve the worst-case expected-gap program for an instance");
  drerm->add_option("--in", in)->required();
  drerm->add_option("--gamma1", gamma1);
  drerm->add_option("--gamma2", gamma2);
  drerm->add_option("--tol", settings.tol);
  drerm->add_option("--max-iter", settings.max_outer);
  drerm->add_option("--mu-factor", settings.mu_factor);
  drerm->add_option("--out", out);

  auto* erm = app.add_subcommand("solve-erm",
                                 "solve the sampled expected-gap baseline");
  erm->add_option("--in", in)->required();
  erm->add_option("--nk", n_k, "quasi-Monte-Carlo sample count");
  erm->add_option("--sampling", sampling_name)
      ->check(CLI::IsMember({"paper-literal", "per-coordinate"}));
  erm->add_option("--tol", settings.tol);
  erm->add_option("--max-iter", erm_max_iter);
  erm->add_option("--out", out);

  auto* eval = app.add_subcommand(
      "evaluate", "realized gap statistics of a solution on sampled realizations");
  eval->add_option("--in", in)->required();
  eval->add_option("--solution", solution, "JSON file with an \"x\" array")->required();
  eval->add_option("--realizations", realizations);
  eval->add_option("--seed", seed);
  eval->add_option("--out", out);

  auto* cmp = app.add_subcommand(
      "compare", "per-instance robust-vs-baseline comparison protocol");
  cmp->add_option("--seed", seed);
  cmp->add_option("--instances", instances);
  cmp->add_option("--nk", n_k);
  cmp->add_option("--sampling", sampling_name)
      ->check(CLI::IsMember({"paper-literal", "per-coordinate"}));
  cmp->add_option("--realizations", realizations);
  cmp->add_option("--tol", settings.tol);
  cmp->add_option("--out", out, "output prefix for .csv and .manifest.json");

  auto* sweep = app.add_subcommand(
      "sweep", "solve one instance across a (gamma1, gamma2) grid");
  sweep->add_option("--seed", seed);
  sweep->add_option("--gamma1", grid1, "value, comma list, or start:stop:step");
  sweep->add_option("--gamma2", grid2, "value, comma list, or start:stop:step");
  sweep->add_option("--grid", grid,
                    "both axes at once as <gamma1-spec>x<gamma2-spec>");
  sweep->add_option("--realizations", realizations);
  sweep->add_option("--tol", settings.tol);
  sweep->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(seed, game, out);
    if (drerm->parsed()) return cmd_solve_drerm(in, gamma1, gamma2, settings, out);
    if (erm->parsed())
      return cmd_solve_erm(in, n_k, sampling_map.at(sampling_name), settings.tol,
                           erm_max_iter, out);
    if (eval->parsed()) return cmd_evaluate(in, solution, realizations, seed, out);

    ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.instances = instances;
    cfg.n_k = n_k;
    cfg.sampling = sampling_map.at(sampling_name);
    cfg.realizations = realizations;
    cfg.tol = settings.tol;
    cfg.game = game;
    if (!out.empty()) cfg.out_prefix = out;
    if (cmp->parsed()) {
      cfg.mode = ExperimentConfig::Mode::Compare;
      return cmd_experiment(cfg);
    }
    cfg.mode = ExperimentConfig::Mode::Sweep;
    if (!grid.empty()) {
      const auto split = grid.find('x');
      if (split == std::string::npos)
        throw CLI::ValidationError("--grid", "expected <gamma1-spec>x<gamma2-spec>");
      grid1 = grid.substr(0, split);
      grid2 = grid.substr(split + 1);
    }
    cfg.gamma1 = parse_grid(grid1);
    cfg.gamma2 = parse_grid(grid2);
    return cmd_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
