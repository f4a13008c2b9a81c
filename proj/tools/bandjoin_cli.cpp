// Experiment harness: configure a band join from a JSON file, build plans
// with any partitioner, execute them on w simulated workers, and emit
// metrics, comparison tables, and scatter data.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "bandjoin/baselines.hpp"
#include "bandjoin/datagen.hpp"
#include "bandjoin/executor.hpp"
#include "bandjoin/optimizer.hpp"
#include "bandjoin/plan.hpp"
#include "bandjoin/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bandjoin;

namespace {

void expect_keys(const json& j, const std::vector<std::string>& allowed,
                 const std::string& context) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const std::string& k : allowed) ok = ok || it.key() == k;
    if (!ok)
      throw std::runtime_error("config: unknown key '" + it.key() + "' in " +
                               context);
  }
}

GenSpec::Kind gen_kind(const std::string& name) {
  if (name == "pareto") return GenSpec::Kind::Pareto;
  if (name == "reverse-pareto") return GenSpec::Kind::ReversePareto;
  if (name == "uniform") return GenSpec::Kind::Uniform;
  if (name == "adversarial") return GenSpec::Kind::Adversarial;
  throw std::runtime_error("config: unknown data kind '" + name + "'");
}

Relation load_relation(const json& j, int d, uint64_t defaultSeed,
                       const std::string& context) {
  if (j.contains("csv")) {
    expect_keys(j, {"csv", "columns", "limit"}, context);
    std::vector<int> columns = j.value("columns", std::vector<int>{});
    if (columns.empty())
      for (int i = 0; i < d; ++i) columns.push_back(i);
    return load_csv(j.at("csv").get<std::string>(), columns,
                    j.value("limit", size_t{0}));
  }
  expect_keys(j,
              {"kind", "n", "d", "seed", "z", "offset", "lo", "hi", "corner",
               "spread"},
              context);
  GenSpec g;
  g.kind = gen_kind(j.at("kind").get<std::string>());
  g.n = j.at("n").get<size_t>();
  g.d = j.value("d", d);
  g.seed = j.value("seed", defaultSeed);
  g.z = j.value("z", 1.5);
  g.offset = j.value("offset", 1e6);
  g.lo = j.value("lo", 0.0);
  g.hi = j.value("hi", 1.0);
  g.corner = j.value("corner", std::vector<double>{});
  g.spread = j.value("spread", std::vector<double>{});
  return gen(g);
}

struct Config {
  Relation S, T;
  BandSpec spec;
  int w = 1;
  size_t sampleSize = 100000;
  size_t outputSampleSize = 0;  // 0: build output sample from the input samples
  size_t outputCap = 200000;
  size_t sizePerBlock = 1000;
  int jMax = 64;
  CostModel model;
  double windowFraction = 1.0;
  double minImprovement = 0.01;
  int maxIterations = 0;
  uint64_t seed = 1;
};

Config load_config(const std::string& path, std::optional<uint64_t> seedFlag) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j = json::parse(in);
  expect_keys(j,
              {"s", "t", "eps", "w", "beta2", "beta3", "sampleSize",
               "outputSampleSize", "outputCap", "sizePerBlock", "jMax",
               "model", "windowFraction",
               "minImprovement", "maxIterations", "seed"},
              "top level");

  Config cfg;
  cfg.seed = j.value("seed", uint64_t{1});
  if (seedFlag) cfg.seed = *seedFlag;
  std::vector<double> eps = j.at("eps").get<std::vector<double>>();
  cfg.spec = BandSpec(static_cast<int>(eps.size()), eps, j.value("beta2", 4.0),
                      j.value("beta3", 1.0));
  cfg.w = j.at("w").get<int>();
  if (cfg.w < 1) throw std::runtime_error("config: w must be >= 1");
  cfg.sampleSize = j.value("sampleSize", size_t{100000});
  cfg.outputSampleSize = j.value("outputSampleSize", size_t{0});
  cfg.outputCap = j.value("outputCap", size_t{200000});
  cfg.sizePerBlock = j.value("sizePerBlock", size_t{1000});
  cfg.jMax = j.value("jMax", 64);
  if (j.contains("model")) {
    expect_keys(j["model"], {"beta0", "beta1", "beta2m", "beta3m"}, "model");
    cfg.model.beta0 = j["model"].value("beta0", 0.0);
    cfg.model.beta1 = j["model"].value("beta1", 1.0);
    cfg.model.beta2m = j["model"].value("beta2m", 4.0);
    cfg.model.beta3m = j["model"].value("beta3m", 1.0);
  }
  cfg.windowFraction = j.value("windowFraction", 1.0);
  cfg.minImprovement = j.value("minImprovement", 0.01);
  cfg.maxIterations = j.value("maxIterations", 0);

  cfg.S = load_relation(j.at("s"), cfg.spec.d, cfg.seed * 2 + 1, "s");
  cfg.T = load_relation(j.at("t"), cfg.spec.d, cfg.seed * 2 + 2, "t");
  if (cfg.S.d != cfg.spec.d || cfg.T.d != cfg.spec.d)
    throw std::runtime_error("config: relation dimensionality != len(eps)");
  return cfg;
}

const std::vector<std::string> kMethods = {"recpart",   "recpart-s", "one-bucket",
                                           "grid",      "grid-star", "quantile"};

struct BuiltPlan {
  Plan plan;
  std::vector<IterationRecord> trace;  // recpart variants only
  double optSeconds = 0.0;
};

BuiltPlan build_plan(const std::string& method, const Config& cfg,
                     Termination termination) {
  auto start = std::chrono::steady_clock::now();
  BuiltPlan out;
  if (method == "recpart" || method == "recpart-s") {
    SampleSet samples = make_sample_set(cfg.S, cfg.T, cfg.spec, cfg.sampleSize, cfg.outputCap,
                                        cfg.seed, cfg.outputSampleSize);
    OptimizerConfig oc;
    oc.w = cfg.w;
    oc.termination = termination;
    oc.model = cfg.model;
    oc.windowFraction = cfg.windowFraction;
    oc.minImprovement = cfg.minImprovement;
    oc.maxIterations = cfg.maxIterations;
    oc.allowSSplits = method == "recpart";
    oc.seed = cfg.seed;
    OptimizeResult res = optimize(samples, cfg.spec, oc);
    out.plan = Plan::recpart(std::move(res.tree));
    out.trace = std::move(res.trace);
  } else if (method == "one-bucket") {
    out.plan = Plan::one_bucket(
        choose_one_bucket_shape(cfg.w, cfg.S.size(), cfg.T.size()));
  } else if (method == "grid") {
    out.plan = Plan::grid_plan(make_grid_plan(cfg.S, cfg.T, cfg.spec, 1));
  } else if (method == "grid-star") {
    SampleSet samples = make_sample_set(cfg.S, cfg.T, cfg.spec, cfg.sampleSize, cfg.outputCap,
                                        cfg.seed, cfg.outputSampleSize);
    out.plan = Plan::grid_plan(
        grid_star(samples, cfg.spec, cfg.w, cfg.model, cfg.jMax));
  } else if (method == "quantile") {
    out.plan = Plan::quantile(cfg.sizePerBlock);
  } else {
    throw std::runtime_error("unknown method '" + method + "'");
  }
  out.optSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string trace_csv(const std::vector<IterationRecord>& trace) {
  std::ostringstream os;
  os << "iteration,inputEst,maxLoadEst,dupOverhead,loadOverhead,objective\n";
  char buf[256];
  for (const IterationRecord& r : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.iter, r.inputEst, r.maxLoadEst, r.dupOverhead,
                  r.loadOverhead, r.objective);
    os << buf;
  }
  return os.str();
}

void append_results_row(const fs::path& dir, const std::string& row) {
  fs::path path = dir / "results.csv";
  bool fresh = !fs::exists(path);
  std::ofstream out(path, std::ios::app);
  if (fresh) out << metrics_csv_header() << "\n";
  out << row << "\n";
}

JoinMetrics run_and_emit(const std::string& method, const Plan& plan,
                         const Config& cfg, const fs::path& outDir,
                         bool verifyOracle) {
  RunResult res = run_plan(cfg.S, cfg.T, plan, cfg.spec, cfg.w, cfg.seed);
  write_file(outDir / ("metrics-" + method + ".json"),
             metrics_to_json(method, res.metrics) + "\n");
  append_results_row(outDir, metrics_csv_row(method, res.metrics));
  if (verifyOracle) {
    auto expected = oracle_join(cfg.S, cfg.T, cfg.spec);
    auto got = res.output;
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    if (got != expected)
      throw std::runtime_error(method + ": output differs from oracle (" +
                               std::to_string(got.size()) + " vs " +
                               std::to_string(expected.size()) + " pairs)");
    std::cout << method << ": verified against oracle (" << expected.size()
              << " pairs)\n";
  }
  return res.metrics;
}

Termination parse_termination(const std::string& name) {
  if (name == "theoretical") return Termination::Theoretical;
  if (name == "applied") return Termination::Applied;
  throw std::runtime_error("unknown termination '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Band-join partitioning optimizer and simulated executor"};
  app.require_subcommand(1);

  std::string configPath;
  std::string method = "recpart";
  std::string outDirStr = ".";
  std::string terminationStr = "applied";
  std::string planPath;
  std::vector<std::string> methods;
  std::optional<uint64_t> seedFlag;
  bool verifyOracle = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", configPath, "JSON config file")->required();
    cmd->add_option("--seed", seedFlag, "override the config seed");
    cmd->add_option("--out-dir", outDirStr, "output directory");
    cmd->add_option("--termination", terminationStr,
                    "recpart stopping rule: theoretical|applied");
  };

  CLI::App* cmdOpt = app.add_subcommand("optimize", "build a plan");
  add_common(cmdOpt);
  cmdOpt->add_option("--method", method,
                     "recpart|recpart-s|one-bucket|grid|grid-star|quantile");

  CLI::App* cmdRun = app.add_subcommand("run", "execute a plan");
  add_common(cmdRun);
  cmdRun->add_option("--method", method, "method label for the metrics");
  cmdRun->add_option("--plan", planPath,
                     "plan JSON (default: build per --method)");
  cmdRun->add_flag("--verify-oracle", verifyOracle,
                   "check the output against the nested-loop oracle");

  CLI::App* cmdCmp = app.add_subcommand("compare", "run several methods");
  add_common(cmdCmp);
  cmdCmp->add_option("--method", methods, "methods to compare (default: all)");
  cmdCmp->add_flag("--verify-oracle", verifyOracle,
                   "check each output against the nested-loop oracle");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = load_config(configPath, seedFlag);
    fs::path outDir(outDirStr);
    fs::create_directories(outDir);
    Termination termination = parse_termination(terminationStr);

    if (cmdOpt->parsed()) {
      BuiltPlan built = build_plan(method, cfg, termination);
      write_file(outDir / ("plan-" + method + ".json"),
                 to_json(built.plan) + "\n");
      if (!built.trace.empty())
        write_file(outDir / ("trace-" + method + ".csv"),
                   trace_csv(built.trace));
      std::cout << method << ": plan written, optimization time "
                << built.optSeconds << " s\n";
    } else if (cmdRun->parsed()) {
      Plan plan;
      double optSeconds = 0.0;
      if (!planPath.empty()) {
        std::ifstream in(planPath);
        if (!in) throw std::runtime_error("cannot open plan " + planPath);
        std::stringstream ss;
        ss << in.rdbuf();
        plan = plan_from_json(ss.str());
      } else {
        BuiltPlan built = build_plan(method, cfg, termination);
        plan = std::move(built.plan);
        optSeconds = built.optSeconds;
      }
      auto start = std::chrono::steady_clock::now();
      JoinMetrics m = run_and_emit(method, plan, cfg, outDir, verifyOracle);
      double joinSeconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
      std::cout << method << ": I=" << m.I << " I_m=" << m.Im
                << " O_m=" << m.Om << " L_m=" << m.Lm
                << " dupOverhead=" << m.dupOverhead
                << " loadOverhead=" << m.loadOverhead
                << " (optimization " << optSeconds << " s + join "
                << joinSeconds << " s)\n";
    } else {
      if (methods.empty()) methods = kMethods;
      std::ostringstream scatter, table;
      scatter << "method,dupOverhead,loadOverhead\n";
      table << "| method | join time (model) | I | I_m | O_m | L_m | "
               "dup ovh | load ovh |\n"
            << "|---|---|---|---|---|---|---|---|\n";
      for (const std::string& m : methods) {
        BuiltPlan built = build_plan(m, cfg, termination);
        write_file(outDir / ("plan-" + m + ".json"), to_json(built.plan) + "\n");
        if (!built.trace.empty())
          write_file(outDir / ("trace-" + m + ".csv"), trace_csv(built.trace));
        JoinMetrics jm = run_and_emit(m, built.plan, cfg, outDir, verifyOracle);
        double modelTime =
            cfg.model.estimate(static_cast<double>(jm.I),
                               static_cast<double>(jm.Im),
                               static_cast<double>(jm.Om));
        char buf[512];
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n", m.c_str(),
                      jm.dupOverhead, jm.loadOverhead);
        scatter << buf;
        std::snprintf(buf, sizeof(buf),
                      "| %s | %.6g | %zu | %zu | %zu | %.6g | %.2f%% | "
                      "%.2f%% |\n",
                      m.c_str(), modelTime, jm.I, jm.Im, jm.Om, jm.Lm,
                      100.0 * jm.dupOverhead, 100.0 * jm.loadOverhead);
        table << buf;
        std::cout << "done: " << m << " (optimization " << built.optSeconds
                  << " s)\n";
      }
      write_file(outDir / "scatter.csv", scatter.str());
      write_file(outDir / "compare.md", table.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
