#include "ocbas/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ocbas/allocation.hpp"
#include "ocbas/harness.hpp"
#include "ocbas/renewal.hpp"
#include "ocbas/rng.hpp"
#include "ocbas/testbeds.hpp"

namespace ocbas {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError("cannot parse " + what + ": '" + text + "'");
  }
}

/// "start:stop:step" inclusive, a comma list, or a single value.
std::vector<double> parse_budgets(const std::string& text) {
  std::vector<double> budgets;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("--budgets range must be start:stop:step");
    const double start = parse_number(parts[0], "--budgets start");
    const double stop = parse_number(parts[1], "--budgets stop");
    const double step = parse_number(parts[2], "--budgets step");
    if (!(step > 0.0) || stop < start) throw UsageError("--budgets range must ascend");
    for (double b = start; b <= stop + 1e-9 * step; b += step) budgets.push_back(b);
  } else {
    for (const auto& part : split(text, ',')) budgets.push_back(parse_number(part, "--budgets"));
  }
  if (budgets.empty()) throw UsageError("--budgets is empty");
  for (std::size_t i = 0; i + 1 < budgets.size(); ++i)
    if (!(budgets[i] < budgets[i + 1])) throw UsageError("--budgets must be strictly increasing");
  return budgets;
}

std::vector<Policy> parse_policies(const std::string& text) {
  std::vector<Policy> policies;
  for (const auto& name : split(text, ',')) {
    if (name == "ea") policies.push_back(Policy::EqualAllocation);
    else if (name == "ocba") policies.push_back(Policy::ClassicOcba);
    else if (name == "ocbas") policies.push_back(Policy::Ocbas);
    else throw UsageError("unknown policy '" + name + "' (expected ea, ocba, ocbas)");
  }
  if (policies.empty()) throw UsageError("--policies is empty");
  return policies;
}

DiscretePmf parse_time_model(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "const") {
    const double v = parse_number(rest, "--time const value");
    if (v < 1.0 || v != std::floor(v)) throw UsageError("--time const value must be integer >= 1");
    return DiscretePmf::point_mass(static_cast<std::int64_t>(v));
  }
  if (kind == "uniform") {
    const auto parts = split(rest, ',');
    if (parts.size() != 2) throw UsageError("--time uniform needs lo,hi");
    const double lo = parse_number(parts[0], "--time uniform lo");
    const double hi = parse_number(parts[1], "--time uniform hi");
    if (lo < 1.0 || hi < lo || lo != std::floor(lo) || hi != std::floor(hi))
      throw UsageError("--time uniform needs integers 1 <= lo <= hi");
    return DiscretePmf::uniform_range(static_cast<std::int64_t>(lo),
                                      static_cast<std::int64_t>(hi));
  }
  if (kind == "tgauss") {
    const auto parts = split(rest, ',');
    if (parts.size() != 2) throw UsageError("--time tgauss needs design,spread");
    const double design = parse_number(parts[0], "--time tgauss design");
    const double spread = parse_number(parts[1], "--time tgauss spread");
    if (design < 1 || design > 10 || design != std::floor(design))
      throw UsageError("--time tgauss design must be 1..10");
    return truncated_gaussian_time_pmf(static_cast<DesignId>(design), spread);
  }
  throw UsageError("unknown --time model '" + kind + "' (expected const:, uniform:, tgauss:)");
}

/// Writes through `sink` to the --out path when given, stdout otherwise.
void with_output(const std::string& path, std::ostream& out,
                 const std::function<void(std::ostream&)>& sink) {
  if (path.empty()) {
    sink(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  sink(file);
  if (!file) throw std::runtime_error("write failed: " + path);
}

struct PcsOptions {
  std::string testbed;
  int spread = 10;
  double p = 0.5;
  std::string budgets;
  std::string policies = "ea,ocba,ocbas";
  int macro_reps = 1000;
  std::uint64_t seed = 0;
  std::string out_path;
  int workers = 1;
  std::int64_t horizon = 1'000'000;
  double t0 = -1.0;
  double dt = 100.0;
  std::int64_t n0 = -1;
  std::int64_t dn = 10;
  std::int64_t calibration_reps = 100'000;
};

int cmd_pcs(const PcsOptions& opt, std::ostream& out, std::ostream& err) {
  const std::vector<double> budgets = parse_budgets(opt.budgets);
  const std::vector<Policy> policies = parse_policies(opt.policies);
  if (opt.macro_reps < 1) throw UsageError("--macro-reps must be >= 1");
  if (opt.workers < 1) throw UsageError("--workers must be >= 1");

  const bool smoke = opt.testbed == "smoke";
  const double warmup_time = opt.t0 > 0.0 ? opt.t0 : (smoke ? 200.0 : 50.0);
  const std::int64_t warmup_reps = opt.n0 > 0 ? opt.n0 : (smoke ? 20 : 5);

  std::unique_ptr<Simulator> sim;
  DesignId true_best = 1;
  if (opt.testbed == "synthetic-uniform") {
    sim = std::make_unique<SyntheticUniformTestbed>(opt.spread);
  } else if (opt.testbed == "synthetic-tgauss") {
    sim = std::make_unique<SyntheticTruncGaussTestbed>(static_cast<double>(opt.spread));
  } else if (opt.testbed == "correlated") {
    if (opt.p < 0.0 || opt.p > 1.0) throw UsageError("--p must lie in [0,1]");
    sim = std::make_unique<CorrelatedTestbed>(opt.p);
  } else if (smoke) {
    if (opt.calibration_reps < 1) throw UsageError("--calibration-reps must be >= 1");
    err << "calibrating smoke true best over " << opt.calibration_reps
        << " replications per design...\n";
    const auto table = estimate_design_means(opt.calibration_reps, mix_seed(opt.seed, 0xCA11B),
                                             opt.workers, opt.horizon);
    const auto best_row = std::min_element(table.begin(), table.end(),
                                           [](const DesignMeanRow& a, const DesignMeanRow& b) {
                                             return a.mean < b.mean;
                                           });
    true_best = best_row->index;
    err << "true best: design " << best_row->index << " (" << best_row->placement[0] << ","
        << best_row->placement[1] << "," << best_row->placement[2]
        << "), mean response " << best_row->mean << "\n";
    sim = std::make_unique<SmokeTestbed>(opt.horizon, true_best);
  } else {
    throw UsageError("unknown --testbed '" + opt.testbed +
                     "' (expected synthetic-uniform, synthetic-tgauss, correlated, smoke)");
  }

  ExperimentPlan plan;
  plan.simulator = sim.get();
  plan.true_best = true_best;
  for (Policy policy : policies) {
    PolicyConfig cfg;
    cfg.policy = policy;
    cfg.warmup_time = warmup_time;
    cfg.increment_time = opt.dt;
    cfg.warmup_reps = warmup_reps;
    cfg.increment_reps = opt.dn;
    plan.policies.push_back(cfg);
  }
  plan.budgets = budgets;
  plan.macro_reps = opt.macro_reps;
  plan.base_seed = opt.seed;
  plan.workers = opt.workers;

  const ExperimentResult result = run_pcs_experiment(plan);
  for (const PcsCell& cell : result.rows)
    if (!cell.error.empty())
      throw std::runtime_error("cell (" + cell.policy + ", T=" + format_double(cell.budget) +
                               ") aborted: " + cell.error);
  with_output(opt.out_path, out, [&](std::ostream& sink) { write_csv(result, sink); });

  err << "policy      T        pcs     std_err  mean_time\n";
  for (const PcsCell& cell : result.rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-8s %8.0f  %7.4f  %7.4f  %10.1f\n", cell.policy.c_str(),
                  cell.budget, cell.pcs, cell.std_err, cell.mean_consumed_time);
    err << line;
  }
  return 0;
}

struct SmokeTableOptions {
  std::int64_t reps = 100'000;
  std::uint64_t seed = 0;
  std::string out_path;
  int workers = 1;
  std::int64_t horizon = 1'000'000;
  bool list_orbits = false;
  int pmf_design = 0;
};

int cmd_smoke_table(const SmokeTableOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.list_orbits) {
    const auto orbits = symmetry_reduce(enumerate_placements());
    std::size_t total = 0;
    with_output(opt.out_path, out, [&](std::ostream& sink) {
      sink << "index,representative,orbit_size\n";
      int index = 1;
      for (const PlacementOrbit& orbit : orbits) {
        sink << index++ << ",\"" << orbit.representative[0] << ',' << orbit.representative[1]
             << ',' << orbit.representative[2] << "\"," << orbit.members.size() << '\n';
        total += orbit.members.size();
      }
    });
    err << orbits.size() << " orbits, sizes sum to " << total << "\n";
    return 0;
  }
  if (opt.reps < 1) throw UsageError("--reps must be >= 1");
  if (opt.workers < 1) throw UsageError("--workers must be >= 1");

  if (opt.pmf_design != 0) {
    if (opt.pmf_design < 1 || opt.pmf_design > 16)
      throw UsageError("--pmf-design must be 1..16");
    SmokeTestbed testbed(opt.horizon);
    RandomStream stream(mix_seed(opt.seed, static_cast<std::uint64_t>(opt.pmf_design)));
    const auto pmf = empirical_pmf(testbed, opt.pmf_design, opt.reps, stream);
    with_output(opt.out_path, out, [&](std::ostream& sink) { write_pmf_csv(pmf, sink); });
    return 0;
  }

  const auto rows = estimate_design_means(opt.reps, opt.seed, opt.workers, opt.horizon);
  with_output(opt.out_path, out, [&](std::ostream& sink) { write_smoke_table_csv(rows, sink); });
  for (const DesignMeanRow& row : rows) {
    char line[128];
    std::snprintf(line, sizeof(line), "%2d  (%d,%d,%d)  mean %8.4f  se %.4f\n", row.index,
                  row.placement[0], row.placement[1], row.placement[2], row.mean, row.std_err);
    err << line;
  }
  return 0;
}

struct DistOptions {
  std::string time_model;
  std::int64_t budget = 0;
  bool posterior = false;
  double mean = 0.0;
  double sigma = 0.0;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  int grid_points = 201;
  std::string out_path;
};

int cmd_dist(const DistOptions& opt, std::ostream& out, std::ostream& err) {
  const DiscretePmf time_pmf = parse_time_model(opt.time_model);
  if (opt.budget < 0) throw UsageError("--budget must be >= 0");

  if (!opt.posterior) {
    const DiscretePmf counts = replication_count_pmf(time_pmf, opt.budget);
    with_output(opt.out_path, out, [&](std::ostream& sink) {
      sink << "replications,probability\n";
      for (std::size_t c = 0; c < counts.probs().size(); ++c)
        sink << c << ',' << format_double(counts.probs()[c]) << '\n';
    });
    err << "E[n] = " << expected_replications(time_pmf, opt.budget) << "\n";
    return 0;
  }

  if (!(opt.sigma > 0.0)) throw UsageError("--posterior requires --sigma > 0");
  if (opt.grid_points < 2 || opt.grid_points % 2 == 0)
    throw UsageError("--grid-points must be an odd number >= 3");
  PosteriorSpec spec;
  spec.mean = opt.mean;
  spec.sigma = opt.sigma;
  spec.time_pmf = time_pmf;
  spec.budget = opt.budget;
  const PosteriorCdf cdf(spec);

  double lo = opt.grid_lo;
  double hi = opt.grid_hi;
  if (lo == 0.0 && hi == 0.0) {
    const double scale =
        std::sqrt(opt.sigma * opt.sigma * time_pmf.mean() / static_cast<double>(opt.budget));
    lo = opt.mean - 5.0 * scale;
    hi = opt.mean + 5.0 * scale;
  }
  if (!(hi > lo)) throw UsageError("--grid-hi must exceed --grid-lo");
  const int center = (opt.grid_points - 1) / 2;
  const double step = (hi - lo) / static_cast<double>(opt.grid_points - 1);
  with_output(opt.out_path, out, [&](std::ostream& sink) {
    sink << "x,cdf\n";
    for (int i = 0; i < opt.grid_points; ++i) {
      // grid pinned to the midpoint so the centre point is exact
      const double x = opt.mean + static_cast<double>(i - center) * step +
                       ((lo + hi) / 2.0 - opt.mean);
      sink << format_double(x) << ',' << format_double(cdf(x)) << '\n';
    }
  });
  err << "posterior CDF on [" << lo << ", " << hi << "], " << opt.grid_points << " points\n";
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation-time budget allocation: exact replication-count distributions, "
               "the OCBAS sequential procedure and PCS experiment harness"};
  app.require_subcommand(1);

  PcsOptions pcs;
  CLI::App* pcs_cmd = app.add_subcommand(
      "pcs", "Estimate probability of correct selection over a budget grid");
  pcs_cmd->add_option("--testbed", pcs.testbed,
                      "synthetic-uniform, synthetic-tgauss, correlated, or smoke")
      ->required();
  pcs_cmd->add_option("--spread", pcs.spread,
                      "duration spread j in 1..10 for the synthetic testbeds (default 10)");
  pcs_cmd->add_option("--p", pcs.p, "duration/noise correlation in [0,1] (default 0.5)");
  pcs_cmd->add_option("--budgets", pcs.budgets,
                      "total time budgets: start:stop:step (inclusive) or comma list")
      ->required();
  pcs_cmd->add_option("--policies", pcs.policies, "subset of ea,ocba,ocbas (default all)");
  pcs_cmd->add_option("--macro-reps", pcs.macro_reps,
                      "independent procedure runs per cell (default 1000)");
  pcs_cmd->add_option("--seed", pcs.seed, "base seed (default 0)");
  pcs_cmd->add_option("--out", pcs.out_path, "CSV output path (default: standard output)");
  pcs_cmd->add_option("--workers", pcs.workers,
                      "worker threads; results are independent of this (default 1)");
  pcs_cmd->add_option("--horizon", pcs.horizon, "smoke censoring bound (default 1000000)");
  pcs_cmd->add_option("--t0", pcs.t0,
                      "warm-up time T0 per design for ea/ocbas (default 50; smoke: 200)");
  pcs_cmd->add_option("--dt", pcs.dt, "time increment Delta_T for ea/ocbas (default 100)");
  pcs_cmd->add_option("--n0", pcs.n0,
                      "warm-up replications n0 per design for ocba (default 5; smoke: 20)");
  pcs_cmd->add_option("--dn", pcs.dn, "replication increment Delta_n for ocba (default 10)");
  pcs_cmd->add_option("--calibration-reps", pcs.calibration_reps,
                      "replications per design when computing the smoke true best (default 100000)");

  SmokeTableOptions table;
  CLI::App* table_cmd = app.add_subcommand(
      "smoke-table", "Estimate mean response times of the 16 smoke designs "
                     "(ocba warm-up n0=20, Delta_n=10; ocbas T0=200, Delta_T=100 in pcs runs)");
  table_cmd->add_option("--reps", table.reps, "replications per design (default 100000)");
  table_cmd->add_option("--seed", table.seed, "base seed (default 0)");
  table_cmd->add_option("--out", table.out_path, "CSV output path (default: standard output)");
  table_cmd->add_option("--workers", table.workers, "worker threads (default 1)");
  table_cmd->add_option("--horizon", table.horizon, "censoring bound (default 1000000)");
  table_cmd->add_flag("--list-orbits", table.list_orbits,
                      "print the 16 symmetry orbit representatives and orbit sizes");
  table_cmd->add_option("--pmf-design", table.pmf_design,
                        "emit the empirical response-time PMF of this design (1..16) instead");

  DistOptions dist;
  CLI::App* dist_cmd = app.add_subcommand(
      "dist", "Exact distribution of the number of completed replications within a budget");
  dist_cmd->add_option("--time", dist.time_model,
                       "duration model: const:v, uniform:lo,hi, or tgauss:design,spread")
      ->required();
  dist_cmd->add_option("--budget", dist.budget, "time budget T")->required();
  dist_cmd->add_flag("--posterior", dist.posterior,
                     "emit the posterior performance CDF on a grid instead of the count PMF");
  dist_cmd->add_option("--mean", dist.mean, "sample mean for --posterior (default 0)");
  dist_cmd->add_option("--sigma", dist.sigma, "noise sigma for --posterior");
  dist_cmd->add_option("--grid-lo", dist.grid_lo, "grid lower end (default mean - 5 scale)");
  dist_cmd->add_option("--grid-hi", dist.grid_hi, "grid upper end (default mean + 5 scale)");
  dist_cmd->add_option("--grid-points", dist.grid_points, "odd grid size (default 201)");
  dist_cmd->add_option("--out", dist.out_path, "CSV output path (default: standard output)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pcs_cmd->parsed()) return cmd_pcs(pcs, out, err);
    if (table_cmd->parsed()) return cmd_smoke_table(table, out, err);
    if (dist_cmd->parsed()) return cmd_dist(dist, out, err);
    err << "error: no subcommand\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ocbas
