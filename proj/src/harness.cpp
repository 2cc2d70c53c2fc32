#include "ocbas/harness.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ocbas/parallel.hpp"
#include "ocbas/rng.hpp"

namespace ocbas {

namespace {

struct RepOutcome {
  bool correct = false;
  std::int64_t consumed = 0;
};

std::uint64_t budget_bits(double budget) { return std::bit_cast<std::uint64_t>(budget); }

void validate_plan(const ExperimentPlan& plan) {
  if (plan.simulator == nullptr) throw std::invalid_argument("ExperimentPlan: missing simulator");
  if (plan.true_best < 1 || plan.true_best > plan.simulator->design_count())
    throw std::invalid_argument("ExperimentPlan: true_best outside design range");
  if (plan.macro_reps < 1) throw std::invalid_argument("ExperimentPlan: macro_reps must be >= 1");
  if (plan.policies.empty()) throw std::invalid_argument("ExperimentPlan: no policies");
  if (plan.budgets.empty()) throw std::invalid_argument("ExperimentPlan: no budgets");
  for (std::size_t i = 1; i < plan.budgets.size(); ++i)
    if (!(plan.budgets[i] > plan.budgets[i - 1]))
      throw std::invalid_argument("ExperimentPlan: budgets must be strictly increasing");
}

}  // namespace

ExperimentResult run_pcs_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);
  ExperimentResult result;
  result.rows.reserve(plan.policies.size() * plan.budgets.size());

  for (const PolicyConfig& base_cfg : plan.policies) {
    const std::uint64_t policy_tag = static_cast<std::uint64_t>(base_cfg.policy) + 1;
    for (const double budget : plan.budgets) {
      PolicyConfig cfg = base_cfg;
      cfg.total_budget = budget;

      PcsCell cell;
      cell.policy = policy_name(cfg.policy);
      cell.budget = budget;
      cell.macro_reps = plan.macro_reps;
      try {
        std::vector<RepOutcome> outcomes(static_cast<std::size_t>(plan.macro_reps));
        parallel_for_index(plan.macro_reps, plan.workers, [&](std::int64_t rep) {
          RandomStream stream(mix_seed(plan.base_seed, policy_tag, budget_bits(budget),
                                       static_cast<std::uint64_t>(rep)));
          const SelectionReport report = run_sequential(*plan.simulator, cfg, stream);
          outcomes[static_cast<std::size_t>(rep)] = {report.selected == plan.true_best,
                                                     report.total_time};
        });
        std::int64_t correct = 0;
        std::int64_t consumed = 0;
        for (const RepOutcome& o : outcomes) {
          correct += o.correct ? 1 : 0;
          consumed += o.consumed;
        }
        const double n = static_cast<double>(plan.macro_reps);
        cell.pcs = static_cast<double>(correct) / n;
        cell.std_err = std::sqrt(cell.pcs * (1.0 - cell.pcs) / n);
        cell.mean_consumed_time = static_cast<double>(consumed) / n;
      } catch (const std::exception& e) {
        cell.pcs = std::numeric_limits<double>::quiet_NaN();
        cell.std_err = std::numeric_limits<double>::quiet_NaN();
        cell.mean_consumed_time = std::numeric_limits<double>::quiet_NaN();
        cell.error = e.what();
      }
      result.rows.push_back(std::move(cell));
    }
  }
  return result;
}

std::map<std::int64_t, double> empirical_pmf(const Simulator& sim, DesignId design,
                                             std::int64_t reps, RandomStream& stream) {
  if (reps < 1) throw std::invalid_argument("empirical_pmf: reps must be >= 1");
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int64_t r = 0; r < reps; ++r) {
    const Observation obs = sim.run(design, stream);
    ++counts[static_cast<std::int64_t>(std::llround(obs.value))];
  }
  std::map<std::int64_t, double> pmf;
  for (const auto& [value, count] : counts)
    pmf[value] = static_cast<double>(count) / static_cast<double>(reps);
  return pmf;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "policy,budget,pcs,std_err,macro_reps,mean_consumed_time\n";
  for (const PcsCell& cell : result.rows) {
    out << cell.policy << ',' << format_double(cell.budget) << ',' << format_double(cell.pcs)
        << ',' << format_double(cell.std_err) << ',' << cell.macro_reps << ','
        << format_double(cell.mean_consumed_time) << '\n';
  }
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_csv(const ExperimentResult& result, const std::string& path) {
  auto out = open_or_throw(path);
  write_csv(result, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_smoke_table_csv(const std::vector<DesignMeanRow>& rows, std::ostream& out) {
  out << "index,design,mean_response,std_err,reps\n";
  for (const DesignMeanRow& row : rows) {
    out << row.index << ",\"" << row.placement[0] << ',' << row.placement[1] << ','
        << row.placement[2] << "\"," << format_double(row.mean) << ','
        << format_double(row.std_err) << ',' << row.reps << '\n';
  }
}

void write_smoke_table_csv(const std::vector<DesignMeanRow>& rows, const std::string& path) {
  auto out = open_or_throw(path);
  write_smoke_table_csv(rows, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_pmf_csv(const std::map<std::int64_t, double>& pmf, std::ostream& out) {
  out << "value,frequency\n";
  for (const auto& [value, freq] : pmf) out << value << ',' << format_double(freq) << '\n';
}

}  // namespace ocbas
