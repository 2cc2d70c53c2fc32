#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ocbas/allocation.hpp"
#include "ocbas/core.hpp"
#include "ocbas/testbeds.hpp"

namespace ocbas {

/// One PCS sweep: a simulator with a known true best, the policies to
/// compare (their total_budget field is overridden per grid point), the
/// budget grid and the macro-replication count.
struct ExperimentPlan {
  const Simulator* simulator = nullptr;
  DesignId true_best = 0;
  std::vector<PolicyConfig> policies;
  std::vector<double> budgets;  // strictly increasing
  int macro_reps = 1;
  std::uint64_t base_seed = 0;
  int workers = 1;
};

struct PcsCell {
  std::string policy;
  double budget = 0.0;
  double pcs = 0.0;
  double std_err = 0.0;
  int macro_reps = 0;
  double mean_consumed_time = 0.0;
  std::string error;  // nonempty when the cell aborted; numeric fields are NaN
};

struct ExperimentResult {
  std::vector<PcsCell> rows;  // one per (policy, budget), policies outermost
};

/// Runs macro_reps independent sequential procedures per (policy, budget)
/// cell and scores each selection against the true best. Replication r of a
/// cell runs on a stream seeded from (base_seed, policy, budget, r), so the
/// result is byte-identical for any worker count. A cell whose replication
/// throws is aborted and recorded with the error message.
ExperimentResult run_pcs_experiment(const ExperimentPlan& plan);

/// Normalized frequencies of the integer performance values of one design
/// over `reps` replications.
std::map<std::int64_t, double> empirical_pmf(const Simulator& sim, DesignId design,
                                             std::int64_t reps, RandomStream& stream);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

/// CSV with header policy,budget,pcs,std_err,macro_reps,mean_consumed_time.
void write_csv(const ExperimentResult& result, std::ostream& out);
void write_csv(const ExperimentResult& result, const std::string& path);

/// CSV with header index,design,mean_response,std_err,reps; the design
/// column holds the comma-joined sensor ids, quoted.
void write_smoke_table_csv(const std::vector<DesignMeanRow>& rows, std::ostream& out);
void write_smoke_table_csv(const std::vector<DesignMeanRow>& rows, const std::string& path);

/// CSV with header value,frequency.
void write_pmf_csv(const std::map<std::int64_t, double>& pmf, std::ostream& out);

}  // namespace ocbas
