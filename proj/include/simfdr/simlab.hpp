#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simfdr/estimation.hpp"
#include "simfdr/projection.hpp"
#include "simfdr/rng.hpp"

namespace simfdr {

enum class Procedure { sim1, sim2, storey, wbh, twostage, meanfilter };

const char* procedure_name(Procedure p);
std::optional<Procedure> parse_procedure(const std::string& name);

struct SimConfig {
    int example = 1;
    std::size_t m = 10000;
    int reps = 1;
    double pi0 = 0.75;
    // Nonnull mean vectors; more than one entry makes the signal a mixture
    // (weights default to equal). Example 4 reads each entry as the two
    // group means of a differentially expressed row.
    std::vector<std::array<double, 2>> mu{{2.0, 2.0}};
    std::vector<double> mu_weights;
    double rho = 0.0;
    // Example 2: t degrees of freedom (default 3).
    // Example 4: chi-square df of the SSE filter statistic (default 19).
    std::optional<int> df;
    double alpha = 0.05;
    std::optional<double> alpha_prime;  // defaults to alpha
    std::vector<Procedure> procedures{Procedure::sim2};
    bool contaminate = false;
    std::uint64_t seed = 1;
    std::size_t theta_points = 101;
    std::vector<double> lambda_grid = default_lambda_grid();
    double trim_c = 0.0;
    bool allow_pure_null = false;
};

// Throws ConfigError on out-of-range fields or incompatible combinations
// (df outside examples 2/4, contamination outside examples 1/2, pi0 = 1
// without allow_pure_null, ...).
void validate_sim_config(const SimConfig& cfg);

// One replication table from each design. All draw from the single stream in
// a fixed order, so (seed, rep) reproduces the table exactly.
PValueTable gen_example1(const SimConfig& cfg, RngStream& rng);  // bivariate normal scores
PValueTable gen_example2(const SimConfig& cfg, RngStream& rng);  // bivariate t scores
PValueTable gen_example3(const SimConfig& cfg, RngStream& rng);  // serially clustered signals
PValueTable gen_example4(const SimConfig& cfg, RngStream& rng);  // two-sample t + SSE filter
PValueTable generate_table(const SimConfig& cfg, RngStream& rng);

// The contamination used by the robustness studies: an independent standard
// normal added to a preliminary statistic.
double contaminate_statistic(double x, RngStream& rng);

struct FdpPower {
    double fdp = 0.0;
    double power = 0.0;  // NaN when the table has no nonnull rows
    std::size_t false_rejections = 0;
    std::size_t true_rejections = 0;
    std::size_t rejections = 0;
};

// FDP = V / max(R, 1); power = S / m1. Requires truth labels.
FdpPower fdp_power(const std::vector<std::size_t>& rejected,
                   const std::vector<std::uint8_t>& truth);

struct SimRecord {
    int example = 1;
    Procedure procedure = Procedure::sim2;
    double alpha = 0.05;
    int rep = 0;
    double fdp = 0.0;
    double power = 0.0;
    double theta_hat = 0.0;   // NaN for baselines
    double pi0_hat = 1.0;     // NaN where not estimated
    double threshold = 0.0;   // NaN where not threshold-based
};

struct ProcedureAggregate {
    Procedure procedure = Procedure::sim2;
    int reps = 0;
    double mean_fdp = 0.0, se_fdp = 0.0;
    double mean_power = 0.0, se_power = 0.0;
    double mean_theta_hat = 0.0, se_theta_hat = 0.0;
    double mean_pi0_hat = 0.0, se_pi0_hat = 0.0;
};

struct SimSummary {
    std::vector<SimRecord> records;           // rep-major, procedures in config order
    std::vector<ProcedureAggregate> aggregates;
};

// Run cfg.reps replications (stream index = replication index), apply every
// configured procedure, and aggregate. Worker count affects wall time only.
SimSummary replicate(const SimConfig& cfg, unsigned workers = 0);

} // namespace simfdr
