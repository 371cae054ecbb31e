#include "simfdr/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "simfdr/baselines.hpp"
#include "simfdr/error.hpp"
#include "simfdr/numeric.hpp"
#include "simfdr/parallel.hpp"

namespace simfdr {

unsigned resolve_worker_count(unsigned requested) {
    if (requested != 0)
        return requested;
    if (const char* env = std::getenv("SIMFDR_THREADS")) {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && value >= 1 && value <= 1024)
            return static_cast<unsigned>(value);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t n, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
    if (n == 0)
        return;
    const std::size_t use =
        std::min<std::size_t>(std::max(1u, workers), n);
    if (use == 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n)
                return;
            try {
                body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(n, std::memory_order_relaxed);
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(use - 1);
    for (std::size_t w = 1; w < use; ++w)
        pool.emplace_back(run);
    run();
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

const char* procedure_name(Procedure p) {
    switch (p) {
        case Procedure::sim1: return "sim1";
        case Procedure::sim2: return "sim2";
        case Procedure::storey: return "storey";
        case Procedure::wbh: return "wbh";
        case Procedure::twostage: return "twostage";
        case Procedure::meanfilter: return "meanfilter";
    }
    return "unknown";
}

std::optional<Procedure> parse_procedure(const std::string& name) {
    if (name == "sim1") return Procedure::sim1;
    if (name == "sim2") return Procedure::sim2;
    if (name == "storey") return Procedure::storey;
    if (name == "wbh") return Procedure::wbh;
    if (name == "twostage") return Procedure::twostage;
    if (name == "meanfilter") return Procedure::meanfilter;
    return std::nullopt;
}

void validate_sim_config(const SimConfig& cfg) {
    if (cfg.example < 1 || cfg.example > 4)
        throw ConfigError("example must be 1, 2, 3, or 4");
    if (cfg.m < 2)
        throw ConfigError("m must be at least 2");
    if (cfg.example == 3 && cfg.m < 10)
        throw ConfigError("example 3 needs m >= 10 so every signal cluster is nonempty");
    if (cfg.reps < 1)
        throw ConfigError("reps must be at least 1");
    if (!(cfg.pi0 >= 0.0 && cfg.pi0 <= 1.0))
        throw ConfigError("pi0 must lie in [0, 1]");
    if (cfg.pi0 == 1.0 && !cfg.allow_pure_null)
        throw ConfigError("pi0 = 1 produces a pure-null table; set allow_pure_null to proceed");
    if (cfg.mu.empty())
        throw ConfigError("mu needs at least one mean vector");
    for (const auto& entry : cfg.mu)
        if (!std::isfinite(entry[0]) || !std::isfinite(entry[1]))
            throw ConfigError("mu entries must be finite");
    if (!cfg.mu_weights.empty()) {
        if (cfg.mu_weights.size() != cfg.mu.size())
            throw ConfigError("mu_weights must match mu in length");
        double total = 0.0;
        for (double w : cfg.mu_weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw ConfigError("mu_weights must be nonnegative and finite");
            total += w;
        }
        if (!(total > 0.0))
            throw ConfigError("mu_weights must have a positive sum");
    }
    if (cfg.example == 1 || cfg.example == 2) {
        if (!(cfg.rho > -1.0 && cfg.rho < 1.0))
            throw ConfigError("rho must lie in (-1, 1)");
    } else if (cfg.rho != 0.0) {
        throw ConfigError("rho applies to examples 1 and 2 only");
    }
    if (cfg.df) {
        if (cfg.example != 2 && cfg.example != 4)
            throw ConfigError("df applies to examples 2 and 4 only");
        if (*cfg.df < 1)
            throw ConfigError("df must be at least 1");
    }
    if (cfg.example == 4 && cfg.pi0 < 1.0) {
        bool any_effect = false;
        for (const auto& entry : cfg.mu)
            if (entry[0] != entry[1])
                any_effect = true;
        if (!any_effect)
            throw ConfigError("example 4 signal rows need distinct group means in mu");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ConfigError("alpha must be in (0, 1)");
    if (cfg.alpha_prime && !(*cfg.alpha_prime > 0.0 && *cfg.alpha_prime < 1.0))
        throw ConfigError("alpha_prime must be in (0, 1)");
    if (cfg.procedures.empty())
        throw ConfigError("at least one procedure is required");
    for (std::size_t i = 0; i < cfg.procedures.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.procedures.size(); ++j)
            if (cfg.procedures[i] == cfg.procedures[j])
                throw ConfigError("procedures must be distinct");
    if (cfg.contaminate && cfg.example != 1 && cfg.example != 2)
        throw ConfigError("contamination applies to examples 1 and 2 only");
    if (cfg.theta_points < 2)
        throw ConfigError("theta_points must be at least 2");
    validate_lambda_grid(cfg.lambda_grid);
    if (!(cfg.trim_c >= 0.0))
        throw ConfigError("trim_c must be nonnegative");
}

namespace {

// Mark ceil((1 - pi0) m) rows nonnull via a partial Fisher-Yates pass; this
// runs before any row-level draws so the stream layout is stable.
std::vector<std::uint8_t> draw_truth(std::size_t m, double pi0, RngStream& rng) {
    const auto m1 = std::min<std::size_t>(
        m, static_cast<std::size_t>(std::ceil((1.0 - pi0) * static_cast<double>(m))));
    std::vector<std::uint8_t> truth(m, 0);
    if (m1 == 0)
        return truth;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < m1; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint64_t>(m - i)));
        std::swap(idx[i], idx[j]);
        truth[idx[i]] = 1;
    }
    return truth;
}

std::vector<double> mixture_cumulative(const SimConfig& cfg) {
    const std::size_t k = cfg.mu.size();
    std::vector<double> cum(k, 1.0);
    if (k == 1)
        return cum;
    if (cfg.mu_weights.empty()) {
        for (std::size_t i = 0; i < k; ++i)
            cum[i] = static_cast<double>(i + 1) / static_cast<double>(k);
    } else {
        const double total =
            std::accumulate(cfg.mu_weights.begin(), cfg.mu_weights.end(), 0.0);
        double running = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            running += cfg.mu_weights[i];
            cum[i] = running / total;
        }
    }
    cum.back() = 1.0;
    return cum;
}

std::size_t pick_component(const std::vector<double>& cum, RngStream& rng) {
    const double u = rng.uniform01();
    return static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
}

} // namespace

double contaminate_statistic(double x, RngStream& rng) {
    return x + rng.normal();
}

PValueTable gen_example1(const SimConfig& cfg, RngStream& rng) {
    const std::size_t m = cfg.m;
    const std::vector<std::uint8_t> truth = draw_truth(m, cfg.pi0, rng);
    const std::vector<double> cum = mixture_cumulative(cfg);

    std::vector<double> p1(m), p2(m);
    BivariateParams params;
    params.rho = cfg.rho;
    for (std::size_t i = 0; i < m; ++i) {
        if (truth[i]) {
            const std::size_t k = cfg.mu.size() > 1 ? pick_component(cum, rng) : 0;
            params.mean = {cfg.mu[k][0], cfg.mu[k][1]};
        } else {
            params.mean = {0.0, 0.0};
        }
        const std::array<double, 2> x = sample_bivariate_normal(rng, params);
        double x1 = x[0];
        if (cfg.contaminate)
            x1 = contaminate_statistic(x1, rng);
        // One-sided p-values against the standard normal null marginal.
        p1[i] = std_normal_cdf(-x1);
        p2[i] = std_normal_cdf(-x[1]);
    }
    PValueTable table(std::move(p1), std::move(p2));
    table.set_truth(truth);
    return table;
}

PValueTable gen_example2(const SimConfig& cfg, RngStream& rng) {
    const std::size_t m = cfg.m;
    const int df = cfg.df.value_or(3);
    const std::vector<std::uint8_t> truth = draw_truth(m, cfg.pi0, rng);
    const std::vector<double> cum = mixture_cumulative(cfg);

    std::vector<double> p1(m), p2(m);
    BivariateParams params;
    params.rho = cfg.rho;
    for (std::size_t i = 0; i < m; ++i) {
        if (truth[i]) {
            const std::size_t k = cfg.mu.size() > 1 ? pick_component(cum, rng) : 0;
            params.mean = {cfg.mu[k][0], cfg.mu[k][1]};
        } else {
            params.mean = {0.0, 0.0};
        }
        const std::array<double, 2> x = sample_bivariate_t(rng, params, df);
        double x1 = x[0];
        if (cfg.contaminate)
            x1 = contaminate_statistic(x1, rng);
        p1[i] = student_t_cdf(-x1, df);
        p2[i] = student_t_cdf(-x[1], df);
    }
    PValueTable table(std::move(p1), std::move(p2));
    table.set_truth(truth);
    return table;
}

PValueTable gen_example3(const SimConfig& cfg, RngStream& rng) {
    const std::size_t m = cfg.m;
    // Signal clusters at fixed fractional positions of the index range.
    const std::size_t bounds[3][2] = {
        {m / 10, m * 2 / 10}, {m * 5 / 10, m * 6 / 10}, {m * 8 / 10, m * 9 / 10}};
    std::vector<std::uint8_t> truth(m, 0);
    for (const auto& b : bounds)
        for (std::size_t i = b[0]; i < b[1]; ++i)
            truth[i] = 1;

    static constexpr double kLevels[3] = {1.5, 2.0, 2.5};
    std::vector<double> p2(m);
    for (std::size_t i = 0; i < m; ++i) {
        double mean = 0.0;
        if (truth[i])
            mean = kLevels[rng.uniform_below(3)];
        p2[i] = std_normal_cdf(-(mean + rng.normal()));
    }

    // The companion statistic averages the two serial neighbors, so it tracks
    // the clusters without depending on the row's own draw.
    std::vector<double> p1(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double lo = p2[i == 0 ? 0 : i - 1];
        const double hi = p2[i + 1 < m ? i + 1 : m - 1];
        p1[i] = 0.5 * (lo + hi);
    }
    PValueTable table(std::move(p1), std::move(p2));
    table.set_truth(truth);
    return table;
}

PValueTable gen_example4(const SimConfig& cfg, RngStream& rng) {
    const std::size_t m = cfg.m;
    const int df = cfg.df.value_or(19);
    const std::vector<std::uint8_t> truth = draw_truth(m, cfg.pi0, rng);
    const std::vector<double> cum = mixture_cumulative(cfg);

    constexpr std::size_t kGroup = 10;
    std::vector<double> p1(m), p2(m);
    std::array<double, 2 * kGroup> obs{};
    for (std::size_t i = 0; i < m; ++i) {
        double mean_lhs = 0.0, mean_rhs = 0.0;
        if (truth[i]) {
            const std::size_t k = cfg.mu.size() > 1 ? pick_component(cum, rng) : 0;
            mean_lhs = cfg.mu[k][0];
            mean_rhs = cfg.mu[k][1];
        }
        for (std::size_t j = 0; j < kGroup; ++j)
            obs[j] = mean_lhs + rng.normal();
        for (std::size_t j = 0; j < kGroup; ++j)
            obs[kGroup + j] = mean_rhs + rng.normal();

        double sum_lhs = 0.0, sum_rhs = 0.0;
        for (std::size_t j = 0; j < kGroup; ++j) {
            sum_lhs += obs[j];
            sum_rhs += obs[kGroup + j];
        }
        const double avg_lhs = sum_lhs / kGroup;
        const double avg_rhs = sum_rhs / kGroup;

        double ss_within = 0.0;
        for (std::size_t j = 0; j < kGroup; ++j) {
            ss_within += (obs[j] - avg_lhs) * (obs[j] - avg_lhs);
            ss_within += (obs[kGroup + j] - avg_rhs) * (obs[kGroup + j] - avg_rhs);
        }
        const double pooled_var = ss_within / (2.0 * kGroup - 2.0);
        const double tstat =
            (avg_lhs - avg_rhs) / std::sqrt(pooled_var * 2.0 / kGroup);
        p2[i] = 2.0 * student_t_cdf(-std::abs(tstat), 2 * static_cast<int>(kGroup) - 2);

        // Total sum of squares around the grand mean: a scale statistic that
        // is independent of the t numerator under the null.
        const double grand = (sum_lhs + sum_rhs) / (2.0 * kGroup);
        double sse = 0.0;
        for (std::size_t j = 0; j < 2 * kGroup; ++j)
            sse += (obs[j] - grand) * (obs[j] - grand);
        p1[i] = 1.0 - chi_square_cdf(sse, df);
    }
    PValueTable table(std::move(p1), std::move(p2));
    table.set_truth(truth);
    return table;
}

PValueTable generate_table(const SimConfig& cfg, RngStream& rng) {
    validate_sim_config(cfg);
    switch (cfg.example) {
        case 1: return gen_example1(cfg, rng);
        case 2: return gen_example2(cfg, rng);
        case 3: return gen_example3(cfg, rng);
        case 4: return gen_example4(cfg, rng);
        default: throw ConfigError("example must be 1, 2, 3, or 4");
    }
}

FdpPower fdp_power(const std::vector<std::size_t>& rejected,
                   const std::vector<std::uint8_t>& truth) {
    if (truth.empty())
        throw std::domain_error("fdp_power: truth labels required");
    FdpPower out;
    std::size_t m1 = 0;
    for (std::uint8_t t : truth)
        if (t) ++m1;
    for (std::size_t i : rejected) {
        if (i >= truth.size())
            throw std::domain_error("fdp_power: rejection index out of range");
        if (truth[i])
            ++out.true_rejections;
        else
            ++out.false_rejections;
    }
    out.rejections = rejected.size();
    out.fdp = static_cast<double>(out.false_rejections) /
              static_cast<double>(std::max<std::size_t>(out.rejections, 1));
    out.power = m1 > 0 ? static_cast<double>(out.true_rejections) / static_cast<double>(m1)
                       : std::numeric_limits<double>::quiet_NaN();
    return out;
}

namespace {

SimRecord run_one(const SimConfig& cfg, const PValueTable& table, Procedure proc,
                  int rep) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    SimRecord rec;
    rec.example = cfg.example;
    rec.procedure = proc;
    rec.alpha = cfg.alpha;
    rec.rep = rep;
    rec.theta_hat = nan;
    rec.pi0_hat = nan;
    rec.threshold = nan;

    std::vector<std::size_t> rejected;
    switch (proc) {
        case Procedure::sim1:
        case Procedure::sim2: {
            ProcedureConfig pc;
            pc.alpha = cfg.alpha;
            pc.alpha_prime = cfg.alpha_prime;
            pc.method = proc == Procedure::sim1 ? NullMethod::parametric
                                                : NullMethod::nonparametric;
            pc.theta_points = cfg.theta_points;
            pc.lambda_grid = cfg.lambda_grid;
            pc.trim_c = cfg.trim_c;
            DecisionReport report = run_sim_procedure(table, pc);
            rec.theta_hat = report.theta_hat;
            rec.pi0_hat = report.pi0_hat;
            rec.threshold = report.threshold;
            rejected = std::move(report.rejected);
            break;
        }
        case Procedure::storey: {
            StoreyResult res = storey(table.p2(), cfg.alpha, cfg.lambda_grid);
            rec.pi0_hat = res.pi0;
            rec.threshold = res.threshold;
            rejected = std::move(res.rejected);
            break;
        }
        case Procedure::wbh: {
            rejected = weighted_bh(table, cfg.alpha).rejected;
            break;
        }
        case Procedure::twostage: {
            rejected = two_stage(table, cfg.alpha);
            break;
        }
        case Procedure::meanfilter: {
            // The filtered column's null is the mean of three uniforms, not
            // uniform, so the scan must use that CDF to stay calibrated.
            StoreyResult res = storey(mean_filter_pstar(table.p2()), cfg.alpha,
                                      cfg.lambda_grid, NullCdf::mean_of_three_uniforms());
            rec.pi0_hat = res.pi0;
            rec.threshold = res.threshold;
            rejected = std::move(res.rejected);
            break;
        }
    }

    const FdpPower fp = fdp_power(rejected, table.truth());
    rec.fdp = fp.fdp;
    rec.power = fp.power;
    return rec;
}

double mean_of(const std::vector<double>& xs) {
    double total = 0.0;
    for (double x : xs)
        total += x;
    return total / static_cast<double>(xs.size());
}

double se_of(const std::vector<double>& xs, double mean) {
    const std::size_t n = xs.size();
    if (n < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

} // namespace

SimSummary replicate(const SimConfig& cfg, unsigned workers) {
    validate_sim_config(cfg);
    const std::size_t reps = static_cast<std::size_t>(cfg.reps);
    const std::size_t nproc = cfg.procedures.size();

    SimSummary summary;
    summary.records.resize(reps * nproc);
    parallel_for(reps, resolve_worker_count(workers), [&](std::size_t rep) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(rep));
        const PValueTable table = generate_table(cfg, rng);
        for (std::size_t k = 0; k < nproc; ++k)
            summary.records[rep * nproc + k] =
                run_one(cfg, table, cfg.procedures[k], static_cast<int>(rep));
    });

    summary.aggregates.reserve(nproc);
    std::vector<double> fdp(reps), power(reps), theta(reps), pi0(reps);
    for (std::size_t k = 0; k < nproc; ++k) {
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const SimRecord& rec = summary.records[rep * nproc + k];
            fdp[rep] = rec.fdp;
            power[rep] = rec.power;
            theta[rep] = rec.theta_hat;
            pi0[rep] = rec.pi0_hat;
        }
        ProcedureAggregate agg;
        agg.procedure = cfg.procedures[k];
        agg.reps = cfg.reps;
        agg.mean_fdp = mean_of(fdp);
        agg.se_fdp = se_of(fdp, agg.mean_fdp);
        agg.mean_power = mean_of(power);
        agg.se_power = se_of(power, agg.mean_power);
        agg.mean_theta_hat = mean_of(theta);
        agg.se_theta_hat = se_of(theta, agg.mean_theta_hat);
        agg.mean_pi0_hat = mean_of(pi0);
        agg.se_pi0_hat = se_of(pi0, agg.mean_pi0_hat);
        summary.aggregates.push_back(agg);
    }
    return summary;
}

} // namespace simfdr
