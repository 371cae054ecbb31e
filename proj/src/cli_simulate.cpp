#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_commands.hpp"
#include "simfdr/csv.hpp"
#include "simfdr/error.hpp"
#include "simfdr/manifest.hpp"
#include "simfdr/simlab.hpp"
#include "simfdr/version.hpp"

namespace simfdr {

namespace {

struct SimulateOptions {
    int example = 1;
    std::size_t m = 10000;
    int reps = 1;
    double pi0 = 0.75;
    std::string mu_text;
    std::string mu_weights_text;
    double rho = 0.0;
    std::optional<int> df;
    double alpha = 0.05;
    std::optional<double> alpha_prime;
    std::string procedures_text;
    bool contaminate = false;
    std::uint64_t seed = 1;
    std::size_t theta_points = 101;
    std::string lambda_grid_text;
    double trim_c = 0.0;
    bool allow_pure_null = false;
    std::string from_manifest;
    std::string out_dir = ".";
};

std::vector<std::array<double, 2>> parse_mu(const std::string& text) {
    std::vector<std::array<double, 2>> mu;
    for (const std::string& pair_text : cli_detail::split(text, ';')) {
        const std::vector<double> pair =
            cli_detail::parse_double_list(pair_text, "mu");
        if (pair.size() != 2)
            throw ConfigError("mu entries must be pairs: '" + pair_text + "'");
        mu.push_back({pair[0], pair[1]});
    }
    return mu;
}

std::vector<Procedure> parse_procedures(const std::string& text) {
    std::vector<Procedure> procedures;
    for (const std::string& name : cli_detail::split(text, ',')) {
        const auto p = parse_procedure(name);
        if (!p)
            throw ConfigError("unknown procedure: '" + name + "'");
        procedures.push_back(*p);
    }
    return procedures;
}

nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
    nlohmann::ordered_json j;
    j["example"] = cfg.example;
    j["m"] = cfg.m;
    j["reps"] = cfg.reps;
    j["pi0"] = cfg.pi0;
    nlohmann::ordered_json mu = nlohmann::ordered_json::array();
    for (const auto& entry : cfg.mu)
        mu.push_back({entry[0], entry[1]});
    j["mu"] = mu;
    j["mu_weights"] = cfg.mu_weights;
    j["rho"] = cfg.rho;
    if (cfg.df)
        j["df"] = *cfg.df;
    else
        j["df"] = nullptr;
    j["alpha"] = cfg.alpha;
    if (cfg.alpha_prime)
        j["alpha_prime"] = *cfg.alpha_prime;
    else
        j["alpha_prime"] = nullptr;
    nlohmann::ordered_json procedures = nlohmann::ordered_json::array();
    for (Procedure p : cfg.procedures)
        procedures.push_back(procedure_name(p));
    j["procedures"] = procedures;
    j["contaminate"] = cfg.contaminate;
    j["seed"] = cfg.seed;
    j["theta_points"] = cfg.theta_points;
    j["lambda_grid"] = cfg.lambda_grid;
    j["trim_c"] = cfg.trim_c;
    j["allow_pure_null"] = cfg.allow_pure_null;
    return j;
}

SimConfig config_from_json(const nlohmann::json& j) {
    SimConfig cfg;
    cfg.example = j.at("example").get<int>();
    cfg.m = j.at("m").get<std::size_t>();
    cfg.reps = j.at("reps").get<int>();
    cfg.pi0 = j.at("pi0").get<double>();
    cfg.mu.clear();
    for (const auto& entry : j.at("mu")) {
        if (!entry.is_array() || entry.size() != 2)
            throw ConfigError("manifest mu entries must be pairs");
        cfg.mu.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    cfg.mu_weights = j.at("mu_weights").get<std::vector<double>>();
    cfg.rho = j.at("rho").get<double>();
    cfg.df.reset();
    if (!j.at("df").is_null())
        cfg.df = j.at("df").get<int>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.alpha_prime.reset();
    if (!j.at("alpha_prime").is_null())
        cfg.alpha_prime = j.at("alpha_prime").get<double>();
    cfg.procedures.clear();
    for (const auto& name : j.at("procedures")) {
        const auto p = parse_procedure(name.get<std::string>());
        if (!p)
            throw ConfigError("manifest names an unknown procedure");
        cfg.procedures.push_back(*p);
    }
    cfg.contaminate = j.at("contaminate").get<bool>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.theta_points = j.at("theta_points").get<std::size_t>();
    cfg.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    cfg.trim_c = j.at("trim_c").get<double>();
    cfg.allow_pure_null = j.at("allow_pure_null").get<bool>();
    return cfg;
}

SimConfig build_config(const SimulateOptions& opt) {
    SimConfig cfg;
    cfg.example = opt.example;
    cfg.m = opt.m;
    cfg.reps = opt.reps;
    cfg.pi0 = opt.pi0;
    if (!opt.mu_text.empty())
        cfg.mu = parse_mu(opt.mu_text);
    else if (opt.example == 4)
        cfg.mu = {{0.0, 1.0}};  // a unit group-mean shift on signal rows
    if (!opt.mu_weights_text.empty())
        cfg.mu_weights = cli_detail::parse_double_list(opt.mu_weights_text, "mu_weights");
    cfg.rho = opt.rho;
    cfg.df = opt.df;
    cfg.alpha = opt.alpha;
    cfg.alpha_prime = opt.alpha_prime;
    if (!opt.procedures_text.empty())
        cfg.procedures = parse_procedures(opt.procedures_text);
    cfg.contaminate = opt.contaminate;
    cfg.seed = opt.seed;
    cfg.theta_points = opt.theta_points;
    if (!opt.lambda_grid_text.empty())
        cfg.lambda_grid = cli_detail::parse_double_list(opt.lambda_grid_text, "lambda grid");
    cfg.trim_c = opt.trim_c;
    cfg.allow_pure_null = opt.allow_pure_null;
    return cfg;
}

void run_simulate(const SimulateOptions& opt) {
    SimConfig cfg;
    std::vector<std::string> inputs;
    if (!opt.from_manifest.empty()) {
        std::ifstream in(opt.from_manifest, std::ios::binary);
        if (!in)
            throw DataError("cannot open " + opt.from_manifest);
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string bytes = buffer.str();
        try {
            const nlohmann::json doc = nlohmann::json::parse(bytes);
            if (doc.at("command").get<std::string>() != "simulate")
                throw ConfigError("manifest is not from a simulate run");
            cfg = config_from_json(doc.at("config"));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(opt.from_manifest + ": " + e.what());
        }
        inputs.push_back(opt.from_manifest + ":" + fnv1a64_hex(bytes));
    } else {
        cfg = build_config(opt);
    }
    validate_sim_config(cfg);

    const SimSummary summary = replicate(cfg);

    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec)
        throw DataError("cannot create output directory " + opt.out_dir);

    const std::string records_path = opt.out_dir + "/replications.csv";
    {
        std::ofstream out(records_path, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + records_path);
        csv::write_row(out, {"example", "procedure", "alpha", "rep", "fdp", "power",
                             "theta_hat", "pi0_hat"});
        for (const SimRecord& rec : summary.records)
            csv::write_row(out, {std::to_string(rec.example),
                                 procedure_name(rec.procedure),
                                 csv::format_double(rec.alpha),
                                 std::to_string(rec.rep),
                                 csv::format_double(rec.fdp),
                                 csv::format_double(rec.power),
                                 csv::format_double(rec.theta_hat),
                                 csv::format_double(rec.pi0_hat)});
    }

    nlohmann::ordered_json agg_doc;
    agg_doc["version"] = kVersion;
    agg_doc["example"] = cfg.example;
    agg_doc["reps"] = cfg.reps;
    agg_doc["alpha"] = cfg.alpha;
    nlohmann::ordered_json aggs = nlohmann::ordered_json::array();
    for (const ProcedureAggregate& a : summary.aggregates) {
        nlohmann::ordered_json entry;
        entry["procedure"] = procedure_name(a.procedure);
        entry["reps"] = a.reps;
        entry["mean_fdp"] = a.mean_fdp;
        entry["se_fdp"] = a.se_fdp;
        entry["mean_power"] = a.mean_power;
        entry["se_power"] = a.se_power;
        entry["mean_theta_hat"] = a.mean_theta_hat;
        entry["se_theta_hat"] = a.se_theta_hat;
        entry["mean_pi0_hat"] = a.mean_pi0_hat;
        entry["se_pi0_hat"] = a.se_pi0_hat;
        aggs.push_back(entry);
    }
    agg_doc["aggregates"] = aggs;

    const std::string agg_path = opt.out_dir + "/aggregate.json";
    {
        std::ofstream out(agg_path, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + agg_path);
        out << agg_doc.dump(2) << "\n";
    }

    RunManifest manifest;
    manifest.command = "simulate";
    manifest.resolved_config = config_to_json(cfg).dump();
    manifest.inputs = inputs;
    manifest.outputs = {"replications.csv", "aggregate.json"};
    write_manifest(manifest, opt.out_dir);
}

} // namespace

void setup_simulate_command(CLI::App& root) {
    auto opt = std::make_shared<SimulateOptions>();
    CLI::App* cmd = root.add_subcommand(
        "simulate", "Generate replication tables and score the procedures");
    std::vector<CLI::Option*> config_opts;
    config_opts.push_back(
        cmd->add_option("--example", opt->example, "simulation design (1-4)")
            ->check(CLI::Range(1, 4))
            ->capture_default_str());
    config_opts.push_back(
        cmd->add_option("--m", opt->m, "hypotheses per table")->capture_default_str());
    config_opts.push_back(
        cmd->add_option("--reps", opt->reps, "replications")->capture_default_str());
    config_opts.push_back(
        cmd->add_option("--pi0", opt->pi0, "null fraction")->capture_default_str());
    config_opts.push_back(cmd->add_option(
        "--mu", opt->mu_text,
        "signal means 'a,b' or mixture 'a,b;c,d' (example 4: the two group means)"));
    config_opts.push_back(cmd->add_option("--mu-weights", opt->mu_weights_text,
                                          "mixture weights, comma-separated"));
    config_opts.push_back(
        cmd->add_option("--rho", opt->rho, "score correlation (examples 1-2)")
            ->capture_default_str());
    config_opts.push_back(cmd->add_option(
        "--df", opt->df, "example 2: t df (default 3); example 4: filter df (default 19)"));
    config_opts.push_back(
        cmd->add_option("--alpha", opt->alpha, "target FDR level")->capture_default_str());
    config_opts.push_back(cmd->add_option("--alpha-prime", opt->alpha_prime,
                                          "direction-selection level (defaults to --alpha)"));
    config_opts.push_back(cmd->add_option(
        "--procedures", opt->procedures_text,
        "comma-separated: sim1,sim2,storey,wbh,twostage,meanfilter (default sim2)"));
    config_opts.push_back(
        cmd->add_flag("--contaminate", opt->contaminate,
                      "add unit normal noise to the first statistic (examples 1-2)"));
    config_opts.push_back(
        cmd->add_option("--seed", opt->seed, "master seed")->capture_default_str());
    config_opts.push_back(
        cmd->add_option("--theta-points", opt->theta_points, "size of the direction grid")
            ->capture_default_str());
    config_opts.push_back(cmd->add_option("--lambda-grid", opt->lambda_grid_text,
                                          "comma-separated pi0 grid values in (0, 1/2]"));
    config_opts.push_back(
        cmd->add_option("--trim-c", opt->trim_c, "symmetrization cutoff for the parametric null")
            ->capture_default_str());
    config_opts.push_back(cmd->add_flag("--allow-pure-null", opt->allow_pure_null,
                                        "permit pi0 = 1 tables"));
    CLI::Option* from = cmd->add_option("--from-manifest", opt->from_manifest,
                                        "rerun the configuration of a prior manifest.json");
    for (CLI::Option* o : config_opts)
        from->excludes(o);
    cmd->add_option("--out", opt->out_dir, "output directory")->capture_default_str();
    cmd->callback([opt] { run_simulate(*opt); });
}

} // namespace simfdr
