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
#include "simfdr/estimation.hpp"
#include "simfdr/manifest.hpp"
#include "simfdr/projection.hpp"
#include "simfdr/version.hpp"

namespace simfdr {

namespace {

struct AnalyzeOptions {
    std::string input;
    std::string out_dir = ".";
    double alpha = 0.05;
    std::optional<double> alpha_prime;
    std::string method = "nonparametric";
    std::size_t theta_points = 101;
    std::string lambda_grid_text;
    double trim_c = 0.0;
};

NullMethod parse_method(const std::string& name) {
    if (name == "parametric")
        return NullMethod::parametric;
    if (name == "nonparametric")
        return NullMethod::nonparametric;
    if (name == "identity")
        return NullMethod::identity;
    throw ConfigError("unknown method: '" + name + "'");
}

void run_analyze(const AnalyzeOptions& opt) {
    std::ifstream in(opt.input, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + opt.input);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    std::istringstream stream(bytes);
    const csv::Table table = csv::read(stream, opt.input);

    const std::vector<std::string> plain{"p1", "p2"};
    const std::vector<std::string> with_id{"id", "p1", "p2"};
    bool has_id = false;
    if (table.header == with_id)
        has_id = true;
    else if (table.header != plain)
        throw DataError(opt.input + ":1: header must be 'p1,p2' or 'id,p1,p2'");
    if (table.rows.empty())
        throw DataError(opt.input + ": no data rows");

    const std::size_t col1 = has_id ? 1 : 0;
    std::vector<std::string> ids;
    std::vector<double> p1, p2;
    ids.reserve(table.rows.size());
    p1.reserve(table.rows.size());
    p2.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t line = table.line_numbers[r];
        const double v1 = csv::parse_double_field(row[col1], "p1", line, opt.input);
        const double v2 = csv::parse_double_field(row[col1 + 1], "p2", line, opt.input);
        if (!(v1 >= 0.0 && v1 <= 1.0))
            throw DataError(opt.input + ":" + std::to_string(line) +
                            ": p1 out of range [0, 1]");
        if (!(v2 >= 0.0 && v2 <= 1.0))
            throw DataError(opt.input + ":" + std::to_string(line) +
                            ": p2 out of range [0, 1]");
        ids.push_back(has_id ? row[0] : std::to_string(r + 1));
        p1.push_back(v1);
        p2.push_back(v2);
    }

    PValueTable pvalues(std::move(p1), std::move(p2));
    pvalues.set_ids(ids);

    ProcedureConfig pc;
    pc.alpha = opt.alpha;
    pc.alpha_prime = opt.alpha_prime;
    pc.method = parse_method(opt.method);
    pc.theta_points = opt.theta_points;
    if (!opt.lambda_grid_text.empty())
        pc.lambda_grid = cli_detail::parse_double_list(opt.lambda_grid_text, "lambda grid");
    pc.trim_c = opt.trim_c;
    pc.want_fdr_curve = true;

    const DecisionReport report = run_sim_procedure(pvalues, pc);

    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec)
        throw DataError("cannot create output directory " + opt.out_dir);

    const ProjectedSample projected = project_all(pvalues, report.theta_hat);
    std::vector<std::uint8_t> rejected_flag(pvalues.size(), 0);
    for (std::size_t i : report.rejected)
        rejected_flag[i] = 1;

    const std::string rejections_path = opt.out_dir + "/rejections.csv";
    {
        std::ofstream out(rejections_path, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + rejections_path);
        csv::write_row(out, {"id", "p1", "p2", "p_theta", "rejected"});
        for (std::size_t i = 0; i < pvalues.size(); ++i)
            csv::write_row(out, {pvalues.ids()[i],
                                 csv::format_double(pvalues.p1()[i]),
                                 csv::format_double(pvalues.p2()[i]),
                                 csv::format_double(projected.values[i]),
                                 rejected_flag[i] ? "1" : "0"});
    }

    const std::string curve_path = opt.out_dir + "/fdr_curve.csv";
    {
        std::ofstream out(curve_path, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + curve_path);
        csv::write_row(out, {"t", "fdr_hat"});
        for (const auto& [t, estimate] : report.fdr_curve)
            csv::write_row(out, {csv::format_double(t), csv::format_double(estimate)});
    }

    const double alpha_prime = opt.alpha_prime.value_or(opt.alpha);
    nlohmann::ordered_json config;
    config["input"] = opt.input;
    config["alpha"] = opt.alpha;
    config["alpha_prime"] = alpha_prime;
    config["method"] = opt.method;
    config["theta_points"] = opt.theta_points;
    config["lambda_grid"] = pc.lambda_grid;
    config["trim_c"] = opt.trim_c;
    config["out"] = opt.out_dir;

    nlohmann::ordered_json summary;
    summary["version"] = kVersion;
    summary["m"] = pvalues.size();
    summary["alpha"] = opt.alpha;
    summary["alpha_prime"] = alpha_prime;
    summary["method"] = opt.method;
    summary["theta_hat"] = report.theta_hat;
    summary["pi0_hat"] = report.pi0_hat;
    summary["lambda"] = report.lambda;
    summary["threshold"] = report.threshold;
    summary["rejections"] = report.rejected.size();
    nlohmann::ordered_json diag = nlohmann::ordered_json::array();
    for (const auto& d : report.theta_diagnostics) {
        nlohmann::ordered_json entry;
        entry["theta"] = d.theta;
        entry["threshold"] = d.threshold;
        entry["rejections"] = d.rejections;
        diag.push_back(entry);
    }
    summary["theta_grid"] = diag;

    const std::string summary_path = opt.out_dir + "/summary.json";
    {
        std::ofstream out(summary_path, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + summary_path);
        out << summary.dump(2) << "\n";
    }

    RunManifest manifest;
    manifest.command = "analyze";
    manifest.resolved_config = config.dump();
    manifest.inputs = {opt.input + ":" + fnv1a64_hex(bytes)};
    manifest.outputs = {"rejections.csv", "fdr_curve.csv", "summary.json"};
    write_manifest(manifest, opt.out_dir);
}

} // namespace

void setup_analyze_command(CLI::App& root) {
    auto opt = std::make_shared<AnalyzeOptions>();
    CLI::App* cmd = root.add_subcommand(
        "analyze", "Run the procedure on a CSV of paired p-values");
    cmd->add_option("input", opt->input, "CSV with header p1,p2 or id,p1,p2")
        ->required();
    cmd->add_option("--alpha", opt->alpha, "target FDR level")
        ->capture_default_str();
    cmd->add_option("--alpha-prime", opt->alpha_prime,
                    "direction-selection level (defaults to --alpha)");
    cmd->add_option("--method", opt->method, "null model estimate")
        ->check(CLI::IsMember({"parametric", "nonparametric", "identity"}))
        ->capture_default_str();
    cmd->add_option("--theta-points", opt->theta_points, "size of the direction grid")
        ->capture_default_str();
    cmd->add_option("--lambda-grid", opt->lambda_grid_text,
                    "comma-separated pi0 grid values in (0, 1/2]");
    cmd->add_option("--trim-c", opt->trim_c, "symmetrization cutoff for the parametric null")
        ->capture_default_str();
    cmd->add_option("--out", opt->out_dir, "output directory")
        ->capture_default_str();
    cmd->callback([opt] { run_analyze(*opt); });
}

} // namespace simfdr
