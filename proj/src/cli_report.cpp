#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli_commands.hpp"
#include "simfdr/cli.hpp"
#include "simfdr/csv.hpp"
#include "simfdr/error.hpp"
#include "simfdr/manifest.hpp"
#include "simfdr/simlab.hpp"
#include "simfdr/version.hpp"

namespace simfdr {

namespace {

struct ReportOptions {
    std::vector<std::string> inputs;
    std::string out_dir = ".";
};

long parse_int_field(const std::string& field, const std::string& what,
                     std::size_t line, const std::string& source) {
    long value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw DataError(source + ":" + std::to_string(line) + ": invalid " + what +
                        ": '" + field + "'");
    return value;
}

struct GroupStats {
    std::size_t count = 0;
    double sum_fdp = 0.0;
    double sum_power = 0.0;
};

// Sort key: example, canonical procedure order, alpha.
using GroupKey = std::tuple<int, int, double>;

void run_report(const ReportOptions& opt) {
    const std::vector<std::string> expected_header{
        "example", "procedure", "alpha", "rep",
        "fdp",     "power",     "theta_hat", "pi0_hat"};

    std::map<GroupKey, GroupStats> groups;
    std::vector<std::string> input_entries;
    for (const std::string& path : opt.inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw DataError("cannot open " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        const std::string bytes = buffer.str();
        input_entries.push_back(path + ":" + fnv1a64_hex(bytes));

        std::istringstream stream(bytes);
        const csv::Table table = csv::read(stream, path);
        if (table.header != expected_header)
            throw DataError(path + ":1: not a replications file (unexpected header)");

        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& row = table.rows[r];
            const std::size_t line = table.line_numbers[r];
            const int example =
                static_cast<int>(parse_int_field(row[0], "example", line, path));
            const auto procedure = parse_procedure(row[1]);
            if (!procedure)
                throw DataError(path + ":" + std::to_string(line) +
                                ": unknown procedure: '" + row[1] + "'");
            const double alpha = csv::parse_double_field(row[2], "alpha", line, path);
            parse_int_field(row[3], "rep", line, path);
            const double fdp = csv::parse_double_field(row[4], "fdp", line, path);
            const double power = csv::parse_double_field(row[5], "power", line, path);
            csv::parse_double_field(row[6], "theta_hat", line, path);
            csv::parse_double_field(row[7], "pi0_hat", line, path);

            GroupStats& g =
                groups[GroupKey{example, static_cast<int>(*procedure), alpha}];
            ++g.count;
            g.sum_fdp += fdp;
            g.sum_power += power;
        }
    }
    if (groups.empty())
        throw DataError("no replication records in the inputs");

    const nlohmann::json reference = nlohmann::json::parse(reference_values_json());
    const int ref_example = reference.at("example").get<int>();
    const double tol_fdp = reference.at("tolerance").at("fdp").get<double>();
    const double tol_power = reference.at("tolerance").at("power").get<double>();
    const nlohmann::json& ref_values = reference.at("values");

    struct Line {
        int example;
        std::string procedure;
        double alpha;
        std::size_t reps;
        double mean_fdp;
        double mean_power;
        bool has_ref = false;
        double ref_fdp = 0.0;
        double ref_power = 0.0;
    };
    std::vector<Line> lines;
    for (const auto& [key, stats] : groups) {
        Line ln;
        ln.example = std::get<0>(key);
        ln.procedure = procedure_name(static_cast<Procedure>(std::get<1>(key)));
        ln.alpha = std::get<2>(key);
        ln.reps = stats.count;
        ln.mean_fdp = stats.sum_fdp / static_cast<double>(stats.count);
        ln.mean_power = stats.sum_power / static_cast<double>(stats.count);
        if (ln.example == ref_example && ref_values.contains(ln.procedure)) {
            const auto& per_alpha = ref_values.at(ln.procedure);
            const std::string alpha_key = csv::format_double(ln.alpha);
            if (per_alpha.contains(alpha_key)) {
                ln.has_ref = true;
                ln.ref_fdp = per_alpha.at(alpha_key).at("fdp").get<double>();
                ln.ref_power = per_alpha.at(alpha_key).at("power").get<double>();
            }
        }
        lines.push_back(ln);
    }

    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec)
        throw DataError("cannot create output directory " + opt.out_dir);

    const auto within = [](double value, double ref, double tol) {
        return std::abs(value - ref) <= tol;
    };

    const std::string csv_path = opt.out_dir + "/report.csv";
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + csv_path);
        csv::write_row(out, {"example", "procedure", "alpha", "reps", "mean_fdp",
                             "mean_power", "ref_fdp", "ref_power", "fdp_within_tol",
                             "power_within_tol"});
        for (const Line& ln : lines) {
            std::vector<std::string> row{
                std::to_string(ln.example), ln.procedure, csv::format_double(ln.alpha),
                std::to_string(ln.reps),    csv::format_double(ln.mean_fdp),
                csv::format_double(ln.mean_power)};
            if (ln.has_ref) {
                row.push_back(csv::format_double(ln.ref_fdp));
                row.push_back(csv::format_double(ln.ref_power));
                row.push_back(within(ln.mean_fdp, ln.ref_fdp, tol_fdp) ? "yes" : "no");
                row.push_back(within(ln.mean_power, ln.ref_power, tol_power) ? "yes"
                                                                             : "no");
            } else {
                row.insert(row.end(), {"", "", "", ""});
            }
            csv::write_row(out, row);
        }
    }

    const std::string md_path = opt.out_dir + "/report.md";
    {
        std::ofstream out(md_path, std::ios::binary);
        if (!out)
            throw DataError("cannot write " + md_path);
        out << "# Replication summary\n\n";
        out << "| example | procedure | alpha | reps | mean fdp | mean power |"
               " ref fdp | ref power | fdp ok | power ok |\n";
        out << "| ---: | :--- | ---: | ---: | ---: | ---: | ---: | ---: |"
               " :---: | :---: |\n";
        for (const Line& ln : lines) {
            out << "| " << ln.example << " | " << ln.procedure << " | "
                << csv::format_double(ln.alpha) << " | " << ln.reps << " | "
                << csv::format_double(ln.mean_fdp) << " | "
                << csv::format_double(ln.mean_power) << " | ";
            if (ln.has_ref) {
                out << csv::format_double(ln.ref_fdp) << " | "
                    << csv::format_double(ln.ref_power) << " | "
                    << (within(ln.mean_fdp, ln.ref_fdp, tol_fdp) ? "yes" : "no")
                    << " | "
                    << (within(ln.mean_power, ln.ref_power, tol_power) ? "yes" : "no")
                    << " |\n";
            } else {
                out << "- | - | - | - |\n";
            }
        }
        out << "\nReference columns compare example-" << ref_example
            << " groups against the frozen baseline (tolerance fdp "
            << csv::format_double(tol_fdp) << ", power "
            << csv::format_double(tol_power) << ").\n";
    }

    nlohmann::ordered_json config;
    config["in"] = opt.inputs;
    config["out"] = opt.out_dir;

    RunManifest manifest;
    manifest.command = "report";
    manifest.resolved_config = config.dump();
    manifest.inputs = input_entries;
    manifest.outputs = {"report.csv", "report.md"};
    write_manifest(manifest, opt.out_dir);
}

} // namespace

void setup_report_command(CLI::App& root) {
    auto opt = std::make_shared<ReportOptions>();
    CLI::App* cmd = root.add_subcommand(
        "report", "Aggregate replication files and compare against the frozen baseline");
    cmd->add_option("--in", opt->inputs, "replications.csv files")
        ->required()
        ->expected(-1);
    cmd->add_option("--out", opt->out_dir, "output directory")->capture_default_str();
    cmd->callback([opt] { run_report(*opt); });
}

} // namespace simfdr
