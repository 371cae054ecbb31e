#include "simfdr/cli.hpp"

#include <charconv>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli_commands.hpp"
#include "simfdr/error.hpp"
#include "simfdr/version.hpp"

namespace simfdr {

namespace cli_detail {

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    for (const std::string& part : split(text, ',')) {
        double value = 0.0;
        const char* begin = part.data();
        const char* end = begin + part.size();
        const auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc{} || res.ptr != end || part.empty())
            throw ConfigError("invalid " + what + " entry: '" + part + "'");
        values.push_back(value);
    }
    return values;
}

} // namespace cli_detail

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"FDR-controlled multiple testing for paired p-values along a data-chosen direction"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    setup_analyze_command(app);
    setup_simulate_command(app);
    setup_report_command(app);

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        // Covers --help (exit 0) and usage errors alike.
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace simfdr
