#pragma once

#include <string>
#include <vector>

#include "simfdr/error.hpp"

namespace CLI {
class App;
}

namespace simfdr {

void setup_analyze_command(CLI::App& root);
void setup_simulate_command(CLI::App& root);
void setup_report_command(CLI::App& root);

namespace cli_detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what);

} // namespace cli_detail

} // namespace simfdr
