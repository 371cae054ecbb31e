#pragma once

namespace simfdr {

// Entry point behind main(): parses argv, dispatches to the analyze /
// simulate / report subcommands, and maps failures to exit codes:
//   0  success
//   2  usage, configuration, or input-validation errors
//   1  runtime failures (estimation errors, I/O)
int run_cli(int argc, const char* const* argv);

// Embedded contents of data/reference_values.json (see `simfdr report`).
const char* reference_values_json();

} // namespace simfdr
