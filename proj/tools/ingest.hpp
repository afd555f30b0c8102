// Dataset ingestion and emission helpers for the command-line front end.
// Everything here talks to the engine exclusively through the C API.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "mrsvpr/mrsvpr.h"

namespace cli {

// Fatal CLI failure carrying the process exit code: 2 for configuration
// problems, 1 for runtime/IO failures. main() prints `error: <what>` on
// stderr and exits with the code.
struct CliError : std::runtime_error {
  int exit_code;
  CliError(int code, const std::string& message)
      : std::runtime_error(message), exit_code(code) {}
};

// Turns a non-OK engine status into a CliError carrying the engine message.
void check(mrsvpr_status status);

std::string trim(std::string_view text);

// Digit-aware filename ordering: "img_2.png" sorts before "img_10.png".
bool natural_less(const std::string& a, const std::string& b);

// Loads a sequence from either a numeric CSV (one descriptor per row) or a
// directory of images (frames ordered by natural filename sort).
mrsvpr_sequence* load_sequence(const std::string& path,
                               const mrsvpr_config* config);

mrsvpr_sequence* load_csv(const std::string& path);
mrsvpr_sequence* load_image_dir(const std::string& path,
                                const mrsvpr_config* config);

// Writes one descriptor per row using round-trip-exact number formatting,
// so emit-then-ingest reproduces the sequence bit for bit.
void write_sequence_csv(const std::string& path, const mrsvpr_sequence* seq);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace cli
