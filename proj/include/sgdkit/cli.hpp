#pragma once

namespace sgdkit {

// Command-line entry point: schema-validate, simulate, track, evaluate,
// stats. Returns 0 on success, 1 when inputs fail validation (the report
// is still written), 2 on usage or I/O errors.
int run_cli(int argc, const char* const* argv);

} // namespace sgdkit
