#pragma once

namespace stepflow::cli {

/// Exit codes: 0 ok, 1 numerical failure or failed self-check, 2 bad
/// configuration or usage.
int run(int argc, char** argv);

/// Fast invariant suite; prints one line per check, returns the failure count.
int selfcheck();

}  // namespace stepflow::cli
