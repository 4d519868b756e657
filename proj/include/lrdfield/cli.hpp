#pragma once

namespace lrdfield {

// Full command-line front end; returns the process exit code.
// 0 = success/pass, 1 = acceptance gate failed (or condition violated),
// 2 = usage/config error, 3 = numeric failure, 4 = inconclusive.
int run_cli(int argc, const char* const* argv);

}  // namespace lrdfield
