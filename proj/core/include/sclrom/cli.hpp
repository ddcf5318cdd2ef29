#pragma once

#include <iosfwd>

namespace sclrom {

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `sclrom` invocation. Reports go to `out`, diagnostics to `err`.
///
///   simulate wave|periodic|almost-periodic ... --out FILE
///   fit SNAPSHOTS --mode monomial|lsq --eps E --out MODEL
///   verify MODEL SNAPSHOTS [--eps E]
///   predict MODEL --from T0 --to T1 --out FILE
///   export-plot --snapshots FILE [--predictions FILE | --model MODEL] --out CSV
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sclrom
