#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/**
 * Run one command line. `args` excludes the program name. Verbs:
 *
 *     idempotents <n>
 *     solve-trace <n> <d>
 *     classify <file>
 *     generate <family> --n <n> [--seed s] [--e poly] [--m poly] [--g c]
 *              [--roles p,q,r] [--I scale] [--max-degree k] [-o file]
 *     oracle <n>
 *     verify <n>
 *
 * Every verb accepts --json and --budget <N>. Errors are reported on `err`
 * as `error: <CODE>: <message>`.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idem::cli
