#ifndef SANDCUBE_CLI_HPP_
#define SANDCUBE_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace sandcube {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;  // a proven-statement check failed
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitIo = 4;

// Entry point of the `sandcube` tool; `args` excludes the program name.
//   sandcube stabilize --dim d --side N [--background k] [--engine sym|full]
//                      [--steps t] [--checkpoint-every n] [--resume path] [--out path]
//   sandcube verify --check <name|all> [--dim d] [--side N] [--background k] [--horizon t]
//   sandcube render --dim d --side N [--background k] [--time t|inf ...]
//                   [--slice o ...] [--normalize-to-dim d_ref] --out path
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sandcube

#endif
