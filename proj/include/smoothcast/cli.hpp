#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smoothcast
{
    enum ExitCode : int
    {
        kExitOk = 0,
        kExitRuntime = 1,
        kExitUsage = 2,
    };

    // Entry point behind the `smoothcast` binary. args[0] is the program name.
    // Output goes to --out when given, otherwise to `out`; diagnostics to `err`.
    int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
}
