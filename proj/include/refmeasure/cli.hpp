#pragma once

#include <string>

namespace refmeasure::cli {

struct Args {
    std::string command;  // analyze | elicit-var | converge | demo
    std::string config_path;
    std::string out_path;
    unsigned seed = 42;
    bool seed_given = false;
    bool golden_update = false;
};

/// Executes one batch run and returns the process exit code:
/// 0 success, 2 malformed config / unknown demo, 3 computation reported an
/// error or a golden comparison failed.
int run(const Args& args);

}  // namespace refmeasure::cli
