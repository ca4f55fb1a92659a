#pragma once

namespace bst::cli {

/// Exit codes: 0 success, 1 condition violation or numerical failure, 2 input error.
int run(int argc, char** argv);

}  // namespace bst::cli
