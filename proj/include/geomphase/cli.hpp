#pragma once

namespace geomphase {

// Entry point for the command-line tool.  Returns the process exit code:
// 0 on success, 1 for configuration/validation/io problems, 2 for numeric
// failures or a failed solver cross-check.
int cli_main(int argc, const char* const* argv);

}  // namespace geomphase
