#ifndef MLAB_CLI_HPP
#define MLAB_CLI_HPP

namespace mlab {

// full command-line entry point; returns the process exit code
// (0 = success, 2 = configuration error, 3 = numeric budget exceeded)
int cli_main(int argc, const char* const* argv);

}  // namespace mlab

#endif
