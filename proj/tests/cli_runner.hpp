#pragma once

// Runs the built varflow binary and captures stdout and the exit status.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>

#ifndef VARFLOW_CLI_PATH
#error "VARFLOW_CLI_PATH must point at the varflow executable"
#endif
#ifndef VARFLOW_CONFIG_DIR
#error "VARFLOW_CONFIG_DIR must point at the sample configs"
#endif

namespace vftest {

struct CliResult {
  int status = -1;
  std::string out;
};

inline std::string config_path(const std::string& name) {
  return std::string(VARFLOW_CONFIG_DIR) + "/" + name;
}

/// `args` is appended to the binary path verbatim; stderr is discarded.
inline CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + VARFLOW_CLI_PATH + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  CliResult r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace vftest
