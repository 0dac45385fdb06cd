#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "oracles.hpp"

namespace cli {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

/// Runs `exe args` through the shell, capturing both streams.
inline Run run(const std::string& exe, const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tag = std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto out = dir / ("loadcap_out_" + tag);
  const auto err = dir / ("loadcap_err_" + tag);
  const std::string cmd = "'" + exe + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = oracle::slurp(out.string());
  r.err = oracle::slurp(err.string());
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

}  // namespace cli
