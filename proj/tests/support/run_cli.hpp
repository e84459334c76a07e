#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace scw::testing {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the scw binary through the shell in `cwd`. SCW_CLI_PATH is set by the build.
inline CliResult run_cli(const std::string& args, const std::filesystem::path& cwd = std::filesystem::current_path()) {
  const auto err_path = std::filesystem::temp_directory_path() / ("scw_cli_err_" + std::to_string(::getpid()));
  const std::string cmd = "cd '" + cwd.string() + "' && '" SCW_CLI_PATH "' " + args + " 2>'" + err_path.string() + "'";
  CliResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(err_path);
  std::ostringstream e;
  e << in.rdbuf();
  r.err = e.str();
  std::filesystem::remove(err_path);
  return r;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("scw_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace scw::testing
