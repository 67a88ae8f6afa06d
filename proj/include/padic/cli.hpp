#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padic/io.hpp"
#include "padic/minimizer.hpp"
#include "padic/scalar.hpp"

namespace padic::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAssertion = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kCsvVersion = 1;

struct RunConfig {
  long p = 2;
  int d = 2;
  double alpha = 1;
  Mode mode = Mode::exact;
  int L = 0;
  int l = 2;
  std::uint64_t seed = 42;
  AnnealSchedule schedule;
  // Command-specific keys (V, n, levels, rho, v0, phi, K, trials, ...) as given.
  io::json extra = io::json::object();

  static RunConfig from_json(const io::json& j);
  io::json echo() const;
};

struct RunResult {
  io::json record;
  std::vector<io::CsvTable> tables;
  int exit_code = kExitOk;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"constants", "lemma1", "energy", "frostman", "spinglass",
                                          "place",     "minimize", "gamma", "suite"};
  return c;
}

// Dispatches one command. Library errors become exit codes with an "error"
// entry in the record; nothing is thrown for invalid input.
RunResult run(const std::string& command, const RunConfig& config, bool stable = false);

// Full command-line entry point used by the executable.
int main(int argc, char** argv);

}  // namespace padic::cli
