#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bd/config.hpp"

namespace bd {

// Pipeline subcommands. All throw on failure (bad inputs, unwritable
// outputs); the CLI maps exceptions to a non-zero exit.
void cmd_build_corpus(const RunConfig& config);
void cmd_split(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_predict(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_gradcheck(const RunConfig& config);

struct GradSuiteEntry {
  std::string name;
  double max_rel_error = 0.0;
  double tolerance = 1e-5;
  bool passed() const { return max_rel_error < tolerance; }
};

// Finite-difference checks for every layer plus the full tiny-config
// network; shared by the gradcheck subcommand and the acceptance suite.
std::vector<GradSuiteEntry> run_gradient_suite();

}  // namespace bd
