#pragma once

#include <optional>
#include <string>

namespace foldframe {

// Engine-wide defaults. Operations that take an explicit argument always use
// it; otherwise they read the current default once at entry (snapshot
// semantics).
struct EngineOptions {
  bool na_rm = true;
  bool sort = true;
  int nthreads = 1;
  int verbose = 1;
  int digits = 4;
};

// Partial override; unset fields keep their current value.
struct EngineOptionsPatch {
  std::optional<bool> na_rm;
  std::optional<bool> sort;
  std::optional<int> nthreads;
  std::optional<int> verbose;
  std::optional<int> digits;
};

EngineOptions get_options();
EngineOptions set_options(const EngineOptionsPatch& patch);

// String-keyed setter used by the CLI and environment-variable layering.
// Throws std::invalid_argument on an unknown name or invalid value.
EngineOptions set_option(const std::string& name, const std::string& value);

// Per-call statistical options; unset fields resolve against the engine
// defaults at operation entry.
struct StatOptions {
  std::optional<bool> na_rm;
  std::optional<bool> use_group_names;
  std::optional<int> nthreads;
};

struct ResolvedStatOptions {
  bool na_rm;
  bool use_group_names;
  int nthreads;
};

ResolvedStatOptions resolve(const StatOptions& opts);

}  // namespace foldframe
