#include "foldframe/options.hpp"

#include <mutex>
#include <stdexcept>

namespace foldframe {

namespace {

std::mutex g_mutex;
EngineOptions g_options;

void validate(const EngineOptions& o) {
  if (o.nthreads < 1) throw std::invalid_argument("options: nthreads must be >= 1");
  if (o.digits < 0) throw std::invalid_argument("options: digits must be >= 0");
  if (o.verbose < 0) throw std::invalid_argument("options: verbose must be >= 0");
}

bool parse_bool(const std::string& name, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw std::invalid_argument("options: invalid boolean for " + name + ": " + value);
}

int parse_int(const std::string& name, const std::string& value) {
  try {
    size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("options: invalid integer for " + name + ": " + value);
  }
}

}  // namespace

EngineOptions get_options() {
  std::lock_guard<std::mutex> lock(g_mutex);
  return g_options;
}

EngineOptions set_options(const EngineOptionsPatch& patch) {
  std::lock_guard<std::mutex> lock(g_mutex);
  EngineOptions next = g_options;
  if (patch.na_rm) next.na_rm = *patch.na_rm;
  if (patch.sort) next.sort = *patch.sort;
  if (patch.nthreads) next.nthreads = *patch.nthreads;
  if (patch.verbose) next.verbose = *patch.verbose;
  if (patch.digits) next.digits = *patch.digits;
  validate(next);
  g_options = next;
  return next;
}

EngineOptions set_option(const std::string& name, const std::string& value) {
  EngineOptionsPatch patch;
  if (name == "na_rm") {
    patch.na_rm = parse_bool(name, value);
  } else if (name == "sort") {
    patch.sort = parse_bool(name, value);
  } else if (name == "nthreads") {
    patch.nthreads = parse_int(name, value);
  } else if (name == "verbose") {
    patch.verbose = parse_int(name, value);
  } else if (name == "digits") {
    patch.digits = parse_int(name, value);
  } else {
    throw std::invalid_argument("options: unknown option " + name);
  }
  return set_options(patch);
}

ResolvedStatOptions resolve(const StatOptions& opts) {
  EngineOptions defaults = get_options();
  ResolvedStatOptions r;
  r.na_rm = opts.na_rm.value_or(defaults.na_rm);
  r.use_group_names = opts.use_group_names.value_or(true);
  r.nthreads = opts.nthreads.value_or(defaults.nthreads);
  if (r.nthreads < 1) throw std::invalid_argument("options: nthreads must be >= 1");
  return r;
}

}  // namespace foldframe
