#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssc/counting.hpp"

namespace ssc::cli {

enum class Command { count, distribution, verify, bounds, code };
enum class Format { json, csv };

struct RunConfig {
  Command command = Command::count;
  std::string group;
  unsigned h = 0;
  std::optional<std::string> target;
  Format format = Format::json;
  std::optional<std::string> out_path;
  std::uint64_t max_order = 12;
  std::uint64_t brute_cap = kDefaultBruteCap;
  unsigned threads = 1;
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kMismatch = 1;
inline constexpr int kUsage = 2;

struct Hooks {
  // Applied to formula results inside `verify`; lets tests inject a mismatch.
  std::function<CountDistribution(const AbelianGroup&, unsigned, CountDistribution)> perturb;
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks = {});

/// Brute-force cap before flags: SSC_BRUTE_CAP if set and valid, else the default.
std::uint64_t default_brute_cap();

}  // namespace ssc::cli
