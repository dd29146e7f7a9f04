#pragma once

#include "fracvar/fracops.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fracvar {

enum class Expect { MachineZero, Decreasing, BoundedAway };

const char *to_string(Expect tag);

struct ReportRow {
  std::string scenario;
  std::size_t n = 0;
  std::string orders; // ';'-separated
  std::string residual;
  double value = 0.0;
  Expect tag = Expect::MachineZero;
};

struct ScenarioConfig {
  std::string scenario;
  std::pair<double, double> interval{0.0, 1.0}; // every axis of the box
  std::size_t n = 0;                            // 0: scenario default
  std::vector<FracOrder> orders;                // empty: scenario default
  std::size_t levels = 1;
  std::uint64_t seed = 1;
  std::filesystem::path output;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::size_t default_n;
};

const std::vector<ScenarioInfo> &scenarios();
const ScenarioInfo *find_scenario(const std::string &name);

/// Throws UsageError for unknown scenarios and invalid settings.
void validate(const ScenarioConfig &config);

/// Runs config.levels grids (n, 2n, 4n, ...). Rows come in a fixed order.
std::vector<ReportRow> run_scenario(const ScenarioConfig &config);

/// CSV with header `scenario,n,orders,residual,value,tag`; values printed
/// with 17 significant digits.
void write_report(const std::vector<ReportRow> &rows, std::ostream &out);
void write_report(const std::vector<ReportRow> &rows,
                  const std::filesystem::path &path);

struct Verdict {
  bool pass = true;
  std::vector<std::string> failures; // one line per failing row
};

/// machine-zero: value <= 1e-10. decreasing: each successive ratio within a
/// (scenario, orders, residual) series >= 1.3. bounded-away: last value of
/// the series >= 1e-9.
Verdict verdict(const std::vector<ReportRow> &rows);

inline constexpr double kMachineZero = 1e-10;
inline constexpr double kMinRatio = 1.3;
inline constexpr double kBoundedAway = 10.0 * kMachineZero;

} // namespace fracvar
