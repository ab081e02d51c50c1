#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eslab/errors.hpp"
#include "eslab/report.hpp"
#include "eslab/window_sieve.hpp"

namespace eslab {

/// Seed used when --seed is absent.
inline constexpr std::uint64_t kDefaultSeed = 20240611;

class UsageError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct RunConfig {
  std::string subcommand;

  std::optional<std::uint64_t> N;
  std::optional<std::uint64_t> H;
  std::optional<double> theta;
  int k = 1;
  int s = 5;
  std::string alpha = "0";
  std::vector<std::string> coeffs;
  std::uint64_t q_max = 10'000;

  // scan
  std::uint64_t farey = 20;
  std::vector<double> perturb{0.0, 0.1, 10.0};
  bool monomial = false;
  double A = 2.0;

  // hb-verify
  std::string target = "lambda";

  // nit
  double t0 = 0.0;
  std::uint64_t q = 1;
  std::optional<double> B;
  std::optional<std::int64_t> n0;

  // vmvt
  int t = 2;
  std::vector<std::uint64_t> H_list;

  // waring
  std::size_t limit = 10;
  std::size_t batch = 0;

  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  bool quiet = false;
  std::string output = "-";
  ReportFormat format = ReportFormat::kCsv;
  std::string cache_dir;

  /// Messages for the diagnostic stream (e.g. exploratory theta).
  std::vector<std::string> notes;
  /// Set when --help was requested; nothing else is meaningful then.
  std::string help;

  /// Window (N, N + H] with H explicit or floor(N^theta).
  Window window() const;
};

/// Throws UsageError naming the offending flag.
RunConfig parse_config(const std::vector<std::string>& args);

/// Sieves the configured window, going through the cache directory when one
/// is set (ESLAB_CACHE takes precedence over --cache).
ArithmeticTable load_or_sieve(const Window& window, const RunConfig& config);

struct ScanReport {
  std::vector<ReportRow> rows;
  std::uint64_t violations = 0;
  std::uint64_t flagged = 0;
  /// Set when a grid point failed; rows then end with an error record.
  std::exception_ptr failure;
};

/// Farey points a/q in [0, 1] with q <= order, in increasing order.
std::vector<std::pair<std::uint64_t, std::uint64_t>> farey_sequence(std::uint64_t order);

ScanReport run_scan(const RunConfig& config);
std::vector<ReportRow> run_sieve(const RunConfig& config);
std::vector<ReportRow> run_expsum(const RunConfig& config);
std::vector<ReportRow> run_hb_verify(const RunConfig& config);
std::vector<ReportRow> run_vmvt(const RunConfig& config);
std::vector<ReportRow> run_nit(const RunConfig& config);
/// JSON object {rho, main_term, series, integral, reps, ...}, or an array of
/// such objects when --batch is given.
std::string run_waring(const RunConfig& config);

/// Full front end: parse, run, write. Returns the process exit code
/// (0 ok, 1 internal, 2 usage, 3 budget, 4 I/O).
int run_cli(const std::vector<std::string>& args, std::ostream& diag);

}  // namespace eslab
