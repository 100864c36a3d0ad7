#pragma once

#include "powermix/table.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace powermix::cli {

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2, kIo = 3, kDomain = 4 };

/// Bad flags or arguments that the parser itself cannot catch.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// "a:b:steps", endpoints inclusive, steps = number of points.
std::vector<double> parse_real_grid(const std::string& text);
/// "re_a:re_b:steps,im"
std::vector<std::complex<double>> parse_complex_grid(const std::string& text);
/// "2,3,1.5+1.5i,-2i"
std::vector<std::complex<double>> parse_points(const std::string& text);

struct Result {
    Table table;
    int exit_code = kOk;
};

Table cmd_sample(const std::string& spec, std::size_t count, std::uint64_t seed);

Table cmd_pdf(const std::string& spec, const std::vector<double>& grid);

/// method: a, b, c, mc or all. `all` adds cross-method deltas and fails (exit 1)
/// when a pair differs by more than max(1e-10, 4 SE).
Result cmd_moments(const std::string& spec, int k_max, const std::string& method,
                  std::uint64_t seed, std::size_t mc_samples);

struct VerifyOptions {
    std::vector<std::string> ids;
    bool all = false;
    std::optional<std::size_t> n;
    std::uint64_t seed = 42;
    /// JSON file with user scenarios.
    std::optional<std::string> config;
    /// Leave wall-time cells empty, for byte-stable output.
    bool wall_time = true;
};
Result cmd_verify(const VerifyOptions& opt);

struct StieltjesOptions {
    std::string identity;
    std::string spec;
    std::optional<std::string> claimed;
    std::vector<std::complex<double>> points;
    std::optional<double> tolerance;
    /// lemma21 only
    double x1 = 0.0;
    double x2 = 1.0;
    std::vector<int> orders{1, 2, 3, 4, 5};
};
Result cmd_stieltjes(const StieltjesOptions& opt);

/// Default points for an identity when no grid is given.
std::vector<std::complex<double>> default_points(const std::string& identity);

std::string timestamp_utc();

}  // namespace powermix::cli
