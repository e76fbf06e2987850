#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightning/analysis.hpp"
#include "lightning/corners.hpp"
#include "lightning/lp.hpp"

namespace lightning::experiments {

// Exit codes of the command-line driver.
inline constexpr int kPass = 0;
inline constexpr int kAssertionFailed = 1;
inline constexpr int kInvalidConfig = 2;

// Raised for configuration problems (mapped to exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// "opt" or a positive number.
struct SigmaSpec {
  bool opt = true;
  double value = 0.0;
};

SigmaSpec parse_sigma(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
lp::TargetKind parse_target(const std::string& text);

// "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

struct Result {
  int exit_code = kPass;
  nlohmann::json summary;
};

struct ApproxConfig {
  double alpha = 0.5;
  double beta = 0.0;
  std::string sigma = "opt";
  double C = 1.0;
  int N1 = 16;
  std::optional<int> N2;
  std::string target = "power";
};
Result run_approx(const ApproxConfig& cfg, std::ostream& approx_out);

struct SweepConfig {
  double alpha = 0.5;
  double beta = 0.0;
  std::vector<std::string> sigmas{"opt"};
  std::vector<int> N1{9, 16, 25, 36, 49, 64};
  double C = 1.0;
  std::string target = "power";
  double tolerance = 0.15;
  double floor = 1e-13;
  double ceiling = 1e-2;
  bool total_axis = false;
  bool timing = false;
};
// CSV rows sorted by (sigma, N1); one fit per sigma in the summary.
Result run_sweep(const SweepConfig& cfg, std::ostream& csv);
std::vector<analysis::ConvergenceRecord> lp_sweep(double alpha, double beta, double sigma,
                                                  double C, lp::TargetKind target,
                                                  const std::vector<int>& N1, bool timing);

struct QuadErrConfig {
  double alpha = 0.5;
  double beta = 1.0;
  std::string sigma = "opt";
  std::vector<double> T{4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30};
  std::string target = "power";
  int n_arc = 16;
  double tolerance = 0.2;
};
Result run_quaderr(const QuadErrConfig& cfg, std::ostream& csv);

struct NearOriginConfig {
  double alpha = 0.5;
  double beta = 1.0;
  std::string sigma = "opt";
  std::vector<double> T{5, 10, 15};
  double max_spread = 10.0;
};
Result run_nearorigin(const NearOriginConfig& cfg, std::ostream& csv);

struct LaplaceConfig {
  std::string polygon = "lalace0";  // file path or built-in name
  std::string data = "re2";
  std::string sigma = "opt";        // opt, percorner or a number
  std::vector<int> N{40, 80, 160};
  std::optional<int> N2;            // fixed degree; default ceil(N/2)
  double target_error = 1e-6;
  std::string solution_out;         // optional export of the last solution
};
Result run_laplace(const LaplaceConfig& cfg, std::ostream& csv);
geometry::Polygon resolve_polygon(const std::string& name_or_path);

struct DecompConfig {
  int k = 0;
  double alpha = 0.5;
  double W = 1.0;
  double tolerance = 1e-6;
};
Result run_decomp(const DecompConfig& cfg, std::ostream& report);

}  // namespace lightning::experiments
