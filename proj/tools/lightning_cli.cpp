#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lightning/experiments.hpp"

namespace ex = lightning::experiments;

namespace {

// Moves "--config path" out of argv and splices the file's key = value pairs in
// right after the subcommand, so flags given on the command line win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      continue;
    }
    for (const auto& [key, value] : ex::read_config_file(path)) {
      from_file.push_back("--" + key);
      from_file.push_back(value);
    }
    --i;
  }
  std::size_t pos = 0;
  while (pos < args.size() && !args[pos].empty() && args[pos][0] == '-') ++pos;
  if (pos < args.size()) ++pos;
  args.insert(args.begin() + pos, from_file.begin(), from_file.end());
  return args;
}

struct Common {
  std::string output;
  std::string json;
  int seed = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--output,-o", c.output, "CSV output path (default stdout)");
  sub->add_option("--json", c.json, "JSON summary path");
  sub->add_option("--seed", c.seed, "Seed for randomized grids (grids are deterministic)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightning rational approximation experiments"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Common common;

  std::string sigma = "opt", sigma_list = "opt", N1_list, T_list, N_list, target = "power";
  std::optional<int> N2;

  ex::ApproxConfig approx;
  auto* c_approx = app.add_subcommand("approx", "Build one lightning-plus-polynomial approximation");
  c_approx->add_option("--alpha", approx.alpha);
  c_approx->add_option("--beta", approx.beta);
  c_approx->add_option("--sigma", sigma);
  c_approx->add_option("--C", approx.C);
  c_approx->add_option("--N1", approx.N1);
  c_approx->add_option("--N2", N2);
  c_approx->add_option("--target", target, "power or log");
  add_common(c_approx, common);

  ex::SweepConfig sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Convergence sweep over N1 and sigma");
  c_sweep->add_option("--alpha", sweep.alpha);
  c_sweep->add_option("--beta", sweep.beta);
  c_sweep->add_option("--sigma,--sigma_list", sigma_list, "opt or a comma list");
  c_sweep->add_option("--N1,--N1_list", N1_list);
  c_sweep->add_option("--C", sweep.C);
  c_sweep->add_option("--target", target, "power or log");
  c_sweep->add_option("--tolerance", sweep.tolerance);
  c_sweep->add_flag("--timing", sweep.timing, "Record wall-clock runtimes");
  add_common(c_sweep, common);

  ex::QuadErrConfig quad;
  auto* c_quad = app.add_subcommand("quaderr", "Trapezoid error against T on the unit arc");
  c_quad->add_option("--alpha", quad.alpha);
  c_quad->add_option("--beta", quad.beta);
  c_quad->add_option("--sigma", sigma);
  c_quad->add_option("--T", T_list);
  c_quad->add_option("--target", target, "power or log");
  c_quad->add_option("--n_arc", quad.n_arc);
  c_quad->add_option("--tolerance", quad.tolerance);
  add_common(c_quad, common);

  ex::NearOriginConfig near;
  auto* c_near = app.add_subcommand("nearorigin", "Trapezoid error scaled by e^-T near the origin");
  c_near->add_option("--alpha", near.alpha);
  c_near->add_option("--beta", near.beta);
  c_near->add_option("--sigma", sigma);
  c_near->add_option("--T", T_list);
  c_near->add_option("--max_spread", near.max_spread);
  add_common(c_near, common);

  ex::LaplaceConfig lap;
  auto* c_lap = app.add_subcommand("laplace", "Dirichlet problem on a polygon");
  c_lap->add_option("--polygon,--polygon_path", lap.polygon);
  c_lap->add_option("--data", lap.data, "re2, rez, const1 or file:<path>");
  c_lap->add_option("--sigma", sigma, "opt, percorner or a number");
  c_lap->add_option("--N,--N_list", N_list);
  c_lap->add_option("--N2", N2);
  c_lap->add_option("--target_error", lap.target_error);
  c_lap->add_option("--solution", lap.solution_out, "Write the last solution here");
  add_common(c_lap, common);

  ex::DecompConfig dec;
  auto* c_dec = app.add_subcommand("decomp", "Singular part of the slit Cauchy integral");
  c_dec->add_option("--k", dec.k);
  c_dec->add_option("--alpha", dec.alpha);
  c_dec->add_option("--W", dec.W);
  c_dec->add_option("--tolerance", dec.tolerance);
  add_common(c_dec, common);

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ex::kInvalidConfig;
  } catch (const lightning::Error& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return ex::kInvalidConfig;
  }

  std::ostringstream csv;
  ex::Result result;
  try {
    if (*c_approx) {
      approx.sigma = sigma;
      approx.N2 = N2;
      approx.target = target;
      result = ex::run_approx(approx, csv);
    } else if (*c_sweep) {
      sweep.sigmas.clear();
      for (std::size_t b = 0, e; b <= sigma_list.size(); b = e + 1) {
        e = sigma_list.find(',', b);
        if (e == std::string::npos) e = sigma_list.size();
        if (e > b) sweep.sigmas.push_back(sigma_list.substr(b, e - b));
      }
      if (sweep.sigmas.empty()) throw ex::ConfigError("empty sigma list");
      if (!N1_list.empty()) sweep.N1 = ex::parse_int_list(N1_list);
      sweep.target = target;
      result = ex::run_sweep(sweep, csv);
    } else if (*c_quad) {
      quad.sigma = sigma;
      quad.target = target;
      if (!T_list.empty()) quad.T = ex::parse_double_list(T_list);
      result = ex::run_quaderr(quad, csv);
    } else if (*c_near) {
      near.sigma = sigma;
      if (!T_list.empty()) near.T = ex::parse_double_list(T_list);
      result = ex::run_nearorigin(near, csv);
    } else if (*c_lap) {
      lap.sigma = sigma;
      lap.N2 = N2;
      if (!N_list.empty()) lap.N = ex::parse_int_list(N_list);
      result = ex::run_laplace(lap, csv);
    } else if (*c_dec) {
      result = ex::run_decomp(dec, csv);
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return ex::kInvalidConfig;
  } catch (const lightning::Error& e) {
    // Precondition violations raised by the library are configuration errors.
    std::cerr << "invalid config: " << e.what() << '\n';
    return ex::kInvalidConfig;
  }

  if (common.output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(common.output, std::ios::binary);
    if (!out) {
      std::cerr << "invalid config: cannot write " << common.output << '\n';
      return ex::kInvalidConfig;
    }
    out << csv.str();
  }
  const std::string summary = result.summary.dump(2);
  if (!common.json.empty()) {
    std::ofstream out(common.json, std::ios::binary);
    if (!out) {
      std::cerr << "invalid config: cannot write " << common.json << '\n';
      return ex::kInvalidConfig;
    }
    out << summary << '\n';
  }
  (common.output.empty() ? std::cerr : std::cout) << summary << '\n';
  if (result.exit_code == ex::kAssertionFailed) {
    std::cerr << "assertion failed: " << result.summary.dump() << '\n';
  }
  return result.exit_code;
}
