#pragma once

#include <cstdint>
#include <string>

namespace ridgepois {

enum class Centering { Population, Empirical };

std::string to_string(Centering mode);
Centering parse_centering(const std::string& text);

/// One (grid point, trial) row joining empirical and theoretical values.
///
/// The trailing status/warning/dataset columns flag failed trials,
/// conditioning warnings and the data source (with MNIST preprocessing).
struct SweepRecord {
  std::uint64_t grid_index = 0;
  std::uint64_t trial_index = 0;
  double c_target = 0.0;
  double c_effective = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  double v_norm = 0.0;
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double mu_emp = 0.0;
  double sigma2_emp = 0.0;
  double eta_emp_mc = 0.0;
  double eta_emp_plugin = 0.0;
  double mu_theory = 0.0;
  double sigma2_theory = 0.0;
  double eta_theory = 0.0;
  double C_theory = 0.0;
  Centering centering_mode = Centering::Population;
  double wall_time_ms = 0.0;
  std::string status = "ok";
  std::string warning;
  std::string dataset = "synthetic";

  bool is_error() const { return status != "ok"; }

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

}  // namespace ridgepois
