// Shared constants, unit conversions, and error types.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ringrc {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double speed_of_light_m_s = 299792458.0;
inline constexpr double hbar_j_s = 1.054571817e-34;

inline double db_per_cm_to_per_m(double db_per_cm) {
  return db_per_cm * 100.0 * std::log(10.0) / 10.0;
}

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }

// Invalid user input: bad config values, malformed files, infeasible settings.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical blow-up during integration; carries time and the offending component.
class integration_diverged : public std::runtime_error {
 public:
  integration_diverged(double t_s, const std::string& component)
      : std::runtime_error("integration diverged at t = " + std::to_string(t_s) +
                           " s (non-finite " + component + ")"),
        time_s(t_s),
        component_name(component) {}
  double time_s;
  std::string component_name;
};

class generation_failed : public std::runtime_error {
 public:
  explicit generation_failed(const std::string& msg) : std::runtime_error(msg) {}
};

class undefined_metric : public std::runtime_error {
 public:
  explicit undefined_metric(const std::string& msg) : std::runtime_error(msg) {}
};

class regularization_required : public std::runtime_error {
 public:
  explicit regularization_required(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

class no_optimum : public std::runtime_error {
 public:
  explicit no_optimum(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ringrc
