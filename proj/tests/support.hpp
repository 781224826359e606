// Helpers shared by the unit and acceptance binaries: reference solvers and
// generators written independently of the library code, plus subprocess and
// file utilities for driving the installed CLI.
#pragma once

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

// Dense linear solve by Gaussian elimination with partial pivoting. Kept
// deliberately naive so it shares no structure with the library's solver.
inline std::vector<double> gaussian_solve(std::vector<std::vector<double>> a,
                                          std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular system in gaussian_solve");
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ri = n; ri-- > 0;) {
    double acc = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri][c] * x[c];
    x[ri] = acc / a[ri][ri];
  }
  return x;
}

// Ridge solution via the explicit normal equations and gaussian_solve:
// (X^T X + lambda I) w = X^T y, X given row-major.
inline std::vector<double> ridge_oracle(const std::vector<double>& x, std::size_t rows,
                                        std::size_t cols, const std::vector<double>& y,
                                        double lambda) {
  std::vector<std::vector<double>> a(cols, std::vector<double>(cols, 0.0));
  std::vector<double> b(cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < rows; ++r) s += x[r * cols + i] * x[r * cols + j];
      a[i][j] = s;
    }
    a[i][i] += lambda;
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += x[r * cols + i] * y[r];
    b[i] = s;
  }
  return gaussian_solve(std::move(a), std::move(b));
}

// Tenth-order auto-regressive recurrence on a given input sequence with zero
// history, returning the one-step-ahead targets y(1)..y(len). The update is
// written as the canonical expression with left-to-right association, so the
// comparison against the library generator is bitwise: the recurrence is
// unstable and any change to a coefficient, the window, or the association
// order diverges visibly within a few thousand symbols.
inline std::vector<double> narma10_oracle(const std::vector<double>& u) {
  const std::size_t len = u.size();
  std::vector<double> y(len + 1, 0.0);
  for (std::size_t n = 0; n < len; ++n) {
    double sum = 0.0;
    for (std::size_t i = (n >= 9 ? n - 9 : 0); i <= n; ++i) sum += y[i];
    double uu = (n >= 9) ? u[n - 9] * u[n] : 0.0;
    y[n + 1] = 0.3 * y[n] + 0.05 * y[n] * sum + 1.5 * uu + 0.1;
  }
  return std::vector<double>(y.begin() + 1, y.end());
}

// Direct convolution of PAM-4 symbols with the 10-tap channel, as an explicit
// output-indexed sum (the library builds it tap-by-tap).
inline std::vector<double> channel_convolution_oracle(const std::vector<double>& sym) {
  static const int offsets[10] = {2, 1, 0, -1, -2, -3, -4, -5, -6, -7};
  static const double gains[10] = {0.08, -0.12, 1.0,  0.18, -0.1,
                                   0.091, -0.05, 0.04, 0.03, 0.01};
  const long long len = static_cast<long long>(sym.size());
  std::vector<double> q(sym.size(), 0.0);
  for (long long n = 0; n < len; ++n) {
    double acc = 0.0;
    for (int t = 0; t < 10; ++t) {
      long long k = n + offsets[t];
      if (k >= 0 && k < len) acc += gains[t] * sym[static_cast<std::size_t>(k)];
    }
    q[static_cast<std::size_t>(n)] = acc;
  }
  return q;
}

inline std::string cli_path() { return RINGRC_CLI_PATH; }

inline std::string config_dir() { return RINGRC_CONFIG_DIR; }

// Runs the CLI with the given arguments, appending stdout+stderr to a capture
// file, and returns the process exit code.
inline int run_cli(const std::string& args, const std::string& capture_path) {
  std::string cmd = std::string(RINGRC_CLI_PATH) + " " + args + " > " + capture_path + " 2>&1";
  int raw = std::system(cmd.c_str());
  if (raw == -1) throw std::runtime_error("failed to launch CLI process");
  if (!WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace testsupport
