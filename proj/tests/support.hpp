#pragma once

// Helpers shared by the unit tests.

#include <Eigen/Dense>
#include <filesystem>
#include <random>
#include <string>

namespace testsupport {

/// Random symmetric positive definite matrix with daily-return-like scale.
inline Eigen::MatrixXd random_pd(std::mt19937_64& rng, Eigen::Index n, double scale = 1e-4) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(n, n + 2);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  Eigen::MatrixXd s = scale * (a * a.transpose() / static_cast<double>(n + 2));
  s.diagonal().array() += 0.05 * scale;
  return 0.5 * (s + s.transpose());
}

/// Random strictly positive vector on the simplex.
inline Eigen::VectorXd random_simplex(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v / v.sum();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("riskalloc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
