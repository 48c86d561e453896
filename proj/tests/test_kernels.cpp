#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "riskalloc/kernels.hpp"

using namespace riskalloc::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 0.02);
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

std::vector<Isa> vector_variants() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (isa_available(isa)) out.push_back(isa);
  return out;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar reference kernels compute the textbook loops") {
    const auto& s = table(Isa::Scalar);
    const double a[] = {1.0, 2.0, 3.0};
    const double b[] = {4.0, -5.0, 6.0};
    CHECK(s.dot(a, b, 3) == 1.0 * 4.0 - 2.0 * 5.0 + 3.0 * 6.0);
    CHECK(s.sum(a, 3) == 6.0);
    CHECK(s.sum_sq_dev(a, 3, 2.0) == 2.0);
    double state[] = {1.0, 2.0};
    const double obs[] = {3.0, 0.0};
    s.ewma_blend(state, obs, 2, 0.5);
    CHECK(state[0] == 2.0);
    CHECK(state[1] == 1.0);
    double m[] = {1.0, 0.0, 0.0, 1.0};
    const double z[] = {2.0, 4.0};
    s.rank1_ewma(m, z, 2, 0.5);
    CHECK(m[0] == 0.5 + 0.5 * 4.0);
    CHECK(m[1] == 0.5 * 8.0);
    CHECK(m[2] == 0.5 * 8.0);
    CHECK(m[3] == 0.5 + 0.5 * 16.0);
  }

  TEST_CASE("the active variant is available and selectable") {
    CHECK(isa_available(Isa::Scalar));
    CHECK(isa_available(active_isa()));
    const Isa before = active_isa();
    CHECK(set_active_isa(Isa::Scalar) == Isa::Scalar);
    CHECK(active_isa() == Isa::Scalar);
    set_active_isa(before);
    CHECK(active_isa() == before);
  }

  TEST_CASE("vector variants match the scalar reference") {
    std::mt19937_64 rng(7);
    const auto& ref = table(Isa::Scalar);
    for (Isa isa : vector_variants()) {
      CAPTURE(to_string(isa));
      const auto& k = table(isa);
      for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 250u, 1001u}) {
        CAPTURE(n);
        const auto a = random_vector(rng, n);
        const auto b = random_vector(rng, n);
        // Reductions: same sum in a different order, so agree to rounding.
        double abs_dot = 0.0, abs_sum = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          abs_dot += std::abs(a[i] * b[i]);
          abs_sum += std::abs(a[i]);
          sq += (a[i] - 0.01) * (a[i] - 0.01);
        }
        const double eps = 1e-15 * static_cast<double>(n + 1);
        CHECK(std::abs(k.dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= eps * abs_dot);
        CHECK(std::abs(k.sum(a.data(), n) - ref.sum(a.data(), n)) <= eps * abs_sum);
        CHECK(std::abs(k.sum_sq_dev(a.data(), n, 0.01) - ref.sum_sq_dev(a.data(), n, 0.01)) <= eps * sq);

        // Elementwise kernels: bit-identical.
        auto s1 = a, s2 = a;
        ref.ewma_blend(s1.data(), b.data(), n, 0.93303);
        k.ewma_blend(s2.data(), b.data(), n, 0.93303);
        CHECK(s1 == s2);
        if (n <= 63) {
          std::vector<double> m1(n * n), m2;
          for (std::size_t i = 0; i < n * n; ++i) m1[i] = 0.001 * static_cast<double>(i % 7);
          m2 = m1;
          ref.rank1_ewma(m1.data(), a.data(), n, 0.99);
          k.rank1_ewma(m2.data(), a.data(), n, 0.99);
          CHECK(m1 == m2);
        }
      }
    }
  }

  TEST_CASE("span wrappers dispatch to the active table") {
    const std::vector<double> a = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(sum(a) == doctest::Approx(15.0).epsilon(1e-15));
    CHECK(dot(a, a) == doctest::Approx(55.0).epsilon(1e-15));
    CHECK(sum_sq_dev(a, 3.0) == doctest::Approx(10.0).epsilon(1e-15));
  }
}
