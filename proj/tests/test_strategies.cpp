#include <doctest.h>

#include <cmath>
#include <random>

#include "riskalloc/error.hpp"
#include "riskalloc/strategies.hpp"

using namespace riskalloc;
using Eigen::VectorXd;

namespace {

const double kSigmaDaily = 0.1 / std::sqrt(250.0);

const std::vector<AssetMeta> kSix = {
    {"Cnsmr", Category::Industry, ""}, {"Manuf", Category::Industry, ""}, {"HiTec", Category::Industry, ""},
    {"Hlth", Category::Industry, ""},  {"BTC", Category::Crypto, ""},     {"ETH", Category::Crypto, ""}};

const std::vector<std::string> kUniverse = {"Cnsmr", "Manuf", "HiTec", "Hlth", "BTC", "ETH"};

const WeightCap kCryptoCap{"crypto", {"BTC", "ETH"}, 0.10};

VectorXd default_mix() {
  const auto v = default_relative_weights(kSix);
  return Eigen::Map<const VectorXd>(v.data(), 6);
}

}  // namespace

TEST_SUITE("strategies") {
  TEST_CASE("default mix is 90% industries and 10% crypto, split equally") {
    const VectorXd rel = default_mix();
    for (int i = 0; i < 4; ++i) CHECK(rel(i) == doctest::Approx(0.225).epsilon(1e-15));
    for (int i = 4; i < 6; ++i) CHECK(rel(i) == doctest::Approx(0.05).epsilon(1e-15));
    const auto only_crypto = default_relative_weights({kSix[4], kSix[5]});
    CHECK(only_crypto == std::vector<double>{0.5, 0.5});
    const auto only_industry = default_relative_weights({kSix[0], kSix[1]});
    CHECK(only_industry == std::vector<double>{0.5, 0.5});
  }

  TEST_CASE("caps are mapped onto the universe and dropped when absent") {
    const auto c = build_constraints(kUniverse, {kCryptoCap}, kSigmaDaily);
    REQUIRE(c.F.rows() == 1);
    CHECK(c.F.row(0).sum() == 2.0);
    CHECK(c.F(0, 4) == 1.0);
    CHECK(c.F(0, 5) == 1.0);
    CHECK(c.g(0) == 0.10);
    CHECK(build_constraints({"Cnsmr", "Hlth"}, {kCryptoCap}, kSigmaDaily).F.rows() == 0);
    CHECK(build_constraints({"BTC"}, {kCryptoCap}, kSigmaDaily).F.rows() == 1);
  }

  TEST_CASE("DD90/10 at twice the target volatility is half invested") {
    const auto c = build_constraints(kUniverse, {kCryptoCap}, kSigmaDaily);
    const auto w = dd9010_step(default_mix(), 2.0 * kSigmaDaily, c);
    for (int i = 0; i < 4; ++i) CHECK(w.w(i) == doctest::Approx(0.1125).epsilon(1e-14));
    for (int i = 4; i < 6; ++i) CHECK(w.w(i) == doctest::Approx(0.025).epsilon(1e-14));
    CHECK(w.cash == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("DD90/10 below target is fully invested with the crypto cap exactly tight") {
    const auto c = build_constraints(kUniverse, {kCryptoCap}, kSigmaDaily);
    for (double vol : {0.5 * kSigmaDaily, kSigmaDaily}) {
      const auto w = dd9010_step(default_mix(), vol, c);
      CHECK(w.cash == doctest::Approx(0.0).epsilon(1e-15));
      CHECK(w.w.sum() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK((c.F * w.w)(0) == doctest::Approx(0.10).epsilon(1e-14));
    }
  }

  TEST_CASE("DD90/10 exposure: composition fixed, antitone in volatility, default cap never binds first") {
    const auto c = build_constraints(kUniverse, {kCryptoCap}, kSigmaDaily);
    const VectorXd rel = default_mix();
    CHECK((c.F * rel)(0) == doctest::Approx(0.10).epsilon(1e-15));
    double prev = 2.0;
    for (double vol = 1e-4; vol < 0.1; vol *= 1.17) {
      const auto w = dd9010_step(rel, vol, c);
      const double e = w.exposure();
      CHECK(e <= prev);
      prev = e;
      CHECK(e == doctest::Approx(std::min(1.0, kSigmaDaily / vol)).epsilon(1e-14));
      CHECK((w.w / e - rel).cwiseAbs().maxCoeff() <= 1e-15);
      CHECK((w.w.array() >= 0.0).all());
      CHECK(w.w.sum() + w.cash == doctest::Approx(1.0).epsilon(1e-15));
    }
  }

  TEST_CASE("a tighter crypto cap binds on the diluted weights") {
    const auto c = build_constraints(kUniverse, {WeightCap{"crypto", {"BTC", "ETH"}, 0.05}}, kSigmaDaily);
    const auto w = dd9010_step(default_mix(), 0.5 * kSigmaDaily, c);
    CHECK(w.exposure() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w.w(4) + w.w(5) == doctest::Approx(0.05).epsilon(1e-14));
  }

  TEST_CASE("DD90/10 input validation") {
    const auto c = ConstraintSet::risk_only(6, kSigmaDaily);
    CHECK_THROWS_AS(dd9010_step(default_mix(), 0.0, c), Error);
    CHECK_THROWS_AS(dd9010_step(VectorXd::Constant(6, 0.5), 0.01, c), Error);
  }

  TEST_CASE("CRA step weights satisfy both caps") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(6, 8);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 8; ++j) a(i, j) = normal(rng);
    Eigen::MatrixXd sigma = 1e-4 * a * a.transpose() / 8.0;
    sigma.diagonal().array() += 1e-6;
    sigma.row(4) *= 3.0;
    sigma.col(4) *= 3.0;
    const auto c = build_constraints(kUniverse, {kCryptoCap}, kSigmaDaily);
    const auto w = cra_strategy_step(sigma, RiskAllocation::parity(6), c, std::nullopt);
    CHECK(w.w(4) + w.w(5) <= 0.10 * (1.0 + 1e-10));
    CHECK(std::sqrt(250.0 * w.w.dot(sigma * w.w)) <= 0.10 * (1.0 + 1e-10));
    CHECK(w.cash >= 0.0);
  }

  TEST_CASE("EWMA volatility waits for the minimum number of observations") {
    EwmaVolatility e(10.0, 30);
    for (int k = 0; k < 29; ++k) {
      e.observe(0.01);
      CHECK_FALSE(e.estimate().has_value());
    }
    e.observe(0.01);
    REQUIRE(e.estimate().has_value());
    CHECK(*e.estimate() == doctest::Approx(0.01).epsilon(1e-13));
  }

  TEST_CASE("GARCH volatility fits once the window fills and then rolls forward") {
    std::mt19937_64 rng(32);
    std::normal_distribution<double> normal(0.0, 0.01);
    GarchVolatility g(60, 5);
    for (int k = 0; k < 59; ++k) {
      g.observe(normal(rng));
      CHECK_FALSE(g.estimate().has_value());
    }
    for (int k = 0; k < 30; ++k) {
      g.observe(normal(rng));
      REQUIRE(g.estimate().has_value());
      CHECK(*g.estimate() > 0.0);
      CHECK(*g.estimate() < 0.05);
    }
    CHECK_THROWS_AS(GarchVolatility(10, 1), Error);
  }

  TEST_CASE("GARCH volatility on a constant stream reports the fallback") {
    GarchVolatility g(50, 1);
    for (int k = 0; k < 50; ++k) g.observe(0.0);
    CHECK(g.fallback_count() == 1);
    REQUIRE(g.estimate().has_value());
    CHECK(*g.estimate() == 0.0);
  }
}
