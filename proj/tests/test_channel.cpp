#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cfmimo/channel.hpp"
#include "cfmimo/rng.hpp"
#include "test_support.hpp"

using cfmimo::CovarianceSet;
using cfmimo::RngKey;
using cfmimo::sample_channels;

TEST_CASE("zero covariance gives zero channels") {
  CovarianceSet cov(1, 1, 3);
  cov.set(0, 0, Eigen::MatrixXcd::Zero(3, 3));
  auto eng = RngKey(1).engine();
  const auto real = sample_channels(cov, eng);
  CHECK(real.h(0, 0).norm() == 0.0);
}

TEST_CASE("scalar variance matches beta over many draws") {
  const double beta = 0.37;
  CovarianceSet cov(1, 1, 1);
  cov.set(0, 0, beta * Eigen::MatrixXcd::Identity(1, 1));
  auto eng = RngKey(2).engine();
  double acc = 0.0;
  const int draws = 100000;
  for (int d = 0; d < draws; ++d) {
    const auto real = sample_channels(cov, eng);
    acc += std::norm(real.h(0, 0)(0));
  }
  CHECK(acc / draws == doctest::Approx(beta).epsilon(0.03));
}

TEST_CASE("sample covariance converges to R") {
  auto seed_eng = RngKey(3).engine();
  const auto cov = testsupport::random_covariance_set(1, 1, 4, seed_eng);
  auto eng = RngKey(4).engine();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(4, 4);
  const int draws = 100000;
  for (int d = 0; d < draws; ++d) {
    const auto real = sample_channels(cov, eng);
    acc.noalias() += real.h(0, 0) * real.h(0, 0).adjoint();
  }
  acc /= draws;
  const double rel =
      (acc - cov.covariance(0, 0)).norm() / cov.covariance(0, 0).norm();
  CHECK(rel <= 0.05);
}

TEST_CASE("empirical mean vanishes") {
  auto seed_eng = RngKey(5).engine();
  const auto cov = testsupport::random_covariance_set(1, 1, 4, seed_eng);
  auto eng = RngKey(6).engine();
  Eigen::VectorXcd mean = Eigen::VectorXcd::Zero(4);
  const int draws = 100000;
  for (int d = 0; d < draws; ++d) {
    const auto real = sample_channels(cov, eng);
    mean += real.h(0, 0);
  }
  mean /= draws;
  // entries are CN(0, ~1/draws); 4 std errors per component
  CHECK(mean.cwiseAbs().maxCoeff() <= 4.0 / std::sqrt(double(draws)));
}

TEST_CASE("fixed seed reproduces the realization, draws are pair independent") {
  auto seed_eng = RngKey(7).engine();
  const auto cov = testsupport::random_covariance_set(3, 2, 2, seed_eng);
  auto e1 = RngKey(8).engine();
  auto e2 = RngKey(8).engine();
  const auto a = sample_channels(cov, e1);
  const auto b = sample_channels(cov, e2);
  for (int l = 0; l < 2; ++l) CHECK(a.per_ap[l] == b.per_ap[l]);

  // stacked vector matches the per-AP storage
  const auto stacked = a.stacked_ue(1);
  CHECK(stacked.segment(0, 2) == a.h(1, 0));
  CHECK(stacked.segment(2, 2) == a.h(1, 1));
}
