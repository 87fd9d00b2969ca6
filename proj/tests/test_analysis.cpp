// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The csampling Authors

#include <doctest.h>

#include <cmath>

#include "cs/analysis.hpp"
#include "cs/rng.hpp"
#include "cs/sampling.hpp"
#include "cs/transforms.hpp"
#include "oracles.hpp"

using namespace cs;

TEST_CASE("coherence of the incoherent pairs is one") {
  CHECK(std::abs(coherence(dft(1024)).mu - 1.0) < 1e-8);
  CHECK(std::abs(coherence(compose(noiselet(1024), haar(1024))).mu - 1.0) < 1e-8);
  CHECK(std::abs(coherence(subband_system(1024, 2).op).mu - 1.0) < 1e-8);
  const auto r = coherence(scaled(identity(1024), 32.0));
  CHECK(std::abs(r.mu - 32.0) < 1e-8);
  CHECK(r.exact);
  CHECK(r.columns_swept == 1024);
}

TEST_CASE("coherence lies between one and sqrt(n)") {
  for (std::size_t n : {16, 64, 256}) {
    const double root = std::sqrt(static_cast<double>(n));
    for (const auto& U : {compose(dft(n), daub8(n)), compose(dft(n), haar(n)), compose(noiselet(n), daub8(n)),
                          compose(scaled(haar(n), root), daub8(n))}) {
      const double mu = coherence(U).mu;
      CHECK(mu >= 1.0 - 1e-12);
      CHECK(mu <= root + 1e-12);
      CHECK(std::abs(mu - oracle::materialize(U).cwiseAbs().maxCoeff()) < 1e-12);
    }
  }
}

TEST_CASE("column subsampling is flagged and bounded by the exact value") {
  const auto U = compose(dft(256), haar(256));
  const double exact = coherence(U).mu;
  const auto partial = coherence(U, 16, 3);
  CHECK_FALSE(partial.exact);
  CHECK(partial.columns_swept == 16);
  CHECK(partial.mu <= exact + 1e-12);
}

TEST_CASE("gram spectrum agrees with a dense eigensolve") {
  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 32;
    const auto U = trial % 2 ? compose(noiselet(n), daub8(n)) : dft(n);
    const std::size_t m = 4 + rng.below(20);
    const std::size_t s = 1 + rng.below(5);
    const auto omega = sample_uniform(n, m, rng());
    auto T = random_subset(n, s, rng());
    std::sort(T.begin(), T.end());
    const auto rep = gram_spectrum(U, omega, T);

    const auto D = oracle::materialize(U);
    oracle::MatrixXcd block(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(s));
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < s; ++c)
        block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            D(static_cast<Eigen::Index>(omega.indices[r]), static_cast<Eigen::Index>(T[c]));
    const oracle::MatrixXcd G =
        block.adjoint() * block / static_cast<double>(m) - oracle::MatrixXcd::Identity(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    Eigen::SelfAdjointEigenSolver<oracle::MatrixXcd> eig(G);
    const double opnorm = eig.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(std::abs(rep.deviation - opnorm) < 1e-10);
    CHECK(rep.lambda_min >= 0.0);
    CHECK(rep.lambda_min <= rep.lambda_max);
    CHECK(std::abs(rep.deviation - std::max(std::abs(rep.lambda_max - 1.0), std::abs(rep.lambda_min - 1.0))) < 1e-12);
  }
}

TEST_CASE("full sampling gives an identity gram and the total energy") {
  const auto U = compose(noiselet(64), haar(64));
  const auto all = sample_uniform(64, 64, 1);
  const auto rep = gram_spectrum(U, all, {2, 7, 40});
  CHECK(rep.deviation < 1e-12);
  CHECK(std::abs(rep.lambda_min - 1.0) < 1e-12);

  const auto x = random_model(64, 5, 2).signal();
  const auto u = uncertainty_check(x, U, all);
  CHECK(std::abs(u.energy_ratio - 64.0) < 1e-10);
  CHECK(u.bounds_hold);

  const SampleSet empty{64, {}, SamplingModel::BernoulliMOverN, 0};
  CHECK(uncertainty_check(x, U, empty).energy_ratio == 0.0);
  CHECK_THROWS_AS(uncertainty_check(RVec(64, 0.0), U, all), std::invalid_argument);
  CHECK_THROWS_AS(gram_spectrum(U, all, {}), std::invalid_argument);
}

TEST_CASE("small deviation implies the energy bounds") {
  const auto U = dft(256);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto model = random_model(256, 6, seed);
    const auto omega = sample_uniform(256, 80, seed + 1000);
    const auto rep = gram_spectrum(U, omega, model.support);
    if (rep.deviation > 0.5) continue;
    ++checked;
    CounterRng rng(seed);
    RVec x(256, 0.0);
    for (auto t : model.support) x[t] = 2.0 * rng.uniform() - 1.0;
    CHECK(uncertainty_check(x, U, omega).bounds_hold);
  }
  CHECK(checked > 100);
}

TEST_CASE("deviation tail is deterministic and independent of workers") {
  const auto U = dft(128);
  const std::vector<std::size_t> T{3, 17, 40, 99};
  const auto a = deviation_tail(U, T, 40, 200, 9, SamplingModel::BernoulliMOverN, 1);
  const auto b = deviation_tail(U, T, 40, 200, 9, SamplingModel::BernoulliMOverN, 4);
  CHECK(a.exceed == b.exceed);
  CHECK(a.mean_deviation == b.mean_deviation);
  CHECK(a.max_deviation == b.max_deviation);
  CHECK(deviation_tail(U, T, 128, 20, 1, SamplingModel::UniformM).frequency == 0.0);
}

TEST_CASE("partial fourier gram deviation concentrates once m is several times s log s") {
  const auto U = dft(1024);
  auto fraction = [&](std::size_t m) {
    int exceed = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      auto T = random_subset(1024, 15, derive_seed(seed, {0}));
      std::sort(T.begin(), T.end());
      const auto omega = sample_uniform(1024, m, derive_seed(seed, {1}));
      exceed += gram_spectrum(U, omega, T).deviation >= 0.5 ? 1 : 0;
    }
    return exceed / 500.0;
  };
  // At m = 100 the typical deviation is about 2 sqrt(s/m) > 1/2.
  CHECK(fraction(100) > 0.5);
  CHECK(fraction(300) < 0.05);
}
