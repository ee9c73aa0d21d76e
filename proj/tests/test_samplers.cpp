#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qsidecar/samplers.hpp"
#include "test_util.hpp"

using namespace qsidecar;
using qsidecar::testing::binomial_se;
using qsidecar::testing::dense_circuit_distribution;

namespace {

/// Exact softmax by enumeration, written independently of exp_family.
std::vector<double> softmax_oracle(const std::vector<double>& u, double tau) {
  std::vector<double> w(u.size());
  double z = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) z += w[i] = std::exp(u[i] / tau);
  for (auto& x : w) x /= z;
  return w;
}

double hit_rate(const Landscape& land, std::size_t trials, auto&& select) {
  const auto top = top_k_set(land, kTopK);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const CandidateIndex z = select();
    hits += std::find(top.begin(), top.end(), z) != top.end();
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace

TEST(UniformSelect, TopFourRateAtFourQubits) {
  const auto land = generate_landscape(4, 1);
  Rng rng(2);
  const double rate = hit_rate(land, 10000, [&] { return uniform_select(land, rng); });
  EXPECT_LE(std::abs(rate - 0.25), 5 * binomial_se(0.25, 10000));
}

TEST(UniformSelect, TopFourRateAtEightQubits) {
  const auto land = generate_landscape(8, 3);
  Rng rng(4);
  const double rate = hit_rate(land, 10000, [&] { return uniform_select(land, rng); });
  EXPECT_LE(std::abs(rate - 4.0 / 256), 5 * binomial_se(4.0 / 256, 10000));
}

TEST(UniformSelect, TwoCandidatesSplitEvenly) {
  const auto land = generate_landscape(1, 5);
  Rng rng(6);
  int ones = 0;
  for (int t = 0; t < 10000; ++t) ones += uniform_select(land, rng) == 1;
  EXPECT_LE(std::abs(ones / 10000.0 - 0.5), 5 * binomial_se(0.5, 10000));
}

TEST(NoisySoftmax, ColdNoiselessConcentratesOnArgmax) {
  SamplerConfig cfg;
  cfg.softmax_temperature = 0.01;
  cfg.softmax_noise_sigma = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto u = utilities(generate_landscape(6, seed));
    Rng rng(seed);
    const auto dist = noisy_softmax_distribution(u, cfg, rng);
    EXPECT_GE(dist[top_k_set(u, 1).front()], 0.999) << seed;
  }
}

TEST(NoisySoftmax, HotLimitIsUniform) {
  SamplerConfig cfg;
  cfg.softmax_temperature = 1e6;
  const auto land = generate_landscape(6, 7);
  Rng rng(8);
  for (double p : noisy_softmax_distribution(utilities(land), cfg, rng)) EXPECT_NEAR(p, 1.0 / 64, 1e-6);
  Rng rng2(9);
  const double rate = hit_rate(land, 10000, [&] { return noisy_softmax_select(land, cfg, rng2); });
  EXPECT_LE(std::abs(rate - 4.0 / 64), 5 * binomial_se(4.0 / 64, 10000));
}

TEST(NoisySoftmax, FrequenciesMatchExactSoftmax) {
  SamplerConfig cfg;
  cfg.softmax_temperature = 1.0;
  cfg.softmax_noise_sigma = 0.0;
  const auto land = generate_landscape(4, 7);
  const auto exact = softmax_oracle(utilities(land), 1.0);
  Rng rng(10);
  const int trials = 100000;
  std::vector<int> count(16, 0);
  for (int t = 0; t < trials; ++t) ++count[noisy_softmax_select(land, cfg, rng)];
  for (std::size_t z = 0; z < 16; ++z)
    EXPECT_LE(std::abs(count[z] / static_cast<double>(trials) - exact[z]), 5 * binomial_se(exact[z], trials) + 1e-12)
        << z;
}

TEST(NoisySoftmax, MonotoneInUtilityWithoutNoise) {
  SamplerConfig cfg;
  cfg.softmax_noise_sigma = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const auto u = utilities(generate_landscape(n, 100 + n));
    Rng rng(1);
    const auto p = noisy_softmax_distribution(u, cfg, rng);
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = 0; b < u.size(); ++b)
        if (u[a] > u[b]) {
          EXPECT_GT(p[a], p[b]);
        }
  }
}

TEST(Distributions, NormalizedAndNonnegative) {
  const SamplerConfig cfg;
  Rng rng(11);
  for (int n = 1; n <= 8; ++n) {
    const auto u = utilities(generate_landscape(n, rng));
    for (const auto& d : {noisy_softmax_distribution(u, cfg, rng), sidecar_distribution(u, cfg, rng),
                          qaoa_distribution(u, cfg.qaoa_fixed)}) {
      EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-12);
      EXPECT_GE(*std::min_element(d.begin(), d.end()), 0.0);
    }
  }
}

TEST(Sidecar, CoincidesWithSoftmaxWhenParametersMatch) {
  SamplerConfig cfg;
  cfg.softmax_temperature = 0.5;
  cfg.sidecar_sharpness = 2.0;
  cfg.sidecar_noise_sigma = cfg.softmax_noise_sigma;
  const auto u = utilities(generate_landscape(6, 12));
  Rng a(13), b(13);
  EXPECT_EQ(noisy_softmax_distribution(u, cfg, a), sidecar_distribution(u, cfg, b));
  const auto land = generate_landscape(6, 12);
  Rng c(14), d(14);
  for (int t = 0; t < 200; ++t) EXPECT_EQ(noisy_softmax_select(land, cfg, c), abstract_sidecar_select(land, cfg, d));
}

TEST(Sidecar, BeatsBaselinesOnEightQubitTrials) {
  const SamplerConfig cfg;
  double hits[3] = {}, reg[3] = {};
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const auto land = generate_landscape(8, derive_seed(77, 1, t));
    const auto u = utilities(land);
    Rng rng(derive_seed(77, 2, t));
    const CandidateIndex picks[3] = {uniform_select(land, rng), noisy_softmax_select(land, cfg, rng),
                                     abstract_sidecar_select(land, cfg, rng)};
    for (int k = 0; k < 3; ++k) {
      const auto rec = make_trial_record(t, "m", u, picks[k]);
      hits[k] += rec.top4_hit;
      reg[k] += rec.regret;
    }
  }
  EXPECT_GT(hits[2], hits[1]);
  EXPECT_GT(hits[2], hits[0]);
  EXPECT_GT(hits[1], hits[0]);
  EXPECT_LT(reg[2], reg[1]);
  EXPECT_LT(reg[2], reg[0]);
  EXPECT_LT(reg[1], reg[0]);
}

TEST(SamplerConfig, ValidationAndDominance) {
  SamplerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_TRUE(cfg.sidecar_dominates_softmax());
  cfg.sidecar_noise_sigma = cfg.softmax_noise_sigma;
  EXPECT_FALSE(cfg.sidecar_dominates_softmax());
  cfg.softmax_temperature = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  SamplerConfig neg;
  neg.sidecar_sharpness = -1.0;
  EXPECT_THROW(neg.validate(), std::invalid_argument);
}

TEST(TrialRecord, RankAndHitAgree) {
  const auto u = utilities(generate_landscape(5, 15));
  for (CandidateIndex z = 0; z < u.size(); ++z) {
    const auto rec = make_trial_record(0, "uniform", u, z);
    EXPECT_GE(rec.rank, 1u);
    EXPECT_LE(rec.rank, u.size());
    EXPECT_EQ(rec.top4_hit, rec.rank <= 4);
    EXPECT_GE(rec.regret, 0.0);
  }
}

TEST(Samplers, ReproducibleBySeed) {
  const SamplerConfig cfg;
  const auto land = generate_landscape(6, 16);
  for (int k = 0; k < 4; ++k) {
    Rng a(17), b(17);
    for (int t = 0; t < 50; ++t) {
      switch (k) {
        case 0: EXPECT_EQ(uniform_select(land, a), uniform_select(land, b)); break;
        case 1: EXPECT_EQ(noisy_softmax_select(land, cfg, a), noisy_softmax_select(land, cfg, b)); break;
        case 2: EXPECT_EQ(abstract_sidecar_select(land, cfg, a), abstract_sidecar_select(land, cfg, b)); break;
        default: EXPECT_EQ(qaoa_select(land, cfg.qaoa_fixed, a, 3).shots, qaoa_select(land, cfg.qaoa_fixed, b, 3).shots);
      }
    }
  }
}

TEST(QaoaSelect, ZeroAnglesGiveUniformTopFourMass) {
  Rng rng(18);
  for (int n : {2, 4, 6, 8}) {
    const auto sel = qaoa_select(generate_landscape(n, 19), {0.0, 0.0}, rng);
    EXPECT_NEAR(sel.top4_mass, 4.0 / static_cast<double>(1 << n), 1e-14);
  }
}

TEST(QaoaSelect, TopFourMassMatchesDenseOracle) {
  const SamplerConfig cfg;
  const auto land = generate_landscape(4, 20);
  Rng rng(21);
  const auto sel = qaoa_select(land, cfg.qaoa_fixed, rng, 10);
  const auto oracle = dense_circuit_distribution(land, cfg.qaoa_fixed);
  double mass = 0.0;
  for (auto z : top_k_set(land, 4)) mass += oracle[z];
  EXPECT_NEAR(sel.top4_mass, mass, 1e-12);
  EXPECT_EQ(sel.shots.size(), 10u);
  EXPECT_EQ(sel.selected, sel.shots.front());
}

TEST(QaoaSelect, FixedParametersBeatUniformOnAverage) {
  const SamplerConfig cfg;
  for (int n : {4, 6, 8}) {
    double mass = 0.0;
    Rng rng(22);
    for (int l = 0; l < 50; ++l) mass += qaoa_select(generate_landscape(n, derive_seed(5, n, l)), cfg.qaoa_fixed, rng).top4_mass;
    EXPECT_GT(mass / 50, 4.0 / static_cast<double>(1 << n)) << "n=" << n;
  }
}

TEST(GridTune, SinglePointGrid) {
  const auto land = generate_landscape(5, 23);
  const auto u = utilities(land);
  const std::vector<double> zero{0.0};
  const auto res = qaoa_grid_tune(land, zero, zero);
  EXPECT_EQ(res.params.gamma, 0.0);
  EXPECT_EQ(res.params.beta, 0.0);
  EXPECT_EQ(res.points_scanned, 1u);
  EXPECT_NEAR(res.expected_utility, std::accumulate(u.begin(), u.end(), 0.0) / u.size(), 1e-12);
}

TEST(GridTune, AppendsOriginWhenMissing) {
  const auto land = generate_landscape(4, 24);
  const std::vector<double> g{-0.5, -0.25}, b{0.2, 0.4};
  EXPECT_EQ(qaoa_grid_tune(land, g, b).points_scanned, 5u);
}

TEST(GridTune, NeverWorseThanUniformInExpectedUtility) {
  const SamplerConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto land = generate_landscape(5, seed);
    const auto u = utilities(land);
    const double mean = std::accumulate(u.begin(), u.end(), 0.0) / u.size();
    EXPECT_GE(qaoa_grid_tune(land, cfg.grid_gamma, cfg.grid_beta).expected_utility, mean - 1e-12);
  }
}

TEST(GridTune, FirstMaximumWinsTies) {
  // A constant landscape makes every grid point tie at <U> = c.
  const Landscape flat{2, {0.0, 0.0}, {0.0}, 0};
  const std::vector<double> g{-1.0, -0.5}, b{0.3, 0.6};
  const auto res = qaoa_grid_tune(flat, g, b);
  EXPECT_EQ(res.params.gamma, -1.0);
  EXPECT_EQ(res.params.beta, 0.3);
}

TEST(GridTune, TunedTopFourMassUsuallyBeatsFixed) {
  const SamplerConfig cfg;
  int wins = 0;
  double tuned_sum = 0.0, fixed_sum = 0.0;
  Rng rng(25);
  for (int l = 0; l < 50; ++l) {
    const auto land = generate_landscape(6, derive_seed(2024, 6, l));
    const auto tuned = qaoa_grid_tune(land, cfg.grid_gamma, cfg.grid_beta);
    const double fixed = qaoa_select(land, cfg.qaoa_fixed, rng).top4_mass;
    wins += tuned.top4_mass >= fixed;
    tuned_sum += tuned.top4_mass;
    fixed_sum += fixed;
    EXPECT_GE(tuned.top4_optimal_mass, tuned.top4_mass);
  }
  EXPECT_GE(wins, 30);
  EXPECT_GT(tuned_sum, fixed_sum);
}

TEST(Linspace, Endpoints) {
  const auto g = linspace(-1.0, 0.0, 25);
  ASSERT_EQ(g.size(), 25u);
  EXPECT_EQ(g.front(), -1.0);
  EXPECT_EQ(g.back(), 0.0);
  EXPECT_EQ(linspace(3.0, 4.0, 1), std::vector<double>{3.0});
  EXPECT_THROW(linspace(0.0, 1.0, 0), std::invalid_argument);
}
