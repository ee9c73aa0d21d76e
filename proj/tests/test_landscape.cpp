#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qsidecar/landscape.hpp"

using namespace qsidecar;

namespace {

Landscape hand_landscape() { return Landscape{2, {1.0, -1.0}, {2.0}, 0}; }

// generate_landscape(6, 2024), utilities enumerated by an independent
// brute-force script (qubit 0 = MSB, bit 0 -> spin +1).
const std::vector<double> kGoldenN6{
    -10.895057895131341, -5.3464410136967189,  0.078530318488833517, -4.0922153981512075, -9.6954841780622125,
    -1.190056904831736,  -4.6917850982979568,  -5.9057204231421441,  -8.205653235360181,  -3.942659604757361,
    6.1702169721614544,  0.71384800468961085,  -5.973500477230572,   1.2463035451681017,  2.4324805964351439,
    -0.067077979240845353, 2.0253261205194111, 8.3170100490650487,   3.6774406694031887,  0.24976199987416314,
    2.94320479233187,    12.191699112673364,   -1.3745697926402709,  -1.8454380703734423, 1.6027404772441631,
    6.6088011549579981,  6.6571370200294018,   1.9438350996685729,   3.5531981901171008,  11.516069259626791,
    2.6377055990464227,  0.88121407048144751,  -1.6530996387251664,  -0.24055479636468902, 8.6979690947615804,
    0.39115133904739152, -3.3031709432751377,  1.0661842908811927,   1.078008656355689,   -4.271998707562644,
    -2.7915967984816485, -2.6646752069529747,  10.961753928906559,   1.369312922360568,   -3.4090890619711409,
    -0.32535707864661312, 4.3743725315611472,  -2.2612580831889888,  2.6918983518342916,  4.847510241305784,
    3.7214934205846406,  -3.8422572880185308,  0.76013200202765063,  5.8725542832949964,  -4.1801620630779199,
    -8.787102379885237,  -1.5585891109685992,  -0.68860047232891031, 2.8732879516832108,  -5.9760860077517641,
    -2.4577764197147607, 1.3690226107207832,   -3.9957884909188697,  -9.888352058557988};

}  // namespace

TEST(GenerateLandscape, SameSeedSameLandscape) {
  const auto a = generate_landscape(5, 99), b = generate_landscape(5, 99);
  EXPECT_EQ(a.h, b.h);
  EXPECT_EQ(a.j, b.j);
  EXPECT_NE(a.h, generate_landscape(5, 100).h);
}

TEST(GenerateLandscape, CoefficientCounts) {
  const auto land = generate_landscape(4, 1);
  EXPECT_EQ(land.h.size(), 4u);
  EXPECT_EQ(land.j.size(), 6u);
  EXPECT_EQ(land.candidate_count(), 16u);
  EXPECT_THROW(generate_landscape(0, 1), std::invalid_argument);
  EXPECT_THROW(generate_landscape(11, 1), std::invalid_argument);
}

TEST(GenerateLandscape, SeededUtilitiesMatchBruteForceGolden) {
  const auto u = utilities(generate_landscape(6, 2024));
  ASSERT_EQ(u.size(), kGoldenN6.size());
  for (std::size_t z = 0; z < u.size(); ++z) EXPECT_NEAR(u[z], kGoldenN6[z], 1e-12) << z;
}

TEST(Utility, HandEvaluation) {
  const auto land = hand_landscape();
  EXPECT_EQ(utility(land, 0), 2.0);   // spins (+1, +1): 1 - 1 + 2
  EXPECT_EQ(utility(land, 1), 0.0);   // (+1, -1)
  EXPECT_EQ(utility(land, 2), -4.0);  // (-1, +1)
  EXPECT_EQ(utility(land, 3), 2.0);   // (-1, -1)
  EXPECT_THROW(utility(land, 4), std::invalid_argument);
}

TEST(Utility, GlobalFlipSymmetryWithoutFields) {
  auto land = generate_landscape(6, 5);
  std::fill(land.h.begin(), land.h.end(), 0.0);
  const CandidateIndex all = (1u << 6) - 1;
  for (CandidateIndex z = 0; z <= all; ++z) EXPECT_EQ(utility(land, z), utility(land, ~z & all));
}

TEST(Utility, AllOnesWithoutCouplingsIsMinusFieldSum) {
  auto land = generate_landscape(7, 6);
  std::fill(land.j.begin(), land.j.end(), 0.0);
  const double sum_h = std::accumulate(land.h.begin(), land.h.end(), 0.0);
  EXPECT_NEAR(utility(land, (1u << 7) - 1), -sum_h, 1e-14);
}

TEST(Utility, SumsToZeroOverHypercube) {
  for (int n = 1; n <= 6; ++n) {
    const auto u = utilities(generate_landscape(n, 40 + n));
    EXPECT_NEAR(std::accumulate(u.begin(), u.end(), 0.0), 0.0, 1e-11) << "n=" << n;
  }
}

TEST(Landscape, CouplingLookupMatchesPackedOrder) {
  const auto land = generate_landscape(5, 8);
  std::size_t k = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      EXPECT_EQ(land.coupling(a, b), land.j[k]);
      EXPECT_EQ(land.coupling(b, a), land.j[k]);
      ++k;
    }
}

TEST(TopK, EdgeCases) {
  const auto land = generate_landscape(4, 7);
  const auto all = top_k_set(land, 16);
  std::vector<CandidateIndex> sorted(all);
  std::sort(sorted.begin(), sorted.end());
  for (CandidateIndex z = 0; z < 16; ++z) EXPECT_EQ(sorted[z], z);
  const auto u = utilities(land);
  EXPECT_EQ(static_cast<std::ptrdiff_t>(top_k_set(land, 1).front()), std::max_element(u.begin(), u.end()) - u.begin());
  EXPECT_THROW(top_k_set(land, 0), std::invalid_argument);
  EXPECT_THROW(top_k_set(land, 17), std::invalid_argument);
}

TEST(TopK, SeededFourQubitMatchesFullSort) {
  // Brute-force sort of generate_landscape(4, 7): best four are 2, 4, 13, 5.
  EXPECT_EQ(top_k_set(generate_landscape(4, 7), 4), (std::vector<CandidateIndex>{2, 4, 13, 5}));
  EXPECT_EQ(top_k_set(kGoldenN6, 4), (std::vector<CandidateIndex>{21, 29, 42, 34}));
}

TEST(TopK, TiesGoToSmallerIndex) {
  const std::vector<double> u{1.0, 3.0, 3.0, 0.5};
  EXPECT_EQ(top_k_set(u, 2), (std::vector<CandidateIndex>{1, 2}));
  EXPECT_EQ(rank_of(u, 1), 1u);
  EXPECT_EQ(rank_of(u, 2), 2u);
  EXPECT_EQ(rank_of(u, 3), 4u);
}

TEST(TopK, NestedInK) {
  const auto u = utilities(generate_landscape(5, 9));
  for (std::size_t k = 1; k < u.size(); ++k) {
    const auto small = top_k_set(u, k), big = top_k_set(u, k + 1);
    for (auto z : small) EXPECT_NE(std::find(big.begin(), big.end(), z), big.end());
  }
}

TEST(TopK, RankAgreesWithRanking) {
  const auto u = utilities(generate_landscape(6, 10));
  const auto order = ranking(u);
  for (std::size_t r = 0; r < order.size(); ++r) EXPECT_EQ(rank_of(u, order[r]), r + 1);
}

TEST(Regret, Values) {
  const auto land = hand_landscape();
  EXPECT_EQ(regret(land, 0), 0.0);
  EXPECT_EQ(regret(land, 3), 0.0);  // ties with the max
  EXPECT_EQ(regret(land, 2), 6.0);
  EXPECT_EQ(regret(land, 1), 2.0);
}

TEST(Regret, ZeroOnlyAtArgmaxForSeededLandscapes) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = utilities(generate_landscape(6, seed));
    const auto best = top_k_set(u, 1).front();
    for (CandidateIndex z = 0; z < u.size(); ++z) {
      if (z == best) EXPECT_EQ(regret(u, z), 0.0);
      else EXPECT_GT(regret(u, z), 0.0);
    }
  }
}

TEST(Regret, InvariantUnderConstantShift) {
  const auto u = utilities(generate_landscape(5, 11));
  std::vector<double> shifted(u);
  for (auto& x : shifted) x += 17.25;
  for (CandidateIndex z = 0; z < u.size(); ++z) EXPECT_NEAR(regret(shifted, z), regret(u, z), 1e-12);
}

TEST(Serialization, TextRoundTripIsExact) {
  const auto land = generate_landscape(6, 2024);
  const auto text = to_text(land);
  EXPECT_NE(text.find("n = 6"), std::string::npos);
  EXPECT_NE(text.find("seed = 2024"), std::string::npos);
  const auto back = landscape_from_text(text);
  EXPECT_EQ(back.n, land.n);
  EXPECT_EQ(back.seed, land.seed);
  EXPECT_EQ(back.h, land.h);
  EXPECT_EQ(back.j, land.j);
}

TEST(Serialization, RejectsIncompleteOrInconsistentText) {
  EXPECT_THROW(landscape_from_text("n = 2\nh = 1 2\n"), std::invalid_argument);
  EXPECT_THROW(landscape_from_text("n = 3\nh = 1 2\nJ = 1 2 3\n"), std::invalid_argument);
}
