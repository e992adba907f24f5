// Copyright 2026 The lowlight-rppg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rppg/selection.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rppg/error.hpp"

namespace rppg {
namespace {

using testing::sine;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kConfigError;
}

ReferenceHrState state_at(double f_r, double sigma) {
  ReferenceHrState s;
  s.f_r = f_r;
  s.sigma_fr = sigma;
  s.history = {f_r};
  return s;
}

TEST(DominantFrequency, SingleTone) {
  EXPECT_NEAR(dominant_frequency(sine(1.2, 30.0, 300), 30.0), 1.2, 0.01);
}

TEST(DominantFrequency, BandRestrictionWins) {
  const auto x = testing::add(sine(0.3, 30.0, 300, 10.0), sine(1.0, 30.0, 300, 1.0));
  // Leakage from the strong out-of-band tone shifts the peak within one native bin.
  EXPECT_NEAR(dominant_frequency(x, 30.0), 1.0, 30.0 / 300.0);
  EXPECT_NEAR(dominant_frequency(x, 30.0), testing::dft_argmax(x, 30.0, 8192, 0.7, 4.0), 1e-12);
}

TEST(DominantFrequency, MatchesDenseDft) {
  const auto x = testing::add(sine(1.1, 30.0, 300, 1.0), sine(2.0, 30.0, 300, 0.8));
  const double got = dominant_frequency(x, 30.0);
  EXPECT_NEAR(got, 1.1, 0.01);
  EXPECT_NEAR(got, testing::dft_argmax(x, 30.0, 8192, 0.7, 4.0), 1e-12);
}

TEST(DominantFrequency, ResolutionAndErrors) {
  const auto x = sine(1.2345, 30.0, 300);
  EXPECT_NEAR(dominant_frequency(x, 30.0), 1.2345, 30.0 / 8192.0);
  EXPECT_EQ(code_of([] { dominant_frequency(std::vector<double>(300, 0.0), 30.0); }),
            ErrorCode::kZeroSignal);
  EXPECT_EQ(code_of([] { dominant_frequency(sine(1.2, 30.0, 59), 30.0); }),
            ErrorCode::kSeriesTooShort);
}

TEST(UpdateReference, FirstWindowKeepsInitialSigma) {
  const ReferenceHrState s = update_reference({}, sine(1.2, 30.0, 300), 30.0);
  EXPECT_NEAR(s.f_r, 1.2, 0.01);
  EXPECT_EQ(s.sigma_fr, 0.05);
  EXPECT_EQ(s.history.size(), 1u);
}

TEST(UpdateReference, SigmaFromHistory) {
  ReferenceHrState s;
  s = update_reference(s, sine(1.2, 30.0, 300), 30.0);
  s = update_reference(s, sine(1.2, 30.0, 300), 30.0);
  s = update_reference(s, sine(1.2, 30.0, 300), 30.0);
  EXPECT_EQ(s.sigma_fr, kSigmaFloorHz);

  EXPECT_NEAR(sample_stddev(std::vector<double>{1.1, 1.2, 1.3}), 0.1, 1e-12);
  EXPECT_EQ(sample_stddev(std::vector<double>{1.2, 1.2, 1.2}), 0.0);
}

TEST(UpdateReference, PropagatesZeroSignal) {
  EXPECT_EQ(code_of([] { update_reference({}, std::vector<double>(300, 0.0), 30.0); }),
            ErrorCode::kZeroSignal);
}

TEST(MaskDecision, TruthTable) {
  auto d = mask_decision(1.25, 1.2, 0.05);
  EXPECT_TRUE(d.accepted);
  EXPECT_EQ(d.reason, MaskReason::kFundamentalMatch);

  d = mask_decision(2.4, 1.2, 0.05);
  EXPECT_TRUE(d.accepted);
  EXPECT_EQ(d.reason, MaskReason::kHarmonicMatch);

  d = mask_decision(3.0, 1.2, 0.05);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(d.reason, MaskReason::kWindowReject);

  d = mask_decision(7.0, 3.5, 0.05);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(d.reason, MaskReason::kBandReject);

  EXPECT_EQ(to_string(MaskReason::kHarmonicMatch), "harmonic-match");
}

TEST(MaskDecision, MatchesIndependentPredicate) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> fi(0.0, 8.0), fr(0.7, 4.0), sg(0.005, 0.5);
  for (int n = 0; n < 1000; ++n) {
    const double f_i = fi(rng), f_r = fr(rng), sigma = sg(rng);
    const MaskDecision d = mask_decision(f_i, f_r, sigma);
    ASSERT_EQ(d.accepted, testing::mask_predicate(f_i, f_r, sigma))
        << f_i << " " << f_r << " " << sigma;
    if (d.accepted) {
      EXPECT_GE(f_i, 0.7);
      EXPECT_LE(f_i, 4.0);
    }
  }
}

TEST(MaskDecision, MonotoneInSigma) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> fi(0.0, 5.0), fr(0.7, 4.0), sg(0.005, 0.3);
  for (int n = 0; n < 1000; ++n) {
    const double f_i = fi(rng), f_r = fr(rng), sigma = sg(rng);
    if (mask_decision(f_i, f_r, sigma).accepted)
      for (double grow : {1.01, 1.5, 3.0}) EXPECT_TRUE(mask_decision(f_i, f_r, sigma * grow).accepted);
  }
}

TEST(SpectralMask, AmplitudeInvariantAndHarmonicPairs) {
  const ReferenceHrState s = state_at(1.1, 0.05);
  std::vector<CandidateComponent> c(3);
  c[0] = {sine(1.12, 30.0, 300), 1.12, 5.0};
  c[1] = {sine(2.24, 30.0, 300), 2.24, 3.0};
  c[2] = {sine(3.3, 30.0, 300), 3.3, 1.0};
  const auto d1 = spectral_mask(c, s);
  for (auto& cc : c) {
    for (double& v : cc.series) v *= 100.0;
    cc.singular_value *= 100.0;
  }
  const auto d2 = spectral_mask(c, s);
  ASSERT_EQ(d1.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d1[i].accepted, d2[i].accepted);
  EXPECT_TRUE(d1[0].accepted);
  EXPECT_TRUE(d1[1].accepted);
  EXPECT_FALSE(d1[2].accepted);
}

TEST(SelectCandidates, CleanSineKeepsLeadingPair) {
  const ssa::Decomposition d = ssa::decompose(sine(1.2, 30.0, 300), 100, 10);
  const Selection sel = select_candidates(d, 30.0, state_at(1.2, 0.05));
  EXPECT_FALSE(sel.used_fallback);
  ASSERT_EQ(sel.accepted.size(), 2u);
  for (const auto& c : sel.accepted) EXPECT_NEAR(c.dominant_freq, 1.2, 0.02);
  EXPECT_EQ(sel.accepted[0].singular_value, d.singular_values[0]);
  EXPECT_EQ(sel.accepted[1].singular_value, d.singular_values[1]);
}

TEST(SelectCandidates, DriftRejectedOnBand) {
  const auto x = testing::add(sine(1.2, 30.0, 300), sine(0.4, 30.0, 300, 5.0));
  const ssa::Decomposition d = ssa::decompose(x, 100, 10);
  const Selection sel = select_candidates(d, 30.0, state_at(1.2, 0.05));
  EXPECT_FALSE(sel.used_fallback);
  std::size_t band_rejects = 0;
  for (std::size_t p = 0; p < sel.inspected.size(); ++p) {
    const double oracle = testing::dft_argmax(sel.inspected[p].series, 30.0, 8192, 0.0, 15.0);
    EXPECT_NEAR(sel.inspected[p].dominant_freq, oracle, 1e-12);
    if (std::abs(oracle - 0.4) < 0.05) {
      EXPECT_EQ(sel.decisions[p].reason, MaskReason::kBandReject);
      ++band_rejects;
    }
  }
  EXPECT_EQ(band_rejects, 2u);
  for (const auto& c : sel.accepted) EXPECT_NEAR(c.dominant_freq, 1.2, 0.02);
}

TEST(SelectCandidates, FallbackToNearest) {
  const auto x = testing::add(sine(3.9, 30.0, 300, 2.0), sine(3.6, 30.0, 300, 1.0));
  const ssa::Decomposition d = ssa::decompose(x, 100, 10);
  const Selection sel = select_candidates(d, 30.0, state_at(1.2, 0.05));
  EXPECT_TRUE(sel.used_fallback);
  ASSERT_EQ(sel.accepted.size(), 1u);
  for (const auto& c : sel.inspected)
    EXPECT_LE(std::abs(sel.accepted[0].dominant_freq - 1.2), std::abs(c.dominant_freq - 1.2));
}

TEST(SelectCandidates, SecChnLimitsInspection) {
  const ssa::Decomposition d = ssa::decompose(testing::white_noise(300, 1), 100, 30);
  EXPECT_EQ(select_candidates(d, 30.0, state_at(1.2, 0.05), 10).inspected.size(), 10u);
  EXPECT_EQ(select_candidates(d, 30.0, state_at(1.2, 0.05), 4).inspected.size(), 4u);
}

TEST(SelectCandidates, EmptyDecomposition) {
  const ssa::Decomposition d;
  EXPECT_EQ(code_of([&] { select_candidates(d, 30.0, state_at(1.2, 0.05)); }),
            ErrorCode::kNoComponents);
}

}  // namespace
}  // namespace rppg
