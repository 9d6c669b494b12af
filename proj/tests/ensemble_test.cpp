#include <gtest/gtest.h>

#include <cmath>

#include "patina/ensemble/vote.hpp"
#include "patina/rng.hpp"

using namespace patina;
using namespace patina::ensemble;

namespace {

StreamScores make_scores(double local, double global, double fusion) {
  StreamScores s;
  s.image_id = "x";
  s.local = local;
  s.global = global;
  s.fusion = fusion;
  return s;
}

StreamScores make_bypass(double global, double fusion) {
  StreamScores s;
  s.image_id = "x";
  s.global = global;
  s.fusion = fusion;
  return s;
}

}  // namespace

TEST(Quantize, PaperBinExamples) {
  EXPECT_NEAR(quantize_score(0.814), 0.8, 1e-12);
  EXPECT_NEAR(quantize_score(0.842), 0.8, 1e-12);
  EXPECT_NEAR(quantize_score(0.85), 0.9, 1e-12);  // half rounds away from zero
  EXPECT_DOUBLE_EQ(quantize_score(0.0), 0.0);
  EXPECT_DOUBLE_EQ(quantize_score(1.0), 1.0);
}

TEST(Quantize, IdempotentAndOnGrid) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double s = rng.uniform01();
    const double q = quantize_score(s);
    EXPECT_NEAR(quantize_score(q), q, 0.0) << s;
    const double steps = q / 0.1;
    EXPECT_NEAR(steps, std::round(steps), 1e-9) << s;
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
  // Finer bins stay on their own grid.
  for (int i = 0; i < 1000; ++i) {
    const double s = rng.uniform01();
    const double q = quantize_score(s, 0.05);
    EXPECT_NEAR(quantize_score(q, 0.05), q, 0.0);
  }
}

TEST(Quantize, OutOfRangeRejected) {
  for (double s : {-0.01, 1.01}) {
    try {
      quantize_score(s);
      FAIL() << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    }
  }
  EXPECT_THROW(quantize_score(0.5, 0.0), Error);
  EXPECT_THROW(quantize_score(0.5, 1.5), Error);
}

TEST(Vote, UnanimousAndWorkedExamples) {
  VoteConfig cfg;  // defaults: 1:2:2, Discretized, bin 0.1

  EXPECT_NEAR(vote(make_scores(0.8, 0.8, 0.8), cfg), 0.8, 1e-9);
  // (0.6 + 2*0.9 + 2*0.9)/5 = 0.84 -> 0.8
  EXPECT_NEAR(vote(make_scores(0.6, 0.9, 0.9), cfg), 0.8, 1e-9);
  // Local absent: (2*0.7 + 2*0.9)/4 = 0.8
  EXPECT_NEAR(vote(make_bypass(0.7, 0.9), cfg), 0.8, 1e-9);

  cfg.mode = VoteMode::Continuous;
  // (0.814 + 2*0.842 + 2*0.842)/5 = 0.8364 -> 0.8
  EXPECT_NEAR(vote(make_scores(0.814, 0.842, 0.842), cfg), 0.8, 1e-9);
}

TEST(Vote, ModesDifferOnlyViaInputQuantization) {
  // Same inputs: discretized first rounds 0.84->0.8 twice, continuous keeps
  // the raw values; both quantize the average.
  VoteConfig cfg;
  StreamScores s = make_scores(0.55, 0.84, 0.84);
  EXPECT_NEAR(vote(s, cfg), 0.8, 1e-9);  // (0.6+1.6+1.6)/5 = 0.76 -> 0.8
  cfg.mode = VoteMode::Continuous;
  EXPECT_NEAR(vote(s, cfg), 0.8, 1e-9);  // (0.55+1.68+1.68)/5 = 0.782 -> 0.8
}

TEST(Vote, DegenerateWeightsSelectSingleStreams) {
  StreamScores s = make_scores(0.24, 0.58, 0.91);
  auto with_weights = [&](double wl, double wg, double wf) {
    VoteConfig cfg;
    cfg.w_local = wl;
    cfg.w_global = wg;
    cfg.w_fusion = wf;
    return vote(s, cfg);
  };
  EXPECT_NEAR(with_weights(1, 0, 0), 0.2, 1e-9);
  EXPECT_NEAR(with_weights(0, 1, 0), 0.6, 1e-9);
  EXPECT_NEAR(with_weights(0, 0, 1), 0.9, 1e-9);
  // Partial ensembles: w/o local = (0.6+0.9)/2 = 0.75 -> 0.8 (half away).
  EXPECT_NEAR(with_weights(0, 1, 1), 0.8, 1e-9);
  // w/o fusion = (0.2+0.6)/2 = 0.4.
  EXPECT_NEAR(with_weights(1, 1, 0), 0.4, 1e-9);
  // Equal thirds: (0.2+0.6+0.9)/3 = 0.5666 -> 0.6.
  EXPECT_NEAR(with_weights(1, 1, 1), 0.6, 1e-9);
}

TEST(Vote, NoStreamsAndBadConfigRejected) {
  VoteConfig cfg;
  cfg.w_local = 1.0;
  cfg.w_global = 0.0;
  cfg.w_fusion = 0.0;
  try {
    vote(make_bypass(0.5, 0.5), cfg);  // only streams with weight are absent
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoStreams);
  }

  VoteConfig zero;
  zero.w_local = zero.w_global = zero.w_fusion = 0.0;
  EXPECT_THROW(zero.validate(), Error);

  VoteConfig neg;
  neg.w_local = -1.0;
  EXPECT_THROW(neg.validate(), Error);

  VoteConfig bad_bin;
  bad_bin.bin = 0.0;
  EXPECT_THROW(bad_bin.validate(), Error);
}

TEST(Vote, SwappingEquallyWeightedStreamsChangesNothing) {
  Rng rng(7);
  VoteConfig cfg;
  for (int i = 0; i < 500; ++i) {
    const double l = rng.uniform01(), g = rng.uniform01(), f = rng.uniform01();
    EXPECT_DOUBLE_EQ(vote(make_scores(l, g, f), cfg), vote(make_scores(l, f, g), cfg));
  }
}

TEST(Vote, RaisingAnyInputNeverLowersOutput) {
  Rng rng(8);
  for (VoteMode mode : {VoteMode::Discretized, VoteMode::Continuous}) {
    VoteConfig cfg;
    cfg.mode = mode;
    for (int i = 0; i < 2000; ++i) {
      double l = rng.uniform01(), g = rng.uniform01(), f = rng.uniform01();
      const double base = vote(make_scores(l, g, f), cfg);
      const int which = static_cast<int>(rng.below(3));
      double& target = which == 0 ? l : which == 1 ? g : f;
      target = target + (1.0 - target) * rng.uniform01();
      const double raised = vote(make_scores(l, g, f), cfg);
      EXPECT_GE(raised, base - 1e-12) << vote_mode_name(mode);
    }
  }
}

TEST(VoteTable, IdenticalTablesQuantizeThrough) {
  ScoreTable t = {{"a", 0.5}, {"b", 0.84}, {"c", 0.123}};
  VoteConfig cfg;
  ScoreTable out = vote_table(t, t, t, cfg);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_NEAR(out["a"], 0.5, 1e-9);
  EXPECT_NEAR(out["b"], 0.8, 1e-9);
  EXPECT_NEAR(out["c"], 0.1, 1e-9);
}

TEST(VoteTable, EmptyLocalMeansBypassEverywhere) {
  ScoreTable global_t = {{"a", 0.7}, {"b", 0.3}};
  ScoreTable fusion = {{"a", 0.9}, {"b", 0.5}};
  VoteConfig cfg;
  ScoreTable out = vote_table({}, global_t, fusion, cfg);
  EXPECT_NEAR(out["a"], 0.8, 1e-9);  // (1.4+1.8)/4
  EXPECT_NEAR(out["b"], 0.4, 1e-9);  // (0.6+1.0)/4
}

TEST(VoteTable, MismatchedIdsNamed) {
  ScoreTable global_t = {{"a", 0.5}};
  ScoreTable fusion = {{"a", 0.5}, {"zz", 0.5}};
  try {
    vote_table({}, global_t, fusion, VoteConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IdMismatch);
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos) << e.what();
  }

  // A local id that is not in the global/fusion set is also an error.
  ScoreTable local = {{"ghost", 0.5}};
  ScoreTable both = {{"a", 0.5}};
  try {
    vote_table(local, both, both, VoteConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IdMismatch);
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
  }
}
