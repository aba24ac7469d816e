#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "bai/engine.hpp"
#include "bai/errors.hpp"
#include "bai/rng.hpp"

namespace en = bai::engine;
namespace sm = bai::samplers;
namespace th = bai::thresholds;
using bai::model::Instance;

namespace {

const Instance kStandard{{1.0, 0.85, 0.8, 0.7, 0.65}, {1.0, 0.6, 0.5, 0.4, 0.35}};

en::RunConfig config(const Instance& inst, sm::SamplerKind kind, double delta,
                     th::Family f = th::Family::Heuristic) {
  en::RunConfig rc;
  rc.instance = inst;
  rc.sampler = kind;
  rc.threshold = th::ThresholdSpec::make(f, delta, static_cast<int>(inst.size()));
  rc.seed = 77;
  return rc;
}

}  // namespace

TEST(Engine, EffectiveN0) {
  auto rc = config(kStandard, sm::SamplerKind::Tas, 0.01);
  EXPECT_EQ(en::effective_n0(rc), en::kDefaultInitialPulls);
  rc.sampler = sm::SamplerKind::EbEvtci;
  EXPECT_EQ(en::effective_n0(rc), 6);
  rc.sampler = sm::SamplerKind::Fhn2;
  EXPECT_EQ(en::effective_n0(rc), sm::fhn2_default_n0(0.01));
  rc.sampler = sm::SamplerKind::EbTci;
  rc.n0 = 3;
  EXPECT_THROW(en::effective_n0(rc), bai::DomainError);
  rc.n0 = 9;
  EXPECT_EQ(en::effective_n0(rc), 9);
}

TEST(Engine, Validation) {
  auto rc = config(kStandard, sm::SamplerKind::Tas, 0.01);
  rc.beta = 1.0;
  EXPECT_THROW(en::run_episode(rc), bai::DomainError);
  rc = config(kStandard, sm::SamplerKind::Tas, 0.01);
  rc.threshold.K = 3;
  EXPECT_THROW(en::run_episode(rc), bai::DomainError);
  rc = config(Instance{{0.0, 0.0}, {1.0, 1.0}}, sm::SamplerKind::Tas, 0.01);
  EXPECT_THROW(en::run_episode(rc), bai::TieError);
}

TEST(Engine, HugeGapStopsQuicklyForEverySampler) {
  const Instance inst{{0.0, -5.0}, {0.01, 0.01}};
  for (auto kind : sm::all_samplers()) {
    const auto r = en::run_episode(config(inst, kind, 0.5));
    EXPECT_TRUE(r.correct) << sm::sampler_name(kind);
    EXPECT_FALSE(r.capped);
    EXPECT_LE(r.stop_time, 300) << sm::sampler_name(kind);
  }
}

TEST(Engine, DeterministicPerSeed) {
  for (auto kind : sm::all_samplers()) {
    const auto rc = config(kStandard, kind, 0.1);
    EXPECT_EQ(en::run_episode(rc), en::run_episode(rc)) << sm::sampler_name(kind);
  }
}

TEST(Engine, BatchIndependentOfThreads) {
  auto rc = config(kStandard, sm::SamplerKind::EbTci, 0.1);
  const auto a = en::run_batch(rc, 40, 1);
  const auto b = en::run_batch(rc, 40, 4);
  EXPECT_EQ(en::episodes_csv(a.records), en::episodes_csv(b.records));
  for (std::size_t i = 0; i < 40; ++i) EXPECT_EQ(a.records[i].seed, bai::rng::split(77, i));
}

TEST(Engine, CappedRunsCountAsErrors) {
  auto rc = config(kStandard, sm::SamplerKind::Tas, 0.01, th::Family::KL);
  rc.max_steps = 50;
  const auto res = en::run_batch(rc, 10, 1);
  EXPECT_EQ(res.aggregate.n_capped, 10u);
  EXPECT_EQ(res.aggregate.error_rate, 1.0);
  for (const auto& r : res.records) {
    EXPECT_TRUE(r.capped);
    EXPECT_FALSE(r.correct);
    EXPECT_EQ(r.stop_time, 50);
  }
  rc.sampler = sm::SamplerKind::Fhn2;
  const auto f = en::run_episode(rc);
  EXPECT_TRUE(f.capped);
  EXPECT_LE(f.stop_time, 50);
}

TEST(Engine, QuantileAndAggregate) {
  EXPECT_DOUBLE_EQ(en::quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(en::quantile({1, 2, 3, 4, 5}, 0.1), 1.4);
  EXPECT_DOUBLE_EQ(en::quantile({7}, 0.9), 7.0);
  EXPECT_THROW(en::quantile({}, 0.5), bai::DomainError);
  std::vector<en::EpisodeRecord> recs{{1, 10, 0, true, false}, {2, 30, 1, false, false},
                                      {3, 20, 0, false, true}};
  const auto agg = en::aggregate(recs);
  EXPECT_EQ(agg.episodes, 3u);
  EXPECT_DOUBLE_EQ(agg.mean, 20.0);
  EXPECT_DOUBLE_EQ(agg.median, 20.0);
  EXPECT_NEAR(agg.error_rate, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(agg.n_capped, 1u);
}

TEST(Engine, CsvAndJsonFormats) {
  std::vector<en::EpisodeRecord> recs{{18446744073709551615ull, 10, 3, true, false}};
  EXPECT_EQ(en::episodes_csv(recs),
            "seed,stop_time,recommended,correct,capped\n18446744073709551615,10,3,1,0\n");
  en::Aggregate agg;
  agg.episodes = 2;
  agg.mean = 0.1;
  agg.median = 1.0 / 3.0;
  const auto js = en::aggregate_json(agg);
  EXPECT_NE(js.find("\"mean\":0.10000000000000001"), std::string::npos) << js;
  EXPECT_NE(js.find("\"median\":0.33333333333333331"), std::string::npos) << js;
  for (const char* key : {"\"p10\"", "\"p90\"", "\"error_rate\"", "\"n_capped\""}) {
    EXPECT_NE(js.find(key), std::string::npos);
  }
}

TEST(Engine, ErrorRateFarBelowDelta) {
  const auto res = en::run_batch(config(kStandard, sm::SamplerKind::EvTas, 0.01), 2000, 1);
  EXPECT_EQ(res.aggregate.n_capped, 0u);
  EXPECT_LE(res.aggregate.error_rate, 0.01);
}

TEST(Engine, SmallerDeltaStopsLater) {
  for (auto kind : sm::all_samplers()) {
    const double loose = en::run_batch(config(kStandard, kind, 0.1), 300, 1).aggregate.median;
    const double tight = en::run_batch(config(kStandard, kind, 0.001), 300, 1).aggregate.median;
    EXPECT_GT(tight, loose) << sm::sampler_name(kind);
  }
}
