#include <doctest.h>

#include <cmath>
#include <random>

#include "edgecache/knapsack.hpp"
#include "edgecache/log.hpp"
#include "edgecache/policy.hpp"
#include "test_support.hpp"

using namespace edgecache;
using testing::small_catalog;

namespace {

Placement placed(std::initializer_list<ContentId> ids, double capacity = 100) {
  Placement p(capacity);
  for (ContentId id : ids) p.admit(id, 1.0);
  return p;
}

ArmState& warm(BanditState& s, ContentId id, long pulls, double mean, double weighted = 1.0, double influence = 1.0) {
  ArmState& a = s.arm(id, influence);
  a.pulls = pulls;
  a.mean_reward = mean;
  a.reward_weight = weighted;
  a.action_flag = 1;
  a.weighted_reward = weighted;
  return a;
}

struct SinkGuard {
  explicit SinkGuard(LogSink sink) : previous(set_log_sink(std::move(sink))) {}
  ~SinkGuard() { set_log_sink(previous); }
  LogSink previous;
};

}  // namespace

TEST_CASE("IRM hit ratio sums the Zipf mass of cached items") {
  const Catalog c = small_catalog("III");
  const ZipfModel zipf = ZipfModel::make(3, 1.0);
  CHECK(hit_ratio_irm(placed({1, 2, 3}), c, zipf) == doctest::Approx(1.0));
  CHECK(std::abs(hit_ratio_irm(placed({1}), c, zipf) - 0.5455) < 1e-4);
  CHECK(hit_ratio_irm(placed({}), c, zipf) == 0.0);

  const Catalog mixed = small_catalog("IS");
  try {
    hit_ratio_irm(placed({2}), mixed, ZipfModel::make(1, 1.0));
    FAIL("expected WrongRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongRegime);
  }
}

TEST_CASE("SNM hit ratio looks up empirical shares") {
  const Catalog c = small_catalog("SSSI");
  PopularitySnapshot snap;
  snap.frequency = {{1, 0.75}, {2, 0.25}};
  CHECK(hit_ratio_snm(placed({1}), c, snap) == doctest::Approx(0.75));
  CHECK(hit_ratio_snm(placed({1, 2}), c, snap) == doctest::Approx(1.0));
  CHECK(hit_ratio_snm(placed({3}), c, snap) == 0.0);
  try {
    hit_ratio_snm(placed({4}), c, snap);
    FAIL("expected WrongRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongRegime);
  }
}

TEST_CASE("total hit ratio mixes the two regimes") {
  CHECK(hit_ratio_total(1.0, 0.5, AllocationEstimate::from_snm(0.8)) == doctest::Approx(0.6));
  CHECK(hit_ratio_total(0.3, 0.7, AllocationEstimate::from_snm(1.0)) == doctest::Approx(0.7));
  for (double w : {0.0, 0.25, 0.9}) CHECK(hit_ratio_total(0.42, 0.42, AllocationEstimate::from_snm(w)) == doctest::Approx(0.42));
}

TEST_CASE("random placement") {
  const Catalog c = small_catalog("IISSS", 10, {1, 2, 1, 3, 1});
  Rng rng(1);
  CHECK(random_place(c, 8, rng).count() == 5);
  CHECK(random_place(c, 0, rng).count() == 0);
  Rng a(55), b(55);
  CHECK(random_place(c, 3, a) == random_place(c, 3, b));
}

TEST_CASE("popular placement ranks by historical share") {
  const Catalog c = small_catalog("ISS");
  Rng rng(1);
  PopularitySnapshot snap;
  snap.frequency = {{1, 0.5}, {2, 0.3}, {3, 0.2}};
  CHECK(popular_place(c, snap, 2, rng).cached() == std::set<ContentId>{1, 2});
  CHECK(popular_place(c, snap, 3, rng).count() == 3);

  int warnings = 0;
  SinkGuard guard([&](std::string_view) { ++warnings; });
  const Placement fallback = popular_place(c, PopularitySnapshot{}, 2, rng);
  CHECK(fallback.count() == 2);
  CHECK(warnings == 1);
}

TEST_CASE("UCB index adds the exploration bonus") {
  BanditState s(2.0);
  warm(s, 1, 1, 0.3, 1.0, 0.5);
  // 0.3 + sqrt(2 * 1 * 0.5 * ln(e) / 1)
  CHECK(hybrid_ucb_index(s, 1, std::exp(1.0)) == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(hybrid_ucb_index(s, 1, 1.0) == doctest::Approx(0.3));

  s.arm(1).pulls = 1'000'000'000;
  CHECK(hybrid_ucb_index(s, 1, 600.0) == doctest::Approx(0.3).epsilon(1e-4));

  s.arm(2);
  for (ContentId cold : {2, 99}) {
    try {
      hybrid_ucb_index(s, cold, 5.0);
      FAIL("expected ColdStart");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ColdStart);
    }
  }
}

TEST_CASE("UCB weight floor keeps the bonus positive") {
  BanditState s(2.0, 0.01);
  warm(s, 1, 4, 0.2, 0.0, 0.5);
  CHECK(hybrid_ucb_index(s, 1, 10.0) == doctest::Approx(0.2 + std::sqrt(2 * 0.01 * 0.5 * std::log(10.0) / 4)));
}

TEST_CASE("UCB bonus strictly decreases with pulls") {
  BanditState s(2.0);
  ArmState& a = warm(s, 1, 1, 0.4, 0.7, 0.6);
  double prev = hybrid_ucb_index(s, 1, 50.0);
  for (long n = 2; n < 200; ++n) {
    a.pulls = n;
    const double now = hybrid_ucb_index(s, 1, 50.0);
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("with equal pulls, weights and influence the UCB order is the mean order") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    BanditState s(2.0);
    const long pulls = 1 + static_cast<long>(gen() % 20);
    const double w = u(gen), x = std::max(0.01, u(gen));
    for (ContentId id = 1; id <= 6; ++id) warm(s, id, pulls, u(gen), w, x);
    for (ContentId i = 1; i <= 6; ++i)
      for (ContentId j = 1; j <= 6; ++j)
        if (s.find(i)->mean_reward < s.find(j)->mean_reward) CHECK(hybrid_ucb_index(s, i, 30.0) < hybrid_ucb_index(s, j, 30.0));
  }
}

TEST_CASE("hybrid_select: cold candidates first, lower id wins") {
  const Catalog c = small_catalog("ISSS");
  BanditState s;
  const ContentId candidates[] = {3, 2};
  const Placement p = hybrid_select(s, c, candidates, {}, AllocationEstimate::from_snm(1.0), 1, 5);
  CHECK(p.cached() == std::set<ContentId>{2});
}

TEST_CASE("hybrid_select: warm candidates by descending UCB index") {
  const Catalog c = small_catalog("SSSSI");
  BanditState s(2.0);
  warm(s, 1, 10, 0.50, 0.2, 0.5);
  warm(s, 2, 2, 0.30, 0.9, 0.9);
  warm(s, 3, 30, 0.60, 1.0, 1.0);
  warm(s, 4, 5, 0.10, 0.1, 0.1);
  const ContentId candidates[] = {1, 2, 3, 4};
  std::vector<std::pair<double, ContentId>> expected;
  for (ContentId id : candidates) expected.emplace_back(hybrid_ucb_index(s, id, 20.0), id);
  std::sort(expected.rbegin(), expected.rend());

  const Placement p = hybrid_select(s, c, candidates, {}, AllocationEstimate::from_snm(1.0), 2, 20);
  CHECK(p.cached() == std::set<ContentId>{expected[0].second, expected[1].second});
}

TEST_CASE("hybrid_select: zero SNM share is a pure IRM popularity fill") {
  const Catalog c = small_catalog("IIIIS");
  BanditState s;
  const ContentId candidates[] = {5};
  const ContentId ranking[] = {3, 1, 4, 2};
  const Placement p = hybrid_select(s, c, candidates, ranking, AllocationEstimate::from_snm(0.0), 3, 7);
  CHECK(p.cached() == std::set<ContentId>{3, 1, 4});
}

TEST_CASE("hybrid_select splits capacity and spills unused share") {
  const Catalog c = small_catalog("IIIISS");
  BanditState s;
  const ContentId candidates[] = {5};
  const ContentId ranking[] = {1, 2, 3, 4};
  const auto alloc = AllocationEstimate::from_snm(0.5);  // 2 + 2 of 4
  CHECK(split_capacity(alloc, 4).irm == 2.0);
  CHECK(split_capacity(AllocationEstimate::from_snm(0.8), 40).irm == 8.0);
  CHECK(split_capacity(AllocationEstimate::from_snm(0.8), 40).snm == 32.0);

  const Placement spilled = hybrid_select(s, c, candidates, ranking, alloc, 4, 3);
  CHECK(spilled.cached() == std::set<ContentId>{1, 2, 3, 5});

  const Placement strict = hybrid_select(s, c, candidates, ranking, alloc, 4, 3, HybridSelectOptions{false});
  CHECK(strict.cached() == std::set<ContentId>{1, 2, 5});
}

TEST_CASE("hybrid_update applies the reward and running-mean updates") {
  BanditState s;
  ArmState& a = warm(s, 1, 4, 0.4, 0.0);
  s.set_cached(placed({1, 2}));
  hybrid_update(s, 1, 0.9, 1.0);
  CHECK(a.pulls == 5);
  CHECK(a.mean_reward == doctest::Approx(0.5));
  CHECK(a.action_flag == 1);
  CHECK(a.reward_weight == doctest::Approx(0.9));
  CHECK(a.weighted_reward == a.action_flag * a.reward_weight);

  hybrid_update(s, 1, 0.35, 0.35);
  CHECK(a.reward_weight == 1.0);

  const double before = a.mean_reward;
  hybrid_update(s, 1, 0.0, 0.0);
  CHECK(a.reward_weight == 0.0);
  CHECK(a.weighted_reward == 0.0);
  CHECK(a.mean_reward < before);

  try {
    hybrid_update(s, 3, 0.1, 0.2);
    FAIL("expected NotCached");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotCached);
  }
  CHECK_THROWS_AS(hybrid_update(s, 2, 0.5, 0.4), Error);
}

TEST_CASE("running mean equals the arithmetic mean of all observations") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    BanditState s;
    s.arm(1);
    s.set_cached(placed({1}));
    const int n = 1 + static_cast<int>(gen() % 200);
    long sum = 0;
    for (int i = 0; i < n; ++i) {
      const long obs = static_cast<long>(gen() % 101);  // observations k/100
      sum += obs;
      hybrid_update(s, 1, double(obs) / 100.0, 1.0);
    }
    CHECK(s.find(1)->pulls == n);
    CHECK(s.find(1)->mean_reward == doctest::Approx(double(sum) / 100.0 / n).epsilon(1e-12));
  }
}

TEST_CASE("every policy respects capacity on random instances") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::string regimes;
    std::vector<double> sizes;
    const std::size_t n = 2 + gen() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      regimes += (gen() % 2) ? 'S' : 'I';
      sizes.push_back(double(1 + gen() % 5));
    }
    const Catalog c = small_catalog(regimes, 10, sizes);
    const double capacity = double(gen() % 40);
    Rng rng(gen());

    CHECK(random_place(c, capacity, rng).used() <= capacity);
    PopularitySnapshot snap;
    for (ContentId id = 1; id <= ContentId(n); ++id) snap.frequency[id] = u(gen);
    CHECK(popular_place(c, snap, capacity, rng).used() <= capacity);

    BanditState s;
    std::vector<ContentId> candidates;
    for (ContentId id : c.snm_ids()) {
      candidates.push_back(id);
      if (gen() % 2) warm(s, id, 1 + long(gen() % 9), u(gen), u(gen), std::max(0.01, u(gen)));
    }
    const auto alloc = AllocationEstimate::from_snm(u(gen));
    for (bool spill : {true, false}) {
      const Placement p = hybrid_select(s, c, candidates, c.irm_ids(), alloc, capacity, 9, {spill});
      CHECK(p.used() <= capacity);
      double used = 0.0;
      for (ContentId id : p.cached()) used += c.at(id).size;
      CHECK(used == p.used());
    }
  }
}

TEST_CASE("HybridPolicy learns candidates from observed requests") {
  const Catalog c = small_catalog("IISSS", 50);
  PolicyConfig config;
  config.candidate_window = 1;
  HybridPolicy policy(c, config);
  const SlotContext ctx1{1, c, AllocationEstimate::from_snm(0.5), 2};
  CHECK(policy.candidates(1).empty());
  const Placement first = policy.decide(ctx1);
  const RequestEvent slot1[] = {{1, 4}, {1, 4}, {1, 5}, {1, 1}};
  policy.observe(ctx1, slot1, first);

  CHECK(policy.candidates(2) == std::vector<ContentId>{4, 5});
  const SlotContext ctx2{2, c, AllocationEstimate::from_snm(0.5), 2};
  const Placement second = policy.decide(ctx2);
  CHECK(second.contains(4));
  CHECK(second.contains(1));
  const RequestEvent slot2[] = {{2, 4}, {2, 4}, {2, 4}, {2, 5}};
  policy.observe(ctx2, slot2, second);
  const ArmState* arm = policy.state().find(4);
  REQUIRE(arm != nullptr);
  CHECK(arm->pulls == 1);
  CHECK(arm->mean_reward == doctest::Approx(0.75));
  CHECK(arm->reward_weight == 1.0);
  CHECK(policy.candidates(4).empty());
}

TEST_CASE("make_policy resolves names") {
  const Catalog c = small_catalog("IS");
  for (auto name : kPolicyNames) CHECK(make_policy(name, c, {})->name() == name);
  try {
    make_policy("lru", c, {});
    FAIL("expected UnknownPolicy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownPolicy);
  }
}
