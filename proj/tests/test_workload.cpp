#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "edgecache/rng.hpp"
#include "edgecache/workload.hpp"
#include "test_support.hpp"

using namespace edgecache;
using edgecache::testing::TempDir;

namespace {

// Independent reference: explicit harmonic-style normalizer.
std::vector<double> zipf_reference(int n, double delta) {
  double norm = 0.0;
  for (int j = 1; j <= n; ++j) norm += 1.0 / std::pow(double(j), delta);
  std::vector<double> p;
  for (int f = 1; f <= n; ++f) p.push_back(1.0 / std::pow(double(f), delta) / norm);
  return p;
}

CatalogConfig reference_catalog() {
  CatalogConfig c;
  c.library_size = 150;
  c.w_snm = 0.8;
  return c;
}

}  // namespace

TEST_CASE("zipf_pmf matches direct summation") {
  const Eigen::VectorXd p = zipf_pmf<double>(3, 1.0);
  // 1 / (1 + 1/2 + 1/3) = 6/11
  CHECK(p[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(2.0 / 11.0).epsilon(1e-12));
  CHECK(std::abs(p[0] - 0.5455) < 1e-4);
  CHECK(std::abs(p[1] - 0.2727) < 1e-4);
  CHECK(std::abs(p[2] - 0.1818) < 1e-4);

  const Eigen::VectorXd uniform = zipf_pmf<double>(4, 0.0);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(uniform[i] == doctest::Approx(0.25));

  for (double delta : {0.0, 0.3, 0.8, 1.5, 3.0}) {
    const auto ref = zipf_reference(150, delta);
    const Eigen::VectorXd got = zipf_pmf<double>(150, delta);
    CHECK(std::abs(got.sum() - 1.0) < 1e-9);
    for (int f = 0; f < 150; ++f) CHECK(got[f] == doctest::Approx(ref[static_cast<std::size_t>(f)]).epsilon(1e-12));
  }
}

TEST_CASE("zipf_pmf works at long double precision") {
  const auto p = zipf_pmf<long double>(10, 0.8L);
  CHECK(std::abs(static_cast<double>(p.sum()) - 1.0) < 1e-15);
}

TEST_CASE("zipf_pmf rejects an empty library") {
  try {
    zipf_pmf<double>(0, 1.0);
    FAIL("expected EmptyLibrary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyLibrary);
  }
}

TEST_CASE("zipf_pmf is non-increasing in rank for random n and delta") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> d(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + gen() % 500);
    const Eigen::VectorXd p = zipf_pmf<double>(n, d(gen));
    for (Eigen::Index i = 1; i < n; ++i) CHECK(p[i] <= p[i - 1]);
    CHECK(std::abs(p.sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("sample_pareto_volume inverts the Pareto CDF") {
  const ParetoVolume model(2.0, 1.0);
  CHECK(sample_pareto_volume(model, 0.75) == doctest::Approx(2.0));  // 1 - v^-2 = 0.75
  CHECK(sample_pareto_volume(model, 0.0) == 1.0);
  for (double u : {-0.1, 1.0, 1.5}) {
    try {
      sample_pareto_volume(model, u);
      FAIL("expected BadUniform");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BadUniform);
    }
  }
  CHECK_THROWS_AS(ParetoVolume(1.0, 1.0), Error);
  CHECK_THROWS_AS(ParetoVolume(2.0, 0.0), Error);
}

TEST_CASE("Pareto draws: analytic mean and Kolmogorov distance") {
  const ParetoVolume model(2.0, 1.0);
  Rng rng(2024);
  constexpr int kDraws = 1'000'000;
  std::vector<double> v(kDraws);
  double sum = 0.0;
  for (auto& x : v) {
    x = sample_pareto_volume(model, rng.uniform());
    sum += x;
  }
  CHECK(*std::min_element(v.begin(), v.end()) >= model.n_min());
  CHECK(std::abs(sum / kDraws - model.mean()) / model.mean() < 0.02);

  std::sort(v.begin(), v.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = model.cdf(v[i]);
    ks = std::max({ks, std::abs(double(i + 1) / kDraws - f), std::abs(double(i) / kDraws - f)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("snm_rate is a rectangular pulse over the half-open lifespan") {
  ContentItem item;
  item.id = 1;
  item.regime = Regime::Snm;
  item.features = Eigen::VectorXd::Constant(4, 0.5);
  item.snm = SnmDynamics{10, 20, 40.0};
  CHECK(snm_rate(item, 15) == doctest::Approx(2.0));
  CHECK(snm_rate(item, 10) == doctest::Approx(2.0));
  CHECK(snm_rate(item, 29) == doctest::Approx(2.0));
  CHECK(snm_rate(item, 5) == 0.0);
  CHECK(snm_rate(item, 30) == 0.0);

  ContentItem irm;
  irm.id = 2;
  try {
    snm_rate(irm, 1);
    FAIL("expected WrongRegime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongRegime);
  }
}

TEST_CASE("generate_trace mixes regimes at the target share") {
  const Catalog catalog = build_catalog(reference_catalog(), 5);
  TraceConfig config;
  const RequestTrace trace = generate_trace(catalog, config, 6);
  REQUIRE(trace.events().size() == 60000);

  std::size_t snm = 0;
  for (const auto& e : trace.events()) snm += catalog.at(e.id).regime == Regime::Snm;
  const double share = double(snm) / double(trace.events().size());
  // Binomial concentration at n = 60000 plus requests that had to fall back.
  const double fallback = double(trace.fallback_requests()) / double(trace.events().size());
  CHECK(share + fallback >= 0.77);
  CHECK(share + fallback <= 0.83);

  for (int t = 1; t <= trace.horizon(); ++t) {
    const auto events = trace.slot_events(t);
    CHECK(events.size() == 100);
    for (const auto& e : events) {
      CHECK(e.slot == t);
      if (catalog.at(e.id).regime == Regime::Snm) CHECK(catalog.at(e.id).active_at(t));
    }
  }
}

TEST_CASE("generate_trace with no SNM share only requests IRM items") {
  const Catalog catalog = build_catalog(reference_catalog(), 5);
  TraceConfig config;
  config.w_snm = 0.0;
  const RequestTrace trace = generate_trace(catalog, config, 6);
  for (const auto& e : trace.events()) CHECK(catalog.at(e.id).regime == Regime::Irm);
  CHECK(trace.fallback_requests() == 0);
}

TEST_CASE("generate_trace is deterministic given the seed") {
  const Catalog catalog = build_catalog(reference_catalog(), 5);
  TraceConfig config;
  config.horizon = 50;
  const RequestTrace a = generate_trace(catalog, config, 77);
  const RequestTrace b = generate_trace(catalog, config, 77);
  const RequestTrace c = generate_trace(catalog, config, 78);
  CHECK(std::equal(a.events().begin(), a.events().end(), b.events().begin(), b.events().end()));
  CHECK_FALSE(std::equal(a.events().begin(), a.events().end(), c.events().begin(), c.events().end()));
}

TEST_CASE("IRM request frequencies converge to the Zipf pmf") {
  CatalogConfig cc = reference_catalog();
  const Catalog catalog = build_catalog(cc, 8);
  TraceConfig config;
  config.w_snm = 0.0;
  config.horizon = 1000;  // 10^5 IRM requests
  const RequestTrace trace = generate_trace(catalog, config, 9);

  const auto ref = zipf_reference(static_cast<int>(catalog.n_irm()), config.zipf_delta);
  std::vector<double> freq(catalog.n_irm(), 0.0);
  for (const auto& e : trace.events()) freq[catalog.irm_rank(e.id)] += 1.0;
  double tv = 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i) tv += std::abs(freq[i] / double(trace.events().size()) - ref[i]);
  CHECK(0.5 * tv < 0.02);
}

TEST_CASE("generate_trace rejects an empty catalog") {
  try {
    generate_trace(Catalog(), TraceConfig{}, 1);
    FAIL("expected EmptyLibrary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyLibrary);
  }
}

TEST_CASE("trace CSV round-trips and validates rows") {
  TempDir dir("trace");
  const Catalog catalog = build_catalog(reference_catalog(), 5);
  TraceConfig config;
  config.horizon = 30;
  const RequestTrace trace = generate_trace(catalog, config, 3);
  save_trace(trace, dir / "trace.csv");
  const RequestTrace loaded = load_trace(dir / "trace.csv", catalog, 30);
  CHECK(loaded.horizon() == 30);
  CHECK(std::equal(trace.events().begin(), trace.events().end(), loaded.events().begin(), loaded.events().end()));

  testing::write_text(dir / "bad.csv", "slot,content_id\n1,4\nabc,5\n");
  try {
    load_trace(dir / "bad.csv", catalog);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }

  testing::write_text(dir / "unknown.csv", "slot,content_id\n1,9999\n");
  try {
    load_trace(dir / "unknown.csv", catalog);
    FAIL("expected UnknownContent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownContent);
  }

  testing::write_text(dir / "unsorted.csv", "slot,content_id\n2,1\n1,1\n");
  CHECK_THROWS_AS(load_trace(dir / "unsorted.csv", catalog), Error);
}

TEST_CASE("Rng streams are reproducible and below() stays in range") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(9);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto x = r.below(7);
    REQUIRE(x < 7);
    ++hist[x];
  }
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
}
