#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "gmoe/cascade.hpp"
#include "gmoe/channels.hpp"
#include "gmoe/sampling.hpp"
#include "oracles.hpp"

using namespace gmoe;

TEST_CASE("canonical transmissivities") {
  auto two = canonical_etas(2);
  REQUIRE(two.size() == 1);
  CHECK(two[0] == 0.5);
  auto bar2 = effective_etas(two);
  CHECK(bar2 == std::vector<double>{0.5, 0.5});

  auto three = canonical_etas(3);
  CHECK(std::abs(three[0] - 2.0 / 3.0) < 1e-15);
  CHECK(three[1] == 0.5);
  for (int k = 2; k <= 6; ++k) {
    auto etas = canonical_etas(k);
    const double prod = std::accumulate(etas.begin(), etas.end(), 1.0, std::multiplies<>());
    CHECK(std::abs(prod - 1.0 / k) < 1e-15);
    for (double b : effective_etas(etas)) CHECK(std::abs(b - 1.0 / k) < 1e-12);
  }
  CHECK_THROWS_AS(canonical_etas(1), Error);
}

TEST_CASE("cascade on the Gibbs input") {
  for (double n0 : {0.5, 1.0}) {
    const int d = gibbs_cutoff(n0, 1e-9);
    for (int k : {2, 3}) {
      auto rep = run_cascade(gibbs_state(n0, d), k, n0, d);
      for (double s : rep.reduced_entropies) CHECK(std::abs(s - oracle::g(n0)) < 1e-5);
      CHECK(std::abs(rep.subadditivity_slack) < 1e-5);
      CHECK(std::abs(rep.joint_entropy - k * oracle::g(n0)) < 1e-5);
    }
    CHECK(reduced_vs_direct(gibbs_state(n0, d), 2, n0, d).a_distance < 1e-7);
  }
}

TEST_CASE("cascade on random fixed-entropy inputs") {
  for (double n0 : {0.5, 1.0}) {
    const double s0 = oracle::g(n0);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto rho2 = sample_fixed_entropy_state(s0, 20, 100 + seed);
      auto r2 = run_cascade(rho2, 2, n0, 20);
      CHECK(std::abs(r2.joint_entropy - 2.0 * s0) < 1e-5);
      CHECK(std::abs(r2.reduced_entropies[0] - r2.reduced_entropies[1]) < 1e-5);
      CHECK(r2.subadditivity_slack >= -1e-6);
      CHECK(r2.bound_slack >= -1e-5);
      CHECK(r2.a_reduction_distance < 1e-4);
      CHECK(r2.relative_entropy_slack >= -1e-5);

      auto rho3 = sample_fixed_entropy_state(s0, 10, 200 + seed);
      auto r3 = run_cascade(rho3, 3, n0, 10);
      CHECK(std::abs(r3.joint_entropy - 3.0 * s0) < 1e-5);
      CHECK(r3.subadditivity_slack >= -1e-6);
      CHECK(r3.bound_slack >= -1e-5);
      CHECK(r3.a_reduction_distance < 1e-4);
      auto cmp = reduced_vs_direct(rho3, 3, n0, 10);
      for (double gap : cmp.env_entropy_gaps) CHECK(gap < 1e-4);
    }
  }
}

TEST_CASE("cascade preconditions and overrides") {
  auto rho = sample_fixed_entropy_state(oracle::g(0.5), 10, 1);
  CHECK_THROWS_AS(run_cascade(rho, 2, 1.0, 10), Error);
  CHECK_THROWS_AS(run_cascade(rho, 1, 0.5, 10), Error);
  CHECK_THROWS_AS(run_cascade(rho, 6, 0.5, 10), Error);
  CHECK_THROWS_AS(run_cascade(rho, 2, 0.5, 8), Error);

  auto custom = run_cascade(rho, 3, 0.5, 10, std::vector<double>{0.9, 0.8});
  CHECK_FALSE(custom.canonical);
  CHECK(std::abs(custom.eta_bar_list.back() - 0.72) < 1e-15);
  CHECK(custom.a_reduction_distance < 1e-4);
  CHECK(run_cascade(rho, 3, 0.5, 10, canonical_etas(3)).canonical);
}
