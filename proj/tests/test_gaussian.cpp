#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "gmoe/gaussian.hpp"
#include "oracles.hpp"

using namespace gmoe;

namespace {

GaussianState random_gaussian(std::mt19937_64& rng, bool zero_mean = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double nu = 0.5 + 2.0 * u(rng);
  const double r = 0.8 * (u(rng) - 0.5);
  const double th = 3.14159 * u(rng);
  Eigen::Matrix2d rot;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::Matrix2d sq = Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal();
  GaussianState s;
  s.cov = nu * rot * sq * sq * rot.transpose();
  s.cov(1, 0) = s.cov(0, 1);
  if (!zero_mean) s.mean = Eigen::Vector2d(2 * u(rng) - 1, 2 * u(rng) - 1);
  return s;
}

std::vector<ChannelSpec> all_classes() {
  return {ChannelSpec::attenuator(0.3, 1.2), ChannelSpec::amplifier(1.7, 0.4),
          ChannelSpec::class_d(0.6, 0.8),    ChannelSpec::b2(0.9),
          ChannelSpec::a1(1.5),              ChannelSpec::a2(0.7),
          ChannelSpec::b1()};
}

}  // namespace

TEST_CASE("gaussian entropy anchors") {
  CHECK(std::abs(gaussian_entropy(GaussianState::thermal(0.0))) < 1e-14);
  for (double n : {0.5, 1.0, 3.0})
    CHECK(std::abs(gaussian_entropy(GaussianState::thermal(n)) - oracle::g(n)) < 1e-12);
  CHECK(gaussian_entropy(GaussianState::diagonal(2.0, 1.0 / 8.0)) < 1e-12);
  CHECK_THROWS_AS(GaussianState::diagonal(0.1, 0.1), Error);
}

TEST_CASE("channel rules on thermal and squeezed inputs") {
  GaussianState s = GaussianState::diagonal(0.9, 0.4);
  s.mean << 0.3, -0.2;
  GaussianState id = apply_gaussian_channel(s, ChannelSpec::attenuator(1.0, 3.0));
  CHECK((id.cov - s.cov).norm() < 1e-15);
  CHECK((id.mean - s.mean).norm() < 1e-15);

  const double n0 = 1.3, eta = 0.35, n = 0.6;
  GaussianState th = apply_gaussian_channel(GaussianState::thermal(n0), ChannelSpec::attenuator(eta, n));
  CHECK(std::abs(th.cov(0, 0) - (eta * n0 + (1 - eta) * n + 0.5)) < 1e-14);
  CHECK(std::abs(th.cov(0, 1)) < 1e-15);

  GaussianState b1 = apply_gaussian_channel(GaussianState::diagonal(0.7, 0.6), ChannelSpec::b1());
  CHECK(std::abs(b1.cov(0, 0) - 1.2) < 1e-15);
  CHECK(std::abs(b1.cov(1, 1) - 0.6) < 1e-15);
}

TEST_CASE("photon bookkeeping holds for every class on random inputs") {
  std::mt19937_64 rng(11);
  for (const auto& ch : all_classes()) {
    CAPTURE(ch.describe());
    for (int k = 0; k < 50; ++k) {
      GaussianState s = random_gaussian(rng);
      GaussianState out = apply_gaussian_channel(s, ch);
      const double q2 = s.cov(0, 0) + s.mean(0) * s.mean(0);
      const double predicted = predicted_output_photons(ch, s.mean_photon(), q2);
      CHECK(std::abs(out.mean_photon() - predicted) < 1e-10);
      out.validate();
    }
  }
}

TEST_CASE("phase-symmetric inputs obey the isotropic A2 constants") {
  ChannelSpec ch = ChannelSpec::a2(0.7);
  for (double n : {0.0, 0.4, 2.0}) {
    GaussianState out = apply_gaussian_channel(GaussianState::thermal(n), ch);
    CHECK(std::abs(out.mean_photon() - (ch.kappa2_eff() * n + ch.c_eff())) < 1e-12);
  }
}

TEST_CASE("attenuators compose multiplicatively") {
  std::mt19937_64 rng(3);
  for (auto [e1, e2] : {std::pair{0.3, 0.8}, std::pair{0.5, 0.5}, std::pair{0.9, 0.1}}) {
    GaussianState s = random_gaussian(rng);
    auto twice = apply_gaussian_channel(apply_gaussian_channel(s, ChannelSpec::attenuator(e1, 0.7)),
                                        ChannelSpec::attenuator(e2, 0.7));
    auto once = apply_gaussian_channel(s, ChannelSpec::attenuator(e1 * e2, 0.7));
    CHECK((twice.cov - once.cov).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((twice.mean - once.mean).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("infimum experiments approach their limits") {
  std::vector<double> sig = {1.0, 0.3, 0.1, 0.03, 1e-2};
  const double s0 = oracle::g(1.0);
  auto a2 = infimum_limit_experiment(ChannelSpec::a2(1.0), s0, sig);
  for (std::size_t i = 0; i < a2.size(); ++i) {
    CHECK(std::abs(a2[i].input_entropy - s0) < 1e-10);
    CHECK(a2[i].output_entropy >= oracle::g(1.0) - 1e-12);
    if (i > 0) CHECK(a2[i].output_entropy <= a2[i - 1].output_entropy);
  }
  CHECK(a2.back().output_entropy - oracle::g(1.0) < 0.01);

  auto b1 = infimum_limit_experiment(ChannelSpec::b1(), 0.0, sig);
  CHECK(std::abs(b1.back().output_entropy) < 0.01);
  auto b1m = infimum_limit_experiment(ChannelSpec::b1(), s0, sig);
  for (const auto& row : b1m) CHECK(row.output_entropy >= s0 - 1e-12);
  CHECK(b1m.back().output_entropy - s0 < 0.01);

  std::vector<double> one = {0.1};
  CHECK_THROWS_AS(infimum_limit_experiment(ChannelSpec::b2(1.0), s0, one), Error);
}

TEST_CASE("Fock embedding") {
  auto vac = embed_gaussian_to_fock(GaussianState::thermal(0.0), 12);
  CHECK(std::abs(vac.matrix()(0, 0) - 1.0) < 1e-10);

  auto th = embed_gaussian_to_fock(GaussianState::thermal(0.8), 60);
  CHECK(trace_distance(th, gibbs_state(0.8, 60)) < 1e-10);

  GaussianState s = GaussianState::diagonal(1.3, 0.4);
  auto rho = embed_gaussian_to_fock(s, 60);
  CHECK(std::abs(von_neumann_entropy(rho) - gaussian_entropy(s)) < 1e-6);
  auto mom = quadrature_moments(rho.matrix());
  CHECK(std::abs(mom.var_q - 1.3) < 1e-8);
  CHECK(std::abs(mom.var_p - 0.4) < 1e-8);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    GaussianState r = random_gaussian(rng, true);
    if (r.cov.determinant() > 4.0) continue;
    auto f = embed_gaussian_to_fock(r, 80);
    auto m = quadrature_moments(f.matrix());
    CHECK(std::abs(m.var_q - r.cov(0, 0)) < 1e-7);
    CHECK(std::abs(m.var_p - r.cov(1, 1)) < 1e-7);
    CHECK(std::abs(m.cov_qp - r.cov(0, 1)) < 1e-7);
    CHECK(std::abs(von_neumann_entropy(f) - gaussian_entropy(r)) < 1e-6);
  }
  CHECK_THROWS_AS(embed_gaussian_to_fock(GaussianState::diagonal(40.0, 40.0), 20), Error);
}
