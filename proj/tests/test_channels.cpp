#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "gmoe/channels.hpp"
#include "gmoe/dilation.hpp"
#include "gmoe/gaussian.hpp"
#include "oracles.hpp"

using namespace gmoe;

namespace {

DensityOperator random_state(int d, std::mt19937_64& rng, int rank = -1) {
  return DensityOperator(oracle::random_density(d, rng, rank));
}

double second_moment_q(const CMatrix& rho) {
  auto m = quadrature_moments(rho);
  return m.var_q + m.mean_q * m.mean_q;
}

std::vector<ChannelSpec> all_classes() {
  return {ChannelSpec::attenuator(0.4, 0.7), ChannelSpec::amplifier(1.5, 0.3),
          ChannelSpec::class_d(0.5, 0.2),    ChannelSpec::b2(0.6),
          ChannelSpec::a1(0.8),              ChannelSpec::a2(0.4),
          ChannelSpec::b1()};
}

}  // namespace

TEST_CASE("beam splitter unitary") {
  auto id = beam_splitter_unitary(1.0, 5, 4);
  CHECK((id.matrix - CMatrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-14);

  auto half = beam_splitter_unitary(0.5, 3, 3);
  CVector in = CVector::Zero(9);
  in(1 * 3 + 0) = 1.0;
  CVector out = half.matrix * in;
  CHECK(std::abs(std::norm(out(1 * 3 + 0)) - 0.5) < 1e-14);
  CHECK(std::abs(std::norm(out(0 * 3 + 1)) - 0.5) < 1e-14);

  // Against a dense exponential of the two-mode generator: sectors with
  // fewer than min(d_s, d_e) photons are complete inside the box.
  const int ds = 6, de = 5;
  const double eta = 0.37, theta = std::acos(std::sqrt(eta));
  CMatrix a = Eigen::KroneckerProduct(annihilation_op(ds).matrix(), CMatrix::Identity(de, de));
  CMatrix b = Eigen::KroneckerProduct(CMatrix::Identity(ds, ds), annihilation_op(de).matrix());
  CMatrix gen = theta * (a.adjoint() * b - a * b.adjoint());
  CMatrix exact = unitary_exp(kI * gen, 1.0);  // exp(−i·iG) = exp(G)
  auto u = beam_splitter_unitary(eta, ds, de);
  double worst = 0.0;
  for (int i = 0; i < ds; ++i)
    for (int m = 0; m < de; ++m) {
      if (i + m >= std::min(ds, de)) continue;
      worst = std::max(worst, (u.matrix.col(i * de + m) - exact.col(i * de + m)).cwiseAbs().maxCoeff());
    }
  CHECK(worst < 1e-12);

  CMatrix ntot = a.adjoint() * a + b.adjoint() * b;
  CHECK((u.matrix * ntot - ntot * u.matrix).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(beam_splitter_unitary(1.2, 3, 3), Error);
}

TEST_CASE("attenuator fixed point and bookkeeping") {
  for (double eta : {0.3, 0.5, 0.8})
    for (double n0 : {0.5, 1.0, 2.0}) {
      auto g = gibbs_state(n0, 60);
      auto res = apply_attenuator(g, eta, n0);
      CHECK(trace_distance(res.output, g) < 1e-6);
    }

  std::mt19937_64 rng(11);
  for (double eta : {0.3, 0.8}) {
    auto res = apply_attenuator(random_state(16, rng), eta, 0.5);
    REQUIRE(res.joint_entropy.has_value());
    CHECK(std::abs(*res.joint_entropy - res.product_entropy) < 1e-7);
  }

  auto vac = DensityOperator::number_state(0, 8);
  CHECK(trace_distance(apply_attenuator(vac, 0.6, 0.0).output, vac) < 1e-12);

  auto four = DensityOperator::number_state(4, 10);
  CHECK(std::abs(mean_photon(apply_attenuator(four, 0.25, 2.0).output) - 2.5) < 1e-6);
  CHECK_THROWS_AS(apply_attenuator(four, 0.5, 2.0, 10), Error);
}

TEST_CASE("attenuator joint state and its reductions agree") {
  std::mt19937_64 rng(1);
  auto rho = random_state(4, rng);
  auto res = apply_attenuator(rho, 0.6, 0.02, 6, true);
  REQUIRE(res.joint.has_value());
  const std::vector<int> keep_a = {0}, keep_e = {1};
  CHECK(trace_distance(partial_trace(*res.joint, keep_a).matrix, res.output.matrix()) < 1e-12);
  CHECK(trace_distance(partial_trace(*res.joint, keep_e).matrix, res.complement.matrix()) < 1e-12);
  CHECK(std::abs(von_neumann_entropy(res.joint->matrix) - res.product_entropy) < 1e-9);
}

TEST_CASE("weak complementary attenuator") {
  auto g = gibbs_state(0.8, 50);
  CHECK(trace_distance(weak_complementary_attenuator(g, 0.5, 0.8), g) < 1e-9);

  std::mt19937_64 rng(2);
  auto rho = random_state(12, rng);
  const double s_c = von_neumann_entropy(weak_complementary_attenuator(rho, 0.3, 0.6));
  const double s_d = von_neumann_entropy(apply_attenuator(rho, 0.7, 0.6).output);
  CHECK(std::abs(s_c - s_d) < 1e-5);

  auto env = gibbs_state(0.6, 40);
  CHECK(trace_distance(weak_complementary_attenuator(rho, 1.0, 0.6, 40), env) < 1e-9);
}

TEST_CASE("attenuator semigroup law") {
  std::mt19937_64 rng(4);
  for (double n : {0.0, 1.0})
    for (auto [e1, e2] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.5}, std::pair{0.9, 0.2}}) {
      auto rho = random_state(10, rng);
      auto twice = apply_attenuator(apply_attenuator(rho, e1, n).output, e2, n).output;
      auto once = apply_attenuator(rho, e1 * e2, n).output;
      CHECK(trace_distance(twice, once) < 1e-5);
    }
}

TEST_CASE("amplifier and class D") {
  auto id = apply_amplifier(DensityOperator(oracle::thermal_populations(0.5, 10).asDiagonal().toDenseMatrix().cast<cplx>() /
                                            oracle::thermal_populations(0.5, 10).sum()),
                            1.0, 0.4);
  CHECK(trace_distance(id.output, DensityOperator(oracle::thermal_populations(0.5, 10).asDiagonal().toDenseMatrix().cast<cplx>() /
                                                  oracle::thermal_populations(0.5, 10).sum())) < 1e-8);

  auto vac = DensityOperator::number_state(0, 6);
  auto amp = apply_amplifier(vac, 2.0, 0.0);
  CHECK(std::abs(mean_photon(amp.output) - 1.0) < 1e-5);
  CHECK(std::abs(von_neumann_entropy(amp.output) - oracle::g(1.0)) < 1e-4);
  CHECK(amp.boundary_mass < 1e-18);
  REQUIRE(amp.joint_entropy.has_value());
  CHECK(std::abs(*amp.joint_entropy - amp.product_entropy) < 1e-7);

  CHECK(trace_distance(apply_class_D(vac, 0.0, 0.0), vac) < 1e-12);
  CHECK(std::abs(mean_photon(apply_class_D(vac, 1.0, 0.0)) - 1.0) < 1e-5);

  // Two-point slope.
  auto two = DensityOperator::number_state(2, 6);
  const double k2 = 0.7, n = 0.3;
  const double slope = (mean_photon(apply_class_D(two, k2, n)) - mean_photon(apply_class_D(vac, k2, n))) / 2.0;
  CHECK(std::abs(slope - k2) < 1e-5);
}

TEST_CASE("amplifier agrees with the covariance backend") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 3; ++k) {
    auto s = GaussianState::diagonal(0.5 + u(rng), 0.5 + u(rng));
    auto rho = embed_gaussian_to_fock(s, 30);
    const double kappa2 = 1.0 + u(rng), n = 0.5 * u(rng);
    const double fock = von_neumann_entropy(apply_amplifier(rho, kappa2, n).output);
    const double cov = gaussian_entropy(apply_gaussian_channel(s, ChannelSpec::amplifier(kappa2, n)));
    CHECK(std::abs(fock - cov) < 1e-5);
    const double fd = von_neumann_entropy(apply_class_D(rho, kappa2 - 0.5, n));
    const double cd = gaussian_entropy(apply_gaussian_channel(s, ChannelSpec::class_d(kappa2 - 0.5, n)));
    CHECK(std::abs(fd - cd) < 1e-5);
  }
}

TEST_CASE("B2 additive noise") {
  std::mt19937_64 rng(6);
  auto rho = random_state(8, rng);
  CHECK(trace_distance(apply_B2(rho, 0.0), rho) < 1e-15);
  CHECK(std::abs(mean_photon(apply_B2(DensityOperator::number_state(0, 6), 1.0)) - 1.0) < 1e-5);
  auto g = gibbs_state(0.7, 60);
  CHECK(trace_distance(apply_B2(g, 0.5), gibbs_state(1.2, 80)) < 1e-4);
  CHECK(std::abs(mean_photon(apply_B2(rho, 0.3)) - (mean_photon(rho) + 0.3)) < 1e-5);
  QuadratureSpec coarse;
  coarse.output_cutoff = 9;
  CHECK_THROWS_AS(apply_B2(rho, 1.0, coarse), Error);
}

TEST_CASE("A1 constant output") {
  std::mt19937_64 rng(7);
  auto a = apply_A1(random_state(6, rng), 1.3);
  auto b = apply_A1(DensityOperator::number_state(3, 6), 1.3);
  CHECK(trace_distance(a, b) < 1e-15);
  CHECK(trace_distance(a, gibbs_state(1.3, a.dim())) < 1e-10);
  CHECK(std::abs(von_neumann_entropy(a) - oracle::g(1.3)) < 1e-8);
}

TEST_CASE("A2 position measurement channel") {
  auto vac = DensityOperator::number_state(0, 6);
  auto out = apply_A2(vac, 0.0);
  auto grid = uniform_grid(12.0, 601);
  RVector px = position_distribution(out, grid);
  RVector x2(px.size());
  for (int i = 0; i < px.size(); ++i) x2(i) = grid[i] * grid[i] * px(i);
  CHECK(std::abs(oracle::trapezoid(x2, grid[1] - grid[0]) - 1.0) < 1e-4);

  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    auto rho = random_state(8, rng);
    CHECK(von_neumann_entropy(apply_A2(rho, 0.5)) >= oracle::g(0.5) - 1e-9);
  }

  // Same ⟨x|ρ|x⟩ after flipping the sign of every odd-odd... p-moments:
  // complex conjugation in the Fock basis maps p → −p and leaves P_ρ alone.
  auto rho = random_state(8, rng);
  DensityOperator conj(rho.matrix().conjugate());
  CHECK(trace_distance(apply_A2(rho, 0.5), apply_A2(conj, 0.5)) < 1e-10);

  auto narrow = uniform_grid(2.0, 41);
  CHECK_THROWS_AS(apply_A2(rho, 0.5, narrow), Error);
}

TEST_CASE("A2 applied twice through two routes") {
  std::mt19937_64 rng(10);
  auto rho = random_state(6, rng);
  auto once = apply_A2(rho, 0.3);
  auto twice_direct = apply_A2(once, 0.3);
  FockChannel plan(ChannelSpec::a2(0.3), once.dim());
  auto twice_plan = plan(once);
  CHECK(trace_distance(twice_direct, twice_plan) < 1e-4);
}

TEST_CASE("B1 position noise") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 5; ++k) {
    auto rho = random_state(8, rng);
    auto out = apply_B1(rho);
    auto mi = quadrature_moments(rho.matrix());
    auto mo = quadrature_moments(out.matrix());
    CHECK(std::abs((mo.var_q + mo.mean_q * mo.mean_q) - (mi.var_q + mi.mean_q * mi.mean_q) - 0.5) < 1e-5);
    CHECK(std::abs((mo.var_p + mo.mean_p * mo.mean_p) - (mi.var_p + mi.mean_p * mi.mean_p)) < 1e-6);
    CHECK(von_neumann_entropy(out) >= von_neumann_entropy(rho) - 1e-9);
  }
}

TEST_CASE("B1 against a direct sum with exact displacement matrices") {
  std::mt19937_64 rng(13);
  auto rho = random_state(4, rng);
  auto grid = uniform_grid(6.5, 163);
  const double h = grid[1] - grid[0];
  const int out_dim = 60;
  CMatrix ref = CMatrix::Zero(out_dim, out_dim);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double w = h * std::exp(-grid[j] * grid[j]) / std::sqrt(M_PI);
    if (j == 0 || j + 1 == grid.size()) w *= 0.5;
    CMatrix dm = oracle::displacement_exact(-grid[j] / std::sqrt(2.0), out_dim, 4);
    ref += w * dm * rho.matrix() * dm.adjoint();
  }
  auto out = apply_B1(rho, grid);
  CHECK(trace_distance(out.matrix(), ref) < 1e-9);
}

TEST_CASE("characteristic-function relations") {
  std::vector<cplx> mus;
  for (double re : {-1.0, -0.4, 0.0, 0.7, 1.05})
    for (double im : {-1.0, -0.3, 0.0, 0.5, 1.05}) mus.emplace_back(re, im);

  auto g = gibbs_state(1.0, 80);
  CHECK(verify_char_relation(g, ChannelSpec::attenuator(0.4, 0.5), mus) < 1e-5);
  CHECK(verify_char_relation(g, ChannelSpec::attenuator(1.0, 0.5), mus) < 1e-8);

  std::mt19937_64 rng(14);
  auto rho = random_state(10, rng);
  CHECK(verify_char_relation(rho, ChannelSpec::attenuator(0.6, 0.3), mus) < 1e-5);
  CHECK(verify_char_relation(rho, ChannelSpec::a1(0.7), mus) < 1e-6);
  CHECK(verify_char_relation(rho, ChannelSpec::b1(), mus) < 1e-6);
  CHECK(verify_char_relation(rho, ChannelSpec::a2(0.4), mus) < 1e-6);
  CHECK(verify_char_relation(rho, ChannelSpec::b2(0.4), mus) < 1e-6);
  CHECK(verify_char_relation(rho, ChannelSpec::amplifier(1.4, 0.2), mus) < 1e-6);
  CHECK_THROWS_AS(verify_char_relation(rho, ChannelSpec::class_d(0.5, 0.1), mus), Error);
}

TEST_CASE("photon bookkeeping for every class") {
  std::mt19937_64 rng(15);
  for (const auto& ch : all_classes()) {
    CAPTURE(ch.describe());
    FockChannel plan(ch, 10);
    for (int k = 0; k < 10; ++k) {
      auto rho = random_state(10, rng);
      auto out = plan(rho);
      const double predicted = predicted_output_photons(ch, mean_photon(rho), second_moment_q(rho.matrix()));
      CHECK(std::abs(mean_photon(out) - predicted) < 1e-5);
    }
  }
}

TEST_CASE("monotonicity, trace and positivity") {
  std::mt19937_64 rng(16);
  for (const auto& ch : all_classes()) {
    CAPTURE(ch.describe());
    FockChannel plan(ch, 8);
    for (int k = 0; k < 6; ++k) {
      auto rho = random_state(8, rng), sigma = random_state(8, rng);
      CMatrix a = plan.apply(rho.matrix()), b = plan.apply(sigma.matrix());
      CHECK(std::abs(a.trace().real() - 1.0) < 1e-6);
      CHECK(eigh(a).values.minCoeff() > -1e-7);
      const double before = relative_entropy(rho, sigma);
      const double after = relative_entropy(DensityOperator(a / a.trace().real()), DensityOperator(b / b.trace().real()));
      CHECK(after <= before + 1e-6);
    }
  }
}

TEST_CASE("channel spec validation") {
  CHECK_THROWS_AS(ChannelSpec::attenuator(-0.1, 0.0), Error);
  CHECK_THROWS_AS(ChannelSpec::amplifier(0.5, 0.0), Error);
  CHECK_THROWS_AS(ChannelSpec::class_d(-1.0, 0.0), Error);
  CHECK_THROWS_AS(parse_channel_class("Z"), Error);
  CHECK(parse_channel_class("att") == ChannelClass::C_att);
  auto d = ChannelSpec::class_d(0.5, 0.2);
  CHECK(std::abs(d.c_eff() - (0.5 * 1.2 + 0.2)) < 1e-15);
}

TEST_CASE("large squeezer sectors stay isometric") {
  auto c = SectorCoupling::two_mode_squeezer(3.0, 300, 6, 6);
  CHECK(c.unitarity_defect() < 1e-12);
  auto small = SectorCoupling::two_mode_squeezer(3.0, 90, 6, 6);
  // Low rows agree between the series and the dense eigen route.
  for (int i = 0; i < 6; ++i)
    for (int m = 0; m < 6; ++m) {
      auto a = c.column(i, m), b = small.column(i, m);
      for (int k = 0; k < 20; ++k) CHECK(std::abs(a.amp[k] - b.amp[k]) < 1e-9);
    }
}

TEST_CASE("dual map satisfies Tr[X Φ(ρ)] = Tr[Φ†(X) ρ]") {
  std::mt19937_64 rng(77);
  for (const auto& ch : all_classes()) {
    CAPTURE(ch.describe());
    FockChannel f(ch, 10);
    const int dout = f.output_dim();
    for (int trial = 0; trial < 3; ++trial) {
      const CMatrix rho = random_state(10, rng).matrix();
      CMatrix x = CMatrix::Random(dout, dout);
      x = (x + x.adjoint()).eval();
      const cplx lhs = (x * f.apply(rho)).trace();
      const cplx rhs = (f.adjoint(x) * rho).trace();
      CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
    }
    // Trace preservation on the kept levels: Φ†(1) ≈ 1.
    const CMatrix one = f.adjoint(CMatrix::Identity(dout, dout));
    CHECK((one - CMatrix::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-9);
  }
}
