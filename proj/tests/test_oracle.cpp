#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "tqe/fock.hpp"

using namespace tqe;

namespace {

Eigen::Matrix2cd hadamard2() {
  Eigen::Matrix2cd h;
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return h;
}

CMat random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(m);
  return CMat(qr.householderQ());
}

// Discrete correlated two-photon kernel on a tiny grid, normalized so that
// sum |Phi|^2 dt^2 = 1.
CMat tiny_kernel(const TimeGrid& g, double s_sum, double s_diff) {
  const int n = g.n_bins();
  CMat m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double sum = g.t(j) + g.t(k), diff = g.t(j) - g.t(k);
      m(j, k) = std::exp(-sum * sum / (4 * s_sum * s_sum) - diff * diff / (4 * s_diff * s_diff));
    }
  m /= std::sqrt(m.squaredNorm()) * g.dt();
  return m;
}

}  // namespace

TEST_CASE("basis enumeration matches the stars-and-bars count") {
  FockBasis basis({"a", "b"}, 3, 4);
  // C(6 + 4, 4) occupation vectors with total <= 4.
  CHECK(basis.size() == 210);
  CHECK(basis.occupation(0) == std::vector<uint8_t>(6, 0));
  for (int i = 0; i < basis.size(); ++i)
    CHECK(basis.index_of(basis.occupation(i)) == i);
  CHECK_THROWS_AS(FockBasis({"a"}, 7, 2), std::invalid_argument);
  CHECK_THROWS_AS(FockBasis({"a"}, 2, 5), std::invalid_argument);
}

TEST_CASE("identity unitary leaves any vector unchanged") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a", "b"}, 2, 3);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss;
  CVec amp(basis->size());
  for (int i = 0; i < basis->size(); ++i) amp(i) = Complex(gauss(rng), gauss(rng));
  FockVector v(basis, amp);
  v = v.normalized();
  FockVector out = apply_linear_unitary(v, CMat::Identity(4, 4));
  CHECK((out.amp() - v.amp()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two photons meeting at a splitter bunch completely") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a", "b"}, 1, 2);
  FockVector v(basis);
  v.set({1, 1}, 1.0);
  FockVector out = apply_linear_unitary(v, mode_pair_unitary(*basis, "a", "b", hadamard2()));
  CHECK(std::norm(out.at({2, 0})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::norm(out.at({0, 2})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(out.at({1, 1})) < 1e-12);
  CHECK(out.at({2, 0}).real() * out.at({0, 2}).real() < 0.0);  // opposite signs
}

TEST_CASE("fock lift agrees with the amplitude-level splitter") {
  TimeGrid g(0.0, 1.0, 3);
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  auto random_mat = [&] {
    CMat m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
  };

  for (int trial = 0; trial < 5; ++trial) {
    TwoPhotonState st(g, {"a", "b"});
    st.add_raw_term("a", "b", random_mat());
    st.add_raw_term("a", "a", random_mat());
    st.add_raw_term("b", "b", random_mat());
    st = st.normalized();

    auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a", "b"}, 3, 2);
    FockVector before = fock_from_two_photon(st, basis);
    CHECK(before.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));

    FockVector lifted =
        apply_linear_unitary(before, mode_pair_unitary(*basis, "a", "b", hadamard2()));
    TwoPhotonState after = apply_beam_splitter(st, hadamard_bs("a", "b", "a", "b"));
    FockVector mapped = fock_from_two_photon(after, basis);

    CHECK((lifted.amp() - mapped.amp()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("linear unitaries conserve the photon number exactly") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a", "b"}, 2, 3);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> gauss;
  CVec amp(basis->size());
  for (int i = 0; i < basis->size(); ++i) amp(i) = Complex(gauss(rng), gauss(rng));
  FockVector v = FockVector(basis, amp).normalized();

  CMat u = random_unitary(4, rng);
  FockVector out = apply_linear_unitary(v, u);
  CHECK(out.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  for (int n = 0; n <= basis->cutoff(); ++n) {
    double before = 0.0, after = 0.0;
    for (int i = 0; i < basis->size(); ++i) {
      if (basis->total_photons(i) != n) continue;
      before += std::norm(v.amp()(i));
      after += std::norm(out.amp()(i));
    }
    CHECK(after == doctest::Approx(before).epsilon(1e-10));
  }
}

TEST_CASE("coherent injection reproduces poisson statistics") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a"}, 1, 4);
  FockVector vac(basis);
  vac.set({0}, 1.0);

  SUBCASE("zero amplitude leaves the state unchanged") {
    FockVector out = coherent_inject(vac, {0.0});
    CHECK((out.amp() - vac.amp()).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("photon-number distribution is poisson") {
    double err = 0.0;
    FockVector out = coherent_inject(vac, {Complex(0.3)}, &err);
    CHECK(err < 1e-4);
    const double nbar = 0.09;
    for (int n = 0; n <= 4; ++n) {
      double expected = std::exp(-nbar) * std::pow(nbar, n) / std::tgamma(n + 1.0);
      CHECK(std::norm(out.at({static_cast<uint8_t>(n)})) == doctest::Approx(expected).epsilon(1e-6));
    }
  }

  SUBCASE("over-cutoff amplitude is rejected") {
    CHECK_THROWS_AS(coherent_inject(vac, {Complex(2.0)}), std::invalid_argument);
  }

  SUBCASE("injection into an occupied mode is rejected") {
    FockVector one(basis);
    one.set({1}, 1.0);
    CHECK_THROWS_AS(coherent_inject(one, {Complex(0.3)}), std::invalid_argument);
  }
}

TEST_CASE("split coherent amplitudes remerge classically on a splitter") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"u", "v"}, 1, 4);
  FockVector vac(basis);
  vac.set({0, 0}, 1.0);
  const Complex alpha(0.5, 0.2);
  const double s = 1.0 / std::sqrt(2.0);
  FockVector split = coherent_inject(vac, {alpha * s, alpha * s});
  FockVector merged = apply_linear_unitary(split, mode_pair_unitary(*basis, "u", "v", hadamard2()));
  // All photons end up in u: v stays vacuum.
  auto dist_v = mode_total_distribution(merged, "v");
  CHECK(dist_v[0] == doctest::Approx(merged.norm_sq()).epsilon(1e-10));
  auto dist_u = mode_total_distribution(merged, "u");
  CHECK(dist_u[1] == doctest::Approx(std::exp(-std::norm(alpha)) * std::norm(alpha)).epsilon(1e-6));
}

TEST_CASE("exponential raise is the unnormalized coherent exponential") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a"}, 2, 4);
  FockVector vac(basis);
  vac.set({0, 0}, 1.0);
  std::vector<Complex> alphas{Complex(0.2, 0.1), Complex(-0.1, 0.3)};
  FockVector raised = exponential_raise(vac, alphas);
  double total = std::norm(alphas[0]) + std::norm(alphas[1]);
  FockVector coh = coherent_inject(vac, alphas);
  CHECK((raised.amp() * std::exp(-0.5 * total) - coh.amp()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conditioning on an impossible count returns probability zero") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a"}, 2, 2);
  FockVector v(basis);
  v.set({1, 1}, 1.0);
  auto res = condition_on_mode_totals(v, {{"a", 3}});
  CHECK(res.probability == 0.0);
  CHECK(res.empty);
}

TEST_CASE("bucket conditioning partitions probability") {
  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"a", "b"}, 2, 3);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss;
  CVec amp(basis->size());
  for (int i = 0; i < basis->size(); ++i) amp(i) = Complex(gauss(rng), gauss(rng));
  FockVector v = FockVector(basis, amp).normalized();

  double total = 0.0;
  for (int n = 0; n <= 3; ++n) total += condition_on_mode_totals(v, {{"a", n}}).probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));

  auto dist = mode_total_distribution(v, "a");
  double even = condition_on_mode_parity(v, "a", 0).probability;
  double odd = condition_on_mode_parity(v, "a", 1).probability;
  CHECK(even == doctest::Approx(dist[0] + dist[2]).epsilon(1e-10));
  CHECK(even + odd == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("idler interference heralds the signal exchange symmetry") {
  // Two identical pair sources; idlers mixed on a splitter and detected.
  TimeGrid g(-1.5, 1.5, 3);
  CMat phi = tiny_kernel(g, 1.3, 0.5);
  const double dt = g.dt();

  auto basis = std::make_shared<FockBasis>(std::vector<ModeLabel>{"ai", "as", "bi", "bs"}, 3, 4);
  FockVector psi(basis);
  std::vector<uint8_t> occ(basis->single_particle_dim(), 0);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l)
        for (int m = 0; m < 3; ++m) {
          std::fill(occ.begin(), occ.end(), 0);
          occ[basis->slot("ai", j)] += 1;
          occ[basis->slot("as", k)] += 1;
          occ[basis->slot("bi", l)] += 1;
          occ[basis->slot("bs", m)] += 1;
          int idx = basis->index_of(occ);
          Complex add = phi(j, k) * phi(l, m) * dt * dt;
          // collision-free: four distinct modes
          psi.amp()(idx) += add;
        }
  CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));

  FockVector after = apply_linear_unitary(psi, mode_pair_unitary(*basis, "ai", "bi", hadamard2()));

  // Coincident: one idler photon in each splitter output.
  auto coincident = condition_on_mode_totals(after, {{"ai", 1}, {"bi", 1}});
  CMat pair_anti = reduced_pair_density(coincident.state, "as", "bs");
  CHECK(pair_exchange_expectation(pair_anti, 3) == doctest::Approx(-1.0).epsilon(1e-10));

  // Coalescent: both idlers in one output.
  auto coalescent = condition_on_mode_totals(after, {{"ai", 2}, {"bi", 0}});
  CMat pair_sym = reduced_pair_density(coalescent.state, "as", "bs");
  CHECK(pair_exchange_expectation(pair_sym, 3) == doctest::Approx(1.0).epsilon(1e-10));

  // Time-resolved record: conditional signal amplitude is purely antisymmetric.
  auto record = condition_on_pattern(after, {{"ai", 0, 1}, {"bi", 2, 1}});
  CHECK(record.probability > 0.0);
  CMat sig = CMat::Zero(3, 3);
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m) {
      std::fill(occ.begin(), occ.end(), 0);
      occ[basis->slot("ai", 0)] = 1;
      occ[basis->slot("bi", 2)] = 1;
      occ[basis->slot("as", k)] += 1;
      occ[basis->slot("bs", m)] += 1;
      sig(k, m) = record.state.at(occ);
    }
  CHECK((sig + sig.transpose()).cwiseAbs().maxCoeff() < 1e-10);
}
