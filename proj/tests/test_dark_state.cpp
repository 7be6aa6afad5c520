#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "cpt/dark_state.hpp"
#include "cpt/dressed.hpp"
#include "cpt/liouvillian.hpp"
#include "test_helpers.hpp"

using cpt::ComplexMatrix;
using cpt::Occupation;
using cpt::RealMatrix;
using cpt::RealVector;
using cpt::SymmetricBasis;
using cpt::SystemParams;

namespace {

SystemParams driven(int n, double w2, double w3) {
  SystemParams p;
  p.n_atoms = n;
  p.omega2 = w2;
  p.omega3 = w3;
  return p;
}

}  // namespace

TEST_CASE("excitation chain Hamiltonian: structure and pinned spectra") {
  {
    // single atom: the chain is the full three-level system
    const RealMatrix h = cpt::build_chain_hamiltonian(driven(1, 3.0, 4.0));
    REQUIRE(h.rows() == 3);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-5.0).epsilon(1e-14));
    CHECK(std::abs(es.eigenvalues()(1)) < 1e-13);
    CHECK(es.eigenvalues()(2) == doctest::Approx(5.0).epsilon(1e-14));
  }
  {
    // two atoms: five chain states, one zero mode at two-photon resonance
    const RealMatrix h = cpt::build_chain_hamiltonian(driven(2, 2.0, 7.0));
    REQUIRE(h.rows() == 5);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    CHECK(es.eigenvalues().cwiseAbs().minCoeff() < 1e-12);
  }
  {
    // detuning shifts the whole comb: no zero eigenvalue left
    SystemParams p = driven(3, 2.0, 2.0);
    p.delta = 1.0;
    const RealMatrix h = cpt::build_chain_hamiltonian(p);
    REQUIRE(h.rows() == 7);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
    CHECK(es.eigenvalues().cwiseAbs().minCoeff() > 0.1);
    // diagonal alternates -N delta on ground and -(N-1) delta on excited rows
    for (int i = 0; i < 7; ++i) {
      CHECK(h(i, i) == doctest::Approx(i % 2 == 0 ? -3.0 : -2.0).epsilon(1e-15));
    }
  }
  {
    // symmetric tridiagonal with the square-root ladder couplings
    const double w2 = 1.3, w3 = 0.6;
    const int n = 4;
    const RealMatrix h = cpt::build_chain_hamiltonian(driven(n, w2, w3));
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i + 1 < h.rows(); ++i) {
      const int k = i / 2;
      const double expected = (i % 2 == 0) ? w3 * std::sqrt(double(n - k))
                                           : w2 * std::sqrt(double(k + 1));
      CHECK(h(i, i + 1) == doctest::Approx(expected).epsilon(1e-15));
    }
    for (int i = 0; i < h.rows(); ++i) {
      for (int j = 0; j < h.cols(); ++j) {
        if (std::abs(i - j) > 1) CHECK(h(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("chain states and couplings agree with the collective Hamiltonian") {
  std::mt19937 rng(21);
  for (int n = 1; n <= 5; ++n) {
    SystemParams p = testutil::random_params(rng, n);
    p.delta = 0.0;
    const RealMatrix chain = cpt::build_chain_hamiltonian(p);
    const auto triples = cpt::chain_state_triples(n);
    REQUIRE(static_cast<int>(triples.size()) == 2 * n + 1);
    SymmetricBasis b(n);
    const ComplexMatrix full = cpt::build_hamiltonian(p, b);
    for (int i = 0; i < chain.rows(); ++i) {
      for (int j = 0; j < chain.cols(); ++j) {
        const auto v =
            full(b.index_of(triples[i]), b.index_of(triples[j]));
        CHECK(std::abs(v.real() - chain(i, j)) < 1e-12);
        CHECK(v.imag() == 0.0);
      }
    }
  }
}

TEST_CASE("dark state: pinned coefficient vectors") {
  {
    // N=1, equal couplings: (|2> - |3>)/sqrt(2) on the chain (|3>,|1>,|2>)
    const auto d = cpt::dark_state(driven(1, 5.0, 5.0));
    CHECK(d.theta == doctest::Approx(M_PI / 4).epsilon(1e-15));
    CHECK(d.coefficients(0) == doctest::Approx(1.0 / std::sqrt(2)).epsilon(1e-14));
    CHECK(d.coefficients(1) == 0.0);
    CHECK(d.coefficients(2) ==
          doctest::Approx(-1.0 / std::sqrt(2)).epsilon(1e-14));
  }
  {
    // N=2, equal couplings: (1/2, 0, -1/sqrt(2), 0, 1/2)
    const auto d = cpt::dark_state(driven(2, 5.0, 5.0));
    CHECK(d.coefficients(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.coefficients(2) ==
          doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-14));
    CHECK(d.coefficients(4) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.coefficients(1) == 0.0);
    CHECK(d.coefficients(3) == 0.0);
  }
  {
    // omega3 = 0: level 3 decouples, the dark state is |2^0> = |3...3>
    const auto d = cpt::dark_state(driven(3, 4.0, 0.0));
    CHECK(d.coefficients(0) == 1.0);
    CHECK(d.coefficients.tail(6).cwiseAbs().maxCoeff() == 0.0);
    // omega2 = 0: all weight at the far end |2^N>
    const auto e = cpt::dark_state(driven(3, 0.0, 4.0));
    CHECK(std::abs(e.coefficients(6)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.coefficients.head(6).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("dark state is a numerical zero mode up to the size cap") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> draw(0.3, 9.0);
  for (int n : {1, 2, 3, 5, 8, 13, 21, 30, 40}) {
    const SystemParams p = driven(n, draw(rng), draw(rng));
    const auto d = cpt::dark_state(p);
    CHECK(d.coefficients.norm() == doctest::Approx(1.0).epsilon(1e-13));
    // excited chain positions carry nothing
    for (int i = 1; i < 2 * n + 1; i += 2) CHECK(d.coefficients(i) == 0.0);
    const RealMatrix h = cpt::build_chain_hamiltonian(p);
    CHECK((h * d.coefficients).norm() / h.norm() <= 1e-10);
  }
}

TEST_CASE("recurrence march reproduces the closed binomial form") {
  std::mt19937 rng(78);
  std::uniform_real_distribution<double> draw(0.2, 11.0);
  for (int n : {1, 4, 17, 40}) {
    for (int rep = 0; rep < 5; ++rep) {
      const SystemParams p = driven(n, draw(rng), draw(rng));
      const auto marched = cpt::dark_state(p);
      const auto closed = cpt::dark_state_closed_form(p);
      CHECK(marched.theta == closed.theta);
      CHECK((marched.coefficients - closed.coefficients).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
}

TEST_CASE("the collective dark state is the single-atom dark state product") {
  std::mt19937 rng(79);
  std::uniform_real_distribution<double> draw(0.5, 6.0);
  for (int n = 1; n <= 8; ++n) {
    const SystemParams p = driven(n, draw(rng), draw(rng));
    CHECK(cpt::product_form_overlap(p) == doctest::Approx(1.0).epsilon(1e-10));
    // chain amplitudes agree one by one, not just in the inner product
    const auto d = cpt::dark_state(p);
    const RealVector prod = cpt::chain_product_state(p);
    CHECK((d.coefficients - prod).cwiseAbs().maxCoeff() < 1e-12);
  }

  // independent tensor-space check at N = 3: expand psi1 x psi1 x psi1 in the
  // 27-dimensional product space and project onto the symmetrized chain states
  {
    const SystemParams p = driven(3, 2.0, 5.0);
    const auto v = cpt::dressed_vectors(p);
    Eigen::VectorXcd product(27);
    for (int idx = 0; idx < 27; ++idx) {
      double amp = 1.0;
      int rest = idx;
      for (int atom = 0; atom < 3; ++atom) {
        amp *= v.psi1(rest % 3);
        rest /= 3;
      }
      product(idx) = amp;
    }
    const auto triples = cpt::chain_state_triples(3);
    const auto d = cpt::dark_state(p);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const auto sym = testutil::symmetrized_state(3, triples[i]);
      const double amp = (sym.adjoint() * product)(0, 0).real();
      CHECK(std::abs(amp - d.coefficients(static_cast<int>(i))) < 1e-12);
    }
  }

  // truncating the chain destroys the product property
  {
    const SystemParams p = driven(5, 3.0, 3.0);
    auto d = cpt::dark_state(p);
    d.coefficients(2 * 5) = 0.0;  // drop the last ground amplitude
    d.coefficients.normalize();
    const RealVector prod = cpt::chain_product_state(p);
    const double overlap = std::pow(d.coefficients.dot(prod), 2);
    CHECK(overlap < 1.0 - 1e-3);
  }
}

TEST_CASE("neighbouring collective states D2, D3") {
  SystemParams p = driven(4, 2.0, 3.0);
  SymmetricBasis b(4);
  const auto [d2, d3] = cpt::d2_d3_states(p, b);
  CHECK(d2.norm() == 1.0);
  CHECK(d3.norm() == 1.0);
  CHECK(d2.dot(d3) == 0.0);
  CHECK(d2(b.index_of(Occupation{3, 1, 0})) == 1.0);
  CHECK(d3(b.index_of(Occupation{3, 0, 1})) == 1.0);

  // they carry dressed energy +/- Omega relative to the dark state, measured
  // with the collective label-difference operator Omega (R22 - R33)
  const ComplexMatrix energy =
      p.omega() * (cpt::collective_operator(b, 2, 2) -
                   cpt::collective_operator(b, 3, 3));
  const Eigen::VectorXcd c2 = d2.cast<cpt::Complex>();
  const Eigen::VectorXcd c3 = d3.cast<cpt::Complex>();
  CHECK((c2.adjoint() * energy * c2)(0, 0).real() ==
        doctest::Approx(p.omega()).epsilon(1e-14));
  CHECK((c3.adjoint() * energy * c3)(0, 0).real() ==
        doctest::Approx(-p.omega()).epsilon(1e-14));

  // single atom: D2 and D3 are the +/- dressed states themselves
  SymmetricBasis b1(1);
  const auto [e2, e3] = cpt::d2_d3_states(driven(1, 2.0, 3.0), b1);
  CHECK(e2(b1.index_of(Occupation{0, 1, 0})) == 1.0);
  CHECK(e3(b1.index_of(Occupation{0, 0, 1})) == 1.0);
}

TEST_CASE("trapping and escape rates scale linearly with N") {
  {
    // single atom, nbar = 1, equal couplings: gamma1 = gamma, gamma2 =
    // gamma/2, so escape 4*1*gamma2 = 2 gamma and feeding 2*1*gamma1 = 2 gamma
    SystemParams p = driven(1, 5.0, 5.0);
    p.nbar2 = p.nbar3 = 1.0;
    const auto r = cpt::dark_rate_coefficients(p);
    CHECK(r.out_rate == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.in_rate == doctest::Approx(2.0).epsilon(1e-14));
  }
  std::mt19937 rng(91);
  for (int n : {1, 2, 5, 8, 12}) {
    SystemParams p = testutil::random_params(rng, n);
    const auto rates = cpt::dressed_rates(p);
    const auto r = cpt::dark_rate_coefficients(p);
    // exact coefficient recovery: the generator entries are single products
    CHECK(r.out_rate == 4.0 * n * rates.gamma2);
    CHECK(r.in_rate == 2.0 * n * rates.gamma1);
  }
  {
    // zero-temperature reservoirs: the dark state cannot be left
    SystemParams p = driven(6, 1.0, 2.0);
    const auto r = cpt::dark_rate_coefficients(p);
    CHECK(r.out_rate == 0.0);
    CHECK(r.in_rate > 0.0);
  }
}

TEST_CASE("input validation on the chain route") {
  SystemParams undriven;
  undriven.n_atoms = 2;
  CHECK_THROWS_AS(cpt::build_chain_hamiltonian(undriven),
                  std::invalid_argument);
  CHECK_THROWS_AS(cpt::dark_state(driven(41, 1.0, 1.0)),
                  std::invalid_argument);
  SystemParams detuned = driven(2, 1.0, 1.0);
  detuned.delta = 0.3;
  CHECK_THROWS_AS(cpt::dark_state(detuned), std::invalid_argument);
  CHECK_THROWS_AS(cpt::dark_rate_coefficients(detuned), std::invalid_argument);
}
