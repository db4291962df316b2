#include <doctest.h>

#include <cmath>

#include "qcp/models.hpp"
#include "qcp/observables.hpp"

using namespace qcp;

namespace {

Vec product_state(int L, const Vec& one) {
  Vec v = one;
  for (int k = 1; k < L; ++k) {
    Vec w(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) w.segment(2 * i, 2) = v(i) * one;
    v = w;
  }
  return v;
}

GroundStateRecord tracked(const ModelParams& base, double g) {
  const auto t = sweep(base, linear_grid(std::max(g - 1.0, 0.0), g, 21));
  return t.records.back();
}

}  // namespace

TEST_CASE("magnetizations of simple states") {
  Vec up = Vec::Zero(2), plus(2);
  up(1) = 1.0;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto a = magnetizations(product_state(4, up), 4);
  CHECK(a.mz == doctest::Approx(4.0));
  CHECK(a.nup == doctest::Approx(4.0));
  CHECK(a.mx == doctest::Approx(0.0));
  const auto b = magnetizations(product_state(3, plus), 3);
  CHECK(b.mx == doctest::Approx(3.0));
  CHECK(b.mz == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS(magnetizations(2.0 * product_state(3, plus), 3));
}

TEST_CASE("biorthogonal expectation reduces to the plain one for Hermitian operators") {
  Vec plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Vec v = product_state(3, plus);
  const auto X = site_sum(Pauli::X, 3);
  CHECK(std::abs(expect_lr(v, v, X) - expect_rr(v, X)) < 1e-14);
  CHECK_THROWS(expect_lr(Vec::Zero(8), v, X));
}

TEST_CASE("entanglement entropy") {
  Vec plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  for (int la = 1; la < 5; ++la) CHECK(entanglement_entropy(product_state(5, plus), 5, la) < 1e-12);
  // GHZ on 4 sites: ln 2 for every cut.
  Vec ghz = Vec::Zero(16);
  ghz(0) = ghz(15) = 1.0 / std::sqrt(2.0);
  for (int la = 1; la < 4; ++la) CHECK(entanglement_entropy(ghz, 4, la) == doctest::Approx(std::log(2.0)));
  // Singlet on sites 0 and 1 times |0> on site 2: the cut after site 0 sees ln 2.
  Vec s = Vec::Zero(8);
  s(2) = 1.0 / std::sqrt(2.0);   // |010>
  s(4) = -1.0 / std::sqrt(2.0);  // |100>
  CHECK(entanglement_entropy(s, 3, 1) == doctest::Approx(std::log(2.0)));
  CHECK(entanglement_entropy(s, 3, 2) < 1e-12);
  CHECK_THROWS(entanglement_entropy(s, 3, 3));
  CHECK(half_partition(6) == 3);
  CHECK(half_partition(7) == 4);
}

TEST_CASE("connected correlations vanish for product states") {
  Vec one(2);
  one << 0.6, 0.8;
  const auto prof = correlation_profile(product_state(5, one), 5);
  REQUIRE(prof.n.size() == 4);
  CHECK(prof.n.front() == 2);
  CHECK(prof.n.back() == 5);
  for (double v : prof.values) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("energy gap") {
  CHECK(energy_gap(std::vector<cplx>{{0, -3}, {0, -1}, {2, 0}}, cplx(0, -3)) == doctest::Approx(2.0));
  CHECK_THROWS(energy_gap(std::vector<cplx>{{0, 0}}, cplx(0, 0)));
}

TEST_CASE("susceptibility is a linear response below the transition") {
  ModelParams p;
  p.L = 6;
  for (double g : {12.0, 13.0}) {
    p.gamma = cplx(0, g);
    const auto rec = tracked(p, g);
    SweepOptions o;
    const auto a = susceptibility(p, rec, 1e-4, o, true);
    CHECK(a.converged);
    const auto b = susceptibility(p, rec, 1e-5, o);
    CHECK(std::abs(a.chi - b.chi) < 1e-3 * std::abs(b.chi));
    CHECK(b.chi > 0.0);
  }
  CHECK_THROWS(susceptibility(p, tracked(p, 12.0), 0.0, SweepOptions{}));
}

TEST_CASE("order parameter vanishes past the transition") {
  ModelParams p;
  p.L = 6;
  const auto t = sweep(p, linear_grid(13.0, 14.5, 31));
  const auto& last = t.records.back();
  CHECK(std::abs(magnetizations(last.state, 6).mx) < 1e-6);
  CHECK(std::abs(magnetizations(t.records.front().state, 6).mx) > 0.1);
}
