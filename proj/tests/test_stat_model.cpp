#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "seqmeas/error.hpp"
#include "seqmeas/stat_model.hpp"

using namespace seqmeas;
using namespace seqmeas::stat_model;

namespace {

SequentialModel make(RealMatrix pi, std::vector<double> x, std::vector<double> xt) {
  SequentialModel m;
  m.pi = std::move(pi);
  m.x = Eigen::Map<RealVector>(x.data(), static_cast<Eigen::Index>(x.size()));
  m.x_tilde = Eigen::Map<RealVector>(xt.data(), static_cast<Eigen::Index>(xt.size()));
  return m;
}

SequentialModel trivial() { return make(RealMatrix::Ones(1, 1), {1.0}, {1.0}); }

// Pi = [[1],[1]] read as one second outcome and two first outcomes
SequentialModel zero_x_model() {
  RealMatrix pi(1, 2);
  pi << 1.0, 1.0;
  return make(pi, {0.0, 1.0}, {0.5});
}

// Random abstract model: nonnegative Pi with some zeros, x and x~ rescaled so
// that both normalisations hold. Optionally zeroes one x entry.
SequentialModel random_model(std::mt19937_64& rng, bool zero_x) {
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int ni = size(rng) + (zero_x ? 1 : 0);
  const int nj = size(rng);
  RealMatrix pi(nj, ni);
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) pi(j, i) = u(rng) < 0.2 ? 0.0 : 3.0 * u(rng);
  for (int i = 0; i < ni; ++i) pi(i % nj, i) += 0.5;  // no empty column
  for (int j = 0; j < nj; ++j) pi(j, j % ni) += 0.5;  // no empty row
  RealVector x(ni), xt(nj);
  for (int i = 0; i < ni; ++i) x(i) = u(rng) + 0.01;
  for (int j = 0; j < nj; ++j) xt(j) = u(rng) + 0.01;
  if (zero_x) x(0) = 0.0;
  x /= (pi * x).sum();
  xt /= (pi.transpose() * xt).sum();
  SequentialModel m;
  m.pi = pi;
  m.x = x;
  m.x_tilde = xt;
  return m;
}

}  // namespace

TEST_SUITE("stat_model") {

TEST_CASE("validate_model examples") {
  CHECK(validate_model(trivial()).ok());
  const auto bad = validate_model(make(RealMatrix::Ones(1, 1), {2.0}, {1.0}));
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.max_residual() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(require_valid(make(RealMatrix::Ones(1, 1), {2.0}, {1.0})), InvariantError);
}

TEST_CASE("shape errors are structural, not violations") {
  CHECK_THROWS_AS(validate_model(make(RealMatrix::Ones(2, 2), {0.5}, {0.5, 0.5})), ShapeError);
  CHECK_THROWS_AS(validate_model(make(RealMatrix::Ones(1, 1), {1.0}, {1.0, 0.0})), ShapeError);
}

TEST_CASE("negative entries are violations") {
  RealMatrix pi(1, 2);
  pi << 1.5, -0.5;
  const auto r = validate_model(make(pi, {1.0, 1.0}, {1.0}));
  CHECK_FALSE(r.ok());
}

TEST_CASE("degeneracy marginals") {
  auto d = degeneracy_marginals(trivial());
  CHECK(d.d(0) == 1.0);
  CHECK(d.d_tilde(0) == 1.0);
  const auto m = make(RealMatrix::Ones(2, 2), {0.25, 0.25}, {0.25, 0.25});
  d = degeneracy_marginals(m);
  CHECK(d.d(0) == 2.0);
  CHECK(d.d(1) == 2.0);
  CHECK(d.d_tilde(0) == 2.0);
  CHECK(d.d_tilde(1) == 2.0);
}

TEST_CASE("joint distributions, hand enumeration") {
  auto jd = joint_distributions(trivial());
  CHECK(jd.forward(0, 0) == 1.0);
  CHECK(jd.reverse(0, 0) == 1.0);
  jd = joint_distributions(zero_x_model());
  CHECK(jd.forward(0, 0) == 0.0);
  CHECK(jd.forward(1, 0) == 1.0);
  CHECK(jd.reverse(0, 0) == 0.5);
  CHECK(jd.reverse(0, 1) == 0.5);
}

TEST_CASE("marginal set") {
  auto ms = marginal_set(trivial());
  CHECK(ms.p(0) == 1.0);
  CHECK(ms.q(0) == 1.0);
  CHECK(ms.p_tilde(0) == 1.0);
  CHECK(ms.q_tilde(0) == 1.0);
  ms = marginal_set(zero_x_model());
  CHECK(ms.p(0) == 0.0);
  CHECK(ms.p(1) == 1.0);
  CHECK(ms.q(0) == 1.0);
  CHECK(ms.p_tilde(0) == 1.0);
  CHECK(ms.q_tilde(0) == 0.5);
  CHECK(ms.q_tilde(1) == 0.5);
}

TEST_CASE("conditional matrix") {
  auto c = conditional_pi(trivial());
  REQUIRE(c.defined(0));
  CHECK((*c.columns[0])(0) == 1.0);
  c = conditional_pi(make(RealMatrix::Ones(2, 2), {0.25, 0.25}, {0.25, 0.25}));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK((*c.columns[static_cast<std::size_t>(i)])(j) == 0.5);
  c = conditional_pi(zero_x_model());
  CHECK_FALSE(c.defined(0));
  CHECK(c.defined(1));
}

TEST_CASE("regularized expectation") {
  const auto m = zero_x_model();
  RatioObservable one{RealMatrix(2, 1)};
  one.c << m.x(0), m.x(1);
  // X == 1 only where x > 0; at x(0) = 0 the regularised contribution is 0
  CHECK(expectation_regularized(m, one) == doctest::Approx(1.0).epsilon(1e-15));
  RatioObservable jobs{RealMatrix::Constant(2, 1, 0.5)};
  // 1/2 from the regularised branch (i = 0) plus 1/2 from i = 1
  CHECK(expectation_regularized(m, jobs) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j_equation_residual(m) < 1e-15);
  CHECK(j_equation_residual(trivial()) == 0.0);
  CHECK(j_equation_reverse_residual(trivial()) == 0.0);
  CHECK_THROWS_AS(expectation_regularized(m, RatioObservable{RealMatrix::Ones(1, 1)}), ShapeError);
}

TEST_CASE("reverse residual equals forward on swap-symmetric models") {
  RealMatrix pi(2, 2);
  pi << 1.0, 0.5, 0.5, 1.0;
  auto m = make(pi, {0.4, 0.4}, {0.4, 0.4});
  m.x /= (m.pi * m.x).sum();
  m.x_tilde = m.x;
  CHECK(j_equation_residual(m) == doctest::Approx(j_equation_reverse_residual(m)));
}

TEST_CASE("minimal x_tilde") {
  CHECK(minimal_x_tilde(trivial())(0) == 1.0);
  const auto xt = minimal_x_tilde(zero_x_model());
  CHECK(xt(0) == 0.5);
  RealMatrix pi(2, 1);
  pi << 1.0, 0.0;
  // d~(1) = 0 but q(1) = 0 too; fine
  CHECK_NOTHROW(minimal_x_tilde(make(pi, {1.0}, {1.0, 0.0})));
}

TEST_CASE("modified Shannon entropy") {
  const std::vector<double> half{0.5, 0.5}, ones{1.0, 1.0};
  CHECK(modified_shannon_entropy(half, ones) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const std::vector<double> p1{1.0}, d2{2.0};
  CHECK(modified_shannon_entropy(p1, d2) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // mpmath, 30 digits: -(1/4)log(1/4) - (3/4)log(3/4)
  const std::vector<double> p{0.25, 0.75};
  CHECK(std::abs(modified_shannon_entropy(p, ones) - 0.5623351446188083) < 1e-15);
  const std::vector<double> with_zero{0.0, 1.0}, zero_d{0.0, 1.0};
  CHECK(modified_shannon_entropy(with_zero, zero_d) == 0.0);
  const std::vector<double> neg{-0.1, 1.1};
  CHECK_THROWS_AS(modified_shannon_entropy(neg, ones), InputError);
  CHECK_THROWS_AS(modified_shannon_entropy(p1, ones), ShapeError);
}

TEST_CASE("entropy chain on fixed models") {
  auto c = entropy_chain(trivial());
  CHECK(c.h_p == 0.0);
  CHECK(c.h_q == 0.0);
  CHECK(c.cross.is_finite());
  CHECK(c.cross.value() == 0.0);
  // x~ vanishing where q > 0 makes the cross term infinite
  RealMatrix pi(2, 2);
  pi << 1.0, 0.0, 0.0, 1.0;
  c = entropy_chain(make(pi, {0.5, 0.5}, {1.0, 0.0}));
  CHECK(c.cross.is_infinite());
}

TEST_CASE("property: random abstract models") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int t = 0; t < 500; ++t) {
    const auto m = random_model(rng, t % 3 == 0);
    REQUIRE(validate_model(m).ok());
    CHECK(j_equation_residual(m) < 1e-12);
    CHECK(j_equation_reverse_residual(m) < 1e-12);
    const auto ms = marginal_set(m);
    CHECK(std::abs(ms.p.sum() - 1.0) < 1e-12);
    CHECK(std::abs(ms.q.sum() - 1.0) < 1e-12);
    CHECK(std::abs(ms.p_tilde.sum() - 1.0) < 1e-12);
    CHECK(std::abs(ms.q_tilde.sum() - 1.0) < 1e-12);

    const auto chain = entropy_chain(m);
    CHECK(chain.h_p <= chain.h_q + 1e-10);
    if (chain.cross.is_finite()) CHECK(chain.h_q <= chain.cross.value() + 1e-10);

    const auto mm = with_x_tilde(m, minimal_x_tilde(m));
    REQUIRE(validate_model(mm).ok());
    const auto mms = marginal_set(mm);
    CHECK((mms.p_tilde - mms.q).cwiseAbs().maxCoeff() < 1e-12);
    const auto mc = entropy_chain(mm);
    REQUIRE(mc.cross.is_finite());
    CHECK(std::abs(mc.h_q - mc.cross.value()) < 1e-12);

    // tangent bound: log y <= y - 1 applied to y = x~(j)/x(i)
    if (t % 3 != 0 && (m.x_tilde.array() > 0.0).all()) {
      CHECK(j_log_expectation(m) <= 1e-12);
    }
  }
}

TEST_CASE("regularization branch is exercised by the zero-x generator") {
  std::mt19937_64 rng(5);
  const auto m = random_model(rng, true);
  CHECK(m.x(0) == 0.0);
  CHECK(j_equation_residual(m) < 1e-12);
  CHECK_THROWS_AS(j_log_expectation(m), InputError);
}

}  // TEST_SUITE
