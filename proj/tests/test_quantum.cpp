#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seqmeas/entropy.hpp"
#include "seqmeas/error.hpp"
#include "seqmeas/harness/random.hpp"
#include "seqmeas/quantum.hpp"
#include "seqmeas/stat_model.hpp"

using namespace seqmeas;
using namespace seqmeas::quantum;

namespace {

const double kSqrt3 = std::sqrt(3.0);

ComplexMatrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) d(k++) = x;
  return d.cast<cplx>().asDiagonal();
}

ComplexVector ket(std::initializer_list<cplx> v) {
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (auto z : v) out(k++) = z;
  return out;
}

ComplexVector phi_state() { return ket({0.0, 0.5, kSqrt3 / 2.0, 0.0}); }

double mdiff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

}  // namespace

TEST_SUITE("quantum") {

TEST_CASE("density operator validation") {
  CHECK_NOTHROW(DensityOperator::from_matrix(linalg::identity(3) / 3.0));
  CHECK_THROWS_AS(DensityOperator::from_matrix(linalg::identity(2)), InvariantError);
  CHECK_THROWS_AS(DensityOperator::from_matrix(diag({1.5, -0.5})), InvariantError);
  ComplexMatrix nh(2, 2);
  nh << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityOperator::from_matrix(nh), InvariantError);
  ComplexMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS(DensityOperator::from_matrix(rect));
  try {
    DensityOperator::from_matrix(diag({0.7, 0.7}));
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    CHECK(e.residual() == doctest::Approx(0.4));
  }
}

TEST_CASE("unitary validation") {
  CHECK_NOTHROW(Unitary::from_matrix(hadamard()));
  CHECK_THROWS_AS(Unitary::from_matrix(diag({1.0, 2.0})), InvariantError);
}

TEST_CASE("projector family validation") {
  CHECK_NOTHROW(ProjectorFamily::from_projectors({diag({1, 0}), diag({0, 1})}));
  // incomplete
  CHECK_THROWS_AS(ProjectorFamily::from_projectors({diag({1, 0})}), InvariantError);
  // overlapping
  CHECK_THROWS_AS(ProjectorFamily::from_projectors({diag({1, 0}), diag({1, 1})}), InvariantError);
  // not idempotent
  CHECK_THROWS_AS(ProjectorFamily::from_projectors({diag({0.5, 0}), diag({0.5, 1})}), InvariantError);
  auto fam = ProjectorFamily::computational_basis(3);
  CHECK(fam.size() == 3);
  CHECK(fam.degeneracies() == std::vector<int>{1, 1, 1});
  CHECK(ProjectorFamily::trivial(4).degeneracies() == std::vector<int>{4});
}

TEST_CASE("hermitian eigendecomposition") {
  auto es = hermitian_eigendecomposition(linalg::identity(3));
  for (int k = 0; k < 3; ++k) CHECK(es.values(k) == doctest::Approx(1.0));
  es = hermitian_eigendecomposition(diag({3.0 / 16, 1.0 / 16, 9.0 / 16, 3.0 / 16}));
  CHECK(std::abs(es.values(0) - 1.0 / 16) < 1e-15);
  CHECK(std::abs(es.values(1) - 3.0 / 16) < 1e-15);
  CHECK(std::abs(es.values(2) - 3.0 / 16) < 1e-15);
  CHECK(std::abs(es.values(3) - 9.0 / 16) < 1e-15);
  ComplexMatrix px(2, 2);
  px << 0.0, 1.0, 1.0, 0.0;
  es = hermitian_eigendecomposition(px);
  CHECK(es.values(0) == doctest::Approx(-1.0));
  CHECK(es.values(1) == doctest::Approx(1.0));
  // eigenvector for +1 is (1,1)/sqrt2 up to phase
  const cplx overlap = es.vectors.col(1).dot(ket({1.0, 1.0}) / std::sqrt(2.0));
  CHECK(std::abs(overlap) == doctest::Approx(1.0));
  ComplexMatrix nh(2, 2);
  nh << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(hermitian_eigendecomposition(nh), InputError);
}

TEST_CASE("spectral projectors") {
  auto sd = spectral_projectors(linalg::identity(3));
  CHECK(sd.family.size() == 1);
  CHECK(sd.family.degeneracies()[0] == 3);

  const auto pair = entropy::counterexample_pair();
  sd = spectral_projectors(pair.sigma.matrix());
  REQUIRE(sd.eigenvalues.size() == 3);
  CHECK(std::abs(sd.eigenvalues[0] - 1.0 / 16) < 1e-12);
  CHECK(std::abs(sd.eigenvalues[1] - 3.0 / 16) < 1e-12);
  CHECK(std::abs(sd.eigenvalues[2] - 9.0 / 16) < 1e-12);
  CHECK(sd.family.degeneracies() == std::vector<int>{1, 2, 1});
  CHECK(mdiff(sd.reconstruct(), pair.sigma.matrix()) < 1e-14);

  sd = spectral_projectors(pair.rho.matrix());
  REQUIRE(sd.eigenvalues.size() == 2);
  CHECK(std::abs(sd.eigenvalues[1] - 1.0) < 1e-12);
  const ComplexMatrix& p = sd.family[1];
  CHECK(mdiff(p * p, p) < 1e-12);
  CHECK(std::abs(p.trace().real() - 1.0) < 1e-12);
  CHECK(sd.family.degeneracies()[0] == 3);
}

TEST_CASE("joint eigenprojections") {
  std::mt19937_64 rng(11);
  auto jd = joint_eigenprojections({diag({1, 1, 2}), diag({3, 4, 4})}, rng);
  REQUIRE(jd.family.size() == 3);
  std::vector<std::vector<double>> expected{{1, 3}, {1, 4}, {2, 4}};
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(jd.eigenvalue_tuples[k][0] == doctest::Approx(expected[k][0]));
    CHECK(jd.eigenvalue_tuples[k][1] == doctest::Approx(expected[k][1]));
    CHECK(jd.family.degeneracies()[k] == 1);
  }

  // single operator reproduces spectral_projectors
  auto hrng = harness::trial_rng(1, "joint", 0);
  const ComplexMatrix a = harness::random_hamiltonian(4, -1.0, 2.0, hrng);
  jd = joint_eigenprojections({a}, rng);
  const auto sd = spectral_projectors(a);
  REQUIRE(jd.family.size() == sd.family.size());
  for (std::size_t k = 0; k < sd.family.size(); ++k) CHECK(mdiff(jd.family[k], sd.family[k]) < 1e-8);

  // {A, A^2} with distinct |eigenvalues| adds nothing
  const ComplexMatrix b = harness::random_hamiltonian(4, 0.5, 2.0, hrng);
  jd = joint_eigenprojections({b, b * b}, rng);
  CHECK(jd.family.size() == 4);

  ComplexMatrix px(2, 2);
  px << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(joint_eigenprojections({px, diag({1, 2})}, rng), InputError);
}

TEST_CASE("outcome probabilities") {
  const auto half = DensityOperator::maximally_mixed(2);
  auto p = outcome_probabilities(half, ProjectorFamily::computational_basis(2));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));

  const auto pair = entropy::counterexample_pair();
  const auto sd = spectral_projectors(pair.sigma.matrix());
  p = outcome_probabilities(pair.rho, sd.family);
  // ascending clusters 1/16, 3/16, 9/16
  CHECK(std::abs(p[0] - 0.25) < 1e-12);
  CHECK(std::abs(p[1] - 0.0) < 1e-12);
  CHECK(std::abs(p[2] - 0.75) < 1e-12);

  p = outcome_probabilities(pair.rho, ProjectorFamily::trivial(4));
  CHECK(p.size() == 1);
  CHECK(p[0] == doctest::Approx(1.0));
}

TEST_CASE("Lueders select and channel") {
  const ComplexMatrix p2 = diag({1, 1, 0});
  const auto fixed = DensityOperator::from_matrix(p2 / 2.0);
  CHECK(mdiff(luders_select(fixed, p2).matrix(), p2 / 2.0) < 1e-15);

  const auto plus = DensityOperator::pure(ket({1.0, 1.0}));
  CHECK(mdiff(luders_select(plus, diag({1, 0})).matrix(), diag({1, 0})) < 1e-15);
  CHECK_THROWS_AS(luders_select(DensityOperator::pure(ket({1.0, 0.0})), diag({0, 1})), InputError);

  CHECK(mdiff(luders_channel(plus, ProjectorFamily::computational_basis(2)).matrix(),
              linalg::identity(2) / 2.0) < 1e-15);

  auto rng = harness::trial_rng(3, "channel", 0);
  const auto rho = harness::random_density(4, rng);
  const auto own = spectral_projectors(rho.matrix());
  CHECK(mdiff(luders_channel(rho, own.family).matrix(), rho.matrix()) < 1e-12);
  const auto fam = harness::random_pvm(4, {2, 2}, rng);
  CHECK(entropy::von_neumann_entropy(luders_channel(rho, fam)) >=
        entropy::von_neumann_entropy(rho) - 1e-10);
}

TEST_CASE("first-measurement assumption") {
  auto rng = harness::trial_rng(4, "assumption", 0);
  const auto fam = harness::random_pvm(5, {2, 3}, rng);
  CHECK(assumption_holds(harness::random_function_of_family(fam, rng), fam).holds);
  const auto plus = DensityOperator::pure(ket({1.0, 1.0}));
  CHECK(assumption_holds(plus, ProjectorFamily::computational_basis(2)).holds);
  CHECK_FALSE(assumption_holds(plus, ProjectorFamily::trivial(2)).holds);
  // any state, rank-one family
  const auto rho = harness::random_density(4, rng);
  CHECK(assumption_holds(rho, harness::random_pvm(4, {1, 1, 1, 1}, rng)).holds);
}

TEST_CASE("build_sequential_model examples") {
  const auto one = DensityOperator::maximally_mixed(1);
  const std::vector<double> unit{1.0};
  auto m = build_sequential_model(one, ProjectorFamily::trivial(1), Unitary::identity(1),
                                  ProjectorFamily::trivial(1), unit);
  CHECK(m.pi(0, 0) == doctest::Approx(1.0));
  CHECK(m.x(0) == doctest::Approx(1.0));

  const auto basis = ProjectorFamily::computational_basis(2);
  const std::vector<double> half{0.5, 0.5};
  m = build_sequential_model(DensityOperator::maximally_mixed(2), basis, Unitary::identity(2),
                             basis, half);
  CHECK((m.pi - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(m.x(0) == doctest::Approx(0.5));
  CHECK(m.x_tilde(1) == doctest::Approx(0.5));

  const auto plus = DensityOperator::pure(ket({1.0, 1.0}));
  const std::vector<double> unit1{1.0};
  CHECK_THROWS_AS(build_sequential_model(plus, ProjectorFamily::trivial(2), Unitary::identity(2),
                                         ProjectorFamily::trivial(2), unit1),
                  InvariantError);
  const std::vector<double> zero{1.0, 0.0};
  CHECK_THROWS_AS(build_sequential_model(DensityOperator::maximally_mixed(2), basis,
                                         Unitary::identity(2), basis, zero),
                  InputError);
  CHECK_THROWS_AS(build_sequential_model(DensityOperator::maximally_mixed(3), basis,
                                         Unitary::identity(2), basis, half),
                  ShapeError);
}

TEST_CASE("entropy setup specialisation: x and x~ are eigenvalues") {
  auto rng = harness::trial_rng(6, "entropy-setup", 0);
  const auto rho = harness::random_density(4, rng);
  const auto fam = harness::random_pvm(4, {1, 3}, rng);
  const auto sigma = luders_channel(rho, fam);
  const auto sr = spectral_projectors(rho.matrix());
  const auto ss = spectral_projectors(sigma.matrix());
  std::vector<double> pt;
  for (std::size_t j = 0; j < ss.eigenvalues.size(); ++j)
    pt.push_back(ss.eigenvalues[j] * ss.family.degeneracies()[j]);
  const auto m = build_sequential_model(rho, sr.family, Unitary::identity(4), ss.family, pt);
  for (std::size_t i = 0; i < sr.eigenvalues.size(); ++i)
    CHECK(std::abs(m.x(static_cast<Eigen::Index>(i)) - sr.eigenvalues[i]) < 1e-10);
  for (std::size_t j = 0; j < ss.eigenvalues.size(); ++j)
    CHECK(std::abs(m.x_tilde(static_cast<Eigen::Index>(j)) - ss.eigenvalues[j]) < 1e-12);
  for (std::size_t i = 0; i < sr.family.size(); ++i)
    for (std::size_t j = 0; j < ss.family.size(); ++j)
      CHECK(std::abs(m.pi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) -
                     (sr.family[i] * ss.family[j]).trace().real()) < 1e-12);
}

TEST_CASE("property: quantum-built models are valid and satisfy the J-equation") {
  for (std::uint64_t t = 0; t < 200; ++t) {
    auto rng = harness::trial_rng(99, "qmodel", t);
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(t % 7);
    const auto f1 = harness::random_pvm(dim, harness::random_ranks(dim, t % 2 == 0, rng), rng);
    const auto f2 = harness::random_pvm(dim, harness::random_ranks(dim, t % 3 == 0, rng), rng);
    const auto u = harness::random_unitary(dim, rng);
    const auto rho0 = harness::random_function_of_family(f1, rng);
    const auto pt = harness::random_positive_distribution(f2.size(), rng);
    const auto m = build_sequential_model(rho0, f1, u, f2, pt);
    CHECK(stat_model::validate_model(m).ok());
    CHECK(stat_model::j_equation_residual(m) < 1e-9);
    // Pi marginals are the degeneracies
    const auto d = stat_model::degeneracy_marginals(m);
    for (std::size_t i = 0; i < f1.size(); ++i)
      CHECK(std::abs(d.d(static_cast<Eigen::Index>(i)) - f1.degeneracies()[i]) < 1e-10);
    for (std::size_t j = 0; j < f2.size(); ++j)
      CHECK(std::abs(d.d_tilde(static_cast<Eigen::Index>(j)) - f2.degeneracies()[j]) < 1e-10);
    // joint probabilities against brute force traces
    const RealMatrix joint = sequential_probabilities(rho0, f1, u, f2);
    const auto jd = stat_model::joint_distributions(m);
    CHECK((joint - jd.forward).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sequential probabilities, identity evolution") {
  const auto basis = ProjectorFamily::computational_basis(2);
  const RealMatrix p = sequential_probabilities(DensityOperator::maximally_mixed(2), basis,
                                                Unitary::identity(2), basis);
  CHECK((p - RealMatrix::Identity(2, 2) * 0.5).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Jarzynski: trivial protocol") {
  const ComplexMatrix h = diag({-1.0, 0.3, 2.0});
  const auto ws = two_point_work_protocol(h, h, Unitary::identity(3), 1.0);
  CHECK(ws.lhs == doctest::Approx(1.0));
  CHECK(ws.rhs == doctest::Approx(1.0));
  for (const auto& o : ws.outcomes)
    if (o.probability > 0.0) CHECK(o.work == 0.0);
}

TEST_CASE("Jarzynski: qubit, four-term brute force") {
  const ComplexMatrix h = diag({0.0, 1.0});
  const auto u = Unitary::from_matrix(hadamard());
  const double beta = 1.0;
  const auto ws = two_point_work_protocol(h, h, u, beta);
  const double z = 1.0 + std::exp(-1.0);
  const double pe[2] = {1.0 / z, std::exp(-1.0) / z};
  double lhs = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) lhs += pe[i] * 0.5 * std::exp(-beta * (j - i));
  CHECK(std::abs(lhs - 1.0) < 1e-15);
  CHECK(std::abs(ws.lhs - lhs) < 1e-14);
  CHECK(std::abs(ws.rhs - 1.0) < 1e-15);
  CHECK(ws.outcomes.size() == 4);
}

TEST_CASE("property: Jarzynski against a matrix-exponential oracle") {
  for (std::uint64_t t = 0; t < 60; ++t) {
    auto rng = harness::trial_rng(5, "jarz", t);
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(t % 5);
    const double beta = std::array<double, 3>{0.1, 1.0, 10.0}[t % 3];
    const ComplexMatrix h0 = harness::random_hamiltonian(dim, -2.0, 2.0, rng);
    const ComplexMatrix h1 = harness::random_hamiltonian(dim, -2.0, 2.0, rng);
    const auto u = harness::random_unitary(dim, rng);
    const auto ws = two_point_work_protocol(h0, h1, u, beta);
    const double rhs = oracle::trace_exp(h1, beta) / oracle::trace_exp(h0, beta);
    CHECK(std::abs(ws.rhs - rhs) < 1e-9 * std::max(1.0, rhs));
    CHECK(ws.residual() < 1e-9);
    CHECK(stat_model::j_equation_residual(ws.model) < 1e-9);
  }
}

TEST_CASE("gibbs state") {
  const auto g = gibbs_state(diag({0.0, 1.0}), 2.0);
  const double z = 1.0 + std::exp(-2.0);
  CHECK(g.log_partition == doctest::Approx(std::log(z)));
  CHECK(g.rho.matrix()(1, 1).real() == doctest::Approx(std::exp(-2.0) / z));
}

TEST_CASE("tensor product and partial trace") {
  CHECK(mdiff(tensor_product(linalg::identity(2), linalg::identity(2)), linalg::identity(4)) == 0.0);
  const ComplexMatrix s = tensor_product(diag({0.25, 0.75}), diag({0.75, 0.25}));
  CHECK(mdiff(s, diag({3.0 / 16, 1.0 / 16, 9.0 / 16, 3.0 / 16})) < 1e-16);

  auto rng = harness::trial_rng(8, "kron", 0);
  const ComplexMatrix a = harness::complex_gaussian(2, 3, rng);
  const ComplexMatrix b = harness::complex_gaussian(3, 2, rng);
  CHECK(mdiff(tensor_product(a, b), oracle::kron(a, b)) < 1e-15);
  CHECK(mdiff(tensor_product(a, b).adjoint(), tensor_product(a.adjoint(), b.adjoint())) < 1e-15);
  const ComplexMatrix c = harness::complex_gaussian(3, 2, rng);
  const ComplexMatrix d = harness::complex_gaussian(2, 3, rng);
  CHECK(mdiff(tensor_product(a, b) * tensor_product(c, d), tensor_product(a * c, b * d)) < 1e-12);

  const auto r1 = harness::random_density(2, rng);
  const auto r2 = harness::random_density(3, rng);
  const ComplexMatrix joint = tensor_product(r1.matrix(), r2.matrix());
  CHECK(mdiff(partial_trace(joint, 2, 3, 1), r1.matrix()) < 1e-15);
  CHECK(mdiff(partial_trace(joint, 2, 3, 2), r2.matrix()) < 1e-15);
  CHECK_THROWS_AS(partial_trace(joint, 2, 2, 1), ShapeError);
  CHECK_THROWS_AS(partial_trace(joint, 2, 3, 3), InputError);

  const ComplexMatrix pphi = linalg::outer(phi_state());
  CHECK(mdiff(partial_trace(pphi, 2, 2, 1), diag({0.25, 0.75})) < 1e-15);
  CHECK(mdiff(partial_trace(pphi, 2, 2, 2), diag({0.75, 0.25})) < 1e-15);
}

TEST_CASE("dilation: identity coupling leaves the state alone") {
  auto rng = harness::trial_rng(9, "dil", 0);
  const auto rho = harness::random_density(2, rng);
  const ComplexVector phi = ket({1.0, 0.0});
  const auto fam = ProjectorFamily::computational_basis(2);
  const auto r = dilation_analysis(rho, Unitary::identity(4), fam, phi);
  CHECK(mdiff(r.sigma.matrix(), rho.matrix()) < 1e-14);
  CHECK(std::abs(r.s2 - r.s1) < 1e-12);
  CHECK(std::abs(r.s3 - r.s1) < 1e-12);
  CHECK(std::abs(r.s32) < 1e-12);
}

TEST_CASE("dilation: SWAP reset against explicit 4x4 algebra") {
  ComplexMatrix swap = ComplexMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const auto rho = DensityOperator::maximally_mixed(2);
  const ComplexVector phi = ket({1.0, 0.0});
  const auto r = dilation_analysis(rho, Unitary::from_matrix(swap),
                                   ProjectorFamily::computational_basis(2), phi);
  // Q_n = SWAP (1 (x) P_n) SWAP = P_n (x) 1, and 1/2 (x) |0><0| is block
  // diagonal in those, so rho' is the initial product state.
  const ComplexMatrix expected = oracle::kron(diag({0.5, 0.5}), diag({1, 0}));
  CHECK(mdiff(r.rho_prime.matrix(), expected) < 1e-15);
  CHECK(mdiff(r.sigma.matrix(), diag({1, 0})) < 1e-15);
  const double ln2 = std::log(2.0);
  CHECK(std::abs(r.s1 - ln2) < 1e-12);
  CHECK(std::abs(r.s2 - ln2) < 1e-12);
  CHECK(std::abs(r.s31 - ln2) < 1e-12);
  CHECK(std::abs(r.s32) < 1e-12);
  CHECK(std::abs(r.s3 - ln2) < 1e-12);
  CHECK(std::abs(r.s_sigma) < 1e-12);
}

TEST_CASE("property: random dilations order S1 <= S2 <= S3") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    auto rng = harness::trial_rng(10, "dil", t);
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(t % 2);
    const auto rho = harness::random_density(d, rng);
    const auto u = harness::random_unitary(d * d, rng);
    const auto fam = harness::random_pvm(d, harness::random_ranks(d, t % 2 == 0, rng), rng);
    const auto r = dilation_analysis(rho, u, fam, harness::random_unit_vector(d, rng));
    CHECK(r.s1 <= r.s2 + 1e-9);
    CHECK(r.s2 <= r.s3 + 1e-9);
    CHECK(std::abs(r.sigma.matrix().trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(r.s1 - oracle::von_neumann(rho.matrix())) < 1e-10);
  }
}

TEST_CASE("pure state vector") {
  const auto pair = entropy::counterexample_pair();
  const ComplexVector v = pure_state_vector(pair.rho);
  CHECK(std::abs(std::abs(v.dot(phi_state())) - 1.0) < 1e-12);
  CHECK_THROWS_AS(pure_state_vector(DensityOperator::maximally_mixed(2)), InputError);
}

}  // TEST_SUITE
