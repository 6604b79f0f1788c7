#include "seqmeas/harness/random.hpp"

#include <algorithm>
#include <cmath>

#include "seqmeas/error.hpp"

namespace seqmeas::harness {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stable_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng trial_rng(std::uint64_t seed, std::string_view check, std::uint64_t trial) {
  const std::uint64_t key =
      splitmix64(splitmix64(seed) ^ stable_hash(check)) ^ splitmix64(trial + 1);
  return Rng(splitmix64(key));
}

ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Fill in a fixed order so the stream does not depend on Eigen internals.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = cplx{re, im};
    }
  }
  return g;
}

quantum::DensityOperator random_density(Eigen::Index dim, Rng& rng,
                                        std::optional<Eigen::Index> rank) {
  if (dim < 1) throw InputError("random_density: dim must be positive");
  const Eigen::Index k = rank.value_or(dim);
  if (k < 1 || k > dim) throw InputError("random_density: rank must lie in [1, dim]");
  constexpr int kAttempts = 8;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const ComplexMatrix g = complex_gaussian(dim, k, rng);
    ComplexMatrix m = linalg::multiply(g, g.adjoint());
    m /= m.trace().real();
    auto rho = quantum::DensityOperator::from_matrix(std::move(m));
    if (rank.has_value() && *rank < dim) return rho;
    if (linalg::hermitian_eigendecomposition(rho.matrix()).values(0) > 1e-12) return rho;
  }
  throw InputError("random_density: could not draw a full-rank state");
}

quantum::Unitary random_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw InputError("random_unitary: dim must be positive");
  const ComplexMatrix z = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const cplx d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0.0 ? d / mag : cplx{1.0, 0.0};
  }
  return quantum::Unitary::from_matrix(std::move(q));
}

quantum::ProjectorFamily random_pvm(Eigen::Index dim, const std::vector<int>& ranks,
                                    Rng& rng) {
  long total = 0;
  for (int r : ranks) {
    if (r < 1) throw InputError("random_pvm: ranks must be positive");
    total += r;
  }
  if (total != dim) throw InputError("random_pvm: ranks must sum to dim");
  const quantum::Unitary u = random_unitary(dim, rng);
  std::vector<ComplexMatrix> ps;
  Eigen::Index start = 0;
  for (int r : ranks) {
    const auto block = u.matrix().middleCols(start, r);
    ps.push_back(block * block.adjoint());
    start += r;
  }
  return quantum::ProjectorFamily::from_projectors(std::move(ps));
}

std::vector<int> random_ranks(Eigen::Index dim, bool rank_one, Rng& rng) {
  if (dim < 1) throw InputError("random_ranks: dim must be positive");
  if (rank_one || dim == 1) return std::vector<int>(static_cast<std::size_t>(dim), 1);
  // k < dim blocks forces at least one block of size >= 2.
  std::uniform_int_distribution<Eigen::Index> blocks(1, dim - 1);
  const Eigen::Index k = blocks(rng);
  std::vector<Eigen::Index> cuts(static_cast<std::size_t>(dim - 1));
  for (Eigen::Index c = 1; c < dim; ++c) cuts[static_cast<std::size_t>(c - 1)] = c;
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(k - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> ranks;
  Eigen::Index prev = 0;
  for (Eigen::Index c : cuts) {
    ranks.push_back(static_cast<int>(c - prev));
    prev = c;
  }
  ranks.push_back(static_cast<int>(dim - prev));
  return ranks;
}

ComplexVector random_unit_vector(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix g = complex_gaussian(dim, 1, rng);
  return g.col(0) / g.col(0).norm();
}

ComplexMatrix random_hamiltonian(Eigen::Index dim, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> uni(lo, hi);
  RealVector e(dim);
  for (Eigen::Index k = 0; k < dim; ++k) e(k) = uni(rng);
  if (dim >= 2) {
    const double mn = e.minCoeff();
    const double mx = e.maxCoeff();
    if (mx > mn) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        e(k) = lo + (hi - lo) * (e(k) - mn) / (mx - mn);
      }
    }
  }
  const quantum::Unitary v = random_unitary(dim, rng);
  ComplexMatrix h = v.matrix() * e.cast<cplx>().asDiagonal() * v.matrix().adjoint();
  return 0.5 * (h + h.adjoint());
}

quantum::DensityOperator random_function_of_family(const quantum::ProjectorFamily& fam,
                                                   Rng& rng,
                                                   const std::vector<std::size_t>& zero_blocks) {
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::vector<double> w(fam.size());
  for (double& v : w) v = weight(rng);
  for (std::size_t z : zero_blocks) {
    if (z >= w.size()) throw InputError("random_function_of_family: block index out of range");
    w[z] = 0.0;
  }
  double norm = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) norm += w[k] * fam.degeneracies()[k];
  if (!(norm > 0.0)) throw InputError("random_function_of_family: all weights are zero");
  ComplexMatrix rho = ComplexMatrix::Zero(fam.dim(), fam.dim());
  for (std::size_t k = 0; k < w.size(); ++k) rho += (w[k] / norm) * fam[k];
  return quantum::DensityOperator::from_matrix(std::move(rho));
}

std::vector<double> random_positive_distribution(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (double& v : p) total += (v = uni(rng));
  for (double& v : p) v /= total;
  return p;
}

}  // namespace seqmeas::harness
