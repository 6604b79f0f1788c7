#pragma once

// Seeded random instance generators.
//
// Every stream is a std::mt19937_64 seeded from (seed, check name, trial)
// through SplitMix64, so trials are independent and reproducible in any
// order. Draws use std::normal_distribution / uniform_real_distribution, so
// numeric streams are reproducible per standard-library implementation.

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "seqmeas/quantum.hpp"

namespace seqmeas::harness {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a, stable across platforms (unlike std::hash).
std::uint64_t stable_hash(std::string_view s);

/// Generator for one trial of one check.
Rng trial_rng(std::uint64_t seed, std::string_view check, std::uint64_t trial);

ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// G G^dagger / Tr(G G^dagger) with G a dim x rank complex Gaussian matrix.
/// Full rank by default; throws InputError for rank outside [1, dim].
quantum::DensityOperator random_density(Eigen::Index dim, Rng& rng,
                                        std::optional<Eigen::Index> rank = {});

/// Haar-distributed: QR of a complex Gaussian matrix with the diagonal of R
/// rotated to the positive real axis.
quantum::Unitary random_unitary(Eigen::Index dim, Rng& rng);

/// Columns of a Haar unitary grouped into consecutive blocks of the given
/// ranks. Throws InputError unless the ranks are positive and sum to dim.
quantum::ProjectorFamily random_pvm(Eigen::Index dim, const std::vector<int>& ranks,
                                    Rng& rng);

/// Ranks for a random family: all ones when rank_one is set, otherwise a
/// random composition of dim with at least one block of size >= 2.
std::vector<int> random_ranks(Eigen::Index dim, bool rank_one, Rng& rng);

/// Unit vector with complex Gaussian direction.
ComplexVector random_unit_vector(Eigen::Index dim, Rng& rng);

/// Hermitian V diag(e) V^dagger with Haar V and e drawn uniformly in [lo, hi],
/// then mapped affinely so that the extreme eigenvalues are exactly lo and hi
/// (dim >= 2).
ComplexMatrix random_hamiltonian(Eigen::Index dim, double lo, double hi, Rng& rng);

/// sum_k w_k P_k / sum_k w_k d_k with w_k uniform in (0.1, 1]; a function of
/// the family, so the first-measurement assumption holds. Weights listed in
/// zero_blocks are set to 0.
quantum::DensityOperator random_function_of_family(const quantum::ProjectorFamily& fam,
                                                   Rng& rng,
                                                   const std::vector<std::size_t>& zero_blocks = {});

/// Strictly positive probability vector with entries bounded away from 0.
std::vector<double> random_positive_distribution(std::size_t n, Rng& rng);

}  // namespace seqmeas::harness
