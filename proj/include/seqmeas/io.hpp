#pragma once

// JSON file formats.
//
//   complex matrix : {"dim": n, "entries": [[[re, im], ...], ...]}  row-major
//   projector list : [<complex matrix>, ...]
//   model          : {"pi": [[...]], "x": [...], "x_tilde": [...]}  pi[j][i]
//
// Loaders validate the type invariants and throw InvariantError naming the
// first violated constraint with its residual; malformed documents throw
// ShapeError.

#include <filesystem>
#include <vector>

#include "json.hpp"

#include "seqmeas/entropy.hpp"
#include "seqmeas/quantum.hpp"
#include "seqmeas/stat_model.hpp"

namespace seqmeas::io {

using json = nlohmann::json;

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const json& j);

quantum::DensityOperator density_from_json(const json& j);
quantum::Unitary unitary_from_json(const json& j);
/// Square matrix checked for Hermiticity to 1e-10 * max(1, max|A|).
ComplexMatrix hermitian_from_json(const json& j);
quantum::ProjectorFamily family_from_json(const json& j);
json family_to_json(const quantum::ProjectorFamily& fam);

json model_to_json(const stat_model::SequentialModel& m);
stat_model::SequentialModel model_from_json(const json& j);

/// rel_entropy is a number or the string "inf".
json maybe_infinite_to_json(const MaybeInfinite& v);
MaybeInfinite maybe_infinite_from_json(const json& j);
json entropy_report_to_json(const entropy::EntropyReport& r);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace seqmeas::io
