#include "seqmeas/io.hpp"

#include <cmath>
#include <fstream>

#include "seqmeas/error.hpp"

namespace seqmeas::io {

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ShapeError(std::string(what) + ": expected a number");
  return j.get<double>();
}

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ShapeError("complex entry: expected [re, im]");
  }
  return {number(j[0], "complex entry"), number(j[1], "complex entry")};
}

RealVector real_vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ShapeError(std::string(what) + ": expected an array");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = number(j[k], what);
  }
  return v;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("matrix_to_json: matrix must be square");
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return {{"dim", m.rows()}, {"entries", std::move(rows)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw ShapeError("complex matrix: expected {\"dim\": n, \"entries\": [...]}");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
    throw ShapeError("complex matrix: dim must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(j["dim"].get<long long>());
  const json& entries = j["entries"];
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != n) {
    throw ShapeError("complex matrix: entries must have dim rows");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = entries[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ShapeError("complex matrix: row " + std::to_string(r) + " must have dim entries");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

ComplexVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ShapeError("complex vector: expected an array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
  }
  return v;
}

quantum::DensityOperator density_from_json(const json& j) {
  return quantum::DensityOperator::from_matrix(matrix_from_json(j));
}

quantum::Unitary unitary_from_json(const json& j) {
  return quantum::Unitary::from_matrix(matrix_from_json(j));
}

ComplexMatrix hermitian_from_json(const json& j) {
  ComplexMatrix m = matrix_from_json(j);
  const double r = linalg::hermiticity_residual(m);
  if (r > 1e-10 * std::max(1.0, linalg::max_abs(m))) {
    throw InvariantError("operator Hermitian", r);
  }
  return m;
}

quantum::ProjectorFamily family_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ShapeError("projector list: expected a non-empty array of matrices");
  }
  std::vector<ComplexMatrix> ps;
  for (const auto& item : j) ps.push_back(matrix_from_json(item));
  return quantum::ProjectorFamily::from_projectors(std::move(ps));
}

json family_to_json(const quantum::ProjectorFamily& fam) {
  json out = json::array();
  for (const auto& p : fam.projectors()) out.push_back(matrix_to_json(p));
  return out;
}

json model_to_json(const stat_model::SequentialModel& m) {
  json pi = json::array();
  for (Eigen::Index r = 0; r < m.pi.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.pi.cols(); ++c) row.push_back(m.pi(r, c));
    pi.push_back(std::move(row));
  }
  json x = json::array();
  for (Eigen::Index k = 0; k < m.x.size(); ++k) x.push_back(m.x(k));
  json xt = json::array();
  for (Eigen::Index k = 0; k < m.x_tilde.size(); ++k) xt.push_back(m.x_tilde(k));
  return {{"pi", std::move(pi)}, {"x", std::move(x)}, {"x_tilde", std::move(xt)}};
}

stat_model::SequentialModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("pi") || !j.contains("x") || !j.contains("x_tilde")) {
    throw ShapeError("model: expected keys pi, x, x_tilde");
  }
  stat_model::SequentialModel m;
  m.x = real_vector_from_json(j["x"], "model x");
  m.x_tilde = real_vector_from_json(j["x_tilde"], "model x_tilde");
  const json& pi = j["pi"];
  if (!pi.is_array()) throw ShapeError("model pi: expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(pi.size());
  const auto cols = rows == 0 ? Eigen::Index{0}
                              : static_cast<Eigen::Index>(pi[0].is_array() ? pi[0].size() : 0);
  m.pi.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const RealVector row = real_vector_from_json(pi[static_cast<std::size_t>(r)], "model pi row");
    if (row.size() != cols) throw ShapeError("model pi: ragged rows");
    m.pi.row(r) = row.transpose();
  }
  return m;
}

json maybe_infinite_to_json(const MaybeInfinite& v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

MaybeInfinite maybe_infinite_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return MaybeInfinite::infinity();
  return MaybeInfinite::finite(number(j, "extended real"));
}

json entropy_report_to_json(const entropy::EntropyReport& r) {
  json residuals = json::object();
  for (const auto& [name, value] : r.residuals) residuals[name] = value;
  return {{"s_rho", r.s_rho},
          {"s_sigma", r.s_sigma},
          {"rel_entropy", maybe_infinite_to_json(r.rel_entropy)},
          {"gap", r.gap},
          {"is_minimal", r.is_minimal},
          {"residuals", std::move(residuals)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ShapeError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace seqmeas::io
