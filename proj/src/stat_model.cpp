#include "seqmeas/stat_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "seqmeas/error.hpp"

namespace seqmeas::stat_model {

namespace {

std::span<const double> as_span(const RealVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double clamp_small(double v) { return std::abs(v) < kLogClamp ? 0.0 : v; }

void check_shape(const SequentialModel& m) {
  if (m.x.size() == 0 || m.x_tilde.size() == 0) {
    throw ShapeError("model: outcome sets must be non-empty");
  }
  if (m.pi.rows() != m.n_second() || m.pi.cols() != m.n_first()) {
    std::ostringstream os;
    os << "model: pi has shape (" << m.pi.rows() << ", " << m.pi.cols()
       << "), expected (" << m.n_second() << ", " << m.n_first() << ")";
    throw ShapeError(os.str());
  }
}

}  // namespace

double ValidationReport::max_residual() const {
  double r = 0.0;
  for (const auto& v : violations) r = std::max(r, v.residual);
  return r;
}

ValidationReport validate_model(const SequentialModel& m, double tol) {
  check_shape(m);
  ValidationReport report;

  auto check_entries = [&](const auto& values, const std::string& name) {
    double most_negative = 0.0;
    bool finite = true;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      const double v = values.data()[k];
      if (!std::isfinite(v)) finite = false;
      else most_negative = std::min(most_negative, v);
    }
    if (!finite) {
      report.violations.push_back(
          {name + " entries finite", std::numeric_limits<double>::infinity()});
    }
    if (most_negative < 0.0) {
      report.violations.push_back({name + " entries non-negative", -most_negative});
    }
  };
  check_entries(m.pi, "pi");
  check_entries(m.x, "x");
  check_entries(m.x_tilde, "x_tilde");

  const double forward = (m.pi * m.x).sum();
  const double reverse = m.x_tilde.dot(m.pi.rowwise().sum());
  if (!(std::abs(forward - 1.0) <= tol)) {
    report.violations.push_back(
        {"forward normalisation sum_ij Pi(j|i) x(i) = 1", std::abs(forward - 1.0)});
  }
  if (!(std::abs(reverse - 1.0) <= tol)) {
    report.violations.push_back(
        {"reverse normalisation sum_ij Pi(j|i) x~(j) = 1", std::abs(reverse - 1.0)});
  }
  return report;
}

void require_valid(const SequentialModel& m, double tol) {
  const ValidationReport r = validate_model(m, tol);
  if (!r.ok()) {
    throw InvariantError(r.violations.front().constraint,
                         r.violations.front().residual);
  }
}

Degeneracies degeneracy_marginals(const SequentialModel& m) {
  check_shape(m);
  return {m.pi.colwise().sum().transpose(), m.pi.rowwise().sum()};
}

JointDistribution joint_distributions(const SequentialModel& m) {
  check_shape(m);
  JointDistribution out;
  out.forward = (m.pi * m.x.asDiagonal()).transpose();
  out.reverse = m.x_tilde.asDiagonal() * m.pi;
  return out;
}

MarginalSet marginal_set(const SequentialModel& m) {
  const Degeneracies deg = degeneracy_marginals(m);
  MarginalSet s;
  s.d = deg.d;
  s.d_tilde = deg.d_tilde;
  s.p = deg.d.cwiseProduct(m.x);
  s.q = m.pi * m.x;
  s.p_tilde = deg.d_tilde.cwiseProduct(m.x_tilde);
  s.q_tilde = m.pi.transpose() * m.x_tilde;
  return s;
}

ConditionalMatrix conditional_pi(const SequentialModel& m) {
  const MarginalSet s = marginal_set(m);
  ConditionalMatrix out;
  out.columns.resize(static_cast<std::size_t>(m.n_first()));
  for (Eigen::Index i = 0; i < m.n_first(); ++i) {
    if (!(s.p(i) > 0.0)) continue;
    if (!(s.d(i) > 0.0)) {
      throw InconsistentModel("conditional_pi: d(i) = 0 while p(i) > 0 at i = " +
                              std::to_string(i));
    }
    out.columns[static_cast<std::size_t>(i)] = RealVector(m.pi.col(i) / s.d(i));
  }
  return out;
}

double expectation_regularized(const SequentialModel& m,
                               const RatioObservable& obs) {
  check_shape(m);
  if (obs.c.rows() != m.n_first() || obs.c.cols() != m.n_second()) {
    throw ShapeError("expectation: observable shape does not match model");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.n_first(); ++i) {
    const double xi = m.x(i);
    for (Eigen::Index j = 0; j < m.n_second(); ++j) {
      const double pij = m.pi(j, i);
      if (xi > 0.0) {
        total += (pij * xi) * (obs.c(i, j) / xi);
      } else {
        total += obs.c(i, j) * pij;
      }
    }
  }
  return total;
}

double j_equation_residual(const SequentialModel& m) {
  check_shape(m);
  RatioObservable obs{RealMatrix(m.n_first(), m.n_second())};
  for (Eigen::Index i = 0; i < m.n_first(); ++i) {
    obs.c.row(i) = m.x_tilde.transpose();
  }
  return std::abs(expectation_regularized(m, obs) - 1.0);
}

double j_equation_reverse_residual(const SequentialModel& m) {
  check_shape(m);
  double total = 0.0;
  for (Eigen::Index j = 0; j < m.n_second(); ++j) {
    const double xtj = m.x_tilde(j);
    for (Eigen::Index i = 0; i < m.n_first(); ++i) {
      const double pij = m.pi(j, i);
      if (xtj > 0.0) {
        total += (pij * xtj) * (m.x(i) / xtj);
      } else {
        total += m.x(i) * pij;
      }
    }
  }
  return std::abs(total - 1.0);
}

RealVector minimal_x_tilde(const SequentialModel& m) {
  const MarginalSet s = marginal_set(m);
  RealVector out(m.n_second());
  for (Eigen::Index j = 0; j < m.n_second(); ++j) {
    if (s.d_tilde(j) > 0.0) {
      out(j) = s.q(j) / s.d_tilde(j);
    } else if (clamp_small(s.q(j)) > 0.0) {
      throw InconsistentModel("minimal_x_tilde: d~(j) = 0 while q(j) > 0 at j = " +
                              std::to_string(j));
    } else {
      out(j) = 0.0;
    }
  }
  return out;
}

SequentialModel with_x_tilde(SequentialModel m, RealVector x_tilde) {
  if (x_tilde.size() != m.n_second()) {
    throw ShapeError("with_x_tilde: length does not match second outcome set");
  }
  m.x_tilde = std::move(x_tilde);
  return m;
}

double modified_shannon_entropy(std::span<const double> p,
                                std::span<const double> d) {
  if (p.size() != d.size()) {
    throw ShapeError("modified_shannon_entropy: p and d lengths differ");
  }
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < -kLogClamp) {
      throw InputError("modified_shannon_entropy: negative or non-finite p(" +
                       std::to_string(i) + ")");
    }
    const double pi = clamp_small(p[i]);
    if (pi == 0.0) continue;
    if (!(d[i] > 0.0)) {
      throw InputError("modified_shannon_entropy: d(" + std::to_string(i) +
                       ") must be positive where p(i) > 0");
    }
    h -= pi * std::log(pi / d[i]);
  }
  return h;
}

EntropyChain entropy_chain(const SequentialModel& m) {
  const MarginalSet s = marginal_set(m);
  EntropyChain chain{0.0, 0.0, MaybeInfinite::finite(0.0)};
  chain.h_p = modified_shannon_entropy(as_span(s.p), as_span(s.d));
  chain.h_q = modified_shannon_entropy(as_span(s.q), as_span(s.d_tilde));
  double cross = 0.0;
  for (Eigen::Index j = 0; j < m.n_second(); ++j) {
    const double qj = clamp_small(s.q(j));
    if (qj == 0.0) continue;
    const double ptj = clamp_small(s.p_tilde(j));
    if (ptj == 0.0) {
      chain.cross = MaybeInfinite::infinity();
      return chain;
    }
    cross -= qj * std::log(ptj / s.d_tilde(j));
  }
  chain.cross = MaybeInfinite::finite(cross);
  return chain;
}

double j_log_expectation(const SequentialModel& m) {
  check_shape(m);
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.n_first(); ++i) {
    if (!(m.x(i) > 0.0)) {
      throw InputError("j_log_expectation: requires x(i) > 0 for every i");
    }
    for (Eigen::Index j = 0; j < m.n_second(); ++j) {
      const double pij = m.pi(j, i) * m.x(i);
      if (clamp_small(pij) == 0.0) continue;
      if (!(m.x_tilde(j) > 0.0)) {
        throw InputError("j_log_expectation: x~(j) = 0 on a point of positive probability");
      }
      total += pij * std::log(m.x_tilde(j) / m.x(i));
    }
  }
  return total;
}

}  // namespace seqmeas::stat_model
