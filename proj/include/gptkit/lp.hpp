#pragma once

// Dense two-phase simplex for small linear programs (a few hundred variables).
// Pivoting follows Bland's rule throughout, so degenerate problems terminate.

#include <gptkit/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace gptkit::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };
enum class Status { Optimal, Infeasible, Unbounded };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Constraint {
  Vector coeffs;
  Relation relation = Relation::LessEqual;
  double bound = 0.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = kInf;
};

struct LPProblem {
  Vector objective;
  Sense sense = Sense::Maximize;
  std::vector<Constraint> constraints;
  std::vector<Bounds> bounds;  // empty means every variable is >= 0

  LPProblem() = default;
  explicit LPProblem(Index n_vars, Sense s = Sense::Maximize)
      : objective(Vector::Zero(n_vars)), sense(s), bounds(static_cast<std::size_t>(n_vars)) {}

  Index num_vars() const { return objective.size(); }

  void add(Vector coeffs, Relation rel, double rhs) {
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
  void set_free(Index j) { bounds.at(static_cast<std::size_t>(j)) = {-kInf, kInf}; }
  void set_all_free() {
    for (auto& b : bounds) b = {-kInf, kInf};
  }
};

struct LPResult {
  Status status = Status::Infeasible;
  std::optional<Vector> point;
  std::optional<double> value;
  // Largest constraint or bound violation of `point`, zero when absent.
  double residual = 0.0;

  bool optimal() const { return status == Status::Optimal; }
};

namespace detail {

class Tableau {
 public:
  Tableau(Matrix a, Vector b, std::vector<Index> basis)
      : rows_(a.rows()), cols_(a.cols()), t_(a.rows() + 1, a.cols() + 1), basis_(std::move(basis)) {
    t_.topLeftCorner(rows_, cols_) = a;
    t_.topRightCorner(rows_, 1) = b;
    t_.row(rows_).setZero();
  }

  // Load objective "maximize c.x" as reduced costs relative to the current basis.
  void set_objective(const Vector& c) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(cols_) = -c.transpose();
    for (Index r = 0; r < rows_; ++r) {
      const double cb = c(basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) t_.row(rows_) += cb * t_.row(r);
    }
  }

  // Returns false when unbounded. `allowed` masks the entering candidates.
  bool optimize(const std::vector<bool>& allowed, std::size_t max_iter, double eps) {
    for (std::size_t it = 0; it < max_iter; ++it) {
      Index enter = -1;
      for (Index j = 0; j < cols_; ++j) {
        if (allowed[static_cast<std::size_t>(j)] && t_(rows_, j) < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = kInf;
      for (Index r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a > eps) {
          const double ratio = t_(r, cols_) / a;
          if (ratio < best - 1e-12 ||
              (std::abs(ratio - best) <= 1e-12 && leave >= 0 &&
               basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw SolverError("simplex: iteration limit reached");
  }

  void pivot(Index r, Index c) {
    t_.row(r) /= t_(r, c);
    for (Index i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void drop_row(Index r) {
    Matrix nt(t_.rows() - 1, t_.cols());
    nt.topRows(r) = t_.topRows(r);
    nt.bottomRows(t_.rows() - 1 - r) = t_.bottomRows(t_.rows() - 1 - r);
    t_ = std::move(nt);
    basis_.erase(basis_.begin() + r);
    --rows_;
  }

  double objective_value() const { return t_(rows_, cols_); }
  Index rows() const { return rows_; }
  double entry(Index r, Index c) const { return t_(r, c); }
  double rhs(Index r) const { return t_(r, cols_); }
  const std::vector<Index>& basis() const { return basis_; }

  Vector solution() const {
    Vector x = Vector::Zero(cols_);
    for (Index r = 0; r < rows_; ++r) x(basis_[static_cast<std::size_t>(r)]) = t_(r, cols_);
    return x;
  }

 private:
  Index rows_;
  Index cols_;
  Matrix t_;
  std::vector<Index> basis_;
};

// x = offset + map * y with y >= 0
struct VariableMap {
  Vector offset;
  Matrix map;
};

inline VariableMap nonnegative_substitution(const LPProblem& p, std::vector<Constraint>& extra) {
  const Index n = p.num_vars();
  std::vector<Bounds> bounds = p.bounds;
  if (bounds.empty()) bounds.assign(static_cast<std::size_t>(n), Bounds{});
  require_same_size(static_cast<Index>(bounds.size()), n, "lp bounds");

  Index ny = 0;
  for (const auto& b : bounds) ny += (std::isinf(b.lower) && std::isinf(b.upper)) ? 2 : 1;

  VariableMap vm{Vector::Zero(n), Matrix::Zero(n, ny)};
  Index col = 0;
  for (Index j = 0; j < n; ++j) {
    const auto& b = bounds[static_cast<std::size_t>(j)];
    if (b.lower > b.upper) throw DomainError("lp: empty variable interval");
    if (!std::isinf(b.lower)) {
      vm.offset(j) = b.lower;
      vm.map(j, col) = 1.0;
      if (!std::isinf(b.upper)) {
        Vector row = Vector::Zero(ny);
        row(col) = 1.0;
        extra.push_back({row, Relation::LessEqual, b.upper - b.lower});
      }
      ++col;
    } else if (!std::isinf(b.upper)) {
      vm.offset(j) = b.upper;
      vm.map(j, col) = -1.0;
      ++col;
    } else {
      vm.map(j, col) = 1.0;
      vm.map(j, col + 1) = -1.0;
      col += 2;
    }
  }
  return vm;
}

}  // namespace detail

inline double constraint_residual(const LPProblem& p, const Vector& x) {
  double worst = 0.0;
  for (const auto& c : p.constraints) {
    const double lhs = c.coeffs.dot(x);
    double v = 0.0;
    switch (c.relation) {
      case Relation::LessEqual: v = lhs - c.bound; break;
      case Relation::GreaterEqual: v = c.bound - lhs; break;
      case Relation::Equal: v = std::abs(lhs - c.bound); break;
    }
    worst = std::max(worst, v);
  }
  for (std::size_t j = 0; j < p.bounds.size(); ++j) {
    const Index jj = static_cast<Index>(j);
    worst = std::max(worst, p.bounds[j].lower - x(jj));
    worst = std::max(worst, x(jj) - p.bounds[j].upper);
  }
  if (p.bounds.empty() && x.size()) worst = std::max(worst, -x.minCoeff());
  return worst;
}

/// Solves `p`. Infeasibility is decided against `tolerance` scaled by the
/// magnitude of the right-hand sides.
inline LPResult solve(const LPProblem& p, double tolerance = tol::feasibility) {
  const Index n = p.num_vars();
  for (const auto& c : p.constraints) require_same_size(c.coeffs.size(), n, "lp constraint");

  std::vector<Constraint> extra;
  const detail::VariableMap vm = detail::nonnegative_substitution(p, extra);
  const Index ny = vm.map.cols();

  // Rows in y-space, all with nonnegative right-hand side after sign flips.
  struct Row {
    Vector a;
    double slack_sign;  // 0 for equality
    double b;
  };
  std::vector<Row> rows;
  rows.reserve(p.constraints.size() + extra.size());
  auto push = [&](const Vector& a_y, Relation rel, double b) {
    double s = rel == Relation::LessEqual ? 1.0 : (rel == Relation::GreaterEqual ? -1.0 : 0.0);
    Vector a = a_y;
    if (b < 0) {
      a = -a;
      b = -b;
      s = -s;
    }
    rows.push_back({std::move(a), s, b});
  };
  for (const auto& c : p.constraints) {
    push(vm.map.transpose() * c.coeffs, c.relation, c.bound - c.coeffs.dot(vm.offset));
  }
  for (const auto& c : extra) push(c.coeffs, c.relation, c.bound);

  const Index m = static_cast<Index>(rows.size());
  Index n_slack = 0;
  Index n_art = 0;
  for (const auto& r : rows) {
    if (r.slack_sign != 0.0) ++n_slack;
    if (r.slack_sign <= 0.0) ++n_art;
  }
  const Index total = ny + n_slack + n_art;
  Matrix a = Matrix::Zero(m, total);
  Vector b(m);
  std::vector<Index> basis(static_cast<std::size_t>(m));
  Index slack_col = ny;
  Index art_col = ny + n_slack;
  double scale = 1.0;
  for (Index i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    a.row(i).head(ny) = r.a.transpose();
    b(i) = r.b;
    scale = std::max(scale, std::abs(r.b));
    if (r.slack_sign != 0.0) {
      a(i, slack_col) = r.slack_sign;
      if (r.slack_sign > 0.0) basis[static_cast<std::size_t>(i)] = slack_col;
      ++slack_col;
    }
    if (r.slack_sign <= 0.0) {
      a(i, art_col) = 1.0;
      basis[static_cast<std::size_t>(i)] = art_col;
      ++art_col;
    }
  }

  constexpr double eps = 1e-11;
  const std::size_t max_iter = 200000;
  detail::Tableau tab(std::move(a), std::move(b), std::move(basis));

  // Phase 1: maximize -sum(artificials).
  if (n_art > 0) {
    Vector c1 = Vector::Zero(total);
    c1.tail(n_art).setConstant(-1.0);
    tab.set_objective(c1);
    std::vector<bool> all(static_cast<std::size_t>(total), true);
    tab.optimize(all, max_iter, eps);
    if (-tab.objective_value() > tolerance * scale) {
      return LPResult{Status::Infeasible, std::nullopt, std::nullopt, 0.0};
    }
    // Pivot zero-level artificials out of the basis, dropping redundant rows.
    for (Index r = tab.rows() - 1; r >= 0; --r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < ny + n_slack) continue;
      Index col = -1;
      double best = eps;
      for (Index j = 0; j < ny + n_slack; ++j) {
        if (std::abs(tab.entry(r, j)) > best) {
          best = std::abs(tab.entry(r, j));
          col = j;
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
      } else {
        tab.drop_row(r);
      }
    }
  }

  Vector c2 = Vector::Zero(total);
  const double sign = p.sense == Sense::Maximize ? 1.0 : -1.0;
  c2.head(ny) = sign * (vm.map.transpose() * p.objective);
  tab.set_objective(c2);
  std::vector<bool> allowed(static_cast<std::size_t>(total), true);
  for (Index j = ny + n_slack; j < total; ++j) allowed[static_cast<std::size_t>(j)] = false;
  if (!tab.optimize(allowed, max_iter, eps)) {
    return LPResult{Status::Unbounded, std::nullopt, std::nullopt, 0.0};
  }

  const Vector y = tab.solution().head(ny);
  Vector x = vm.offset + vm.map * y;
  LPResult res;
  res.status = Status::Optimal;
  res.value = p.objective.dot(x);
  res.residual = constraint_residual(p, x);
  res.point = std::move(x);
  if (res.residual > std::max(tolerance, 1e-9) * scale) {
    throw SolverError("simplex: certificate violates constraints by " + std::to_string(res.residual));
  }
  return res;
}

}  // namespace gptkit::lp
