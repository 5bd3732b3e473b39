#ifndef EQPROX_CORE_HPP
#define EQPROX_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "eqprox/constants.hpp"
#include "eqprox/errors.hpp"

namespace eqprox {

/// A point of R^n with finite components. The dimension is at least one.
class Point {
 public:
  explicit Point(std::vector<double> components) : c_(std::move(components)) {
    if (c_.empty()) throw ArgumentError("Point: dimension must be at least 1");
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!std::isfinite(c_[i])) {
        throw NumericalError("Point: component " + std::to_string(i) + " is not finite");
      }
    }
  }
  Point(std::initializer_list<double> components) : Point(std::vector<double>(components)) {}

  static Point scalar(double v) { return Point(std::vector<double>{v}); }
  static Point zeros(std::size_t n) { return Point(std::vector<double>(n, 0.0)); }

  std::size_t dim() const noexcept { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  std::span<const double> components() const noexcept { return c_; }
  /// The single component of a 1D point.
  double value() const {
    if (c_.size() != 1) throw ArgumentError("Point::value: point is not one-dimensional");
    return c_[0];
  }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> c_;
};

inline void require_same_dim(const Point& a, const Point& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw ArgumentError(std::string(where) + ": dimension mismatch (" + std::to_string(a.dim()) +
                        " vs " + std::to_string(b.dim()) + ")");
  }
}

namespace detail {
template <class Op>
Point zip(const Point& a, const Point& b, const char* where, Op op) {
  require_same_dim(a, b, where);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = op(a[i], b[i]);
  return Point(std::move(out));
}
}  // namespace detail

inline Point operator+(const Point& a, const Point& b) {
  return detail::zip(a, b, "operator+", [](double x, double y) { return x + y; });
}
inline Point operator-(const Point& a, const Point& b) {
  return detail::zip(a, b, "operator-", [](double x, double y) { return x - y; });
}
inline Point operator*(double s, const Point& a) {
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = s * a[i];
  return Point(std::move(out));
}

inline double dot(const Point& a, const Point& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}
inline double squared_norm(const Point& a) { return dot(a, a); }
inline double norm(const Point& a) { return std::sqrt(squared_norm(a)); }
inline double squared_distance(const Point& a, const Point& b) {
  require_same_dim(a, b, "squared_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}
inline double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }
inline double max_abs_difference(const Point& a, const Point& b) {
  require_same_dim(a, b, "max_abs_difference");
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------------------
// Feasible sets

struct WholeSpace {};

/// Closed interval [lo, hi] of the real line. `hi` may be +infinity (and `lo`
/// -infinity); global 1D search refuses such sets.
class Interval {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
      throw ArgumentError("Interval: require lo < hi");
    }
    if (lo == std::numeric_limits<double>::infinity() ||
        hi == -std::numeric_limits<double>::infinity()) {
      throw ArgumentError("Interval: empty");
    }
  }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

 private:
  double lo_;
  double hi_;
};

/// {x : A x = b}. Consistency of the system is checked at construction.
class AffineSubspace {
 public:
  AffineSubspace(Eigen::MatrixXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() == 0 || a_.cols() == 0) throw ArgumentError("AffineSubspace: empty matrix");
    if (a_.rows() != b_.size()) throw ArgumentError("AffineSubspace: rows(A) != size(b)");
    if (!a_.allFinite() || !b_.allFinite()) throw ArgumentError("AffineSubspace: non-finite data");
    solver_ = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(a_);
    const Eigen::VectorXd x = solver_.solve(b_);
    if ((a_ * x - b_).norm() > tol::affine_consistency) {
      throw ArgumentError("AffineSubspace: inconsistent system Ax=b");
    }
  }

  const Eigen::MatrixXd& a() const noexcept { return a_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.cols()); }

  double residual(const Point& x) const { return (a_ * as_vector(x) - b_).norm(); }

  /// Euclidean projection x - A^+(Ax - b).
  Point project(const Point& x) const {
    const Eigen::VectorXd v = as_vector(x);
    const Eigen::VectorXd p = v - solver_.solve(a_ * v - b_);
    return Point(std::vector<double>(p.data(), p.data() + p.size()));
  }

 private:
  Eigen::VectorXd as_vector(const Point& x) const {
    if (x.dim() != dim()) throw ArgumentError("AffineSubspace: dimension mismatch");
    return Eigen::Map<const Eigen::VectorXd>(x.components().data(),
                                             static_cast<Eigen::Index>(x.dim()));
  }

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> solver_;
};

using FeasibleSet = std::variant<WholeSpace, Interval, AffineSubspace>;

/// 0 on the set, positive off it.
inline double membership_residual(const FeasibleSet& set, const Point& x) {
  struct Visitor {
    const Point& x;
    double operator()(const WholeSpace&) const { return 0.0; }
    double operator()(const Interval& iv) const {
      if (x.dim() != 1) throw ArgumentError("membership_residual: Interval needs a 1D point");
      return std::max({0.0, iv.lo() - x[0], x[0] - iv.hi()});
    }
    double operator()(const AffineSubspace& af) const { return af.residual(x); }
  };
  return std::visit(Visitor{x}, set);
}

inline Point project(const FeasibleSet& set, const Point& x) {
  struct Visitor {
    const Point& x;
    Point operator()(const WholeSpace&) const { return x; }
    Point operator()(const Interval& iv) const {
      if (x.dim() != 1) throw ArgumentError("project: Interval needs a 1D point");
      return Point::scalar(std::clamp(x[0], iv.lo(), iv.hi()));
    }
    Point operator()(const AffineSubspace& af) const { return af.project(x); }
  };
  return std::visit(Visitor{x}, set);
}

inline const Interval* as_interval(const FeasibleSet& set) { return std::get_if<Interval>(&set); }

// ---------------------------------------------------------------------------
// Problem model

using Bifunction = std::function<double(const Point&, const Point&)>;

/// Prox of y -> f(base, y) over C with step lambda, in closed form.
using ClosedFormProx = std::function<Point(const Point& base, double lambda, const FeasibleSet&)>;

/// Scalar fast path for one-dimensional bifunctions, used by the 1D searches.
using ScalarBifunction = std::function<double(double, double)>;

struct ProblemSpec {
  std::string family;
  std::size_t dim = 1;
  Bifunction f;
  FeasibleSet set = WholeSpace{};
  double eta = 0.5;    // Lipschitz-type constant
  double gamma = 1.0;  // strong quasiconvexity modulus of f(x, .)
  std::optional<Point> known_solution;
  std::optional<ClosedFormProx> closed_form;
  ScalarBifunction scalar_f;  // optional; 1D only
};

/// Find x in C with f(x, y) >= 0 for all y in C. Immutable once built.
class EquilibriumProblem {
 public:
  explicit EquilibriumProblem(ProblemSpec spec) : s_(std::move(spec)) {
    if (s_.dim == 0) throw ArgumentError("EquilibriumProblem: dimension must be at least 1");
    if (!s_.f) throw ArgumentError("EquilibriumProblem: missing bifunction");
    if (!(s_.eta > 0.0) || !std::isfinite(s_.eta)) throw ArgumentError("EquilibriumProblem: eta must be > 0");
    if (!(s_.gamma > 0.0) || !std::isfinite(s_.gamma)) throw ArgumentError("EquilibriumProblem: gamma must be > 0");
    if (s_.scalar_f && s_.dim != 1) throw ArgumentError("EquilibriumProblem: scalar fast path needs dim 1");
    if (const auto* af = std::get_if<AffineSubspace>(&s_.set); af && af->dim() != s_.dim) {
      throw ArgumentError("EquilibriumProblem: affine set dimension mismatch");
    }
    if (as_interval(s_.set) && s_.dim != 1) {
      throw ArgumentError("EquilibriumProblem: Interval sets are one-dimensional");
    }
    if (s_.known_solution) check_dim(*s_.known_solution, "known_solution");
    check_diagonal();
  }

  const std::string& family() const noexcept { return s_.family; }
  std::size_t dim() const noexcept { return s_.dim; }
  const FeasibleSet& set() const noexcept { return s_.set; }
  double eta() const noexcept { return s_.eta; }
  double gamma() const noexcept { return s_.gamma; }
  const std::optional<Point>& known_solution() const noexcept { return s_.known_solution; }
  const std::optional<ClosedFormProx>& closed_form() const noexcept { return s_.closed_form; }
  bool has_scalar_path() const noexcept { return static_cast<bool>(s_.scalar_f); }

  double operator()(const Point& x, const Point& y) const {
    check_dim(x, "eval_bifunction(x)");
    check_dim(y, "eval_bifunction(y)");
    return s_.f(x, y);
  }

  /// f(x, y) for 1D problems without building Points when a scalar path exists.
  double scalar(double x, double y) const {
    if (s_.scalar_f) return s_.scalar_f(x, y);
    if (s_.dim != 1) throw ArgumentError("EquilibriumProblem::scalar: problem is not 1D");
    return s_.f(Point::scalar(x), Point::scalar(y));
  }

  /// Copy of this problem carrying a different reference solution.
  EquilibriumProblem with_known_solution(std::optional<Point> x_hat) const {
    ProblemSpec s = s_;
    s.known_solution = std::move(x_hat);
    return EquilibriumProblem(std::move(s));
  }
  EquilibriumProblem with_set(FeasibleSet set) const {
    ProblemSpec s = s_;
    s.set = std::move(set);
    return EquilibriumProblem(std::move(s));
  }

  void check_dim(const Point& x, const char* where) const {
    if (x.dim() != s_.dim) {
      throw ArgumentError(std::string(where) + ": expected dimension " + std::to_string(s_.dim) +
                          ", got " + std::to_string(x.dim()));
    }
  }

 private:
  // f(x, x) = 0 on a fixed set of seeded samples from C.
  void check_diagonal() const {
    std::mt19937_64 rng(0x5eed5eedULL);
    std::normal_distribution<double> normal(0.0, 10.0);
    for (int i = 0; i < tol::diagonal_samples; ++i) {
      std::vector<double> c(s_.dim);
      for (double& v : c) v = normal(rng);
      Point x(std::move(c));
      if (const auto* iv = as_interval(s_.set)) {
        const double lo = std::isfinite(iv->lo()) ? iv->lo() : std::min(-100.0, iv->hi() - 100.0);
        const double hi = std::isfinite(iv->hi()) ? iv->hi() : std::max(100.0, iv->lo() + 100.0);
        x = Point::scalar(std::uniform_real_distribution<double>(lo, hi)(rng));
      } else {
        x = project(s_.set, x);
      }
      const double d = s_.f(x, x);
      if (!(std::abs(d) <= tol::diagonal)) {
        throw ArgumentError("EquilibriumProblem: f(x, x) = " + std::to_string(d) +
                            " does not vanish on the diagonal");
      }
    }
  }

  ProblemSpec s_;
};

inline double eval_bifunction(const EquilibriumProblem& problem, const Point& x, const Point& y) {
  return problem(x, y);
}

// ---------------------------------------------------------------------------
// Algebraic identities used by the convergence bookkeeping

struct IdentitySides {
  double lhs;
  double rhs;
};

/// ||(1+a)x - (a-b)y - bz||^2 and its six-term expansion.
inline IdentitySides identity_a(const Point& x, const Point& y, const Point& z, double a, double b) {
  require_same_dim(x, y, "identity_a");
  require_same_dim(x, z, "identity_a");
  const double lhs = squared_norm((1.0 + a) * x - (a - b) * y - b * z);
  const double rhs = (1.0 + a) * squared_norm(x) - (a - b) * squared_norm(y) - b * squared_norm(z) +
                     (1.0 + a) * (a - b) * squared_distance(x, y) + b * (1.0 + a) * squared_distance(x, z) -
                     b * (a - b) * squared_distance(y, z);
  return {lhs, rhs};
}

/// <x - z, y - x> = 1/2||z - y||^2 - 1/2||x - z||^2 - 1/2||y - x||^2.
inline IdentitySides identity_b(const Point& x, const Point& y, const Point& z) {
  require_same_dim(x, y, "identity_b");
  require_same_dim(x, z, "identity_b");
  const double lhs = dot(x - z, y - x);
  const double rhs =
      0.5 * squared_distance(z, y) - 0.5 * squared_distance(x, z) - 0.5 * squared_distance(y, x);
  return {lhs, rhs};
}

inline IdentitySides identity_c(const Point& x, const Point& y, double beta) {
  require_same_dim(x, y, "identity_c");
  const double lhs = squared_norm(beta * x + (1.0 - beta) * y);
  const double rhs = beta * squared_norm(x) + (1.0 - beta) * squared_norm(y) -
                     beta * (1.0 - beta) * squared_distance(x, y);
  return {lhs, rhs};
}

inline bool identity_holds(const IdentitySides& s) {
  return std::abs(s.lhs - s.rhs) <= tol::identity * (1.0 + std::abs(s.lhs));
}

}  // namespace eqprox

#endif  // EQPROX_CORE_HPP
