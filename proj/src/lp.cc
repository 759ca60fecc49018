#include "cachecap/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace cachecap {

const char* ToString(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kUnbounded: return "unbounded";
    case LPStatus::kInfeasible: return "infeasible";
    case LPStatus::kNumericalError: return "numerical_error";
  }
  return "unknown";
}

int LPInstance::AddVariable(double cost, std::string name) {
  objective.push_back(cost);
  names.push_back(std::move(name));
  return num_vars() - 1;
}

int LPInstance::AddRow(std::vector<std::pair<int, double>> terms,
                       RowSense sense, double rhs, std::string name) {
  rows.push_back({std::move(terms), sense, rhs, std::move(name)});
  return num_rows() - 1;
}

void LPInstance::Validate() const {
  for (double c : objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite objective coefficient");
  }
  for (const LPRow& row : rows) {
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite right-hand side");
    for (const auto& [j, a] : row.terms) {
      if (j < 0 || j >= num_vars()) throw std::invalid_argument("row references unknown variable");
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite row coefficient");
    }
  }
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <typename T>
double ToDouble(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return v.template convert_to<double>();
  }
}

template <typename T>
T Abs(const T& v) {
  return v < 0 ? T(-v) : v;
}

struct InternalRow {
  std::vector<std::pair<int, double>> terms;
  double rhs;
  int orig;
  int sign;
};

template <typename T>
class Simplex {
 public:
  Simplex(const LPInstance& instance, const LPOptions& options, bool exact)
      : instance_(instance), options_(options), exact_(exact) {
    if (!exact) {
      pivot_eps_ = options.pivot_tolerance;
      optimality_eps_ = options.optimality_tolerance;
    }
  }

  LPSolution Solve() {
    instance_.Validate();
    Build();
    LPSolution solution;
    if (artificials_ > 0) {
      std::vector<T> cost(columns_, T(0));
      for (int j = first_artificial_; j < columns_; ++j) cost[j] = T(-1);
      PriceOut(cost);
      if (Iterate() != Outcome::kOptimal) return Fail(LPStatus::kNumericalError);
      T feasibility = T(0);
      if (!exact_) {
        double scale = 1.0;
        for (const auto& row : internal_) scale = std::max(scale, std::abs(row.rhs));
        feasibility = T(1e-9 * scale);
      }
      if (tableau_[rows_][columns_] < -feasibility) return Fail(LPStatus::kInfeasible);
      DriveOutArtificials();
      for (int j = first_artificial_; j < columns_; ++j) blocked_[j] = 1;
    }
    std::vector<T> cost(columns_, T(0));
    for (int j = 0; j < vars_; ++j) {
      const double c = instance_.objective[j];
      cost[j] = T(instance_.maximize ? c : -c);
    }
    PriceOut(cost);
    const Outcome outcome = Iterate();
    if (outcome == Outcome::kUnbounded) return Fail(LPStatus::kUnbounded);
    if (outcome == Outcome::kIterationLimit) return Fail(LPStatus::kNumericalError);

    solution.status = LPStatus::kOptimal;
    solution.iterations = iterations_;
    solution.primal.assign(vars_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < vars_) {
        solution.primal[basis_[i]] = std::max(0.0, ToDouble(tableau_[i][columns_]));
      }
    }
    solution.dual.assign(instance_.num_rows(), 0.0);
    for (int i = 0; i < rows_; ++i) {
      const double y = ToDouble(tableau_[rows_][vars_ + i]);
      solution.dual[internal_[i].orig] += internal_[i].sign * y;
    }
    if (!instance_.maximize) {
      for (double& y : solution.dual) y = -y;
    }
    double objective = 0.0;
    for (int j = 0; j < vars_; ++j) objective += instance_.objective[j] * solution.primal[j];
    solution.objective = objective;
    MeasureCertificate(instance_, solution);
    if (std::max({solution.primal_residual, solution.dual_residual, solution.gap}) >
        options_.certificate_tolerance) {
      solution.status = LPStatus::kNumericalError;
    }
    return solution;
  }

 private:
  enum class Outcome { kOptimal, kUnbounded, kIterationLimit };

  LPSolution Fail(LPStatus status) const {
    LPSolution solution;
    solution.status = status;
    solution.iterations = iterations_;
    return solution;
  }

  void Build() {
    vars_ = instance_.num_vars();
    for (int r = 0; r < instance_.num_rows(); ++r) {
      const LPRow& row = instance_.rows[r];
      auto negated = row.terms;
      for (auto& term : negated) term.second = -term.second;
      if (row.sense != RowSense::kGreaterEqual) internal_.push_back({row.terms, row.rhs, r, 1});
      if (row.sense != RowSense::kLessEqual) internal_.push_back({negated, -row.rhs, r, -1});
    }
    rows_ = static_cast<int>(internal_.size());
    artificials_ = 0;
    for (const auto& row : internal_) artificials_ += row.rhs < 0 ? 1 : 0;
    first_artificial_ = vars_ + rows_;
    columns_ = vars_ + rows_ + artificials_;
    tableau_.assign(rows_ + 1, std::vector<T>(columns_ + 1, T(0)));
    basis_.assign(rows_, 0);
    blocked_.assign(columns_, 0);
    int next_artificial = first_artificial_;
    for (int i = 0; i < rows_; ++i) {
      auto& line = tableau_[i];
      for (const auto& [j, a] : internal_[i].terms) line[j] += T(a);
      line[vars_ + i] = T(1);
      line[columns_] = T(internal_[i].rhs);
      if (internal_[i].rhs < 0) {
        for (auto& v : line) v = -v;
        line[next_artificial] = T(1);
        basis_[i] = next_artificial++;
      } else {
        basis_[i] = vars_ + i;
      }
    }
    limit_ = options_.max_iterations > 0 ? options_.max_iterations
                                         : 100 * (rows_ + columns_) + 1000;
  }

  void PriceOut(const std::vector<T>& cost) {
    auto& objective = tableau_[rows_];
    for (int j = 0; j < columns_; ++j) objective[j] = -cost[j];
    objective[columns_] = T(0);
    for (int i = 0; i < rows_; ++i) {
      const T& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j <= columns_; ++j) {
        if (tableau_[i][j] != 0) objective[j] += cb * tableau_[i][j];
      }
    }
    Clean(objective);
  }

  void Clean(std::vector<T>& line) {
    if constexpr (std::is_same_v<T, double>) {
      for (double& v : line) {
        if (std::abs(v) < 1e-13) v = 0.0;
      }
    }
  }

  int Entering(bool bland) const {
    const auto& objective = tableau_[rows_];
    int best = -1;
    for (int j = 0; j < columns_; ++j) {
      if (blocked_[j]) continue;
      if (objective[j] < -optimality_eps_) {
        if (bland) return j;
        if (best < 0 || objective[j] < objective[best]) best = j;
      }
    }
    return best;
  }

  int Leaving(int col, bool bland) const {
    int best = -1;
    T best_ratio = T(0);
    for (int i = 0; i < rows_; ++i) {
      const T& a = tableau_[i][col];
      if (!(a > pivot_eps_)) continue;
      const T ratio = tableau_[i][columns_] / a;
      if (best < 0) {
        best = i;
        best_ratio = ratio;
        continue;
      }
      T tie = T(0);
      if (!exact_) tie = T(1e-12) * (T(1) + Abs(best_ratio));
      if (ratio < best_ratio - tie) {
        best = i;
        best_ratio = ratio;
      } else if (!(ratio > best_ratio + tie)) {
        const bool prefer = bland || exact_ ? basis_[i] < basis_[best]
                                            : Abs(a) > Abs(tableau_[best][col]);
        if (prefer) {
          best = i;
          best_ratio = ratio;
        }
      }
    }
    return best;
  }

  void Pivot(int r, int c) {
    auto& pivot_row = tableau_[r];
    const T p = pivot_row[c];
    nonzero_.clear();
    for (int j = 0; j <= columns_; ++j) {
      if (pivot_row[j] != 0) {
        pivot_row[j] /= p;
        nonzero_.push_back(j);
      }
    }
    pivot_row[c] = T(1);
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      auto& line = tableau_[i];
      const T f = line[c];
      if (f == 0) continue;
      for (int j : nonzero_) {
        line[j] -= f * pivot_row[j];
        if constexpr (std::is_same_v<T, double>) {
          if (std::abs(line[j]) < 1e-13) line[j] = 0.0;
        }
      }
      line[c] = T(0);
      if constexpr (std::is_same_v<T, double>) {
        if (i < rows_ && line[columns_] < 0.0 && line[columns_] > -1e-9) {
          line[columns_] = 0.0;
        }
      }
    }
    basis_[r] = c;
    ++iterations_;
  }

  Outcome Iterate() {
    int degenerate = 0;
    while (true) {
      if (iterations_ >= limit_) return Outcome::kIterationLimit;
      const bool bland = exact_ || degenerate >= options_.degenerate_limit;
      const int col = Entering(bland);
      if (col < 0) return Outcome::kOptimal;
      const int row = Leaving(col, bland);
      if (row < 0) return Outcome::kUnbounded;
      const bool stalled = tableau_[row][columns_] == 0;
      Pivot(row, col);
      degenerate = stalled ? degenerate + 1 : 0;
    }
  }

  void DriveOutArtificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      int best = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (Abs(tableau_[i][j]) > pivot_eps_ &&
            (best < 0 || Abs(tableau_[i][j]) > Abs(tableau_[i][best]))) {
          best = j;
        }
      }
      if (best >= 0) Pivot(i, best);
    }
  }

  const LPInstance& instance_;
  LPOptions options_;
  bool exact_;
  T pivot_eps_ = T(0);
  T optimality_eps_ = T(0);
  std::vector<InternalRow> internal_;
  int vars_ = 0;
  int rows_ = 0;
  int columns_ = 0;
  int artificials_ = 0;
  int first_artificial_ = 0;
  std::vector<std::vector<T>> tableau_;
  std::vector<int> basis_;
  std::vector<char> blocked_;
  std::vector<int> nonzero_;
  int iterations_ = 0;
  int limit_ = 0;
};

}  // namespace

void MeasureCertificate(const LPInstance& instance, LPSolution& solution) {
  const auto& x = solution.primal;
  const auto& y = solution.dual;
  double primal = 0.0;
  for (double v : x) primal = std::max(primal, -v / (1.0 + std::abs(v)));
  std::vector<double> reduced(instance.objective);
  std::vector<double> reduced_scale(instance.num_vars(), 1.0);
  for (int j = 0; j < instance.num_vars(); ++j) reduced_scale[j] += std::abs(instance.objective[j]);
  double dual = 0.0;
  double dual_objective = 0.0;
  for (int r = 0; r < instance.num_rows(); ++r) {
    const LPRow& row = instance.rows[r];
    double activity = 0.0;
    double scale = 1.0 + std::abs(row.rhs);
    for (const auto& [j, a] : row.terms) {
      activity += a * x[j];
      scale += std::abs(a * x[j]);
      reduced[j] -= a * y[r];
      reduced_scale[j] += std::abs(a * y[r]);
    }
    double violation = 0.0;
    switch (row.sense) {
      case RowSense::kLessEqual: violation = activity - row.rhs; break;
      case RowSense::kGreaterEqual: violation = row.rhs - activity; break;
      case RowSense::kEqual: violation = std::abs(activity - row.rhs); break;
    }
    primal = std::max(primal, violation / scale);
    // Expected dual sign for a maximization; minimization mirrors it.
    double sign = 0.0;
    if (row.sense == RowSense::kLessEqual) sign = 1.0;
    if (row.sense == RowSense::kGreaterEqual) sign = -1.0;
    if (!instance.maximize) sign = -sign;
    if (sign != 0.0) dual = std::max(dual, -sign * y[r] / (1.0 + std::abs(y[r])));
    dual_objective += row.rhs * y[r];
  }
  for (int j = 0; j < instance.num_vars(); ++j) {
    const double wrong = instance.maximize ? reduced[j] : -reduced[j];
    dual = std::max(dual, wrong / reduced_scale[j]);
  }
  double primal_objective = 0.0;
  for (int j = 0; j < instance.num_vars(); ++j) primal_objective += instance.objective[j] * x[j];
  solution.primal_residual = std::max(0.0, primal);
  solution.dual_residual = std::max(0.0, dual);
  solution.gap = std::abs(primal_objective - dual_objective) / (1.0 + std::abs(primal_objective));
}

LPSolution SolveLP(const LPInstance& instance, const LPOptions& options) {
  return Simplex<double>(instance, options, false).Solve();
}

LPSolution SolveLPExact(const LPInstance& instance) {
  LPOptions options;
  options.degenerate_limit = 0;
  return Simplex<Rational>(instance, options, true).Solve();
}

}  // namespace cachecap
