// Dense two-phase primal simplex with dual extraction.
//
// Variables are nonnegative. Row duals follow the shadow-price convention:
// dual[i] is d(objective)/d(rhs_i), so at an optimum the objective equals
// sum_i rhs_i * dual[i]. For a maximization, <= rows get dual >= 0 and >= rows
// get dual <= 0; minimization flips both signs.

#ifndef CACHECAP_LP_H_
#define CACHECAP_LP_H_

#include <string>
#include <utility>
#include <vector>

namespace cachecap {

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class LPStatus { kOptimal, kUnbounded, kInfeasible, kNumericalError };

const char* ToString(LPStatus status);

struct LPRow {
  std::vector<std::pair<int, double>> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

struct LPInstance {
  bool maximize = true;
  std::vector<double> objective;
  std::vector<std::string> names;
  std::vector<LPRow> rows;

  int AddVariable(double cost, std::string name = {});
  int AddRow(std::vector<std::pair<int, double>> terms, RowSense sense,
             double rhs, std::string name = {});
  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  // Throws std::invalid_argument on bad indices or non-finite coefficients.
  void Validate() const;
};

struct LPSolution {
  LPStatus status = LPStatus::kNumericalError;
  double objective = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;
  // Relative residuals measured after the solve.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

struct LPOptions {
  double pivot_tolerance = 1e-11;
  double optimality_tolerance = 1e-10;
  // Accept an optimum only when all three residuals are below this.
  double certificate_tolerance = 1e-8;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 50;
  int max_iterations = 0;  // 0 picks a bound from the problem size
};

LPSolution SolveLP(const LPInstance& instance, const LPOptions& options = {});

// Same algorithm over exact rationals, with Bland's rule throughout. Slow;
// meant as an oracle on tiny instances.
LPSolution SolveLPExact(const LPInstance& instance);

// Recomputes the three residuals of `solution` against `instance`.
void MeasureCertificate(const LPInstance& instance, LPSolution& solution);

}  // namespace cachecap

#endif  // CACHECAP_LP_H_
