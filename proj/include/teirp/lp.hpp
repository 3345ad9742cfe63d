#pragma once

#include <chrono>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace teirp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Engine tolerances: primal feasibility, dual feasibility (reduced costs) and
// the smallest pivot element accepted by the ratio test.
inline constexpr double kPrimalTol = 1e-7;
inline constexpr double kDualTol = 1e-9;
// fraction of the summed dual terms treated as rounding noise when pricing
inline constexpr double kNoiseScale = 1e-3;
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kIntegralityTol = 1e-6;

enum class Sense { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(Status s);

struct Entry {
  int index = 0;
  double value = 0.0;
};

/// A linear program in row/column form, minimization. Columns and rows can be
/// added incrementally; column bounds can be changed in place.
class LinearProgram {
 public:
  int add_row(Sense sense, double rhs, std::string name = {});
  /// Entries refer to existing rows.
  int add_column(double cost, double lower, double upper, std::vector<Entry> entries,
                 std::string name = {});
  void set_bounds(int col, double lower, double upper);
  void set_cost(int col, double cost);
  void set_rhs(int row, double rhs);

  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_columns() const { return static_cast<int>(cols_.size()); }

  double cost(int j) const { return cols_[j].cost; }
  double lower(int j) const { return cols_[j].lower; }
  double upper(int j) const { return cols_[j].upper; }
  const std::vector<Entry>& column(int j) const { return cols_[j].entries; }
  const std::string& column_name(int j) const { return cols_[j].name; }
  Sense sense(int i) const { return rows_[i].sense; }
  double rhs(int i) const { return rows_[i].rhs; }
  const std::string& row_name(int i) const { return rows_[i].name; }

  /// Row activity a_i x for a primal vector.
  std::vector<double> activities(std::span<const double> x) const;

  /// Debug dump: one `ROW <i> <name> <L|E|G> <rhs>` line per row followed by
  /// one `COL <j> <name> <cost> <lower> <upper> <row>:<coef> ...` line per column.
  void dump(std::ostream& out) const;

 private:
  struct Row {
    Sense sense;
    double rhs;
    std::string name;
  };
  struct Col {
    double cost;
    double lower;
    double upper;
    std::vector<Entry> entries;
    std::string name;
  };
  std::vector<Row> rows_;
  std::vector<Col> cols_;
};

/// Simplex basis: which variables are basic. Variables are the columns
/// followed by one logical per row. Nonbasic variables sit at a bound.
struct Basis {
  enum class State : unsigned char { kBasic, kLower, kUpper, kZero };
  std::vector<State> columns;
  std::vector<State> rows;

  bool empty() const { return columns.empty() && rows.empty(); }
};

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> primal;        // per column
  std::vector<double> duals;         // per row, y with reduced cost c - yA
  std::vector<double> reduced_costs; // per column
  Basis basis;
  long iterations = 0;
};

struct SimplexOptions {
  long max_iterations = 200000;
  int refactor_interval = 100;
  int bland_after_degenerate = 1000;
};

/// Swappable LP engine interface.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual Solution solve(const LinearProgram& lp, const Basis* warm) = 0;
};

/// Bounded primal revised simplex with a dense explicit basis inverse.
class SimplexBackend final : public Backend {
 public:
  explicit SimplexBackend(SimplexOptions opts = {}) : opts_(opts) {}
  Solution solve(const LinearProgram& lp, const Basis* warm) override;

 private:
  SimplexOptions opts_;
};

/// Solves with the embedded simplex. `warm` may describe a basis of a smaller
/// LP (fewer columns/rows); missing columns start at their lower bound and
/// missing rows get a basic logical.
Solution solve_lp(const LinearProgram& lp, const Basis* warm = nullptr);

struct MilpResult {
  double objective = 0.0;
  std::vector<double> values;
  bool proven_optimal = false;
  long nodes = 0;
};

/// Depth-first branch-and-bound with most-fractional branching over the given
/// integer columns. Returns the best integer solution found, if any.
std::optional<MilpResult> solve_milp(const LinearProgram& lp, std::span<const int> integer_columns,
                                     std::chrono::duration<double> time_limit,
                                     long node_limit = 1000000);

}  // namespace teirp::lp
