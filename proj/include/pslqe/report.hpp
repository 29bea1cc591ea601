#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pslqe/error_control.hpp"
#include "pslqe/ingest.hpp"
#include "pslqe/pslq.hpp"

namespace pslqe {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kReportSchema = "pslqe.report/1";
inline constexpr const char* kSweepSchema = "pslqe.sweep/1";

enum ExitCode : int {
  kExitFound = 0,
  kExitFailure = 1,
  kExitUnbounded = 2,
  kExitIterationCap = 3,
  kExitInfeasible = 4,
  kExitInputError = 5,
};

struct GlobalOptions {
  int digits = 50;
  std::optional<std::string> gamma;  ///< expression; default 2/sqrt(3) + 1e-6
  double omega = 0.5;
  std::uint64_t seed = 1;
  std::optional<std::string> trace_path;  ///< JSON lines, one per iteration
  bool extended = false;
};

/// How the empirical vector is derived from the defining expression.
/// exact: evaluated at the run precision (error far below eps1).
/// perturb: unit vector moved by a seeded random e with ||e|| < eps1 / 2,
///   so the renormalized vector stays within eps1.
/// round: entries rounded to the fewest significant digits (at least
///   ceil(-log10 eps1)) that keep the rounding error below eps1.
enum class DataModel { Exact, Perturb, Round };

DataModel parse_data_model(const std::string& text);
std::string to_string(DataModel model);

struct FindRequest {
  VectorSpec input;
  std::optional<std::string> eps;  ///< target accuracy on |<alpha, m>|
  std::optional<std::string> G;    ///< infinity-norm bound on m
  std::optional<std::string> eps2;  ///< explicit threshold; without eps the bound is inapplicable
  DataModel data = DataModel::Exact;
  std::optional<std::uint64_t> max_iterations;
  bool early_exit = false;
  bool exact = false;  ///< rational entries, exact stopping test
};

struct RunReport {
  std::string command = "find";
  std::string input;
  bool exact = false;
  DataModel data = DataModel::Exact;
  std::uint64_t seed = 0;
  int digits = 0;  ///< starting run precision
  std::string gamma;
  std::optional<ErrorPlan> plan;
  std::optional<std::string> infeasible_constraint;
  RelationResult result;
  std::optional<std::uint64_t> iteration_bound;
  std::optional<Real> residual;  ///< |<alpha_bar, m>| on the normalized run data
  std::optional<Real> forward_bound;
  std::string bound_note;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
  std::optional<std::string> trace_path;
  std::string version = kToolkitVersion;

  int exit_code() const;
};

nlohmann::json to_json(const ErrorPlan& plan);
nlohmann::json to_json(const RunReport& report);
std::string format_text(const RunReport& report);
std::string format_text(const ErrorPlan& plan);

/// Budget for a search. n and a_n come from the normalized source vector.
ErrorPlan cmd_plan(const std::string& eps, const std::string& G, const VectorSpec& alpha_source,
                   const GlobalOptions& options);

RunReport cmd_find(const FindRequest& request, const GlobalOptions& options);

struct MinpolyRequest {
  std::string constant;  ///< expression for x
  int degree = 0;
  std::string eps;
  std::string G;
  DataModel data = DataModel::Exact;
  bool allow_large = false;  ///< lifts the degree + 1 <= 64 guard
};

/// m holds the coefficients of x^degree, ..., x, 1 with a positive leading term.
RunReport cmd_minpoly(const MinpolyRequest& request, const GlobalOptions& options);

enum class Outcome { Correct, Incorrect, Infeasible };
std::string to_string(Outcome outcome);
Outcome parse_outcome(const std::string& text);

struct SweepPoint {
  int i = 0;  ///< eps = 10^-i
  std::optional<long> eps1_digits;  ///< ceil(-log10 eps1); empty when infeasible
  std::optional<long> eps2_digits;
  Outcome outcome = Outcome::Incorrect;
  std::string eps1;  ///< decimal string, empty when infeasible
  std::string eps2;
  std::string m_hash;  ///< FNV-1a of the sign-normalized relation, empty when none
  std::uint64_t iterations = 0;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepRequest {
  VectorSpec input;
  int first = 1;
  int last = 10;
  std::string G;
  std::optional<std::vector<BigInt>> reference;  ///< user order; sign-insensitive
  DataModel data = DataModel::Exact;
  unsigned jobs = 0;  ///< 0: hardware concurrency
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<std::vector<BigInt>> relations;  ///< per point; empty when infeasible
};

SweepResult cmd_sweep(const SweepRequest& request, const GlobalOptions& options);
std::string sweep_csv(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> parse_sweep_csv(const std::string& text);

/// Stable hash of m after making the first nonzero entry positive.
std::string relation_hash(const std::vector<BigInt>& m);

struct VerifyReport {
  std::string input;
  int digits = 0;
  std::vector<BigInt> m;
  Real residual;          ///< |<alpha, m>| for the normalized vector
  Real threshold;         ///< terminal bound sqrt(a_{n-1}^2 + a_n^2) eps2, or the precision floor
  std::string threshold_kind;  ///< "terminal_bound" or "precision_floor"
  bool is_relation = false;

  int exit_code() const { return is_relation ? kExitFound : kExitFailure; }
};

nlohmann::json to_json(const VerifyReport& report);

/// Integers separated by whitespace or commas; `#` starts a comment.
std::vector<BigInt> parse_relation(const std::string& text);

VerifyReport cmd_verify(const VectorSpec& input, const std::vector<BigInt>& m, const std::optional<std::string>& eps,
                        const std::optional<std::string>& G, const GlobalOptions& options);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  int digits = 40;
  std::uint64_t seed = 1;
  bool inject_corner_fault = false;
};

std::vector<SuiteResult> cmd_selftest(const SelftestOptions& options);
nlohmann::json to_json(const std::vector<SuiteResult>& suites);

}  // namespace pslqe
