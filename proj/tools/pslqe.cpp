// pslqe: integer relation search with an a priori error budget.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pslqe/report.hpp"

using namespace pslqe;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// An argument that is either a path to a file of integers or the integers inline.
std::vector<BigInt> relation_arg(const std::string& text) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec)) return parse_relation(slurp(text));
  return parse_relation(text);
}

void write_json(const std::optional<std::string>& path, const json& doc) {
  if (!path) return;
  if (*path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(*path);
  if (!out) throw InputError("cannot write " + *path);
  out << doc.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pslqe: integer relation search with an a priori error budget"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolkitVersion));

  GlobalOptions g;
  std::optional<std::string> json_path;
  std::optional<std::string> trace_path;
  std::optional<std::string> gamma;
  app.add_option("--digits", g.digits, "decimal working precision (raised to the plan's need)")
      ->check(CLI::Range(PrecisionContext::kMinDigits, 1000000));
  app.add_option("--gamma", gamma, "swap parameter, > 2/sqrt(3) (expression)");
  app.add_option("--omega", g.omega, "split of eps between data and stopping error")->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", g.seed, "seed for the perturb data model and self-tests");
  app.add_option("--trace", trace_path, "write per-iteration diagnostics as JSON lines");
  app.add_option("--json", json_path, "write the report as JSON ('-' for stdout)");
  app.add_flag("--extended", g.extended, "allow long runs");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "error budget for a search");
  std::string plan_input, plan_eps, plan_G;
  plan_cmd->add_option("input", plan_input, "vector spec (file:, powers:, constants:, example:)")->required();
  plan_cmd->add_option("--eps", plan_eps, "target accuracy")->required();
  plan_cmd->add_option("--G", plan_G, "infinity-norm bound on the relation")->required();

  // find
  auto* find_cmd = app.add_subcommand("find", "search for an integer relation");
  std::string find_input, find_data = "exact";
  FindRequest find;
  find_cmd->add_option("input", find_input, "vector spec")->required();
  find_cmd->add_option("--eps", find.eps, "target accuracy");
  find_cmd->add_option("--G", find.G, "infinity-norm bound on the relation");
  find_cmd->add_option("--eps2", find.eps2, "explicit stopping threshold (no forward bound)");
  find_cmd->add_option("--data", find_data, "exact | perturb | round");
  find_cmd->add_option("--max-iterations", find.max_iterations, "iteration cap");
  find_cmd->add_flag("--early-exit", find.early_exit, "stop as soon as a column of B is a relation");
  find_cmd->add_flag("--exact", find.exact, "rational entries with an exact stopping test");

  // minpoly
  auto* mp_cmd = app.add_subcommand("minpoly", "minimal polynomial of an algebraic constant");
  MinpolyRequest mp;
  std::string mp_data = "exact";
  mp_cmd->add_option("constant", mp.constant, "expression, e.g. 1/(nthroot(3,5)+nthroot(2,4))")->required();
  mp_cmd->add_option("--degree", mp.degree, "polynomial degree")->required();
  mp_cmd->add_option("--eps", mp.eps, "target accuracy")->required();
  mp_cmd->add_option("--G", mp.G, "coefficient bound")->required();
  mp_cmd->add_option("--data", mp_data, "exact | perturb | round");
  mp_cmd->add_flag("--allow-large", mp.allow_large, "lift the degree + 1 <= 64 guard");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run eps = 10^-i over a range of i");
  std::string sweep_input, sweep_data = "exact";
  std::optional<std::string> sweep_reference, sweep_csv_path;
  SweepRequest sweep;
  sweep_cmd->add_option("input", sweep_input, "vector spec")->required();
  sweep_cmd->add_option("--first", sweep.first, "first exponent");
  sweep_cmd->add_option("--last", sweep.last, "last exponent");
  sweep_cmd->add_option("--G", sweep.G, "infinity-norm bound on the relation")->required();
  sweep_cmd->add_option("--reference", sweep_reference, "known relation (file or inline integers)");
  sweep_cmd->add_option("--data", sweep_data, "exact | perturb | round");
  sweep_cmd->add_option("--jobs", sweep.jobs, "worker threads (0: all cores)");
  sweep_cmd->add_option("--csv", sweep_csv_path, "write the CSV here instead of stdout");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a candidate relation");
  std::string verify_input, verify_m;
  std::optional<std::string> verify_eps, verify_G;
  verify_cmd->add_option("input", verify_input, "vector spec")->required();
  verify_cmd->add_option("m", verify_m, "relation (file or inline integers)")->required();
  verify_cmd->add_option("--eps", verify_eps, "target accuracy (compare against the terminal bound)");
  verify_cmd->add_option("--G", verify_G, "infinity-norm bound");

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the invariant suites");
  bool inject = false;
  self_cmd->add_flag("--inject-corner-fault", inject, "flip the corner rotation sign (should fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }
  g.gamma = gamma;
  g.trace_path = trace_path;

  try {
    if (*plan_cmd) {
      const ErrorPlan p = cmd_plan(plan_eps, plan_G, parse_vector_spec(plan_input), g);
      std::cout << format_text(p);
      write_json(json_path, json{{"schema", kReportSchema}, {"version", kToolkitVersion}, {"command", "plan"},
                                 {"input", plan_input}, {"plan", to_json(p)}});
      return kExitFound;
    }
    if (*find_cmd || *mp_cmd) {
      RunReport r;
      if (*find_cmd) {
        find.input = parse_vector_spec(find_input);
        find.data = parse_data_model(find_data);
        r = cmd_find(find, g);
      } else {
        mp.data = parse_data_model(mp_data);
        r = cmd_minpoly(mp, g);
      }
      std::cout << format_text(r);
      write_json(json_path, to_json(r));
      return r.exit_code();
    }
    if (*sweep_cmd) {
      sweep.input = parse_vector_spec(sweep_input);
      sweep.data = parse_data_model(sweep_data);
      if (sweep_reference) sweep.reference = relation_arg(*sweep_reference);
      const SweepResult res = cmd_sweep(sweep, g);
      const std::string csv = sweep_csv(res.points);
      if (sweep_csv_path) {
        std::ofstream out(*sweep_csv_path);
        if (!out) throw InputError("cannot write " + *sweep_csv_path);
        out << csv;
      } else {
        std::cout << csv;
      }
      if (json_path) {
        json points = json::array();
        for (std::size_t k = 0; k < res.points.size(); ++k) {
          const SweepPoint& p = res.points[k];
          json m = json::array();
          for (const BigInt& v : res.relations[k]) m.push_back(v.get_str());
          points.push_back({{"i", p.i},
                            {"eps1_digits", p.eps1_digits ? json(*p.eps1_digits) : json(nullptr)},
                            {"eps2_digits", p.eps2_digits ? json(*p.eps2_digits) : json(nullptr)},
                            {"outcome", to_string(p.outcome)},
                            {"eps1", p.eps1},
                            {"eps2", p.eps2},
                            {"m_hash", p.m_hash},
                            {"m", m},
                            {"iterations", p.iterations}});
        }
        write_json(json_path, json{{"schema", kSweepSchema}, {"version", kToolkitVersion}, {"input", sweep_input},
                                   {"data", to_string(sweep.data)}, {"points", points}});
      }
      return kExitFound;
    }
    if (*verify_cmd) {
      const VerifyReport r =
          cmd_verify(parse_vector_spec(verify_input), relation_arg(verify_m), verify_eps, verify_G, g);
      std::cout << "residual   " << r.residual.to_string(6) << '\n'
                << r.threshold_kind << "  " << r.threshold.to_string(6) << '\n'
                << (r.is_relation ? "relation\n" : "not a relation\n");
      write_json(json_path, to_json(r));
      return r.exit_code();
    }
    if (*self_cmd) {
      SelftestOptions o;
      if (app.get_option("--digits")->count() > 0) o.digits = g.digits;
      o.seed = g.seed;
      o.inject_corner_fault = inject;
      const auto suites = cmd_selftest(o);
      bool all = true;
      for (const SuiteResult& s : suites) {
        std::cout << (s.passed ? "pass  " : "FAIL  ") << s.name << "  (" << s.seconds << " s)";
        if (!s.passed) std::cout << "  " << s.detail;
        std::cout << '\n';
        all = all && s.passed;
      }
      write_json(json_path, to_json(suites));
      return all ? kExitFound : kExitFailure;
    }
  } catch (const InfeasiblePlan& e) {
    std::cerr << "error: " << e.what() << '\n';
    write_json(json_path, json{{"schema", kReportSchema}, {"error", e.what()}, {"constraint", e.constraint()},
                               {"exit_code", int(kExitInfeasible)}});
    return kExitInfeasible;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const UnsupportedConstant& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
