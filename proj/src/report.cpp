#include "pslqe/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "pslqe/hyperplane.hpp"

namespace pslqe {

using nlohmann::json;

namespace {

std::string dec(const Real& x) { return x.to_string(); }
std::string brief(const Real& x) { return x.to_string(6); }

json int_array(const std::vector<BigInt>& m) {
  json out = json::array();
  for (const BigInt& v : m) out.push_back(v.get_str());
  return out;
}

std::string join_ints(const std::vector<BigInt>& m) {
  std::string out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k) out += ", ";
    out += m[k].get_str();
  }
  return out;
}

Real parse_number(const std::string& text, const PrecisionContext& ctx, const char* what) {
  try {
    return eval_expression(text, ctx);
  } catch (const Error& e) {
    throw InputError(std::string("bad ") + what + " '" + text + "': " + e.what());
  }
}

Real gamma_for(const GlobalOptions& options, const PrecisionContext& ctx) {
  if (!options.gamma) return default_gamma(ctx);
  Real g = parse_number(*options.gamma, ctx, "gamma");
  if (!(g * g * 3L > 4L)) throw InputError("gamma must exceed 2/sqrt(3)");
  return g;
}

std::vector<BigInt> sign_normalized(std::vector<BigInt> m) {
  for (const BigInt& v : m) {
    if (v == 0) continue;
    if (v < 0) {
      for (BigInt& w : m) w = -w;
    }
    break;
  }
  return m;
}

bool same_up_to_sign(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  return a.size() == b.size() && sign_normalized(a) == sign_normalized(b);
}

Real norm2(const std::vector<BigInt>& m, const PrecisionContext& ctx) {
  Real acc(ctx);
  for (const BigInt& v : m) {
    const Real x(v, ctx);
    acc += x * x;
  }
  return sqrt(acc);
}

/// Unit vector in user order (no permutation); throws on a zero vector.
std::vector<Real> unit_user_order(const std::vector<Real>& v) {
  Real acc(v.front().context());
  for (const Real& x : v) acc += x * x;
  if (acc.is_zero()) throw InputError("zero vector");
  const Real norm = sqrt(acc);
  std::vector<Real> out;
  for (const Real& x : v) out.push_back(x / norm);
  return out;
}

/// Rounds entries to the fewest significant digits (from
/// ceil(-log10 eps1) up) that keep ||rounded - v|| below eps1.
std::vector<Real> round_to_accuracy(const std::vector<Real>& v, const Real& eps1) {
  const PrecisionContext ctx = v.front().context();
  for (long k = std::max(1L, neg_log10_ceil(eps1));; ++k) {
    std::vector<Real> out;
    Real err(ctx);
    for (const Real& x : v) {
      out.push_back(Real::parse(x.to_string(static_cast<int>(k)), ctx));
      const Real d = out.back() - x;
      err += d * d;
    }
    if (sqrt(err) < eps1) return out;
  }
}

json trace_record(const IterationDiagnostic& d) {
  return json{{"k", d.iteration},          {"r", d.swap_row},
              {"h_nn1", d.h_nn1.to_string(20)}, {"h_max", d.h_max.to_string(20)},
              {"pi", d.pi_value.to_string(20)}, {"gauge_lhs", d.gauge_lhs.to_string(20)},
              {"gauge_rhs", d.gauge_rhs.to_string(20)}, {"z_ratio", d.z_ratio.to_string(20)}};
}

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (c != ' ' && c != '\t') text += c;
  }
  if (text.empty()) throw InputError("empty rational entry");
  try {
    if (text.find('/') != std::string::npos) {
      Rational q(text, 10);
      q.canonicalize();
      return q;
    }
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
      negative = text[0] == '-';
      pos = 1;
    }
    long exponent = 0;
    const std::size_t e = text.find_first_of("eE");
    std::string mantissa = text.substr(pos, e == std::string::npos ? std::string::npos : e - pos);
    if (e != std::string::npos) exponent = std::stol(text.substr(e + 1));
    const std::size_t dot = mantissa.find('.');
    if (dot != std::string::npos) {
      exponent -= static_cast<long>(mantissa.size() - dot - 1);
      mantissa.erase(dot, 1);
    }
    if (mantissa.empty() || mantissa.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("not a rational literal");
    }
    Rational q(BigInt(mantissa, 10));
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0) q *= scale; else q /= scale;
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw InputError("not a rational literal: '" + raw + "'");
  } catch (const std::out_of_range&) {
    throw InputError("not a rational literal: '" + raw + "'");
  }
}

std::vector<Rational> rational_entries(const VectorSpec& spec) {
  std::vector<std::string> items;
  if (spec.kind == VectorSpec::Kind::ConstantList) {
    items = spec.constants;
  } else if (spec.kind == VectorSpec::Kind::File) {
    std::ifstream in(spec.path);
    if (!in) throw InputError("cannot open " + spec.path);
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '@') continue;
      items.push_back(line.substr(first, line.find_last_not_of(" \t\r") - first + 1));
    }
  } else {
    throw InputError("exact mode needs rational entries, not a power vector");
  }
  std::vector<Rational> out;
  for (const std::string& s : items) out.push_back(parse_rational(s));
  return out;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct TraceSink {
  std::ofstream out;
  void operator()(const IterationDiagnostic& d) { out << trace_record(d).dump() << '\n'; }
};

RunReport run_exact(const FindRequest& request, const GlobalOptions& options, RunReport rep) {
  const std::vector<Rational> alpha = rational_entries(request.input);
  const PrecisionContext ctx(options.digits);
  const Real gamma = gamma_for(options, ctx);
  rep.gamma = gamma.to_string(20);
  rep.result = run_pslq_exact(alpha, gamma);
  rep.residual = Real(ctx);
  rep.bound_note = "exact mode: the relation has an exactly zero inner product";
  return rep;
}

/// The shared find pipeline. `plan` is empty when eps2 is given directly.
RunReport run_planned(const FindRequest& request, const GlobalOptions& options, RunReport rep,
                      const std::optional<ErrorPlan>& plan, TraceSink* sink) {
  const int digits = std::max(options.digits, plan ? plan->working_digits : 0);
  const PrecisionContext ctx(digits);
  rep.digits = digits;
  std::vector<Real> raw = materialize(request.input, ctx, &rep.warnings);
  if (raw.size() < 2) throw InputError("need at least two entries");

  std::vector<Real> data = unit_user_order(raw);
  if (request.data != DataModel::Exact) {
    if (!plan) throw InputError("the perturb and round data models need --eps and --G");
    if (request.data == DataModel::Perturb) {
      // Half radius: renormalizing can at most double the displacement.
      data = perturb(data, plan->eps1 / 2L, options.seed);
    } else {
      data = round_to_accuracy(data, plan->eps1);
    }
  }

  Normalized normalized = normalize_and_permute(data);
  if (auto* trivial = std::get_if<TrivialRelation>(&normalized)) {
    rep.result.status = RelationStatus::TrivialRelation;
    rep.result.m = trivial->relation;
    rep.result.content = 1;
    rep.residual = Real(ctx);
    rep.bound_note = "entry " + std::to_string(trivial->index + 1) + " is zero at working precision";
    return rep;
  }
  const UnitVector& unit = std::get<UnitVector>(normalized);
  const std::size_t n = unit.size();

  const Real gamma = gamma_for(options, ctx);
  rep.gamma = gamma.to_string(20);
  const Real eps2 = plan ? convert(plan->eps2, ctx) : parse_number(*request.eps2, ctx, "eps2");
  if (!(eps2 > 0L)) throw InputError("eps2 must be positive");

  PslqOptions o;
  o.alpha = unit.entries;
  o.permutation = unit.permutation;
  o.max_iterations = request.max_iterations;
  o.early_exit = request.early_exit;
  if (request.data == DataModel::Exact) {
    // Exact data follows the working precision when it is raised.
    o.refine = [spec = request.input, perm = unit.permutation](const PrecisionContext& wider) {
      const std::vector<Real> user = unit_user_order(materialize(spec, wider));
      std::vector<Real> internal;
      for (std::size_t k : perm) internal.push_back(user[k]);
      return internal;
    };
  }
  if (sink) {
    o.trace = true;
    o.on_iteration = [sink](const IterationDiagnostic& d) { (*sink)(d); };
  }
  rep.iteration_bound = iteration_bound(static_cast<int>(n), gamma, eps2);
  rep.result = run_pslq_epsilon(build_h(unit), eps2, gamma, o);
  rep.result.trace.clear();

  if (rep.result.status != RelationStatus::Found) return rep;
  rep.residual = verify_relation(unit.to_user_order(unit.entries), rep.result.m);
  if (!plan) {
    rep.bound_note = "no error plan: eps2 was given directly, so the forward bound does not apply";
    return rep;
  }
  const Real norm_m = norm2(rep.result.m, ctx);
  try {
    rep.forward_bound = forward_bound(norm_m, eps2, convert(plan->eps3, ctx), plan->n, convert(plan->alpha_n, ctx));
    if (norm_m > plan->M) {
      rep.bound_note = "||m||_2 exceeds the planned M; the bound may exceed eps";
    } else {
      rep.bound_note = "forward bound holds";
    }
  } catch (const HypothesisViolated& e) {
    rep.bound_note = e.what();
  }
  return rep;
}

std::optional<ErrorPlan> plan_for(const Real& eps, const Real& G, const std::vector<Real>& probe, const GlobalOptions& options,
                                  RunReport& rep) {
  Normalized normalized = normalize_and_permute(probe);
  if (std::holds_alternative<TrivialRelation>(normalized)) return std::nullopt;
  const UnitVector& unit = std::get<UnitVector>(normalized);
  try {
    return plan(eps, G, static_cast<int>(unit.size()), unit.last(), PlanOptions{options.omega});
  } catch (const InfeasiblePlan& e) {
    rep.infeasible_constraint = e.constraint();
    rep.bound_note = e.what();
    return std::nullopt;
  }
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace

DataModel parse_data_model(const std::string& text) {
  if (text == "exact") return DataModel::Exact;
  if (text == "perturb") return DataModel::Perturb;
  if (text == "round") return DataModel::Round;
  throw InputError("unknown data model '" + text + "' (exact, perturb, round)");
}

std::string to_string(DataModel model) {
  switch (model) {
    case DataModel::Exact: return "exact";
    case DataModel::Perturb: return "perturb";
    case DataModel::Round: return "round";
  }
  return "?";
}

int RunReport::exit_code() const {
  if (infeasible_constraint) return kExitInfeasible;
  switch (result.status) {
    case RelationStatus::IterationCapExceeded: return kExitIterationCap;
    case RelationStatus::TrivialRelation: return kExitFound;
    case RelationStatus::Found: break;
  }
  if (exact) return kExitFound;
  if (plan && forward_bound && !(*forward_bound > plan->eps)) return kExitFound;
  return kExitUnbounded;
}

json to_json(const ErrorPlan& p) {
  return json{{"eps", dec(p.eps)},
              {"eps1", dec(p.eps1)},
              {"eps2", dec(p.eps2)},
              {"eps1_limit", dec(p.eps1_limit)},
              {"eps2_limit", dec(p.eps2_limit)},
              {"eps3", dec(p.eps3)},
              {"C", dec(p.C)},
              {"M", dec(p.M)},
              {"G", dec(p.G)},
              {"omega", dec(p.omega)},
              {"n", p.n},
              {"alpha_n", dec(p.alpha_n)},
              {"eps1_digits", neg_log10_ceil(p.eps1)},
              {"eps2_digits", neg_log10_ceil(p.eps2)},
              {"working_digits", p.working_digits}};
}

json to_json(const RunReport& r) {
  json out{{"schema", kReportSchema},
           {"version", r.version},
           {"command", r.command},
           {"input", r.input},
           {"exact", r.exact},
           {"data", to_string(r.data)},
           {"seed", r.seed},
           {"digits", r.digits},
           {"gamma", r.gamma},
           {"status", to_string(r.result.status)},
           {"m", int_array(r.result.m)},
           {"iterations", r.result.iterations},
           {"working_digits", r.result.working_digits},
           {"precision_raises", r.result.precision_raises},
           {"early_exit", r.result.early_exit},
           {"bound_note", r.bound_note},
           {"warnings", r.warnings},
           {"wall_seconds", r.wall_seconds},
           {"exit_code", r.exit_code()}};
  out["plan"] = r.plan ? to_json(*r.plan) : json(nullptr);
  out["infeasible_constraint"] = r.infeasible_constraint ? json(*r.infeasible_constraint) : json(nullptr);
  out["iteration_bound"] = r.iteration_bound ? json(*r.iteration_bound) : json(nullptr);
  out["residual"] = r.residual ? json(dec(*r.residual)) : json(nullptr);
  out["final_h_nn1"] = r.result.final_h_nn1 ? json(dec(*r.result.final_h_nn1)) : json(nullptr);
  out["residual_bound"] = r.result.residual_bound ? json(dec(*r.result.residual_bound)) : json(nullptr);
  out["forward_bound"] = r.forward_bound ? json(dec(*r.forward_bound)) : json(nullptr);
  out["trace_path"] = r.trace_path ? json(*r.trace_path) : json(nullptr);
  return out;
}

std::string format_text(const ErrorPlan& p) {
  std::ostringstream out;
  out << "n            " << p.n << '\n'
      << "alpha_n      " << brief(p.alpha_n) << '\n'
      << "eps          " << brief(p.eps) << '\n'
      << "G / M        " << brief(p.G) << " / " << brief(p.M) << '\n'
      << "C            " << brief(p.C) << '\n'
      << "eps1         " << brief(p.eps1) << "  (ceil(-log10) = " << neg_log10_ceil(p.eps1) << ")\n"
      << "eps2         " << brief(p.eps2) << "  (ceil(-log10) = " << neg_log10_ceil(p.eps2) << ")\n"
      << "eps3         " << brief(p.eps3) << '\n'
      << "digits       " << p.working_digits << '\n';
  return out.str();
}

std::string format_text(const RunReport& r) {
  std::ostringstream out;
  out << r.command << ": " << r.input << '\n';
  if (r.infeasible_constraint) {
    out << "infeasible: " << r.bound_note << '\n';
    return out.str();
  }
  if (r.plan) out << "eps1 " << brief(r.plan->eps1) << ", eps2 " << brief(r.plan->eps2) << '\n';
  out << "status       " << to_string(r.result.status) << '\n';
  if (!r.result.m.empty()) out << "m            (" << join_ints(r.result.m) << ")\n";
  out << "iterations   " << r.result.iterations;
  if (r.iteration_bound) out << " (bound " << *r.iteration_bound << ")";
  out << '\n';
  out << "digits       " << r.digits;
  if (r.result.precision_raises) out << " -> " << r.result.working_digits << " after " << r.result.precision_raises << " raise(s)";
  out << '\n';
  if (r.residual) out << "residual     " << brief(*r.residual) << '\n';
  if (r.forward_bound) out << "bound        " << brief(*r.forward_bound) << '\n';
  if (!r.bound_note.empty()) out << "note         " << r.bound_note << '\n';
  for (const std::string& w : r.warnings) out << "warning      " << w << '\n';
  out << "time         " << std::fixed << std::setprecision(3) << r.wall_seconds << " s\n";
  return out.str();
}

ErrorPlan cmd_plan(const std::string& eps, const std::string& G, const VectorSpec& alpha_source,
                   const GlobalOptions& options) {
  const PrecisionContext ctx(options.digits);
  const std::vector<Real> v = materialize(alpha_source, ctx);
  if (v.size() < 2) throw InputError("need at least two entries");
  Normalized normalized = normalize_and_permute(v);
  if (std::holds_alternative<TrivialRelation>(normalized)) throw InputError("vector has a zero entry; no plan needed");
  const UnitVector& unit = std::get<UnitVector>(normalized);
  return plan(parse_number(eps, ctx, "eps"), parse_number(G, ctx, "G"), static_cast<int>(unit.size()), unit.last(),
              PlanOptions{options.omega});
}

RunReport cmd_find(const FindRequest& request, const GlobalOptions& options) {
  const auto t0 = Clock::now();
  RunReport rep;
  rep.input = request.input.describe();
  rep.data = request.data;
  rep.seed = options.seed;
  rep.digits = options.digits;
  rep.exact = request.exact;

  std::optional<TraceSink> sink;
  if (options.trace_path && !request.exact) {
    sink.emplace();
    sink->out.open(*options.trace_path);
    if (!sink->out) throw InputError("cannot write trace file " + *options.trace_path);
    rep.trace_path = options.trace_path;
  }

  if (request.exact) {
    rep = run_exact(request, options, std::move(rep));
  } else {
    std::optional<ErrorPlan> p;
    if (request.eps) {
      if (!request.G) throw InputError("--G is required with --eps");
      const PrecisionContext probe_ctx(options.digits);
      const std::vector<Real> probe = materialize(request.input, probe_ctx);
      if (probe.size() < 2) throw InputError("need at least two entries");
      p = plan_for(parse_number(*request.eps, probe_ctx, "eps"), parse_number(*request.G, probe_ctx, "G"), probe, options,
                   rep);
      if (rep.infeasible_constraint) {
        rep.wall_seconds = seconds_since(t0);
        return rep;
      }
    } else if (!request.eps2) {
      throw InputError("either --eps with --G, or --eps2, is required");
    }
    rep.plan = p;
    rep = run_planned(request, options, std::move(rep), p, sink ? &*sink : nullptr);
  }
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

RunReport cmd_minpoly(const MinpolyRequest& request, const GlobalOptions& options) {
  if (request.degree < 1) throw InputError("degree must be at least 1");
  if (request.degree + 1 > 64 && !request.allow_large) {
    throw InputError("degree + 1 > 64; pass --allow-large to run anyway");
  }
  FindRequest find;
  find.input.kind = VectorSpec::Kind::AlgebraicPowers;
  find.input.base = request.constant;
  find.input.degree = request.degree;
  find.eps = request.eps;
  find.G = request.G;
  find.data = request.data;
  RunReport rep = cmd_find(find, options);
  rep.command = "minpoly";
  if (!rep.result.m.empty()) rep.result.m = sign_normalized(rep.result.m);
  return rep;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Correct: return "correct";
    case Outcome::Incorrect: return "incorrect";
    case Outcome::Infeasible: return "infeasible";
  }
  return "?";
}

Outcome parse_outcome(const std::string& text) {
  if (text == "correct") return Outcome::Correct;
  if (text == "incorrect") return Outcome::Incorrect;
  if (text == "infeasible") return Outcome::Infeasible;
  throw InputError("unknown outcome '" + text + "'");
}

std::string relation_hash(const std::vector<BigInt>& m) {
  if (m.empty()) return "";
  std::string text;
  for (const BigInt& v : sign_normalized(m)) text += v.get_str() + ",";
  return fnv1a_hex(text);
}

SweepResult cmd_sweep(const SweepRequest& request, const GlobalOptions& options) {
  if (request.first > request.last) throw InputError("empty exponent range");
  if (request.first < 0) throw InputError("exponents must be non-negative");
  const std::size_t count = static_cast<std::size_t>(request.last - request.first + 1);

  struct Slot {
    SweepPoint point;
    std::vector<BigInt> m;
    bool found = false;
  };
  std::vector<Slot> slots(count);

  // The probe vector fixes n and a_n for every plan.
  const PrecisionContext probe_ctx(options.digits);
  const std::vector<Real> probe = materialize(request.input, probe_ctx);
  if (probe.size() < 2) throw InputError("need at least two entries");
  const Real G = parse_number(request.G, probe_ctx, "G");
  GlobalOptions quiet = options;
  quiet.trace_path.reset();

  auto run_point = [&](std::size_t idx) {
    Slot& slot = slots[idx];
    slot.point.i = request.first + static_cast<int>(idx);
    RunReport rep;
    const Real eps = pow10(-slot.point.i, probe_ctx);
    std::optional<ErrorPlan> p;
    try {
      p = plan_for(eps, G, probe, quiet, rep);
    } catch (const Error&) {
    }
    if (!p) {
      slot.point.outcome = Outcome::Infeasible;
      return;
    }
    slot.point.eps1_digits = neg_log10_ceil(p->eps1);
    slot.point.eps2_digits = neg_log10_ceil(p->eps2);
    slot.point.eps1 = p->eps1.to_string(6);
    slot.point.eps2 = p->eps2.to_string(6);
    slot.point.outcome = Outcome::Incorrect;
    try {
      FindRequest find;
      find.input = request.input;
      find.data = request.data;
      rep.plan = p;
      rep = run_planned(find, quiet, std::move(rep), p, nullptr);
      slot.point.iterations = rep.result.iterations;
      if (rep.result.status != RelationStatus::IterationCapExceeded) {
        slot.m = rep.result.m;
        slot.found = true;
        slot.point.m_hash = relation_hash(slot.m);
      }
    } catch (const Error&) {
      // recorded as incorrect
    }
  };

  unsigned jobs = request.jobs ? request.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(count));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_lock;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t idx = next++; idx < count; idx = next++) {
        try {
          run_point(idx);
        } catch (...) {
          std::lock_guard<std::mutex> hold(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);

  std::optional<std::vector<BigInt>> reference = request.reference;
  if (reference && reference->size() != probe.size()) throw InputError("reference relation has the wrong length");
  if (!reference) {
    for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
      if (it->found) {
        reference = it->m;
        break;
      }
    }
  }
  SweepResult out;
  for (Slot& slot : slots) {
    if (slot.point.outcome != Outcome::Infeasible && slot.found && reference && same_up_to_sign(slot.m, *reference)) {
      slot.point.outcome = Outcome::Correct;
    }
    out.points.push_back(slot.point);
    out.relations.push_back(slot.m);
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "# schema: " << kSweepSchema << '\n';
  out << "i,eps1_digits,eps2_digits,outcome,eps1,eps2,m_hash,iterations\n";
  for (const SweepPoint& p : points) {
    out << p.i << ',' << (p.eps1_digits ? std::to_string(*p.eps1_digits) : "") << ','
        << (p.eps2_digits ? std::to_string(*p.eps2_digits) : "") << ',' << to_string(p.outcome) << ',' << p.eps1 << ','
        << p.eps2 << ',' << p.m_hash << ',' << p.iterations << '\n';
  }
  return out.str();
}

std::vector<SweepPoint> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SweepPoint> out;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("i,", 0) != 0) throw ParseError(line_no, "missing CSV header");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 8) throw ParseError(line_no, "expected 8 columns");
    try {
      SweepPoint p;
      p.i = std::stoi(cells[0]);
      if (!cells[1].empty()) p.eps1_digits = std::stol(cells[1]);
      if (!cells[2].empty()) p.eps2_digits = std::stol(cells[2]);
      p.outcome = parse_outcome(cells[3]);
      p.eps1 = cells[4];
      p.eps2 = cells[5];
      p.m_hash = cells[6];
      p.iterations = std::stoull(cells[7]);
      out.push_back(std::move(p));
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "bad number");
    }
  }
  return out;
}

json to_json(const VerifyReport& r) {
  return json{{"schema", kReportSchema},
              {"version", kToolkitVersion},
              {"command", "verify"},
              {"input", r.input},
              {"digits", r.digits},
              {"m", int_array(r.m)},
              {"residual", dec(r.residual)},
              {"threshold", dec(r.threshold)},
              {"threshold_kind", r.threshold_kind},
              {"is_relation", r.is_relation},
              {"exit_code", r.exit_code()}};
}

std::vector<BigInt> parse_relation(const std::string& text) {
  std::vector<BigInt> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',' || c == '(' || c == ')' || c == '[' || c == ']' || c == ';') c = ' ';
    }
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      if (w[0] == '+') w.erase(0, 1);
      BigInt v;
      if (w.empty() || v.set_str(w, 10) != 0) throw InputError("not an integer: '" + w + "'");
      out.push_back(v);
    }
  }
  if (out.empty()) throw InputError("empty relation");
  return out;
}

VerifyReport cmd_verify(const VectorSpec& input, const std::vector<BigInt>& m, const std::optional<std::string>& eps,
                        const std::optional<std::string>& G, const GlobalOptions& options) {
  const PrecisionContext ctx(options.digits);
  const std::vector<Real> v = materialize(input, ctx);
  if (v.size() != m.size()) {
    throw InputError("dimension mismatch: vector has " + std::to_string(v.size()) + " entries, relation has " +
                     std::to_string(m.size()));
  }
  if (std::all_of(m.begin(), m.end(), [](const BigInt& x) { return x == 0; })) throw InputError("m is the zero vector");
  VerifyReport r{input.describe(), options.digits, m, Real(ctx), Real(ctx), "", false};
  r.residual = verify_relation(unit_user_order(v), m);

  std::optional<ErrorPlan> p;
  if (eps && G) {
    RunReport scratch;
    p = plan_for(parse_number(*eps, ctx, "eps"), parse_number(*G, ctx, "G"), v, options, scratch);
    if (scratch.infeasible_constraint) throw InfeasiblePlan(*scratch.infeasible_constraint, scratch.bound_note);
  } else if (eps || G) {
    throw InputError("--eps and --G go together");
  }
  if (p) {
    Normalized normalized = normalize_and_permute(v);
    const UnitVector& unit = std::get<UnitVector>(normalized);
    const std::size_t n = unit.size();
    r.threshold = sqrt(unit.entries[n - 2] * unit.entries[n - 2] + unit.entries[n - 1] * unit.entries[n - 1]) * p->eps2;
    r.threshold_kind = "terminal_bound";
  } else {
    BigInt l1 = 0;
    for (const BigInt& x : m) l1 += abs(x);
    r.threshold = pow10(-(options.digits - 10), ctx) * Real(l1, ctx);
    r.threshold_kind = "precision_floor";
  }
  r.is_relation = r.residual < r.threshold;
  return r;
}

json to_json(const std::vector<SuiteResult>& suites) {
  json arr = json::array();
  bool all = true;
  for (const SuiteResult& s : suites) {
    arr.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}, {"seconds", s.seconds}});
    all = all && s.passed;
  }
  return json{{"schema", kReportSchema}, {"version", kToolkitVersion}, {"command", "selftest"}, {"passed", all},
              {"suites", arr}};
}

}  // namespace pslqe
