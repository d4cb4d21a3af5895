#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdl/cli.hpp"
#include "rdl/consistency.hpp"
#include "rdl/errors.hpp"
#include "rdl/json_io.hpp"
#include "rdl/map_builder.hpp"
#include "rdl/operator_core.hpp"
#include "rdl/state_family.hpp"
#include "rdl/subspace.hpp"
#include "rdl/two_qubit.hpp"

namespace rdl::cli {

namespace {

using json_io::json;
using json_io::to_json;

constexpr const char* kSchema = "rdl/1";
constexpr int kDefaultHullTrials = 100;

struct GlobalOptions {
  std::optional<double> tol_rank;
  std::optional<double> tol_consistency;
  std::string out_file;
  bool hull = false;
  std::optional<std::int64_t> seed;
  int hull_trials = kDefaultHullTrials;
};

/// Request-level tolerances, then flags, then RDL_TOL_OVERRIDE on top.
ToleranceConfig resolve_tolerances(ToleranceConfig base, const GlobalOptions& g) {
  if (g.tol_rank) base.rank = *g.tol_rank;
  if (g.tol_consistency) base.consistency = *g.tol_consistency;
  if (const char* env = std::getenv("RDL_TOL_OVERRIDE"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0))
      throw InputError(std::string("RDL_TOL_OVERRIDE must be a positive real, got '") + env + "'");
    base = ToleranceConfig::uniform(v);
  }
  return base;
}

std::uint64_t require_seed(const GlobalOptions& g, const char* why) {
  if (!g.seed) throw InputError(std::string(why) + " requires --seed (no entropy default)");
  return static_cast<std::uint64_t>(*g.seed);
}

std::string fmt(double x, int precision = 3) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(precision) << x;
  return s.str();
}

struct PipelineOutcome {
  json report;
  bool consistent = false;
  Superoperator map;
  SubspaceV subspace;
};

// subspace -> consistency (+ hull) -> assignment -> map -> Kraus -> verdicts
PipelineOutcome run_pipeline(const StateFamily& family, const ComplexMatrix& u,
                             const ToleranceConfig& tol, const GlobalOptions& g,
                             Extension extension, bool dump_subspace, std::ostream& err) {
  PipelineOutcome o;
  json& r = o.report;
  json notes = json::array();

  o.subspace = build_subspace(family, tol.rank);
  const SubspaceV& v = o.subspace;
  json members = json::array();
  for (const auto& p : v.independent_pairs) members.push_back(p.member_index);
  r["family"] = {{"label", family.label},
                 {"d_s", family.dims.d_s},
                 {"d_e", family.dims.d_e},
                 {"size", family.members.size()}};
  r["subspace"] = {{"dim", v.dim()},
                   {"m", v.m()},
                   {"kernel_dim", v.kernel_dim()},
                   {"independent_members", members}};
  notes.push_back("verdicts concern the span of the " + std::to_string(family.members.size()) +
                  " supplied members only");

  const ConsistencyReport cons = check_subspace_consistency(v, u, tol.consistency, tol.unitary);
  r["consistency"] = to_json(cons);
  if (cons.status == ConsistencyStatus::marginal)
    notes.push_back("violation lies in (tol, 10 tol]: marginal, reported as inconsistent");

  if (g.hull) {
    const std::uint64_t seed = require_seed(g, "--hull");
    try {
      const ConsistencyReport hull =
          check_hull_consistency(family, u, tol.consistency, g.hull_trials, seed, tol.rank, tol.unitary);
      r["hull"] = to_json(hull);
      if (hull.consistent != cons.consistent)
        notes.push_back("hull sampling and subspace verdicts disagree");
    } catch (const SamplingExhaustedError& e) {
      r["hull"] = {{"error", e.what()}};
    }
  } else {
    r["hull"] = nullptr;
  }

  const AssignmentMap lambda = build_assignment(v);
  o.map = build_dynamical_map(lambda, u, extension, cons, tol.unitary);
  if (v.m() < family.dims.d_s * family.dims.d_s)
    notes.push_back("V_S is a proper subspace (m = " + std::to_string(v.m()) +
                    "); the map is extended by zero off V_S");
  const SignedKraus kraus = decompose_signed_kraus(o.map, tol.psd);
  const Verdicts verd = verdicts(o.map, tol.psd);
  r["superoperator"] = to_json(o.map);
  r["kraus"] = to_json(kraus);
  r["kraus_normalization_error"] = normalization_error(kraus);
  r["verdicts"] = to_json(verd);
  r["consistent"] = cons.consistent;
  r["tolerances"] = to_json(tol);
  r["notes"] = notes;
  if (dump_subspace) r["subspace_dump"] = to_json(v);
  o.consistent = cons.consistent;

  err << "family: " << family.members.size() << " members, d_S=" << family.dims.d_s
      << " d_E=" << family.dims.d_e << "\n"
      << "subspace: dim V=" << v.dim() << ", m=" << v.m() << ", kernel=" << v.kernel_dim() << "\n"
      << "U-consistency: " << to_string(cons.status) << " (max violation "
      << fmt(cons.max_violation) << ", tol " << fmt(cons.tolerance) << ")\n";
  if (r["hull"].is_object() && r["hull"].contains("consistent"))
    err << "hull sampling: " << (r["hull"]["consistent"].get<bool>() ? "consistent" : "inconsistent")
        << " over " << r["hull"]["pairs_tested"] << " pairs\n";
  err << "map: Hermitian-preserving=" << verd.hermitian_preserving
      << " trace-preserving=" << verd.trace_preserving << " CP=" << verd.completely_positive
      << " (min Choi eigenvalue " << fmt(verd.min_choi_eigenvalue) << ")\n";
  return o;
}

ComplexMatrix unitary_from_spec(const json& spec, const StateFamily& family) {
  if (spec.is_object() && spec.contains("model")) {
    const std::string model = spec["model"].get<std::string>();
    if (model == "two-qubit") {
      if (family.dims != BipartiteDims{2, 2})
        throw DimensionError("the two-qubit model needs d_s = d_e = 2");
      return model_unitary({spec.at("omega").get<double>(), spec.at("t").get<double>()});
    }
    if (model == "swap") {
      if (family.dims.d_s != family.dims.d_e)
        throw DimensionError("the swap model needs d_s = d_e");
      return swap_unitary(family.dims.d_s);
    }
    throw InputError("unknown unitary model '" + model + "'");
  }
  return json_io::matrix_from_json(spec);
}

void emit(const json& report, const GlobalOptions& g, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (g.out_file.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out_file);
  if (!f) throw InputError("cannot write " + g.out_file);
  f << text;
}

json header(const char* command) { return json{{"schema", kSchema}, {"command", command}}; }

// ---------------------------------------------------------------------------

struct AnalyzeOptions {
  std::string request;
  std::string family;
  std::string unitary;
  std::string model;
  double omega = 1.0;
  double t = 0.0;
  std::string extension = "zero";
  bool dump_subspace = false;
};

int cmd_analyze(const AnalyzeOptions& a, GlobalOptions g, std::ostream& out, std::ostream& err) {
  json request = json::object();
  if (!a.request.empty()) request = json_io::load_file(a.request);
  if (!request.is_object()) throw InputError("analysis request must be a JSON object");

  ToleranceConfig tol = request.contains("tolerances")
                            ? json_io::tolerances_from_json(request["tolerances"])
                            : ToleranceConfig{};
  tol = resolve_tolerances(tol, g);
  if (!g.seed && request.contains("seed")) g.seed = request["seed"].get<std::int64_t>();

  json family_json;
  if (!a.family.empty()) {
    family_json = json_io::load_file(a.family);
  } else if (request.contains("family")) {
    if (request["family"].is_string()) {
      // Relative paths are taken from the request's directory.
      std::filesystem::path path = request["family"].get<std::string>();
      if (path.is_relative()) path = std::filesystem::path(a.request).parent_path() / path;
      family_json = json_io::load_file(path.string());
    } else {
      family_json = request["family"];
    }
  } else {
    throw InputError("no family given (use --family FILE or a request with \"family\")");
  }
  const StateFamily family = json_io::family_from_json(family_json, tol);

  const int sources = int(!a.unitary.empty()) + int(!a.model.empty()) + int(request.contains("unitary"));
  if (sources != 1) throw InputError("exactly one unitary source is required");
  ComplexMatrix u;
  if (!a.unitary.empty()) {
    u = unitary_from_spec(json_io::load_file(a.unitary), family);
  } else if (!a.model.empty()) {
    json spec{{"model", a.model}, {"omega", a.omega}, {"t", a.t}};
    u = unitary_from_spec(spec, family);
  } else {
    u = unitary_from_spec(request["unitary"], family);
  }
  if (u.rows() != family.dims.joint() || u.cols() != family.dims.joint())
    throw DimensionError("unitary side " + std::to_string(u.rows()) + " does not match joint dimension " +
                         std::to_string(family.dims.joint()));

  const Extension ext = a.extension == "none" ? Extension::none : Extension::zero;
  PipelineOutcome o = run_pipeline(family, u, tol, g, ext, a.dump_subspace, err);
  json report = header("analyze");
  report.update(o.report);
  emit(report, g, out);
  return o.consistent ? kConsistent : kInconsistent;
}

// ---------------------------------------------------------------------------

struct TwoQubitOptions {
  double omega = 1.0;
  std::optional<double> t;
  double a11 = 0.0;
  double a21 = 0.0;
  std::vector<double> b11{0.0, 0.0, 0.0};
  std::vector<double> b21{0.0, 0.0, 0.0};
  std::optional<std::size_t> samples;
  double scale = 0.25;
  std::string members;
  bool dump_subspace = false;
};

StateFamily members_family(const std::string& path, const ToleranceConfig& tol) {
  const json j = json_io::load_file(path);
  if (j.is_object() && j.contains("members")) return json_io::family_from_json(j, tol);
  if (!j.is_array()) throw InputError(path + ": expected a family object or an array of parameter sets");
  std::vector<ComplexMatrix> states;
  for (const auto& p : j) states.push_back(assemble_two_qubit(json_io::params_from_json(p), tol));
  return make_family({2, 2}, std::move(states), "two-qubit members from " + path, tol);
}

int cmd_two_qubit(const TwoQubitOptions& a, const GlobalOptions& g, std::ostream& out,
                  std::ostream& err) {
  const ToleranceConfig tol = resolve_tolerances({}, g);
  if (!a.t) throw InputError("two-qubit needs --t");
  const ModelParams model{a.omega, *a.t};
  const ComplexMatrix u = model_unitary(model);

  json report = header("two-qubit");
  report["model"] = {{"omega", model.omega}, {"t", model.t}, {"omega_t", model.phase()}};

  StateFamily family;
  if (!a.members.empty()) {
    family = members_family(a.members, tol);
  } else {
    if (!a.samples || *a.samples == 0)
      throw EmptyFamilyError("two-qubit needs --samples N with N >= 1 (or --members FILE)");
    const std::uint64_t seed = require_seed(g, "--samples");
    const LinearityCoefficients planted{a.a11, a.a21, Eigen::Vector3d(a.b11[0], a.b11[1], a.b11[2]),
                                        Eigen::Vector3d(a.b21[0], a.b21[1], a.b21[2])};
    const auto samples = uniform_two_qubit_samples(*a.samples, seed, a.scale);
    ConstrainedFamily cf = constrained_two_qubit_family(planted, samples, tol);
    json rejected = json::array();
    for (const auto& r : cf.rejected)
      rejected.push_back({{"index", r.index}, {"reason", r.reason}, {"min_eigenvalue", r.min_eigenvalue}});
    report["planted"] = to_json(planted);
    report["sampling"] = {{"requested", *a.samples},
                          {"accepted", cf.accepted.size()},
                          {"scale", a.scale},
                          {"seed", seed},
                          {"rejected", rejected}};
    family = std::move(cf.family);
  }

  PipelineOutcome o = run_pipeline(family, u, tol, g, Extension::zero, a.dump_subspace, err);
  report.update(o.report);
  report["bloch_table"] = to_json(bloch_table(family, o.map, model));

  const auto& pairs = o.subspace.independent_pairs;
  if (pairs.size() == 4) {
    std::vector<LinearityRecord> records;
    for (const auto& p : pairs) records.push_back(linearity_record(p.joint));
    const LinearityCoefficients fit = solve_linearity_coefficients(records);
    const auto residuals = linearity_residuals(family, fit);
    double worst = 0.0;
    for (const auto& r : residuals) worst = std::max({worst, std::abs(r.gamma11), std::abs(r.gamma21)});
    const bool linear = worst <= tol.consistency;
    report["linearity"] = {{"coefficients", to_json(fit)},
                           {"residuals", to_json(residuals)},
                           {"max_residual", worst},
                           {"residuals_vanish", linear}};
    err << "linearity solve: a11=" << fit.a11 << " a21=" << fit.a21
        << ", max residual " << fmt(worst) << "\n";
  } else if (!a.members.empty()) {
    throw SingularSystemError("members file has only " + std::to_string(pairs.size()) +
                                  " linearly independent reduced states; four are needed",
                              std::numeric_limits<double>::infinity());
  } else {
    report["linearity"] = nullptr;
  }

  emit(report, g, out);
  return o.consistent ? kConsistent : kInconsistent;
}

// ---------------------------------------------------------------------------

struct SwapOptions {
  std::string omega_e;
  std::string states;
};

int cmd_swap_demo(const SwapOptions& a, const GlobalOptions& g, std::ostream& out,
                  std::ostream& err) {
  const ToleranceConfig tol = resolve_tolerances({}, g);
  ComplexMatrix omega = ComplexMatrix::Identity(2, 2) / 2.0;
  if (!a.omega_e.empty()) omega = json_io::matrix_from_json(json_io::load_file(a.omega_e));
  std::vector<ComplexMatrix> states = pauli_eigenstates();
  if (!a.states.empty()) {
    const json j = json_io::load_file(a.states);
    states = json_io::matrices_from_json(j.is_object() && j.contains("states") ? j["states"] : j);
  }

  const SwapReport r = swap_experiment(states, omega, tol);
  json report = header("swap-demo");
  json outputs = json::array();
  for (const auto& o : r.outputs) outputs.push_back(to_json(o));
  report["family"] = {{"label", r.family.label},
                      {"d_s", r.family.dims.d_s},
                      {"d_e", r.family.dims.d_e},
                      {"size", r.family.members.size()}};
  report["consistent"] = r.consistency.consistent;
  report["consistency"] = to_json(r.consistency);
  report["verdicts"] = to_json(r.verdicts);
  report["superoperator"] = to_json(r.map);
  report["kraus"] = to_json(r.kraus);
  report["outputs"] = outputs;
  report["max_output_deviation"] = r.max_output_deviation;
  report["pairs"] = to_json(r.pairs);
  report["tolerances"] = to_json(tol);

  err << "swap demo: " << states.size() << " system states, consistent=" << r.consistency.consistent
      << " CP=" << r.verdicts.completely_positive << ", max |Phi(rho) - omega_E| = "
      << fmt(r.max_output_deviation) << "\n";
  err << "  pair   D(before)   D(after)\n";
  for (const auto& p : r.pairs)
    err << "  " << p.first << "-" << p.second << "   " << std::fixed << std::setprecision(6)
        << p.before << "   " << p.after << (p.increased ? "   increased" : "") << "\n"
        << std::defaultfloat;

  emit(report, g, out);
  return r.consistency.consistent ? kConsistent : kInconsistent;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linearity of reduced open-system dynamics"};
  app.name("rdl");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--tol-rank", g.tol_rank, "Singular-value threshold for rank and membership");
  app.add_option("--tol-consistency", g.tol_consistency, "Threshold on |Tr_E(U Y U^dag)|");
  app.add_option("--out", g.out_file, "Write the JSON report to FILE instead of stdout");
  app.add_flag("--hull", g.hull, "Also sample equal-marginal pairs from the convex hull");
  app.add_option("--seed", g.seed, "Seed for every sampling path");
  app.add_option("--trials", g.hull_trials, "Hull sampling trials")->check(CLI::PositiveNumber);

  AnalyzeOptions an;
  auto* analyze = app.add_subcommand("analyze", "Decide linearity for a family and a unitary");
  analyze->add_option("--request", an.request, "Analysis request JSON");
  analyze->add_option("--family", an.family, "Family JSON (overrides the request)");
  analyze->add_option("--unitary", an.unitary, "Unitary as a matrix JSON or a model spec JSON");
  analyze->add_option("--model", an.model, "Built-in unitary")->check(CLI::IsMember({"two-qubit", "swap"}));
  analyze->add_option("--omega", an.omega, "Model angular frequency");
  analyze->add_option("--t", an.t, "Model evolution time");
  analyze->add_option("--extension", an.extension, "Extension off V_S")->check(CLI::IsMember({"zero", "none"}));
  analyze->add_flag("--dump-subspace", an.dump_subspace, "Include the subspace bases in the report");

  TwoQubitOptions tq;
  auto* two = app.add_subcommand("two-qubit", "Two-qubit sigma3 x sigma1 model end to end");
  two->add_option("--omega", tq.omega, "Angular frequency")->check(CLI::PositiveNumber);
  two->add_option("--t", tq.t, "Evolution time");
  two->add_option("--a11", tq.a11);
  two->add_option("--a21", tq.a21);
  two->add_option("--b11", tq.b11, "x,y,z")->delimiter(',')->expected(3);
  two->add_option("--b21", tq.b21, "x,y,z")->delimiter(',')->expected(3);
  two->add_option("--samples", tq.samples, "Number of sampled parameter sets");
  two->add_option("--scale", tq.scale, "Uniform sampling half-width")->check(CLI::Range(0.0, 1.0));
  two->add_option("--members", tq.members, "Family or parameter list for the linearity solve");
  two->add_flag("--dump-subspace", tq.dump_subspace);

  SwapOptions sw;
  auto* swap = app.add_subcommand("swap-demo", "Product family under the swap unitary");
  swap->add_option("--omega-e", sw.omega_e, "Environment state (matrix JSON)");
  swap->add_option("--states", sw.states, "System states (array of matrix JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(an, g, out, err);
    if (two->parsed()) return cmd_two_qubit(tq, g, out, err);
    return cmd_swap_demo(sw, g, out, err);
  } catch (const NotAStateError& e) {
    err << "error: NotAStateError: " << e.what() << "\n";
    return kInputError;
  } catch (const SingularSystemError& e) {
    err << "error: SingularSystemError: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace rdl::cli
