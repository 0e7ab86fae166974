#include "ncavg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ncavg/certificate.hpp"
#include "ncavg/extreme.hpp"
#include "ncavg/infdim.hpp"
#include "ncavg/json_io.hpp"
#include "ncavg/sampler.hpp"
#include "ncavg/state.hpp"
#include "ncavg/unitary_disk.hpp"

namespace ncavg {

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::TargetOutsideDisk:
    case ErrorCode::DimensionTooSmall:
    case ErrorCode::Infeasible:
    case ErrorCode::UnreachableTarget:
    case ErrorCode::EmptyProjection:
      return kExitInfeasible;
    case ErrorCode::NoConvergence:
    case ErrorCode::ConvergenceFailure:
      return kExitConvergence;
    default:
      return kExitInvalidInput;
  }
}

namespace {

struct Options {
  std::string input;
  std::string original;
  std::string target;
  std::string mode = "state";
  std::string norm;
  std::string sampler = "haar";
  std::string below;
  std::string output;
  std::string stats;
  double tol = kClusterTolerance;
  double projection_target = -1.0;
  std::size_t dyadic = 0;
  std::size_t samples = 1000;
  std::size_t workers = 1;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool strict = false;
  bool orbit = false;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "malformed JSON in '" + path + "': " + e.what());
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing \"") + key + "\"");
  }
  return j[key];
}

/// --target wins over the input's "target"; the default is 0.
Complex resolve_target(const Options& o, const Json& input) {
  if (!o.target.empty()) return parse_complex(o.target);
  if (input.is_object() && input.contains("target")) return complex_from_json(input["target"]);
  return {0.0, 0.0};
}

Json phases_to_json(const SpectralUnitary& u) {
  Json phases = Json::array();
  Json multiplicities = Json::array();
  for (std::size_t j = 0; j < u.eigenvalue_count(); ++j) {
    phases.push_back(u.phases()[j] + u.global_phase());
    multiplicities.push_back(u.frames()[j].cols());
  }
  return {{"eigenphases", phases}, {"multiplicities", multiplicities}, {"global_phase", u.global_phase()}};
}

/// Trace-norm normalization policy shared by solve and verify.
TraceFunctional load_functional(const ComplexMatrix& b, bool strict, std::ostream* err) {
  if (strict) return TraceFunctional::from_normalized(b);
  TraceFunctional f = normalize_functional(b);
  if (err != nullptr && std::abs(f.original_scale() - 1.0) > 1e-10) {
    *err << "warning: functional rescaled by 1/" << f.original_scale() << " to trace norm one\n";
  }
  return f;
}

/// Dual-norm normalization for extreme-point problems.
ComplexMatrix normalize_dual(const ComplexMatrix& b, const NormPlugin& plugin, bool strict, std::ostream* err,
                             double* scale) {
  const double dual = plugin.dual_norm(b);
  if (dual <= 1e-14) throw Error(ErrorCode::ZeroFunctional, "functional vanishes");
  if (std::abs(dual - 1.0) > 1e-9) {
    if (strict) throw Error(ErrorCode::NotNormalized, "functional has dual norm " + std::to_string(dual));
    if (err != nullptr) *err << "warning: functional rescaled by 1/" << dual << " to dual norm one\n";
  }
  if (scale != nullptr) *scale = dual;
  return b / dual;
}

int finish(const Json& result, const Certificate& cert, const Options& o, std::ostream& out) {
  const std::string text = result.dump(2) + "\n";
  if (o.output.empty()) {
    out << text;
  } else {
    std::ofstream file(o.output);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + o.output + "'");
    file << text;
  }
  return cert.passed() ? kExitPass : kExitVerificationFailure;
}

Json base_result(const Certificate& cert, Complex w) {
  return {{"construction", cert.construction}, {"target", complex_to_json(w)}, {"certificate", certificate_to_json(cert)}};
}

int solve_functional(const Options& o, const Json& input, std::ostream& out, std::ostream& err) {
  const ComplexMatrix b = matrix_from_json(require(input, "matrix"));
  const Complex w = resolve_target(o, input);
  const DiskTarget target(w);
  const TraceFunctional f = load_functional(b, o.strict, &err);
  const ComplexMatrix x = solve_functional_unitary(f, target);
  const Certificate cert = certify_functional_unitary(f.matrix(), x, w);
  Json result = base_result(cert, w);
  result["dimension"] = x.rows();
  result["scale"] = f.original_scale();
  result["matrix"] = matrix_to_json(x);
  return finish(result, cert, o, out);
}

int solve_unitary(const Options& o, const Json& input, std::ostream& out, std::ostream& err) {
  std::string mode = o.mode;
  if (input.is_object() && input.contains("mode") && input["mode"].is_string()) mode = input["mode"].get<std::string>();
  if (mode == "functional") return solve_functional(o, input, out, err);
  if (mode != "state") throw Error(ErrorCode::InvalidArgument, "mode must be 'state' or 'functional'");
  const DensityState state(matrix_from_json(require(input, "matrix")));
  const Complex w = resolve_target(o, input);
  const SpectralUnitary u = solve_state_unitary(state, DiskTarget(w));
  const ComplexMatrix m = u.matrix();
  const Certificate cert = certify_state_unitary(state.matrix(), m, w, o.tol);
  Json result = base_result(cert, w);
  result["dimension"] = m.rows();
  result.update(phases_to_json(u));
  result["matrix"] = matrix_to_json(m);
  return finish(result, cert, o, out);
}

int solve_rank_one(const Options& o, const Json& input, std::ostream& out) {
  const ComplexMatrix b = matrix_from_json(require(input, "matrix"));
  const RankOneDyad dyad = rank_one_annihilator(b);
  const Certificate cert = certify_rank_one(b, dyad.x, dyad.y);
  Json result = base_result(cert, {0.0, 0.0});
  result["dimension"] = b.rows();
  result["x"] = vector_to_json(dyad.x);
  result["y"] = vector_to_json(dyad.y);
  result["matrix"] = matrix_to_json(dyad.matrix());
  return finish(result, cert, o, out);
}

int solve_extreme(const Options& o, const Json& input, std::ostream& out, std::ostream& err) {
  std::string norm = o.norm;
  if (norm.empty() && input.is_object() && input.contains("norm")) norm = input["norm"].get<std::string>();
  if (norm.empty()) throw Error(ErrorCode::InvalidArgument, "--norm kyfan:k|schatten:p is required");
  const auto plugin = make_norm_plugin(norm);
  const ComplexMatrix raw = matrix_from_json(require(input, "matrix"));
  if (raw.rows() != raw.cols()) throw Error(ErrorCode::DimensionMismatch, "functional must be square");
  double scale = 1.0;
  const ComplexMatrix b = normalize_dual(raw, *plugin, o.strict, &err, &scale);
  const Complex w = resolve_target(o, input);
  const DiskTarget target(w);
  const auto* kyfan = dynamic_cast<const KyFanNorm*>(plugin.get());
  const ExtremePoint point = kyfan != nullptr && !o.orbit ? kyfan_extreme_solve(b, kyfan->k(), target)
                                                          : general_extreme_solve(b, *plugin, target);
  const Certificate cert = certify_extreme(b, point, w, *plugin);
  Json result = base_result(cert, w);
  result["dimension"] = b.rows();
  result["norm"] = plugin->id();
  result["kind"] = to_string(point.kind);
  result["scale"] = scale;
  result["matrix"] = matrix_to_json(point.matrix);
  return finish(result, cert, o, out);
}

Json projection_summary(const NormalState& state, const LazyProjection& p) {
  const ProjectionValue v = projection_apply(state, p);
  Json j = projection_to_json(p);
  j["value"] = v.value;
  j["error_bound"] = v.error_bound;
  return j;
}

int solve_projection(const Options& o, const Json& input, std::ostream& out) {
  const NormalState state = normal_state_from_json(input);
  if (o.dyadic > 0) {
    const auto ladder = dyadic_ladder(state, o.dyadic);
    const Certificate cert = certify_ladder(state, ladder);
    Json levels = Json::array();
    for (const auto& q : ladder) levels.push_back(projection_summary(state, q));
    Json result = {{"construction", cert.construction}, {"depth", o.dyadic}, {"ladder", levels},
                   {"certificate", certificate_to_json(cert)}};
    return finish(result, cert, o, out);
  }
  if (o.projection_target < 0.0) throw Error(ErrorCode::InvalidArgument, "--target t or --dyadic m is required");
  const double t = o.projection_target;
  std::optional<LazyProjection> outer;
  if (!o.below.empty()) {
    // Accept either a bare projection or the output of an earlier solve.
    const Json below = read_json_file(o.below);
    outer = projection_from_json(below.contains("projection") ? below["projection"] : below);
  }
  const LazyProjection q = outer ? divisibility_solve(state, *outer, t) : finite_rank_projection_solve(state, t);
  const Certificate cert = certify_projection(state, q, t, outer ? &*outer : nullptr);
  Json result = {{"construction", cert.construction}, {"target", t}, {"projection", projection_summary(state, q)},
                 {"certificate", certificate_to_json(cert)}};
  if (outer) result["outer"] = projection_to_json(*outer);
  return finish(result, cert, o, out);
}

int sample_range_command(const Options& o, const Json& input, std::ostream& out) {
  const DensityState state(matrix_from_json(require(input, "matrix")));
  const Sampler sampler = sampler_from_string(o.sampler);
  const auto points = sample_range(state, sampler, o.samples, o.seed, o.workers);
  const CoverageStats s = coverage_stats(points);
  std::ostringstream csv;
  csv.precision(17);
  for (const auto& z : points) csv << z.real() << "," << z.imag() << "\n";
  const Json stats = {{"sampler", o.sampler}, {"samples", s.samples}, {"seed", o.seed}, {"workers", o.workers},
                      {"grid", s.grid}, {"radius", s.radius}, {"disk_cells", s.disk_cells},
                      {"hit_cells", s.hit_cells}, {"coverage", s.coverage}, {"min_modulus", s.min_modulus},
                      {"max_modulus", s.max_modulus}};
  const auto write_file = [](const std::string& path, const std::string& text) {
    std::ofstream file(path);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    file << text;
  };
  if (o.output.empty()) {
    out << csv.str();
  } else {
    write_file(o.output, csv.str());
  }
  if (!o.stats.empty()) {
    write_file(o.stats, stats.dump(2) + "\n");
  } else if (!o.output.empty()) {
    out << stats.dump(2) << "\n";
  }
  return kExitPass;
}

int commutative_average_command(const Options& o, std::ostream& out) {
  if (o.n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be at least 1");
  const Complex w = o.target.empty() ? Complex(0.0, 0.0) : parse_complex(o.target);
  const auto points = commutative_average(static_cast<Index>(o.n), DiskTarget(w));
  const Certificate cert = certify_average(points, w);
  Json list = Json::array();
  for (const auto& z : points) list.push_back(complex_to_json(z));
  Json result = base_result(cert, w);
  result["n"] = o.n;
  result["points"] = list;
  return finish(result, cert, o, out);
}

int two_eigenvalue_command(const Options& o, const Json& input, std::ostream& out) {
  const DensityState state(matrix_from_json(require(input, "matrix")));
  const Complex w = resolve_target(o, input);
  const auto search = two_eigenvalue_search(state, w);
  Json result = {{"experiment", "two_eigenvalue_search"}, {"target", complex_to_json(w)},
                 {"evaluated", search.evaluated}, {"best_residual", search.best_residual},
                 {"best_rank", search.best_rank}, {"best_split", search.best_split},
                 {"best_phase_gap", search.best_phase_gap}};
  return finish(result, Certificate{}, o, out);
}

// Recomputes the certificate of a stored construction against the original
// input. Exit 0 iff it passes.
int verify(const Options& o, std::ostream& out) {
  const Json construction = read_json_file(o.input);
  const Json original = o.original.empty() ? Json::object() : read_json_file(o.original);
  const std::string tag = require(construction, "construction").get<std::string>();
  const auto target = [&]() -> Complex {
    if (original.is_object() && original.contains("target")) return complex_from_json(original["target"]);
    return complex_from_json(require(construction, "target"));
  };
  Certificate cert;
  if (tag == "state_unitary") {
    const DensityState state(matrix_from_json(require(original, "matrix")));
    cert = certify_state_unitary(state.matrix(), matrix_from_json(require(construction, "matrix")), target(), o.tol);
  } else if (tag == "functional_unitary") {
    const TraceFunctional f = load_functional(matrix_from_json(require(original, "matrix")), o.strict, nullptr);
    cert = certify_functional_unitary(f.matrix(), matrix_from_json(require(construction, "matrix")), target());
  } else if (tag == "rank_one_annihilator") {
    cert = certify_rank_one(matrix_from_json(require(original, "matrix")), vector_from_json(require(construction, "x")),
                            vector_from_json(require(construction, "y")));
  } else if (tag == "extreme_point") {
    const auto plugin = make_norm_plugin(require(construction, "norm").get<std::string>());
    const ComplexMatrix b = normalize_dual(matrix_from_json(require(original, "matrix")), *plugin, o.strict, nullptr,
                                           nullptr);
    const ExtremePoint point{extreme_kind_from_string(require(construction, "kind").get<std::string>()),
                             matrix_from_json(require(construction, "matrix")), plugin->id()};
    cert = certify_extreme(b, point, target(), *plugin);
  } else if (tag == "finite_rank_projection" || tag == "sub_projection") {
    const NormalState state = normal_state_from_json(original);
    const LazyProjection q = projection_from_json(require(construction, "projection"));
    const double t = require(construction, "target").get<double>();
    if (tag == "sub_projection") {
      const LazyProjection outer = projection_from_json(require(construction, "outer"));
      cert = certify_projection(state, q, t, &outer);
    } else {
      cert = certify_projection(state, q, t);
    }
  } else if (tag == "dyadic_ladder") {
    const NormalState state = normal_state_from_json(original);
    std::vector<LazyProjection> ladder;
    for (const auto& level : require(construction, "ladder")) ladder.push_back(projection_from_json(level));
    cert = certify_ladder(state, ladder);
  } else if (tag == "commutative_average") {
    std::vector<Complex> points;
    for (const auto& z : require(construction, "points")) points.push_back(complex_from_json(z));
    cert = certify_average(points, target());
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown construction '" + tag + "'");
  }
  out << certificate_to_json(cert).dump(2) << "\n";
  return cert.passed() ? kExitPass : kExitVerificationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constructive unitaries, dyads, extreme points and projections hitting prescribed state values",
               "ncavg"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", o.output, "Write the result to this file instead of stdout");
    sub->add_flag("--strict", o.strict, "Reject unnormalized functionals instead of rescaling");
  };
  const auto add_target = [&](CLI::App* sub) {
    sub->add_option("--target", o.target, "Target value as a complex literal, e.g. 0.3-0.4i");
  };

  auto* unitary = app.add_subcommand("solve-unitary", "Unitary U with tr(AU) = w");
  unitary->add_option("input", o.input, "Input JSON {\"matrix\", \"target\"?, \"mode\"?}")->required();
  unitary->add_option("--mode", o.mode, "state or functional");
  unitary->add_option("--tol", o.tol, "Eigenphase clustering tolerance");
  add_target(unitary);
  add_common(unitary);

  auto* functional = app.add_subcommand("solve-functional", "Unitary X with tr(BX) = w");
  functional->add_option("input", o.input, "Input JSON {\"matrix\", \"target\"?}")->required();
  add_target(functional);
  add_common(functional);

  auto* rank_one = app.add_subcommand("solve-rank-one-zero", "Unit x, y with <Bx, y> = 0");
  rank_one->add_option("input", o.input, "Input JSON {\"matrix\"}")->required();
  add_common(rank_one);

  auto* extreme = app.add_subcommand("solve-extreme", "Extreme point E of the unit ball with tr(BE) = w");
  extreme->add_option("input", o.input, "Input JSON {\"matrix\", \"target\"?}")->required();
  extreme->add_option("--norm", o.norm, "kyfan:k or schatten:p");
  extreme->add_flag("--orbit", o.orbit, "Use the unitary-orbit path search for Ky Fan norms too");
  add_target(extreme);
  add_common(extreme);

  auto* projection = app.add_subcommand("solve-projection", "Projection with prescribed value of a normal state");
  projection->add_option("input", o.input, "Normal state JSON {\"eigenvalues\", \"tail_mass\"?}")->required();
  auto* t_opt = projection->add_option("--target", o.projection_target, "Target value t in [0, 1)");
  auto* d_opt = projection->add_option("--dyadic", o.dyadic, "Depth of the nested dyadic ladder");
  projection->add_option("--below", o.below, "Projection JSON P; solve for Q <= P")->needs(t_opt);
  t_opt->excludes(d_opt);
  add_common(projection);

  auto* sample = app.add_subcommand("sample-range", "Monte Carlo samples of phi over random unitaries");
  sample->add_option("input", o.input, "Input JSON {\"matrix\"}")->required();
  sample->add_option("--sampler", o.sampler, "haar, diagonal or projection");
  sample->add_option("--samples", o.samples, "Number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed, "Base seed");
  sample->add_option("--workers", o.workers, "Worker threads (seed + worker index)")->check(CLI::PositiveNumber);
  sample->add_option("--stats", o.stats, "Write coverage statistics JSON to this file");
  sample->add_option("--output", o.output, "Write the CSV to this file; statistics then go to stdout");

  auto* verify_cmd = app.add_subcommand("verify", "Recompute the certificate of a stored construction");
  verify_cmd->add_option("construction", o.input, "Construction JSON produced by a solve command")->required();
  verify_cmd->add_option("--input", o.original, "Original input JSON");
  verify_cmd->add_option("--tol", o.tol, "Eigenphase clustering tolerance");
  verify_cmd->add_flag("--strict", o.strict, "Reject unnormalized functionals instead of rescaling");

  auto* average = app.add_subcommand("commutative-average", "n unimodular points averaging to w");
  average->add_option("--n", o.n, "Number of points")->required();
  add_target(average);
  add_common(average);

  auto* experiment = app.add_subcommand("two-eigenvalue-search",
                                        "Closest approach to |w| by unitaries with two eigenvalues");
  experiment->add_option("input", o.input, "Input JSON {\"matrix\", \"target\"?}")->required();
  add_target(experiment);
  add_common(experiment);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  try {
    if (verify_cmd->parsed()) return verify(o, out);
    if (average->parsed()) return commutative_average_command(o, out);
    const Json input = read_json_file(o.input);
    if (unitary->parsed()) return solve_unitary(o, input, out, err);
    if (functional->parsed()) return solve_functional(o, input, out, err);
    if (rank_one->parsed()) return solve_rank_one(o, input, out);
    if (extreme->parsed()) return solve_extreme(o, input, out, err);
    if (projection->parsed()) return solve_projection(o, input, out);
    if (sample->parsed()) return sample_range_command(o, input, out);
    if (experiment->parsed()) return two_eigenvalue_command(o, input, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const Json::exception& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace ncavg
