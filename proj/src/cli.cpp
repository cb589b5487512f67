#include "ringlab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "ringlab/ensembles.hpp"
#include "ringlab/error.hpp"
#include "ringlab/io.hpp"
#include "ringlab/montecarlo.hpp"
#include "ringlab/single_ring.hpp"
#include "ringlab/transforms.hpp"
#include "ringlab/verify.hpp"

namespace ringlab::cli {
namespace {

using nlohmann::json;

struct EnsembleArgs {
  std::string name = "ginibre";
  double v = 1.0;
  int k = 2;
  double q = 1.0;

  EnsembleSpec spec() const {
    EnsembleSpec s;
    s.variant = ensemble_variant_from_string(name);
    s.v = v;
    s.k = s.variant == EnsembleVariant::GinibreProduct ? k : 1;
    s.q = q;
    s.validate();
    return s;
  }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EnsembleArgs, name, v, k, q)

struct TransformArgs {
  std::string from;
  std::string to;
  std::string input;
  std::string output;
  std::size_t order = 0;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TransformArgs, from, to, input, output, order)

struct RingArgs {
  EnsembleArgs ensemble;
  std::string s_series;
  double zero_mode_fraction = 0.0;
  std::size_t points = 512;
  double margin = 0.1;
  std::string output;
  int threads = 0;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RingArgs, ensemble, s_series, zero_mode_fraction, points, margin,
                                                output, threads)

struct McArgs {
  EnsembleArgs ensemble;
  std::size_t n = 1024;
  std::size_t samples = 20;
  std::optional<std::uint64_t> seed;
  std::size_t bins = 64;
  std::size_t points = 512;
  double ks_tol = 0.02;
  double overlap_tol = 0.10;
  double radius_tol = 0.02;
  std::size_t edge_margin = 2;
  bool overlaps = true;
  std::optional<EnsembleArgs> profile_ensemble;
  bool hermitian_part = false;
  std::string convention = "spec";
  std::size_t hermitian_bins = 48;
  double moment_tol = 0.05;
  double density_tol = 0.05;
  std::string report;
  std::string dump;
  int threads = 0;
};

void to_json(json& j, const McArgs& a) {
  j = {{"ensemble", a.ensemble},
       {"n", a.n},
       {"samples", a.samples},
       {"seed", a.seed ? json(*a.seed) : json(nullptr)},
       {"bins", a.bins},
       {"points", a.points},
       {"ks_tol", a.ks_tol},
       {"overlap_tol", a.overlap_tol},
       {"radius_tol", a.radius_tol},
       {"edge_margin", a.edge_margin},
       {"overlaps", a.overlaps},
       {"profile_ensemble", a.profile_ensemble ? json(*a.profile_ensemble) : json(nullptr)},
       {"hermitian_part", a.hermitian_part},
       {"convention", a.convention},
       {"hermitian_bins", a.hermitian_bins},
       {"moment_tol", a.moment_tol},
       {"density_tol", a.density_tol},
       {"report", a.report},
       {"dump", a.dump},
       {"threads", a.threads}};
}

void from_json(const json& j, McArgs& a) {
  const McArgs d;
  a.ensemble = j.value("ensemble", d.ensemble);
  a.n = j.value("n", d.n);
  a.samples = j.value("samples", d.samples);
  a.seed = j.contains("seed") && !j["seed"].is_null() ? std::optional(j["seed"].get<std::uint64_t>()) : std::nullopt;
  a.bins = j.value("bins", d.bins);
  a.points = j.value("points", d.points);
  a.ks_tol = j.value("ks_tol", d.ks_tol);
  a.overlap_tol = j.value("overlap_tol", d.overlap_tol);
  a.radius_tol = j.value("radius_tol", d.radius_tol);
  a.edge_margin = j.value("edge_margin", d.edge_margin);
  a.overlaps = j.value("overlaps", d.overlaps);
  a.profile_ensemble = j.contains("profile_ensemble") && !j["profile_ensemble"].is_null()
                           ? std::optional(j["profile_ensemble"].get<EnsembleArgs>())
                           : std::nullopt;
  a.hermitian_part = j.value("hermitian_part", d.hermitian_part);
  a.convention = j.value("convention", d.convention);
  a.hermitian_bins = j.value("hermitian_bins", d.hermitian_bins);
  a.moment_tol = j.value("moment_tol", d.moment_tol);
  a.density_tol = j.value("density_tol", d.density_tol);
  a.report = j.value("report", d.report);
  a.dump = j.value("dump", d.dump);
  a.threads = j.value("threads", d.threads);
}

struct VerifyArgs {
  std::size_t order = 10;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  double tolerance = 0.0;
  std::string input;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VerifyArgs, order, trials, seed, tolerance, input)

/// Applies a --config file on top of the flag values. Unknown keys are
/// rejected so that typos do not pass silently.
template <class Args>
void apply_config(Args& args, const std::string& path) {
  if (path.empty()) return;
  const json patch = read_json_file(path);
  if (!patch.is_object()) throw Error(ErrorKind::Parse, path + ": config must be a JSON object");
  json merged = args;
  for (const auto& [key, value] : patch.items()) {
    if (!merged.contains(key)) throw Error(ErrorKind::Parse, path + ": unknown config key '" + key + "'");
  }
  merged.merge_patch(patch);
  try {
    args = merged.template get<Args>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

ExecPolicy policy_for(int threads) {
  if (threads < 0) throw Error(ErrorKind::InvalidArgument, "--threads must be >= 0");
  return threads == 1 ? ExecPolicy::serial() : ExecPolicy::parallel(threads);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

// --- transform -------------------------------------------------------------

/// Nodes of the transform map. Cumulants and R share coefficients.
std::string canonical_node(const std::string& name) {
  if (name == "moments" || name == "M") return "moments";
  if (name == "cumulants") return "cumulants";
  if (name == "R" || name == "S" || name == "A" || name == "K") return name;
  throw Error(ErrorKind::Parse, "unsupported transform node '" + name + "'");
}

using Edge = std::function<TruncatedSeries(const TruncatedSeries&)>;

const std::map<std::pair<std::string, std::string>, Edge>& transform_edges() {
  static const std::map<std::pair<std::string, std::string>, Edge> edges = {
      {{"moments", "cumulants"},
       [](const TruncatedSeries& s) {
         return TruncatedSeries::from_real(cumulants_from_moments({s.real_coeffs()}).kappa);
       }},
      {{"cumulants", "moments"},
       [](const TruncatedSeries& s) {
         return TruncatedSeries::from_real(moments_from_cumulants({s.real_coeffs()}).m);
       }},
      {{"cumulants", "R"}, [](const TruncatedSeries& s) { return s; }},
      {{"R", "cumulants"}, [](const TruncatedSeries& s) { return s; }},
      {{"R", "S"}, [](const TruncatedSeries& s) { return r_to_s({TransformKind::R, s}).series; }},
      {{"S", "R"}, [](const TruncatedSeries& s) { return s_to_r({TransformKind::S, s}).series; }},
      {{"R", "A"}, [](const TruncatedSeries& s) { return a_from_r({TransformKind::R, s}).a; }},
      {{"A", "R"}, [](const TruncatedSeries& s) { return r_from_a({s}).series; }},
      {{"A", "K"}, [](const TruncatedSeries& s) { return a_to_k({s}).series; }},
      {{"K", "A"}, [](const TruncatedSeries& s) { return k_to_a({TransformKind::K, s}).a; }},
      {{"K", "S"}, [](const TruncatedSeries& s) { return s_from_k({TransformKind::K, s}).series; }},
      {{"S", "K"}, [](const TruncatedSeries& s) { return k_from_s({TransformKind::S, s}).series; }},
      {{"A", "S"}, [](const TruncatedSeries& s) { return s_from_a({s}).series; }},
  };
  return edges;
}

/// Shortest path through the transform map; direct edges win.
std::vector<std::string> transform_path(const std::string& from, const std::string& to) {
  std::map<std::string, std::string> parent{{from, ""}};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    const std::string node = queue.front();
    queue.pop_front();
    if (node == to) break;
    for (const auto& [edge, fn] : transform_edges()) {
      if (edge.first == node && !parent.count(edge.second)) {
        parent[edge.second] = node;
        queue.push_back(edge.second);
      }
    }
  }
  std::vector<std::string> path;
  for (std::string n = to; !n.empty(); n = parent.at(n)) path.insert(path.begin(), n);
  return path;
}

int cmd_transform(TransformArgs args, std::ostream& out, std::ostream& err) {
  if (args.input.empty()) throw Error(ErrorKind::InvalidArgument, "transform needs --input");
  SeriesDocument doc = series_document_from_json(read_json_file(args.input));
  const std::string kind = canonical_node(doc.kind);
  const std::string from = args.from.empty() ? kind : canonical_node(args.from);
  if (from != kind) throw Error(ErrorKind::KindMismatch, "input holds " + doc.kind + ", not " + args.from);
  if (args.to.empty()) throw Error(ErrorKind::InvalidArgument, "transform needs --to");
  const std::string to = canonical_node(args.to);
  if (args.order > 0) doc.series = doc.series.truncated(std::min(args.order - 1, doc.series.order()));

  TruncatedSeries value = doc.series;
  const auto path = transform_path(from, to);
  for (std::size_t i = 1; i < path.size(); ++i) value = transform_edges().at({path[i - 1], path[i]})(value);

  json result = to_json(SeriesDocument{to, value});
  json route = path;
  result["path"] = route;
  emit(args.output, result.dump(2) + "\n", out);
  if (!args.output.empty()) err << "wrote " << args.output << "\n";
  return kOk;
}

// --- ring ------------------------------------------------------------------

int cmd_ring(RingArgs args, std::ostream& out, std::ostream& err) {
  SingleRingModel model;
  json meta;
  if (!args.s_series.empty()) {
    const SeriesDocument doc = series_document_from_json(read_json_file(args.s_series));
    if (canonical_node(doc.kind) != "S") throw Error(ErrorKind::KindMismatch, "--s-series needs kind S");
    model.s = AnalyticFunction::from_series(doc.series);
    model.zero_mode_fraction = args.zero_mode_fraction;
    model.label = "S-series " + args.s_series;
    meta["s_series"] = series_to_json(doc.series);
  } else {
    const EnsembleSpec spec = args.ensemble.spec();
    model = single_ring_model(spec);
    meta["ensemble"] = spec;
  }
  meta["config"] = args;
  const RadialProfile profile = build_profile(model, {args.points, args.margin}, policy_for(args.threads));

  out << "r_in=" << format_double(profile.radii.inner) << " r_out=" << format_double(profile.radii.outer) << "\n";
  if (profile.radii.degenerate) {
    err << "warning: degenerate ring, all eigenvalues on |z| = " << format_double(profile.radii.outer) << "\n";
  }
  if (profile.multiple_roots) err << "warning: multiple roots bracketed; outer-continuous branch kept\n";
  if (!args.output.empty()) {
    std::ostringstream csv;
    write_profile_csv(csv, profile, meta);
    write_text_file(args.output, csv.str());
  }
  return kOk;
}

// --- mc --------------------------------------------------------------------

CommutatorConvention convention_from_string(const std::string& name) {
  if (name == "spec" || name == "unit_trace") return CommutatorConvention::Spec;
  if (name == "unit_second_cumulant") return CommutatorConvention::UnitSecondCumulant;
  throw Error(ErrorKind::Parse, "unknown convention '" + name + "'");
}

int cmd_mc(McArgs args, std::ostream& out, std::ostream& err) {
  if (!args.seed) {
    if (const char* env = std::getenv("RINGLAB_SEED")) {
      try {
        std::size_t used = 0;
        args.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, std::string("RINGLAB_SEED is not an integer: ") + env);
      }
    } else {
      throw Error(ErrorKind::InvalidArgument, "mc needs --seed or RINGLAB_SEED");
    }
  }
  const EnsembleSpec spec = args.ensemble.spec();
  const ExecPolicy policy = policy_for(args.threads);
  // The worker count does not change any result, so it stays out of the
  // echo and reports compare equal across thread counts.
  json echo = args;
  echo.erase("threads");
  json report{{"config", echo}};
  bool pass = false;

  if (spec.variant == EnsembleVariant::CommutatorGinibre || args.hermitian_part) {
    HermitianConfig cfg;
    cfg.spec = spec;
    cfg.object = spec.variant == EnsembleVariant::CommutatorGinibre ? HermitianObject::Commutator
                                                                     : HermitianObject::HermitianPart;
    cfg.convention = convention_from_string(args.convention);
    cfg.n = args.n;
    cfg.samples = args.samples;
    cfg.seed = *args.seed;
    cfg.bins = args.hermitian_bins;
    cfg.moment_tol = args.moment_tol;
    cfg.density_tol = args.density_tol;
    cfg.policy = policy;
    const HermitianReport rep = hermitian_spectrum_check(cfg);
    report["check"] = "hermitian_spectrum";
    report["result"] = to_json(rep);
    pass = rep.all_pass();
  } else {
    const EnsembleSpec profile_spec = args.profile_ensemble ? args.profile_ensemble->spec() : spec;
    const RadialProfile analytic = build_profile(single_ring_model(profile_spec), {args.points, 0.1}, policy);
    McConfig cfg{spec, args.n, args.samples, *args.seed, args.overlaps, policy};
    const SampleBatch batch = generate_samples(cfg);
    if (batch.samples.empty()) throw Error(ErrorKind::IllConditioned, "every sample was discarded");
    const auto edges = uniform_edges(1.1 * analytic.radii.outer, args.bins);
    const EmpiricalProfile emp =
        args.overlaps ? empirical_overlap_density(batch.samples, edges) : empirical_radial_cdf(batch.samples, edges);
    const ComparisonReport rep = compare(analytic, emp, {args.ks_tol, args.overlap_tol, args.edge_margin, args.radius_tol});
    const double discard_rate = double(batch.discarded.size()) / double(args.samples);
    report["check"] = "radial_profile";
    report["profile"] = profile_spec;
    report["discarded"] = batch.discarded;
    report["discard_rate"] = discard_rate;
    report["pass_discard"] = discard_rate < 0.01;
    report["empirical"] = {{"bin_edges", emp.bin_edges}, {"F_hat", emp.F_hat}, {"O_hat", emp.O_hat},
                           {"bin_counts", emp.bin_counts}};
    report["result"] = to_json(rep);
    pass = rep.all_pass() && discard_rate < 0.01;
    if (!batch.discarded.empty()) err << "discarded " << batch.discarded.size() << " ill-conditioned samples\n";
    if (!args.dump.empty()) {
      std::ostringstream dump;
      write_sample_dump(dump, batch.samples);
      write_text_file(args.dump, dump.str());
    }
  }
  report["pass"] = pass;
  const std::string text = report.dump(2) + "\n";
  if (args.report.empty()) {
    out << text;
  } else {
    write_text_file(args.report, text);
    out << (pass ? "pass" : "FAIL") << "\n";
  }
  return pass ? kOk : kToleranceFailure;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(VerifyArgs args, std::ostream& out, std::ostream&) {
  VerifyOptions opts{args.order, args.trials, args.seed, std::nullopt};
  if (args.tolerance > 0.0) opts.tolerance = args.tolerance;
  std::vector<CheckResult> results;
  if (!args.input.empty()) {
    const SeriesDocument doc = series_document_from_json(read_json_file(args.input));
    results = document_checks(doc, opts.tolerance.value_or(default_verify_tolerance(doc.series.order() + 1)));
  } else {
    results = identity_checks(opts);
  }
  bool all = true;
  for (const auto& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << " error=" << format_double(r.error)
        << " tol=" << format_double(r.tolerance) << "\n";
    all = all && r.pass;
  }
  out << (all ? "all checks passed" : "some checks failed") << "\n";
  return all ? kOk : kToleranceFailure;
}

void add_ensemble_flags(CLI::App* cmd, EnsembleArgs& e, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "ensemble", e.name, "ginibre | haar | product | poisson | commutator");
  cmd->add_option("--" + prefix + "v", e.v, "Ginibre variance");
  cmd->add_option("--" + prefix + "k", e.k, "number of product factors");
  cmd->add_option("--" + prefix + "q", e.q, "free Poisson rectangularity");
}

}  // namespace

int run(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra of R-diagonal random matrices: transforms, single-ring profiles, Monte Carlo checks"};
  app.name("ringlab");
  app.require_subcommand(1);
  std::string config;

  TransformArgs targs;
  auto* transform = app.add_subcommand("transform", "convert a series between transforms");
  transform->add_option("--from", targs.from, "moments | cumulants | R | S | A | K (default: input kind)");
  transform->add_option("--to", targs.to, "moments | cumulants | R | S | A | K")->required();
  transform->add_option("--input,-i", targs.input, "series JSON {kind, coeffs}")->required();
  transform->add_option("--output,-o", targs.output, "output path (default stdout)");
  transform->add_option("--order", targs.order, "truncate input to this many coefficients");
  transform->add_option("--config", config, "JSON file overriding flags");

  RingArgs rargs;
  auto* ring = app.add_subcommand("ring", "radial profile F, rho, O of the single-ring law");
  add_ensemble_flags(ring, rargs.ensemble);
  ring->add_option("--s-series", rargs.s_series, "S-transform of X X^dagger as series JSON");
  ring->add_option("--zero-mode-fraction", rargs.zero_mode_fraction, "mass at the origin for --s-series");
  ring->add_option("--points", rargs.points, "grid points");
  ring->add_option("--margin", rargs.margin, "grid extends to r_out (1 + margin)");
  ring->add_option("--output,-o", rargs.output, "profile CSV path");
  ring->add_option("--threads", rargs.threads, "worker cap (0: all, 1: serial)");
  ring->add_option("--config", config, "JSON file overriding flags");

  McArgs margs;
  EnsembleArgs profile_args;
  std::optional<std::uint64_t> seed;
  auto* mc = app.add_subcommand("mc", "Monte Carlo sampling compared against the analytic profile");
  add_ensemble_flags(mc, margs.ensemble);
  mc->add_option("--n", margs.n, "matrix size");
  mc->add_option("--samples", margs.samples, "number of matrices");
  mc->add_option("--seed", seed, "master seed (fallback: RINGLAB_SEED)");
  mc->add_option("--bins", margs.bins, "radial bins");
  mc->add_option("--points", margs.points, "analytic grid points");
  mc->add_option("--ks-tol", margs.ks_tol);
  mc->add_option("--overlap-tol", margs.overlap_tol);
  mc->add_option("--radius-tol", margs.radius_tol);
  mc->add_option("--edge-margin", margs.edge_margin, "bins excluded at each ring edge");
  mc->add_flag("!--no-overlaps", margs.overlaps, "skip eigenvector overlaps");
  auto* profile_opt = mc->add_option("--profile-ensemble", profile_args.name,
                                     "compare against another ensemble's profile");
  mc->add_option("--profile-v", profile_args.v);
  mc->add_option("--profile-k", profile_args.k);
  mc->add_option("--profile-q", profile_args.q);
  mc->add_flag("--hermitian-part", margs.hermitian_part, "check the spectrum of X + X^dagger");
  mc->add_option("--convention", margs.convention, "commutator variance: spec | unit_second_cumulant");
  mc->add_option("--hermitian-bins", margs.hermitian_bins);
  mc->add_option("--moment-tol", margs.moment_tol);
  mc->add_option("--density-tol", margs.density_tol);
  mc->add_option("--report,-o", margs.report, "report JSON path (default stdout)");
  mc->add_option("--dump", margs.dump, "eigenvalue/overlap CSV dump");
  mc->add_option("--threads", margs.threads, "worker cap (0: all, 1: serial)");
  mc->add_option("--config", config, "JSON file overriding flags");

  VerifyArgs vargs;
  auto* verify = app.add_subcommand("verify", "identity and round-trip checks of the transform map");
  verify->add_option("--order", vargs.order, "series length");
  verify->add_option("--trials", vargs.trials, "random inputs per check");
  verify->add_option("--seed", vargs.seed);
  verify->add_option("--tolerance", vargs.tolerance, "override the default tolerance");
  verify->add_option("--input,-i", vargs.input, "check round trips of this series file instead");
  verify->add_option("--config", config, "JSON file overriding flags");

  std::vector<std::string> args(raw.rbegin(), raw.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*transform) {
      apply_config(targs, config);
      return cmd_transform(targs, out, err);
    }
    if (*ring) {
      apply_config(rargs, config);
      return cmd_ring(rargs, out, err);
    }
    if (*mc) {
      margs.seed = seed;
      if (profile_opt->count() > 0) margs.profile_ensemble = profile_args;
      apply_config(margs, config);
      return cmd_mc(margs, out, err);
    }
    apply_config(vargs, config);
    return cmd_verify(vargs, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return is_solver_failure(e.kind()) ? kSolverError : kInputError;
  } catch (const json::exception& e) {
    err << "error [Parse]: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSolverError;
  }
}

}  // namespace ringlab::cli
