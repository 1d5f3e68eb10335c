// Copyright 2026 The gmoe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gmoe/cascade.hpp"
#include "gmoe/channels.hpp"
#include "gmoe/error.hpp"
#include "gmoe/lindblad.hpp"
#include "gmoe/optimizer.hpp"
#include "gmoe/sampling.hpp"
#include "gmoe/serialize.hpp"

namespace gmoe::cli {

namespace {

constexpr int kMinCutoff = 8;
constexpr double kSubadditivityTolerance = 1e-6;
constexpr double kTheoremTolerance = 1e-5;

struct RunConfig {
  std::string command;
  std::string channel_arg;
  std::optional<double> S0;
  std::optional<double> N0;
  std::optional<int> cutoff;
  int env_cutoff = 0;
  std::uint64_t seed = 0;
  int restarts = 4;
  int samples = 10;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
  // command-specific
  int k = 2;
  int iterations = 200;
  std::string gradient = "analytic";
  double step = 1e-5;
  std::string state = "gibbs";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Json report;
  std::string csv;  // filled when the command supports CSV
  int code = kPass;
  std::string message;
};

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["channel"] = c.channel_arg.empty() ? Json(nullptr) : to_json(parse_channel_argument(c.channel_arg));
  j["S0"] = c.S0 ? number(*c.S0) : Json(nullptr);
  j["N0"] = c.N0 ? number(*c.N0) : Json(nullptr);
  j["cutoff"] = c.cutoff ? Json(*c.cutoff) : Json(nullptr);
  j["env_cutoff"] = c.env_cutoff;
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["samples"] = c.samples;
  j["tolerance"] = c.tol ? number(*c.tol) : Json(nullptr);
  j["out"] = c.out;
  j["format"] = c.format;
  if (c.command == "verify-theorem") j["k"] = c.k;
  if (c.command == "optimize") {
    j["iterations"] = c.iterations;
    j["gradient"] = c.gradient;
    j["step"] = c.step;
  }
  if (c.command == "apply") j["state"] = c.state;
  return j;
}

// Exactly one of S0 / N0; the other follows through g or its inverse.
EntropyConstraint entropy_spec(const RunConfig& c) {
  if (c.S0.has_value() == c.N0.has_value()) throw UsageError("give exactly one of --S0 and --N0");
  return c.S0 ? EntropyConstraint::from_entropy(*c.S0) : EntropyConstraint::from_photons(*c.N0);
}

ChannelSpec channel_spec(const RunConfig& c) {
  if (c.channel_arg.empty()) throw UsageError("--channel is required for " + c.command);
  return parse_channel_argument(c.channel_arg);
}

int cutoff_or(const RunConfig& c, int fallback) { return c.cutoff.value_or(fallback); }

void require_json(const RunConfig& c) {
  if (c.format != "json") throw UsageError("--format csv is available for scan, optimize and verify-theorem");
}

// ---------------------------------------------------------------------------

Outcome cmd_entropy(const RunConfig& c) {
  require_json(c);
  const EntropyConstraint e = entropy_spec(c);
  Json head = Json::array();
  for (int n = 0; n < 10; ++n) {
    const double p = e.N0 == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::pow(e.N0 / (e.N0 + 1.0), n) / (e.N0 + 1.0);
    head.push_back(p);
  }
  Outcome o;
  o.report = {{"type", "EntropyReport"},
              {"S0", number(e.S0)},
              {"N0", number(e.N0)},
              {"g_N0", number(g_function(e.N0))},
              {"gibbs_spectrum_head", head},
              {"gibbs_cutoff_1e-13", gibbs_cutoff(e.N0, 1e-13)}};
  return o;
}

Outcome cmd_apply(const RunConfig& c) {
  require_json(c);
  const ChannelSpec ch = channel_spec(c);
  const int d = cutoff_or(c, 40);
  std::optional<EntropyConstraint> e;
  if (c.S0 || c.N0) e = entropy_spec(c);

  DensityOperator rho = DensityOperator::number_state(0, d);
  std::string state = c.state;
  if (state == "gibbs") {
    if (e) {
      rho = gibbs_state(e->N0, d);
    } else {
      state = "vacuum";
    }
  } else if (state == "random") {
    if (!e) throw UsageError("--state random needs --S0 or --N0");
    rho = sample_fixed_entropy_state(e->S0, d, c.seed);
  } else if (state.rfind("fock:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(state.substr(5));
    } catch (const std::exception&) {
      throw UsageError("bad Fock level in --state " + state);
    }
    if (n < 0 || n >= d) throw UsageError("Fock level outside the cutoff");
    rho = DensityOperator::number_state(n, d);
  } else if (state != "vacuum") {
    throw UsageError("--state must be gibbs, vacuum, random or fock:<n>");
  }

  ChannelOptions opts;
  opts.env_cutoff = c.env_cutoff;
  const ChannelOutput out = apply_channel(rho, ch, opts);
  const double n_in = mean_photon(rho);
  const QuadratureMoments m = quadrature_moments(rho.matrix());
  const double predicted = predicted_output_photons(ch, n_in, m.var_q + m.mean_q * m.mean_q);
  const double n_out = mean_photon(out.state);

  Outcome o;
  Json& r = o.report;
  r["type"] = "ApplyReport";
  r["channel"] = to_json(ch);
  r["state"] = state;
  r["input_entropy"] = number(von_neumann_entropy(rho));
  r["output_entropy"] = number(von_neumann_entropy(out.state));
  r["mean_photon_in"] = number(n_in);
  r["mean_photon_out"] = number(n_out);
  r["predicted_photons"] = number(predicted);
  r["kappa2"] = number(ch.kappa2_eff());
  r["c"] = number(ch.c_eff());
  r["photon_residual"] = number(std::abs(n_out - predicted));
  r["output_cutoff"] = out.state.dim();
  r["trace_defect"] = number(out.trace_defect);
  if (ch.cls != ChannelClass::D) {
    std::vector<cplx> grid;
    for (double radius : {0.3, 0.75, 1.5})
      for (int a = 0; a < 8; ++a) grid.push_back(std::polar(radius, a * std::numbers::pi / 4.0));
    r["chi_residual"] = number(verify_char_relation(rho, ch, grid));
  } else {
    r["chi_residual"] = nullptr;
  }
  if (ch.cls != ChannelClass::A2 && ch.cls != ChannelClass::B1) {
    const int dd = std::max(out.state.dim(), gibbs_cutoff(predicted, 1e-13));
    r["thermal_reference_distance"] =
        number(trace_distance(out.state.resized(dd), gibbs_state(predicted, dd)));
  }
  return o;
}

Outcome cmd_verify_theorem(const RunConfig& c) {
  if (c.k < 2 || c.k > 4) throw UsageError("--k must be 2, 3 or 4 (k = 1 is trivial)");
  const EntropyConstraint e = entropy_spec(c);
  const int default_cutoff = c.k == 2 ? 24 : 10;
  const int d = cutoff_or(c, default_cutoff);
  const double tol = c.tol.value_or(kTheoremTolerance);
  if (c.samples < 1) throw UsageError("--samples must be >= 1");
  if (std::pow(static_cast<double>(d), c.k) > 1e5)
    throw Error(ErrorKind::ResourceError, "d^k = " + std::to_string(std::pow(d, c.k)) + " exceeds 1e5");

  Outcome o;
  Json runs = Json::array();
  std::ostringstream csv;
  csv << "sample,input_entropy,output_entropy,bound,slack\n";
  csv.precision(17);
  int failures = 0;
  double worst_sub = std::numeric_limits<double>::infinity(), worst_bound = worst_sub;
  for (int i = 0; i < c.samples; ++i) {
    const DensityOperator rho = sample_fixed_entropy_state(e.S0, d, c.seed + static_cast<std::uint64_t>(i));
    const CascadeReport rep = run_cascade(rho, c.k, e.N0, d);
    const bool ok = rep.subadditivity_slack >= -kSubadditivityTolerance && rep.bound_slack >= -tol;
    failures += !ok;
    worst_sub = std::min(worst_sub, rep.subadditivity_slack);
    worst_bound = std::min(worst_bound, rep.bound_slack);
    Json j = to_json(rep);
    j["sample"] = i;
    j["pass"] = ok;
    runs.push_back(std::move(j));
    csv << i << ',' << rep.input_entropy << ',' << rep.direct_channel_entropy << ',' << g_function(e.N0) << ','
        << rep.bound_slack << '\n';
  }
  o.report = {{"type", "TheoremReport"},
              {"k", c.k},
              {"S0", number(e.S0)},
              {"N0", number(e.N0)},
              {"cutoff", d},
              {"samples", c.samples},
              {"subadditivity_tolerance", kSubadditivityTolerance},
              {"bound_tolerance", tol},
              {"min_subadditivity_slack", number(worst_sub)},
              {"min_bound_slack", number(worst_bound)},
              {"failures", failures},
              {"pass", failures == 0},
              {"cascades", std::move(runs)}};
  o.csv = csv.str();
  if (failures > 0) {
    o.code = kViolationCandidate;
    o.message = std::to_string(failures) + " cascade(s) violate subadditivity or the bound; inspect the report";
  }
  return o;
}

Outcome search_outcome(const OptimizationReport& rep) {
  Outcome o;
  o.report = to_json(rep);
  o.csv = samples_csv(rep);
  if (rep.violations > 0) {
    o.code = kViolationCandidate;
    std::ostringstream msg;
    msg.precision(12);
    msg << "VIOLATION CANDIDATE: " << rep.violations << " state(s) below the conjectured minimum "
        << rep.conjectured_min << " (best " << rep.best_found << ", gap " << rep.gap
        << "); the report carries the best state's spectrum and unitary for re-checking at a higher cutoff";
    o.message = msg.str();
  }
  return o;
}

Outcome cmd_optimize(const RunConfig& c) {
  const ChannelSpec ch = channel_spec(c);
  const EntropyConstraint e = entropy_spec(c);
  OptimizerConfig cfg;
  cfg.restarts = c.restarts;
  cfg.iterations = c.iterations;
  cfg.step = c.step;
  cfg.seed = c.seed;
  cfg.tolerance = c.tol.value_or(kViolationTolerance);
  cfg.channel_options.env_cutoff = c.env_cutoff;
  if (c.gradient == "analytic") {
    cfg.gradient = GradientMode::Analytic;
  } else if (c.gradient == "fd") {
    cfg.gradient = GradientMode::FiniteDifference;
  } else {
    throw UsageError("--gradient must be analytic or fd");
  }
  return search_outcome(minimize_output_entropy(ch, e.S0, cutoff_or(c, 24), cfg));
}

Outcome cmd_scan(const RunConfig& c) {
  const ChannelSpec ch = channel_spec(c);
  const EntropyConstraint e = entropy_spec(c);
  ChannelOptions opts;
  opts.env_cutoff = c.env_cutoff;
  return search_outcome(conjecture_v2_scan(ch, e.S0, cutoff_or(c, 24), c.samples, c.seed,
                                           c.tol.value_or(kViolationTolerance), opts));
}

Outcome cmd_lindblad(const RunConfig& c) {
  require_json(c);
  const ChannelSpec ch = channel_spec(c);
  if (!ch.has_semigroup()) throw UsageError("lindblad needs an attenuator, amplifier or B2 channel");
  const EntropyConstraint e = entropy_spec(c);
  if (!(e.S0 > 0.0)) throw UsageError("lindblad needs S0 > 0");
  const LindbladGenerator gen = ch.cls == ChannelClass::C_att   ? LindbladGenerator::attenuator(ch.N)
                                : ch.cls == ChannelClass::C_amp ? LindbladGenerator::amplifier(ch.N)
                                                                : LindbladGenerator::additive_noise();
  const double tol = c.tol.value_or(kViolationTolerance);
  const InfinitesimalReport rep =
      infinitesimal_conjecture_check(gen, e.S0, std::max(1, c.samples), c.seed, cutoff_or(c, 0), tol);
  Outcome o;
  o.report = to_json(rep);
  o.report["channel"] = to_json(ch);
  o.report["gamma_plus"] = gen.gamma_plus;
  o.report["gamma_minus"] = gen.gamma_minus;
  o.report["gibbs_rate_formula"] = number(gen.gibbs_rate(e.N0));
  if (rep.violations > 0) {
    o.code = kViolationCandidate;
    o.message = "VIOLATION CANDIDATE: " + std::to_string(rep.violations) +
                " sample(s) with an entropy rate below the Gibbs rate";
  }
  return o;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainError:
    case ErrorKind::SpecError:
    case ErrorKind::InvalidDimension:
    case ErrorKind::ShapeError:
      return kUsage;
    default:
      return kDiagnosticFailure;
  }
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--channel", c.channel_arg, "channel as JSON or CLASS[:key=value,...], e.g. att:eta=0.5,N=1");
  sub->add_option("--S0", c.S0, "input entropy in nats");
  sub->add_option("--N0", c.N0, "mean photon number of the matching Gibbs state");
  sub->add_option("--cutoff", c.cutoff, "Fock cutoff d (>= 8)");
  sub->add_option("--env-cutoff", c.env_cutoff, "environment cutoff (0: automatic)");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--samples", c.samples, "number of random samples");
  sub->add_option("--restarts", c.restarts, "number of optimizer restarts");
  sub->add_option("--tol", c.tol, "violation tolerance in nats");
  sub->add_option("--out", c.out, "write the report to this file");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Minimal output entropy of one-mode Gaussian channels", "gmoe"};
  app.require_subcommand(1);
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"entropy", "g(N0), its inverse and the Gibbs spectrum"},
      {"apply", "apply a channel to a state and check the photon and characteristic-function rules"},
      {"verify-theorem", "beam-splitter cascade checks for eta = 1/k"},
      {"optimize", "local search for the minimal output entropy at fixed input entropy"},
      {"scan", "sample fixed-entropy inputs and compare with the conjectured bound"},
      {"lindblad", "entropy rate under the channel's semigroup generator"},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, c);
    const std::string name = s.name;
    if (name == "verify-theorem") sub->add_option("--k", c.k, "number of modes (2, 3 or 4)");
    if (name == "optimize") {
      sub->add_option("--iterations", c.iterations, "descent iterations per restart");
      sub->add_option("--gradient", c.gradient, "analytic or fd");
      sub->add_option("--step", c.step, "finite-difference step (relative)");
    }
    if (name == "apply") sub->add_option("--state", c.state, "gibbs, vacuum, random or fock:<n>");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  for (CLI::App* sub : app.get_subcommands()) c.command = sub->get_name();

  Outcome o;
  try {
    if (c.cutoff && *c.cutoff < kMinCutoff) throw UsageError("--cutoff must be >= 8");
    if (c.env_cutoff < 0) throw UsageError("--env-cutoff must be >= 0");
    if (c.command == "entropy") o = cmd_entropy(c);
    else if (c.command == "apply") o = cmd_apply(c);
    else if (c.command == "verify-theorem") o = cmd_verify_theorem(c);
    else if (c.command == "optimize") o = cmd_optimize(c);
    else if (c.command == "scan") o = cmd_scan(c);
    else o = cmd_lindblad(c);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    err << (code == kUsage ? "usage error: " : "diagnostic failure: ") << e.what() << "\n";
    if (e.kind() == ErrorKind::CutoffTooSmall && std::string_view(e.what()).find("suggested") == std::string_view::npos)
      err << "hint: rerun with a larger --cutoff (current " << (c.cutoff ? std::to_string(*c.cutoff) : "default")
          << ")\n";
    return code;
  }

  std::string text;
  if (c.format == "csv") {
    text = o.csv;
  } else {
    Json doc;
    doc["schema"] = kSchemaVersion;
    doc["config"] = config_json(c);
    doc["status"] = o.code == kPass ? "pass" : "violation-candidate";
    doc["report"] = std::move(o.report);
    text = doc.dump(2) + "\n";
  }
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      err << "diagnostic failure: cannot write " << c.out << "\n";
      return kDiagnosticFailure;
    }
    f << text;
  }
  if (!o.message.empty()) err << o.message << "\n";
  return o.code;
}

}  // namespace gmoe::cli
