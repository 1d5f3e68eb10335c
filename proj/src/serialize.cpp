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

#include "gmoe/serialize.hpp"

#include <cmath>
#include <charconv>
#include <sstream>

#include "gmoe/error.hpp"

namespace gmoe {

namespace {

double parse_number(std::string_view s, std::string_view key) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorKind::SpecError, "bad value '" + std::string(s) + "' for " + std::string(key));
  return v;
}

double field(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw Error(ErrorKind::SpecError, std::string("channel JSON needs a numeric \"") + key + "\"");
  return j[key].get<double>();
}

double field_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? field(j, key) : fallback;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json to_json(const RVector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array(), c = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return Json{{"re", re}, {"im", im}};
}

Json to_json(const ChannelSpec& ch) {
  Json j;
  j["class"] = std::string(to_string(ch.cls));
  switch (ch.cls) {
    case ChannelClass::C_att:
      j["eta"] = ch.eta;
      j["N"] = ch.N;
      break;
    case ChannelClass::C_amp:
    case ChannelClass::D:
      j["kappa2"] = ch.kappa2;
      j["N"] = ch.N;
      break;
    case ChannelClass::B2:
      j["t"] = ch.t;
      break;
    case ChannelClass::A1:
    case ChannelClass::A2:
      j["N"] = ch.N;
      break;
    case ChannelClass::B1:
      break;
  }
  return j;
}

ChannelSpec channel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("class") || !j["class"].is_string())
    throw Error(ErrorKind::SpecError, "channel JSON needs a string \"class\"");
  switch (parse_channel_class(j["class"].get<std::string>())) {
    case ChannelClass::C_att: return ChannelSpec::attenuator(field(j, "eta"), field_or(j, "N", 0.0));
    case ChannelClass::C_amp: return ChannelSpec::amplifier(field(j, "kappa2"), field_or(j, "N", 0.0));
    case ChannelClass::D: return ChannelSpec::class_d(field(j, "kappa2"), field_or(j, "N", 0.0));
    case ChannelClass::B2: return ChannelSpec::b2(j.contains("t") ? field(j, "t") : field(j, "N"));
    case ChannelClass::A1: return ChannelSpec::a1(field_or(j, "N", 0.0));
    case ChannelClass::A2: return ChannelSpec::a2(field_or(j, "N", 0.0));
    case ChannelClass::B1: return ChannelSpec::b1();
  }
  throw Error(ErrorKind::SpecError, "unknown channel class");
}

ChannelSpec parse_channel_argument(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  if (!text.empty() && text.front() == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::SpecError, std::string("channel JSON: ") + e.what());
    }
    return channel_from_json(j);
  }
  const auto colon = text.find(':');
  Json j;
  j["class"] = std::string(text.substr(0, colon));
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw Error(ErrorKind::SpecError, "expected key=value in '" + std::string(item) + "'");
      const std::string key(item.substr(0, eq));
      j[key] = parse_number(item.substr(eq + 1), key);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return channel_from_json(j);
}

Json to_json(const OptimizationReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    Json o{{"index", s.index},
           {"origin", s.origin},
           {"input_entropy", number(s.input_entropy)},
           {"output_entropy", number(s.output_entropy)}};
    if (s.origin == "restart") {
      o["initial_output_entropy"] = number(s.initial_output_entropy);
      o["iterations"] = s.iterations;
    }
    samples.push_back(std::move(o));
  }
  Json aborted = Json::array();
  for (const auto& a : r.aborted) aborted.push_back({{"index", a.index}, {"reason", a.reason}});
  Json j;
  j["type"] = "OptimizationReport";
  j["channel"] = to_json(r.channel);
  j["S0"] = number(r.S0);
  j["N0"] = number(r.N0);
  j["conjectured_min"] = number(r.conjectured_min);
  j["candidate_entropy"] = number(r.candidate_entropy);
  j["best_found"] = number(r.best_found);
  j["gap"] = number(r.gap);
  j["n_restarts"] = r.n_restarts;
  j["n_samples"] = r.n_samples;
  j["violations"] = r.violations;
  j["seed"] = r.seed;
  j["cutoff"] = r.cutoff;
  j["tolerance"] = number(r.tolerance);
  j["gradient"] = r.gradient;
  j["best_state_diagnostics"] = {{"entropy_residual", number(r.best_state_diagnostics.entropy_residual)},
                                 {"tail_mass", number(r.best_state_diagnostics.tail_mass)},
                                 {"output_tail", number(r.best_state_diagnostics.output_tail)}};
  j["samples"] = std::move(samples);
  j["aborted"] = std::move(aborted);
  j["best_state"] = {{"spectrum", to_json(r.best_spectrum)}, {"unitary", to_json(r.best_unitary)}};
  return j;
}

Json to_json(const CascadeReport& r) {
  auto vec = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
  };
  Json j;
  j["type"] = "CascadeReport";
  j["k"] = r.k;
  j["N0"] = number(r.N0);
  j["cutoff"] = r.cutoff;
  j["canonical"] = r.canonical;
  j["eta_list"] = vec(r.eta_list);
  j["eta_bar_list"] = vec(r.eta_bar_list);
  j["input_entropy"] = number(r.input_entropy);
  j["joint_entropy"] = number(r.joint_entropy);
  j["joint_target"] = number(r.joint_target);
  j["reduced_entropies"] = vec(r.reduced_entropies);
  j["direct_channel_entropy"] = number(r.direct_channel_entropy);
  j["subadditivity_slack"] = number(r.subadditivity_slack);
  j["bound_slack"] = number(r.bound_slack);
  j["relative_entropy_slack"] = number(r.relative_entropy_slack);
  j["a_reduction_distance"] = number(r.a_reduction_distance);
  j["max_unitarity_defect"] = number(r.max_unitarity_defect);
  j["env_cutoffs"] = r.env_cutoffs;
  return j;
}

Json to_json(const InfinitesimalReport& r) {
  Json rates = Json::array();
  for (double x : r.rates) rates.push_back(number(x));
  Json j;
  j["type"] = "InfinitesimalReport";
  j["S0"] = number(r.S0);
  j["N0"] = number(r.N0);
  j["cutoff"] = r.cutoff;
  j["samples"] = r.samples;
  j["conjectured"] = number(r.conjectured);
  j["gibbs_rate_numeric"] = number(r.gibbs_rate_numeric);
  j["min_rate"] = number(r.min_rate);
  j["divergent"] = r.divergent;
  j["violations"] = r.violations;
  j["tolerance"] = number(r.tolerance);
  j["seed"] = r.seed;
  j["rates"] = std::move(rates);
  return j;
}

Json to_json(const RelativeEntropyCheck& r) {
  Json j;
  j["type"] = "RelativeEntropyCheck";
  j["applicable"] = r.applicable;
  if (!r.applicable) j["reason"] = r.reason;
  j["input_entropy"] = number(r.input_entropy);
  j["output_entropy"] = number(r.output_entropy);
  j["bound"] = number(r.bound);
  j["prefactor"] = number(r.prefactor);
  j["rel_input"] = number(r.rel_input);
  j["rel_output"] = number(r.rel_output);
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["residual"] = number(r.residual);
  j["slack"] = number(r.slack);
  j["monotonicity_slack"] = number(r.monotonicity_slack);
  return j;
}

Json to_json(const InfimumRow& r) {
  return Json{{"sigma", number(r.sigma)},
              {"conjugate_sigma", number(r.conjugate_sigma)},
              {"input_entropy", number(r.input_entropy)},
              {"output_entropy", number(r.output_entropy)},
              {"limit", number(r.limit)}};
}

Json to_json(const SufficientConditionScan& r) {
  return Json{{"type", "SufficientConditionScan"},
              {"points", r.points},
              {"holds", r.holds},
              {"max_margin", number(r.max_margin)},
              {"argmax_channel", to_json(r.argmax)},
              {"argmax_N0", number(r.argmax_N0)}};
}

std::string samples_csv(const OptimizationReport& r) {
  std::ostringstream os;
  os << "sample,input_entropy,output_entropy,bound,slack\n";
  for (const auto& s : r.samples)
    os << s.index << ',' << format_double(s.input_entropy) << ',' << format_double(s.output_entropy) << ','
       << format_double(r.conjectured_min) << ',' << format_double(s.output_entropy - r.conjectured_min) << '\n';
  return os.str();
}

}  // namespace gmoe
