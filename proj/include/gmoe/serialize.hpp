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

// JSON forms of channel specs and reports. Non-finite numbers are written
// as the strings "inf", "-inf" and "nan".

#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "gmoe/cascade.hpp"
#include "gmoe/channel_spec.hpp"
#include "gmoe/gaussian.hpp"
#include "gmoe/lindblad.hpp"
#include "gmoe/optimizer.hpp"

namespace gmoe {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"class": "C_att", "eta": 0.5, "N": 1}; B2 carries "t", C_amp and D
/// carry "kappa2", A1/A2 only "N", B1 nothing else.
Json to_json(const ChannelSpec& ch);
ChannelSpec channel_from_json(const Json& j);

/// JSON object, or the shorthand CLASS[:key=value,...] such as
/// "att:eta=0.5,N=1", "B2:t=1" or "B1". Throws spec-error.
ChannelSpec parse_channel_argument(std::string_view text);

Json number(double x);
Json to_json(const RVector& v);
Json to_json(const CMatrix& m);  // {"re": [[...]], "im": [[...]]}

Json to_json(const OptimizationReport& r);
Json to_json(const CascadeReport& r);
Json to_json(const InfinitesimalReport& r);
Json to_json(const RelativeEntropyCheck& r);
Json to_json(const InfimumRow& r);
Json to_json(const SufficientConditionScan& r);

/// sample,input_entropy,output_entropy,bound,slack with bound the
/// conjectured minimum and slack = output − bound.
std::string samples_csv(const OptimizationReport& r);

}  // namespace gmoe
