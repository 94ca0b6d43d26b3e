// Copyright 2026 The manifold-jko Authors
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

// nlohmann::json codecs shared by io.cpp and config.cpp. Internal.

#ifndef MJKO_SRC_JSON_CODEC_HPP_
#define MJKO_SRC_JSON_CODEC_HPP_

#include <string>

#include "json.hpp"
#include "mjko/diagnostics.hpp"
#include "mjko/jko.hpp"
#include "mjko/measure.hpp"
#include "mjko/potential.hpp"

namespace mjko::codec {

using Json = nlohmann::ordered_json;

// Non-finite values travel as the strings "inf", "-inf" and "nan".
Json Number(double v);
double ToNumber(const Json& j, const std::string& field);

Json PointToJson(const Point& p);
Point PointFromJson(ManifoldKind kind, const Json& j, const std::string& field);

Json MeasureToJson(const DiscreteMeasure& mu);
DiscreteMeasure MeasureFromJson(ManifoldKind kind, const Json& j,
                                const std::string& field);

Json PotentialToJson(const PotentialSpec& spec);
PotentialSpec PotentialFromJson(ManifoldKind kind, const Json& j,
                                const std::string& field);

// ConfigError naming `field` unless every key of `j` is in `allowed`.
void RequireKnownKeys(const Json& j, std::initializer_list<const char*> allowed,
                      const std::string& field);
const Json& Required(const Json& j, const char* key, const std::string& field);

Json Parse(const std::string& text, const std::string& what);

}  // namespace mjko::codec

#endif  // MJKO_SRC_JSON_CODEC_HPP_
