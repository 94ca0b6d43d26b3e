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

// JSON encodings of measures, potentials, step records and check reports.
// Every encoder has a matching decoder; records carry schema_version.

#ifndef MJKO_IO_HPP_
#define MJKO_IO_HPP_

#include <string>

#include "mjko/diagnostics.hpp"
#include "mjko/jko.hpp"
#include "mjko/measure.hpp"
#include "mjko/potential.hpp"

namespace mjko {

std::string MeasureToJson(const DiscreteMeasure& mu);
DiscreteMeasure MeasureFromJson(ManifoldKind kind, const std::string& text);

std::string PotentialToJson(const PotentialSpec& spec);
PotentialSpec PotentialFromJson(ManifoldKind kind, const std::string& text);

// One trajectory line: the record plus the measure's atoms and weights.
struct TrajectoryLine {
  StepRecord record;
  std::vector<Coords> atoms;
  std::vector<double> weights;
};

std::string TrajectoryLineToJson(const StepRecord& record,
                                 const DiscreteMeasure& mu);
TrajectoryLine TrajectoryLineFromJson(const std::string& text);

std::string CheckReportToJson(const CheckReport& report);
CheckReport CheckReportFromJson(const std::string& text);

// Header and one row per record; non-finite values are written as "nan"/"inf".
std::string TableHeader();
std::string TableRow(const StepRecord& record);

}  // namespace mjko

#endif  // MJKO_IO_HPP_
