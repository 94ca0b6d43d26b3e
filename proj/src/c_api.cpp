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

#include "mjko/mjko.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "mjko/config.hpp"
#include "mjko/error.hpp"
#include "mjko/runner.hpp"
#include "mjko/transport.hpp"

struct mjko_config {
  mjko::RunConfig config;
};

struct mjko_run {
  mjko::RunSummary summary;
};

namespace {

thread_local std::string last_error;

mjko_status StatusOf(mjko::ErrorKind kind) {
  switch (kind) {
    case mjko::ErrorKind::kDomain:
      return MJKO_ERR_DOMAIN;
    case mjko::ErrorKind::kCutLocus:
      return MJKO_ERR_CUT_LOCUS;
    case mjko::ErrorKind::kNondifferentiable:
      return MJKO_ERR_NONDIFFERENTIABLE;
    case mjko::ErrorKind::kStagnation:
      return MJKO_ERR_STAGNATION;
    case mjko::ErrorKind::kConfig:
      return MJKO_ERR_CONFIG;
    case mjko::ErrorKind::kSize:
      return MJKO_ERR_SIZE;
    case mjko::ErrorKind::kInternal:
      return MJKO_ERR_INTERNAL;
    case mjko::ErrorKind::kIo:
      return MJKO_ERR_IO;
  }
  return MJKO_ERR_INTERNAL;
}

mjko_status Fail(mjko_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
mjko_status Guard(Body body) {
  try {
    body();
    return MJKO_OK;
  } catch (const mjko::Error& e) {
    return Fail(StatusOf(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(MJKO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(MJKO_ERR_INTERNAL, e.what());
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mjko::DiscreteMeasure ReadMeasure(mjko::ManifoldKind kind, std::size_t n,
                                  const double* atoms, const double* weights) {
  if (n == 0 || atoms == nullptr || weights == nullptr) {
    throw mjko::DomainError("measure arrays must be non-empty");
  }
  const std::size_t c = mjko::CoordCount(kind);
  std::vector<mjko::Point> points;
  for (std::size_t i = 0; i < n; ++i) {
    mjko::Coords coords{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < c; ++k) coords[k] = atoms[i * c + k];
    points.emplace_back(kind, coords);
  }
  return mjko::DiscreteMeasure(kind, std::move(points),
                               std::vector<double>(weights, weights + n));
}

}  // namespace

extern "C" {

const char* mjko_version(void) { return "0.1.0"; }

const char* mjko_last_error(void) { return last_error.c_str(); }

const char* mjko_status_name(mjko_status status) {
  switch (status) {
    case MJKO_OK:
      return "ok";
    case MJKO_ERR_DOMAIN:
      return "domain";
    case MJKO_ERR_CUT_LOCUS:
      return "cut_locus";
    case MJKO_ERR_NONDIFFERENTIABLE:
      return "nondifferentiable";
    case MJKO_ERR_STAGNATION:
      return "stagnation";
    case MJKO_ERR_CONFIG:
      return "config";
    case MJKO_ERR_SIZE:
      return "size";
    case MJKO_ERR_INTERNAL:
      return "internal";
    case MJKO_ERR_IO:
      return "io";
    case MJKO_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
  }
  return "unknown";
}

void mjko_string_free(char* s) { std::free(s); }

mjko_status mjko_config_load(const char* path, mjko_config** out) {
  if (path == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    *out = new mjko_config{mjko::ParseConfig(path)};
  });
}

mjko_status mjko_config_parse(const char* json_text, mjko_config** out) {
  if (json_text == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    *out = new mjko_config{mjko::ParseConfigText(json_text)};
  });
}

void mjko_config_free(mjko_config* config) { delete config; }

mjko_status mjko_config_set_seed(mjko_config* config, uint64_t seed) {
  if (config == nullptr) return Fail(MJKO_ERR_INVALID_ARGUMENT, "null config");
  config->config.scheme.seed = seed;
  return MJKO_OK;
}

mjko_status mjko_config_set_tau(mjko_config* config, double tau) {
  if (config == nullptr) return Fail(MJKO_ERR_INVALID_ARGUMENT, "null config");
  return Guard([&] {
    mjko::RunConfig updated = config->config;
    updated.SetTau(tau);
    updated.Validate();
    config->config = std::move(updated);
  });
}

mjko_status mjko_config_set_checks(mjko_config* config, const char* list) {
  if (config == nullptr || list == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { config->config.checks = mjko::ParseCheckList(list); });
}

mjko_status mjko_config_set_output_dir(mjko_config* config, const char* dir) {
  if (config == nullptr || dir == nullptr || *dir == '\0') {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "output directory must be non-empty");
  }
  config->config.output_dir = dir;
  return MJKO_OK;
}

mjko_status mjko_config_set_oracle(mjko_config* config, int enabled) {
  if (config == nullptr) return Fail(MJKO_ERR_INVALID_ARGUMENT, "null config");
  return Guard([&] {
    mjko::RunConfig updated = config->config;
    updated.oracle = enabled != 0;
    updated.Validate();
    config->config = std::move(updated);
  });
}

mjko_status mjko_config_to_json(const mjko_config* config, char** out) {
  if (config == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&] { *out = CopyString(mjko::ConfigToJson(config->config)); });
}

mjko_status mjko_run_execute(const mjko_config* config, mjko_run** out) {
  if (config == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return Guard([&] {
    *out = new mjko_run{mjko::ExecuteRun(config->config)};
    if ((*out)->summary.exit_code != mjko::kExitOk) {
      last_error = (*out)->summary.message;
    }
  });
}

void mjko_run_free(mjko_run* run) { delete run; }

int mjko_run_exit_code(const mjko_run* run) {
  return run == nullptr ? MJKO_EXIT_RUNTIME : run->summary.exit_code;
}

const char* mjko_run_status(const mjko_run* run) {
  return run == nullptr ? "" : run->summary.status.c_str();
}

const char* mjko_run_message(const mjko_run* run) {
  return run == nullptr ? "" : run->summary.message.c_str();
}

size_t mjko_run_step_count(const mjko_run* run) {
  return run == nullptr ? 0 : run->summary.steps;
}

size_t mjko_run_check_count(const mjko_run* run) {
  return run == nullptr ? 0 : run->summary.reports.size();
}

mjko_status mjko_run_check(const mjko_run* run, size_t index,
                           mjko_check_result* out) {
  if (run == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  if (index >= run->summary.reports.size()) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "check index out of range");
  }
  const mjko::CheckReport& r = run->summary.reports[index];
  out->id = r.id.c_str();
  out->passed = r.passed ? 1 : 0;
  out->worst_margin = r.worst_margin;
  out->tolerance = r.tolerance;
  out->details = r.details.c_str();
  return MJKO_OK;
}

mjko_status mjko_coord_count(const char* manifold, size_t* out) {
  if (manifold == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] { *out = mjko::CoordCount(mjko::ParseManifold(manifold)); });
}

mjko_status mjko_distance(const char* manifold, const double* x,
                          const double* y, double* out) {
  if (manifold == nullptr || x == nullptr || y == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const mjko::ManifoldKind kind = mjko::ParseManifold(manifold);
    const std::size_t c = mjko::CoordCount(kind);
    mjko::Coords a{0.0, 0.0, 0.0}, b{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < c; ++k) {
      a[k] = x[k];
      b[k] = y[k];
    }
    *out = mjko::Distance(mjko::Point(kind, a), mjko::Point(kind, b));
  });
}

mjko_status mjko_wasserstein(const char* manifold, size_t n,
                             const double* atoms_a, const double* weights_a,
                             size_t m, const double* atoms_b,
                             const double* weights_b, int p, double* out) {
  if (manifold == nullptr || out == nullptr) {
    return Fail(MJKO_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const mjko::ManifoldKind kind = mjko::ParseManifold(manifold);
    const mjko::DiscreteMeasure a = ReadMeasure(kind, n, atoms_a, weights_a);
    const mjko::DiscreteMeasure b = ReadMeasure(kind, m, atoms_b, weights_b);
    *out = mjko::Wasserstein(a, b, p).distance;
  });
}

}  // extern "C"
