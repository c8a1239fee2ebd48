/*
   Copyright 2026 The eulerexp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include <algorithm>
#include <string>

#include "config.hpp"
#include "doctest.h"

using namespace ewx;

namespace {
const char* kMinimal = R"({"model": {"kind": "GBM", "params": [0.0, 0.2, 1.0]},
  "grid": {"n_list": [16, 32]}, "mc": {"M": 100}})";

bool has_item(const ConfigError& e, const std::string& prefix) {
  return std::any_of(e.items().begin(), e.items().end(),
                     [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

ConfigError error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError({});
}
}  // namespace

TEST_CASE("minimal config takes defaults") {
  RunConfig c = parse_config_text(kMinimal);
  CHECK(c.grid.m == 1);
  CHECK(c.grid.T_points == std::vector<double>{1.0});
  CHECK(c.experiment.output_dir == "out");
  eulerexp::Campaign k = make_campaign(c);
  CHECK(k.n_list == std::vector<int>{16, 32});
  CHECK(k.M == 100);
  CHECK(k.T == 1.0);
}

TEST_CASE("errors carry field paths") {
  CHECK(has_item(error_of(R"({"model": {"kind": "GBM", "params": [0, 0.2, 1]},
    "grid": {"n_list": [16], "T_points": [1.5]}, "mc": {"M": 10}})"), "grid.T_points[0]"));
  CHECK(has_item(error_of(R"({"model": {"kind": "GBM", "params": [0, 0.2, 1]},
    "grid": {"n_list": []}, "mc": {"M": 10}})"), "grid.n_list"));
  CHECK(has_item(error_of(R"({"model": {"kind": "GBM", "params": [0, 0.2, 1]},
    "grid": {"n_list": ["a"]}, "mc": {"M": 10}})"), "grid.n_list[0]"));
  CHECK(has_item(error_of(R"({"model": {"kind": "Heston", "params": []},
    "grid": {"n_list": [4]}, "mc": {"M": 10}})"), "model.kind"));
  CHECK(has_item(error_of(R"({"model": {"kind": "GBM", "params": [0, 0.2, 1]},
    "grid": {"n_list": [4]}, "mc": {"M": 10}, "experiment": {"campaigns": ["nope"]}})"),
                 "experiment.campaigns[0]"));
  CHECK(has_item(error_of(R"({"model": {"kind": "GBM", "params": [0, 0.2]},
    "grid": {"n_list": [4]}, "mc": {"M": 10}})"), "model.params"));
  CHECK(has_item(error_of("{not json"), "$"));
}

TEST_CASE("several errors are reported together") {
  ConfigError e = error_of(R"({"model": {"kind": "GBM", "params": [0, 0.2, 1]},
    "grid": {"n_list": [0], "m": 0}, "mc": {"M": 0}})");
  CHECK(e.items().size() >= 3);
}
