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
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulerexp/experiments.hpp"
#include "eulerexp/model.hpp"
#include "json.hpp"

namespace ewx {

struct ModelBlock {
  std::string kind;
  std::vector<double> params;
};
struct GridBlock {
  std::vector<int> n_list;
  int m = 1;
  std::vector<double> T_points{1.0};
  int root = 0;
};
struct McBlock {
  std::size_t M = 1;
  std::uint64_t seed = 1;
  std::size_t predict_paths = 0;
  int predict_m = 0;
};
struct ExperimentBlock {
  std::vector<std::string> campaigns;
  std::vector<std::string> test_functions;
  std::vector<double> p{2.0};
  std::string output_dir = "out";
  std::string weight = "pathwise";
  int workers = 1;
  int dump_paths = 0;
};
struct RunConfig {
  ModelBlock model;
  GridBlock grid;
  McBlock mc;
  ExperimentBlock experiment;
  nlohmann::json source;  // the parsed document, for hashing
};

// Itemized configuration errors, each prefixed by a path into the document.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> items);
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
};

RunConfig parse_config_json(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

eulerexp::DiffusionModel make_model(const RunConfig& cfg);
eulerexp::Campaign make_campaign(const RunConfig& cfg);

// Known campaign names.
const std::vector<std::string>& campaign_names();

}  // namespace ewx
