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
#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ewx {

using nlohmann::json;

ConfigError::ConfigError(std::vector<std::string> items)
    : std::runtime_error([&] {
        std::string s = "invalid configuration:";
        for (const auto& i : items) s += "\n  " + i;
        return s;
      }()),
      items_(std::move(items)) {}

const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names{"strong",  "weak",    "clt",         "density",
                                              "variance", "leading", "second_order"};
  return names;
}

namespace {

// Collects errors while walking the document.
class Reader {
 public:
  std::vector<std::string> errors;

  const json* object(const json& doc, const std::string& key, const std::string& path,
                     bool required = true) {
    auto it = doc.find(key);
    if (it == doc.end()) {
      if (required) errors.push_back(path + ": missing field");
      return nullptr;
    }
    if (!it->is_object()) {
      errors.push_back(path + ": expected object");
      return nullptr;
    }
    return &*it;
  }

  template <class T>
  bool get(const json& obj, const std::string& key, const std::string& path, T& out,
           bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) errors.push_back(path + ": missing field");
      return false;
    }
    return convert(*it, path, out);
  }

  bool convert(const json& v, const std::string& path, double& out) {
    if (!v.is_number()) return type_error(path, "number");
    out = v.get<double>();
    return true;
  }
  bool convert(const json& v, const std::string& path, int& out) {
    if (!v.is_number_integer()) return type_error(path, "integer");
    out = v.get<int>();
    return true;
  }
  // std::size_t and std::uint64_t coincide on the supported platforms.
  bool convert(const json& v, const std::string& path, std::uint64_t& out) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      return type_error(path, "nonnegative integer");
    }
    out = v.get<std::uint64_t>();
    return true;
  }
  bool convert(const json& v, const std::string& path, std::string& out) {
    if (!v.is_string()) return type_error(path, "string");
    out = v.get<std::string>();
    return true;
  }
  template <class T>
  bool convert(const json& v, const std::string& path, std::vector<T>& out) {
    if (!v.is_array()) return type_error(path, "array");
    out.clear();
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      T x{};
      if (convert(v[i], path + "[" + std::to_string(i) + "]", x)) {
        out.push_back(x);
      } else {
        ok = false;
      }
    }
    return ok;
  }

 private:
  bool type_error(const std::string& path, const char* want) {
    errors.push_back(path + ": expected " + want);
    return false;
  }
};

}  // namespace

RunConfig parse_config_json(const json& doc) {
  Reader r;
  RunConfig cfg;
  cfg.source = doc;
  if (!doc.is_object()) throw ConfigError({"$: expected object"});

  if (const json* m = r.object(doc, "model", "model")) {
    if (r.get(*m, "kind", "model.kind", cfg.model.kind, true)) {
      try {
        eulerexp::parse_model_kind(cfg.model.kind);
      } catch (const std::exception&) {
        r.errors.push_back("model.kind: unknown model '" + cfg.model.kind + "'");
      }
    }
    r.get(*m, "params", "model.params", cfg.model.params, true);
  }
  if (const json* g = r.object(doc, "grid", "grid")) {
    if (r.get(*g, "n_list", "grid.n_list", cfg.grid.n_list, true)) {
      if (cfg.grid.n_list.empty()) r.errors.push_back("grid.n_list: must be nonempty");
      for (std::size_t i = 0; i < cfg.grid.n_list.size(); ++i) {
        if (cfg.grid.n_list[i] < 1) {
          r.errors.push_back("grid.n_list[" + std::to_string(i) + "]: must be >= 1");
        }
      }
    }
    if (r.get(*g, "m", "grid.m", cfg.grid.m, false) && cfg.grid.m < 1) {
      r.errors.push_back("grid.m: must be >= 1");
    }
    if (r.get(*g, "T_points", "grid.T_points", cfg.grid.T_points, false)) {
      if (cfg.grid.T_points.empty()) r.errors.push_back("grid.T_points: must be nonempty");
      for (std::size_t i = 0; i < cfg.grid.T_points.size(); ++i) {
        const double t = cfg.grid.T_points[i];
        if (!(t > 0 && t <= 1)) {
          r.errors.push_back("grid.T_points[" + std::to_string(i) + "]: must lie in (0, 1]");
        }
      }
    }
    if (r.get(*g, "root", "grid.root", cfg.grid.root, false) && cfg.grid.root < 0) {
      r.errors.push_back("grid.root: must be >= 0");
    }
  }
  if (const json* mc = r.object(doc, "mc", "mc")) {
    if (r.get(*mc, "M", "mc.M", cfg.mc.M, true) && cfg.mc.M < 1) {
      r.errors.push_back("mc.M: must be >= 1");
    }
    r.get(*mc, "seed", "mc.seed", cfg.mc.seed, false);
    r.get(*mc, "predict_paths", "mc.predict_paths", cfg.mc.predict_paths, false);
    if (r.get(*mc, "predict_m", "mc.predict_m", cfg.mc.predict_m, false) &&
        cfg.mc.predict_m < 0) {
      r.errors.push_back("mc.predict_m: must be >= 0");
    }
  }
  if (const json* e = r.object(doc, "experiment", "experiment", false)) {
    auto& ex = cfg.experiment;
    if (r.get(*e, "campaigns", "experiment.campaigns", ex.campaigns, false)) {
      for (std::size_t i = 0; i < ex.campaigns.size(); ++i) {
        const auto& names = campaign_names();
        if (std::find(names.begin(), names.end(), ex.campaigns[i]) == names.end()) {
          r.errors.push_back("experiment.campaigns[" + std::to_string(i) +
                             "]: unknown campaign '" + ex.campaigns[i] + "'");
        }
      }
    }
    if (r.get(*e, "test_functions", "experiment.test_functions", ex.test_functions, false)) {
      for (std::size_t i = 0; i < ex.test_functions.size(); ++i) {
        try {
          eulerexp::parse_test_function(ex.test_functions[i]);
        } catch (const std::exception& err) {
          r.errors.push_back("experiment.test_functions[" + std::to_string(i) +
                             "]: " + err.what());
        }
      }
    }
    if (r.get(*e, "p", "experiment.p", ex.p, false)) {
      for (std::size_t i = 0; i < ex.p.size(); ++i) {
        if (!(ex.p[i] >= 1)) {
          r.errors.push_back("experiment.p[" + std::to_string(i) + "]: must be >= 1");
        }
      }
    }
    r.get(*e, "output_dir", "experiment.output_dir", ex.output_dir, false);
    if (r.get(*e, "weight", "experiment.weight", ex.weight, false) &&
        ex.weight != "pathwise" && ex.weight != "terminal") {
      r.errors.push_back("experiment.weight: expected 'pathwise' or 'terminal'");
    }
    if (r.get(*e, "workers", "experiment.workers", ex.workers, false) && ex.workers < 1) {
      r.errors.push_back("experiment.workers: must be >= 1");
    }
    if (r.get(*e, "dump_paths", "experiment.dump_paths", ex.dump_paths, false) &&
        ex.dump_paths < 0) {
      r.errors.push_back("experiment.dump_paths: must be >= 0");
    }
  }
  if (r.errors.empty()) {
    try {
      make_model(cfg);
    } catch (const std::exception& err) {
      r.errors.push_back(std::string("model.params: ") + err.what());
    }
  }
  if (!r.errors.empty()) throw ConfigError(r.errors);
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("$: JSON syntax error: ") + e.what()});
  }
  return parse_config_json(doc);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"$: cannot open '" + path + "'"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

eulerexp::DiffusionModel make_model(const RunConfig& cfg) {
  return eulerexp::builtin_model(eulerexp::parse_model_kind(cfg.model.kind), cfg.model.params);
}

eulerexp::Campaign make_campaign(const RunConfig& cfg) {
  eulerexp::Campaign c;
  c.model = make_model(cfg);
  c.n_list = cfg.grid.n_list;
  c.m = cfg.grid.m;
  c.M = cfg.mc.M;
  c.T = cfg.grid.T_points.front();
  c.seed = cfg.mc.seed;
  c.workers = cfg.experiment.workers;
  c.root = cfg.grid.root;
  c.predict_paths = cfg.mc.predict_paths;
  c.predict_m = cfg.mc.predict_m;
  c.weight = cfg.experiment.weight == "terminal" ? eulerexp::KernelWeight::Terminal
                                                 : eulerexp::KernelWeight::Pathwise;
  return c;
}

}  // namespace ewx
