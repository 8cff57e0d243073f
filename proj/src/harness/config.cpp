// Copyright 2026 The adasamp Authors
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

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "adasamp/errors.hpp"
#include "adasamp/harness.hpp"

namespace adasamp::harness {

namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

struct KeyDoc {
  const char* key;
  const char* fallback;
};

const std::vector<KeyDoc> kDataKeys = {
    {"source", "synthetic"},       {"path", ""},           {"rows", "50"},
    {"cols", "50"},                {"density", "1"},       {"column_scale_sigma", "0"},
    {"binary", "false"},           {"labels", "gaussian"}, {"noise", "0.1"},
    {"seed", "1"},                 {"binarize", "false"},  {"subsample_rows", "0"},
    {"subsample_cols", "0"},       {"subsample_seed", "0"},
};
const std::vector<KeyDoc> kProblemKeys = {
    {"loss", "square"},
    {"reg", "l2"},
    {"lambda", "0.1"},
    {"lipschitz", "per_coordinate"},
};
const std::vector<KeyDoc> kRunKeys = {
    {"base_seed", "0"},
    {"seeds", "1"},
    {"jobs", "1"},
    {"out_dir", "out"},
};
const std::vector<KeyDoc> kSolverKeys = {
    {"method", "cd"},
    {"sampler", "safe_adaptive"},
    {"stepsize", "big_adaptive (cd) / inv_mu_k (sgd)"},
    {"step_constant", "1"},
    {"mu", "0 (= 2 lambda)"},
    {"epochs", "10"},
    {"iterations", "0"},
    {"metric_interval", "0 (one epoch)"},
    {"seed_offset", "0"},
    {"tracker", "cd_cauchy_schwarz (cd) / sgd_cauchy_schwarz (sgd)"},
    {"refresh_interval", "0"},
    {"gram_limit", "20000"},
};

std::string nearest(const std::string& word, const std::vector<KeyDoc>& keys) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& k : keys) {
    const std::size_t d = levenshtein(word, k.key);
    if (d < best_d) {
      best_d = d;
      best = k.key;
    }
  }
  return best;
}

// Reads typed values out of one section and records every failure.
class SectionReader {
 public:
  SectionReader(const pt::ptree& tree, std::string section, const std::vector<KeyDoc>& keys,
                std::vector<std::string>& errors)
      : tree_(tree), section_(std::move(section)), errors_(errors) {
    for (const auto& [key, child] : tree_) {
      const bool known = std::any_of(keys.begin(), keys.end(),
                                     [&](const KeyDoc& k) { return key == k.key; });
      if (!known) {
        errors_.push_back("[" + section_ + "] unknown key '" + key + "' (did you mean '" +
                          nearest(key, keys) + "'?)");
      }
      if (!child.empty()) errors_.push_back("[" + section_ + "] nested key '" + key + "'");
    }
  }

  bool has(const char* key) const { return tree_.find(key) != tree_.not_found(); }

  std::string text(const char* key, std::string fallback) const {
    const auto it = tree_.find(key);
    return it == tree_.not_found() ? fallback : it->second.data();
  }

  template <class T>
  T number(const char* key, T fallback) {
    const auto it = tree_.find(key);
    if (it == tree_.not_found()) return fallback;
    const std::string& s = it->second.data();
    T value{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
      fail(key, "'" + s + "' is not a valid number");
      return fallback;
    }
    return value;
  }

  bool boolean(const char* key, bool fallback) {
    const auto it = tree_.find(key);
    if (it == tree_.not_found()) return fallback;
    const std::string& s = it->second.data();
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    fail(key, "'" + s + "' is not a boolean");
    return fallback;
  }

  template <class F>
  auto choice(const char* key, const std::string& fallback, F parse) -> decltype(parse("")) {
    const std::string s = text(key, fallback);
    try {
      return parse(s);
    } catch (const Error& e) {
      fail(key, e.what());
      return parse(fallback);
    }
  }

  void fail(const char* key, const std::string& what) {
    errors_.push_back("[" + section_ + "] " + key + ": " + what);
  }

 private:
  const pt::ptree& tree_;
  std::string section_;
  std::vector<std::string>& errors_;
};

const pt::ptree kEmpty;

// The ini reader drops sections without keys. Rebuild the tree in file order
// with those sections restored, so that a bare [solver.NAME] means "all
// defaults".
pt::ptree restore_empty_sections(const std::string& text, const pt::ptree& tree) {
  pt::ptree out;
  for (const auto& [name, child] : tree) {
    if (child.empty()) out.push_back({name, child});
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] != '[') continue;
    const auto close = line.find(']', first);
    if (close == std::string::npos) continue;
    std::string name = line.substr(first + 1, close - first - 1);
    const auto lo = name.find_first_not_of(" \t");
    const auto hi = name.find_last_not_of(" \t");
    name = lo == std::string::npos ? std::string() : name.substr(lo, hi - lo + 1);
    if (out.find(name) != out.not_found()) continue;
    const auto it = tree.find(name);
    out.push_back({name, it == tree.not_found() ? pt::ptree() : it->second});
  }
  return out;
}

LabelKind parse_labels(std::string_view s) {
  if (s == "gaussian") return LabelKind::gaussian;
  if (s == "planted") return LabelKind::planted;
  if (s == "sign") return LabelKind::sign;
  throw InvalidArgument("unknown label kind '" + std::string(s) + "'");
}

}  // namespace

std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string describe_config_keys() {
  std::ostringstream out;
  const auto section = [&](const char* name, const std::vector<KeyDoc>& keys) {
    out << "[" << name << "]\n";
    for (const auto& k : keys) out << "  " << k.key << " = " << k.fallback << "\n";
  };
  section("data", kDataKeys);
  section("problem", kProblemKeys);
  section("run", kRunKeys);
  section("solver.NAME", kSolverKeys);
  return out.str();
}

ExperimentSpec validate_spec(const std::string& text, const std::string& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  tree = restore_empty_sections(text, tree);

  std::vector<std::string> errors;
  ExperimentSpec spec;
  for (const auto& [name, child] : tree) {
    if (child.empty() && !child.data().empty()) {
      errors.push_back("key '" + name + "' outside any section");
    } else if (name != "data" && name != "problem" && name != "run" &&
               name.rfind("solver.", 0) != 0) {
      errors.push_back("unknown section [" + name + "]");
    }
  }

  const auto section = [&](const char* name) -> const pt::ptree& {
    const auto it = tree.find(name);
    return it == tree.not_found() ? kEmpty : it->second;
  };

  {
    SectionReader r(section("data"), "data", kDataKeys, errors);
    DataSpec& d = spec.data;
    d.source = r.text("source", "synthetic");
    if (d.source != "synthetic" && d.source != "libsvm") {
      r.fail("source", "expected 'synthetic' or 'libsvm', got '" + d.source + "'");
    }
    d.path = r.text("path", "");
    SyntheticSpec& s = d.synthetic;
    s.rows = r.number<std::size_t>("rows", s.rows);
    s.cols = r.number<std::size_t>("cols", s.cols);
    s.density = r.number<double>("density", s.density);
    s.column_scale_sigma = r.number<double>("column_scale_sigma", s.column_scale_sigma);
    s.binary = r.boolean("binary", s.binary);
    s.labels = r.choice("labels", "gaussian", parse_labels);
    s.noise = r.number<double>("noise", s.noise);
    s.seed = r.number<std::uint64_t>("seed", s.seed);
    d.binarize = r.boolean("binarize", false);
    d.subsample_rows = r.number<std::size_t>("subsample_rows", 0);
    d.subsample_cols = r.number<std::size_t>("subsample_cols", 0);
    d.subsample_seed = r.number<std::uint64_t>("subsample_seed", 0);
    if (d.source == "libsvm") {
      if (d.path.empty()) {
        r.fail("path", "required when source = libsvm");
      } else {
        fs::path p(d.path);
        if (p.is_relative()) p = fs::path(base_dir) / p;
        d.path = p.string();
        if (!fs::exists(p)) r.fail("path", "'" + d.path + "' does not exist");
      }
    } else {
      if (s.rows == 0 || s.cols == 0) r.fail("rows", "synthetic shape must be nonzero");
      if (!(s.density > 0.0) || s.density > 1.0) r.fail("density", "must lie in (0, 1]");
    }
  }

  {
    SectionReader r(section("problem"), "problem", kProblemKeys, errors);
    ProblemSpec& p = spec.problem;
    p.loss = r.choice("loss", "square", parse_loss);
    p.reg = r.choice("reg", "l2", parse_reg);
    p.lambda = r.number<double>("lambda", p.lambda);
    if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda)) r.fail("lambda", "must be >= 0");
    p.lipschitz = r.choice("lipschitz", "per_coordinate", parse_lipschitz_mode);
  }

  {
    SectionReader r(section("run"), "run", kRunKeys, errors);
    spec.base_seed = r.number<std::uint64_t>("base_seed", 0);
    spec.seeds = r.number<std::size_t>("seeds", 1);
    spec.jobs = r.number<std::size_t>("jobs", 1);
    spec.out_dir = r.text("out_dir", "out");
    if (spec.seeds == 0) r.fail("seeds", "must be >= 1");
    if (spec.jobs == 0) r.fail("jobs", "must be >= 1");
  }

  for (const auto& [name, child] : tree) {
    if (name.rfind("solver.", 0) != 0) continue;
    NamedSolver s;
    s.name = name.substr(7);
    const std::string label = name;
    if (s.name.empty()) errors.push_back("[" + label + "] solver name is empty");
    SectionReader r(child, label, kSolverKeys, errors);
    SolverConfig& c = s.config;
    c.name = s.name;
    c.method = r.choice("method", "cd", parse_method);
    const bool sgd = c.method == Method::sgd;
    c.sampler = r.choice("sampler", "safe_adaptive", parse_sampler);
    c.stepsize = r.choice("stepsize", sgd ? "inv_mu_k" : "big_adaptive", parse_stepsize_mode);
    c.step_constant = r.number<double>("step_constant", 1.0);
    c.mu = r.number<double>("mu", 0.0);
    c.epochs = r.number<std::size_t>("epochs", 10);
    c.iterations = r.number<std::size_t>("iterations", 0);
    c.metric_interval = r.number<std::size_t>("metric_interval", 0);
    s.seed_offset = r.number<std::uint64_t>("seed_offset", 0);
    c.tracker = r.choice("tracker", sgd ? "sgd_cauchy_schwarz" : "cd_cauchy_schwarz",
                         parse_tracker_mode);
    c.refresh_interval = r.number<std::size_t>("refresh_interval", 0);
    c.tracker_options.gram_limit = r.number<std::size_t>("gram_limit", 20000);
    c.lipschitz = spec.problem.lipschitz;
    try {
      c.validate();
    } catch (const ConfigError& e) {
      errors.push_back("[" + label + "] " + e.what());
    }
    spec.solvers.push_back(std::move(s));
  }
  if (spec.solvers.empty()) errors.push_back("no [solver.NAME] section");

  if (!errors.empty()) {
    std::string joined = "invalid config:";
    for (const auto& e : errors) joined += "\n  " + e;
    throw ConfigError(joined);
  }
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return validate_spec(text.str(), fs::path(path).parent_path().string().empty()
                                       ? std::string(".")
                                       : fs::path(path).parent_path().string());
}

Dataset build_dataset(const DataSpec& spec) {
  Dataset data = spec.source == "libsvm" ? read_libsvm(spec.path) : make_synthetic(spec.synthetic);
  if (spec.subsample_rows > 0 || spec.subsample_cols > 0) {
    const std::size_t r = spec.subsample_rows > 0 ? spec.subsample_rows : data.design.rows();
    const std::size_t c = spec.subsample_cols > 0 ? spec.subsample_cols : data.design.cols();
    data = subsample(data, r, c, spec.subsample_seed);
  }
  if (spec.binarize) data.design = binarize(data.design);
  return data;
}

GlmProblem build_problem(const ExperimentSpec& spec) {
  Dataset data = build_dataset(spec.data);
  GlmProblem problem;
  problem.A = std::move(data.design);
  problem.b = std::move(data.labels);
  problem.loss = spec.problem.loss;
  problem.reg = spec.problem.reg;
  problem.lambda = spec.problem.lambda;
  problem.check();
  return problem;
}

}  // namespace adasamp::harness
