#include "camobo/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "camobo/errors.hpp"

namespace camobo {

namespace {

class LineParser {
 public:
  LineParser(const std::string& text, int line_no) : s_(text), line_(line_no) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }

  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }

  std::string key() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-'))
      ++pos_;
    if (pos_ == start) fail("expected a key");
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  TomlValue value() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      std::vector<TomlValue::Scalar> items;
      skip_ws_and_comments();
      while (pos_ < s_.size() && s_[pos_] != ']') {
        items.push_back(scalar());
        skip_ws_and_comments();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          skip_ws_and_comments();
        } else if (pos_ < s_.size() && s_[pos_] != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      if (pos_ >= s_.size()) fail("unterminated array");
      ++pos_;
      return {items};
    }
    return {scalar()};
  }

 private:
  void skip_ws_and_comments() {
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  TomlValue::Scalar scalar() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"' || c == '\'') return string_value(c);
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    std::string tok = s_.substr(start, pos_ - start);
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::erase(tok, '_');
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
    if (ec == std::errc() && p == tok.data() + tok.size()) return i;
    double d = 0.0;
    auto [pd, ecd] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
    if (ecd == std::errc() && pd == tok.data() + tok.size()) return d;
    fail("cannot parse value '" + tok + "'");
  }

  std::string string_value(char quote) {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      char ch = s_[pos_++];
      if (quote == '"' && ch == '\\' && pos_ < s_.size()) {
        const char e = s_[pos_++];
        switch (e) {
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out.push_back(ch);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
};

int bracket_balance(const std::string& line) {
  int depth = 0;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      break;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return depth;
}

const TomlValue::Scalar& as_scalar(const std::string& key, const TomlValue& v) {
  if (const auto* s = std::get_if<TomlValue::Scalar>(&v.value)) return *s;
  throw ConfigError("key '" + key + "' expects a single value, not an array");
}

std::string get_string(const std::string& key, const TomlValue& v) {
  if (const auto* s = std::get_if<std::string>(&as_scalar(key, v))) return *s;
  throw ConfigError("key '" + key + "' expects a string");
}

std::int64_t get_int(const std::string& key, const TomlValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&as_scalar(key, v))) return *i;
  throw ConfigError("key '" + key + "' expects an integer");
}

double get_double(const std::string& key, const TomlValue& v) {
  const auto& s = as_scalar(key, v);
  if (const auto* d = std::get_if<double>(&s)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
  throw ConfigError("key '" + key + "' expects a number");
}

bool get_bool(const std::string& key, const TomlValue& v) {
  if (const auto* b = std::get_if<bool>(&as_scalar(key, v))) return *b;
  throw ConfigError("key '" + key + "' expects true or false");
}

std::vector<TomlValue::Scalar> get_array(const std::string& key, const TomlValue& v) {
  if (const auto* a = std::get_if<std::vector<TomlValue::Scalar>>(&v.value)) return *a;
  throw ConfigError("key '" + key + "' expects an array");
}

std::vector<double> get_doubles(const std::string& key, const TomlValue& v) {
  std::vector<double> out;
  for (const auto& s : get_array(key, v)) out.push_back(get_double(key, TomlValue{s}));
  return out;
}

}  // namespace

std::map<std::string, TomlValue> parse_flat_toml(const std::string& text) {
  std::map<std::string, TomlValue> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const int start_line = line_no;
    // Arrays may continue over several lines.
    int depth = bracket_balance(line);
    while (depth > 0) {
      std::string more;
      if (!std::getline(in, more)) throw ConfigError("config line " + std::to_string(start_line) + ": unterminated array");
      ++line_no;
      depth += bracket_balance(more);
      line += "\n" + more;
    }
    LineParser p(line, start_line);
    if (p.at_end_or_comment()) continue;
    std::size_t first = line.find_first_not_of(" \t");
    if (line[first] == '[') p.fail("tables are not supported; use flat keys");
    const std::string key = p.key();
    p.expect('=');
    TomlValue value = p.value();
    if (!p.at_end_or_comment()) p.fail("unexpected text after value");
    if (!out.emplace(key, std::move(value)).second) p.fail("duplicate key '" + key + "'");
  }
  return out;
}

ConfigFile config_from_toml(const std::map<std::string, TomlValue>& keys) {
  static const std::set<std::string> known{
      "problem",         "iterations",  "n_init",          "seed",         "mode",          "cost_constraint",
      "policy",          "candidate_count", "refine_steps", "hyper_refit_period", "repeats", "workers",
      "standard_forms",  "oracle_grid_size", "cost_force_zero", "output_dir", "command",    "search_lo",
      "search_hi",       "objective_sense", "eval_timeout_s"};
  for (const auto& [k, v] : keys)
    if (!known.contains(k)) throw ConfigError("unknown config key '" + k + "'");
  for (const char* required : {"problem", "iterations"})
    if (!keys.contains(required)) throw ConfigError(std::string("missing required key '") + required + "'");

  ConfigFile cfg;
  RunConfig& r = cfg.run;
  auto has = [&](const char* k) { return keys.contains(k); };
  auto at = [&](const char* k) -> const TomlValue& { return keys.at(k); };

  r.problem = get_string("problem", at("problem"));
  r.iterations = static_cast<int>(get_int("iterations", at("iterations")));
  if (has("n_init")) r.n_init = static_cast<int>(get_int("n_init", at("n_init")));
  if (has("seed")) {
    const std::int64_t s = get_int("seed", at("seed"));
    if (s < 0) throw ConfigError("key 'seed' must be non-negative");
    r.seed = static_cast<std::uint64_t>(s);
  }
  try {
    if (has("mode")) r.mode = parse_mode(get_string("mode", at("mode")));
    if (has("policy")) r.policy = parse_policy(get_string("policy", at("policy")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (has("cost_constraint")) {
    for (const auto& s : get_array("cost_constraint", at("cost_constraint"))) {
      const std::int64_t i = get_int("cost_constraint", TomlValue{s});
      if (i < 1) throw ConfigError("key 'cost_constraint' holds one-based dimension indices");
      r.cost_constraint.push_back(static_cast<std::size_t>(i));
    }
  }
  if (has("candidate_count")) {
    const std::int64_t c = get_int("candidate_count", at("candidate_count"));
    if (c < 2) throw ConfigError("key 'candidate_count' must be >= 2");
    r.candidate_count = static_cast<std::size_t>(c);
  }
  if (has("refine_steps")) r.refine_steps = static_cast<int>(get_int("refine_steps", at("refine_steps")));
  if (has("hyper_refit_period"))
    r.hyper_refit_period = static_cast<int>(get_int("hyper_refit_period", at("hyper_refit_period")));
  if (has("repeats")) r.repeats = static_cast<int>(get_int("repeats", at("repeats")));
  if (has("workers")) r.workers = static_cast<int>(get_int("workers", at("workers")));
  if (has("standard_forms")) r.standard_forms = get_bool("standard_forms", at("standard_forms"));
  if (has("oracle_grid_size")) {
    const std::int64_t g = get_int("oracle_grid_size", at("oracle_grid_size"));
    if (g < 1) throw ConfigError("key 'oracle_grid_size' must be >= 1");
    r.oracle_grid_size = static_cast<std::size_t>(g);
  }
  if (has("cost_force_zero")) r.cost_force_zero = get_bool("cost_force_zero", at("cost_force_zero"));
  if (has("output_dir")) cfg.output_dir = get_string("output_dir", at("output_dir"));

  const bool any_external = has("command") || has("search_lo") || has("search_hi") || has("objective_sense") ||
                            has("eval_timeout_s");
  if (r.problem == "external" || any_external) {
    if (r.problem != "external") throw ConfigError("keys 'command'/'search_*' only apply to problem = \"external\"");
    for (const char* required : {"command", "search_lo", "search_hi"})
      if (!has(required)) throw ConfigError(std::string("missing required key '") + required + "'");
    ExternalObjective::Spec spec;
    const TomlValue& cmd = at("command");
    if (std::holds_alternative<TomlValue::Scalar>(cmd.value)) {
      std::istringstream words(get_string("command", cmd));
      for (std::string w; words >> w;) spec.command.push_back(w);
    } else {
      for (const auto& s : get_array("command", cmd)) spec.command.push_back(get_string("command", TomlValue{s}));
    }
    const std::vector<double> lo = get_doubles("search_lo", at("search_lo"));
    const std::vector<double> hi = get_doubles("search_hi", at("search_hi"));
    if (lo.size() != hi.size()) throw ConfigError("keys 'search_lo' and 'search_hi' differ in length");
    for (std::size_t i = 0; i < lo.size(); ++i) spec.raw_bounds.push_back({lo[i], hi[i]});
    if (has("objective_sense")) {
      for (const auto& s : get_array("objective_sense", at("objective_sense"))) {
        const std::string v = get_string("objective_sense", TomlValue{s});
        if (v == "min")
          spec.senses.push_back(Sense::Minimize);
        else if (v == "max")
          spec.senses.push_back(Sense::Maximize);
        else
          throw ConfigError("key 'objective_sense' entries must be \"min\" or \"max\"");
      }
    }
    if (has("eval_timeout_s")) spec.timeout_seconds = get_double("eval_timeout_s", at("eval_timeout_s"));
    r.external = std::move(spec);
  }
  r.validate();
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_toml(parse_flat_toml(ss.str()));
}

}  // namespace camobo
