#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "corridorlab/errors.hpp"

namespace corridorlab::cli {

  namespace {

    // Line and column of the first occurrence of a key, for messages about
    // well-formed JSON with bad content.
    std::pair<std::size_t, std::size_t> locate(std::string_view text,
                                               std::string const& key) {
      auto pos = text.find("\"" + key + "\"");
      if (pos == std::string_view::npos) {
        return {1, 1};
      }
      std::size_t line = 1, col = 1;
      for (std::size_t i = 0; i < pos; ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      return {line, col};
    }

    json to_json(ExperimentConfig const& c) {
      json j;
      j["command"]   = c.command;
      j["autfile"]   = c.autfile;
      j["graphfile"] = c.graphfile;
      j["word"]      = c.word;
      j["seed"]      = c.seed ? json(*c.seed) : json(nullptr);
      j["steps"]     = c.steps;
      j["n_min"]     = c.n_min;
      j["n_max"]     = c.n_max;
      j["samples"]   = c.samples;
      j["J"]         = c.J;
      j["depth"]     = c.depth;
      j["k_max"]     = c.k_max;
      j["max_len"]   = c.max_len;
      j["N_max"]     = c.N_max;
      j["period"]    = c.period;
      j["variant"]   = c.variant;
      j["family"]    = c.family;
      j["generator"] = c.generator;
      j["colors"]    = c.colors;
      j["nibble"]    = c.nibble;
      j["beads"]     = c.beads;
      j["budgets"]   = {{"symbol_cap", c.budgets.symbol_cap},
                        {"t_cap", c.budgets.t_cap},
                        {"steps_cap", c.budgets.steps_cap},
                        {"walk_cap", c.budgets.walk_cap}};
      j["out"]       = c.out;
      j["format"]    = c.format;
      return j;
    }

    std::uint64_t fnv1a(std::string_view s) {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
      }
      return h;
    }

  }  // namespace

  std::string emit_config(ExperimentConfig const& c) {
    return to_json(c).dump(2) + "\n";
  }

  ExperimentConfig load_config(std::string_view text) {
    json j;
    try {
      j = json::parse(text);
    } catch (json::parse_error const& e) {
      std::size_t line = 1, col = 1;
      for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      throw ParseError(line, col, "malformed JSON");
    }
    if (!j.is_object()) {
      throw ParseError(1, 1, "config must be a JSON object");
    }

    ExperimentConfig c;
    auto fail = [&](std::string const& key, std::string const& msg) {
      auto [line, col] = locate(text, key);
      throw ParseError(line, col, key + ": " + msg);
    };
    auto str = [&](json const& v, std::string const& key, std::string& dst) {
      if (!v.is_string()) {
        fail(key, "expected a string");
      }
      dst = v.get<std::string>();
    };
    auto count = [&](json const& v, std::string const& key, std::size_t& dst,
                     bool positive) {
      if (!v.is_number_unsigned() || (positive && v.get<std::size_t>() == 0)) {
        fail(key, positive ? "expected a positive integer"
                           : "expected a non-negative integer");
      }
      dst = v.get<std::size_t>();
    };

    for (auto const& [key, v] : j.items()) {
      if (key == "command") {
        str(v, key, c.command);
      } else if (key == "autfile") {
        str(v, key, c.autfile);
      } else if (key == "graphfile") {
        str(v, key, c.graphfile);
      } else if (key == "word") {
        str(v, key, c.word);
      } else if (key == "seed") {
        if (v.is_null()) {
          c.seed.reset();
        } else if (v.is_number_unsigned()) {
          c.seed = v.get<std::uint64_t>();
        } else {
          fail(key, "expected an unsigned integer or null");
        }
      } else if (key == "steps") {
        count(v, key, c.steps, false);
      } else if (key == "n_min") {
        count(v, key, c.n_min, false);
      } else if (key == "n_max") {
        count(v, key, c.n_max, false);
      } else if (key == "samples") {
        count(v, key, c.samples, false);
      } else if (key == "J") {
        count(v, key, c.J, true);
      } else if (key == "depth") {
        count(v, key, c.depth, true);
      } else if (key == "k_max") {
        count(v, key, c.k_max, true);
      } else if (key == "max_len") {
        count(v, key, c.max_len, true);
      } else if (key == "N_max") {
        count(v, key, c.N_max, false);
      } else if (key == "period") {
        count(v, key, c.period, true);
      } else if (key == "variant") {
        str(v, key, c.variant);
        if (c.variant != "word" && c.variant != "cyclic" && c.variant != "both") {
          fail(key, "expected word, cyclic or both");
        }
      } else if (key == "family") {
        str(v, key, c.family);
      } else if (key == "generator") {
        str(v, key, c.generator);
      } else if (key == "colors") {
        str(v, key, c.colors);
      } else if (key == "nibble") {
        str(v, key, c.nibble);
      } else if (key == "beads") {
        if (!v.is_boolean()) {
          fail(key, "expected a boolean");
        }
        c.beads = v.get<bool>();
      } else if (key == "budgets") {
        if (!v.is_object()) {
          fail(key, "expected an object");
        }
        for (auto const& [b, bv] : v.items()) {
          if (b == "symbol_cap") {
            count(bv, b, c.budgets.symbol_cap, true);
          } else if (b == "t_cap") {
            count(bv, b, c.budgets.t_cap, true);
          } else if (b == "steps_cap") {
            count(bv, b, c.budgets.steps_cap, true);
          } else if (b == "walk_cap") {
            count(bv, b, c.budgets.walk_cap, true);
          } else {
            fail(b, "unknown budget");
          }
        }
      } else if (key == "out") {
        str(v, key, c.out);
      } else if (key == "format") {
        str(v, key, c.format);
        if (c.format != "json" && c.format != "csv") {
          fail(key, "expected json or csv");
        }
      } else {
        fail(key, "unknown key");
      }
    }
    return c;
  }

  ExperimentConfig load_config_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open " + path);
    }
    std::stringstream s;
    s << in.rdbuf();
    return load_config(s.str());
  }

  std::string config_hash(ExperimentConfig const& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(emit_config(c))));
    return buf;
  }

  void apply_environment(ExperimentConfig& c) {
    if (auto const* v = std::getenv("CORRIDORLAB_BUDGET_SYMBOLS")) {
      char* end = nullptr;
      auto  n   = std::strtoull(v, &end, 10);
      if (end == v || *end != '\0' || n == 0) {
        throw std::invalid_argument(
            "CORRIDORLAB_BUDGET_SYMBOLS must be a positive integer");
      }
      c.budgets.symbol_cap = n;
    }
  }

}  // namespace corridorlab::cli
