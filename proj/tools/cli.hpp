#ifndef CORRIDORLAB_TOOLS_CLI_HPP_
#define CORRIDORLAB_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace corridorlab::cli {

  using json = nlohmann::json;

  inline constexpr char const* kVersion = CORRIDORLAB_VERSION;

  struct Budgets {
    std::size_t symbol_cap = 10'000'000;
    std::size_t t_cap      = 16;
    std::size_t steps_cap  = 64;
    std::size_t walk_cap   = 4'000'000;

    bool operator==(Budgets const&) const = default;
  };

  struct ExperimentConfig {
    std::string                  command;
    std::string                  autfile;
    std::string                  graphfile;
    std::string                  word;
    std::optional<std::uint64_t> seed;
    std::size_t                  steps   = 5;
    std::size_t                  n_min   = 10;
    std::size_t                  n_max   = 60;
    std::size_t                  samples = 200;
    std::size_t                  J       = 4;
    std::size_t                  depth   = 4;   // hard-splitting depth
    std::size_t                  k_max   = 64;  // conditioning search
    std::size_t                  max_len = 6;
    std::size_t                  N_max   = 10;
    std::size_t                  period  = 1;
    std::string                  variant = "both";  // word, cyclic, both
    std::string                  family;            // power-commutator, conjugation
    std::string                  generator;
    std::string                  colors;  // interval lengths, "3,1,2"
    std::string                  nibble;  // "left:1", "right:2"
    bool                         beads = false;
    Budgets                      budgets;
    std::string                  out;
    std::string                  format = "json";

    bool operator==(ExperimentConfig const&) const = default;
  };

  // Canonical JSON with sorted keys; load_config(emit_config(c)) == c and
  // the text round-trips byte for byte. Throws ParseError.
  std::string      emit_config(ExperimentConfig const& c);
  ExperimentConfig load_config(std::string_view text);
  ExperimentConfig load_config_file(std::string const& path);

  // FNV-1a 64 of the canonical serialization, as 16 hex digits.
  std::string config_hash(ExperimentConfig const& c);

  // Applies CORRIDORLAB_BUDGET_SYMBOLS when set.
  void apply_environment(ExperimentConfig& c);

  struct Outcome {
    json                     result;
    std::vector<std::string> violations;
    // Rows for --format csv; empty header when the command has no table.
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
  };

  bool    needs_seed(std::string const& command, ExperimentConfig const& c);
  Outcome execute(ExperimentConfig const& c);

  // The invariant suites behind verify-all.
  json verify_all(ExperimentConfig const& c, std::vector<std::string>& violations);

  // The report with a timing field when `seconds` is set.
  std::string emit_report(ExperimentConfig const& c, Outcome const& o,
                          std::optional<double> seconds);

  // Exit codes: 0 success, 1 domain or usage error, 2 budget exceeded.
  int run(std::vector<std::string> const& args, std::ostream& out,
          std::ostream& err);

}  // namespace corridorlab::cli

#endif  // CORRIDORLAB_TOOLS_CLI_HPP_
