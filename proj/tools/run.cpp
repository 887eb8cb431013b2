#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "corridorlab/errors.hpp"

namespace corridorlab::cli {

  namespace {

    std::string csv_field(std::string const& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
      }
      std::string q = "\"";
      for (char ch : s) {
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      }
      return q + "\"";
    }

    json error_json(std::string const& kind, std::string const& message) {
      return {{"tool", "corridorlab"},
              {"version", kVersion},
              {"error", {{"kind", kind}, {"message", message}}}};
    }

    std::pair<char const*, char const*> const kCommands[] = {
        {"strata", "Supports, strata and growth of a positive automorphism"},
        {"condition", "Smallest conditioning power with its witnesses"},
        {"beads", "Bead decomposition of a path, or a beadedness search"},
        {"nielsen", "Nielsen test for a path, or a search for Nielsen paths"},
        {"corridor-sim", "Simulate a stack of corridors"},
        {"bracket", "t-complete bracketing of a null-homotopic word"},
        {"area", "Least area with a certificate"},
        {"dehn-scan", "Areas of sampled or family words against length"},
        {"brinkmann", "Ratio test over all short words with a holdout"},
        {"klen", "Longest corridor of a least-area diagram against word length"},
        {"verify-all", "Run every property suite on one automorphism"},
    };

  }  // namespace

  std::string emit_report(ExperimentConfig const& c, Outcome const& o,
                          std::optional<double> seconds) {
    auto hash = config_hash(c);
    if (c.format == "csv") {
      if (o.csv_header.empty()) {
        throw std::invalid_argument(c.command + " has no CSV table");
      }
      std::string s = "# corridorlab " + std::string(kVersion) + " " + c.command
                      + " config_hash=" + hash + " seed="
                      + (c.seed ? std::to_string(*c.seed) : "none") + "\n";
      auto line = [&](std::vector<std::string> const& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          s += (i ? "," : "") + csv_field(row[i]);
        }
        s += "\n";
      };
      line(o.csv_header);
      for (auto const& r : o.csv_rows) {
        line(r);
      }
      return s;
    }
    json r{{"tool", "corridorlab"},
           {"version", kVersion},
           {"command", c.command},
           {"config", json::parse(emit_config(c))},
           {"config_hash", hash},
           {"seed", c.seed ? json(*c.seed) : json(nullptr)},
           {"result", o.result},
           {"violations", o.violations}};
    if (seconds) {
      r["timing"] = {{"seconds", *seconds}};
    }
    return r.dump(2) + "\n";
  }

  int run(std::vector<std::string> const& args, std::ostream& out,
          std::ostream& err) {
    CLI::App app{"Free-by-cyclic groups: strata, corridors, areas and bracketings",
                 "corridorlab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ExperimentConfig flags;
    std::string      config_path;
    std::uint64_t    seed        = 0;
    bool             emit_only   = false;
    bool             no_timing   = false;
    // Options given on the command line override the config file.
    std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>>
        overrides;

    for (auto const& [name, about] : kCommands) {
      auto* sub = app.add_subcommand(name, about);
      auto  bind = [&](CLI::Option* opt, auto member) {
        overrides.emplace_back(opt, [member, &flags](ExperimentConfig& c) {
          c.*member = flags.*member;
        });
      };
      auto bind_budget = [&](CLI::Option* opt, std::size_t Budgets::*member) {
        overrides.emplace_back(opt, [member, &flags](ExperimentConfig& c) {
          c.budgets.*member = flags.budgets.*member;
        });
      };
      sub->add_option("--config", config_path, "JSON experiment config");
      sub->add_flag("--emit-config", emit_only,
                    "Print the canonical config and exit");
      sub->add_flag("--no-timing", no_timing, "Omit the timing field");
      bind(sub->add_option("--autfile", flags.autfile, "Automorphism file"),
           &ExperimentConfig::autfile);
      bind(sub->add_option("--graphfile", flags.graphfile, "Graph map file"),
           &ExperimentConfig::graphfile);
      bind(sub->add_option("--word", flags.word, "Word or edge-path"),
           &ExperimentConfig::word);
      auto* seed_opt = sub->add_option("--seed", seed, "Random seed");
      overrides.emplace_back(seed_opt, [&seed](ExperimentConfig& c) { c.seed = seed; });
      bind(sub->add_option("--steps", flags.steps, "Corridors or nibble steps"),
           &ExperimentConfig::steps);
      bind(sub->add_option("--n-min", flags.n_min, "Smallest n"),
           &ExperimentConfig::n_min);
      bind(sub->add_option("--n-max", flags.n_max, "Largest n"),
           &ExperimentConfig::n_max);
      bind(sub->add_option("--samples", flags.samples, "Sampled words"),
           &ExperimentConfig::samples);
      bind(sub->add_option("--J", flags.J, "Bead length bound")->check(CLI::PositiveNumber),
           &ExperimentConfig::J);
      bind(sub->add_option("--depth", flags.depth, "Hard-splitting depth")
               ->check(CLI::PositiveNumber),
           &ExperimentConfig::depth);
      bind(sub->add_option("--k-max", flags.k_max, "Largest conditioning power")
               ->check(CLI::PositiveNumber),
           &ExperimentConfig::k_max);
      bind(sub->add_option("--max-len", flags.max_len, "Longest word or path")
               ->check(CLI::PositiveNumber),
           &ExperimentConfig::max_len);
      bind(sub->add_option("--N-max", flags.N_max, "Largest iterate"),
           &ExperimentConfig::N_max);
      bind(sub->add_option("--period", flags.period, "Largest Nielsen period")
               ->check(CLI::PositiveNumber),
           &ExperimentConfig::period);
      bind(sub->add_option("--variant", flags.variant, "word, cyclic or both")
               ->check(CLI::IsMember({"word", "cyclic", "both"})),
           &ExperimentConfig::variant);
      bind(sub->add_option("--family", flags.family,
                           "power-commutator, conjugation or relators")
               ->check(CLI::IsMember({"power-commutator", "conjugation", "relators"})),
           &ExperimentConfig::family);
      bind(sub->add_option("--generator", flags.generator, "Generator for a family"),
           &ExperimentConfig::generator);
      bind(sub->add_option("--colors", flags.colors,
                           "Colour interval lengths, e.g. 3,1,2"),
           &ExperimentConfig::colors);
      bind(sub->add_option("--nibble", flags.nibble, "left:N or right:N"),
           &ExperimentConfig::nibble);
      bind(sub->add_flag("--beads{true}", flags.beads, "Track beads (on/off)")
               ->expected(0, 1),
           &ExperimentConfig::beads);
      bind_budget(sub->add_option("--budget-symbols", flags.budgets.symbol_cap,
                                      "Cap on letters in any word")
                      ->check(CLI::PositiveNumber),
                  &Budgets::symbol_cap);
      bind_budget(sub->add_option("--budget-t", flags.budgets.t_cap,
                                      "Cap on t-letters for least area")
                      ->check(CLI::PositiveNumber),
                  &Budgets::t_cap);
      bind_budget(sub->add_option("--budget-steps", flags.budgets.steps_cap,
                                      "Cap on corridor steps")
                      ->check(CLI::PositiveNumber),
                  &Budgets::steps_cap);
      bind_budget(sub->add_option("--budget-walk", flags.budgets.walk_cap,
                                      "Cap on paths visited by Nielsen searches")
                      ->check(CLI::PositiveNumber),
                  &Budgets::walk_cap);
      bind(sub->add_option("--out", flags.out, "Output directory"),
           &ExperimentConfig::out);
      bind(sub->add_option("--format", flags.format, "json or csv")
               ->check(CLI::IsMember({"json", "csv"})),
           &ExperimentConfig::format);
    }

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
      app.parse(argv);
    } catch (CLI::CallForHelp const& e) {
      out << app.help();
      return 0;
    } catch (CLI::CallForVersion const&) {
      out << kVersion << "\n";
      return 0;
    } catch (CLI::ParseError const& e) {
      out << error_json("UsageError", e.what()).dump(2) << "\n";
      err << e.what() << "\n";
      return 1;
    }

    ExperimentConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    try {
      if (!config_path.empty()) {
        cfg = load_config_file(config_path);
        if (!cfg.command.empty()
            && cfg.command != app.get_subcommands().front()->get_name()) {
          throw std::invalid_argument("config is for " + cfg.command);
        }
        cfg.command = app.get_subcommands().front()->get_name();
      }
      for (auto const& [opt, apply] : overrides) {
        if (opt->count() > 0) {
          apply(cfg);
        }
      }
      if (emit_only) {
        out << emit_config(cfg);
        return 0;
      }
      apply_environment(cfg);

      auto start   = std::chrono::steady_clock::now();
      auto outcome = execute(cfg);
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      auto report = emit_report(cfg, outcome,
                                no_timing ? std::nullopt : std::optional(dt.count()));
      if (cfg.out.empty()) {
        out << report;
      } else {
        std::filesystem::create_directories(cfg.out);
        auto path = std::filesystem::path(cfg.out)
                    / (cfg.command + (cfg.format == "csv" ? ".csv" : ".json"));
        std::ofstream f(path);
        f << report;
        if (!f) {
          throw std::runtime_error("cannot write " + path.string());
        }
        out << path.string() << "\n";
      }
      return outcome.violations.empty() ? 0 : 1;
    } catch (ParseError const& e) {
      auto j = error_json(e.kind(), e.what());
      j["error"]["line"]   = e.line();
      j["error"]["column"] = e.column();
      out << j.dump(2) << "\n";
      return 1;
    } catch (BudgetExceeded const& e) {
      out << error_json(e.kind(), e.what()).dump(2) << "\n";
      return 2;
    } catch (Error const& e) {
      out << error_json(e.kind(), e.what()).dump(2) << "\n";
      return 1;
    } catch (std::exception const& e) {
      out << error_json("InvalidArgument", e.what()).dump(2) << "\n";
      return 1;
    }
  }

}  // namespace corridorlab::cli
