#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"
#include "corridorlab/corridor.hpp"
#include "corridorlab/errors.hpp"
#include "corridorlab/graphmap.hpp"
#include "corridorlab/isoperimetry.hpp"
#include "corridorlab/strata.hpp"

namespace corridorlab::cli {

  namespace {

    std::string num(double x) {
      std::ostringstream s;
      s << std::setprecision(10) << x;
      return s.str();
    }

    Automorphism automorphism(ExperimentConfig const& c) {
      if (c.autfile.empty()) {
        throw std::invalid_argument("--autfile is required");
      }
      return load_automorphism(c.autfile);
    }

    GraphMap graph_map(ExperimentConfig const& c) {
      if (!c.graphfile.empty()) {
        return load_graph_map(c.graphfile);
      }
      return from_substitution(automorphism(c));
    }

    std::string const& require_word(ExperimentConfig const& c) {
      if (c.word.empty()) {
        throw std::invalid_argument("--word is required");
      }
      return c.word;
    }

    json names(Alphabet const& a, std::vector<std::uint32_t> const& xs) {
      json out = json::array();
      for (auto x : xs) {
        out.push_back(a.name(x));
      }
      return out;
    }

    std::uint32_t generator(Alphabet const& a, std::string const& name) {
      auto x = name.empty() ? 1u : a.find(name);
      if (x == 0) {
        throw std::invalid_argument("no generator named " + name);
      }
      return x;
    }

    json bead_json(Alphabet const& edges, Bead const& b) {
      json j{{"path", edges.format(b.path)},
             {"tag", to_string(b.tag)},
             {"vanishing", b.vanishing}};
      if (b.gep) {
        j["gep"] = {{"k", b.gep->k}, {"m", b.gep->m}, {"n", b.gep->n},
                    {"tau", edges.format(b.gep->tau)},
                    {"reversed", b.gep->reversed}};
      }
      if (b.psi) {
        j["psi"] = {{"k", b.psi->k}, {"m", b.psi->m},
                    {"tau", edges.format(b.psi->tau)},
                    {"nu", edges.format(b.psi->nu)},
                    {"reversed", b.psi->reversed}};
      }
      return j;
    }

    // Null words for the scans: a named family over n_min..n_max, or the
    // seeded sampler with |w| <= n_max.
    std::vector<MixedWord> scan_words(ExperimentConfig const& c,
                                      MappingTorus const&     P) {
      std::vector<MixedWord> words;
      if (c.family.empty()) {
        return sample_null_words(P, c.n_max, c.samples, *c.seed);
      }
      auto x = generator(P.alphabet(), c.generator);
      for (auto n = std::max<std::size_t>(c.n_min, 1); n <= c.n_max; ++n) {
        if (c.family == "power-commutator") {
          words.push_back(power_commutator_word(P, x, n));
        } else if (c.family == "conjugation") {
          words.push_back(conjugation_word(P, x, n));
        } else if (c.family == "relators") {
          return P.relators();
        } else {
          throw std::invalid_argument("unknown family " + c.family);
        }
      }
      return words;
    }

    Outcome strata(ExperimentConfig const& c) {
      auto    phi = automorphism(c);
      auto    rep = classify(phi);
      auto&   a   = phi.alphabet();
      Outcome o;
      json    letters = json::array();
      for (auto const& l : rep.letters) {
        json j{{"letter", a.name(l.index)},
               {"supp", names(a, l.supp)},
               {"stratum", names(a, l.stratum)},
               {"kind", to_string(l.kind)},
               {"growth", {{"kind", to_string(l.growth.kind)},
                           {"degree", l.growth.degree ? json(*l.growth.degree)
                                                      : json(nullptr)}}}};
        j["left_fast"]  = l.left_fast ? json(*l.left_fast) : json(nullptr);
        j["right_fast"] = l.right_fast ? json(*l.right_fast) : json(nullptr);
        j["preferred_index"] =
            l.preferred_index ? json(*l.preferred_index + 1) : json(nullptr);
        letters.push_back(j);
      }
      json strata = json::array();
      for (auto const& s : rep.strata) {
        strata.push_back(names(a, s));
      }
      o.result = {{"letters", letters}, {"strata", strata}};
      return o;
    }

    Outcome condition(ExperimentConfig const& c) {
      auto    cert = condition_power(automorphism(c), c.k_max);
      Outcome o;
      json    checks = json::array();
      for (std::size_t i = 0; i < cert.checks.size(); ++i) {
        checks.push_back({{"condition", i + 1},
                          {"pass", cert.checks[i].pass},
                          {"witness", cert.checks[i].witness}});
      }
      o.result = {{"k", cert.k}, {"passed", cert.passed()}, {"checks", checks}};
      return o;
    }

    Outcome beads(ExperimentConfig const& c) {
      auto        f     = graph_map(c);
      auto const& edges = f.graph().edges();
      Outcome     o;
      if (!c.word.empty()) {
        auto rho = parse_path(f.graph(), c.word);
        auto d   = bead_decomposition(f, rho, c.J, c.depth);
        json bs  = json::array();
        for (auto const& b : d.beads) {
          bs.push_back(bead_json(edges, b));
        }
        o.result = {{"word", edges.format(rho)}, {"J", c.J}, {"depth", d.depth},
                    {"accepted", d.accepted()}, {"beads", bs}};
        return o;
      }
      std::vector<std::size_t> Js;
      for (std::size_t J = 1; J <= c.J; ++J) {
        Js.push_back(J);
      }
      BeadednessOptions opt;
      opt.k_max = c.depth;
      auto r    = beadedness_search(f, {1, 2}, Js, c.max_len, c.steps, opt);
      json ce   = json::array();
      for (auto const& w : r.counterexamples) {
        ce.push_back(edges.format(w));
      }
      o.result = {{"found", r.found()},
                  {"d", r.d ? json(*r.d) : json(nullptr)},
                  {"J", r.J ? json(*r.J) : json(nullptr)},
                  {"paths_checked", r.paths_checked},
                  {"counterexamples", ce}};
      return o;
    }

    Outcome nielsen(ExperimentConfig const& c) {
      auto        f     = graph_map(c);
      auto const& edges = f.graph().edges();
      Outcome     o;
      if (!c.word.empty()) {
        auto rho = parse_path(f.graph(), c.word);
        auto p   = nielsen_period(f, rho, c.period);
        o.result = {{"word", edges.format(rho)},
                    {"nielsen", p.has_value()},
                    {"period", p ? json(*p) : json(nullptr)}};
        return o;
      }
      json paths = json::array();
      for (auto const& n :
           find_nielsen_paths(f, c.max_len, c.period, c.budgets.walk_cap)) {
        json factors = json::array();
        for (auto const& x : n.factors) {
          factors.push_back(edges.format(x));
        }
        paths.push_back({{"path", edges.format(n.path)},
                         {"period", n.period},
                         {"indivisible", n.indivisible},
                         {"factors", factors}});
      }
      o.result = {{"max_len", c.max_len}, {"paths", paths}};
      return o;
    }

    Outcome corridor_sim(ExperimentConfig const& c) {
      if (c.steps > c.budgets.steps_cap) {
        throw BudgetExceeded(std::to_string(c.steps) + " steps exceed the cap of "
                             + std::to_string(c.budgets.steps_cap));
      }
      MappingTorus P(automorphism(c), c.budgets.symbol_cap);
      auto const&  a   = P.alphabet();
      auto         rho = a.parse(require_word(c));
      StackOptions opt;
      opt.beads  = c.beads;
      opt.bead_J = c.J;
      opt.bead_k = c.depth;
      if (!c.colors.empty()) {
        std::istringstream in(c.colors);
        for (std::string part; std::getline(in, part, ',');) {
          std::size_t used = 0;
          std::size_t n    = 0;
          try {
            n = std::stoul(part, &used);
          } catch (std::exception const&) {
          }
          if (used == 0 || used != part.size() || n == 0) {
            throw std::invalid_argument("--colors expects positive lengths like 3,1,2");
          }
          opt.colors.push_back(n);
        }
      }
      if (!c.nibble.empty()) {
        auto colon = c.nibble.find(':');
        auto side  = c.nibble.substr(0, colon);
        if (colon == std::string::npos || (side != "left" && side != "right")) {
          throw std::invalid_argument("--nibble expects left:N or right:N");
        }
        opt.nibble = NibbleSchedule{side == "left" ? Side::left : Side::right,
                                    std::stoul(c.nibble.substr(colon + 1))};
      }
      auto    s = build_stack(P, rho, c.steps, opt);
      Outcome o;
      json    corridors = json::array();
      for (auto const& k : s.corridors()) {
        json dying = json::array();
        for (auto const& i : dying_intervals(k)) {
          dying.push_back({i.first + 1, i.last + 1});
        }
        json j{{"time", k.time},
               {"bottom", a.format(k.bottom)},
               {"length", k.bottom.size()},
               {"colors", k.colors},
               {"folded_top", a.format(k.folded_top)},
               {"area", k.area()},
               {"cancellations", k.cancellations.size()},
               {"dying_intervals", dying}};
        if (c.beads) {
          json bs = json::array();
          for (auto const& b : k.beads) {
            bs.push_back(bead_json(a, b));
          }
          j["beads"]       = bs;
          j["bead_norm"]   = bead_norm(k);
          j["bead_length"] = bead_length(k);
        }
        corridors.push_back(j);
        o.csv_rows.push_back({std::to_string(k.time), std::to_string(k.area()),
                              std::to_string(k.folded_top.size())});
      }
      o.csv_header = {"time", "bottom_length", "top_length"};
      o.result     = {{"word", a.format(rho)},
                      {"steps", c.steps},
                      {"corridors", corridors},
                      {"lengths", corridor_length_series(s)}};
      return o;
    }

    Outcome bracket(ExperimentConfig const& c) {
      MappingTorus P(automorphism(c), c.budgets.symbol_cap);
      auto const&  a = P.alphabet();
      auto         w = P.parse(require_word(c));
      auto         b = t_complete_bracketing(P, w);
      Outcome      o;
      json         brackets = json::array();
      for (auto const& br : b.brackets) {
        brackets.push_back({{"open", br.open + 1},
                            {"close", br.close + 1},
                            {"value", a.format(br.value)},
                            {"bottom", a.format(br.bottom)},
                            {"norm", br.norm}});
      }
      o.violations = audit_bracketing(P, w, b);
      o.result     = {{"word", P.format(w)},
                      {"complete", b.complete},
                      {"max_content_norm", b.max_content_norm},
                      {"area_bound", b.area()},
                      {"brackets", brackets}};
      return o;
    }

    Outcome area(ExperimentConfig const& c) {
      MappingTorus P(automorphism(c), c.budgets.symbol_cap);
      auto const&  a    = P.alphabet();
      auto         w    = P.parse(require_word(c));
      auto         cert = min_area(P, w, c.budgets.t_cap);
      Outcome      o;
      json         pairing = json::array(), bottoms = json::array();
      for (std::size_t i = 0; i < cert.pairing.size(); ++i) {
        pairing.push_back({cert.pairing[i].first + 1, cert.pairing[i].second + 1});
        bottoms.push_back(a.format(cert.bottoms[i]));
      }
      o.violations = audit_certificate(P, w, cert);
      o.result     = {{"word", P.format(w)},
                      {"area", cert.area},
                      {"minimal", cert.minimal},
                      {"pairing", pairing},
                      {"bottoms", bottoms}};
      return o;
    }

    Outcome dehn(ExperimentConfig const& c) {
      MappingTorus P(automorphism(c), c.budgets.symbol_cap);
      auto         words = scan_words(c, P);
      // Families are indexed by n; their rows are keyed by |w|.
      auto lo   = c.family.empty() ? c.n_min : 0;
      auto hi   = c.family.empty() ? c.n_max : std::size_t(-1);
      auto scan = dehn_scan(P, words, lo, hi, c.budgets.t_cap);
      Outcome o;
      json    rows = json::array();
      for (auto const& r : scan.rows) {
        rows.push_back({{"n", r.n},
                        {"count", r.count},
                        {"max_area", r.max_area},
                        {"mean_area", r.mean_area},
                        {"exact", r.exact}});
        o.csv_rows.push_back({std::to_string(r.n), std::to_string(r.count),
                              std::to_string(r.max_area), num(r.mean_area),
                              r.exact ? "1" : "0"});
      }
      std::size_t exact = 0;
      for (auto const& s : scan.samples) {
        exact += s.exact ? 1 : 0;
      }
      o.csv_header = {"n", "count", "max_area", "mean_area", "exact"};
      o.result     = {{"source", c.family.empty() ? "sampler" : c.family},
                      {"words", words.size()},
                      {"exact", exact},
                      {"bounded", scan.samples.size() - exact},
                      {"rows", rows},
                      {"slope", scan.slope ? json(*scan.slope) : json(nullptr)},
                      {"failures", scan.failures}};
      return o;
    }

    Outcome klen(ExperimentConfig const& c) {
      MappingTorus P(automorphism(c), c.budgets.symbol_cap);
      auto         words = scan_words(c, P);
      std::vector<MixedWord> exact;
      std::size_t            skipped = 0;
      for (auto const& w : words) {
        if (w.empty() || t_count(w) > c.budgets.t_cap) {
          ++skipped;
        } else {
          exact.push_back(w);
        }
      }
      auto    b = corridor_bound_estimate(P, exact, c.budgets.t_cap);
      Outcome o;
      double  mean = 0;
      for (std::size_t i = 0; i < b.ratios.size(); ++i) {
        mean += b.ratios[i];
        o.csv_rows.push_back({std::to_string(i), std::to_string(exact[i].size()),
                              num(b.ratios[i])});
      }
      if (!b.ratios.empty()) {
        mean /= double(b.ratios.size());
      }
      o.csv_header = {"index", "length", "ratio"};
      o.result     = {{"source", c.family.empty() ? "sampler" : c.family},
                      {"words", exact.size()},
                      {"skipped", skipped},
                      {"K_corr", b.max_ratio},
                      {"mean_ratio", mean}};
      return o;
    }

    Outcome brinkmann(ExperimentConfig const& c) {
      auto phi           = automorphism(c);
      auto words         = all_reduced_words(phi.rank(), c.max_len);
      auto [train, hold] = holdout_split(words, *c.seed);
      std::vector<NormVariant> variants;
      if (c.variant != "cyclic") {
        variants.push_back(NormVariant::word);
      }
      if (c.variant != "word") {
        variants.push_back(NormVariant::cyclic);
      }
      Outcome o;
      o.csv_header = {"variant", "word", "i", "N", "ratio"};
      json reports = json::array();
      auto const& a = phi.alphabet();
      for (auto v : variants) {
        auto h = brinkmann_holdout(phi, train, hold, c.N_max, v);
        json worst;
        for (auto const& e : h.train.entries) {
          if (e.num == h.train.K_num && e.den == h.train.K_den) {
            worst = {{"word", a.format(train[e.word])}, {"i", e.i}, {"N", e.N}};
            break;
          }
        }
        for (auto const& e : h.violations) {
          o.violations.push_back(std::string(to_string(v)) + ": "
                                 + a.format(hold[e.word]) + " at i="
                                 + std::to_string(e.i) + ", N="
                                 + std::to_string(e.N));
        }
        if (c.format == "csv") {
          for (auto const& e : h.train.entries) {
            o.csv_rows.push_back({to_string(v), a.format(train[e.word]),
                                  std::to_string(e.i), std::to_string(e.N),
                                  num(e.ratio())});
          }
        }
        reports.push_back({{"variant", to_string(v)},
                           {"K_num", h.train.K_num},
                           {"K_den", h.train.K_den},
                           {"K_hat", h.train.K_hat()},
                           {"argmax", worst},
                           {"train_size", train.size()},
                           {"holdout_size", h.holdout_size},
                           {"checked", h.checked},
                           {"violations", h.violations.size()}});
      }
      o.result = {{"max_len", c.max_len}, {"N_max", c.N_max}, {"reports", reports}};
      return o;
    }

  }  // namespace

  bool needs_seed(std::string const& command, ExperimentConfig const& c) {
    if (command == "dehn-scan" || command == "klen") {
      return c.family.empty();
    }
    return command == "brinkmann" || command == "verify-all";
  }

  Outcome execute(ExperimentConfig const& c) {
    if (needs_seed(c.command, c) && !c.seed) {
      throw std::invalid_argument(c.command + " needs --seed");
    }
    auto const& cmd = c.command;
    if (cmd == "strata") {
      return strata(c);
    }
    if (cmd == "condition") {
      return condition(c);
    }
    if (cmd == "beads") {
      return beads(c);
    }
    if (cmd == "nielsen") {
      return nielsen(c);
    }
    if (cmd == "corridor-sim") {
      return corridor_sim(c);
    }
    if (cmd == "bracket") {
      return bracket(c);
    }
    if (cmd == "area") {
      return area(c);
    }
    if (cmd == "dehn-scan") {
      return dehn(c);
    }
    if (cmd == "klen") {
      return klen(c);
    }
    if (cmd == "brinkmann") {
      return brinkmann(c);
    }
    if (cmd == "verify-all") {
      Outcome o;
      o.result = verify_all(c, o.violations);
      return o;
    }
    throw std::invalid_argument("unknown command " + cmd);
  }

}  // namespace corridorlab::cli
