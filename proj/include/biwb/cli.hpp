#pragma once
// Command line front end. Every subcommand prints a status token on the
// first line (ok, refuted, not-found, violation), then key/value detail
// lines, then one "wrote" line per artifact. Exit codes: 0 for ok, 1 for
// the three negative statuses, 2 for usage and format errors.
//
// Needs CLI11.hpp on the include path (vendored single header).

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "biwb/acm.hpp"
#include "biwb/checker.hpp"
#include "biwb/frames.hpp"
#include "biwb/growth.hpp"
#include "biwb/parse.hpp"
#include "biwb/proof.hpp"
#include "biwb/search.hpp"
#include "biwb/seqgraph.hpp"
#include "biwb/tiling.hpp"
#include "biwb/truncated.hpp"

namespace biwb {

struct CommandResult {
  std::string status;  // first output line; empty when usage failed before a verdict
  std::vector<std::string> artifacts;
  std::string summary;  // the detail lines joined, for callers that embed the tool
  int exit_code = 0;
};

namespace cli_detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accumulates the report so the status line always lands first.
struct Emit {
  std::string status;
  std::vector<std::pair<std::string, std::string>> rows;
  std::vector<std::string> wrote;

  void kv(const std::string& key, const std::string& value) { rows.emplace_back(key, value); }
  void kv(const std::string& key, uint64_t value) { rows.emplace_back(key, std::to_string(value)); }
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

inline Mode mode_of(const std::string& name) {
  return name == "gbi" ? Mode::NonCommutative : Mode::Commutative;
}

inline std::string dotted(const std::vector<size_t>& at) {
  if (at.empty()) return "root";
  std::string s;
  for (size_t i = 0; i < at.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(at[i]);
  }
  return s;
}

inline Configuration parse_config_arg(const Machine& m, const std::string& text) {
  std::istringstream in(text);
  Configuration c;
  if (!(in >> c.state)) throw UsageError("empty configuration, expected \"state n1 n2 ...\"");
  size_t n = 0;
  while (in >> n) c.counts.push_back(n);
  if (!in.eof()) throw UsageError("configuration counts must be numbers");
  if (c.counts.size() != m.registers)
    throw UsageError("configuration has " + std::to_string(c.counts.size()) +
                     " counts but the machine has " + std::to_string(m.registers) + " registers");
  return c;
}

inline size_t tree_depth(const ComputationTree& t) {
  size_t d = 0;
  for (const auto& c : t.children) d = std::max(d, 1 + tree_depth(c));
  return d;
}

inline size_t tree_nodes(const ComputationTree& t) {
  size_t n = 1;
  for (const auto& c : t.children) n += tree_nodes(c);
  return n;
}

inline void report_violations(Emit& e, const std::vector<Violation>& v) {
  e.status = "violation";
  e.kv("violations", v.size());
  e.kv("code", v.front().code);
  e.kv("at", dotted(v.front().at));
  e.kv("detail", v.front().detail);
}

// Writes a proof artifact and folds the mandatory re-check into the report.
inline void emit_proof(Emit& e, const Proof& p, Mode mode, bool allow_open,
                       const std::string& out_path) {
  std::vector<Violation> v = check_proof(p, mode, allow_open);
  if (!v.empty()) {
    report_violations(e, v);
    return;
  }
  spill(out_path, print_proof(p));
  e.kv("inferences", inference_count(p));
  e.kv("proof depth", proof_depth(p));
  e.wrote.push_back(out_path);
}

}  // namespace cli_detail

// Runs one invocation against the given argument list (no program name) and
// prints the report to `out`. Kept apart from main() so tests can drive it.
inline CommandResult run_command(std::vector<std::string> args, std::ostream& out) {
  using cli_detail::Emit;
  using cli_detail::UsageError;

  CLI::App app{"workbench for bunched sequents, tilings, and counter machines"};
  app.require_subcommand(0, 1);

  std::string format = "text";
  uint64_t seed = 0;
  app.add_option("--format", format, "report style: text or tabular")
      ->check(CLI::IsMember({"text", "tabular"}));
  app.add_option("--seed", seed, "seed for randomized helpers (reserved; commands are deterministic)");

  // Option targets. Values that differ between subcommands get their own
  // variable; the rest are shared (one subcommand parses per invocation).
  std::string mode_name = "bi";
  std::string text_arg;
  std::string kind = "formula";
  std::string tiles_path;
  std::string model_path;
  std::string machine_path;
  std::string assignment_path;
  std::string config_text;
  uint64_t depth_limit = 64;
  uint64_t contractions = 1;
  uint64_t width = 0, height = 0;
  uint64_t max_period = 4;
  uint64_t max_size = 2;
  uint64_t workers = 1;
  uint64_t coord_bound = 4;
  uint64_t grid = 3;
  uint64_t rounds = 5;
  uint64_t acm_depth = 6;
  int64_t start_state = -1;
  bool allow_open = false;
  uint64_t prove_budget = 200000, cm_budget = 0, ex_budget = 0;
  std::string proof_out = "proof.txt", growth_out = "growth_proof.txt";
  std::string solve_out = "assignment.txt", periodic_out = "assignment.txt";
  std::string phi_out = "phi.txt", cm_out = "countermodel.txt";
  std::string tm_out = "model.txt", ex_out = "extraction.txt";
  std::string enc_out = "sequent.txt", ap_out = "acm_proof.txt";

  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode_name, "bi (commutative) or gbi (noncommutative)")
        ->check(CLI::IsMember({"bi", "gbi"}));
  };

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse text and echo the canonical form");
  add_mode(parse_cmd);
  parse_cmd->add_option("--kind", kind, "formula, bunch, or sequent")
      ->check(CLI::IsMember({"formula", "bunch", "sequent"}));
  parse_cmd->add_option("text", text_arg, "the text to parse")->required();

  CLI::App* prove_cmd = app.add_subcommand("prove", "search for a proof of a sequent");
  add_mode(prove_cmd);
  prove_cmd->add_option("--budget", prove_budget, "node expansion budget");
  prove_cmd->add_option("--depth", depth_limit, "proof depth limit");
  prove_cmd->add_option("--contractions", contractions, "contraction budget per branch");
  prove_cmd->add_option("--out", proof_out, "certificate file");
  prove_cmd->add_option("sequent", text_arg, "the goal sequent")->required();

  CLI::App* check_cmd = app.add_subcommand("check", "validate a proof certificate file");
  add_mode(check_cmd);
  check_cmd->add_flag("--allow-open", allow_open, "accept open leaves");
  check_cmd->add_option("file", text_arg, "certificate file")->required();

  CLI::App* depth_cmd = app.add_subcommand("depth", "nesting depth of a bunch");
  add_mode(depth_cmd);
  depth_cmd->add_option("bunch", text_arg, "the bunch")->required();

  CLI::App* mult_cmd = app.add_subcommand("mult-length", "multiplicative length of a sequent");
  add_mode(mult_cmd);
  mult_cmd->add_option("sequent", text_arg, "the sequent")->required();

  CLI::App* growth_cmd = app.add_subcommand("comma-growth", "build the comma growth derivation");
  growth_cmd->add_option("rounds", rounds, "number of duplication rounds")->required();
  growth_cmd->add_option("--out", growth_out, "certificate file");

  CLI::App* solve_cmd = app.add_subcommand("tile-solve", "tile a rectangle with a tile set");
  solve_cmd->add_option("--tiles", tiles_path, "tile set file")->required();
  solve_cmd->add_option("--width", width, "columns")->required();
  solve_cmd->add_option("--height", height, "rows")->required();
  solve_cmd->add_option("--out", solve_out, "assignment file");

  CLI::App* periodic_cmd = app.add_subcommand("tile-periodic", "search for a periodic tiling");
  periodic_cmd->add_option("--tiles", tiles_path, "tile set file")->required();
  periodic_cmd->add_option("--max-period", max_period, "largest period tried per axis");
  periodic_cmd->add_option("--out", periodic_out, "assignment file");

  CLI::App* phi_cmd = app.add_subcommand("compile-phi", "compile a tile set into a goal formula");
  add_mode(phi_cmd);
  phi_cmd->add_option("--out", phi_out, "formula file");
  phi_cmd->add_option("tiles", tiles_path, "tile set file")->required();

  CLI::App* fv_cmd = app.add_subcommand("frame-validate", "validate a frame or model file");
  fv_cmd->add_option("file", model_path, "frame or model file")->required();

  CLI::App* mc_cmd = app.add_subcommand("model-check", "evaluate a formula in a model");
  add_mode(mc_cmd);
  mc_cmd->add_option("--model", model_path, "model file")->required();
  mc_cmd->add_option("formula", text_arg, "the formula")->required();

  CLI::App* cm_cmd = app.add_subcommand("countermodel", "search for a refuting model");
  add_mode(cm_cmd);
  cm_cmd->add_option("--max-size", max_size, "largest carrier tried");
  cm_cmd->add_option("--budget", cm_budget, "table budget, 0 for unlimited");
  cm_cmd->add_option("--workers", workers, "worker threads");
  cm_cmd->add_option("--out", cm_out, "model file");
  cm_cmd->add_option("formula", text_arg, "the formula")->required();

  CLI::App* tm_cmd = app.add_subcommand("truncated-model", "build the truncated grid model of a tiling");
  tm_cmd->add_option("--tau", tiles_path, "tile set file")->required();
  tm_cmd->add_option("--assignment", assignment_path, "wrapped assignment file (default: search)");
  tm_cmd->add_option("--K", coord_bound, "coordinate bound, 1 to 4");
  tm_cmd->add_option("--max-period", max_period, "torus search bound when no assignment is given");
  tm_cmd->add_option("--out", tm_out, "model file");

  CLI::App* ex_cmd = app.add_subcommand("extract-tiling", "read a tiling back out of a model");
  ex_cmd->add_option("--tau", tiles_path, "tile set file")->required();
  ex_cmd->add_option("--assignment", assignment_path, "wrapped assignment file (default: search)");
  ex_cmd->add_option("--model", model_path, "model file (default: build the truncated model)");
  ex_cmd->add_option("--K", coord_bound, "coordinate bound when building");
  ex_cmd->add_option("--G", grid, "grid size to extract")->required();
  ex_cmd->add_option("--start", start_state, "start state (default: search)");
  ex_cmd->add_option("--budget", ex_budget, "probe budget, 0 for unlimited");
  ex_cmd->add_option("--out", ex_out, "assignment file");

  CLI::App* run_cmd = app.add_subcommand("acm-run", "run a counter machine to acceptance");
  run_cmd->add_option("--machine", machine_path, "machine file")->required();
  run_cmd->add_option("--config", config_text, "start configuration \"state n1 n2 ...\"")->required();
  run_cmd->add_option("--depth", acm_depth, "computation depth budget");

  CLI::App* enc_cmd = app.add_subcommand("acm-encode", "encode a machine configuration as a sequent");
  add_mode(enc_cmd);
  enc_cmd->add_option("--machine", machine_path, "machine file")->required();
  enc_cmd->add_option("--config", config_text, "configuration \"state n1 n2 ...\"")->required();
  enc_cmd->add_option("--out", enc_out, "sequent file");

  CLI::App* ap_cmd = app.add_subcommand("acm-prove", "turn an accepting run into a checked proof");
  ap_cmd->add_option("--machine", machine_path, "machine file")->required();
  ap_cmd->add_option("--config", config_text, "start configuration \"state n1 n2 ...\"")->required();
  ap_cmd->add_option("--depth", acm_depth, "computation depth budget");
  ap_cmd->add_option("--out", ap_out, "certificate file");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return {"", {}, "", 0};
  } catch (const CLI::ParseError& e) {
    out << "error: " << e.what() << "\n";
    return {"", {}, "error: " + std::string(e.what()), 2};
  }

  Emit e;
  (void)seed;  // reserved: every subcommand is deterministic today
  try {
    Mode mode = cli_detail::mode_of(mode_name);
    uint64_t unlimited = ~uint64_t{0};

    if (parse_cmd->parsed()) {
      std::string echoed;
      if (kind == "formula") echoed = to_text(parse_formula(text_arg, mode));
      else if (kind == "bunch") echoed = to_text(parse_bunch(text_arg, mode));
      else echoed = to_text(parse_sequent(text_arg, mode));
      e.status = "ok";
      e.kv("parsed", echoed);
    } else if (prove_cmd->parsed()) {
      Sequent goal = parse_sequent(text_arg, mode);
      SearchLimits limits;
      limits.max_nodes = prove_budget;
      limits.max_depth = depth_limit;
      limits.max_contractions = contractions;
      SearchResult r = prove_bounded(goal, mode, limits);
      if (r.proof) {
        e.status = "ok";
        cli_detail::emit_proof(e, *r.proof, mode, false, proof_out);
        e.kv("budget consumed", r.nodes_expanded);
      } else {
        e.status = "not-found";
        e.kv("reason", r.outcome == SearchResult::Outcome::BudgetExhausted
                           ? "node budget exhausted"
                           : "search space exhausted within limits");
        e.kv("budget consumed", r.nodes_expanded);
      }
    } else if (check_cmd->parsed()) {
      Proof p = parse_proof(cli_detail::slurp(text_arg), mode);
      std::vector<Violation> v = check_proof(p, mode, allow_open);
      if (v.empty()) {
        e.status = "ok";
        e.kv("conclusion", to_text(p.conclusion()));
        e.kv("inferences", inference_count(p));
        e.kv("proof depth", proof_depth(p));
      } else {
        cli_detail::report_violations(e, v);
      }
    } else if (depth_cmd->parsed()) {
      e.status = "ok";
      e.kv("depth", bunch_depth(parse_bunch(text_arg, mode)));
    } else if (mult_cmd->parsed()) {
      e.status = "ok";
      e.kv("length", multiplicative_length(parse_sequent(text_arg, mode), mode));
    } else if (growth_cmd->parsed()) {
      Proof p = comma_growth_derivation(rounds);
      std::vector<Sequent> open = open_leaves(p);
      size_t top = 0;
      for (const Sequent& s : open) top = std::max(top, bunch_depth(s.antecedent));
      e.status = "ok";
      cli_detail::emit_proof(e, p, Mode::Commutative, true, growth_out);
      e.kv("rounds", rounds);
      e.kv("open goals", open.size());
      e.kv("top depth", top);
    } else if (solve_cmd->parsed()) {
      TileSet w = parse_tiles(cli_detail::slurp(tiles_path));
      size_t steps = 0;
      std::optional<TileAssignment> a = tiles_region(w, width, height, &steps);
      if (a) {
        cli_detail::spill(solve_out, print_assignment(*a));
        e.status = "ok";
        e.kv("width", width);
        e.kv("height", height);
        e.kv("adjacency", assignment_valid(w, *a) ? "ok" : "broken");
        e.wrote.push_back(solve_out);
      } else {
        e.status = "not-found";
        e.kv("reason", "no assignment fits the rectangle");
      }
      e.kv("budget consumed", steps);
    } else if (periodic_cmd->parsed()) {
      TileSet w = parse_tiles(cli_detail::slurp(tiles_path));
      size_t steps = 0;
      std::optional<PeriodicTiling> a = search_periodic(w, max_period, &steps);
      if (a) {
        cli_detail::spill(periodic_out, print_assignment(a->assignment));
        e.status = "ok";
        e.kv("periods", "(" + std::to_string(a->p) + ", " + std::to_string(a->q) + ")");
        e.kv("adjacency", assignment_valid(w, a->assignment) ? "ok" : "broken");
        e.wrote.push_back(periodic_out);
      } else {
        e.status = "not-found";
        e.kv("max period", max_period);
      }
      e.kv("budget consumed", steps);
    } else if (phi_cmd->parsed()) {
      TileSet w = parse_tiles(cli_detail::slurp(tiles_path));
      Formula f = compile_phi(w, mode);
      cli_detail::spill(phi_out, to_text(f) + "\n");
      size_t names = atoms(f).size();
      e.status = "ok";
      e.kv("tiles", w.tiles.size());
      e.kv("vocabulary", std::to_string(names - 1) + " atoms + p");
      e.wrote.push_back(phi_out);
    } else if (fv_cmd->parsed()) {
      Model m = parse_model(cli_detail::slurp(model_path));
      std::vector<std::string> bad = validate_frame(m.frame);
      if (bad.empty()) {
        e.status = "ok";
        e.kv("states", m.frame.states);
        e.kv("atoms", m.valuation.size());
      } else {
        e.status = "violation";
        e.kv("violations", bad.size());
        for (const std::string& msg : bad) e.kv("violation", msg);
      }
    } else if (mc_cmd->parsed()) {
      Model m = parse_model(cli_detail::slurp(model_path));
      Formula f = parse_formula(text_arg, mode);
      StateSet sat = eval(m, f);
      if (sat == StateSet::all(m.frame.states)) {
        e.status = "ok";
        e.kv("holds", "everywhere");
        e.kv("states", m.frame.states);
      } else {
        size_t witness = 0;
        while (sat.test(witness)) ++witness;
        e.status = "refuted";
        e.kv("fails at state", witness);
        e.kv("holds at", std::to_string(sat.count()) + " of " +
                             std::to_string(m.frame.states) + " states");
      }
    } else if (cm_cmd->parsed()) {
      Formula f = parse_formula(text_arg, mode);
      CountermodelResult r =
          countermodel_search(f, max_size, cm_budget ? cm_budget : unlimited, workers);
      if (r.model) {
        StateSet sat = eval(*r.model, f);
        size_t witness = 0;
        while (sat.test(witness)) ++witness;
        cli_detail::spill(cm_out, print_model(*r.model));
        e.status = "ok";
        e.kv("states", r.model->frame.states);
        e.kv("fails at state", witness);
        e.wrote.push_back(cm_out);
      } else {
        e.status = "not-found";
        e.kv("exhausted", r.exhausted ? "yes" : "no");
      }
      e.kv("budget consumed", r.examined);
    } else if (tm_cmd->parsed()) {
      TileSet w = parse_tiles(cli_detail::slurp(tiles_path));
      std::optional<TileAssignment> tau;
      if (!assignment_path.empty()) {
        tau = parse_assignment(cli_detail::slurp(assignment_path), true);
      } else if (std::optional<PeriodicTiling> hit = search_periodic(w, max_period)) {
        tau = hit->assignment;
        e.kv("periods", "(" + std::to_string(hit->p) + ", " + std::to_string(hit->q) + ")");
      }
      if (!tau) {
        e.status = "not-found";
        e.kv("reason", "no periodic tiling within the period bound");
      } else {
        Model m = build_truncated_model(w, *tau, coord_bound);
        cli_detail::spill(tm_out, print_model(m));
        e.status = "ok";
        e.kv("states", m.frame.states);
        e.kv("atoms", m.valuation.size());
        e.wrote.push_back(tm_out);
      }
    } else if (ex_cmd->parsed()) {
      TileSet w = parse_tiles(cli_detail::slurp(tiles_path));
      std::optional<Model> m;
      if (!model_path.empty()) {
        m = parse_model(cli_detail::slurp(model_path));
      } else {
        std::optional<TileAssignment> tau;
        if (!assignment_path.empty()) {
          tau = parse_assignment(cli_detail::slurp(assignment_path), true);
        } else if (std::optional<PeriodicTiling> hit = search_periodic(w, max_period)) {
          tau = hit->assignment;
        }
        if (!tau) {
          e.status = "not-found";
          e.kv("reason", "no periodic tiling within the period bound");
        } else {
          m = build_truncated_model(w, *tau, coord_bound);
        }
      }
      if (m) {
        std::optional<size_t> start;
        if (start_state >= 0) start = size_t(start_state);
        size_t probes = 0;
        try {
          TileAssignment got =
              extract_tiling(*m, w, start, grid, ex_budget ? ex_budget : unlimited, &probes);
          cli_detail::spill(ex_out, print_assignment(got));
          e.status = "ok";
          e.kv("grid", grid);
          e.kv("adjacency", assignment_valid(w, got) ? "ok" : "broken");
          e.kv("budget consumed", probes);
          e.wrote.push_back(ex_out);
        } catch (const ExtractionError& err) {
          std::string what = err.what();
          e.status = what.rfind("invariant breach", 0) == 0 ? "violation" : "not-found";
          e.kv("reason", what);
        }
      }
    } else if (run_cmd->parsed()) {
      Machine m = parse_machine(cli_detail::slurp(machine_path));
      Configuration c = cli_detail::parse_config_arg(m, config_text);
      std::optional<ComputationTree> t = accepts_bounded(m, c, acm_depth);
      if (t) {
        e.status = "ok";
        e.kv("state", c.state);
        e.kv("tree depth", cli_detail::tree_depth(*t));
        e.kv("tree nodes", cli_detail::tree_nodes(*t));
        e.kv("budget consumed", cli_detail::tree_depth(*t));
      } else {
        e.status = "not-found";
        e.kv("depth bound", acm_depth);
        e.kv("budget consumed", acm_depth);
      }
    } else if (enc_cmd->parsed()) {
      Machine m = parse_machine(cli_detail::slurp(machine_path));
      Configuration c = cli_detail::parse_config_arg(m, config_text);
      Sequent s = config_sequent(m, c, mode);
      cli_detail::spill(enc_out, to_text(s) + "\n");
      e.status = "ok";
      e.kv("registers", m.registers);
      e.kv("instructions", m.instructions.size());
      e.kv("atoms", atoms(s.succedent).size());
      e.wrote.push_back(enc_out);
    } else if (ap_cmd->parsed()) {
      Machine m = parse_machine(cli_detail::slurp(machine_path));
      Configuration c = cli_detail::parse_config_arg(m, config_text);
      std::optional<ComputationTree> t = accepts_bounded(m, c, acm_depth);
      if (!t) {
        e.status = "not-found";
        e.kv("reason", "no accepting computation within the depth budget");
        e.kv("budget consumed", acm_depth);
      } else {
        Proof p = soundness_proof(m, *t);
        e.status = "ok";
        cli_detail::emit_proof(e, p, Mode::Commutative, false, ap_out);
        e.kv("tree depth", cli_detail::tree_depth(*t));
        e.kv("budget consumed", cli_detail::tree_depth(*t));
      }
    } else {
      out << "error: expected a subcommand, try --help\n";
      return {"", {}, "error: expected a subcommand", 2};
    }
  } catch (const ParseError& err) {
    // the message already carries line:col
    out << "error: " << err.what() << "\n";
    return {"", {}, "error: " + std::string(err.what()), 2};
  } catch (const UsageError& err) {
    out << "error: " << err.what() << "\n";
    return {"", {}, "error: " + std::string(err.what()), 2};
  } catch (const EvalError& err) {
    out << "error: " << err.what() << "\n";
    return {"", {}, "error: " + std::string(err.what()), 2};
  } catch (const std::invalid_argument& err) {
    out << "error: " << err.what() << "\n";
    return {"", {}, "error: " + std::string(err.what()), 2};
  }

  CommandResult result;
  result.status = e.status;
  result.artifacts = e.wrote;
  result.exit_code = e.status == "ok" ? 0 : 1;
  std::string sep = format == "tabular" ? "\t" : ": ";
  out << e.status << "\n";
  std::string summary;
  for (const auto& [key, value] : e.rows) {
    out << key << sep << value << "\n";
    if (!summary.empty()) summary += "; ";
    summary += key + sep + value;
  }
  for (const std::string& path : e.wrote) out << "wrote" << sep << path << "\n";
  result.summary = summary;
  return result;
}

}  // namespace biwb
