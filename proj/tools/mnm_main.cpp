// mnm: decision procedures, proof checking and matrix experiments for the
// Ivlev-style many-valued modal systems.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mnm/calculus.hpp"
#include "mnm/derivations.hpp"
#include "mnm/dugundji.hpp"
#include "mnm/nmatrix.hpp"
#include "mnm/recovery.hpp"
#include "mnm/semantics.hpp"

namespace {

using namespace mnm;
using nlohmann::ordered_json;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct Common {
  std::string system;
  bool json = false;
  bool strict_paper = false;
  bool timings = false;
  int jobs = 1;
  uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_system = true) {
  if (with_system)
    cmd->add_option("-s,--system", c.system, "system id (Tm..T45md)")
        ->envname("MNM_SYSTEM");
  cmd->add_flag("--json", c.json, "JSON output");
  cmd->add_flag("--strict-paper", c.strict_paper,
                "use the published cells verbatim (facsimile tables)");
  cmd->add_flag("--timings", c.timings, "report real elapsed time in JSON");
  cmd->add_option("-j,--jobs", c.jobs, "worker threads")->envname("MNM_JOBS");
  cmd->add_option("--seed", c.seed, "seed for randomized subcommands");
}

SystemId system_of(const Common& c) {
  if (c.system.empty())
    throw CLI::ValidationError("--system is required (or set MNM_SYSTEM)");
  auto id = parse_system(c.system);
  if (!id)
    throw CLI::ValidationError("unknown system '" + c.system + "'");
  return *id;
}

TableOptions topts_of(const Common& c) {
  return TableOptions{.strict_paper = c.strict_paper};
}

int64_t elapsed_or_zero(const Common& c,
                        std::chrono::steady_clock::time_point t0) {
  if (!c.timings) return 0;
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<Formula> read_premises(const std::vector<std::string>& raw) {
  std::vector<Formula> out;
  for (const std::string& item : raw) {
    if (std::filesystem::is_regular_file(item)) {
      std::ifstream in(item);
      std::string line;
      while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
          line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        out.push_back(parse(line));
      }
    } else {
      out.push_back(parse(item));
    }
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_witness_text(const Valuation& w) {
  for (size_t i = 0; i < w.nodes.size(); ++i)
    std::cout << "  " << render(w.nodes[i]) << " = "
              << value_name(w.values[i]) << "\n";
}

int run_entail(const Common& c, const std::vector<Formula>& premises,
               Formula conclusion) {
  auto t0 = std::chrono::steady_clock::now();
  const Nmatrix& nm = builtin(system_of(c), topts_of(c));
  SearchOptions sopts;
  sopts.jobs = c.jobs;
  Verdict v = decide_consequence(nm, premises, conclusion, sopts);
  if (c.json) {
    std::cout << verdict_to_json(nm, premises, conclusion, v,
                                 elapsed_or_zero(c, t0))
              << "\n";
  } else if (v.holds) {
    std::cout << (premises.empty() ? "valid" : "entailed") << "\n";
  } else {
    std::cout << (premises.empty() ? "invalid" : "not entailed")
              << ", countermodel:\n";
    print_witness_text(*v.witness);
  }
  return v.holds ? kExitHolds : kExitFails;
}

int run_audit(const Common& c, bool all, bool km_circ,
              const std::string& schema) {
  TableOptions topts = topts_of(c);
  if (!schema.empty()) {
    if (!find_schema(schema))
      throw CLI::ValidationError("unknown axiom schema '" + schema + "'");
    SchemaAudit a = audit_schema_over(system_of(c), schema, topts);
    if (c.json) {
      ordered_json j;
      j["system"] = system_name(system_of(c));
      j["schema"] = a.name;
      j["skeleton"] = render(a.skeleton);
      j["verdict"] = a.verdict.holds ? "holds" : "fails";
      if (a.verdict.witness) {
        ordered_json w = ordered_json::object();
        for (size_t i = 0; i < a.verdict.witness->nodes.size(); ++i)
          w[render(a.verdict.witness->nodes[i])] =
              value_name(a.verdict.witness->values[i]);
        j["witness"] = w;
      } else {
        j["witness"] = nullptr;
      }
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << a.name << " over " << system_name(system_of(c)) << ": "
                << (a.verdict.holds ? "holds" : "fails") << "\n";
      if (a.verdict.witness) print_witness_text(*a.verdict.witness);
    }
    return a.verdict.holds ? kExitHolds : kExitFails;
  }

  std::vector<AuditReport> reports;
  if (all) {
    for (SystemId id : kAllSystems) reports.push_back(audit_system(id, topts));
  } else if (km_circ) {
    std::vector<std::pair<std::string, Schema>> axs;
    for (const AxiomSchema& ax : km_circ_axioms())
      axs.emplace_back(ax.name, ax.schema);
    reports.push_back(audit_schemas(builtin(SystemId::Km, topts), "Km_circ", axs));
  } else {
    reports.push_back(audit_system(system_of(c), topts));
  }

  bool ok = true;
  ordered_json arr = ordered_json::array();
  for (const AuditReport& r : reports) {
    if (!r.ok()) ok = false;
    if (c.json) {
      ordered_json j;
      j["system"] = r.system;
      j["mp_preserves_designation"] = r.mp_preserves_designation;
      ordered_json schemas = ordered_json::array();
      for (const SchemaAudit& a : r.schemas) {
        ordered_json s;
        s["name"] = a.name;
        s["verdict"] = a.verdict.holds ? "holds" : "fails";
        schemas.push_back(s);
      }
      j["schemas"] = schemas;
      j["ok"] = r.ok();
      arr.push_back(j);
    } else {
      std::cout << "audit " << r.system << ": "
                << (r.ok() ? "all axioms valid" : "FAILURES") << ", MP "
                << (r.mp_preserves_designation ? "preserves" : "BREAKS")
                << " designation\n";
      for (const SchemaAudit& a : r.schemas)
        if (!a.verdict.holds) std::cout << "  fails: " << a.name << "\n";
    }
  }
  if (c.json) std::cout << arr.dump(2) << "\n";
  return ok ? kExitHolds : kExitFails;
}

int run_export(const Common& c, const std::string& out_dir,
               const std::string& format) {
  TableOptions topts = topts_of(c);
  std::ostream* out = &std::cout;
  std::filesystem::path dir;
  bool to_dir = !out_dir.empty();
  if (to_dir) {
    dir = out_dir;
    std::filesystem::create_directories(dir);
  }
  for (SystemId id : kAllSystems) {
    const Nmatrix& nm = builtin(id, topts);
    std::string grid = format_tables(nm);
    std::string nmx = save_nmatrix(nm);
    if (to_dir) {
      if (format != "nmx")
        std::ofstream(dir / (std::string(system_name(id)) + ".txt")) << grid;
      if (format != "grid")
        std::ofstream(dir / (std::string(system_name(id)) + ".nmx")) << nmx;
    } else {
      if (format != "nmx") *out << grid << "\n";
      if (format != "grid") *out << nmx << "\n";
    }
  }
  // deviation report: printed vs default cells
  std::ostringstream dev;
  for (const Deviation& d : deviation_report()) {
    dev << system_name(d.system) << " " << connective_name(d.connective) << "(";
    for (size_t i = 0; i < d.args.size(); ++i)
      dev << (i ? "," : "") << value_name(d.args[i]);
    dev << "): printed " << d.printed.to_string() << ", used "
        << d.used.to_string() << " -- " << d.note << "\n";
  }
  if (to_dir)
    std::ofstream(dir / "deviations.txt") << dev.str();
  else
    *out << "deviations:\n" << dev.str();
  return kExitHolds;
}

int dispatch(int argc, char** argv) {
  CLI::App app{
      "non-deterministic matrix semantics, Hilbert calculi and finite-matrix "
      "experiments for twelve Ivlev-style modal systems"};
  app.require_subcommand(1);

  // parse ---------------------------------------------------------------
  Common c_parse;
  std::string parse_text;
  auto* cmd_parse = app.add_subcommand("parse", "parse and reprint a formula");
  cmd_parse->add_option("formula", parse_text, "formula text")->required();
  add_common(cmd_parse, c_parse, false);

  // table ---------------------------------------------------------------
  Common c_table;
  std::string table_conn;
  auto* cmd_table = app.add_subcommand("table", "print a connective table");
  cmd_table->add_option("connective", table_conn, "neg|imp|box|dia")
      ->required();
  add_common(cmd_table, c_table);

  // derive-table ----------------------------------------------------------
  Common c_derive;
  std::string derive_skeleton;
  auto* cmd_derive = app.add_subcommand(
      "derive-table", "composed table of a skeleton over a system");
  cmd_derive->add_option("skeleton", derive_skeleton, "schema, e.g. \"~A -> B\"")
      ->required();
  add_common(cmd_derive, c_derive);

  // valid / countermodel / entail ------------------------------------------
  Common c_valid;
  std::string valid_text;
  auto* cmd_valid = app.add_subcommand("valid", "decide validity");
  cmd_valid->add_option("formula", valid_text)->required();
  add_common(cmd_valid, c_valid);

  Common c_counter;
  std::string counter_text;
  std::vector<std::string> counter_premises;
  auto* cmd_counter =
      app.add_subcommand("countermodel", "search for a falsifying valuation");
  cmd_counter->add_option("formula", counter_text)->required();
  cmd_counter->add_option("-p,--premise", counter_premises,
                          "premise (formula or file)");
  add_common(cmd_counter, c_counter);

  Common c_entail;
  std::vector<std::string> entail_premises;
  std::string entail_conclusion;
  auto* cmd_entail = app.add_subcommand("entail", "decide consequence");
  cmd_entail->add_option("-p,--premise", entail_premises,
                         "premise (formula or file)");
  cmd_entail->add_option("-c,--conclusion", entail_conclusion)->required();
  add_common(cmd_entail, c_entail);

  // audit / lemmas ----------------------------------------------------------
  Common c_audit;
  bool audit_all = false, audit_km_circ = false;
  std::string audit_schema;
  auto* cmd_audit =
      app.add_subcommand("audit", "soundness audit of axiom schemas");
  cmd_audit->add_flag("--all", audit_all, "audit all twelve systems");
  cmd_audit->add_flag("--km-circ", audit_km_circ,
                      "audit the recovery-operator axiomatization over Km");
  cmd_audit->add_option("--schema", audit_schema,
                        "audit one named schema over --system");
  add_common(cmd_audit, c_audit);

  Common c_lemmas;
  auto* cmd_lemmas =
      app.add_subcommand("lemmas", "modal equivalence and entailment suite");
  add_common(cmd_lemmas, c_lemmas, false);

  // proof ---------------------------------------------------------------
  auto* cmd_proof = app.add_subcommand("proof", "derivation tools");
  cmd_proof->require_subcommand(1);
  Common c_pcheck;
  std::string pcheck_file;
  auto* cmd_pcheck = cmd_proof->add_subcommand("check", "check a derivation");
  cmd_pcheck->add_option("file", pcheck_file)->required();
  add_common(cmd_pcheck, c_pcheck, false);

  Common c_pdmt;
  std::string pdmt_file, pdmt_hyp, pdmt_out;
  auto* cmd_pdmt = cmd_proof->add_subcommand(
      "dmt", "discharge a hypothesis via the deduction metatheorem");
  cmd_pdmt->add_option("file", pdmt_file)->required();
  cmd_pdmt->add_option("--hyp", pdmt_hyp,
                       "hypothesis to discharge (default: the last)");
  cmd_pdmt->add_option("-o,--out", pdmt_out, "write the result here");
  add_common(cmd_pdmt, c_pdmt, false);

  // dat ---------------------------------------------------------------
  auto* cmd_dat = app.add_subcommand("dat", "derivability adjustment");
  cmd_dat->require_subcommand(1);
  Common c_dsearch;
  std::string dsearch_kind = "circ";
  std::vector<std::string> dsearch_premises;
  std::string dsearch_conclusion;
  int dsearch_max = 3, dsearch_pool_depth = 0;
  auto* cmd_dsearch = cmd_dat->add_subcommand(
      "search", "find a smallest recovery-marked assumption set");
  cmd_dsearch->add_option("--kind", dsearch_kind, "circ|circt|both")
      ->check(CLI::IsMember({"circ", "circt", "both"}));
  cmd_dsearch->add_option("-p,--premise", dsearch_premises);
  cmd_dsearch->add_option("-c,--conclusion", dsearch_conclusion)->required();
  cmd_dsearch->add_option("--max-size", dsearch_max);
  cmd_dsearch->add_option("--pool-depth", dsearch_pool_depth,
                          "widen the pool to all formulas of this depth");
  add_common(cmd_dsearch, c_dsearch, false);

  Common c_dverify;
  std::string dverify_kind = "circ";
  std::vector<std::string> dverify_premises, dverify_u, dverify_up;
  std::string dverify_conclusion;
  auto* cmd_dverify =
      cmd_dat->add_subcommand("verify", "verify a recovery witness");
  cmd_dverify->add_option("--kind", dverify_kind, "circ|circt|both")
      ->check(CLI::IsMember({"circ", "circt", "both"}));
  cmd_dverify->add_option("-p,--premise", dverify_premises);
  cmd_dverify->add_option("-c,--conclusion", dverify_conclusion)->required();
  cmd_dverify->add_option("-u,--upsilon", dverify_u, "circ-marked formula");
  cmd_dverify->add_option("--upsilon-prime", dverify_up,
                          "circ-prime-marked formula");
  add_common(cmd_dverify, c_dverify, false);

  // dugundji ------------------------------------------------------------
  auto* cmd_dug = app.add_subcommand("dugundji", "finite-matrix experiments");
  cmd_dug->require_subcommand(1);

  Common c_delta;
  int delta_n = 3;
  auto* cmd_delta = cmd_dug->add_subcommand("delta", "print delta(n)");
  cmd_delta->add_option("-n", delta_n)->required();
  add_common(cmd_delta, c_delta, false);

  Common c_gamma;
  int gamma_n = 3;
  auto* cmd_gamma = cmd_dug->add_subcommand("gamma", "print gamma(n)");
  cmd_gamma->add_option("-n", gamma_n)->required();
  add_common(cmd_gamma, c_gamma, false);

  Common c_falsify;
  int falsify_n = 3;
  std::string falsify_kind = "delta", falsify_formula;
  auto* cmd_falsify = cmd_dug->add_subcommand(
      "falsify", "find a falsifying valuation (seeded by the all-C+ pattern)");
  cmd_falsify->add_option("-n", falsify_n);
  cmd_falsify->add_option("--kind", falsify_kind, "delta|gamma")
      ->check(CLI::IsMember({"delta", "gamma"}));
  cmd_falsify->add_option("-f,--formula", falsify_formula,
                          "falsify an arbitrary formula instead");
  add_common(cmd_falsify, c_falsify);

  Common c_scan;
  int scan_size = 2, scan_n = 3;
  std::string scan_kind = "delta";
  uint64_t scan_budget = 50000;
  auto* cmd_scan = cmd_dug->add_subcommand(
      "scan", "enumerate deterministic matrices, check model => validates");
  cmd_scan->add_option("--size", scan_size, "2 (exhaustive) or 3 (sampled)")
      ->check(CLI::IsMember({2, 3}));
  cmd_scan->add_option("-n", scan_n);
  cmd_scan->add_option("--kind", scan_kind, "delta|gamma")
      ->check(CLI::IsMember({"delta", "gamma"}));
  cmd_scan->add_option("--budget", scan_budget, "size-3 sample count");
  add_common(cmd_scan, c_scan);

  Common c_conserve;
  int conserve_samples = 1000, conserve_depth = 6;
  auto* cmd_conserve = cmd_dug->add_subcommand(
      "conserve", "classical-vs-system validity on random {~,->} formulas");
  cmd_conserve->add_option("--samples", conserve_samples);
  cmd_conserve->add_option("--depth", conserve_depth);
  add_common(cmd_conserve, c_conserve);

  Common c_agree;
  int agree_samples = 500;
  auto* cmd_agree = cmd_dug->add_subcommand(
      "agree", "T45md deterministic matrix vs Nmatrix decision");
  cmd_agree->add_option("--samples", agree_samples);
  add_common(cmd_agree, c_agree, false);

  // export-tables ---------------------------------------------------------
  Common c_export;
  std::string export_dir, export_format = "both";
  auto* cmd_export = app.add_subcommand(
      "export-tables", "emit all built-in tables plus the deviation report");
  cmd_export->add_option("-o,--out", export_dir, "output directory");
  cmd_export->add_option("--format", export_format, "grid|nmx|both")
      ->check(CLI::IsMember({"grid", "nmx", "both"}));
  add_common(cmd_export, c_export, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitHolds : kExitUsage;
  }

  // ---- dispatch ----
  if (*cmd_parse) {
    Formula f = parse(parse_text);
    if (c_parse.json) {
      ordered_json j;
      j["input"] = parse_text;
      j["formula"] = render(f);
      ordered_json subs = ordered_json::array();
      for (Formula g : subformulas(f)) subs.push_back(render(g));
      j["subformulas"] = subs;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << render(f) << "\n";
    }
    return kExitHolds;
  }

  if (*cmd_table) {
    auto conn = parse_connective(table_conn);
    if (!conn) throw CLI::ValidationError("unknown connective " + table_conn);
    const Nmatrix& nm = builtin(system_of(c_table), topts_of(c_table));
    if (c_table.json) {
      ordered_json j;
      j["system"] = nm.name;
      j["connective"] = connective_name(*conn);
      ordered_json cells = ordered_json::object();
      nm.algebra.domain.for_each([&](TruthValue x) {
        if (connective_arity(*conn) == 1) {
          cells[std::string(value_name(x))] =
              nm.algebra.cell(*conn, x).to_string();
          return;
        }
        nm.algebra.domain.for_each([&](TruthValue y) {
          cells[std::string(value_name(x)) + " " + std::string(value_name(y))] =
              nm.algebra.cell(*conn, x, y).to_string();
        });
      });
      j["cells"] = cells;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << nm.name << " " << connective_name(*conn) << "\n";
      nm.algebra.domain.for_each([&](TruthValue x) {
        if (connective_arity(*conn) == 1) {
          std::cout << "  " << value_name(x) << " : "
                    << nm.algebra.cell(*conn, x).to_string() << "\n";
          return;
        }
        nm.algebra.domain.for_each([&](TruthValue y) {
          std::cout << "  " << value_name(x) << " " << value_name(y) << " : "
                    << nm.algebra.cell(*conn, x, y).to_string() << "\n";
        });
      });
    }
    return kExitHolds;
  }

  if (*cmd_derive) {
    Schema skel = parse_schema(derive_skeleton);
    const Nmatrix& nm = builtin(system_of(c_derive), topts_of(c_derive));
    DerivedTable dt = derived_table(nm, skel);
    ordered_json cells = ordered_json::object();
    std::vector<TruthValue> members;
    nm.algebra.domain.for_each([&](TruthValue v) { members.push_back(v); });
    std::vector<size_t> idx(dt.metavars.size(), 0);
    for (;;) {
      std::vector<TruthValue> args;
      std::string key;
      for (size_t k = 0; k < idx.size(); ++k) {
        args.push_back(members[idx[k]]);
        if (k) key += ' ';
        key += value_name(args.back());
      }
      cells[key] = dt.at(args).to_string();
      size_t i = 0;
      while (i < idx.size() && ++idx[i] == members.size()) idx[i++] = 0;
      if (i == idx.size()) break;
      if (idx.empty()) break;
    }
    if (c_derive.json) {
      ordered_json j;
      j["system"] = nm.name;
      j["skeleton"] = render(skel);
      j["metavars"] = dt.metavars;
      j["cells"] = cells;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "derived table of " << render(skel) << " over " << nm.name
                << "\n";
      for (auto& [k, v] : cells.items())
        std::cout << "  " << k << " : " << v.get<std::string>() << "\n";
    }
    return kExitHolds;
  }

  if (*cmd_valid) return run_entail(c_valid, {}, parse(valid_text));
  if (*cmd_counter)
    return run_entail(c_counter, read_premises(counter_premises),
                      parse(counter_text));
  if (*cmd_entail)
    return run_entail(c_entail, read_premises(entail_premises),
                      parse(entail_conclusion));

  if (*cmd_audit)
    return run_audit(c_audit, audit_all, audit_km_circ, audit_schema);

  if (*cmd_lemmas) {
    auto checks = verify_lemma_suite();
    bool ok = true;
    if (c_lemmas.json) {
      ordered_json arr = ordered_json::array();
      for (const LemmaCheck& l : checks) {
        ordered_json j;
        j["name"] = l.name;
        j["statement"] = l.statement;
        j["holds"] = l.holds;
        arr.push_back(j);
        ok = ok && l.holds;
      }
      std::cout << arr.dump(2) << "\n";
    } else {
      for (const LemmaCheck& l : checks) {
        std::cout << l.name << ": " << l.statement << " -- "
                  << (l.holds ? "holds" : "FAILS") << "\n";
        ok = ok && l.holds;
      }
    }
    return ok ? kExitHolds : kExitFails;
  }

  if (*cmd_pcheck) {
    Derivation d = parse_derivation(slurp(pcheck_file));
    auto err = check_derivation(d);
    if (c_pcheck.json) {
      ordered_json j;
      j["file"] = pcheck_file;
      j["system"] = system_name(d.system);
      j["steps"] = d.steps.size();
      j["ok"] = !err.has_value();
      if (err) {
        j["error"] = {{"step", err->index},
                      {"reason", std::string(step_error_reason_name(err->reason))},
                      {"detail", err->detail}};
      }
      std::cout << j.dump(2) << "\n";
    } else if (err) {
      std::cout << "step " << err->index << ": "
                << step_error_reason_name(err->reason) << " (" << err->detail
                << ")\n";
    } else {
      std::cout << "ok (" << d.steps.size() << " steps, conclusion "
                << render(d.conclusion()) << ")\n";
    }
    return err ? kExitFails : kExitHolds;
  }

  if (*cmd_pdmt) {
    Derivation d = parse_derivation(slurp(pdmt_file));
    if (d.hypotheses.empty())
      throw Error("derivation has no hypothesis to discharge");
    Formula hyp = pdmt_hyp.empty() ? d.hypotheses.back() : parse(pdmt_hyp);
    Derivation out = deduction_transform(d, hyp);
    std::string text = render_derivation(out);
    if (!pdmt_out.empty())
      std::ofstream(pdmt_out) << text;
    else
      std::cout << text;
    return kExitHolds;
  }

  auto parse_kind = [](const std::string& k) {
    auto kind = parse_dat_kind(k);
    if (!kind) throw CLI::ValidationError("unknown dat kind '" + k + "'");
    return *kind;
  };

  if (*cmd_dsearch) {
    DatQuery q{parse_kind(dsearch_kind), read_premises(dsearch_premises),
               parse(dsearch_conclusion)};
    DatSearchOptions o;
    o.max_size = dsearch_max;
    o.pool_depth = dsearch_pool_depth;
    DatSearchResult r = dat_search(q, o);
    if (c_dsearch.json) {
      std::cout << dat_to_json(q, r) << "\n";
    } else if (!r.source_holds) {
      std::cout << "source-side consequence fails in "
                << system_name(dat_source(q.kind))
                << "; no witness can exist\n";
    } else if (r.witness) {
      std::cout << "upsilon = {";
      for (size_t i = 0; i < r.witness->upsilon.size(); ++i)
        std::cout << (i ? ", " : "") << render(r.witness->upsilon[i]);
      std::cout << "}  upsilon' = {";
      for (size_t i = 0; i < r.witness->upsilon_prime.size(); ++i)
        std::cout << (i ? ", " : "") << render(r.witness->upsilon_prime[i]);
      std::cout << "}\n";
    } else {
      std::cout << "no witness within max-size\n";
    }
    return r.witness ? kExitHolds : kExitFails;
  }

  if (*cmd_dverify) {
    DatQuery q{parse_kind(dverify_kind), read_premises(dverify_premises),
               parse(dverify_conclusion)};
    DatWitness w;
    for (const std::string& s : dverify_u) w.upsilon.push_back(parse(s));
    for (const std::string& s : dverify_up)
      w.upsilon_prime.push_back(parse(s));
    bool ok = dat_verify(q, w);
    if (c_dverify.json) {
      ordered_json j;
      j["kind"] = dat_kind_name(q.kind);
      j["verified"] = ok;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << (ok ? "verified" : "not sufficient") << "\n";
    }
    return ok ? kExitHolds : kExitFails;
  }

  auto print_dug = [&](const DugundjiFormula& df, const Common& cc) {
    if (cc.json) {
      ordered_json j;
      j["n"] = df.n;
      j["kind"] = df.kind == DugundjiKind::Delta ? "delta" : "gamma";
      j["formula"] = render(df.formula);
      j["sugared"] = render_sugared(df.formula);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << render_sugared(df.formula) << "\n";
    }
  };
  if (*cmd_delta) {
    print_dug(build_delta(delta_n), c_delta);
    return kExitHolds;
  }
  if (*cmd_gamma) {
    print_dug(build_gamma(gamma_n), c_gamma);
    return kExitHolds;
  }

  if (*cmd_falsify) {
    SystemId id = system_of(c_falsify);
    std::optional<Valuation> w;
    std::string shown;
    if (!falsify_formula.empty()) {
      Formula f = parse(falsify_formula);
      shown = render(f);
      w = falsify(id, f);
    } else {
      DugundjiFormula df = falsify_kind == "gamma" ? build_gamma(falsify_n)
                                                   : build_delta(falsify_n);
      shown = render_sugared(df.formula);
      w = falsify(id, df);
    }
    if (c_falsify.json) {
      ordered_json j;
      j["system"] = system_name(id);
      j["formula"] = shown;
      j["falsified"] = w.has_value();
      ordered_json wit = ordered_json::object();
      if (w)
        for (size_t i = 0; i < w->nodes.size(); ++i)
          wit[render(w->nodes[i])] = value_name(w->values[i]);
      j["witness"] = wit;
      std::cout << j.dump(2) << "\n";
    } else if (w) {
      std::cout << "falsified:\n";
      print_witness_text(*w);
    } else {
      std::cout << "valid\n";
    }
    return w ? kExitFails : kExitHolds;
  }

  if (*cmd_scan) {
    SystemId id = system_of(c_scan);
    DugundjiFormula df =
        scan_kind == "gamma" ? build_gamma(scan_n) : build_delta(scan_n);
    ScanOptions o;
    o.seed = c_scan.seed;
    o.budget = scan_budget;
    o.jobs = c_scan.jobs;
    ScanReport r = scan_matrices(scan_size, id, df.formula, o);
    if (c_scan.json) {
      std::cout << scan_to_json(r) << "\n";
    } else {
      std::cout << "size " << r.size << " scan over " << r.system
                << ": candidates " << r.candidates << ", admissible "
                << r.admissible << ", models " << r.models << ", violations "
                << r.violations.size() << "\n";
    }
    return r.violations.empty() ? kExitHolds : kExitFails;
  }

  if (*cmd_conserve) {
    ConservativityReport r = conservativity_check(
        system_of(c_conserve), conserve_samples, conserve_depth,
        c_conserve.seed);
    if (c_conserve.json)
      std::cout << conservativity_to_json(r) << "\n";
    else
      std::cout << r.system << ": " << r.discrepancies << " discrepancies in "
                << r.samples << " samples\n";
    return r.discrepancies == 0 ? kExitHolds : kExitFails;
  }

  if (*cmd_agree) {
    AgreementReport r = t45md_agreement(agree_samples, c_agree.seed);
    if (c_agree.json)
      std::cout << agreement_to_json(r) << "\n";
    else
      std::cout << r.disagreements << " disagreements in " << r.samples
                << " samples\n";
    return r.disagreements == 0 ? kExitHolds : kExitFails;
  }

  if (*cmd_export) return run_export(c_export, export_dir, export_format);

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const mnm::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what();
    if (!e.expected.empty()) {
      std::cerr << " (expected ";
      for (size_t i = 0; i < e.expected.size(); ++i)
        std::cerr << (i ? ", " : "") << e.expected[i];
      std::cerr << ")";
    }
    std::cerr << "\n";
    return kExitUsage;
  } catch (const mnm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
