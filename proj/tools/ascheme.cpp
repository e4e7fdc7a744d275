#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ascheme/automorphism.hpp"
#include "ascheme/io.hpp"

using nlohmann::json;

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

json json_of_conditions(const ascheme::ConditionFlags& f) {
  return {{"A", f.a}, {"B", f.b}, {"con_three", f.con_three}};
}

json json_of_report(const ascheme::ConstructionReport& rep) {
  json j{{"kind", rep.kind},
         {"p", rep.p},
         {"points", rep.scheme.order()},
         {"rank", rep.scheme.rank()},
         {"delta", rep.delta_value},
         {"conditions", json_of_conditions(rep.conditions)}};
  if (!rep.relation_labels.empty()) j["relation_labels"] = rep.relation_labels;
  return j;
}

void print_report(const ascheme::ConstructionReport& rep) {
  std::cout << rep.kind << ": " << rep.scheme.order() << " points, " << rep.scheme.rank()
            << " relations, delta=" << rep.delta_value << "\n"
            << "conditions: A=" << (rep.conditions.a ? "yes" : "no")
            << " B=" << (rep.conditions.b ? "yes" : "no")
            << " con_three=" << (rep.conditions.con_three ? "yes" : "no") << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ascheme::Error("cannot open " + path);
  json j;
  is >> j;
  return j;
}

ascheme::Scheme load_scheme(const std::string& path, ascheme::VerifyMode mode) {
  ascheme::RelationTable t = ascheme::read_scheme_file(path);
  ascheme::VerifyResult vr = ascheme::verify_scheme(t, mode);
  if (!vr.ok()) {
    std::cerr << path << " is not an association scheme:\n";
    for (const auto& v : vr.violations)
      std::cerr << "  axiom " << v.axiom << ": " << v.detail << "\n";
    throw ascheme::Error("verification failed");
  }
  return *vr.scheme;
}

int infer_p(const ascheme::Scheme& s, int flag_p) {
  if (flag_p > 0) return flag_p;
  ascheme::RelationSubset res = ascheme::thin_residue(s);
  for (int q = 2; q * q <= static_cast<int>(res.size()); ++q)
    if (ascheme::is_prime(q) && q * q == static_cast<int>(res.size())) return q;
  throw ascheme::Error("cannot infer p from the thin residue; pass --p");
}

struct Options {
  bool as_json = false;
  std::string kind, group_file, lc_file, space, spec_file, out, over = "thin-residue";
  std::string mode = "full";
  int p = 0, delta = 0, max_points = 0;
  bool allow_even = false, algebraic = false;
};

ascheme::VerifyMode s_mode(const Options& opt) {
  return opt.mode == "representative" ? ascheme::VerifyMode::representative
                                      : ascheme::VerifyMode::full;
}

int cmd_construct(const Options& opt) {
  json spec;
  if (!opt.spec_file.empty()) {
    spec = read_json_file(opt.spec_file);
  } else {
    if (opt.kind.empty()) throw ascheme::Error("construct needs --kind or --spec");
    spec["kind"] = opt.kind;
    spec["p"] = opt.p;
    if (opt.delta > 0) spec["delta"] = opt.delta;
    if (!opt.group_file.empty()) spec["group"] = read_json_file(opt.group_file);
    if (!opt.lc_file.empty()) spec["lc"] = read_json_file(opt.lc_file);
    if (!opt.space.empty()) {
      if (opt.space == "fano" || opt.space == "triangle")
        spec["space"] = opt.space;
      else
        spec["space"] = read_json_file(opt.space);
    }
    if (opt.allow_even) spec["allow_even"] = true;
  }
  ascheme::BuildOptions build = ascheme::BuildOptions::defaults();
  if (opt.max_points > 0) build.max_points = opt.max_points;
  ascheme::ConstructionReport rep = ascheme::run_construction(spec, build);
  if (opt.as_json)
    std::cout << json_of_report(rep).dump(2) << "\n";
  else
    print_report(rep);
  if (!opt.out.empty()) {
    std::ostringstream meta;
    meta << "kind=" << rep.kind << " p=" << rep.p << " delta=" << rep.delta_value
         << " points=" << rep.scheme.order() << " rank=" << rep.scheme.rank();
    ascheme::write_scheme_file(opt.out, rep.scheme.table, {meta.str()});
    if (!opt.as_json) std::cout << "written to " << opt.out << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& file, const Options& opt) {
  ascheme::RelationTable t = ascheme::read_scheme_file(file);
  ascheme::VerifyMode mode =
      opt.mode == "representative" ? ascheme::VerifyMode::representative : ascheme::VerifyMode::full;
  ascheme::VerifyResult vr = ascheme::verify_scheme(t, mode);
  if (opt.as_json) {
    json j{{"ok", vr.ok()}, {"points", t.n}, {"relations", t.r}};
    json viol = json::array();
    for (const auto& v : vr.violations) viol.push_back({{"axiom", v.axiom}, {"detail", v.detail}});
    j["violations"] = viol;
    std::cout << j.dump(2) << "\n";
  } else if (vr.ok()) {
    std::cout << "ok: association scheme on " << t.n << " points with " << t.r << " relations\n";
  } else {
    std::cout << "not an association scheme:\n";
    for (const auto& v : vr.violations)
      std::cout << "  axiom " << v.axiom << ": " << v.detail << "\n";
  }
  return vr.ok() ? 0 : kExitVerification;
}

int cmd_analyze(const std::string& file, const Options& opt) {
  ascheme::Scheme s = load_scheme(file, s_mode(opt));
  ascheme::RelationSubset radical = ascheme::thin_radical(s);
  ascheme::RelationSubset residue = ascheme::thin_residue(s);
  long long dv = ascheme::delta(s);
  json j{{"points", s.order()},
         {"relations", s.rank()},
         {"valencies", s.valency},
         {"thin_radical", radical.members},
         {"thin_residue", residue.members},
         {"delta", dv}};
  std::string cond_note;
  try {
    int p = infer_p(s, opt.p);
    ascheme::ConditionFlags f = ascheme::check_conditions(s, p);
    j["p"] = p;
    j["conditions"] = json_of_conditions(f);
  } catch (const ascheme::Error& e) {
    cond_note = e.what();
    j["conditions"] = nullptr;
  }
  if (opt.as_json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "points: " << s.order() << "\nrelations: " << s.rank() << "\nvalencies:";
  for (int v : s.valency) std::cout << " " << v;
  std::cout << "\nthin radical: " << radical.size() << " relations\nthin residue: "
            << residue.size() << " relations\ndelta: " << dv << "\n";
  if (j["conditions"].is_null()) {
    std::cout << "conditions: skipped (" << cond_note << ")\n";
  } else {
    std::cout << "conditions (p=" << j["p"] << "): A=" << (j["conditions"]["A"] ? "yes" : "no")
              << " B=" << (j["conditions"]["B"] ? "yes" : "no")
              << " con_three=" << (j["conditions"]["con_three"] ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_aut(const std::string& file, const Options& opt) {
  ascheme::Scheme s = load_scheme(file, s_mode(opt));
  ascheme::AutomorphismReport rep = ascheme::automorphisms(s);
  if (opt.as_json) {
    json j{{"order", rep.order.str()},
           {"generators", rep.generators},
           {"base_orbit_sizes", rep.base_orbit_sizes}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "automorphism group order: " << rep.order.str() << " ("
              << rep.generators.size() << " generators)\n";
  }
  return 0;
}

int cmd_schurian(const std::string& file, const Options& opt) {
  ascheme::Scheme s = load_scheme(file, s_mode(opt));
  ascheme::SchurianReport rep = ascheme::is_schurian(s);
  if (opt.as_json) {
    json j{{"schurian", rep.schurian},
           {"transitive", rep.transitive},
           {"pair_orbits", rep.pair_orbits},
           {"relations", s.rank()},
           {"aut_order", rep.aut.order.str()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "schurian: " << (rep.schurian ? "yes" : "no")
              << " (transitive: " << (rep.transitive ? "yes" : "no")
              << ", pair orbits: " << rep.pair_orbits << ", relations: " << s.rank()
              << ", |Aut|: " << rep.aut.order.str() << ")\n";
  }
  return 0;
}

int cmd_iso(const std::string& file_a, const std::string& file_b, const Options& opt) {
  ascheme::Scheme a = load_scheme(file_a, s_mode(opt));
  ascheme::Scheme b = load_scheme(file_b, s_mode(opt));
  if (opt.algebraic) {
    auto m = ascheme::are_algebraically_isomorphic(a, b);
    if (opt.as_json) {
      json j{{"algebraically_isomorphic", m.has_value()}};
      if (m) j["relation_map"] = *m;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "algebraically isomorphic: " << (m ? "yes" : "no") << "\n";
    }
    return 0;
  }
  auto w = ascheme::are_isomorphic(a, b);
  if (opt.as_json) {
    json j{{"isomorphic", w.has_value()}};
    if (w) {
      j["point_map"] = w->point_map;
      j["relation_map"] = w->relation_map;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "isomorphic: " << (w ? "yes" : "no") << "\n";
  }
  return 0;
}

int cmd_factor(const std::string& file, const Options& opt) {
  ascheme::Scheme s = load_scheme(file, s_mode(opt));
  ascheme::RelationSubset over;
  if (opt.over == "thin-residue") {
    over = ascheme::thin_residue(s);
  } else {
    json j = read_json_file(opt.over);
    over = ascheme::classify_subset(s, j.at("members").get<std::vector<int>>());
  }
  ascheme::Scheme f = ascheme::factor_scheme(s, over);
  if (opt.as_json) {
    json j{{"over", over.members}, {"points", f.order()}, {"relations", f.rank()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "factor scheme: " << f.order() << " points, " << f.rank() << " relations\n";
  }
  if (!opt.out.empty()) ascheme::write_scheme_file(opt.out, f.table);
  return 0;
}

int cmd_pls(const std::string& file, const Options& opt) {
  ascheme::Scheme s = load_scheme(file, s_mode(opt));
  ascheme::ExtractResult ex = ascheme::extract_incidence(s);
  ascheme::IncidenceClass cls = ascheme::classify_incidence(ex.structure);
  if (opt.as_json) {
    json j{{"p", ex.p},
           {"points", ex.structure.points},
           {"lines", ex.structure.lines},
           {"partial_linear", cls.partial_linear},
           {"linear", cls.linear},
           {"max_lines_per_point", cls.max_lines_per_point},
           {"asymmetric_pairs", ex.stab.asymmetric.size()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "incidence structure on " << ex.structure.points << " blocks (p=" << ex.p
              << "):\n";
    for (const auto& l : ex.structure.lines) {
      std::cout << "  line:";
      for (int q : l) std::cout << " " << q;
      std::cout << "\n";
    }
    std::cout << "partial linear: " << (cls.partial_linear ? "yes" : "no")
              << ", linear: " << (cls.linear ? "yes" : "no")
              << ", max lines per point: " << cls.max_lines_per_point << "\n";
  }
  return 0;
}

int cmd_tables(const Options& opt) {
  std::vector<ascheme::TableRow> rows = ascheme::reproduce_tables(opt.p, opt.out);
  if (opt.as_json) {
    json arr = json::array();
    for (const auto& r : rows) {
      json j{{"delta", r.delta},   {"points", r.points}, {"mark", r.mark},
             {"witness", r.witness}, {"millis", r.millis}};
      if (!r.file.empty()) j["file"] = r.file;
      if (!r.note.empty()) j["note"] = r.note;
      arr.push_back(j);
    }
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  std::cout << "delta  |X|  mark  result\n";
  for (const auto& r : rows) {
    std::ostringstream line;
    line << r.delta << "\t" << r.points << "\t" << r.mark << "\t";
    if (!r.witness.empty())
      line << "constructed via " << r.witness << " (" << r.witness_points << " points, "
           << r.millis << " ms)";
    else
      line << "no witness";
    if (!r.note.empty()) line << " [" << r.note << "]";
    if (!r.file.empty()) line << " -> " << r.file;
    std::cout << line.str() << "\n";
  }
  return 0;
}

// Best-effort import of a bare matrix: whitespace-separated integers, row
// count inferred from the token count, then canonicalized and verified.
int cmd_import(const std::string& file, const Options& opt) {
  std::ifstream is(file);
  if (!is) throw ascheme::Error("cannot open " + file);
  std::vector<int> vals;
  std::string tok;
  while (is >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    vals.push_back(std::stoi(tok));
  }
  int n = static_cast<int>(std::sqrt(static_cast<double>(vals.size())));
  while (static_cast<long long>(n) * n > static_cast<long long>(vals.size())) --n;
  if (n < 1 || static_cast<long long>(n) * n != static_cast<long long>(vals.size()))
    throw ascheme::Error("token count is not a perfect square");
  int r = *std::max_element(vals.begin(), vals.end()) + 1;
  ascheme::RelationTable t(n, r);
  t.cell = vals;
  ascheme::RelationTable canon = ascheme::canonicalize(t);
  ascheme::VerifyResult vr = ascheme::verify_scheme(canon, ascheme::VerifyMode::full);
  if (!vr.ok()) {
    std::cerr << "imported table is not an association scheme:\n";
    for (const auto& v : vr.violations)
      std::cerr << "  axiom " << v.axiom << ": " << v.detail << "\n";
    return kExitVerification;
  }
  if (!opt.out.empty())
    ascheme::write_scheme_file(opt.out, canon, {"imported from " + file});
  else
    ascheme::write_scheme(std::cout, canon);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"association schemes with an elementary abelian rank-2 thin residue"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("--json", opt.as_json, "emit machine-readable JSON");

  std::string file_a, file_b;

  CLI::App* construct = app.add_subcommand("construct", "build a scheme from a construction");
  construct->add_option("--kind", opt.kind, "thm34|sec41|sec42|thm51|extension");
  construct->add_option("--p", opt.p, "prime p");
  construct->add_option("--delta", opt.delta, "residue index (cyclic group) for thm34");
  construct->add_option("--group", opt.group_file, "group descriptor JSON file");
  construct->add_option("--lc", opt.lc_file, "explicit L/C maps JSON file");
  construct->add_option("--space", opt.space, "fano, triangle, or an incidence JSON file");
  construct->add_flag("--allow-even", opt.allow_even, "permit p=2 in sec42");
  construct->add_option("--spec", opt.spec_file, "full construction descriptor JSON file");
  construct->add_option("--out", opt.out, "write the scheme to this file");
  construct->add_option("--max-points", opt.max_points, "override the size guard");

  CLI::App* verify = app.add_subcommand("verify", "check the scheme axioms on a file");
  verify->add_option("file", file_a, "scheme file")->required();
  verify->add_option("--mode", opt.mode, "full|representative");

  CLI::App* analyze = app.add_subcommand("analyze", "radical, residue, delta and conditions");
  analyze->add_option("file", file_a, "scheme file")->required();
  analyze->add_option("--p", opt.p, "prime for the condition checks");
  analyze->add_option("--mode", opt.mode, "full|representative");

  CLI::App* aut = app.add_subcommand("aut", "automorphism group order");
  aut->add_option("file", file_a, "scheme file")->required();
  aut->add_option("--mode", opt.mode, "full|representative");

  CLI::App* schurian = app.add_subcommand("schurian", "test schurity");
  schurian->add_option("file", file_a, "scheme file")->required();
  schurian->add_option("--mode", opt.mode, "full|representative");

  CLI::App* iso = app.add_subcommand("iso", "isomorphism between two scheme files");
  iso->add_option("a", file_a, "first scheme file")->required();
  iso->add_option("b", file_b, "second scheme file")->required();
  iso->add_flag("--algebraic", opt.algebraic, "relation-level comparison only");
  iso->add_option("--mode", opt.mode, "full|representative");

  CLI::App* factor = app.add_subcommand("factor", "factor scheme over a closed subset");
  factor->add_option("file", file_a, "scheme file")->required();
  factor->add_option("--over", opt.over, "thin-residue or a JSON file with members");
  factor->add_option("--out", opt.out, "write the factor scheme to this file");
  factor->add_option("--mode", opt.mode, "full|representative");

  CLI::App* pls = app.add_subcommand("pls", "extract the incidence structure on residue blocks");
  pls->add_option("file", file_a, "scheme file")->required();
  pls->add_option("--mode", opt.mode, "full|representative");

  CLI::App* tables = app.add_subcommand("tables", "reproduce the reference existence tables");
  tables->add_option("--p", opt.p, "2 or 3")->required();
  tables->add_option("--out", opt.out, "write witness scheme files to this directory");

  CLI::App* import = app.add_subcommand("import", "canonicalize a bare relation matrix");
  import->add_option("file", file_a, "matrix file")->required();
  import->add_option("--out", opt.out, "write the canonical scheme to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (construct->parsed()) return cmd_construct(opt);
    if (verify->parsed()) return cmd_verify(file_a, opt);
    if (analyze->parsed()) return cmd_analyze(file_a, opt);
    if (aut->parsed()) return cmd_aut(file_a, opt);
    if (schurian->parsed()) return cmd_schurian(file_a, opt);
    if (iso->parsed()) return cmd_iso(file_a, file_b, opt);
    if (factor->parsed()) return cmd_factor(file_a, opt);
    if (pls->parsed()) return cmd_pls(file_a, opt);
    if (tables->parsed()) return cmd_tables(opt);
    if (import->parsed()) return cmd_import(file_a, opt);
  } catch (const ascheme::BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitVerification;
  } catch (const ascheme::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return 0;
}
