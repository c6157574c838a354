#include <fstream>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "audit.hpp"
#include "instance.hpp"
#include "voacoh/lattice.hpp"
#include "voacoh/virasoro.hpp"
#include "voacoh/virasoro_systems.hpp"
#include "voacoh/zhu.hpp"

using namespace voacoh;
using namespace voacoh::tools;

namespace {

constexpr int kUsageError = 3;

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw SpecError("cannot write " + out);
  f << text << "\n";
}

int fail_json(const std::string& msg, const std::string& out) {
  std::cerr << "error: " << msg << "\n";
  try {
    emit(json{{"error", msg}}.dump(2), out);
  } catch (const SpecError&) {
  }
  return kUsageError;
}

// "L-1 L-2" or "L(-1)L(-2)" -> {-1, -2}
std::vector<int> parse_modes(const std::string& text) {
  std::vector<int> out;
  std::regex tok(R"(L\(?\s*(-?\d+)\s*\)?)");
  std::string rest = std::regex_replace(text, tok, "");
  if (rest.find_first_not_of(" \t,") != std::string::npos) throw SpecError("cannot parse mode word \"" + text + "\"");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), tok); it != std::sregex_iterator(); ++it)
    out.push_back(std::stoi((*it)[1]));
  return out;
}

Scalar flag_scalar(const std::string& s, const char* what) { return parse_scalar(json(s), what); }

// --- h1 ---

struct H1Args {
  std::string spec, out, expect;
  std::optional<int> depth;
  bool json_flag = false;
};

int cmd_h1(const H1Args& a) {
  Instance inst;
  try {
    inst = load_instance_file(a.spec, a.depth);
    if (!a.expect.empty()) {
      if (a.expect != "equal" && a.expect != "counterexample") throw SpecError("--expect must be equal or counterexample");
      inst.expect = a.expect;
    }
  } catch (const SpecError& e) {
    return fail_json(e.what(), a.out);
  }
  CohomologyReport rep;
  try {
    rep = certify(*inst.algebra, *inst.module, inst.grading, inst.depth);
  } catch (const TruncationError& e) {
    return fail_json(std::string("truncation: ") + e.what(), a.out);
  } catch (const ModuleError& e) {
    return fail_json(e.what(), a.out);
  }
  json j = report_json(inst, rep);
  if (!inst.expect.empty()) j["expect"] = inst.expect;
  emit(j.dump(2), a.out);
  switch (rep.status) {
    case Status::Inconclusive:
      return 2;
    case Status::CertifiedEqual:
      return inst.expect == "counterexample" ? 1 : 0;
    case Status::Counterexample:
      return inst.expect == "counterexample" ? 0 : 1;
  }
  return 1;
}

// --- audit ---

int cmd_audit(const std::string& id, bool as_json, const std::string& out, bool slow, bool list) {
  if (list) {
    for (const auto& c : audit_case_ids()) std::cout << c << "\n";
    return 0;
  }
  if (!id.empty()) {
    auto ids = audit_case_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      std::cerr << "unknown case " << id << "\n";
      return kUsageError;
    }
  }
  auto results = run_audit({id, slow});
  bool ok = true;
  for (const auto& r : results) ok = ok && r.consistent();
  if (as_json) {
    emit(audit_json(results).dump(2), out);
  } else {
    std::ostringstream os;
    size_t pass = 0, disc = 0, skip = 0, bad = 0;
    for (const auto& r : results) {
      for (const auto& l : r.lines) {
        os << format_line(r.id, l) << "\n";
        pass += l.status == "PASS";
        disc += l.status == "DISCREPANCY";
        skip += l.status == "SKIP";
        bad += l.status == "INCONSISTENT";
      }
      if (!r.error.empty()) {
        os << "[" << r.id << "] ERROR: " << r.error << "\n";
        ++bad;
      }
    }
    os << pass << " pass, " << disc << " discrepancies with the printed values, " << skip << " skipped, " << bad
       << " inconsistent";
    emit(os.str(), out);
  }
  return ok ? 0 : 1;
}

// --- act ---

int cmd_act(const std::string& algebra, const std::string& c, const std::string& h, const std::string& kind,
            const std::string& op, const std::string& vec, bool as_json) {
  if (algebra != "virasoro") throw SpecError("act supports --algebra virasoro");
  auto ops = parse_modes(op), word = parse_modes(vec);
  if (ops.empty()) throw SpecError("--op names no mode");
  int depth = 2;
  for (int n : word) depth += std::max(0, -n);
  for (int n : ops) depth += std::max(0, -n);
  ModuleKind k = kind == "simple" ? ModuleKind::Simple : ModuleKind::Verma;
  if (kind != "simple" && kind != "verma") throw SpecError("--kind must be verma or simple");
  VirasoroModule m(flag_scalar(c, "c"), flag_scalar(h, "h"), k, depth);
  Vector v(Key{});
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = m.normal_form(m.L(*it, v));
  Vector r = v;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) r = m.normal_form(m.L(*it, r));
  if (as_json)
    std::cout << json{{"input", m.render(v)}, {"result", vector_json(m, r)}, {"rendered", m.render(r)}}.dump(2) << "\n";
  else
    std::cout << m.render(r) << "\n";
  return 0;
}

// --- gram / kac ---

int cmd_gram(int level, const std::string& c, const std::string& h, bool as_json) {
  if (level < 0) throw SpecError("--level must be nonnegative");
  VirasoroModule m(flag_scalar(c, "c"), flag_scalar(h, "h"), ModuleKind::Verma, level);
  auto keys = m.cover_basis(level);
  auto g = m.gram(level).dense();
  if (as_json) {
    json rows = json::array();
    for (const auto& row : g) {
      json r = json::array();
      for (const auto& x : row) r.push_back(x.str());
      rows.push_back(r);
    }
    json labels = json::array();
    for (const auto& k : keys) labels.push_back(m.key_str(k));
    std::cout << json{{"level", level}, {"basis", labels}, {"gram", rows}}.dump(2) << "\n";
    return 0;
  }
  std::vector<std::string> labels;
  size_t w = 0;
  for (const auto& k : keys) {
    labels.push_back(m.key_str(k));
    w = std::max(w, labels.back().size());
  }
  for (const auto& row : g)
    for (const auto& x : row) w = std::max(w, x.str().size());
  std::cout << std::setw(w) << "" ;
  for (const auto& l : labels) std::cout << "  " << std::setw(w) << l;
  std::cout << "\n";
  for (size_t i = 0; i < g.size(); ++i) {
    std::cout << std::setw(w) << labels[i];
    for (const auto& x : g[i]) std::cout << "  " << std::setw(w) << x.str();
    std::cout << "\n";
  }
  return 0;
}

int cmd_kac(int level, const std::string& c, const std::string& h, bool factor, bool as_json) {
  if (level < 0) throw SpecError("--level must be nonnegative");
  Scalar det = kac_determinant(level, false, flag_scalar(c, "c"), flag_scalar(h, "h"));
  if (!factor) {
    if (as_json)
      std::cout << json{{"level", level}, {"determinant", det.str()}}.dump(2) << "\n";
    else
      std::cout << det.str() << "\n";
    return 0;
  }
  if (c != "c" || h != "h") throw SpecError("--factor works on the symbolic determinant only");
  auto kc = kac_factorization(level);
  json fs = json::array();
  for (const auto& f : kc.factors)
    fs.push_back({{"r", f.r}, {"s", f.s}, {"phi", kac_factor(f.r, f.s).str()}, {"expected", f.expected}, {"found", f.found}});
  if (as_json) {
    std::cout << json{{"level", level}, {"determinant", det.str()}, {"factors", fs}, {"cofactor", kc.cofactor.str()},
                      {"ok", kc.ok}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << det.str() << "\n";
    for (const auto& f : kc.factors)
      std::cout << "  Phi_{" << f.r << "," << f.s << "}^" << f.found << " (expected " << f.expected
                << "): " << kac_factor(f.r, f.s).str() << "\n";
    std::cout << "  cofactor " << kc.cofactor.str() << (kc.ok ? "" : "  [MISMATCH]") << "\n";
  }
  return kc.ok ? 0 : 1;
}

// --- zhu ---

struct ZhuArgs {
  std::string check = "dims";
  std::string spec, lattice, form = "module";
  int cutoff = 4, level = 0, max_weight = 3, sign = 1;
  bool as_json = false;
};

int cmd_zhu(const ZhuArgs& a) {
  ZhuOptions o;
  o.cutoff = a.cutoff;
  o.level = a.level;
  int need = a.cutoff + a.level + 2 + 4;
  Instance inst;
  std::unique_ptr<LatticeVOA> lat;
  const VertexAlgebra* v = nullptr;
  const GradedModule* w = nullptr;
  Grading g = Grading::canonical();
  if (!a.lattice.empty()) {
    if (a.check != "dims") throw SpecError("--lattice supports --check dims");
    EvenLattice l = a.lattice == "a1"   ? EvenLattice::a1()
                    : a.lattice == "a2" ? EvenLattice::a2()
                    : a.lattice == "e8" ? EvenLattice::e8()
                                        : throw SpecError("--lattice must be a1, a2 or e8");
    lat = std::make_unique<LatticeVOA>(l, a.cutoff + a.level + 2);
    if (a.lattice == "e8") o.only_sectors = {Key(8, 0)};
    v = lat.get();
  } else {
    json spec = json{{"algebra", {{"algebra", "virasoro"}, {"c", "1/2"}}}, {"grading", "canonical"}};
    if (!a.spec.empty()) {
      std::ifstream in(a.spec);
      if (!in) throw SpecError("cannot open " + a.spec);
      try {
        spec = json::parse(in);
      } catch (const json::parse_error& e) {
        throw SpecError(std::string("malformed JSON: ") + e.what());
      }
      if (!spec.contains("grading")) spec["grading"] = "canonical";
    }
    spec["depth"] = std::max(1, need - 4);
    inst = load_instance(spec, std::nullopt);
    v = inst.algebra.get();
    w = inst.module;
    g = inst.grading;
  }
  ZhuTruncation av(*v, o);
  std::unique_ptr<ZhuTruncation> aw;
  if (w) aw = std::make_unique<ZhuTruncation>(*v, *w, g, o);
  const ZhuTruncation& target = aw ? *aw : av;

  std::vector<ZhuCheck> checks;
  if (a.check == "bracket") {
    if (a.form != "module" && a.form != "intertwiner") throw SpecError("--form must be module or intertwiner");
    checks.push_back(bracket_check(target, a.max_weight, a.sign,
                                   a.form == "module" ? BracketForm::Module : BracketForm::Intertwiner));
  } else if (a.check == "associativity") {
    checks.push_back(associativity_check(av, a.max_weight));
  } else if (a.check == "bimodule") {
    checks.push_back(bimodule_check(av, target, a.max_weight));
  } else if (a.check != "dims") {
    throw SpecError("--check must be bracket, associativity, bimodule or dims");
  }
  const ZhuTruncation& shown = a.check == "associativity" || !aw ? av : *aw;
  if (a.as_json) {
    json cj = json::array();
    for (const auto& c : checks) cj.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    std::cout << json{{"N", a.level},
                      {"cutoff", a.cutoff},
                      {"realize", shown.realize()},
                      {"o_dim_by_weight", shown.o_dim_by_weight()},
                      {"quotient_upper_bounds", shown.quotient_upper_bounds()},
                      {"checks", cj}}
                     .dump(2)
              << "\n";
  } else {
    auto od = shown.o_dim_by_weight();
    auto qb = shown.quotient_upper_bounds();
    std::cout << "N = " << a.level << ", cutoff " << a.cutoff << ", realized to weight " << shown.realize() << "\n";
    std::cout << "weight  dim O  quotient bound\n";
    for (size_t d = 0; d < od.size(); ++d) std::cout << std::setw(6) << d << std::setw(7) << od[d] << std::setw(16) << qb[d] << "\n";
    for (const auto& c : checks) std::cout << c.name << ": " << (c.ok ? "PASS" : "FAIL " + c.detail) << "\n";
  }
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.ok;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivations and first cohomology of vertex operator algebras"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help");  // -h would clash with --h

  H1Args h1;
  auto* sh1 = app.add_subcommand("h1", "certify H^1(V, W) = Z^1(V, W) for an instance spec");
  sh1->add_option("--spec", h1.spec, "instance spec file")->required();
  sh1->add_option("--depth", h1.depth, "truncation depth K");
  sh1->add_option("--out", h1.out, "write the report here");
  sh1->add_option("--expect", h1.expect, "equal or counterexample");
  sh1->add_flag("--json", h1.json_flag, "JSON output (the default)");

  std::string case_id, audit_out;
  bool audit_json_flag = false, slow = false, list = false;
  auto* sa = app.add_subcommand("audit", "recompute printed values and report discrepancies");
  sa->add_option("--case", case_id, "run one case");
  sa->add_flag("--json", audit_json_flag);
  sa->add_option("--out", audit_out);
  sa->add_flag("--slow", slow, "include the slow cases");
  sa->add_flag("--list", list, "list case ids");

  std::string algebra = "virasoro", c = "c", h = "h", kind = "verma", op, vec;
  bool act_json = false;
  auto* sact = app.add_subcommand("act", "apply modes to a highest-weight vector");
  sact->add_option("--algebra", algebra);
  sact->add_option("--c", c);
  sact->add_option("--h", h);
  sact->add_option("--kind", kind);
  sact->add_option("--op", op, "modes to apply, e.g. L2")->required();
  sact->add_option("--vec", vec, "PBW word applied to w, e.g. \"L-1 L-2\"");
  sact->add_flag("--json", act_json);

  int level = 0;
  std::string gc = "c", gh = "h";
  bool gram_json = false;
  auto* sg = app.add_subcommand("gram", "contravariant form on M(c,h) at a level");
  sg->add_option("--level", level)->required();
  sg->add_option("--c", gc);
  sg->add_option("--h", gh);
  sg->add_flag("--json", gram_json);

  int klevel = 0;
  std::string kc = "c", kh = "h";
  bool factor = false, kac_json = false;
  auto* sk = app.add_subcommand("kac", "Kac determinant at a level");
  sk->add_option("--level", klevel)->required();
  sk->add_option("--c", kc);
  sk->add_option("--h", kh);
  sk->add_flag("--factor", factor, "factor into Phi_{r,s} with multiplicities");
  sk->add_flag("--json", kac_json);

  ZhuArgs za;
  auto* sz = app.add_subcommand("zhu", "truncated Zhu algebras and bimodules");
  sz->add_option("--check", za.check, "bracket, associativity, bimodule or dims");
  sz->add_option("--cutoff", za.cutoff);
  sz->add_option("--level", za.level, "N");
  sz->add_option("--max-weight", za.max_weight);
  sz->add_option("--spec", za.spec, "instance spec for V and W (default: Ising, W = V)");
  sz->add_option("--lattice", za.lattice, "a1, a2 or e8 (dims only; e8 keeps the charge-zero sector)");
  sz->add_option("--form", za.form, "bracket form: module or intertwiner");
  sz->add_option("--sign", za.sign, "sign in front of the residue term");
  sz->add_flag("--json", za.as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*sh1) return cmd_h1(h1);
    if (*sa) return cmd_audit(case_id, audit_json_flag, audit_out, slow, list);
    if (*sact) return cmd_act(algebra, c, h, kind, op, vec, act_json);
    if (*sg) return cmd_gram(level, gc, gh, gram_json);
    if (*sk) return cmd_kac(klevel, kc, kh, factor, kac_json);
    if (*sz) return cmd_zhu(za);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ScalarError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ModuleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const TruncationError& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
