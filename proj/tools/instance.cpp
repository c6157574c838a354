#include "instance.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "voacoh/affine.hpp"
#include "voacoh/lattice.hpp"
#include "voacoh/virasoro.hpp"

namespace voacoh::tools {

namespace {

ModuleKind parse_kind(const json& j) {
  std::string k = j.value("kind", "simple");
  if (k == "simple") return ModuleKind::Simple;
  if (k == "verma") return ModuleKind::Verma;
  throw SpecError("kind must be \"verma\" or \"simple\"");
}

GramRows parse_gram(const json& j) {
  if (!j.contains("gram") || !j["gram"].is_array() || j["gram"].empty()) throw SpecError("lattice spec needs a gram matrix");
  GramRows g;
  for (const auto& row : j["gram"]) {
    if (!row.is_array() || row.size() != j["gram"].size()) throw SpecError("gram matrix must be square");
    std::vector<long> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw SpecError("gram entries must be integers");
      r.push_back(x.get<long>());
    }
    g.push_back(r);
  }
  return g;
}

SimpleLieAlgebra parse_lie(const json& j) {
  if (!j.contains("type")) throw SpecError("affine spec needs a type");
  const json& t = j["type"];
  if (t.is_string()) {
    std::string s = t.get<std::string>();
    if (s == "A1") return SimpleLieAlgebra::a1();
    if (s == "A2") return SimpleLieAlgebra::a2();
    throw SpecError("unknown Lie type " + s);
  }
  if (t.is_object() && t.contains("structure_constants")) return SimpleLieAlgebra::from_json(t["structure_constants"].dump());
  throw SpecError("affine type must be \"A1\", \"A2\" or {\"structure_constants\": ...}");
}

std::vector<long> parse_lambda(const json& j, int rank) {
  std::vector<long> l(rank, 0);
  if (!j.contains("lambda")) return l;
  if (!j["lambda"].is_array() || static_cast<int>(j["lambda"].size()) != rank)
    throw SpecError("lambda must list one Dynkin label per simple root");
  for (int i = 0; i < rank; ++i) l[i] = j["lambda"][i].get<long>();
  return l;
}

std::unique_ptr<VertexAlgebra> make_algebra(const json& a, int realize) {
  if (!a.is_object() || !a.contains("algebra")) throw SpecError("algebra spec must be an object with an \"algebra\" field");
  std::string flavor = a["algebra"].get<std::string>();
  int depth = std::max(realize, a.value("depth", 0));
  if (flavor == "virasoro") return std::make_unique<VirasoroVOA>(parse_scalar(a.value("c", json("c")), "c"), parse_kind(a), depth);
  if (flavor == "lattice") return std::make_unique<LatticeVOA>(EvenLattice(parse_gram(a)), depth);
  if (flavor == "affine") {
    long level = a.value("level", 1L);
    if (level < 1) throw SpecError("affine level must be a positive integer");
    return std::make_unique<AffineVOA>(parse_lie(a), level, parse_kind(a), depth);
  }
  throw SpecError("unknown algebra flavor " + flavor);
}

std::unique_ptr<GradedModule> make_module(const json& m, const json& a, int realize) {
  std::string flavor = m.value("algebra", a["algebra"].get<std::string>());
  if (flavor != a["algebra"].get<std::string>()) throw SpecError("module flavor differs from the algebra flavor");
  int depth = std::max(realize, m.value("depth", 0));
  if (flavor == "virasoro") {
    Scalar c = parse_scalar(m.value("c", a.value("c", json("c"))), "c");
    if (c != parse_scalar(a.value("c", json("c")), "c")) throw SpecError("module central charge differs from the algebra's");
    return std::make_unique<VirasoroModule>(c, parse_scalar(m.value("h", json("h")), "h"), parse_kind(m), depth);
  }
  if (flavor == "lattice") {
    EvenLattice l(parse_gram(m.contains("gram") ? m : a));
    RatVec gamma(l.rank(), Rational(0));
    if (m.contains("gamma")) {
      if (!m["gamma"].is_array() || static_cast<int>(m["gamma"].size()) != l.rank())
        throw SpecError("gamma must have one coordinate per lattice generator");
      for (int i = 0; i < l.rank(); ++i) {
        const json& x = m["gamma"][i];
        gamma[i] = x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>());
      }
    }
    return std::make_unique<LatticeModule>(DualCoset(l, gamma), depth);
  }
  if (flavor == "affine") {
    auto g = parse_lie(m.contains("type") ? m : a);
    long level = m.value("level", a.value("level", 1L));
    return std::make_unique<AffineModule>(g, level, parse_lambda(m, g.rank), parse_kind(m), depth);
  }
  throw SpecError("unknown module flavor " + flavor);
}

}  // namespace

Scalar parse_scalar(const json& j, const char* what) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (!j.is_string()) throw SpecError(std::string(what) + " must be a string or an integer");
  try {
    return RatFunc::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw SpecError(std::string("cannot parse ") + what + ": " + e.what());
  }
}

Grading parse_grading(const json& j) {
  if (j.is_null()) return Grading::l0();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "L0") return Grading::l0();
    if (s == "canonical") return Grading::canonical();
  }
  if (j.is_object() && j.contains("shift")) return Grading::shifted(parse_scalar(j["shift"], "shift"));
  throw SpecError("grading must be \"L0\", \"canonical\" or {\"shift\": r}");
}

json grading_json(const Grading& g) {
  switch (g.kind) {
    case Grading::L0:
      return "L0";
    case Grading::Canonical:
      return "canonical";
    default:
      return json{{"shift", g.shift.str()}};
  }
}

std::optional<int> env_depth() {
  const char* e = std::getenv("VOACOH_DEPTH");
  if (!e || !*e) return std::nullopt;
  try {
    int d = std::stoi(e);
    if (d < 0) throw SpecError("VOACOH_DEPTH must be nonnegative");
    return d;
  } catch (const std::logic_error&) {
    throw SpecError("VOACOH_DEPTH is not an integer");
  }
}

Instance load_instance(const json& spec, std::optional<int> depth_override) {
  if (!spec.is_object()) throw SpecError("instance spec must be a JSON object");
  Instance inst;
  inst.spec = spec;
  if (depth_override)
    inst.depth = *depth_override;
  else if (auto e = env_depth())
    inst.depth = *e;
  else
    inst.depth = spec.value("depth", 6);
  if (inst.depth < 1) throw SpecError("depth must be positive");
  inst.expect = spec.value("expect", "");
  if (!inst.expect.empty() && inst.expect != "equal" && inst.expect != "counterexample")
    throw SpecError("expect must be \"equal\" or \"counterexample\"");
  if (!spec.contains("algebra")) throw SpecError("instance spec needs an algebra");
  inst.grading = parse_grading(spec.value("grading", json()));
  int realize = inst.depth + 4;
  try {
    inst.algebra = make_algebra(spec["algebra"], realize);
    json m = spec.value("module", json("self"));
    if (m.is_string() && m.get<std::string>() == "self") {
      inst.module = inst.algebra.get();
    } else {
      if (!m.is_object()) throw SpecError("module must be \"self\" or an object");
      inst.owned = make_module(m, spec["algebra"], realize);
      inst.module = inst.owned.get();
    }
  } catch (const ModuleError& e) {
    throw SpecError(e.what());
  } catch (const ScalarError& e) {
    throw SpecError(e.what());
  } catch (const json::exception& e) {
    throw SpecError(e.what());
  }
  return inst;
}

Instance load_instance_file(const std::string& path, std::optional<int> depth_override) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  return load_instance(j, depth_override);
}

json vector_json(const GradedModule& m, const Vector& v) {
  json out = json::object();
  for (const auto& [k, c] : v.terms()) out[m.key_str(k)] = c.str();
  return out;
}

json report_json(const Instance& inst, const CohomologyReport& r) {
  json j;
  j["instance"] = {{"algebra", inst.algebra->describe()},
                   {"module", inst.module->describe()},
                   {"grading", grading_json(inst.grading)}};
  j["depth"] = r.depth;
  j["offset"] = r.offset ? json(*r.offset) : json();
  j["unknowns"] = r.unknowns;
  j["rows"] = r.rows;
  j["dim_solutions"] = r.dim_solutions;
  j["dim_zero_mode"] = r.dim_zero_mode;
  j["zero_mode_bound"] = r.zsp_bound;
  j["status"] = status_str(r.status);
  j["witnesses"] = r.solution_witnesses;
  j["zero_mode_witnesses"] = r.zero_mode_witnesses;
  if (r.counterexample) j["counterexample"] = *r.counterexample;
  if (r.status == Status::Inconclusive) j["suggested_depth"] = r.suggested_depth;
  j["refs"] = inst.spec.value("refs", json::array());
  return j;
}

}  // namespace voacoh::tools
