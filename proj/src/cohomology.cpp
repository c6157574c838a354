#include "voacoh/cohomology.hpp"

namespace voacoh {

namespace {

void lin_axpy(LinVec& acc, const Scalar& c, const LinVec& x) {
  for (const auto& [t, v] : x) {
    Vector& slot = acc[t];
    slot.axpy(c, v);
    if (slot.is_zero()) acc.erase(t);
  }
}

void lin_add(LinVec& acc, size_t t, const Vector& v, const Scalar& c = Scalar(1)) {
  if (v.is_zero()) return;
  Vector& slot = acc[t];
  slot.axpy(c, v);
  if (slot.is_zero()) acc.erase(t);
}

}  // namespace

// --- grading ---

Scalar Grading::subtracted(const GradedModule& w) const {
  switch (kind) {
    case L0:
      return Scalar();
    case Canonical:
      return w.lowest_weight();
    case Shift:
      return shift;
  }
  return Scalar();
}

std::string Grading::str() const {
  switch (kind) {
    case L0:
      return "L(0)";
    case Canonical:
      return "canonical";
    case Shift:
      return "L(0) - (" + shift.str() + ")";
  }
  return "";
}

std::optional<int> degree_offset(const GradedModule& w, const Grading& g) {
  Scalar off = g.subtracted(w) - w.lowest_weight();
  if (!off.is_const()) return std::nullopt;
  Rational q = off.const_value();
  if (q.get_den() != 1) return std::nullopt;
  return static_cast<int>(q.get_num().get_si());
}

// --- DerivationSystem ---

DerivationSystem::DerivationSystem(const VertexAlgebra& v, const GradedModule& w, Grading g, int depth)
    : v_(v), w_(w), g_(std::move(g)), depth_(depth), offset_(degree_offset(w, g_)), gens_(v.generators()) {
  by_gen_.resize(gens_.size());
  if (!offset_) return;
  for (size_t j = 0; j < gens_.size(); ++j) {
    int deg = v_.degree(gens_[j].state) + *offset_;
    if (deg < 0) continue;
    for (const Key& k : w_.basis(deg)) {
      by_gen_[j].push_back(unknowns_.size());
      unknowns_.push_back({j, k, deg});
    }
  }
}

std::vector<std::string> DerivationSystem::unknown_labels() const {
  std::vector<std::string> out;
  for (const auto& u : unknowns_) out.push_back("F(" + gens_[u.gen].name + ")[" + w_.key_str(u.key) + "]");
  return out;
}

const LinVec& DerivationSystem::image(const Key& k) const {
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  LinVec out;
  if (auto s = v_.generator_split(k)) {
    const auto& gen = gens_[s->gen];
    LinVec rest = image(s->rest);
    Vector gstate(gen.state);
    // F(g_m r) = g_m F(r) + F(g)_m r
    for (const auto& [t, vec] : rest) lin_add(out, t, state_mode(v_, w_, gstate, s->mode, vec));
    Vector r(s->rest);
    for (size_t t : by_gen_[s->gen]) lin_add(out, t, intertwiner_mode(v_, w_, Vector(unknowns_[t].key), s->mode, r));
    if (!s->coef.is_one())
      for (auto& [t, vec] : out) vec *= s->coef;
  }
  return memo_.emplace(k, std::move(out)).first->second;
}

LinVec DerivationSystem::image(const Vector& v) const {
  LinVec out;
  for (const auto& [k, c] : v.terms()) lin_axpy(out, c, image(k));
  return out;
}

Vector DerivationSystem::evaluate(const ScalarVector& x, const LinVec& f) const {
  Vector r;
  for (const auto& [t, vec] : f)
    if (!x[t].is_zero()) r.axpy(x[t], vec);
  return r;
}

LinVec DerivationSystem::residual(const Vector& u, int m, const Key& v) const {
  LinVec r = image(state_mode(v_, v_, u, m, Vector(v)));
  for (const auto& [t, vec] : image(v)) lin_add(r, t, state_mode(v_, w_, u, m, vec), Scalar(-1));
  Vector vv(v);
  for (const auto& [t, vec] : image(u)) lin_add(r, t, intertwiner_mode(v_, w_, vec, m, vv), Scalar(-1));
  return r;
}

void DerivationSystem::add_rows(const std::string& rel, const std::string& detail, int deg, const LinVec& r) const {
  if (r.empty() || deg < 0) return;
  size_t n = w_.dim(deg);
  std::vector<ScalarVector> block(n, ScalarVector(unknowns_.size()));
  for (const auto& [t, vec] : r) {
    ScalarVector c = w_.coords(deg, vec);
    for (size_t i = 0; i < n; ++i) block[i][t] = c[i];
  }
  auto basis = w_.basis(deg);
  for (size_t i = 0; i < n; ++i) {
    bool zero = true;
    for (const auto& s : block[i]) zero = zero && s.is_zero();
    if (zero) continue;
    rows_.push_back({rel, detail + ": coefficient of " + w_.key_str(basis[i]), std::move(block[i])});
  }
}

void DerivationSystem::build_rows() const {
  if (built_) return;
  built_ = true;
  if (!offset_ || unknowns_.empty()) return;
  int off = *offset_;
  // (i) F vanishes on null vectors of V
  if (v_.is_quotient())
    for (int d = 0; d <= depth_; ++d)
      for (const Vector& r : v_.radical(d)) add_rows("null", "F(" + v_.render(r) + ")", d + off, image(r));
  // (ii) both reduction paths of g_m v agree; omega adds the grading equation at m = 1
  struct Rel {
    std::string name;
    Vector state;
    std::string kind;
  };
  std::vector<Rel> rels;
  Vector omega = v_.conformal_vector();
  bool omega_is_gen = false;
  for (const auto& g : gens_) {
    rels.push_back({g.name, Vector(g.state), "generator"});
    omega_is_gen = omega_is_gen || Vector(g.state) == omega;
  }
  if (!omega_is_gen) rels.push_back({"omega", omega, "conformal"});
  for (const auto& rel : rels) {
    int wu = v_.vector_degree(rel.state);
    for (int d = 0; d <= depth_; ++d)
      for (const Key& k : v_.basis(d))
        for (int m = wu - 1 + d - depth_; m <= wu - 1 + d; ++m) {
          int target = wu + d - m - 1;
          if (target + off < 0) continue;
          add_rows(rel.kind, rel.name + "_(" + std::to_string(m) + ") " + v_.key_str(k), target + off,
                   residual(rel.state, m, k));
        }
  }
}

const std::vector<ProvenancedRow>& DerivationSystem::rows() const {
  build_rows();
  return rows_;
}

std::vector<ScalarVector> DerivationSystem::solutions() const {
  if (unknowns_.empty()) return {};
  RowSpace rs(unknowns_.size());
  for (const auto& r : rows()) rs.add(r.coeffs);
  return rs.kernel();
}

std::optional<size_t> DerivationSystem::violated_row(const ScalarVector& x) const {
  const auto& rs = rows();
  for (size_t i = 0; i < rs.size(); ++i) {
    Scalar s;
    for (size_t t = 0; t < x.size(); ++t)
      if (!rs[i].coeffs[t].is_zero() && !x[t].is_zero()) s = s + rs[i].coeffs[t] * x[t];
    if (!s.is_zero()) return i;
  }
  return std::nullopt;
}

ScalarVector DerivationSystem::zero_mode_tuple(const Key& w) const {
  ScalarVector x(unknowns_.size());
  Vector wv(w);
  for (size_t j = 0; j < gens_.size(); ++j) {
    if (by_gen_[j].empty()) continue;
    Vector img = intertwiner_mode(v_, w_, wv, 0, Vector(gens_[j].state));
    ScalarVector c = w_.coords(unknowns_[by_gen_[j].front()].degree, img);
    for (size_t i = 0; i < by_gen_[j].size(); ++i) x[by_gen_[j][i]] = c[i];
  }
  return x;
}

std::string DerivationSystem::render(const ScalarVector& x) const {
  std::string s;
  for (size_t j = 0; j < gens_.size(); ++j) {
    Vector img;
    for (size_t t : by_gen_[j])
      if (!x[t].is_zero()) img.add(unknowns_[t].key, x[t]);
    if (!s.empty()) s += "; ";
    s += "F(" + gens_[j].name + ") = " + w_.render(img);
  }
  return s;
}

// --- zero modes, bounds, verification ---

ZeroModeSpace zero_mode_space(const DerivationSystem& s) {
  ZeroModeSpace z;
  auto off = s.offset();
  if (!off || *off + 1 < 0) return z;
  z.weight_one = s.module().basis(*off + 1);
  if (s.unknowns().empty()) return z;
  RowSpace rs(s.unknowns().size());
  for (const Key& w : z.weight_one) {
    z.tuples.push_back(s.zero_mode_tuple(w));
    rs.add(z.tuples.back());
  }
  z.basis = rs.basis();
  return z;
}

size_t zsp_upper_bound(const GradedModule& w, const Grading& g) {
  auto off = degree_offset(w, g);
  if (!off || *off + 1 < 0) return 0;
  size_t top = w.dim(*off + 1);
  if (*off < 0) return top;
  RowSpace rs(top);
  for (const Key& k : w.basis(*off)) rs.add(w.coords(*off + 1, w.L(-1, k)));
  return top - rs.rank();
}

VerifyResult extend_and_verify(const DerivationSystem& s, const ScalarVector& x, int depth) {
  VerifyResult res;
  auto off = s.offset();
  if (!off) return res;
  bool zero = true;
  for (const auto& c : x) zero = zero && c.is_zero();
  if (zero) return res;
  const VertexAlgebra& v = s.algebra();
  const GradedModule& w = s.module();
  if (v.is_quotient())
    for (int d = 0; d <= depth; ++d)
      for (const Vector& r : v.radical(d))
        if (!w.is_zero_mod(s.evaluate(x, r))) {
          res.ok = false;
          res.failure = "F does not vanish on the null vector " + v.render(r);
          return res;
        }
  for (int a = 0; a <= depth; ++a)
    for (int b = 0; a + b <= depth; ++b)
      for (const Key& u : v.basis(a))
        for (const Key& k : v.basis(b))
          for (int n = a + b - 1 - depth; n <= a + b - 1; ++n) {
            if (a + b - n - 1 + *off < 0) continue;
            Vector uv(u), kv(k);
            Vector lhs = s.evaluate(x, state_mode(v, v, uv, n, kv));
            Vector rhs = state_mode(v, w, uv, n, s.evaluate(x, kv)) + intertwiner_mode(v, w, s.evaluate(x, uv), n, kv);
            if (!w.is_zero_mod(lhs - rhs)) {
              res.ok = false;
              res.failure = "u = " + v.key_str(u) + ", v = " + v.key_str(k) + ", mode " + std::to_string(n);
              return res;
            }
          }
  return res;
}

std::string status_str(Status s) {
  switch (s) {
    case Status::CertifiedEqual:
      return "CERTIFIED_EQUAL";
    case Status::Counterexample:
      return "COUNTEREXAMPLE";
    case Status::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "";
}

CohomologyReport certify(const VertexAlgebra& v, const GradedModule& w, const Grading& g, int depth,
                         const CertifyOptions& opts) {
  DerivationSystem sys(v, w, g, depth);
  CohomologyReport rep;
  rep.instance = v.describe() + " -> " + w.describe();
  rep.grading = g.str();
  rep.depth = depth;
  rep.offset = sys.offset();
  rep.unknowns = sys.unknown_labels();
  rep.rows = sys.rows().size();
  rep.zsp_bound = zsp_upper_bound(w, g);

  auto sols = sys.solutions();
  if (opts.inject_solution) sols.push_back(*opts.inject_solution);
  ZeroModeSpace z = zero_mode_space(sys);
  for (const auto& t : z.basis)
    if (auto row = sys.violated_row(t))
      throw ModuleError("internal: zero-mode derivation violates " + sys.rows()[*row].detail);

  size_t n = sys.unknowns().size();
  RowSpace srs(n), zrs(n);
  for (const auto& s : sols) srs.add(s);
  for (const auto& t : z.basis) zrs.add(t);
  rep.dim_solutions = n ? srs.rank() : 0;
  rep.dim_zero_mode = n ? zrs.rank() : 0;
  rep.solutions = sols;
  rep.zero_modes = z.basis;
  for (const auto& s : sols) rep.solution_witnesses.push_back(sys.render(s));
  for (const auto& t : z.basis) rep.zero_mode_witnesses.push_back(sys.render(t));

  if (rep.dim_solutions == rep.dim_zero_mode) {
    rep.status = Status::CertifiedEqual;
    return rep;
  }
  rep.status = Status::Inconclusive;
  rep.suggested_depth = depth + 2;
  for (const auto& s : sols) {
    if (zrs.contains(s)) continue;
    if (sys.violated_row(s)) continue;
    if (extend_and_verify(sys, s, depth).ok) {
      rep.status = Status::Counterexample;
      rep.counterexample = sys.render(s) + " (verified to depth " + std::to_string(depth) + ")";
      rep.suggested_depth = 0;
      break;
    }
  }
  return rep;
}

}  // namespace voacoh
