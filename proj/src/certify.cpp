#include "steercert/certify.hpp"

#include <array>
#include <cmath>
#include <map>
#include <tuple>

#include "steercert/strategies.hpp"

namespace steercert {

using sdp::MatrixExpr;
using sdp::ScalarExpr;
using sdp::SdpProblem;
using sdp::SdpSolution;
using sdp::Sense;
using sdp::VarId;

namespace {

// Values below this floor are reported as "not certified" rather than as a
// sign claim.
constexpr double kCertFloor = 1e-7;

std::string key(std::initializer_list<int> parts) {
  std::string out;
  for (int p : parts) out += "_" + std::to_string(p);
  return out;
}

void require_scenario(const Assemblage& a, int n_untrusted, int trusted_dim,
                      const std::string& task) {
  if (a.scenario.n_untrusted != n_untrusted || a.scenario.trusted_dim != trusted_dim) {
    throw std::invalid_argument(task + ": expects " + std::to_string(n_untrusted) +
                                " untrusted part(ies) with trusted dimension " +
                                std::to_string(trusted_dim));
  }
  const auto rep = validate(a, 1e-6);
  if (!rep.all_ok()) {
    throw std::invalid_argument(task + ": assemblage is not physical (" + rep.summary() +
                                "); run the non-signalling projection first");
  }
}

CertResult finish(CertTask task, const Assemblage& a, const SdpSolution& sol,
                  std::vector<HermitianMatrix> witness_entries) {
  CertResult res;
  res.task = task;
  res.status = sol.status;
  res.duality_gap = sol.duality_gap;
  res.iterations = sol.iterations;
  if (sol.status != sdp::SolveStatus::optimal) {
    res.message = to_string(task) + ": solver failed (" + sol.message + ")";
    return res;
  }
  res.robustness_raw = sol.primal_value;
  res.robustness = std::max(0.0, sol.primal_value);
  res.certified = res.robustness > kCertFloor;
  res.witness.task = task;
  res.witness.scenario = a.scenario;
  res.witness.entries = std::move(witness_entries);
  return res;
}

// ---------------------------------------------------------------------------
// One-untrusted LHS decomposition tasks (bipartite reduction and full
// separability with a trusted pair). Constraints are emitted in reduced form:
// outcome o-1 rows are implied by the per-setting rows plus one total row,
// since the strategy weights sum to one for every setting.
// ---------------------------------------------------------------------------

CertResult lhs_robustness_1unt(CertTask task, const Assemblage& a, const CertOptions& opts) {
  const int m = a.scenario.settings_per_untrusted[0];
  const int o = a.scenario.outcomes_per_untrusted[0];
  const int d = a.scenario.trusted_dim;
  const bool ppt = (task == CertTask::full_ent_1unt);

  const auto strategies = enumerate_deterministic(m, o);
  const int n_mu = static_cast<int>(strategies.size());
  const HermitianMatrix noise_member = HermitianMatrix::identity(d) * (1.0 / (d * o));

  SdpProblem p;
  const VarId r = p.add_hermitian_var("r", 1);
  std::vector<VarId> sig(n_mu);
  for (int mu = 0; mu < n_mu; ++mu) sig[mu] = p.add_hermitian_var("sig" + key({mu}), d);
  if (ppt) {
    for (int mu = 0; mu < n_mu; ++mu) {
      const VarId tau = p.add_hermitian_var("ppt" + key({mu}), d);
      MatrixExpr tie(d);
      tie.add_partial_transpose(1.0, sig[mu], {2, 2}, opts.ppt_system);
      tie.add(-1.0, tau);
      p.add_equality(tie, HermitianMatrix::zero(d), "ppt" + key({mu}));
    }
  }

  // (1-r) sigma_{a|x} + r I = sum_mu D_mu(a|x) sig_mu, outcomes a < o-1
  for (int x = 0; x < m; ++x) {
    for (int aa = 0; aa + 1 < o; ++aa) {
      MatrixExpr lhs(d);
      for (int mu = 0; mu < n_mu; ++mu) {
        if (strategies[mu].response[x] == aa) lhs.add(1.0, sig[mu]);
      }
      const auto& target = a.at({aa}, {x});
      lhs.add_scalar_times(r, target - noise_member);
      p.add_equality(lhs, target, "dec" + key({aa, x}));
    }
  }
  // total row: sum over outcomes, averaged over settings
  {
    HermitianMatrix total = HermitianMatrix::zero(d);
    for (int x = 0; x < m; ++x) total += a.total_for_setting(x);
    total = total * (1.0 / m);
    MatrixExpr lhs(d);
    for (int mu = 0; mu < n_mu; ++mu) lhs.add(1.0, sig[mu]);
    lhs.add_scalar_times(r, total - HermitianMatrix::identity(d) * (1.0 / d));
    p.add_equality(lhs, total, "dectot");
  }

  ScalarExpr obj;
  obj.add_component(1.0, r, 0);
  p.set_objective(Sense::minimize, obj);

  const auto sol = p.solve(opts.solver);
  if (sol.status != sdp::SolveStatus::optimal) return finish(task, a, sol, {});

  // Witness assembly: the total-row multiplier is distributed evenly over
  // settings so the exported functional is symmetric.
  std::vector<HermitianMatrix> w(a.members.size(), HermitianMatrix::zero(d));
  const auto ftot = sol.dual_matrices.at("dectot") * (1.0 / m);
  for (int x = 0; x < m; ++x)
    for (int aa = 0; aa < o; ++aa) {
      HermitianMatrix f = ftot;
      if (aa + 1 < o) f += sol.dual_matrices.at("dec" + key({aa, x}));
      w[static_cast<size_t>(x) * o + aa] = f;
    }
  return finish(task, a, sol, std::move(w));
}

// ---------------------------------------------------------------------------
// Two untrusted parties, full separability: products of deterministic
// strategies with free positive hidden members.
// ---------------------------------------------------------------------------

CertResult full_sep_2unt_impl(const Assemblage& a, const CertOptions& opts) {
  const CertTask task = CertTask::full_ent_2unt;
  const int ma = a.scenario.settings_per_untrusted[0];
  const int mb = a.scenario.settings_per_untrusted[1];
  const int oa = a.scenario.outcomes_per_untrusted[0];
  const int ob = a.scenario.outcomes_per_untrusted[1];
  const int d = a.scenario.trusted_dim;
  const int O = oa * ob;

  const auto sa = enumerate_deterministic(ma, oa);
  const auto sb = enumerate_deterministic(mb, ob);
  const int na = static_cast<int>(sa.size()), nb = static_cast<int>(sb.size());
  const HermitianMatrix noise_member = HermitianMatrix::identity(d) * (1.0 / (d * O));

  SdpProblem p;
  const VarId r = p.add_hermitian_var("r", 1);
  std::vector<VarId> sig(static_cast<size_t>(na) * nb);
  for (int mu = 0; mu < na; ++mu)
    for (int nu = 0; nu < nb; ++nu)
      sig[static_cast<size_t>(mu) * nb + nu] = p.add_hermitian_var("sig" + key({mu, nu}), d);

  auto marg_A = [&](int aa, int x) {  // mean over y of sum_b sigma_{ab|xy}
    HermitianMatrix out = HermitianMatrix::zero(d);
    for (int y = 0; y < mb; ++y)
      for (int bb = 0; bb < ob; ++bb) out += a.at({aa, bb}, {x, y});
    return out * (1.0 / mb);
  };
  auto marg_B = [&](int bb, int y) {
    HermitianMatrix out = HermitianMatrix::zero(d);
    for (int x = 0; x < ma; ++x)
      for (int aa = 0; aa < oa; ++aa) out += a.at({aa, bb}, {x, y});
    return out * (1.0 / ma);
  };

  for (int x = 0; x < ma; ++x)
    for (int y = 0; y < mb; ++y)
      for (int aa = 0; aa + 1 < oa; ++aa)
        for (int bb = 0; bb + 1 < ob; ++bb) {
          MatrixExpr lhs(d);
          for (int mu = 0; mu < na; ++mu) {
            if (sa[mu].response[x] != aa) continue;
            for (int nu = 0; nu < nb; ++nu) {
              if (sb[nu].response[y] == bb) lhs.add(1.0, sig[mu * nb + nu]);
            }
          }
          const auto& target = a.at({aa, bb}, {x, y});
          lhs.add_scalar_times(r, target - noise_member);
          p.add_equality(lhs, target, "dec" + key({aa, bb, x, y}));
        }
  for (int x = 0; x < ma; ++x)
    for (int aa = 0; aa + 1 < oa; ++aa) {
      MatrixExpr lhs(d);
      for (int mu = 0; mu < na; ++mu) {
        if (sa[mu].response[x] != aa) continue;
        for (int nu = 0; nu < nb; ++nu) lhs.add(1.0, sig[mu * nb + nu]);
      }
      const auto target = marg_A(aa, x);
      lhs.add_scalar_times(r, target - noise_member * ob);
      p.add_equality(lhs, target, "decA" + key({aa, x}));
    }
  for (int y = 0; y < mb; ++y)
    for (int bb = 0; bb + 1 < ob; ++bb) {
      MatrixExpr lhs(d);
      for (int nu = 0; nu < nb; ++nu) {
        if (sb[nu].response[y] != bb) continue;
        for (int mu = 0; mu < na; ++mu) lhs.add(1.0, sig[mu * nb + nu]);
      }
      const auto target = marg_B(bb, y);
      lhs.add_scalar_times(r, target - noise_member * oa);
      p.add_equality(lhs, target, "decB" + key({bb, y}));
    }
  {
    HermitianMatrix total = HermitianMatrix::zero(d);
    for (int s = 0; s < a.scenario.joint_settings(); ++s) total += a.total_for_setting(s);
    total = total * (1.0 / a.scenario.joint_settings());
    MatrixExpr lhs(d);
    for (VarId v : sig) lhs.add(1.0, v);
    lhs.add_scalar_times(r, total - HermitianMatrix::identity(d) * (1.0 / d));
    p.add_equality(lhs, total, "dectot");
  }

  ScalarExpr obj;
  obj.add_component(1.0, r, 0);
  p.set_objective(Sense::minimize, obj);

  const auto sol = p.solve(opts.solver);
  if (sol.status != sdp::SolveStatus::optimal) return finish(task, a, sol, {});

  std::vector<HermitianMatrix> w(a.members.size(), HermitianMatrix::zero(d));
  const auto ftot = sol.dual_matrices.at("dectot") * (1.0 / (ma * mb));
  for (int x = 0; x < ma; ++x)
    for (int y = 0; y < mb; ++y)
      for (int aa = 0; aa < oa; ++aa)
        for (int bb = 0; bb < ob; ++bb) {
          HermitianMatrix f = ftot;
          if (aa + 1 < oa && bb + 1 < ob) f += sol.dual_matrices.at("dec" + key({aa, bb, x, y}));
          if (aa + 1 < oa) f += sol.dual_matrices.at("decA" + key({aa, x})) * (1.0 / mb);
          if (bb + 1 < ob) f += sol.dual_matrices.at("decB" + key({bb, y})) * (1.0 / ma);
          const int s_idx = x * mb + y, o_idx = aa * ob + bb;
          w[static_cast<size_t>(s_idx) * O + o_idx] = f;
        }
  return finish(task, a, sol, std::move(w));
}

// ---------------------------------------------------------------------------
// Operator-valued moment matrices over measurement words. A word is a short
// product of outcome-0 projectors (per party, no adjacent repeats); the
// moment matrix holds one trusted-side block per word pair. Entries whose
// canonical monomials coincide are tied together, and a component that is
// separable from the trusted side additionally keeps its moment matrix
// positive under partial transposition of a trusted factor.
// ---------------------------------------------------------------------------

struct Seq {
  std::array<int8_t, 4> v{{-1, -1, -1, -1}};
  int8_t len = 0;

  bool operator<(const Seq& o) const {
    return std::tie(len, v) < std::tie(o.len, o.v);
  }
  bool operator==(const Seq& o) const { return len == o.len && v == o.v; }
};

Seq reversed(const Seq& s) {
  Seq out;
  out.len = s.len;
  for (int k = 0; k < s.len; ++k) out.v[k] = s.v[s.len - 1 - k];
  return out;
}

// concatenation with idempotent collapse of adjacent equal projectors
Seq concat_reduce(const Seq& x, const Seq& y) {
  Seq out = x;
  for (int k = 0; k < y.len; ++k) {
    if (out.len > 0 && out.v[out.len - 1] == y.v[k]) continue;
    if (out.len >= 4) throw std::logic_error("word product exceeds supported length");
    out.v[out.len++] = y.v[k];
  }
  return out;
}

struct Mono {
  Seq a, b;

  Mono adjoint() const { return Mono{reversed(a), reversed(b)}; }
  bool operator<(const Mono& o) const { return std::tie(a, b) < std::tie(o.a, o.b); }
  bool operator==(const Mono& o) const { return a == o.a && b == o.b; }
};

Mono mono_identity() { return {}; }
Mono mono_a(int x) {
  Mono m;
  m.a.v[0] = static_cast<int8_t>(x);
  m.a.len = 1;
  return m;
}
Mono mono_b(int y) {
  Mono m;
  m.b.v[0] = static_cast<int8_t>(y);
  m.b.len = 1;
  return m;
}
Mono mono_ab(int x, int y) {
  Mono m = mono_a(x);
  m.b.v[0] = static_cast<int8_t>(y);
  m.b.len = 1;
  return m;
}
Mono mono_aa(int x1, int x2) {
  Mono m;
  m.a.v[0] = static_cast<int8_t>(x1);
  m.a.v[1] = static_cast<int8_t>(x2);
  m.a.len = 2;
  return m;
}

Mono product_mono(const Mono& v, const Mono& w) {
  return Mono{concat_reduce(reversed(v.a), w.a), concat_reduce(reversed(v.b), w.b)};
}

struct MomentModel {
  VarId var = -1;
  int d = 0;
  std::vector<Mono> words;
  std::map<Mono, std::pair<int, int>> reps;

  std::pair<int, int> rep_block(const Mono& m) const {
    const auto it = reps.find(m);
    if (it == reps.end()) throw std::logic_error("moment monomial not represented");
    return {it->second.first * d, it->second.second * d};
  }
};

// ppt_words: number of leading words the partial-transpose certificate
// covers (<= 0 means the full word set). trusted_factors factorizes the
// block dimension; ppt_factor indexes into it.
MomentModel build_moment_model(SdpProblem& p, const std::string& name, std::vector<Mono> words,
                               int d, const std::vector<int>& trusted_factors, int ppt_factor,
                               int ppt_words) {
  MomentModel mm;
  mm.words = std::move(words);
  mm.d = d;
  const int nw = static_cast<int>(mm.words.size());
  mm.var = p.add_hermitian_var(name, nw * d);

  int ties = 0;
  for (int v = 0; v < nw; ++v)
    for (int w = v; w < nw; ++w) {
      const Mono mono = product_mono(mm.words[v], mm.words[w]);
      const auto it = mm.reps.find(mono);
      if (it != mm.reps.end()) {
        const auto [pv, pw] = it->second;
        if (pv == v && pw == w) continue;
        MatrixExpr tie(d);
        tie.add_block(1.0, mm.var, v * d, w * d);
        tie.add_block(-1.0, mm.var, pv * d, pw * d);
        p.add_complex_equality(tie, Cmat::Zero(d, d), name + "t" + key({ties++}));
        continue;
      }
      const auto jt = mm.reps.find(mono.adjoint());
      if (jt != mm.reps.end()) {
        const auto [pv, pw] = jt->second;
        if (pv == w && pw == v) continue;  // same entry through hermiticity
        MatrixExpr tie(d);
        tie.add_block(1.0, mm.var, v * d, w * d);
        tie.add_block_adjoint(-1.0, mm.var, pv * d, pw * d);
        p.add_complex_equality(tie, Cmat::Zero(d, d), name + "t" + key({ties++}));
        continue;
      }
      mm.reps[mono] = {v, w};
    }

  // self-adjoint monomials appearing only off the diagonal still need their
  // hermiticity imposed (commuting parts reverse into the same monomial)
  int hties = 0;
  for (const auto& [mono, pos] : mm.reps) {
    if (pos.first == pos.second) continue;
    if (!(mono.adjoint() == mono)) continue;
    bool has_diag = false;
    for (int v = 0; v < nw && !has_diag; ++v) {
      if (product_mono(mm.words[v], mm.words[v]) == mono) has_diag = true;
    }
    if (has_diag) continue;  // already tied to a diagonal block
    const int r0 = pos.first * d, c0 = pos.second * d;
    for (int i = 0; i < d; ++i) {
      ScalarExpr imdiag;
      imdiag.add_entry(Complex(0, -1), mm.var, r0 + i, c0 + i);
      p.add_scalar_equality(imdiag, 0.0, name + "h" + key({hties++}));
      for (int j = i + 1; j < d; ++j) {
        ScalarExpr re;
        re.add_entry(1.0, mm.var, r0 + i, c0 + j);
        re.add_entry(-1.0, mm.var, r0 + j, c0 + i);
        p.add_scalar_equality(re, 0.0, name + "h" + key({hties++}));
        ScalarExpr im;
        im.add_entry(Complex(0, -1), mm.var, r0 + i, c0 + j);
        im.add_entry(Complex(0, -1), mm.var, r0 + j, c0 + i);
        p.add_scalar_equality(im, 0.0, name + "h" + key({hties++}));
      }
    }
  }

  if (ppt_factor >= 0) {
    const int nppt = (ppt_words <= 0 || ppt_words > nw) ? nw : ppt_words;
    std::vector<int> dims = {nppt};
    for (int f : trusted_factors) dims.push_back(f);
    const int dp = nppt * d;
    const VarId slack = p.add_hermitian_var(name + "pt", dp);
    MatrixExpr tie(dp);
    tie.add_block_partial_transpose(1.0, mm.var, 0, 0, dims, 1 + ppt_factor);
    tie.add(-1.0, slack);
    p.add_equality(tie, HermitianMatrix::zero(dp), name + "ppt");
  }
  return mm;
}

// ---------------------------------------------------------------------------
// Genuine multipartite entanglement, one untrusted party: decomposition into
// three bipartition components. The A:BC component decomposes over
// deterministic strategies with free trusted-pair states. A component where
// one trusted qubit factors out is classically correlated with everything
// else, which a word-moment certificate captures: its moment matrix over the
// untrusted party's words stays positive under partial transposition of the
// separated qubit, and its reduction onto that qubit admits a local-hidden-
// state decomposition.
// ---------------------------------------------------------------------------

CertResult gme_1unt_impl(const Assemblage& a, const CertOptions& opts) {
  const CertTask task = CertTask::gme_1unt;
  const int m = a.scenario.settings_per_untrusted[0];
  const int o = a.scenario.outcomes_per_untrusted[0];
  const int d = 4;
  if (o != 2) {
    throw std::invalid_argument("gme_1unt: implemented for binary outcomes");
  }

  const auto strategies = enumerate_deterministic(m, o);
  const int n_mu = static_cast<int>(strategies.size());
  const HermitianMatrix noise_member = HermitianMatrix::identity(d) * (1.0 / (d * o));

  std::vector<Mono> words;
  words.push_back(mono_identity());
  for (int x = 0; x < m; ++x) words.push_back(mono_a(x));
  if (opts.npa_level == NpaLevel::one_plus_ab) {
    for (int x1 = 0; x1 < m; ++x1)
      for (int x2 = 0; x2 < m; ++x2)
        if (x1 != x2) words.push_back(mono_aa(x1, x2));
  }

  SdpProblem p;
  const VarId r = p.add_hermitian_var("r", 1);
  std::vector<VarId> omega(n_mu);
  for (int mu = 0; mu < n_mu; ++mu) omega[mu] = p.add_hermitian_var("om" + key({mu}), d);

  struct Component {
    MomentModel mm;
  };
  auto make_component = [&](const std::string& name, int sep_factor) {
    Component c;
    c.mm = build_moment_model(p, name, words, d, {2, 2}, sep_factor, 1 + m);
    // LHS condition on the separated qubit, conditioned on every Pauli
    // outcome of the remaining trusted qubit: the separated factor carries no
    // steering from the untrusted party whatever is measured elsewhere.
    const auto cond_povms = pauli_xyz();
    for (int z = 0; z < 3; ++z)
      for (int cc = 0; cc < 2; ++cc) {
        std::vector<VarId> beta(n_mu);
        for (int mu = 0; mu < n_mu; ++mu)
          beta[mu] = p.add_hermitian_var(name + "b" + key({z, cc, mu}), 2);
        const auto& projector = cond_povms[z].elements[cc];
        for (int x = 0; x < m; ++x) {
          const auto [r0, c0] = c.mm.rep_block(mono_a(x));
          MatrixExpr lhs(2);
          lhs.add_block_conditional_trace(1.0, c.mm.var, r0, c0, sep_factor, 2, projector);
          for (int mu = 0; mu < n_mu; ++mu) {
            if (strategies[mu].response[x] == 0) lhs.add(-1.0, beta[mu]);
          }
          p.add_equality(lhs, HermitianMatrix::zero(2), name + "lhs" + key({z, cc, x}));
        }
        const auto [r0, c0] = c.mm.rep_block(mono_identity());
        MatrixExpr lhs(2);
        lhs.add_block_conditional_trace(1.0, c.mm.var, r0, c0, sep_factor, 2, projector);
        for (int mu = 0; mu < n_mu; ++mu) lhs.add(-1.0, beta[mu]);
        p.add_equality(lhs, HermitianMatrix::zero(2), name + "lhstot" + key({z, cc}));
      }
    return c;
  };
  const Component compB = make_component("gB", 0);
  const Component compC = make_component("gC", 1);

  // reduced main rows: gamma_{0|x} of each component is its A_x moment,
  // gamma totals are the identity moment
  for (int x = 0; x < m; ++x) {
    MatrixExpr lhs(d);
    for (int mu = 0; mu < n_mu; ++mu) {
      if (strategies[mu].response[x] == 0) lhs.add(1.0, omega[mu]);
    }
    for (const auto* comp : {&compB, &compC}) {
      const auto [r0, c0] = comp->mm.rep_block(mono_a(x));
      lhs.add_block(1.0, comp->mm.var, r0, c0);
    }
    const auto& target = a.at({0}, {x});
    lhs.add_scalar_times(r, target - noise_member);
    p.add_equality(lhs, target, "dec" + key({0, x}));
  }
  {
    HermitianMatrix total = HermitianMatrix::zero(d);
    for (int x = 0; x < m; ++x) total += a.total_for_setting(x);
    total = total * (1.0 / m);
    MatrixExpr lhs(d);
    for (int mu = 0; mu < n_mu; ++mu) lhs.add(1.0, omega[mu]);
    for (const auto* comp : {&compB, &compC}) {
      const auto [r0, c0] = comp->mm.rep_block(mono_identity());
      lhs.add_block(1.0, comp->mm.var, r0, c0);
    }
    lhs.add_scalar_times(r, total - HermitianMatrix::identity(d) * (1.0 / d));
    p.add_equality(lhs, total, "dectot");
  }

  ScalarExpr obj;
  obj.add_component(1.0, r, 0);
  p.set_objective(Sense::minimize, obj);

  const auto sol = p.solve(opts.solver);
  if (sol.status != sdp::SolveStatus::optimal) return finish(task, a, sol, {});

  std::vector<HermitianMatrix> w(a.members.size(), HermitianMatrix::zero(d));
  const auto ftot = sol.dual_matrices.at("dectot") * (1.0 / m);
  for (int x = 0; x < m; ++x)
    for (int aa = 0; aa < o; ++aa) {
      HermitianMatrix f = ftot;
      if (aa == 0) f += sol.dual_matrices.at("dec" + key({0, x}));
      w[static_cast<size_t>(x) * o + aa] = f;
    }
  return finish(task, a, sol, std::move(w));
}

// ---------------------------------------------------------------------------
// Genuine multipartite entanglement, two untrusted parties. The A:BC and
// B:AC components decompose over one party's deterministic strategies with
// free conditional sub-assemblages for the other; the C:AB component is
// classically correlated with the trusted qubit, certified by a moment
// matrix over both parties' words that stays positive under partial
// transposition of the trusted factor.
// ---------------------------------------------------------------------------

CertResult gme_2unt_impl(const Assemblage& a, const CertOptions& opts) {
  const CertTask task = CertTask::gme_2unt;
  const int ma = a.scenario.settings_per_untrusted[0];
  const int mb = a.scenario.settings_per_untrusted[1];
  const int oa = a.scenario.outcomes_per_untrusted[0];
  const int ob = a.scenario.outcomes_per_untrusted[1];
  const int d = a.scenario.trusted_dim;
  const int O = oa * ob;
  if (oa != 2 || ob != 2) {
    throw std::invalid_argument("gme_2unt: implemented for binary outcomes per party");
  }

  const auto sa = enumerate_deterministic(ma, oa);
  const auto sb = enumerate_deterministic(mb, ob);
  const int na = static_cast<int>(sa.size()), nb = static_cast<int>(sb.size());
  const HermitianMatrix noise_member = HermitianMatrix::identity(d) * (1.0 / (d * O));

  SdpProblem p;
  const VarId r = p.add_hermitian_var("r", 1);

  std::vector<VarId> sA(static_cast<size_t>(na) * mb * ob);
  std::vector<VarId> sB(static_cast<size_t>(nb) * ma * oa);
  for (int mu = 0; mu < na; ++mu)
    for (int y = 0; y < mb; ++y)
      for (int bb = 0; bb < ob; ++bb)
        sA[(static_cast<size_t>(mu) * mb + y) * ob + bb] =
            p.add_hermitian_var("sA" + key({mu, bb, y}), d);
  for (int nu = 0; nu < nb; ++nu)
    for (int x = 0; x < ma; ++x)
      for (int aa = 0; aa < oa; ++aa)
        sB[(static_cast<size_t>(nu) * ma + x) * oa + aa] =
            p.add_hermitian_var("sB" + key({nu, aa, x}), d);
  // sub-assemblages are non-signalling across the free party's settings
  for (int mu = 0; mu < na; ++mu)
    for (int y = 1; y < mb; ++y) {
      MatrixExpr lhs(d);
      for (int bb = 0; bb < ob; ++bb) {
        lhs.add(1.0, sA[(static_cast<size_t>(mu) * mb + y) * ob + bb]);
        lhs.add(-1.0, sA[(static_cast<size_t>(mu) * mb + 0) * ob + bb]);
      }
      p.add_equality(lhs, HermitianMatrix::zero(d), "nsA" + key({mu, y}));
    }
  for (int nu = 0; nu < nb; ++nu)
    for (int x = 1; x < ma; ++x) {
      MatrixExpr lhs(d);
      for (int aa = 0; aa < oa; ++aa) {
        lhs.add(1.0, sB[(static_cast<size_t>(nu) * ma + x) * oa + aa]);
        lhs.add(-1.0, sB[(static_cast<size_t>(nu) * ma + 0) * oa + aa]);
      }
      p.add_equality(lhs, HermitianMatrix::zero(d), "nsB" + key({nu, x}));
    }

  std::vector<Mono> words;
  words.push_back(mono_identity());
  for (int x = 0; x < ma; ++x) words.push_back(mono_a(x));
  for (int y = 0; y < mb; ++y) words.push_back(mono_b(y));
  if (opts.npa_level == NpaLevel::one_plus_ab) {
    for (int x = 0; x < ma; ++x)
      for (int y = 0; y < mb; ++y) words.push_back(mono_ab(x, y));
  }
  const MomentModel mm = build_moment_model(p, "G", words, d, {d}, 0, 0);

  if (opts.npa_level == NpaLevel::one) {
    // member positivity of the C:AB component is not implied at level one;
    // keep the four outcome combinations explicitly positive
    for (int x = 0; x < ma; ++x)
      for (int y = 0; y < mb; ++y) {
        const auto [abr, abc] = mm.rep_block(mono_ab(x, y));
        const auto [ar, ac] = mm.rep_block(mono_a(x));
        const auto [br, bc] = mm.rep_block(mono_b(y));
        const auto [ir, ic] = mm.rep_block(mono_identity());
        for (int aa = 0; aa < oa; ++aa)
          for (int bb = 0; bb < ob; ++bb) {
            const VarId slack = p.add_hermitian_var("pos" + key({aa, bb, x, y}), d);
            MatrixExpr me(d);
            me.add(-1.0, slack);
            const double sign_ab = (aa == 0 ? 1.0 : -1.0) * (bb == 0 ? 1.0 : -1.0);
            me.add_block(sign_ab, mm.var, abr, abc);
            if (aa == 0 && bb == 1) {
              me.add_block(1.0, mm.var, ar, ac);
            } else if (aa == 1 && bb == 0) {
              me.add_block(1.0, mm.var, br, bc);
            } else if (aa == 1 && bb == 1) {
              me.add_block(1.0, mm.var, ir, ic);
              me.add_block(-1.0, mm.var, ar, ac);
              me.add_block(-1.0, mm.var, br, bc);
            }
            p.add_equality(me, HermitianMatrix::zero(d), "mpos" + key({aa, bb, x, y}));
          }
      }
  }

  auto marg_A = [&](int aa, int x) {
    HermitianMatrix out = HermitianMatrix::zero(d);
    for (int y = 0; y < mb; ++y)
      for (int bb = 0; bb < ob; ++bb) out += a.at({aa, bb}, {x, y});
    return out * (1.0 / mb);
  };
  auto marg_B = [&](int bb, int y) {
    HermitianMatrix out = HermitianMatrix::zero(d);
    for (int x = 0; x < ma; ++x)
      for (int aa = 0; aa < oa; ++aa) out += a.at({aa, bb}, {x, y});
    return out * (1.0 / ma);
  };

  for (int x = 0; x < ma; ++x)
    for (int y = 0; y < mb; ++y) {
      MatrixExpr lhs(d);
      for (int mu = 0; mu < na; ++mu)
        if (sa[mu].response[x] == 0)
          lhs.add(1.0, sA[(static_cast<size_t>(mu) * mb + y) * ob + 0]);
      for (int nu = 0; nu < nb; ++nu)
        if (sb[nu].response[y] == 0)
          lhs.add(1.0, sB[(static_cast<size_t>(nu) * ma + x) * oa + 0]);
      const auto [r0, c0] = mm.rep_block(mono_ab(x, y));
      lhs.add_block(1.0, mm.var, r0, c0);
      const auto& target = a.at({0, 0}, {x, y});
      lhs.add_scalar_times(r, target - noise_member);
      p.add_equality(lhs, target, "dec" + key({0, 0, x, y}));
    }
  for (int x = 0; x < ma; ++x) {
    MatrixExpr lhs(d);
    for (int mu = 0; mu < na; ++mu)
      if (sa[mu].response[x] == 0)
        for (int bb = 0; bb < ob; ++bb)
          lhs.add(1.0, sA[(static_cast<size_t>(mu) * mb + 0) * ob + bb]);
    for (int nu = 0; nu < nb; ++nu)  // sum_b D_nu(b|y) telescopes to 1
      lhs.add(1.0, sB[(static_cast<size_t>(nu) * ma + x) * oa + 0]);
    const auto [r0, c0] = mm.rep_block(mono_a(x));
    lhs.add_block(1.0, mm.var, r0, c0);
    const auto target = marg_A(0, x);
    lhs.add_scalar_times(r, target - noise_member * ob);
    p.add_equality(lhs, target, "decA" + key({0, x}));
  }
  for (int y = 0; y < mb; ++y) {
    MatrixExpr lhs(d);
    for (int mu = 0; mu < na; ++mu)
      lhs.add(1.0, sA[(static_cast<size_t>(mu) * mb + y) * ob + 0]);
    for (int nu = 0; nu < nb; ++nu)
      if (sb[nu].response[y] == 0)
        for (int aa = 0; aa < oa; ++aa)
          lhs.add(1.0, sB[(static_cast<size_t>(nu) * ma + 0) * oa + aa]);
    const auto [r0, c0] = mm.rep_block(mono_b(y));
    lhs.add_block(1.0, mm.var, r0, c0);
    const auto target = marg_B(0, y);
    lhs.add_scalar_times(r, target - noise_member * oa);
    p.add_equality(lhs, target, "decB" + key({0, y}));
  }
  {
    HermitianMatrix total = HermitianMatrix::zero(d);
    for (int s = 0; s < a.scenario.joint_settings(); ++s) total += a.total_for_setting(s);
    total = total * (1.0 / a.scenario.joint_settings());
    MatrixExpr lhs(d);
    for (int mu = 0; mu < na; ++mu)
      for (int bb = 0; bb < ob; ++bb)
        lhs.add(1.0, sA[(static_cast<size_t>(mu) * mb + 0) * ob + bb]);
    for (int nu = 0; nu < nb; ++nu)
      for (int aa = 0; aa < oa; ++aa)
        lhs.add(1.0, sB[(static_cast<size_t>(nu) * ma + 0) * oa + aa]);
    const auto [r0, c0] = mm.rep_block(mono_identity());
    lhs.add_block(1.0, mm.var, r0, c0);
    lhs.add_scalar_times(r, total - HermitianMatrix::identity(d) * (1.0 / d));
    p.add_equality(lhs, total, "dectot");
  }

  ScalarExpr obj;
  obj.add_component(1.0, r, 0);
  p.set_objective(Sense::minimize, obj);

  const auto sol = p.solve(opts.solver);
  if (sol.status != sdp::SolveStatus::optimal) return finish(task, a, sol, {});

  std::vector<HermitianMatrix> w(a.members.size(), HermitianMatrix::zero(d));
  const auto ftot = sol.dual_matrices.at("dectot") * (1.0 / (ma * mb));
  for (int x = 0; x < ma; ++x)
    for (int y = 0; y < mb; ++y)
      for (int aa = 0; aa < oa; ++aa)
        for (int bb = 0; bb < ob; ++bb) {
          HermitianMatrix f = ftot;
          if (aa == 0 && bb == 0) f += sol.dual_matrices.at("dec" + key({0, 0, x, y}));
          if (aa == 0) f += sol.dual_matrices.at("decA" + key({0, x})) * (1.0 / mb);
          if (bb == 0) f += sol.dual_matrices.at("decB" + key({0, y})) * (1.0 / ma);
          const int s_idx = x * mb + y, o_idx = aa * ob + bb;
          w[static_cast<size_t>(s_idx) * O + o_idx] = f;
        }
  return finish(task, a, sol, std::move(w));
}

}  // namespace

std::string to_string(CertTask t) {
  switch (t) {
    case CertTask::bipartite_reduction: return "bipartite_reduction";
    case CertTask::full_ent_1unt: return "full_ent_1unt";
    case CertTask::full_ent_2unt: return "full_ent_2unt";
    case CertTask::gme_1unt: return "gme_1unt";
    case CertTask::gme_2unt: return "gme_2unt";
  }
  return "unknown";
}

CertTask cert_task_from_string(const std::string& s) {
  if (s == "bipartite_reduction" || s == "reduced") return CertTask::bipartite_reduction;
  if (s == "full_ent_1unt" || s == "full-1unt") return CertTask::full_ent_1unt;
  if (s == "full_ent_2unt" || s == "full-2unt") return CertTask::full_ent_2unt;
  if (s == "gme_1unt" || s == "gme-1unt") return CertTask::gme_1unt;
  if (s == "gme_2unt" || s == "gme-2unt") return CertTask::gme_2unt;
  throw std::invalid_argument("unknown certification task '" + s + "'");
}

const HermitianMatrix& Witness::at(const std::vector<int>& outcomes,
                                   const std::vector<int>& settings) const {
  return entries.at(static_cast<size_t>(scenario.setting_index(settings)) *
                        scenario.joint_outcomes() +
                    scenario.outcome_index(outcomes));
}

CertResult bipartite_lhs_robustness(const Assemblage& a, const CertOptions& opts) {
  require_scenario(a, 1, 2, "bipartite_lhs_robustness");
  return lhs_robustness_1unt(CertTask::bipartite_reduction, a, opts);
}

CertResult full_separability_1unt(const Assemblage& a, const CertOptions& opts) {
  require_scenario(a, 1, 4, "full_separability_1unt");
  return lhs_robustness_1unt(CertTask::full_ent_1unt, a, opts);
}

CertResult full_separability_2unt(const Assemblage& a, const CertOptions& opts) {
  require_scenario(a, 2, 2, "full_separability_2unt");
  return full_sep_2unt_impl(a, opts);
}

CertResult gme_1unt(const Assemblage& a, const CertOptions& opts) {
  require_scenario(a, 1, 4, "gme_1unt");
  return gme_1unt_impl(a, opts);
}

CertResult gme_2unt(const Assemblage& a, const CertOptions& opts) {
  require_scenario(a, 2, 2, "gme_2unt");
  return gme_2unt_impl(a, opts);
}

CertResult certify(CertTask task, const Assemblage& a, const CertOptions& opts) {
  switch (task) {
    case CertTask::bipartite_reduction: return bipartite_lhs_robustness(a, opts);
    case CertTask::full_ent_1unt: return full_separability_1unt(a, opts);
    case CertTask::full_ent_2unt: return full_separability_2unt(a, opts);
    case CertTask::gme_1unt: return gme_1unt(a, opts);
    case CertTask::gme_2unt: return gme_2unt(a, opts);
  }
  throw std::invalid_argument("unknown certification task");
}

double apply_witness(const Witness& w, const Assemblage& a) {
  if (w.entries.size() != a.members.size() || w.scenario.trusted_dim != a.scenario.trusted_dim) {
    throw std::invalid_argument("apply_witness: witness and assemblage shapes differ");
  }
  double value = 0.0;
  for (size_t k = 0; k < w.entries.size(); ++k) value += hs_inner(w.entries[k], a.members[k]);
  return value;
}

}  // namespace steercert
