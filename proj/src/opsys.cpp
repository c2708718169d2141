#include "conecalc/opsys.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conecalc/error.hpp"
#include "conecalc/sampling.hpp"

namespace conecalc {

namespace {

// [I_m; 0] when m <= n, [I_n, 0] when m > n; n x m in both cases.
CMat embedding(int n, int m) {
  CMat a = CMat::Zero(n, m);
  for (int i = 0; i < std::min(n, m); ++i) a(i, i) = 1.0;
  return a;
}

CMat matrix_unit(int rows, int cols, int i, int j) {
  CMat u = CMat::Zero(rows, cols);
  u(i, j) = 1.0;
  return u;
}

CVec omega_k(int n, int k) {
  CVec z = CVec::Zero(n * n);
  for (int i = 0; i < k; ++i) z(i * n + i) = 1.0;
  return z;
}

Verdict pull_back(Verdict v, const CMat& a, int n) {
  // v refutes (Ad_a (x) id)(X); (a (x) I) W (a* (x) I) refutes X.
  if (v.witness) {
    v.witness->matrix = ad_first(a.adjoint(), v.witness->matrix, n);
    v.witness->vector.reset();
  }
  return v;
}

OracleOptions reseeded(const OracleOptions& opts, std::uint64_t index) {
  OracleOptions o = opts;
  o.seed = derive_seed(opts.seed, index);
  return o;
}

}  // namespace

OSystem OSystem::canonical(SystemTag tag, int n, int k) {
  if (n < 1) throw Error(ErrorCode::DimMismatch, "n must be positive");
  OSystem s;
  s.n_ = n;
  s.kind_ = Kind::Canonical;
  s.level_cap_ = 2 * n;
  switch (tag) {
    case SystemTag::OMIN: tag = SystemTag::OMINk; k = 1; break;
    case SystemTag::OMAX: tag = SystemTag::OMAXk; k = 1; break;
    case SystemTag::OMINk:
    case SystemTag::OMAXk:
      if (k < 1 || k > n) throw Error(ErrorCode::BadK, "k must lie in 1..n");
      break;
    default: k = 1; break;
  }
  if ((tag == SystemTag::OMINk || tag == SystemTag::OMAXk) && k == n) {
    tag = SystemTag::Naive;
    k = 1;
  }
  s.tag_ = tag;
  s.k_ = k;
  return s;
}

OSystem OSystem::generated(int n, GenCone cn) {
  if (cn.dim() != n * n) throw Error(ErrorCode::DimMismatch, "generated cone must live in M_n (x) M_n");
  if (cn.empty()) throw Error(ErrorCode::EmptyCone, "generated system needs generators");
  OSystem s;
  s.n_ = n;
  s.kind_ = Kind::Generated;
  s.level_cap_ = 2 * n;
  s.cone_ = std::move(cn);
  return s;
}

OSystem OSystem::dual_of(int n, GenCone primal) {
  OSystem s = generated(n, std::move(primal));
  s.kind_ = Kind::DualGenerated;
  return s;
}

OSystem OSystem::with_level_cap(int cap) const {
  if (cap < 1) throw Error(ErrorCode::BadLevel, "level cap must be positive");
  OSystem s = *this;
  s.level_cap_ = cap;
  return s;
}

std::string OSystem::name() const {
  switch (kind_) {
    case Kind::Generated: return "Generated(" + std::to_string(cone_.size()) + ")";
    case Kind::DualGenerated: return "DualGenerated(" + std::to_string(cone_.size()) + ")";
    case Kind::Canonical: break;
  }
  switch (tag_) {
    case SystemTag::Naive: return "Naive";
    case SystemTag::PPTSys: return "PPT";
    case SystemTag::OMINk: return k_ == 1 ? "OMIN" : "OMIN_" + std::to_string(k_);
    case SystemTag::OMAXk: return k_ == 1 ? "OMAX" : "OMAX_" + std::to_string(k_);
    default: return "?";
  }
}

Verdict OSystem::contains(const CMat& x, int m, const OracleOptions& opts) const {
  if (m < 1 || m > level_cap_) {
    throw Error(ErrorCode::BadLevel, "level " + std::to_string(m) + " outside 1.." + std::to_string(level_cap_));
  }
  if (x.rows() != m * n_ || x.cols() != m * n_) {
    throw Error(ErrorCode::DimMismatch, "level-" + std::to_string(m) + " element must be (m n) x (m n)");
  }
  const Dims dims{m, n_};
  if (kind_ == Kind::Canonical) {
    const int kk = std::min({k_, m, n_});
    switch (tag_) {
      case SystemTag::Naive: return is_psd(prepare_query(x, opts.hermitian_tol), opts.margin);
      case SystemTag::PPTSys: return is_ppt(prepare_query(x, opts.hermitian_tol), dims, opts.margin);
      case SystemTag::OMINk: return is_k_block_positive(x, dims, kk, opts);
      case SystemTag::OMAXk: return is_schmidt_number_at_most(x, dims, kk, opts);
      default: break;
    }
    throw Error(ErrorCode::Unsupported, "unhandled system tag");
  }

  if (m < n_) {
    const CMat v = embedding(n_, m);
    return pull_back(contains(ad_first(v.adjoint(), x, n_), n_, opts), v.adjoint(), n_);
  }
  if (m == n_) {
    if (kind_ == Kind::Generated) return nnls_membership(cone_, x, opts.margin);
    const CMat h = prepare_query(x, opts.hermitian_tol);
    std::vector<double> pairings;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < cone_.size(); ++i) {
      pairings.push_back(real_pairing(cone_.gens()[i], h));
      if (pairings[i] < pairings[worst]) worst = i;
    }
    if (pairings[worst] >= -opts.margin) {
      const double lo = pairings[worst];
      return Verdict::member(Certificate{"pairings", std::move(pairings), 0.0, std::nullopt}, lo);
    }
    Witness w{cone_.gens()[worst], std::nullopt, pairings[worst]};
    return Verdict::not_member(std::move(w));
  }

  // m > n: certify inside the constructed inner approximation, refute by
  // compressing back to level n.
  if (kind_ == Kind::Generated) {
    const Verdict v = nnls_membership(build_cm(*this, m, 2 * m, opts.seed, 0), x, opts.margin);
    if (v.is_member()) return v;
  }
  Rng rng(derive_seed(opts.seed, 0xC0DEu));
  std::vector<CMat> compressions;
  compressions.push_back(embedding(n_, m).adjoint());
  for (int t = 0; t < 4 * m; ++t) compressions.push_back(random_gaussian(m, n_, rng));
  double bound = std::numeric_limits<double>::infinity();
  for (const CMat& a : compressions) {
    const Verdict v = contains(ad_first(a, x, n_), n_, opts);
    if (v.is_not_member()) return pull_back(v, a, n_);
    bound = std::min(bound, v.margin);
  }
  return Verdict::inconclusive(bound, "level above n: no certificate and no refuting compression");
}

std::vector<CVec> frame_states(int n) {
  std::vector<CVec> out;
  for (int i = 0; i < n; ++i) out.push_back(CVec::Unit(n, i));
  const Complex phases[4] = {1.0, -1.0, Complex(0, 1), Complex(0, -1)};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (const Complex u : phases) {
        CVec v = CVec::Zero(n);
        v(i) = (1.0 / std::numbers::sqrt2);
        v(j) = u * (1.0 / std::numbers::sqrt2);
        out.push_back(v);
      }
    }
  }
  return out;
}

CMat random_phase_monomial(int n, Rng& rng) {
  const Complex phases[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  CMat a = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int row = rng.uniform_int(0, n);
    const int ph = rng.uniform_int(0, 3);
    if (row < n) a(row, j) = phases[ph];
  }
  return a;
}

CMat random_mixed_state(int n, double r_max, Rng& rng) {
  const double r = rng.uniform(0.0, r_max);
  return (1.0 - r) * identity(n) / n + r * outer(random_unit_vector(n, rng));
}

std::vector<CMat> cn_generators(const OSystem& sys, int random_count, std::uint64_t seed,
                                bool frame) {
  if (sys.kind() == OSystem::Kind::Generated) return sys.cone().gens();
  if (sys.kind() == OSystem::Kind::DualGenerated) {
    throw Error(ErrorCode::Unsupported, "dual cones are described by pairings, not generators");
  }
  const int n = sys.n();
  const int k = sys.k();
  const int d = n * n;
  const Dims dims{n, n};
  std::vector<CMat> out;
  switch (sys.tag()) {
    case SystemTag::Naive: out.push_back(max_entangled(n)); break;
    case SystemTag::OMINk:
      out.push_back(max_entangled(n));
      out.push_back(identity(d) - max_entangled(n) / k);
      break;
    case SystemTag::OMAXk: out.push_back(outer(omega_k(n, k))); break;
    case SystemTag::PPTSys:
      out.push_back(swap_operator(n));
      out.push_back(identity(d));
      break;
    default: break;
  }
  if (frame) {
    const std::vector<CVec> states = frame_states(n);
    for (const CVec& p : states) {
      for (const CVec& q : states) out.push_back(outer(kron(p, q)));
    }
  }
  Rng rng(seed, 0x6E4u);
  for (int t = 0; t < random_count; ++t) {
    switch (sys.tag()) {
      case SystemTag::Naive: out.push_back(outer(random_unit_vector(d, rng))); break;
      case SystemTag::PPTSys:
        out.push_back(partial_transpose(outer(random_unit_vector(d, rng)), dims));
        break;
      case SystemTag::OMAXk: out.push_back(outer(random_schmidt_vector(dims, k, rng))); break;
      case SystemTag::OMINk: {
        const int pick = t % 3;
        if (pick == 0) {
          out.push_back(outer(random_unit_vector(d, rng)));
        } else if (pick == 1 && k == 1) {
          out.push_back(partial_transpose(outer(random_unit_vector(d, rng)), dims));
        } else {
          const CMat ab = kron(random_gaussian(n, n, rng), random_gaussian(n, n, rng)) / n;
          out.push_back(hermitian_part(ab * (identity(d) - max_entangled(n) / k) * ab.adjoint()));
        }
        break;
      }
      default: break;
    }
  }
  return out;
}

Verdict is_valid_cn(const GenCone& cn, int n, int samples, std::uint64_t seed,
                    const OracleOptions& opts) {
  if (cn.dim() != n * n) throw Error(ErrorCode::DimMismatch, "cone must live in M_n (x) M_n");
  if (cn.empty()) throw Error(ErrorCode::EmptyCone, "cone has no generators");
  const Dims dims{n, n};
  for (std::size_t i = 0; i < cn.size(); ++i) {
    const CMat& g = cn.gens()[i];
    if (min_eigenvalue(g) >= -opts.margin) continue;
    const ProductMin pm = min_product_value(g, dims, reseeded(opts, i).search());
    if (pm.value < -opts.margin) {
      Verdict v = Verdict::not_member(Witness{outer(kron(pm.v, pm.w)), kron(pm.v, pm.w), pm.value});
      v.note = "generator " + std::to_string(i) + " has a product witness";
      return v;
    }
  }
  Rng rng(seed, 0x7A1u);
  for (int t = 0; t < samples; ++t) {
    const CMat x = kron(random_mixed_state(n, 0.5, rng), random_mixed_state(n, 0.5, rng));
    Verdict v = nnls_membership(cn, x, opts.margin);
    if (v.is_not_member()) {
      v.note = "separable sample " + std::to_string(t) + " is not a member";
      return v;
    }
  }
  for (int t = 0; t < samples; ++t) {
    const std::size_t i = static_cast<std::size_t>(t) % cn.size();
    const CMat a = random_phase_monomial(n, rng);
    const CMat y = ad_first(a, cn.gens()[i], n);
    if (y.norm() <= 1e-12 * cn.gens()[i].norm()) continue;
    Verdict v = nnls_membership(cn, hermitian_part(y), opts.margin);
    if (v.is_not_member()) {
      v.note = "compression of generator " + std::to_string(i) + " leaves the cone";
      return v;
    }
  }
  return Verdict::member(
      Certificate{"sampled-hypotheses", {double(cn.size()), double(samples)}, 0.0, std::nullopt});
}

GenCone build_cm(const OSystem& sys, int m, const std::vector<CMat>& as, int random_generators,
                 std::uint64_t seed) {
  if (m < 1 || m > sys.level_cap()) {
    throw Error(ErrorCode::BadLevel, "level " + std::to_string(m) + " outside 1.." +
                                         std::to_string(sys.level_cap()));
  }
  const int n = sys.n();
  const std::vector<CMat> gens = cn_generators(sys, random_generators, seed);
  std::vector<CMat> out;
  out.reserve(gens.size() * as.size());
  for (const CMat& a : as) {
    if (a.rows() != n || a.cols() != m) throw Error(ErrorCode::DimMismatch, "compression must be n x m");
    for (const CMat& g : gens) {
      CMat y = hermitian_part(ad_first(a, g, n));
      if (y.norm() > 1e-12 * std::max(1.0, g.norm())) out.push_back(std::move(y));
    }
  }
  return GenCone(m * n, std::move(out));
}

GenCone build_cm(const OSystem& sys, int m, int a_samples, std::uint64_t seed,
                 int random_generators) {
  if (m < 1 || m > sys.level_cap()) {
    throw Error(ErrorCode::BadLevel, "level " + std::to_string(m) + " outside 1.." +
                                         std::to_string(sys.level_cap()));
  }
  const int n = sys.n();
  std::vector<CMat> as;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) as.push_back(matrix_unit(n, m, i, j));
  }
  Rng rng(seed, 0xB11Du);
  for (int t = 0; t < a_samples; ++t) as.push_back(random_gaussian(n, m, rng));
  return build_cm(sys, m, as, random_generators, seed);
}

AxiomReport verify_os_axioms(const OSystem& sys, int samples, std::uint64_t seed,
                             const OracleOptions& opts, double r_max) {
  const int n = sys.n();
  AxiomReport rep;
  Rng rng(seed, 0xA710u);
  for (int t = 0; t < samples; ++t) {
    ++rep.c1_trials;
    const OracleOptions o = reseeded(opts, static_cast<std::uint64_t>(t));
    if (sys.contains(random_psd_with_spectrum(n, 0.05, 1.0, rng), 1, o).is_member()) ++rep.c1_members;
    if (sys.contains(random_indefinite(n, 0.05, 1.0, rng), 1, o).is_not_member()) ++rep.c1_refuted;
  }

  std::vector<CMat> elements;
  if (sys.kind() == OSystem::Kind::DualGenerated) {
    for (int t = 0; t < samples; ++t) {
      elements.push_back(kron(random_mixed_state(n, 1.0, rng), random_mixed_state(n, 1.0, rng)));
    }
  } else {
    elements = cn_generators(sys, samples, seed);
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    ++rep.salience_trials;
    if (sys.contains_cn(-elements[i], reseeded(opts, i)).is_not_member()) ++rep.salience_refuted;
  }

  const int d = n * n;
  for (int t = 0; t < samples; ++t) {
    const CMat x = random_hermitian(d, rng);
    const OracleOptions o = reseeded(opts, 0x1000u + static_cast<std::uint64_t>(t));
    auto member_at = [&](double r) {
      return sys.contains_cn(hermitian_part(r * identity(d) + x), o).is_member();
    };
    if (member_at(0.0)) {
      rep.archimedean_r.push_back(0.0);
      continue;
    }
    double lo = 0.0;
    double hi = 1e-3;
    while (hi <= r_max && !member_at(hi)) {
      lo = hi;
      hi *= 2.0;
    }
    if (hi > r_max) {
      ++rep.archimedean_inconclusive;
      continue;
    }
    // The shift only has to exist; a relative bracket of 1e-4 is plenty and
    // keeps certification near the boundary (slowest for block positivity) rare.
    for (int it = 0; it < 40 && hi - lo > 1e-4 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (member_at(mid) ? hi : lo) = mid;
    }
    rep.archimedean_r.push_back(hi);
  }
  rep.passed = rep.c1_members == rep.c1_trials && rep.c1_refuted == rep.c1_trials &&
               rep.salience_refuted == rep.salience_trials && rep.archimedean_inconclusive == 0;
  return rep;
}

HomogeneityReport is_super_homogeneous(const OSystem& sys, int samples, std::uint64_t seed,
                                       const OracleOptions& opts) {
  const int n = sys.n();
  const std::vector<CMat> gens = cn_generators(sys, std::max(8, samples / 4), seed);
  HomogeneityReport rep;
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    CMat b;
    if (t == 0) b = identity(n);
    else if (t % 2 == 1) b = random_phase_monomial(n, rng);
    else b = random_gaussian(n, n, rng);
    const CMat& g = gens[static_cast<std::size_t>(t) % gens.size()];
    ++rep.trials;
    const CMat y = hermitian_part(ad_second(b, g, n));
    if (y.norm() <= 1e-12 * g.norm()) continue;
    const Verdict v = sys.contains_cn(y, reseeded(opts, static_cast<std::uint64_t>(t)));
    if (v.is_not_member()) {
      rep.status = Status::NotMember;
      rep.g = g;
      rep.b = b;
      rep.witness = v.witness;
      return rep;
    }
    if (v.status == Status::Inconclusive) ++rep.inconclusive;
  }
  return rep;
}

OSystem orbit_system(const CMat& x0, int n, int a_samples, std::uint64_t seed) {
  if (x0.rows() != n * n || x0.cols() != n * n) throw Error(ErrorCode::DimMismatch, "x0 must be n^2 x n^2");
  std::vector<CMat> gens{hermitian_part(x0)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gens.push_back(hermitian_part(ad_first(matrix_unit(n, n, i, j), x0, n)));
  }
  Rng rng(seed, 0x0B17u);
  for (int t = 0; t < a_samples; ++t) {
    const CMat a = random_gaussian(n, n, rng) / std::sqrt(static_cast<double>(n));
    gens.push_back(hermitian_part(ad_first(a, x0, n)));
  }
  return OSystem::generated(n, GenCone(n * n, std::move(gens)));
}

OSystem dual_system(const OSystem& sys) {
  switch (sys.kind()) {
    case OSystem::Kind::Generated: return OSystem::dual_of(sys.n(), sys.cone()).with_level_cap(sys.level_cap());
    case OSystem::Kind::DualGenerated:
      return OSystem::generated(sys.n(), sys.cone()).with_level_cap(sys.level_cap());
    case OSystem::Kind::Canonical: break;
  }
  SystemTag tag = sys.tag();
  if (tag == SystemTag::OMINk) tag = SystemTag::OMAXk;
  else if (tag == SystemTag::OMAXk) tag = SystemTag::OMINk;
  return OSystem::canonical(tag, sys.n(), sys.k()).with_level_cap(sys.level_cap());
}

bool is_registered_pair(const OSystem& o1, const OSystem& o2) {
  const bool canon1 = o1.kind() == OSystem::Kind::Canonical;
  const bool canon2 = o2.kind() == OSystem::Kind::Canonical;
  if (canon1 && o1.tag() == SystemTag::Naive) return true;
  if (canon2 && o2.tag() == SystemTag::Naive) return true;
  if (canon1 && canon2 && o1.tag() == o2.tag() && o1.k() == o2.k() &&
      (o1.tag() == SystemTag::OMINk || o1.tag() == SystemTag::OMAXk)) {
    return true;
  }
  return false;
}

Verdict cp_between(const LinMap& phi, const OSystem& o1, const OSystem& o2, int samples,
                   std::uint64_t seed, const OracleOptions& opts) {
  const int n = phi.dim();
  if (o1.n() != n || o2.n() != n) throw Error(ErrorCode::DimMismatch, "systems and map differ in n");
  const bool canon1 = o1.kind() == OSystem::Kind::Canonical;
  const bool canon2 = o2.kind() == OSystem::Kind::Canonical;

  if (canon1 && o1.tag() == SystemTag::Naive) {
    // CP(M_n, O) is the cone of maps whose Choi matrix lies in C_n(O).
    Verdict v = o2.contains_cn(phi.choi(), opts);
    v.note = "registered: Choi matrix in target cone";
    return v;
  }
  if (canon2 && o2.tag() == SystemTag::Naive) {
    // CP(O, M_n) = (C°)^dagger, where C has Choi cone C_n(O).
    Verdict v = dual_system(o1).contains_cn(adjoint(phi).choi(), opts);
    v.note = "registered: adjoint's Choi matrix in the dual cone";
    return v;
  }
  if (is_registered_pair(o1, o2)) {
    // CP(OMIN_k) = CP(OMAX_k) = P_k.
    Verdict v = is_k_positive(phi, o1.k(), opts);
    v.note = "registered: k-positivity";
    return v;
  }

  return cp_by_pushes(phi, o1, o2, samples, seed, opts);
}

Verdict cp_by_pushes(const LinMap& phi, const OSystem& o1, const OSystem& o2, int random_count,
                     std::uint64_t seed, const OracleOptions& opts, bool frame) {
  const int n = phi.dim();
  if (o1.n() != n || o2.n() != n) throw Error(ErrorCode::DimMismatch, "systems and map differ in n");
  if (o1.kind() == OSystem::Kind::DualGenerated) {
    return Verdict::inconclusive(0.0, "source cone has no generators to push");
  }
  const std::vector<CMat> gens = cn_generators(o1, random_count, seed, frame);
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const CMat y = hermitian_part(apply_amplified(n, phi, gens[i]));
    Verdict v = o2.contains_cn(y, reseeded(opts, i));
    if (v.is_not_member()) {
      v.note = "pushed generator " + std::to_string(i) + " leaves the target cone";
      return v;
    }
    bound = std::min(bound, v.margin);
  }
  Verdict v = Verdict::inconclusive(bound, "no violation in " + std::to_string(gens.size()) + " pushes");
  v.evidence.samples = static_cast<int>(gens.size());
  return v;
}

Verdict cp_at_level(const LinMap& phi, const OSystem& o1, const OSystem& o2, int m, int samples,
                    std::uint64_t seed, const OracleOptions& opts) {
  const int n = phi.dim();
  if (o1.n() != n || o2.n() != n) throw Error(ErrorCode::DimMismatch, "systems and map differ in n");
  if (m < 1 || m > std::min(o1.level_cap(), o2.level_cap())) {
    throw Error(ErrorCode::BadLevel, "level " + std::to_string(m) + " outside the level caps");
  }
  std::vector<CMat> as{embedding(n, m)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) as.push_back(matrix_unit(n, m, i, j));
  }
  Rng rng(seed, 0x1E7E1u);
  for (int t = 0; t < samples; ++t) as.push_back(random_gaussian(n, m, rng));

  const std::vector<CMat> gens = cn_generators(o1, samples, seed);
  int pushes = 0;
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const CMat image = apply_amplified(n, phi, gens[gi]);
    for (std::size_t ai = 0; ai < as.size(); ++ai) {
      const CMat y = hermitian_part(ad_first(as[ai], image, n));
      if (y.norm() <= 1e-14 * std::max(1.0, image.norm())) continue;
      ++pushes;
      Verdict v = o2.contains(y, m, reseeded(opts, gi * as.size() + ai));
      if (v.is_not_member()) {
        v.note = "level " + std::to_string(m) + ": generator " + std::to_string(gi) +
                 " under compression " + std::to_string(ai);
        return v;
      }
    }
  }
  Verdict v = Verdict::member(Certificate{"no-violation", {double(pushes)}, 0.0, std::nullopt});
  v.evidence.samples = pushes;
  return v;
}

}  // namespace conecalc
