#include "conecalc/mapcone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conecalc/error.hpp"
#include "conecalc/sampling.hpp"

namespace conecalc {

namespace {

ConeId cone_id(MapConeTag tag, int k) {
  switch (tag) {
    case MapConeTag::CP: return {ConeTag::CP, 1};
    case MapConeTag::CoCP: return {ConeTag::CoCP, 1};
    case MapConeTag::KPos: return {ConeTag::KPos, k};
    case MapConeTag::KSP: return {ConeTag::KSP, k};
    case MapConeTag::PosMaps: return {ConeTag::PosMaps, 1};
    case MapConeTag::SP: return {ConeTag::KSP, 1};
  }
  return {};
}

std::string tag_name(MapConeTag tag, int k) {
  switch (tag) {
    case MapConeTag::CP: return "CP";
    case MapConeTag::CoCP: return "CoCP";
    case MapConeTag::KPos: return "KPos(" + std::to_string(k) + ")";
    case MapConeTag::KSP: return "KSP(" + std::to_string(k) + ")";
    case MapConeTag::PosMaps: return "PosMaps";
    case MapConeTag::SP: return "SP";
  }
  return "?";
}

OracleOptions reseeded(const OracleOptions& opts, std::uint64_t index) {
  OracleOptions o = opts;
  o.seed = derive_seed(opts.seed, index);
  return o;
}

LinMap conic_combination(const std::vector<LinMap>& gens, Rng& rng) {
  const int terms = rng.uniform_int(1, std::min<int>(3, static_cast<int>(gens.size())));
  CMat c = CMat::Zero(gens[0].choi().rows(), gens[0].choi().cols());
  for (int t = 0; t < terms; ++t) {
    const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(gens.size()) - 1));
    c += rng.uniform(0.1, 1.0) * gens[i].choi();
  }
  return LinMap::from_choi(c);
}

void add_violation(PropertyReport& rep, int trial, std::string detail, std::vector<CMat> inputs,
                   const Verdict& v) {
  Violation viol;
  viol.trial = trial;
  viol.detail = std::move(detail);
  viol.inputs = std::move(inputs);
  viol.witness = v.witness;
  viol.margin = v.margin;
  rep.violations.push_back(std::move(viol));
}

void tally(PropertyReport& rep, const Verdict& v) {
  if (v.status == Status::Inconclusive) ++rep.inconclusive;
}

// Named members of a cone, tried before random samples.
std::vector<LinMap> named_elements(const MapCone& c) {
  const int n = c.n();
  if (c.kind() == MapCone::Kind::Generated) return c.gens();
  if (c.kind() != MapCone::Kind::Canonical) return {};
  switch (c.tag()) {
    case MapConeTag::CP: return {identity_map(n)};
    case MapConeTag::CoCP: return {transpose_map(n)};
    case MapConeTag::KPos: return {identity_map(n), reduction_map(n, 1.0 / c.k())};
    case MapConeTag::KSP: {
      CMat p = CMat::Zero(n, n);
      for (int i = 0; i < c.k(); ++i) p(i, i) = 1.0;
      return {ad_map(p), trace_map(n)};
    }
    case MapConeTag::PosMaps: return {identity_map(n), transpose_map(n)};
    case MapConeTag::SP: return {trace_map(n)};
  }
  return {};
}

// Phi^dagger from the trace-pairing definition: Tr(Phi(X) Y) = Tr(X Phi^dagger(Y)).
LinMap adjoint_by_action(const LinMap& phi) {
  const int n = phi.dim();
  std::vector<CMat> images;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = 1.0;
      images.push_back(conecalc::apply(phi, e));
    }
  }
  return choi_from_action(n, [images, n](const CMat& y) {
    CMat out = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out(j, i) = trace_pairing(images[i * n + j], y);
    }
    return out;
  });
}

LinMap twirl_by_action(const LinMap& phi) {
  return choi_from_action(phi.dim(), [phi](const CMat& x) {
    return CMat(conecalc::apply(phi, x.transpose()).transpose());
  });
}

}  // namespace

MapCone MapCone::canonical(MapConeTag tag, int n, int k) {
  if (n < 1) throw Error(ErrorCode::DimMismatch, "n must be positive");
  if (tag == MapConeTag::KPos || tag == MapConeTag::KSP) {
    if (k < 1 || k > n) throw Error(ErrorCode::BadK, "k must lie in 1..n");
  } else {
    k = 1;
  }
  MapCone c;
  c.n_ = n;
  c.kind_ = Kind::Canonical;
  c.tag_ = tag;
  c.k_ = k;
  c.name_ = tag_name(tag, k);
  c.exact_sampler_ = !(tag == MapConeTag::PosMaps && n > 2);
  const ConeId id = cone_id(tag, k);
  c.oracle_ = [id](const LinMap& phi, const OracleOptions& opts) { return check_map(id, phi, opts); };
  c.sampler_ = [id, n](Rng& rng) { return sample_map(id, n, rng, true); };
  return c;
}

MapCone MapCone::generated(std::vector<LinMap> gens, Oracle oracle) {
  if (gens.empty()) throw Error(ErrorCode::EmptyCone, "generated map cone needs generators");
  const int n = gens[0].dim();
  std::vector<CMat> chois;
  for (const LinMap& g : gens) {
    if (g.dim() != n) throw Error(ErrorCode::DimMismatch, "generators differ in n");
    chois.push_back(g.choi());
  }
  MapCone c;
  c.n_ = n;
  c.kind_ = Kind::Generated;
  c.name_ = "Generated(" + std::to_string(gens.size()) + ")";
  c.gens_ = gens;
  if (oracle) {
    c.oracle_ = std::move(oracle);
  } else {
    GenCone cone(n * n, std::move(chois));
    c.oracle_ = [cone](const LinMap& phi, const OracleOptions& opts) {
      return nnls_membership(cone, phi.choi(), opts.margin);
    };
  }
  c.sampler_ = [gens = std::move(gens)](Rng& rng) { return conic_combination(gens, rng); };
  return c;
}

MapCone MapCone::induced(const OSystem& sys) {
  MapCone c;
  c.n_ = sys.n();
  c.kind_ = Kind::Induced;
  c.name_ = "CP(M_n, " + sys.name() + ")";
  c.system_ = sys;
  c.oracle_ = [sys](const LinMap& phi, const OracleOptions& opts) {
    return sys.contains_cn(phi.choi(), opts);
  };
  const int n = sys.n();
  if (sys.kind() == OSystem::Kind::Generated) {
    std::vector<LinMap> gens;
    for (const CMat& g : sys.cone().gens()) gens.push_back(LinMap::from_choi(g));
    c.sampler_ = [gens = std::move(gens)](Rng& rng) { return conic_combination(gens, rng); };
  } else if (sys.kind() == OSystem::Kind::Canonical) {
    ConeId id;
    switch (sys.tag()) {
      case SystemTag::Naive: id = {ConeTag::CP, 1}; break;
      case SystemTag::PPTSys: id = {ConeTag::CoCP, 1}; break;
      case SystemTag::OMINk: id = sys.k() == 1 ? ConeId{ConeTag::PosMaps, 1} : ConeId{ConeTag::KPos, sys.k()}; break;
      case SystemTag::OMAXk: id = {ConeTag::KSP, sys.k()}; break;
      default: break;
    }
    c.exact_sampler_ = !(id.tag == ConeTag::PosMaps && n > 2);
    c.sampler_ = [id, n](Rng& rng) { return sample_map(id, n, rng, true); };
  } else {
    c.exact_sampler_ = false;
    c.sampler_ = [](Rng&) -> LinMap {
      throw Error(ErrorCode::Unsupported, "no sampler for a cone given by pairings");
    };
  }
  return c;
}

Verdict MapCone::contains(const LinMap& phi, const OracleOptions& opts) const {
  if (phi.dim() != n_) throw Error(ErrorCode::DimMismatch, "map and cone differ in n");
  return oracle_(phi, opts);
}

LinMap MapCone::sample(Rng& rng) const { return sampler_(rng); }

MapCone MapCone::adjoint_cone() const {
  MapCone c = *this;
  c.name_ = "adjoint(" + name_ + ")";
  for (LinMap& g : c.gens_) g = adjoint(g);
  c.system_.reset();
  c.oracle_ = [inner = oracle_](const LinMap& phi, const OracleOptions& opts) {
    return inner(adjoint(phi), opts);
  };
  c.sampler_ = [inner = sampler_](Rng& rng) { return adjoint(inner(rng)); };
  return c;
}

MapCone MapCone::dual_cone() const {
  if (kind_ != Kind::Canonical) throw Error(ErrorCode::Unsupported, "dual cone known for canonical cones only");
  switch (tag_) {
    case MapConeTag::CP: return canonical(MapConeTag::CP, n_);
    case MapConeTag::CoCP: return canonical(MapConeTag::CoCP, n_);
    case MapConeTag::KPos: return canonical(MapConeTag::KSP, n_, k_);
    case MapConeTag::KSP: return canonical(MapConeTag::KPos, n_, k_);
    case MapConeTag::PosMaps: return canonical(MapConeTag::SP, n_);
    case MapConeTag::SP: return canonical(MapConeTag::PosMaps, n_);
  }
  throw Error(ErrorCode::Unsupported, "unhandled cone tag");
}

std::string_view to_string(PropertyStatus s) {
  return s == PropertyStatus::Supported ? "Supported" : "Refuted";
}

double PropertyReport::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

GenCone choi_cone(const MapCone& c, int samples, std::uint64_t seed) {
  std::vector<CMat> chois;
  if (c.kind() == MapCone::Kind::Generated) {
    for (const LinMap& g : c.gens()) chois.push_back(g.choi());
  } else {
    Rng rng(seed, 0xC401Cu);
    for (int t = 0; t < samples; ++t) chois.push_back(c.sample(rng).choi());
  }
  return GenCone(c.n() * c.n(), std::move(chois));
}

OSystem os_from_mapcone(const MapCone& c, int samples, std::uint64_t seed) {
  const int n = c.n();
  if (c.kind() == MapCone::Kind::Canonical) {
    switch (c.tag()) {
      case MapConeTag::CP: return OSystem::canonical(SystemTag::Naive, n);
      case MapConeTag::CoCP: return OSystem::canonical(SystemTag::PPTSys, n);
      case MapConeTag::PosMaps: return OSystem::canonical(SystemTag::OMIN, n);
      case MapConeTag::SP: return OSystem::canonical(SystemTag::OMAX, n);
      case MapConeTag::KPos: return OSystem::canonical(SystemTag::OMINk, n, c.k());
      case MapConeTag::KSP: return OSystem::canonical(SystemTag::OMAXk, n, c.k());
    }
  }
  if (c.system()) return *c.system();
  const PropertyReport rep = check_right_cp_invariance(c, samples, seed);
  if (rep.status() == PropertyStatus::Refuted) {
    throw Error(ErrorCode::NotRightCPInvariant,
                c.name() + " is not right-CP-invariant (trial " + std::to_string(rep.violations[0].trial) + ")");
  }
  return OSystem::generated(n, choi_cone(c, samples, seed));
}

MapCone mapcone_from_os(const OSystem& sys) { return MapCone::induced(sys); }

namespace {

PropertyReport cp_invariance(const MapCone& c, int samples, std::uint64_t seed,
                             const OracleOptions& opts, bool right) {
  PropertyReport rep;
  rep.property = std::string(right ? "right" : "left") + "-CP-invariance of " + c.name();
  rep.seed = seed;
  const int n = c.n();
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const LinMap phi = c.sample(rng);
    const CMat b = random_gaussian(n, n, rng) / std::sqrt(static_cast<double>(n));
    const LinMap psi = right ? compose(phi, ad_map(b)) : compose(ad_map(b), phi);
    ++rep.trials;
    const Verdict v = c.contains(psi, reseeded(opts, static_cast<std::uint64_t>(t)));
    tally(rep, v);
    if (v.is_not_member()) {
      add_violation(rep, t, right ? "Phi o Ad_B left the cone (inputs: C_Phi, B)"
                                  : "Ad_B o Phi left the cone (inputs: C_Phi, B)",
                    {phi.choi(), b}, v);
    }
  }
  return rep;
}

}  // namespace

PropertyReport check_right_cp_invariance(const MapCone& c, int samples, std::uint64_t seed,
                                         const OracleOptions& opts) {
  return cp_invariance(c, samples, seed, opts, true);
}

PropertyReport check_left_cp_invariance(const MapCone& c, int samples, std::uint64_t seed,
                                        const OracleOptions& opts) {
  PropertyReport rep = cp_invariance(c, samples, seed, opts, false);
  const PropertyReport mirror = cp_invariance(c.adjoint_cone(), samples, seed, opts, true);
  rep.metrics.emplace_back("adjoint_right_agrees", mirror.status() == rep.status() ? 1.0 : 0.0);
  return rep;
}

PropertyReport check_semigroup(const MapCone& c, int samples, std::uint64_t seed,
                               const OracleOptions& opts) {
  PropertyReport rep;
  rep.property = "semigroup closure of " + c.name();
  rep.seed = seed;
  const std::vector<LinMap> named = named_elements(c);
  std::vector<std::pair<LinMap, LinMap>> probes;
  for (const LinMap& a : named) {
    for (const LinMap& b : named) probes.emplace_back(a, b);
  }
  for (int t = 0; t < samples; ++t) {
    LinMap phi = identity_map(c.n());
    LinMap psi = identity_map(c.n());
    if (static_cast<std::size_t>(t) < probes.size()) {
      phi = probes[t].first;
      psi = probes[t].second;
    } else {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
      phi = c.sample(rng);
      psi = c.sample(rng);
    }
    ++rep.trials;
    const Verdict v = c.contains(compose(phi, psi), reseeded(opts, static_cast<std::uint64_t>(t)));
    tally(rep, v);
    if (v.is_not_member()) {
      add_violation(rep, t, "Phi o Psi left the cone (inputs: C_Phi, C_Psi)", {phi.choi(), psi.choi()}, v);
    }
  }
  return rep;
}

PropertyReport check_symmetric(const MapCone& c, int samples, std::uint64_t seed,
                               const OracleOptions& opts) {
  PropertyReport rep;
  rep.property = "symmetry of " + c.name();
  rep.seed = seed;
  const int n = c.n();
  const CMat f = swap_operator(n);
  int disagreements = 0;
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const LinMap phi = c.sample(rng);
    const OracleOptions o = reseeded(opts, static_cast<std::uint64_t>(t));
    const CMat& ch = phi.choi();
    ++rep.trials;

    const Verdict by_transpose = c.contains(LinMap::from_choi(ch.transpose()), o);
    const Verdict by_flip = c.contains(LinMap::from_choi(f * ch * f), o);
    const Verdict by_flip_transpose = c.contains(LinMap::from_choi(f * ch.transpose() * f), o);
    const Verdict by_twirl = c.contains(twirl_by_action(phi), o);
    const Verdict by_adjoint = c.contains(adjoint_by_action(phi), o);

    const std::pair<const char*, const Verdict*> checks[] = {
        {"C^T left the Choi cone", &by_transpose},
        {"F C F left the Choi cone", &by_flip},
        {"F C^T F left the Choi cone", &by_flip_transpose},
        {"T o Phi o T left the cone", &by_twirl},
        {"Phi^dagger left the cone", &by_adjoint},
    };
    for (const auto& [what, v] : checks) {
      tally(rep, *v);
      if (v->is_not_member()) add_violation(rep, t, std::string(what) + " (input: C_Phi)", {ch}, *v);
    }
    if (by_transpose.status != by_twirl.status || by_flip_transpose.status != by_adjoint.status) {
      ++disagreements;
      rep.consistent = false;
    }
  }
  rep.metrics.emplace_back("route_disagreements", disagreements);
  return rep;
}

PropertyReport verify_prop41(const std::vector<LinMap>& cgens, const std::vector<LinMap>& duals,
                             int samples, std::uint64_t seed, const OracleOptions& opts) {
  if (cgens.empty() || duals.empty()) throw Error(ErrorCode::EmptyCone, "need generators and dual samples");
  PropertyReport rep;
  rep.property = "dual cone characterised by CP composites";
  rep.seed = seed;
  const int n = cgens[0].dim();
  double min_eig = std::numeric_limits<double>::infinity();
  int forward = 0;
  int reverse = 0;
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const LinMap& psi = duals[static_cast<std::size_t>(t) % duals.size()];
    ++rep.trials;
    const Verdict pairing = dual_pairing_test(cgens, psi, opts.margin);
    if (pairing.is_member()) {
      ++forward;
      const int terms = rng.uniform_int(1, 3);
      CMat c = CMat::Zero(n * n, n * n);
      for (int r = 0; r < terms; ++r) {
        const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(cgens.size()) - 1));
        const CMat b = random_gaussian(n, n, rng) / std::sqrt(static_cast<double>(n));
        c += rng.uniform(0.1, 1.0) * compose(cgens[i], ad_map(b)).choi();
      }
      const LinMap phi = LinMap::from_choi(c);
      const CMat composite = compose(adjoint(psi), phi).choi();
      const Verdict v = is_psd(hermitian_part(composite), opts.margin);
      min_eig = std::min(min_eig, v.is_member() ? v.margin : v.witness->value);
      if (v.is_not_member()) {
        add_violation(rep, t, "Psi passes the pairing but Psi^dagger o Phi is not CP (inputs: C_Psi, C_Phi)",
                      {psi.choi(), phi.choi()}, v);
      }
    } else {
      ++reverse;
      bool confirmed = false;
      for (const LinMap& g : cgens) {
        if (is_psd(hermitian_part(compose(adjoint(psi), g).choi()), opts.margin).is_not_member()) {
          confirmed = true;
          break;
        }
      }
      if (!confirmed) {
        add_violation(rep, t, "Psi fails the pairing yet every composite is CP (input: C_Psi)",
                      {psi.choi()}, pairing);
      }
    }
  }
  rep.metrics.emplace_back("forward_trials", forward);
  rep.metrics.emplace_back("reverse_trials", reverse);
  rep.metrics.emplace_back("min_composite_eigenvalue", forward > 0 ? min_eig : 0.0);
  return rep;
}

PropertyReport verify_prop61(const MapCone& c, int samples, std::uint64_t seed,
                             const OracleOptions& opts) {
  if (c.kind() != MapCone::Kind::Canonical ||
      !(c.tag() == MapConeTag::CP || c.tag() == MapConeTag::KPos || c.tag() == MapConeTag::PosMaps)) {
    throw Error(ErrorCode::PreconditionFailed, c.name() + " is not a known semigroup containing CP");
  }
  const int n = c.n();
  Rng pre(seed, 0x9E1u);
  for (int t = 0; t < 8; ++t) {
    if (c.contains(random_cp_map(n, pre), reseeded(opts, 0x9E1u + t)).is_not_member()) {
      throw Error(ErrorCode::PreconditionFailed, "a CP map is not in " + c.name());
    }
  }
  const MapCone dual = c.dual_cone();
  PropertyReport rep;
  rep.property = "semigroup duality for " + c.name();
  rep.seed = seed;
  double min_pairing = std::numeric_limits<double>::infinity();
  double max_gap = 0.0;
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const LinMap phi = c.sample(rng);
    const LinMap psi = dual.sample(rng);
    const LinMap omega = c.sample(rng);
    ++rep.trials;
    const CMat lhs = compose(adjoint(phi), psi).choi();
    const double p = real_pairing(lhs, omega.choi());
    const double q = real_pairing(psi.choi(), compose(phi, omega).choi());
    min_pairing = std::min(min_pairing, p);
    max_gap = std::max(max_gap, std::abs(p - q) / std::max(1.0, std::abs(p)));
    if (p < -opts.margin) {
      Verdict v = Verdict::not_member(Witness{omega.choi(), std::nullopt, p});
      add_violation(rep, t, "Phi^dagger o Psi pairs negatively with Omega (inputs: C_Phi, C_Psi, C_Omega)",
                    {phi.choi(), psi.choi(), omega.choi()}, v);
    }
  }
  rep.metrics.emplace_back("min_pairing", min_pairing);
  rep.metrics.emplace_back("max_identity_gap", max_gap);
  return rep;
}

PropertyReport verify_thm62(const MapCone& c, const OSystem& o, int samples, std::uint64_t seed,
                            const OracleOptions& opts, const std::vector<double>& lambdas) {
  const int n = c.n();
  int k = 0;
  if (c.kind() == MapCone::Kind::Canonical) {
    if (c.tag() == MapConeTag::CP) k = n;
    if (c.tag() == MapConeTag::KPos) k = c.k();
  }
  const bool system_ok =
      o.kind() == OSystem::Kind::Canonical && o.n() == n &&
      ((k == n && o.tag() == SystemTag::Naive) ||
       (k > 0 && k < n && (o.tag() == SystemTag::OMINk || o.tag() == SystemTag::OMAXk) && o.k() == k));
  if (k == 0 || !system_ok) {
    throw Error(ErrorCode::UnregisteredPair, "no registered identification for (" + c.name() + ", " + o.name() + ")");
  }
  const OSystem od = dual_system(o);

  PropertyReport rep;
  rep.property = "CP(O) for " + c.name() + " with O = " + o.name();
  rep.seed = seed;

  // (i) semigroup and sandwich CP <= C <= P.
  const PropertyReport semi = check_semigroup(c, samples, seed, opts);
  rep.inconclusive += semi.inconclusive;
  for (const Violation& v : semi.violations) rep.violations.push_back(v);
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, 0x5A00u + static_cast<std::uint64_t>(t)));
    const OracleOptions oo = reseeded(opts, 0x5A00u + static_cast<std::uint64_t>(t));
    const LinMap cp = random_cp_map(n, rng);
    const Verdict in_c = c.contains(cp, oo);
    if (in_c.is_not_member()) add_violation(rep, t, "CP map outside C (input: C_Phi)", {cp.choi()}, in_c);
    const LinMap phi = c.sample(rng);
    const Verdict positive = is_k_positive(phi, 1, oo);
    if (positive.is_not_member()) add_violation(rep, t, "element of C is not positive (input: C_Phi)", {phi.choi()}, positive);
  }

  // (ii) CP(O) and CP(O°) agree with C, on the reduction family and on
  // samples inside and outside C.
  auto agree = [&](const LinMap& phi, int t, const OracleOptions& oo, bool pushes, const std::string& label) {
    const Verdict vc = c.contains(phi, oo);
    const Verdict vo = cp_between(phi, o, o, 4, seed, oo);
    const Verdict vd = cp_between(phi, od, od, 4, seed, oo);
    ++rep.trials;
    tally(rep, vc);
    if (vo.status != vc.status || vd.status != vc.status) {
      rep.consistent = false;
      rep.metrics.emplace_back("disagreement_trial", t);
    }
    if (!label.empty()) {
      rep.metrics.emplace_back(label + " C", static_cast<double>(vc.status));
      rep.metrics.emplace_back(label + " CP(O)", static_cast<double>(vo.status));
      rep.metrics.emplace_back(label + " CP(O dual)", static_cast<double>(vd.status));
    }
    if (!pushes) return;
    // Independent refutation route: push probe generators of C_n.
    const Verdict po = cp_by_pushes(phi, o, o, 2, seed, oo, false);
    const Verdict pd = cp_by_pushes(phi, od, od, 2, seed, oo, false);
    if ((po.is_not_member() || pd.is_not_member()) && vc.is_member()) rep.consistent = false;
    if (vc.is_not_member() && !(po.is_not_member() && pd.is_not_member())) rep.consistent = false;
    if (!label.empty()) {
      rep.metrics.emplace_back(label + " pushes CP(O)", static_cast<double>(po.status));
      rep.metrics.emplace_back(label + " pushes CP(O dual)", static_cast<double>(pd.status));
    }
  };
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    char label[48];
    std::snprintf(label, sizeof label, "lambda=%.4g", lambdas[i]);
    agree(reduction_map(n, lambdas[i]), static_cast<int>(i), reseeded(opts, 0x7000u + i), true, label);
  }
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, 0x7100u + static_cast<std::uint64_t>(t)));
    const LinMap phi = (t % 2 == 0) ? c.sample(rng) : random_hermitian_map(n, rng);
    agree(phi, t, reseeded(opts, 0x7100u + static_cast<std::uint64_t>(t)), false, "");
  }

  // (iii) CP(O°) = CP(O)^dagger on samples.
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, 0x7200u + static_cast<std::uint64_t>(t)));
    const OracleOptions oo = reseeded(opts, 0x7200u + static_cast<std::uint64_t>(t));
    const LinMap phi = (t % 2 == 0) ? c.sample(rng) : random_hermitian_map(n, rng);
    const Verdict dual_side = cp_between(phi, od, od, 4, seed, oo);
    const Verdict adj_side = cp_between(adjoint(phi), o, o, 4, seed, oo);
    ++rep.trials;
    if (dual_side.status != adj_side.status) {
      rep.consistent = false;
      rep.metrics.emplace_back("adjoint_disagreement_trial", t);
    }
  }
  return rep;
}

PropertyReport verify_lemma51(int n, int samples, std::uint64_t seed, const OracleOptions& opts) {
  const std::vector<OSystem> systems{
      OSystem::canonical(SystemTag::Naive, n), OSystem::canonical(SystemTag::PPTSys, n),
      OSystem::canonical(SystemTag::OMIN, n), OSystem::canonical(SystemTag::OMAX, n)};
  std::vector<std::pair<const OSystem*, const OSystem*>> pairs;
  for (const OSystem& a : systems) {
    for (const OSystem& b : systems) {
      if (is_registered_pair(a, b)) pairs.emplace_back(&a, &b);
    }
  }
  PropertyReport rep;
  rep.property = "CP between operator systems lies inside the positive maps";
  rep.seed = seed;

  std::vector<LinMap> maps{identity_map(n) * -1.0, reduction_map(n, 1.2)};
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    maps.push_back(t % 2 == 0 ? random_cp_map(n, rng) : random_hermitian_map(n, rng));
  }
  int probes = 0;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const LinMap& phi = maps[i];
    const OracleOptions oo = reseeded(opts, i);
    ++rep.trials;
    const bool cp = is_psd(phi.choi(), opts.margin).is_member();
    const ProductMin pm = min_product_value(phi.choi(), {n, n}, oo.search());
    CMat x;
    if (pm.value < -opts.margin) {
      x = outer(pm.v.conjugate());
    } else if (cp) {
      Rng rng(derive_seed(seed, 0x51000u + i));
      x = random_psd_with_spectrum(n, 0.0, 1.0, rng);
    } else {
      continue;  // no positivity verdict either way
    }
    const CMat probe = kron(identity(n), hermitian_part(conecalc::apply(phi, x)));
    for (const auto& [o1, o2] : pairs) {
      ++probes;
      const Verdict in_target = o2->contains_cn(probe, oo);
      if (pm.value < -opts.margin) {
        if (!in_target.is_not_member()) {
          add_violation(rep, static_cast<int>(i), "probe I (x) Phi(X) not refuted in " + o2->name() + " (input: C_Phi)",
                        {phi.choi()}, in_target);
        }
        const Verdict v = cp_between(phi, *o1, *o2, 4, seed, oo);
        if (v.is_member()) {
          add_violation(rep, static_cast<int>(i),
                        "non-positive map reported CP from " + o1->name() + " to " + o2->name(), {phi.choi()}, v);
        }
      } else if (in_target.is_not_member()) {
        add_violation(rep, static_cast<int>(i), "CP map refuted by the probe in " + o2->name(), {phi.choi()},
                      in_target);
      }
    }
  }
  rep.metrics.emplace_back("probes", probes);
  rep.metrics.emplace_back("pairs", static_cast<double>(pairs.size()));
  return rep;
}

}  // namespace conecalc
