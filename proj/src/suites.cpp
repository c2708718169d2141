#include "conecalc/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "conecalc/error.hpp"
#include "conecalc/sampling.hpp"

namespace conecalc {

namespace {

using Clock = std::chrono::steady_clock;

int pick(int requested, int fallback) { return requested > 0 ? requested : fallback; }

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

OracleOptions reseeded(const OracleOptions& opts, std::uint64_t index) {
  OracleOptions o = opts;
  o.seed = derive_seed(opts.seed, index);
  return o;
}

// A refutation counts only if its witness is present and re-checks
// negative on the recorded input it refutes.
bool refutation_rechecks(const PropertyReport& rep) {
  if (rep.violations.empty()) return false;
  const Violation& v = rep.violations.front();
  return v.witness.has_value() && v.witness->value < 0.0;
}

SuiteCheck run_check(std::string name, bool expect_refuted, const std::function<PropertyReport()>& body) {
  SuiteCheck c;
  c.name = std::move(name);
  c.expect_refuted = expect_refuted;
  const auto t0 = Clock::now();
  c.report = body();
  c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  c.passed = expect_refuted ? (c.report.consistent && refutation_rechecks(c.report))
                            : c.report.passed_as_supported();
  return c;
}

void add_violation(PropertyReport& rep, int trial, std::string detail, std::vector<CMat> inputs,
                   std::optional<Witness> witness = std::nullopt, double margin = 0.0) {
  rep.violations.push_back(Violation{trial, std::move(detail), std::move(inputs), std::move(witness), margin});
}

std::vector<int> dims_or(const SuiteOptions& o, std::vector<int> fallback) {
  if (o.n > 0) return {o.n};
  return fallback;
}

// Level k used where a suite needs a proper Schmidt level: 2 when n >= 3.
int proper_k(int n) { return n >= 3 ? 2 : 1; }

// ---- L21: flip identity and Choi-calculus consistency -----------------

void suite_l21(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 100);
  for (int n : dims_or(o, {2, 3})) {
    out.checks.push_back(run_check("flip identity, n=" + std::to_string(n), false, [&] {
      PropertyReport rep;
      rep.property = "(id (x) Phi)(E) = ((T o Phi^dagger o T) (x) id)(E)";
      rep.seed = o.seed;
      double worst = 0.0;
      for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(t)), 0x121u);
        const LinMap phi = random_map(n, rng);
        const FlipIdentityReport r = verify_flip_identity(phi, 1e-10);
        ++rep.trials;
        worst = std::max(worst, r.gap / std::max(1.0, phi.choi().norm()));
        if (!r.passed) add_violation(rep, t, "flip identity gap " + fmt_double(r.gap) + " (input: C_Phi)", {phi.choi()});
      }
      rep.metrics.emplace_back("max_relative_gap", worst);
      return rep;
    }));
    out.checks.push_back(run_check("composition consistency, n=" + std::to_string(n), false, [&] {
      PropertyReport rep;
      rep.property = "Choi-formula composition matches composition of actions";
      rep.seed = o.seed;
      double worst = 0.0;
      double worst_ad = 0.0;
      for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(t)), 0x122u);
        const LinMap a = random_map(n, rng);
        const LinMap b = random_map(n, rng);
        const LinMap c = random_map(n, rng);
        const CMat formula = compose(a, compose(b, c)).choi();
        const CMat action = choi_from_action(n, [&](const CMat& x) {
                              return conecalc::apply(a, conecalc::apply(b, conecalc::apply(c, x)));
                            }).choi();
        const double gap = (formula - action).norm() / std::max(1.0, formula.norm());
        const CMat ma = random_gaussian(n, n, rng);
        const CMat mb = random_gaussian(n, n, rng);
        const CMat lhs = compose(ad_map(ma), ad_map(mb)).choi();
        const double gap_ad = (lhs - ad_map(mb * ma).choi()).norm() / std::max(1.0, lhs.norm());
        ++rep.trials;
        worst = std::max(worst, gap);
        worst_ad = std::max(worst_ad, gap_ad);
        if (gap > 1e-10) add_violation(rep, t, "compose gap " + fmt_double(gap) + " (inputs: C_A, C_B, C_C)",
                                       {a.choi(), b.choi(), c.choi()});
        if (gap_ad > 1e-12) add_violation(rep, t, "Ad_A o Ad_B != Ad_{BA}, gap " + fmt_double(gap_ad) + " (inputs: A, B)",
                                          {ma, mb});
      }
      rep.metrics.emplace_back("max_compose_gap", worst);
      rep.metrics.emplace_back("max_ad_gap", worst_ad);
      return rep;
    }));
  }
}

// ---- P32: the cone family built from C_n -------------------------------

void suite_p32(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 100);
  const int n = pick(o.n, 2);
  const std::vector<OSystem> systems{OSystem::canonical(SystemTag::Naive, n),
                                     OSystem::canonical(SystemTag::OMIN, n),
                                     OSystem::canonical(SystemTag::OMAX, n)};
  for (const OSystem& sys : systems) {
    out.checks.push_back(run_check("C_1 = M_n^+ for " + sys.name(), false, [&] {
      PropertyReport rep;
      rep.property = "constructed C_1 accepts PSD and refutes non-PSD";
      rep.seed = o.seed;
      const GenCone c1 = build_cm(sys, 1, 8, o.seed, 48 * n * n);
      int accepted = 0;
      int refuted = 0;
      for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(t)), 0x321u);
        const CMat p = random_psd_with_spectrum(n, 0.05, 1.0, rng);
        const CMat q = random_indefinite(n, 0.05, 1.0, rng);
        const Verdict vp = nnls_membership(c1, p, o.oracle.margin);
        const Verdict vq = nnls_membership(c1, q, o.oracle.margin);
        rep.trials += 2;
        if (vp.is_member()) ++accepted;
        else add_violation(rep, t, "PSD matrix not in constructed C_1 (input: X)", {p}, vp.witness, vp.margin);
        if (vq.is_not_member()) ++refuted;
        else add_violation(rep, t, "non-PSD matrix not refuted (input: X)", {q});
      }
      rep.metrics.emplace_back("generators", c1.size());
      rep.metrics.emplace_back("psd_accepted", accepted);
      rep.metrics.emplace_back("indefinite_refuted", refuted);
      return rep;
    }));
    out.checks.push_back(run_check("isometry compression for " + sys.name(), false, [&] {
      PropertyReport rep;
      rep.property = "(Ad_V (x) id)(Ad_{V*} (x) id)(X) = X and compressions stay in C_n";
      rep.seed = o.seed;
      double worst = 0.0;
      for (int m = 1; m <= n; ++m) {
        const GenCone cm = build_cm(sys, m, 4, derive_seed(o.seed, 0x3200u + m), 8);
        for (int t = 0; t < std::max(4, trials / (4 * n)); ++t) {
          Rng rng(derive_seed(o.seed, 0x3300u + static_cast<std::uint64_t>(t * 8 + m)));
          CMat x = CMat::Zero(m * n, m * n);
          for (int r = 0; r < 3; ++r) {
            x += rng.uniform(0.1, 1.0) * cm.gens()[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(cm.size()) - 1))];
          }
          const CMat v = random_isometry(n, m, rng);
          const CMat up = ad_first(v.adjoint(), x, n);
          const CMat back = ad_first(v, up, n);
          const double gap = (back - x).norm() / std::max(1.0, x.norm());
          worst = std::max(worst, gap);
          ++rep.trials;
          if (gap > 1e-12) add_violation(rep, t, "round trip gap " + fmt_double(gap) + " (inputs: X, V)", {x, v});
          const Verdict in_cn = sys.contains_cn(hermitian_part(up), reseeded(o.oracle, 0x3400u + t * 8 + m));
          if (in_cn.is_not_member()) {
            add_violation(rep, t, "compression left C_n (inputs: X, V)", {x, v}, in_cn.witness, in_cn.margin);
          }
        }
      }
      rep.metrics.emplace_back("max_round_trip_gap", worst);
      return rep;
    }));
    out.checks.push_back(run_check("operator-system axioms for " + sys.name(), false, [&] {
      PropertyReport rep;
      rep.property = "C_1 = M_n^+, salience, Archimedean shift";
      rep.seed = o.seed;
      const AxiomReport ax = verify_os_axioms(sys, std::max(8, trials / 5), o.seed, o.oracle);
      rep.trials = ax.c1_trials + ax.salience_trials + static_cast<int>(ax.archimedean_r.size());
      rep.inconclusive = ax.archimedean_inconclusive;
      if (!ax.passed) add_violation(rep, 0, "axiom check failed", {});
      double r_max = 0.0;
      for (double r : ax.archimedean_r) r_max = std::max(r_max, r);
      rep.metrics.emplace_back("c1_members", ax.c1_members);
      rep.metrics.emplace_back("c1_refuted", ax.c1_refuted);
      rep.metrics.emplace_back("salience_refuted", ax.salience_refuted);
      rep.metrics.emplace_back("max_archimedean_r", r_max);
      return rep;
    }));
  }
}

// ---- C33: reduction to the n-th cone -----------------------------------

void suite_c33(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 50);
  const int n = pick(o.n, 2);
  const OSystem naive = OSystem::canonical(SystemTag::Naive, n);
  const OSystem ppt = OSystem::canonical(SystemTag::PPTSys, n);
  for (const OSystem* target : {&naive, &ppt}) {
    out.checks.push_back(run_check("CP(Naive, " + target->name() + ") vs levels 1..4", false, [&] {
      PropertyReport rep;
      rep.property = "cp_between agrees with the conjunction of level-m pushes";
      rep.seed = o.seed;
      int members = 0;
      for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(t)), 0x331u);
        LinMap phi = identity_map(n);
        switch (t % 3) {
          case 0: phi = random_cp_map(n, rng); break;
          case 1: phi = compose(random_cp_map(n, rng), transpose_map(n)); break;
          default: phi = random_hermitian_map(n, rng); break;
        }
        const OracleOptions oo = reseeded(o.oracle, static_cast<std::uint64_t>(t));
        const Verdict direct = cp_between(phi, naive, *target, 4, o.seed, oo);
        Status levels = Status::Member;
        for (int m = 1; m <= 4 && levels == Status::Member; ++m) {
          const Verdict v = cp_at_level(phi, naive, *target, m, 4, derive_seed(o.seed, 0x3310u + m), oo);
          if (v.status != Status::Member) levels = v.status;
        }
        ++rep.trials;
        if (direct.is_member()) ++members;
        if (direct.status != levels) {
          rep.consistent = false;
          add_violation(rep, t,
                        "cp_between " + std::string(to_string(direct.status)) + " but levels " +
                            std::string(to_string(levels)) + " (input: C_Phi)",
                        {phi.choi()});
        }
      }
      rep.metrics.emplace_back("members", members);
      return rep;
    }));
  }
}

// ---- P41: dual cone through CP composites ------------------------------

void suite_p41(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 200);
  const int n = pick(o.n, 2);
  Rng rng(o.seed, 0x41u);
  {
    const MapCone pos = MapCone::canonical(MapConeTag::PosMaps, n);
    const MapCone sp = MapCone::canonical(MapConeTag::SP, n);
    std::vector<LinMap> gens{identity_map(n), transpose_map(n)};
    for (int i = 0; i < 24; ++i) gens.push_back(pos.sample(rng));
    std::vector<LinMap> duals;
    for (int i = 0; i < trials; ++i) duals.push_back(sp.sample(rng));
    const std::string label = n == 2 ? "PosMaps" : "decomposable subcone of PosMaps";
    out.checks.push_back(run_check(label + " with SP duals", false,
                                   [&] { return verify_prop41(gens, duals, trials, o.seed, o.oracle); }));
  }
  {
    std::vector<LinMap> gens;
    for (int i = 0; i < 8; ++i) gens.push_back(ad_map(random_gaussian(n, n, rng)));
    std::vector<LinMap> duals;
    for (int i = 0; i < trials; ++i) duals.push_back(random_cp_map(n, rng));
    out.checks.push_back(run_check("CP with CP duals", false,
                                   [&] { return verify_prop41(gens, duals, trials, o.seed, o.oracle); }));
  }
  {
    // C_Psi = I - E pairs to 1 - n with C_id = E, so Psi is outside CP's dual.
    const LinMap psi = LinMap::from_choi(identity(n * n) - max_entangled(n));
    out.checks.push_back(run_check("non-dual Psi against CP", false, [&] {
      PropertyReport rep = verify_prop41({identity_map(n)}, {psi}, 1, o.seed, o.oracle);
      rep.metrics.emplace_back("pairing", real_pairing(psi.choi(), max_entangled(n)));
      return rep;
    }));
  }
}

// ---- T42: cones <-> operator systems -----------------------------------

void suite_t42(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 50);
  for (int n : dims_or(o, {2, 3})) {
    const int k = proper_k(n);
    const std::vector<MapCone> cones{
        MapCone::canonical(MapConeTag::CP, n), MapCone::canonical(MapConeTag::CoCP, n),
        MapCone::canonical(MapConeTag::KPos, n, k), MapCone::canonical(MapConeTag::KSP, n, k)};
    for (const MapCone& c : cones) {
      out.checks.push_back(run_check("round trip " + c.name() + ", n=" + std::to_string(n), false, [&] {
        PropertyReport rep;
        rep.property = "mapcone_from_os(os_from_mapcone(C)) has the verdicts of C";
        rep.seed = o.seed;
        const MapCone back = mapcone_from_os(os_from_mapcone(c, 50, o.seed));
        int members = 0;
        for (int t = 0; t < trials; ++t) {
          Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(t)), 0x42u);
          // Alternate members with perturbed members, most of which leave C.
          LinMap phi = c.sample(rng);
          if (t % 2 == 1) phi = phi + random_hermitian_map(n, rng) * 0.5;
          const OracleOptions oo = reseeded(o.oracle, static_cast<std::uint64_t>(t));
          const Verdict a = c.contains(phi, oo);
          const Verdict b = back.contains(phi, oo);
          ++rep.trials;
          if (a.is_member()) ++members;
          if (a.status == Status::Inconclusive) ++rep.inconclusive;
          if (a.status != b.status) {
            rep.consistent = false;
            add_violation(rep, t, "verdicts differ (input: C_Phi)", {phi.choi()});
          }
        }
        rep.metrics.emplace_back("members", members);
        return rep;
      }));
    }
    out.checks.push_back(run_check("right-CP-invariance of CP, n=" + std::to_string(n), false,
                                   [&] { return check_right_cp_invariance(cones[0], trials, o.seed, o.oracle); }));
    out.checks.push_back(run_check("left/right adjoint duality for " + cones[2].name(), false, [&] {
      PropertyReport rep = check_left_cp_invariance(cones[2], trials, o.seed, o.oracle);
      if (rep.metric("adjoint_right_agrees") != 1.0) rep.consistent = false;
      return rep;
    }));
  }
  // A finitely generated cone of CP maps is not right-CP-invariant, so the
  // conversion to an operator system must reject it.
  const int n = pick(o.n, 2);
  out.checks.push_back(run_check("non-invariant cone rejected, n=" + std::to_string(n), false, [&] {
    PropertyReport rep;
    rep.property = "os_from_mapcone rejects a cone that is not right-CP-invariant";
    rep.seed = o.seed;
    rep.trials = 1;
    const MapCone ray = MapCone::generated({identity_map(n)});
    try {
      (void)os_from_mapcone(ray, 20, o.seed);
      add_violation(rep, 0, "conversion accepted the ray through the identity map", {identity_map(n).choi()});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotRightCPInvariant) throw;
    }
    return rep;
  }));
}

// ---- L51: CP between systems implies positive ---------------------------

void suite_l51(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 100);
  const int n = pick(o.n, 2);
  out.checks.push_back(run_check("I (x) X probe, n=" + std::to_string(n), false,
                                 [&] { return verify_lemma51(n, trials, o.seed, o.oracle); }));
}

// ---- C52: mapping cones and super-homogeneous systems -------------------

PropertyReport homogeneity_report(const OSystem& sys, int trials, const SuiteOptions& o) {
  PropertyReport rep;
  rep.property = "(id (x) Ad_B)(C_n) within C_n for " + sys.name();
  rep.seed = o.seed;
  const HomogeneityReport h = is_super_homogeneous(sys, trials, o.seed, o.oracle);
  rep.trials = h.trials;
  rep.inconclusive = h.inconclusive;
  if (h.status == Status::NotMember) {
    const CMat y = hermitian_part(ad_second(*h.b, *h.g, sys.n()));
    std::optional<Witness> w = h.witness;
    if (w) w->value = recheck(*w, y);  // re-evaluated on the pushed element
    add_violation(rep, h.trials - 1, "pushed generator left C_n (inputs: G, B)", {*h.g, *h.b}, w,
                  w ? w->value : 0.0);
  }
  return rep;
}

OSystem designed_orbit_system(int n, std::uint64_t seed) {
  Rng rng(seed, 0x52u);
  return orbit_system(random_psd_with_spectrum(n * n, 0.1, 1.0, rng), n, 2 * n * n, seed);
}

void suite_c52(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 200);
  const int n = pick(o.n, 2);
  const int k = proper_k(n);
  std::vector<OSystem> systems{OSystem::canonical(SystemTag::Naive, n), OSystem::canonical(SystemTag::OMIN, n),
                               OSystem::canonical(SystemTag::OMAX, n), OSystem::canonical(SystemTag::PPTSys, n)};
  if (k > 1) {
    systems.push_back(OSystem::canonical(SystemTag::OMINk, n, k));
    systems.push_back(OSystem::canonical(SystemTag::OMAXk, n, k));
  }
  for (const OSystem& sys : systems) {
    out.checks.push_back(run_check("super-homogeneity of " + sys.name(), false,
                                   [&] { return homogeneity_report(sys, trials, o); }));
  }
  const OSystem orbit = designed_orbit_system(n, o.seed);
  out.checks.push_back(run_check("single-orbit " + orbit.name() + " not super-homogeneous", true,
                                 [&] { return homogeneity_report(orbit, trials, o); }));
  out.checks.push_back(run_check("induced cone of the orbit system not left-CP-invariant", true, [&] {
    PropertyReport rep = check_left_cp_invariance(mapcone_from_os(orbit), std::min(trials, 40), o.seed, o.oracle);
    if (!rep.violations.empty() && rep.violations.front().witness) {
      // The witness separates Ad_B o Phi; re-evaluate it on that map's Choi matrix.
      const Violation& v = rep.violations.front();
      const CMat choi = compose(ad_map(v.inputs[1]), LinMap::from_choi(v.inputs[0])).choi();
      rep.violations.front().witness->value = recheck(*v.witness, choi);
    }
    return rep;
  }));
}

// ---- T53: symmetric mapping cones --------------------------------------

void suite_t53(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 200);
  const int n = pick(o.n, 3);
  const int k = std::min(2, n);
  out.checks.push_back(run_check("Choi identities, n=" + std::to_string(n), false, [&] {
    PropertyReport rep;
    rep.property = "C_{Phi^dagger} = F C^T F and C_{T o Phi o T} = C^T";
    rep.seed = o.seed;
    const CMat f = swap_operator(n);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(t)), 0x53u);
      const LinMap phi = random_map(n, rng);
      const double g1 = (adjoint(phi).choi() - f * phi.choi().transpose() * f).cwiseAbs().maxCoeff();
      const double g2 = (transpose_twirl(phi).choi() - phi.choi().transpose()).cwiseAbs().maxCoeff();
      ++rep.trials;
      worst = std::max({worst, g1, g2});
      if (std::max(g1, g2) > 1e-12) add_violation(rep, t, "entrywise gap " + fmt_double(std::max(g1, g2)), {phi.choi()});
    }
    rep.metrics.emplace_back("max_entry_gap", worst);
    return rep;
  }));
  const std::vector<MapCone> cones{
      MapCone::canonical(MapConeTag::CP, n), MapCone::canonical(MapConeTag::CoCP, n),
      MapCone::canonical(MapConeTag::KPos, n, k), MapCone::canonical(MapConeTag::KSP, n, k)};
  for (const MapCone& c : cones) {
    out.checks.push_back(run_check("symmetry of " + c.name(), false,
                                   [&] { return check_symmetric(c, trials, o.seed, o.oracle); }));
  }
}

// ---- P61: semigroup cones ----------------------------------------------

void suite_p61(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 100);
  const int n = pick(o.n, 3);
  const int k = std::min(2, n);
  for (const MapCone& c : {MapCone::canonical(MapConeTag::CP, n), MapCone::canonical(MapConeTag::KPos, n, k)}) {
    out.checks.push_back(run_check("dual pairings for " + c.name(), false,
                                   [&] { return verify_prop61(c, trials, o.seed, o.oracle); }));
  }
  out.checks.push_back(run_check("CoCP is not a semigroup", true, [&] {
    PropertyReport rep = check_semigroup(MapCone::canonical(MapConeTag::CoCP, n), 1, o.seed, o.oracle);
    if (!rep.violations.empty()) rep.metrics.emplace_back("witness_value", rep.violations.front().witness->value);
    return rep;
  }));
}

// ---- T62: CP(O) for semigroup cones ------------------------------------

void suite_t62(const SuiteOptions& o, SuiteResult& out) {
  const int trials = pick(o.trials, 30);
  const int n = pick(o.n, 3);
  const int k = std::min(2, n);
  const MapCone c = k == n ? MapCone::canonical(MapConeTag::CP, n) : MapCone::canonical(MapConeTag::KPos, n, k);
  std::vector<OSystem> systems;
  if (k == n) {
    systems.push_back(OSystem::canonical(SystemTag::Naive, n));
  } else {
    systems.push_back(OSystem::canonical(SystemTag::OMINk, n, k));
    systems.push_back(OSystem::canonical(SystemTag::OMAXk, n, k));
  }
  for (const OSystem& sys : systems) {
    SuiteCheck check = run_check("CP(" + sys.name() + ") = " + c.name(), false,
                                 [&] { return verify_thm62(c, sys, trials, o.seed, o.oracle); });
    const std::vector<double> lambdas{0.3, 0.5, 0.55, 1.0};
    for (double lambda : lambdas) {
      char head[64];
      std::snprintf(head, sizeof head, "lambda=%.4g", lambda);
      const std::string prefix(head);
      auto status_of = [&](const std::string& key) {
        const double v = check.report.metric(prefix + " " + key);
        return std::isnan(v) ? std::string("-") : std::string(to_string(static_cast<Status>(static_cast<int>(v))));
      };
      char line[256];
      std::snprintf(line, sizeof line,
                    "  %-12s 1-lambda*k=%+.3f  C=%-12s CP(O)=%-12s CP(O dual)=%-12s pushes: %s / %s", head,
                    1.0 - lambda * k, status_of("C").c_str(), status_of("CP(O)").c_str(),
                    status_of("CP(O dual)").c_str(), status_of("pushes CP(O)").c_str(),
                    status_of("pushes CP(O dual)").c_str());
      check.table.emplace_back(line);
    }
    out.checks.push_back(std::move(check));
  }
}

using SuiteFn = void (*)(const SuiteOptions&, SuiteResult&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"L21", suite_l21}, {"P32", suite_p32}, {"C33", suite_c33}, {"P41", suite_p41}, {"T42", suite_t42},
      {"L51", suite_l51}, {"C52", suite_c52}, {"T53", suite_t53}, {"P61", suite_p61}, {"T62", suite_t62}};
  return r;
}

}  // namespace

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  SuiteResult r;
  r.suite = name;
  r.n = opts.n;
  r.seed = opts.seed;
  const auto t0 = Clock::now();
  if (name == "all") {
    for (const auto& [sub, fn] : registry()) {
      SuiteResult part;
      fn(opts, part);
      for (SuiteCheck& c : part.checks) {
        c.name = sub + ": " + c.name;
        r.checks.push_back(std::move(c));
      }
    }
  } else {
    const auto& reg = registry();
    const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == name; });
    if (it == reg.end()) throw Error(ErrorCode::UnknownSuite, "no suite named '" + name + "'");
    it->second(opts, r);
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  for (const SuiteCheck& c : r.checks) r.trials += c.report.trials;
  return r;
}

Json suite_to_json(const SuiteResult& r, bool timings) {
  Json checks = Json::array();
  Json violations = Json::array();
  Json times = Json::object();
  for (const SuiteCheck& c : r.checks) {
    Json jc = {{"name", c.name},
               {"expect", c.expect_refuted ? "Refuted" : "Supported"},
               {"passed", c.passed},
               {"report", report_to_json(c.report)}};
    if (!c.table.empty()) jc["table"] = c.table;
    checks.push_back(std::move(jc));
    for (const Json& v : report_to_json(c.report)["violations"]) {
      Json tagged = v;
      tagged["check"] = c.name;
      violations.push_back(std::move(tagged));
    }
    if (timings) times[c.name] = c.seconds;
  }
  Json j = {{"suite", r.suite},       {"n", r.n},           {"seed", r.seed},
            {"trials", r.trials},     {"status", r.passed() ? "pass" : "fail"},
            {"checks", checks},       {"violations", violations}};
  if (timings) {
    times["total"] = r.seconds;
    j["timings"] = times;
  }
  return j;
}

std::string suite_to_text(const SuiteResult& r, bool timings) {
  std::ostringstream os;
  os << "suite " << r.suite << " seed " << r.seed << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
  for (const SuiteCheck& c : r.checks) {
    const PropertyReport& rep = c.report;
    os << (c.passed ? "  [pass] " : "  [FAIL] ") << c.name << " (expect "
       << (c.expect_refuted ? "Refuted" : "Supported") << ", got " << to_string(rep.status())
       << (rep.consistent ? "" : ", routes disagree") << "; trials " << rep.trials;
    if (rep.inconclusive > 0) os << ", inconclusive " << rep.inconclusive;
    for (const auto& [key, value] : rep.metrics) {
      if (key.rfind("lambda=", 0) == 0) continue;
      os << ", " << key << " " << fmt_double(value);
    }
    if (timings) os << "; " << fmt_double(c.seconds) << " s";
    os << ")\n";
    for (const std::string& line : c.table) os << line << "\n";
    if (!c.passed) {
      for (const Violation& v : rep.violations) {
        os << "      trial " << v.trial << ": " << v.detail;
        if (v.witness) os << " [witness value " << fmt_double(v.witness->value) << "]";
        os << "\n";
      }
    }
  }
  if (timings) os << "total " << fmt_double(r.seconds) << " s\n";
  return os.str();
}

}  // namespace conecalc
