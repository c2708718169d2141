#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conecalc/matrix.hpp"

namespace conecalc {

enum class Status { Member, NotMember, Inconclusive };

std::string_view to_string(Status s);

// Something that can be re-checked in one pass: an eigenvalue list, a
// conic combination, or an explicit decomposition.
struct Certificate {
  std::string kind;
  std::vector<double> values;
  double residual = 0.0;
  std::optional<CMat> matrix;
};

// A Hermitian functional W with value Re Tr(W X) < 0 on the query, and
// nonnegative on the cone by construction. `vector` is set when W is a
// rank-one projector z z* (or its partial transpose).
struct Witness {
  CMat matrix;
  std::optional<CVec> vector;
  double value = 0.0;
};

struct Evidence {
  int restarts = 0;
  int iterations = 0;
  int samples = 0;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::optional<Certificate> certificate;
  std::optional<Witness> witness;
  // NotMember: witness value. Inconclusive: best bound found.
  // Member: the certificate's smallest checked quantity.
  double margin = 0.0;
  Evidence evidence;
  std::string note;

  static Verdict member(Certificate cert, double margin = 0.0);
  static Verdict not_member(Witness w);
  static Verdict inconclusive(double bound, std::string note = {});

  bool is_member() const { return status == Status::Member; }
  bool is_not_member() const { return status == Status::NotMember; }
};

double recheck(const Witness& w, const CMat& x);

struct SearchOptions {
  int restarts = 16;
  int max_iter = 200;
  std::uint64_t seed = 0;
};

struct OracleOptions {
  double margin = kDecisionMargin;
  double hermitian_tol = kHermitianTol;
  int restarts = 16;
  int max_iter = 200;
  std::uint64_t seed = 0;

  SearchOptions search() const { return {restarts, max_iter, seed}; }
};

}  // namespace conecalc
