#include "conecalc/verdict.hpp"

namespace conecalc {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Member: return "Member";
    case Status::NotMember: return "NotMember";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Verdict Verdict::member(Certificate cert, double margin) {
  Verdict v;
  v.status = Status::Member;
  v.certificate = std::move(cert);
  v.margin = margin;
  return v;
}

Verdict Verdict::not_member(Witness w) {
  Verdict v;
  v.status = Status::NotMember;
  v.margin = w.value;
  v.witness = std::move(w);
  return v;
}

Verdict Verdict::inconclusive(double bound, std::string note) {
  Verdict v;
  v.status = Status::Inconclusive;
  v.margin = bound;
  v.note = std::move(note);
  return v;
}

double recheck(const Witness& w, const CMat& x) { return real_pairing(w.matrix, x); }

}  // namespace conecalc
