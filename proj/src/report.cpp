#include "sandcube/report.hpp"

#include <sstream>

namespace sandcube {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Observed: return "observed";
    case Verdict::ViolatedObservation: return "violated-observation";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

std::string format_report(const CheckReport& r) {
  std::ostringstream os;
  os << "CHECK " << r.name << " d=" << r.d << " N=" << r.N << " k=" << r.k << " VERDICT=" << to_string(r.verdict);
  if (r.counterexample) {
    const Counterexample& c = *r.counterexample;
    os << " counterexample t=";
    if (c.t < 0)
      os << "inf";
    else
      os << c.t;
    os << " x=" << format_coords(c.x) << " lhs=" << c.lhs << " rhs=" << c.rhs;
  }
  return os.str();
}

} // namespace sandcube
