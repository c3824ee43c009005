// Check reports shared by the radial and verify modules, and their
// line-oriented text form.
#ifndef SANDCUBE_REPORT_HPP_
#define SANDCUBE_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sandcube/lattice.hpp"

namespace sandcube {

// Proven statements use Pass/Fail. Probes of open conjectures use
// Observed/ViolatedObservation. Skipped marks an unmet hypothesis.
enum class Verdict { Pass, Fail, Observed, ViolatedObservation, Skipped };

std::string_view to_string(Verdict v);

struct Counterexample {
  std::int64_t t = 0;  // -1 for the terminal state
  Coords x;
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
};

struct CheckReport {
  std::string name;
  int d = 0;
  std::int64_t N = 0;
  std::int64_t k = 0;
  std::int64_t horizon = -1;
  Verdict verdict = Verdict::Pass;
  std::optional<Counterexample> counterexample;
  std::string note;

  // Fail and ViolatedObservation are the only non-ok verdicts; only Fail
  // counts against a proven statement.
  bool failed() const { return verdict == Verdict::Fail; }
  bool ok() const { return verdict == Verdict::Pass || verdict == Verdict::Observed; }

  // Records the first counterexample only; later ones are counted in `note`
  // by the callers that care.
  void reject(std::int64_t t, Coords x, std::int64_t lhs, std::int64_t rhs, Verdict on_failure = Verdict::Fail) {
    if (!counterexample)
      counterexample = Counterexample{t, std::move(x), lhs, rhs};
    verdict = on_failure;
  }
};

// CHECK <name> d=<d> N=<N> k=<k> VERDICT=<v> [counterexample t=<t> x=<coords> lhs=<a> rhs=<b>]
std::string format_report(const CheckReport& report);

} // namespace sandcube

#endif
