#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace symcat {

/// One failed law instance. `witness` holds the ids (or formatted values)
/// needed to replay the failure.
struct Violation {
  std::string law;
  std::vector<std::string> witness;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

inline constexpr std::size_t kAllWitnesses = std::numeric_limits<std::size_t>::max();

struct CheckOptions {
  std::size_t max_witnesses = kAllWitnesses;
};

/// Result of a law check. Status is derived: fail iff any violation was seen.
struct LawReport {
  std::string check;
  std::size_t cases = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  bool vacuous = false;

  LawReport() = default;
  explicit LawReport(std::string name) : check(std::move(name)) {}

  bool passed() const { return violation_count == 0; }
  std::string status() const { return passed() ? "pass" : "fail"; }

  void add_case(std::size_t n = 1) { cases += n; }
  void violate(std::string law, std::vector<std::string> witness, std::string detail = {});
  void note(std::string text) { notes.push_back(std::move(text)); }
  void track_max(const std::string& metric, double value);

  /// Sorts violations by witness then law and applies the witness cap.
  /// Idempotent.
  void finalize(const CheckOptions& opts = {});

  /// Appends `other`'s violations and counters, prefixing laws with its name.
  void merge(const LawReport& other);

  bool operator==(const LawReport&) const = default;
};

/// "%.17g" formatting, the canonical float rendering used everywhere.
std::string fmt_real(double v);

}  // namespace symcat
