#pragma once
#include <stdexcept>
#include <string>

namespace borelforge {

// Every failure the library can signal carries a stable machine-readable kind.
// The CLI maps kinds onto exit codes: caller/usage problems -> 2, failed
// checks and internal defect signals -> 1, I/O -> 3.
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg)
      : std::runtime_error(msg), kind(std::move(k)) {}
};

// Dominance inconclusive and expansion would exceed the bit budget.
struct BudgetExceeded : Error {
  explicit BudgetExceeded(const std::string& msg) : Error("BudgetExceeded", msg) {}
};

// Selector v addresses a tuple beyond the finite grid at resolution r.
struct SelectorExhausted : Error {
  explicit SelectorExhausted(const std::string& msg) : Error("SelectorExhausted", msg) {}
};

// Sibling-separation witness could not be produced (construction-rule bug).
struct CertificateNotFound : Error {
  explicit CertificateNotFound(const std::string& msg) : Error("CertificateNotFound", msg) {}
};

// A combination instance violates its preconditions; message names the clause.
struct InvalidInstance : Error {
  explicit InvalidInstance(const std::string& msg) : Error("InvalidInstance", msg) {}
};

// Coordinate range starts at or below max(l_E, Xi_m); carries that threshold.
struct RangeTooLow : Error {
  std::string threshold;
  RangeTooLow(std::string thr, const std::string& msg)
      : Error("RangeTooLow", msg), threshold(std::move(thr)) {}
};

// Residual coefficients fit no m-window with m <= mMax; carries a rescale hint.
struct WindowUnfit : Error {
  long needed_m;
  std::string hint;
  WindowUnfit(long needed, std::string h, const std::string& msg)
      : Error("WindowUnfit", msg), needed_m(needed), hint(std::move(h)) {}
};

// No distinguishing coordinate within the search horizon (defect signal).
struct HorizonExhausted : Error {
  explicit HorizonExhausted(const std::string& msg) : Error("HorizonExhausted", msg) {}
};

// A request is structurally representable but exceeds desk-scale resources.
struct ResourceLimit : Error {
  explicit ResourceLimit(const std::string& msg) : Error("ResourceLimit", msg) {}
};

// Bad flags, bad config values, guardrail violations.
struct UsageError : Error {
  explicit UsageError(const std::string& msg) : Error("UsageError", msg) {}
};

// Unreadable input, unwritable output, malformed JSON.
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

}  // namespace borelforge
