#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace liouville {

// Neumaier-compensated accumulator; used for every series partial sum so
// reordering identities hold to ~1e-15 even over 1e5 terms.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---- certificates -----------------------------------------------------------
//
// Scanning finitely many terms never decides an infinite series, so decisive
// verdicts require a caller-declared certificate. The engine validates the
// declared inequality over the scanned range and only then upgrades the
// verdict; a certificate that fails validation leaves the verdict
// Inconclusive and says why.

// term(k+1) <= q * term(k) for all k >= k0 (0 < q < 1): geometric tail.
struct RatioBound {
  double q;
  std::int64_t k0 = 0;
};

// term(k) <= C * k^(-p) for all k >= max(k0, 1), p > 1: integral tail bound.
struct PowerMajorant {
  double C;
  double p;
  std::int64_t k0 = 1;
};

// term(k) >= c > 0 for all k >= k0: divergence, linear growth.
struct ConstantMinorant {
  double c;
  std::int64_t k0 = 0;
};

// term(k) >= c / k for all k >= max(k0, 1): divergence, logarithmic growth.
struct HarmonicMinorant {
  double c;
  std::int64_t k0 = 1;
};

// term(k) = phi(k) - phi(k+1) with phi -> 0: the limit is phi(k_start) exactly.
struct Telescoping {
  std::function<double(std::int64_t)> phi;
};

using SeriesCertificate =
    std::variant<RatioBound, PowerMajorant, ConstantMinorant, HarmonicMinorant,
                 Telescoping>;

std::string certificate_name(const SeriesCertificate& cert);

// ---- verdicts ----------------------------------------------------------------

struct SeriesVerdict {
  enum class Kind { ConvergesTo, Diverges, Inconclusive };
  Kind kind = Kind::Inconclusive;
  // ConvergesTo: partial sum (telescoping: certified limit).
  // Diverges / Inconclusive: partial sum at the last scanned term.
  double value = 0.0;
  double tail_bound = 0.0;  // rigorous remainder bound when ConvergesTo
  std::int64_t terms_used = 0;
  std::string evidence;

  bool decisive() const { return kind != Kind::Inconclusive; }
};

struct SeriesOptions {
  std::int64_t n_max = 100000;      // last index scanned (inclusive)
  std::int64_t trajectory_points = 64;  // downsampled partial sums kept
};

struct SeriesResult {
  SeriesVerdict verdict;
  std::vector<std::pair<std::int64_t, double>> trajectory;  // (k, partial sum)
};

// Sums term(k) for k = k_start..n_max with compensation; nonnegative terms
// expected (negative terms invalidate every certificate and yield an error).
SeriesResult sum_series(const std::function<double(std::int64_t)>& term,
                        std::int64_t k_start,
                        const std::optional<SeriesCertificate>& cert,
                        const SeriesOptions& opts = {});

}  // namespace liouville
