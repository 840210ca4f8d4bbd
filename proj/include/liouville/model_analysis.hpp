#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "liouville/generators.hpp"
#include "liouville/series.hpp"

namespace liouville {

// Three-series classification of a radial model:
//   parabolic          <=> sum 1/dB(k)        diverges
//   stochastically complete <=> sum m(B_k)/dB(k)  diverges
//   L1-Liouville       <=> sum g(r) m(S_r)    diverges
// A parabolic model is trivially complete and L1-Liouville; the last two
// series always agree when both are decisive.
struct Classification {
  enum class Answer { Yes, No, Unknown };

  SeriesVerdict parabolic;
  SeriesVerdict complete;
  SeriesVerdict liouville;
  Answer parabolic_ans = Answer::Unknown;
  Answer complete_ans = Answer::Unknown;
  Answer liouville_ans = Answer::Unknown;
  std::string notes;

  bool decisive() const {
    return parabolic_ans != Answer::Unknown && complete_ans != Answer::Unknown &&
           liouville_ans != Answer::Unknown;
  }
};

const char* answer_name(Classification::Answer a);

// g(r) = sum_{k>=r} 1/dB(k) with the model's parabolic certificate; Diverges
// means the model is parabolic.
SeriesVerdict model_green(const RadialModel& model, std::int64_t r,
                          const SeriesOptions& opts = {});

Classification classify(const RadialModel& model, const SeriesOptions& opts = {});

// Exact finite reindexing identity
//   sum_{r=0}^{R} m(S_r) sum_{k=r}^{R} 1/dB(k) = sum_{k=0}^{R} m(B_k)/dB(k);
// returns the relative discrepancy (pure floating-point reordering error,
// expected <= 1e-12).
double reindex_identity_check(const RadialModel& model, std::int64_t R);

// Monotone partial sums sum_{B_R} g_R(x0,y) m(y) across an exhaustion, with a
// growth fit. Evidence only - never a proof for non-radial graphs.
struct EvidenceReport {
  enum class Trend { Growing, Saturating, Mixed };
  std::vector<std::int64_t> radii;
  std::vector<double> sums;
  Trend trend = Trend::Mixed;
  double exponent = 0.0;  // log-log slope over the trailing half
  std::string fit;
};

EvidenceReport l1_evidence_general(const GraphSpec& spec, const std::string& x0_label,
                                   std::int64_t R_max);

}  // namespace liouville
