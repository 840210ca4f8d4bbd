#include "liouville/model_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "liouville/dirichlet.hpp"
#include "liouville/errors.hpp"

namespace liouville {

const char* answer_name(Classification::Answer a) {
  switch (a) {
    case Classification::Answer::Yes: return "Yes";
    case Classification::Answer::No: return "No";
    default: return "Unknown";
  }
}

SeriesVerdict model_green(const RadialModel& model, std::int64_t r,
                          const SeriesOptions& opts) {
  if (r < 0) throw SpecError("model_green needs r >= 0");
  auto term = [&model](std::int64_t k) { return model.inv_boundary_weight(k); };
  return sum_series(term, r, model.certificates().parabolic, opts).verdict;
}

namespace {

Classification::Answer answer_of(const SeriesVerdict& v, bool diverges_means_yes) {
  switch (v.kind) {
    case SeriesVerdict::Kind::Diverges:
      return diverges_means_yes ? Classification::Answer::Yes
                                : Classification::Answer::No;
    case SeriesVerdict::Kind::ConvergesTo:
      return diverges_means_yes ? Classification::Answer::No
                                : Classification::Answer::Yes;
    default:
      return Classification::Answer::Unknown;
  }
}

}  // namespace

Classification classify(const RadialModel& model, const SeriesOptions& opts) {
  Classification out;
  const ModelCertificates& certs = model.certificates();

  auto term_parabolic = [&model](std::int64_t k) {
    return model.inv_boundary_weight(k);
  };
  out.parabolic = sum_series(term_parabolic, 0, certs.parabolic, opts).verdict;
  out.parabolic_ans = answer_of(out.parabolic, /*diverges_means_yes=*/true);

  // ball-measure prefix, grown on demand so only scanned radii get evaluated
  std::vector<double> ballm;
  CompensatedSum ballm_acc;
  auto ball_measure = [&model, &ballm, &ballm_acc](std::int64_t k) {
    while (std::int64_t(ballm.size()) <= k) {
      ballm_acc.add(model.sphere_measure(std::int64_t(ballm.size())));
      ballm.push_back(ballm_acc.value());
    }
    return ballm[std::size_t(k)];
  };
  auto term_complete = [&ball_measure, &model](std::int64_t k) {
    return ball_measure(k) * model.inv_boundary_weight(k);
  };
  out.complete = sum_series(term_complete, 0, certs.complete, opts).verdict;

  if (out.parabolic_ans == Classification::Answer::Yes) {
    // recurrent case: the other two series diverge a fortiori
    if (!out.complete.decisive()) {
      out.complete.kind = SeriesVerdict::Kind::Diverges;
      out.complete.evidence =
          "implied: terms >= m(B_0)/dB(k) and the parabolic series diverges";
    }
    out.liouville.kind = SeriesVerdict::Kind::Diverges;
    out.liouville.evidence = "g = +inf on a parabolic model; the series has no finite terms";
    out.complete_ans = Classification::Answer::Yes;
    out.liouville_ans = Classification::Answer::Yes;
    out.notes = "parabolic: stochastic completeness and L1-Liouville are automatic";
    return out;
  }

  // third series: g(r) m(S_r) with g(r) read off a suffix sum of the parabolic
  // terms. The suffix stops where the parabolic scan stopped, so every term is
  // an exact-to-rounding lower estimate -- truncation only steepens the decay,
  // which keeps ratio/majorant/minorant checks sound -- and the mass the
  // truncation drops is covered by inflating the tail bound afterwards.
  const bool transient = out.parabolic.kind == SeriesVerdict::Kind::ConvergesTo;
  const std::int64_t n_inner =
      transient ? out.parabolic.terms_used - 1  // that scan started at k = 0
                : opts.n_max;
  const double inner_tail = transient ? out.parabolic.tail_bound : 0.0;
  SeriesOptions outer_opts = opts;
  outer_opts.n_max = std::max<std::int64_t>(opts.n_max / 10, 64);
  std::vector<double> suffix(std::size_t(std::max(n_inner, outer_opts.n_max)) + 2, 0.0);
  {
    CompensatedSum acc;
    for (std::int64_t k = n_inner; k >= 0; --k) {
      acc.add(model.inv_boundary_weight(k));
      suffix[std::size_t(k)] = acc.value();
    }
  }
  auto term_l1 = [&model, &suffix](std::int64_t r) {
    return suffix[std::size_t(r)] * model.sphere_measure(r);
  };
  out.liouville = sum_series(term_l1, 0, certs.liouville, outer_opts).verdict;
  if (out.liouville.kind == SeriesVerdict::Kind::ConvergesTo && inner_tail > 0.0)
    out.liouville.tail_bound += inner_tail * ball_measure(out.liouville.terms_used - 1);

  if (out.complete.decisive() && out.liouville.decisive() &&
      out.complete.kind != out.liouville.kind)
    throw std::logic_error(
        "internal error: the volume/conductance series and the Green-mass series "
        "reached contradictory decisive verdicts on model '" +
        model.name() + "'");

  out.complete_ans = answer_of(out.complete, true);
  if (out.complete_ans == Classification::Answer::Yes)
    out.liouville_ans = Classification::Answer::Yes;  // completeness implies L1-Liouville
  else if (out.liouville.kind == SeriesVerdict::Kind::Diverges)
    out.liouville_ans = Classification::Answer::Yes;
  else if (out.liouville.kind == SeriesVerdict::Kind::ConvergesTo &&
           out.parabolic_ans == Classification::Answer::No)
    out.liouville_ans = Classification::Answer::No;
  else
    out.liouville_ans = Classification::Answer::Unknown;
  return out;
}

double reindex_identity_check(const RadialModel& model, std::int64_t R) {
  if (R < 0) throw SpecError("reindex_identity_check needs R >= 0");
  std::vector<double> suffix(std::size_t(R) + 2, 0.0);
  {
    CompensatedSum acc;
    for (std::int64_t k = R; k >= 0; --k) {
      acc.add(1.0 / model.boundary_weight(k));
      suffix[k] = acc.value();
    }
  }
  CompensatedSum lhs;
  for (std::int64_t r = 0; r <= R; ++r) lhs.add(model.sphere_measure(r) * suffix[r]);
  CompensatedSum rhs, ball;
  for (std::int64_t k = 0; k <= R; ++k) {
    ball.add(model.sphere_measure(k));
    rhs.add(ball.value() / model.boundary_weight(k));
  }
  double a = lhs.value(), b = rhs.value();
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

EvidenceReport l1_evidence_general(const GraphSpec& spec, const std::string& x0_label,
                                   std::int64_t R_max) {
  if (R_max < 2) throw SpecError("l1_evidence_general needs R_max >= 2");
  EvidenceReport rep;
  for (std::int64_t R = 2; R <= R_max; ++R) {
    FiniteGraph g = materialize(spec, R);
    auto x0 = x0_label.empty() ? std::optional<VertexId>(g.root()) : g.find_vertex(x0_label);
    if (!x0)
      throw SpecError("l1_evidence_general: no vertex '" + x0_label + "' at radius " +
                      std::to_string(R));
    GreenTable t = dirichlet_green(g, *x0, R);
    CompensatedSum sum;
    for (VertexId v = 0; v < g.vertex_count(); ++v) sum.add(t.values[v] * g.measure(v));
    rep.radii.push_back(R);
    rep.sums.push_back(sum.value());
  }

  std::size_t n = rep.sums.size();
  std::size_t a = n / 2, b = n - 1;
  if (rep.sums[a] > 0 && rep.sums[b] > 0 && b > a)
    rep.exponent = std::log(rep.sums[b] / rep.sums[a]) /
                   std::log(double(rep.radii[b]) / double(rep.radii[a]));
  double rel_inc =
      n >= 2 ? (rep.sums[b] - rep.sums[n - 2]) / std::max(rep.sums[b], 1e-300) : 1.0;
  char buf[256];
  if (rel_inc < 1e-9) {
    rep.trend = EvidenceReport::Trend::Saturating;
    std::snprintf(buf, sizeof buf,
                  "saturating near %.6g: evidence against L1-Liouville", rep.sums[b]);
  } else if (rep.exponent > 0.3) {
    rep.trend = EvidenceReport::Trend::Growing;
    std::snprintf(buf, sizeof buf,
                  "unbounded growth ~ R^%.2f: evidence for L1-Liouville", rep.exponent);
  } else {
    rep.trend = EvidenceReport::Trend::Mixed;
    std::snprintf(buf, sizeof buf, "slow growth ~ R^%.2f: inconclusive at R_max=%lld",
                  rep.exponent, static_cast<long long>(R_max));
  }
  rep.fit = buf;
  return rep;
}

}  // namespace liouville
