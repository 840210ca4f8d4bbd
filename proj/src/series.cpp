#include "liouville/series.hpp"

#include <cmath>
#include <sstream>

#include "liouville/errors.hpp"

namespace liouville {

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

std::string certificate_name(const SeriesCertificate& cert) {
  struct Visitor {
    std::string operator()(const RatioBound& c) const {
      std::ostringstream os;
      os << "ratio bound q=" << c.q << " from k=" << c.k0;
      return os.str();
    }
    std::string operator()(const PowerMajorant& c) const {
      std::ostringstream os;
      os << "power majorant " << c.C << "*k^-" << c.p << " from k=" << c.k0;
      return os.str();
    }
    std::string operator()(const ConstantMinorant& c) const {
      std::ostringstream os;
      os << "constant minorant c=" << c.c << " from k=" << c.k0;
      return os.str();
    }
    std::string operator()(const HarmonicMinorant& c) const {
      std::ostringstream os;
      os << "harmonic minorant " << c.c << "/k from k=" << c.k0;
      return os.str();
    }
    std::string operator()(const Telescoping&) const { return "telescoping closed form"; }
  };
  return std::visit(Visitor{}, cert);
}

namespace {

constexpr double kValidationTol = 1e-12;

// Once a geometric certificate bounds the remainder below this (relative to
// the partial sum), further terms cannot move a double-precision total; the
// scan stops there. This also keeps geometrically growing weight functions
// from being evaluated past the representable range.
constexpr double kNegligibleTail = 1e-18;

// Relative slack allowed when validating certificate inequalities: the
// declared facts are exact statements about the true terms; the scanned
// values carry at most a few ulps of evaluation noise.
bool leq(double a, double b) {
  return a <= b + kValidationTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

SeriesResult sum_series(const std::function<double(std::int64_t)>& term,
                        std::int64_t k_start,
                        const std::optional<SeriesCertificate>& cert,
                        const SeriesOptions& opts) {
  if (opts.n_max < k_start) throw SpecError("sum_series: n_max below first index");

  SeriesResult result;
  CompensatedSum sum;
  std::int64_t n_terms = opts.n_max - k_start + 1;
  std::int64_t stride = std::max<std::int64_t>(1, n_terms / std::max<std::int64_t>(1, opts.trajectory_points));

  // A ratio bound that has held so far licenses stopping the scan early.
  const RatioBound* ratio = cert ? std::get_if<RatioBound>(&*cert) : nullptr;
  if (ratio && !(ratio->q > 0.0 && ratio->q < 1.0)) ratio = nullptr;
  std::int64_t ratio_from = ratio ? std::max(ratio->k0, k_start) : 0;
  bool ratio_held = ratio != nullptr;

  double last_term = 0.0;
  double prev_term = 0.0;
  std::int64_t scan_end = opts.n_max;
  for (std::int64_t k = k_start; k <= opts.n_max; ++k) {
    double t = term(k);
    if (!std::isfinite(t)) throw SpecError("sum_series: term not finite at k=" + std::to_string(k));
    if (t < 0.0) throw SpecError("sum_series: negative term at k=" + std::to_string(k));
    if (ratio_held && k > ratio_from && !leq(t, ratio->q * prev_term)) ratio_held = false;
    sum.add(t);
    last_term = t;
    prev_term = t;
    if ((k - k_start) % stride == 0 || k == opts.n_max)
      result.trajectory.emplace_back(k, sum.value());
    if (ratio_held && k >= ratio_from &&
        t * ratio->q / (1.0 - ratio->q) <=
            kNegligibleTail * std::max(1.0, std::abs(sum.value()))) {
      scan_end = k;
      break;
    }
  }
  if (result.trajectory.empty() || result.trajectory.back().first != scan_end)
    result.trajectory.emplace_back(scan_end, sum.value());

  SeriesVerdict& v = result.verdict;
  v.value = sum.value();
  v.terms_used = scan_end - k_start + 1;
  v.kind = SeriesVerdict::Kind::Inconclusive;
  v.evidence = "no certificate; partial sum only";
  if (!cert) return result;

  // Validate the declared certificate over the scanned range, then conclude.
  struct Apply {
    const std::function<double(std::int64_t)>& term;
    std::int64_t k_start, scan_end;
    double partial, last_term;
    SeriesVerdict& v;

    void fail(const std::string& why) {
      v.kind = SeriesVerdict::Kind::Inconclusive;
      v.evidence = "certificate invalid on scanned range: " + why;
    }

    void operator()(const RatioBound& c) {
      if (!(c.q > 0.0 && c.q < 1.0)) return fail("ratio q outside (0,1)");
      double prev = term(std::max(c.k0, k_start));
      for (std::int64_t k = std::max(c.k0, k_start) + 1; k <= scan_end; ++k) {
        double t = term(k);
        if (!leq(t, c.q * prev))
          return fail("term(" + std::to_string(k) + ") > q*term(" + std::to_string(k - 1) + ")");
        prev = t;
      }
      v.kind = SeriesVerdict::Kind::ConvergesTo;
      v.tail_bound = last_term * c.q / (1.0 - c.q);
      v.evidence = certificate_name(SeriesCertificate(c)) + " validated";
    }

    void operator()(const PowerMajorant& c) {
      if (!(c.p > 1.0) || !(c.C > 0.0)) return fail("need p > 1 and C > 0");
      std::int64_t from = std::max({c.k0, k_start, std::int64_t(1)});
      for (std::int64_t k = from; k <= scan_end; ++k)
        if (!leq(term(k), c.C * std::pow(double(k), -c.p)))
          return fail("term(" + std::to_string(k) + ") above majorant");
      v.kind = SeriesVerdict::Kind::ConvergesTo;
      v.tail_bound = c.C * std::pow(double(scan_end), 1.0 - c.p) / (c.p - 1.0);
      v.evidence = certificate_name(SeriesCertificate(c)) + " validated";
    }

    void operator()(const ConstantMinorant& c) {
      if (!(c.c > 0.0)) return fail("need c > 0");
      for (std::int64_t k = std::max(c.k0, k_start); k <= scan_end; ++k)
        if (!leq(c.c, term(k)))
          return fail("term(" + std::to_string(k) + ") below minorant");
      v.kind = SeriesVerdict::Kind::Diverges;
      v.evidence = certificate_name(SeriesCertificate(c)) +
                   " validated; partial sums grow at least linearly";
    }

    void operator()(const HarmonicMinorant& c) {
      if (!(c.c > 0.0)) return fail("need c > 0");
      std::int64_t from = std::max({c.k0, k_start, std::int64_t(1)});
      for (std::int64_t k = from; k <= scan_end; ++k)
        if (!leq(c.c / double(k), term(k)))
          return fail("term(" + std::to_string(k) + ") below harmonic minorant");
      v.kind = SeriesVerdict::Kind::Diverges;
      v.evidence = certificate_name(SeriesCertificate(c)) +
                   " validated; partial sums grow at least logarithmically";
    }

    void operator()(const Telescoping& c) {
      if (!c.phi) return fail("telescoping certificate without phi");
      for (std::int64_t k = k_start; k <= scan_end; ++k) {
        double expect = c.phi(k) - c.phi(k + 1);
        double t = term(k);
        if (std::abs(t - expect) >
            kValidationTol * std::max({1.0, std::abs(t), std::abs(expect)}))
          return fail("term(" + std::to_string(k) + ") != phi(k)-phi(k+1)");
      }
      double tail_probe = c.phi(4 * scan_end);
      if (std::abs(tail_probe) > std::abs(c.phi(k_start)) * 0.5 + kValidationTol)
        return fail("phi does not decay");
      v.kind = SeriesVerdict::Kind::ConvergesTo;
      v.value = c.phi(k_start);  // exact limit, modulo validated identity
      v.tail_bound = 0.0;
      v.evidence = "telescoping closed form validated; limit = phi(first index)";
    }
  };
  std::visit(Apply{term, k_start, scan_end, sum.value(), last_term, v}, *cert);
  return result;
}

}  // namespace liouville
