#pragma once

// Joint numerical ranges of observable tuples over product states with
// identical factors: point sampling, support functions via the mean-field
// solver, planar convex hulls, and detection of flat boundary pieces of the
// separable range (exposed faces of positive length, the geometric signature
// of a ground-state phase transition).
//
// Support functions follow the minimum convention h(x) = min <x, y>, which
// makes h the ground energy of the weighted observable sum in direction x.

#include "symsep/core.hpp"
#include "symsep/groundstate.hpp"
#include "symsep/ops.hpp"
#include "symsep/random.hpp"

#include <algorithm>
#include <optional>

namespace symsep {

// m hermitian observables on k factors of dimension n.
class ObservableTuple {
 public:
  ObservableTuple(int n, int k, std::vector<HermitianOperator> operators)
      : n_(n), k_(k), operators_(std::move(operators)) {
    if (n_ < 1 || k_ < 1) {
      throw dimension_error("observable tuple: need n >= 1 and k >= 1");
    }
    if (operators_.empty()) {
      throw validation_error("observable tuple: no observables");
    }
    const long dim = ipow(n_, k_);
    for (const HermitianOperator& a : operators_) {
      if (a.dim() != dim) {
        throw dimension_error("observable tuple: operator dim " +
                              std::to_string(a.dim()) + " != n^k = " +
                              std::to_string(dim));
      }
    }
  }

  int n() const { return n_; }
  int k() const { return k_; }
  int m() const { return static_cast<int>(operators_.size()); }
  const std::vector<HermitianOperator>& operators() const {
    return operators_;
  }

 private:
  int n_;
  int k_;
  std::vector<HermitianOperator> operators_;
};

struct RangePoint {
  Eigen::VectorXd coords;
};

// One direction of a support-function sweep: the unit direction, the
// support value h, the minimizing state (one-particle for the separable
// range, full-space for the joint numerical range), and the boundary touch
// point it maps to.
struct SupportSample {
  Eigen::VectorXd direction;
  double value = 0.0;
  Vector minimizer;
  Eigen::VectorXd point;
  bool converged = true;
};

// Expectations of all observables in the identical-factor product of psi.
inline RangePoint product_range_point(const PureState& psi,
                                      const ObservableTuple& obs) {
  if (psi.dim() != obs.n()) {
    throw dimension_error("product_range_point: state dim " +
                          std::to_string(psi.dim()) + " != n");
  }
  const Vector phi = tensor_power(psi.amplitudes(), obs.k());
  Eigen::VectorXd coords(obs.m());
  for (int i = 0; i < obs.m(); ++i) {
    const Complex e = phi.adjoint() * (obs.operators()[static_cast<std::size_t>(i)].matrix() * phi);
    coords(i) = e.real();
  }
  return RangePoint{std::move(coords)};
}

// Haar-sampled cloud of product-range points.  Each sample draws from its
// own seed-derived stream, so the list is reproducible and order
// independent.
inline std::vector<RangePoint> sample_product_range(const ObservableTuple& obs,
                                                    int count,
                                                    std::uint64_t seed) {
  if (count < 1) throw validation_error("sample_product_range: count < 1");
  std::vector<RangePoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_stream(seed, static_cast<std::uint64_t>(i)));
    points.push_back(product_range_point(rng.haar_state(obs.n()), obs));
  }
  return points;
}

// Support value of the separable range in direction x (normalized
// internally): the mean-field ground energy of sum_i x_i A_i per k-subset.
inline SupportSample separable_range_support(const Eigen::VectorXd& x,
                                             const ObservableTuple& obs,
                                             const MeanFieldConfig& cfg = {}) {
  if (x.size() != obs.m()) {
    throw dimension_error("separable_range_support: direction dim " +
                          std::to_string(x.size()) + " != m");
  }
  const double norm = x.norm();
  if (!(norm > 0.0)) {
    throw validation_error("separable_range_support: zero direction");
  }
  const Eigen::VectorXd unit = x / norm;
  const long dim = ipow(obs.n(), obs.k());
  Matrix weighted = Matrix::Zero(dim, dim);
  for (int i = 0; i < obs.m(); ++i) {
    weighted += unit(i) * obs.operators()[static_cast<std::size_t>(i)].matrix();
  }
  const MeanFieldResult mf =
      mean_field_minimize(HermitianOperator(std::move(weighted)), obs.k(), cfg);
  RangePoint p = product_range_point(mf.minimizer, obs);
  return SupportSample{unit, mf.energy, mf.minimizer.amplitudes(),
                       std::move(p.coords), mf.converged};
}

// Planar convex hull, counterclockwise, collinear vertices pruned.
struct PolytopeHull2D {
  std::vector<Eigen::Vector2d> vertices;

  // min <x, v> over the hull.
  double support(const Eigen::Vector2d& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::Vector2d& v : vertices) best = std::min(best, x.dot(v));
    return best;
  }
};

inline PolytopeHull2D hull_2d(const std::vector<RangePoint>& points) {
  if (points.empty()) throw validation_error("hull_2d: no points");
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(points.size());
  for (const RangePoint& p : points) {
    if (p.coords.size() != 2) {
      throw dimension_error("hull_2d: points must be planar");
    }
    pts.emplace_back(p.coords(0), p.coords(1));
  }
  std::sort(pts.begin(), pts.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
            });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());
  if (pts.size() == 1) return PolytopeHull2D{{pts.front()}};

  constexpr double kAreaEps = 1e-12;
  const auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Eigen::Vector2d& p : pts) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= kAreaEps) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {  // upper chain
    const Eigen::Vector2d& p = pts[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= kAreaEps) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return PolytopeHull2D{std::move(hull)};
}

struct SupportEquivalenceEntry {
  Eigen::Vector2d direction;
  double sampled_min = 0.0;
  double solver_min = 0.0;
};

// Comparison of the sampled product-range hull against the mean-field
// support function over a sweep of directions.  pass requires the sampled
// minimum never to undercut the solver minimum by more than tol; the
// sampling slack (sampled minus solver, always >= 0 up to solver error) is
// reported, not failed.
struct SupportEquivalenceReport {
  std::vector<SupportEquivalenceEntry> entries;
  double max_abs_discrepancy = 0.0;
  bool pass = true;
};

inline SupportEquivalenceReport verify_support_equivalence(
    const ObservableTuple& obs, int directions, int samples, double tol,
    const MeanFieldConfig& cfg = {}) {
  if (obs.m() != 2) {
    throw dimension_error("verify_support_equivalence: needs exactly two "
                          "observables");
  }
  if (directions < 1 || samples < 1) {
    throw validation_error("verify_support_equivalence: counts must be "
                           "positive");
  }
  const std::vector<RangePoint> cloud =
      sample_product_range(obs, samples, cfg.seed);
  SupportEquivalenceReport report;
  for (int j = 0; j < directions; ++j) {
    const double theta =
        2.0 * M_PI * static_cast<double>(j) / static_cast<double>(directions);
    const Eigen::Vector2d x(std::cos(theta), std::sin(theta));
    double sampled = std::numeric_limits<double>::infinity();
    for (const RangePoint& p : cloud) {
      sampled = std::min(sampled, x.x() * p.coords(0) + x.y() * p.coords(1));
    }
    const SupportSample s = separable_range_support(x, obs, cfg);
    report.entries.push_back(SupportEquivalenceEntry{x, sampled, s.value});
    report.max_abs_discrepancy =
        std::max(report.max_abs_discrepancy, std::abs(sampled - s.value));
    if (sampled < s.value - tol) report.pass = false;
  }
  return report;
}

// Boundary of the joint numerical range of two observables: per direction,
// the minimum eigenvalue of cos(theta) a1 + sin(theta) a2 and the
// expectation point of its ground eigenvector.
inline std::vector<SupportSample> joint_range_boundary_2d(
    const HermitianOperator& a1, const HermitianOperator& a2,
    int directions) {
  if (a1.dim() != a2.dim()) {
    throw dimension_error("joint_range_boundary_2d: operator dims differ");
  }
  if (directions < 1) {
    throw validation_error("joint_range_boundary_2d: directions < 1");
  }
  std::vector<SupportSample> samples;
  samples.reserve(static_cast<std::size_t>(directions));
  for (int j = 0; j < directions; ++j) {
    const double theta =
        2.0 * M_PI * static_cast<double>(j) / static_cast<double>(directions);
    const Eigen::Vector2d x(std::cos(theta), std::sin(theta));
    const EigenSystem sys =
        eig_hermitian(x.x() * a1.matrix() + x.y() * a2.matrix());
    const Vector v = sys.vectors.col(0);
    Eigen::VectorXd point(2);
    point(0) = Complex(v.adjoint() * (a1.matrix() * v)).real();
    point(1) = Complex(v.adjoint() * (a2.matrix() * v)).real();
    Eigen::VectorXd dir(2);
    dir << x.x(), x.y();
    samples.push_back(SupportSample{dir, sys.values(0), v, point, true});
  }
  return samples;
}

// Flat boundary piece: the direction interval over which the minimizer
// sweeps across it and the two extreme boundary points.
struct FlatSegment {
  double theta_begin = 0.0;
  double theta_end = 0.0;
  Eigen::Vector2d endpoint_a;
  Eigen::Vector2d endpoint_b;
};

// Scans a support sweep for exposed faces of positive length: consecutive
// minimizing boundary points that jump while staying consistent with one
// common supporting line (within gap_tol, collinearity of all points of the
// merged jump run).  Only faces longer than length_tol are reported;
// length_tol is the detector's minimum feature size, and jumps of at most
// gap_tol count as continuous boundary motion.
//
// The samples must sweep counterclockwise; a sweep spanning the full circle
// is treated as closed.
inline std::vector<FlatSegment> detect_flat_segments(
    const std::vector<SupportSample>& samples, double gap_tol = 1e-6,
    double length_tol = 1.05) {
  if (samples.size() < 2) {
    throw validation_error("detect_flat_segments: need at least two samples");
  }
  if (!(gap_tol > 0.0) || !(length_tol > 0.0)) {
    throw validation_error("detect_flat_segments: tolerances must be "
                           "positive");
  }
  const std::size_t m = samples.size();
  std::vector<Eigen::Vector2d> dirs(m);
  std::vector<Eigen::Vector2d> pts(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (samples[i].direction.size() != 2 || samples[i].point.size() != 2) {
      throw dimension_error("detect_flat_segments: samples must be planar");
    }
    dirs[i] = Eigen::Vector2d(samples[i].direction(0),
                              samples[i].direction(1)).normalized();
    pts[i] = Eigen::Vector2d(samples[i].point(0), samples[i].point(1));
  }

  // Accumulated sweep angles; the sweep must rotate counterclockwise.
  std::vector<double> thetas(m);
  thetas[0] = std::atan2(dirs[0].y(), dirs[0].x());
  if (thetas[0] < 0.0) thetas[0] += 2.0 * M_PI;
  for (std::size_t i = 1; i < m; ++i) {
    const double c = dirs[i - 1].x() * dirs[i].y() -
                     dirs[i - 1].y() * dirs[i].x();
    const double d = dirs[i - 1].dot(dirs[i]);
    const double delta = std::atan2(c, d);
    if (!(delta > 0.0)) {
      throw validation_error(
          "detect_flat_segments: directions must rotate counterclockwise");
    }
    thetas[i] = thetas[i - 1] + delta;
  }
  const double span = thetas[m - 1] - thetas[0];
  const double mean_step = span / static_cast<double>(m - 1);
  const bool closed = span > 2.0 * M_PI - 2.0 * mean_step;

  struct Pair {
    std::size_t a, b;
    double theta_a, theta_b;
    bool flagged = false;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    pairs.push_back(Pair{i, i + 1, thetas[i], thetas[i + 1], false});
  }
  if (closed) {
    const double wrap = thetas[0] + 2.0 * M_PI;
    pairs.push_back(Pair{m - 1, 0, thetas[m - 1], wrap, false});
  }

  for (Pair& pr : pairs) {
    const Eigen::Vector2d jump = pts[pr.b] - pts[pr.a];
    const double len = jump.norm();
    if (len <= gap_tol) continue;
    // A supporting line containing both points has normal perpendicular to
    // the jump; for a genuine exposed face that normal falls inside the
    // direction interval of the pair (one local step of slack).
    const Eigen::Vector2d u = jump / len;
    const double slack = pr.theta_b - pr.theta_a;
    bool normal_inside = false;
    for (const double sign : {1.0, -1.0}) {
      const Eigen::Vector2d normal(sign * u.y(), -sign * u.x());
      double phi = std::atan2(normal.y(), normal.x());
      while (phi < pr.theta_a - slack) phi += 2.0 * M_PI;
      if (phi <= pr.theta_b + slack) {
        normal_inside = true;
        break;
      }
    }
    pr.flagged = normal_inside;
  }

  // Start the circular scan on an unflagged pair so a face straddling the
  // seam is merged in one piece.
  std::size_t start = 0;
  if (closed) {
    while (start < pairs.size() && pairs[start].flagged) ++start;
    if (start == pairs.size()) start = 0;  // everything flagged; give up
  }

  std::vector<FlatSegment> segments;

  // Splits a maximal run of flagged pairs into straight pieces: sub-runs
  // whose points all sit on the line through their extremes (within
  // gap_tol), emitting those longer than length_tol.
  const auto flush = [&](const std::vector<std::size_t>& run) {
    if (run.empty()) return;
    std::vector<Eigen::Vector2d> run_pts;
    run_pts.push_back(pts[pairs[run.front()].a]);
    for (std::size_t idx : run) run_pts.push_back(pts[pairs[idx].b]);

    const auto straight = [&](std::size_t lo, std::size_t hi) {
      const Eigen::Vector2d base = run_pts[lo];
      const Eigen::Vector2d axis = run_pts[hi] - base;
      const double len = axis.norm();
      if (len <= 0.0) return false;
      const Eigen::Vector2d normal(-axis.y() / len, axis.x() / len);
      for (std::size_t i = lo + 1; i < hi; ++i) {
        if (std::abs(normal.dot(run_pts[i] - base)) > gap_tol) return false;
      }
      return true;
    };

    std::size_t lo = 0;
    while (lo + 1 < run_pts.size()) {
      std::size_t hi = lo + 1;
      while (hi + 1 < run_pts.size() && straight(lo, hi + 1)) ++hi;
      const double len = (run_pts[hi] - run_pts[lo]).norm();
      if (len > length_tol) {
        const double ta = pairs[run[lo]].theta_a;
        double tb = pairs[run[hi - 1]].theta_b;
        while (tb < ta) tb += 2.0 * M_PI;  // run crossing the sweep seam
        segments.push_back(FlatSegment{ta, tb, run_pts[lo], run_pts[hi]});
      }
      lo = hi;
    }
  };

  std::vector<std::size_t> run;
  for (std::size_t step = 0; step < pairs.size(); ++step) {
    const std::size_t idx = (start + step) % pairs.size();
    if (pairs[idx].flagged) {
      run.push_back(idx);
    } else if (!run.empty()) {
      flush(run);
      run.clear();
    }
  }
  flush(run);
  std::sort(segments.begin(), segments.end(),
            [](const FlatSegment& a, const FlatSegment& b) {
              return a.theta_begin < b.theta_begin;
            });
  return segments;
}

}  // namespace symsep
