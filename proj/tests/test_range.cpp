#include <catch2/catch_amalgamated.hpp>

#include "symsep/ops.hpp"
#include "symsep/random.hpp"
#include "symsep/range.hpp"

#include <cmath>

using namespace symsep;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// (sz (x) sz, sx (x) sx) on pairs: the product-state image is the full
// triangle with corners (0,0), (1,0), (0,1), since the coordinates are
// (<sz>^2, <sx>^2) and a qubit obeys <sz>^2 + <sx>^2 <= 1.
ObservableTuple triangle_tuple() {
  std::vector<HermitianOperator> ops;
  ops.emplace_back(kron(pauli_z(), pauli_z()));
  ops.emplace_back(kron(pauli_x(), pauli_x()));
  return ObservableTuple(2, 2, std::move(ops));
}

// support function of that triangle
double triangle_support(const Eigen::Vector2d& x) {
  return std::min(0.0, std::min(x(0), x(1)));
}

ObservableTuple disk_tuple() {
  std::vector<HermitianOperator> ops;
  ops.emplace_back(pauli_z());
  ops.emplace_back(pauli_x());
  return ObservableTuple(2, 1, std::move(ops));
}

}  // namespace

TEST_CASE("observable tuple validation") {
  std::vector<HermitianOperator> ops;
  ops.emplace_back(pauli_z());
  REQUIRE_THROWS_AS(ObservableTuple(2, 2, ops), dimension_error);
  REQUIRE_THROWS_AS(ObservableTuple(2, 1, {}), validation_error);
  ObservableTuple ok(2, 1, ops);
  REQUIRE(ok.m() == 1);
}

TEST_CASE("product-state expectation points") {
  ObservableTuple obs = triangle_tuple();

  SECTION("matches the Bloch parametrization") {
    for (double theta : {0.3, 1.1, 2.0}) {
      for (double phi : {0.0, 0.7, 2.9}) {
        Vector v(2);
        v(0) = std::cos(theta / 2.0);
        v(1) = std::polar(std::sin(theta / 2.0), phi);
        RangePoint p = product_range_point(PureState(v), obs);
        const double u = std::cos(theta);
        const double w = std::sin(theta) * std::cos(phi);
        REQUIRE(p.coords(0) == Catch::Approx(u * u).margin(1e-12));
        REQUIRE(p.coords(1) == Catch::Approx(w * w).margin(1e-12));
      }
    }
  }

  SECTION("samples are reproducible and land inside the triangle") {
    auto pts = sample_product_range(obs, 500, 11);
    auto pts2 = sample_product_range(obs, 500, 11);
    REQUIRE(pts.size() == 500);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      REQUIRE(pts[i].coords == pts2[i].coords);
      const double a = pts[i].coords(0), b = pts[i].coords(1);
      REQUIRE(a >= -1e-12);
      REQUIRE(b >= -1e-12);
      REQUIRE(a + b <= 1.0 + 1e-12);
    }
  }

  SECTION("prefixes agree across sample counts") {
    // per-point derived streams: growing the sample count must not reshuffle
    // earlier points
    auto small = sample_product_range(obs, 50, 5);
    auto large = sample_product_range(obs, 200, 5);
    for (std::size_t i = 0; i < small.size(); ++i) {
      REQUIRE(small[i].coords == large[i].coords);
    }
  }
}

TEST_CASE("support values of the product-state hull") {
  ObservableTuple obs = triangle_tuple();

  SECTION("matches the polytope support function") {
    const int D = 16;
    for (int j = 0; j < D; ++j) {
      const double theta = 2.0 * M_PI * j / D;
      Eigen::Vector2d x(std::cos(theta), std::sin(theta));
      SupportSample s = separable_range_support(x, obs);
      REQUIRE(s.value ==
              Catch::Approx(triangle_support(x)).margin(2e-6));
      // the reported touch point realizes the support value
      REQUIRE(x.dot(s.point) == Catch::Approx(s.value).margin(1e-9));
    }
  }

  SECTION("scaling the direction only scales the stored unit direction") {
    Eigen::Vector2d x(-2.0, -2.0);
    SupportSample s = separable_range_support(x, obs);
    REQUIRE(s.direction.norm() == Catch::Approx(1.0).margin(1e-12));
    SupportSample unit =
        separable_range_support(Eigen::Vector2d(-1.0, -1.0), obs);
    REQUIRE(s.value == Catch::Approx(unit.value).margin(1e-9));
  }

  SECTION("one-body tuple carves out the unit disk") {
    ObservableTuple obs1 = disk_tuple();
    for (int j = 0; j < 8; ++j) {
      const double theta = 2.0 * M_PI * j / 8 + 0.05;
      Eigen::Vector2d x(std::cos(theta), std::sin(theta));
      SupportSample s = separable_range_support(x, obs1);
      REQUIRE(s.value == Catch::Approx(-1.0).margin(1e-9));
    }
  }
}

TEST_CASE("planar convex hull") {
  SECTION("triangle corners survive, interior points vanish") {
    std::vector<RangePoint> pts;
    auto add = [&](double a, double b) {
      RangePoint p;
      p.coords = Eigen::Vector2d(a, b);
      pts.push_back(p);
    };
    add(0, 0);
    add(1, 0);
    add(0, 1);
    add(0.2, 0.2);
    add(0.5, 0.49);
    add(0.3, 0.1);
    PolytopeHull2D hull = hull_2d(pts);
    REQUIRE(hull.vertices.size() == 3);
    REQUIRE(hull.support(Eigen::Vector2d(-1, -1) / std::sqrt(2.0)) ==
            Catch::Approx(-1.0 / std::sqrt(2.0)).margin(1e-12));
    REQUIRE(hull.support(Eigen::Vector2d(1, 0)) ==
            Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("circle samples are all extreme") {
    std::vector<RangePoint> pts;
    const int D = 40;
    for (int j = 0; j < D; ++j) {
      RangePoint p;
      p.coords = Eigen::Vector2d(std::cos(2.0 * M_PI * j / D),
                                 std::sin(2.0 * M_PI * j / D));
      pts.push_back(p);
    }
    PolytopeHull2D hull = hull_2d(pts);
    REQUIRE(hull.vertices.size() == static_cast<std::size_t>(D));
    // support in any direction is within the chord sagitta of -1
    Eigen::Vector2d x(std::cos(0.3), std::sin(0.3));
    const double sagitta = 1.0 - std::cos(M_PI / D);
    REQUIRE(hull.support(-x) >= -1.0 - 1e-12);
    REQUIRE(hull.support(-x) <= -1.0 + sagitta + 1e-12);
  }

  SECTION("degenerate inputs") {
    std::vector<RangePoint> pts;
    RangePoint p;
    p.coords = Eigen::Vector2d(0.5, 0.5);
    pts.push_back(p);
    pts.push_back(p);
    PolytopeHull2D hull = hull_2d(pts);
    REQUIRE(hull.vertices.size() == 1);

    RangePoint q;
    q.coords = Eigen::Vector2d(1.5, 0.5);
    pts.push_back(q);
    RangePoint mid;
    mid.coords = Eigen::Vector2d(1.0, 0.5);
    pts.push_back(mid);
    PolytopeHull2D segment = hull_2d(pts);
    REQUIRE(segment.vertices.size() == 2);
  }
}

TEST_CASE("sampled and solved support values agree") {
  SupportEquivalenceReport rep =
      verify_support_equivalence(triangle_tuple(), 32, 4000, 2e-3);
  REQUIRE(rep.pass);
  REQUIRE(rep.entries.size() == 32);
  REQUIRE(rep.max_abs_discrepancy < 2e-3);
  for (const auto& e : rep.entries) {
    // sampling can only overshoot the true minimum
    REQUIRE(e.sampled_min >= e.solver_min - 2e-3);
  }
}

TEST_CASE("exact boundary of the two-observable joint range") {
  SECTION("single qubit gives the unit circle") {
    auto samples = joint_range_boundary_2d(HermitianOperator(pauli_z()),
                                           HermitianOperator(pauli_x()), 24);
    REQUIRE(samples.size() == 24);
    for (const auto& s : samples) {
      REQUIRE(s.point.norm() == Catch::Approx(1.0).margin(1e-10));
      REQUIRE(s.value == Catch::Approx(-1.0).margin(1e-10));
    }
  }

  SECTION("pair observables reach the entangled corner") {
    HermitianOperator zz(kron(pauli_z(), pauli_z()));
    HermitianOperator xx(kron(pauli_x(), pauli_x()));
    auto samples = joint_range_boundary_2d(zz, xx, 8);
    // direction (1,1)/sqrt(2) appears at theta = pi/4 = sample 1 and is
    // minimized by the singlet at the corner (-1,-1)
    const auto& diag = samples[1];
    REQUIRE(diag.direction(0) == Catch::Approx(std::sqrt(0.5)).margin(1e-12));
    REQUIRE(diag.value == Catch::Approx(-std::sqrt(2.0)).margin(1e-10));
    REQUIRE(diag.point(0) == Catch::Approx(-1.0).margin(1e-9));
    REQUIRE(diag.point(1) == Catch::Approx(-1.0).margin(1e-9));
  }
}

TEST_CASE("flat pieces of a swept boundary") {
  ObservableTuple obs = triangle_tuple();
  const int D = 64;
  std::vector<SupportSample> sweep;
  for (int j = 0; j < D; ++j) {
    const double theta = 2.0 * M_PI * j / D;
    sweep.push_back(separable_range_support(
        Eigen::Vector2d(std::cos(theta), std::sin(theta)), obs));
  }

  SECTION("default threshold isolates the long hypotenuse") {
    auto segments = detect_flat_segments(sweep);
    REQUIRE(segments.size() == 1);
    const FlatSegment& seg = segments[0];
    Eigen::Vector2d lo = seg.endpoint_a, hi = seg.endpoint_b;
    if (lo(0) < hi(0)) std::swap(lo, hi);
    REQUIRE((lo - Eigen::Vector2d(1, 0)).norm() < 2e-3);
    REQUIRE((hi - Eigen::Vector2d(0, 1)).norm() < 2e-3);
    REQUIRE(seg.theta_begin <= 1.25 * M_PI);
    REQUIRE(seg.theta_end >= 1.25 * M_PI);
  }

  SECTION("a finer length threshold reveals all three edges") {
    auto segments = detect_flat_segments(sweep, 1e-6, 0.5);
    REQUIRE(segments.size() == 3);
    double total = 0.0;
    for (const auto& s : segments) {
      total += (s.endpoint_a - s.endpoint_b).norm();
    }
    REQUIRE(total == Catch::Approx(2.0 + std::sqrt(2.0)).margin(5e-3));
  }

  SECTION("smooth boundaries report nothing") {
    auto circle = joint_range_boundary_2d(HermitianOperator(pauli_z()),
                                          HermitianOperator(pauli_x()), 64);
    REQUIRE(detect_flat_segments(circle).empty());

    std::vector<SupportSample> disk_sweep;
    ObservableTuple obs1 = disk_tuple();
    for (int j = 0; j < D; ++j) {
      const double theta = 2.0 * M_PI * j / D;
      disk_sweep.push_back(separable_range_support(
          Eigen::Vector2d(std::cos(theta), std::sin(theta)), obs1));
    }
    REQUIRE(detect_flat_segments(disk_sweep).empty());
  }
}
