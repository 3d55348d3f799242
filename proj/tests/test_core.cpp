#include <catch2/catch_amalgamated.hpp>

#include "symsep/core.hpp"

#include <cmath>

using namespace symsep;

TEST_CASE("integer helpers") {
  REQUIRE(ipow(2, 0) == 1);
  REQUIRE(ipow(2, 10) == 1024);
  REQUIRE(ipow(3, 4) == 81);
  REQUIRE(factorial(0) == 1);
  REQUIRE(factorial(5) == 120);
  REQUIRE(binomial(4, 2) == 6);
  REQUIRE(binomial(7, 0) == 1);
  REQUIRE(binomial(3, 5) == 0);
  // rank of the bosonic subspace for (n, N) = (2, 4) and (3, 3)
  REQUIRE(binomial(2 + 4 - 1, 4) == 5);
  REQUIRE(binomial(3 + 3 - 1, 3) == 10);
}

TEST_CASE("max_abs scans every entry") {
  Matrix m(2, 2);
  m << Complex(0.0, 0.0), Complex(0.25, 0.0), Complex(0.0, -0.75),
      Complex(0.1, 0.1);
  REQUIRE(max_abs(m) == Catch::Approx(0.75));
}

TEST_CASE("hermitian eigendecomposition") {
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;

  SECTION("pauli x spectrum and reconstruction") {
    EigenSystem es = eig_hermitian(sx);
    REQUIRE(es.values(0) == Catch::Approx(-1.0).margin(1e-14));
    REQUIRE(es.values(1) == Catch::Approx(1.0).margin(1e-14));
    Matrix rebuilt =
        es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
    REQUIRE(max_abs(rebuilt - sx) < 1e-13);
  }

  SECTION("columns come out with a deterministic phase") {
    // Feed the same operator twice through different global phases of an
    // eigenbasis; the anchored output must agree.
    EigenSystem a = eig_hermitian(sx);
    EigenSystem b = eig_hermitian((sx * Complex(1.0, 0.0)).eval());
    REQUIRE(max_abs(a.vectors - b.vectors) < 1e-14);
    for (Eigen::Index c = 0; c < a.vectors.cols(); ++c) {
      Eigen::Index lead = 0;
      for (; lead < a.vectors.rows(); ++lead) {
        if (std::abs(a.vectors(lead, c)) > 1e-8) break;
      }
      REQUIRE(a.vectors(lead, c).imag() == Catch::Approx(0.0).margin(1e-14));
      REQUIRE(a.vectors(lead, c).real() > 0.0);
    }
  }

  SECTION("eigenvalues-only variant matches") {
    Matrix h(3, 3);
    h << 2, Complex(0, 1), 0, Complex(0, -1), 2, 0, 0, 0, -1;
    EigenSystem es = eig_hermitian(h);
    RealVector vals = eigenvalues_hermitian(h);
    REQUIRE((vals - es.values).cwiseAbs().maxCoeff() < 1e-13);
  }

  SECTION("non-hermitian input is rejected") {
    Matrix bad(2, 2);
    bad << 0, 1, 2, 0;
    REQUIRE_THROWS_AS(eig_hermitian(bad), validation_error);
  }
}

TEST_CASE("pure state validation") {
  Vector v(2);
  v << Complex(1.0, 0.0), Complex(0.0, 0.0);
  PureState s(v);
  REQUIRE(s.dim() == 2);
  REQUIRE(max_abs(s.projector().matrix() * s.amplitudes() - s.amplitudes()) <
          1e-14);

  Vector unnormalized(2);
  unnormalized << Complex(1.0, 0.0), Complex(1.0, 0.0);
  REQUIRE_THROWS_AS(PureState(unnormalized), validation_error);

  Vector empty(0);
  REQUIRE_THROWS_AS(PureState(empty), validation_error);
}

TEST_CASE("density matrix validation") {
  SECTION("maximally mixed qubit passes") {
    Matrix m = Matrix::Identity(2, 2) * 0.5;
    DensityMatrix rho(m);
    REQUIRE(rho.dim() == 2);
  }
  SECTION("trace must be one") {
    Matrix m = Matrix::Identity(2, 2);
    REQUIRE_THROWS_AS(DensityMatrix(m), validation_error);
  }
  SECTION("negative eigenvalues are rejected") {
    Matrix m(2, 2);
    m << 1.5, 0, 0, -0.5;
    REQUIRE_THROWS_AS(DensityMatrix(m), validation_error);
  }
  SECTION("non-hermitian is rejected") {
    Matrix m(2, 2);
    m << 0.5, 0.3, 0.0, 0.5;
    REQUIRE_THROWS_AS(DensityMatrix(m), validation_error);
  }
}

TEST_CASE("projector validation and rank") {
  SECTION("zero projector is legal with rank zero") {
    Projector p(Matrix::Zero(3, 3));
    REQUIRE(p.rank() == 0);
  }
  SECTION("rank-one projector") {
    Vector v(2);
    v << std::sqrt(0.5), std::sqrt(0.5);
    Projector p((v * v.adjoint()).eval());
    REQUIRE(p.rank() == 1);
  }
  SECTION("non-idempotent is rejected") {
    Matrix m = Matrix::Identity(2, 2) * 0.5;
    REQUIRE_THROWS_AS(Projector(m), validation_error);
  }
}

TEST_CASE("hermitian operator wrapper") {
  Matrix h(2, 2);
  h << 1, Complex(0, 2), Complex(0, -2), -1;
  HermitianOperator op(h);
  REQUIRE(op.dim() == 2);

  Matrix bad(2, 2);
  bad << 1, Complex(0, 2), Complex(0, 2), -1;
  REQUIRE_THROWS_AS(HermitianOperator(bad), validation_error);
}
