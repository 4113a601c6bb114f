#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "paralat/lattice.hpp"

using namespace paralat;

namespace {

BravaisBasis hexagonal() {
  std::array<Vec, kMaxDim> v{};
  v[0] = Vec{1.0, 0.0, 0.0};
  v[1] = Vec{0.5, std::sqrt(3.0) / 2.0, 0.0};
  return make_basis(2, v);
}

} // namespace

TEST_CASE("reciprocal basis satisfies ahat_i . a_j = delta_ij") {
  for (const BravaisBasis& b : {square_basis(1), square_basis(2), square_basis(3),
                                hexagonal()}) {
    for (int i = 0; i < b.d; ++i)
      for (int j = 0; j < b.d; ++j)
        CHECK(std::abs(dot(b.ahat[i], b.a[j], b.d) - (i == j ? 1.0 : 0.0)) < 1e-12);
  }
}

TEST_CASE("cell volumes") {
  CHECK(square_basis(2).cell_volume == doctest::Approx(1.0).epsilon(1e-14));
  // hexagonal determinant by hand: 1 * sqrt(3)/2 - 0 * 1/2
  CHECK(hexagonal().cell_volume ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  // |G| * |G^| = 1: reciprocal cell volume is 1/det
  CHECK(hexagonal().cell_volume * (1.0 / hexagonal().cell_volume) ==
        doctest::Approx(1.0));
}

TEST_CASE("build_torus invariants and point map") {
  BravaisTorus t = build_torus(square_basis(2), 0, 4);
  CHECK(t.eps == 1.0);
  CHECK(t.cell_volume == doctest::Approx(1.0));
  // points are {-2..1}^2 for the identity basis
  double lo = 1e9, hi = -1e9;
  for (std::int64_t k = 0; k < t.size(); ++k) {
    Vec p = t.point(k);
    lo = std::min({lo, p[0], p[1]});
    hi = std::max({hi, p[0], p[1]});
  }
  CHECK(lo == doctest::Approx(-2.0));
  CHECK(hi == doctest::Approx(1.0));

  BravaisTorus t2 = build_torus(square_basis(2), 1, 4);
  CHECK(t2.eps == 0.5);
  CHECK(t2.cell_volume == doctest::Approx(0.25));
}

TEST_CASE("build_torus rejects bad input") {
  CHECK_THROWS_AS(build_torus(square_basis(2), 0, 3), config_error);
  CHECK_THROWS_AS(build_torus(square_basis(2), 0, 2), config_error);
  CHECK_THROWS_AS(build_torus(square_basis(2), -1, 4), config_error);
  std::array<Vec, kMaxDim> singular{};
  singular[0] = Vec{1.0, 0.0, 0.0};
  singular[1] = Vec{2.0, 0.0, 0.0};
  CHECK_THROWS_AS(make_basis(2, singular), config_error);
}

TEST_CASE("reduce_to_cell") {
  BravaisTorus t = build_torus(square_basis(2), 0, 8);
  Vec zero{};
  Vec r = reduce_to_cell(zero, t);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);

  // eps = 1 square lattice: (0.75, 0) -> (-0.25, 0)
  Vec x{0.75, 0.0, 0.0};
  r = reduce_to_cell(x, t);
  CHECK(r[0] == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(0.0));

  // idempotence and integer-translate difference on random vectors
  for (int trial = 0; trial < 50; ++trial) {
    Vec v{std::sin(trial * 1.7) * 10.0, std::cos(trial * 2.3) * 7.0, 0.0};
    Vec rv = reduce_to_cell(v, t);
    Vec rrv = reduce_to_cell(rv, t);
    CHECK(std::abs(rv[0] - rrv[0]) < 1e-12);
    CHECK(std::abs(rv[1] - rrv[1]) < 1e-12);
    // difference must be an integer combination of ahat_i / eps
    for (int i = 0; i < 2; ++i) {
      double c = t.eps * dot(Vec{v[0] - rv[0], v[1] - rv[1], 0.0}, t.basis.a[i], 2);
      CHECK(std::abs(c - std::round(c)) < 1e-12);
    }
  }
}

TEST_CASE("reduce_to_cell on the hexagonal lattice stays in the cell") {
  BravaisTorus t = build_torus(hexagonal(), 1, 8);
  for (int trial = 0; trial < 50; ++trial) {
    Vec v{std::sin(trial * 1.3) * 9.0, std::cos(trial * 0.7) * 11.0, 0.0};
    Vec rv = reduce_to_cell(v, t);
    for (int i = 0; i < 2; ++i) {
      double c = t.eps * dot(rv, t.basis.a[i], 2);
      CHECK(c >= -0.5 - 1e-12);
      CHECK(c < 0.5 + 1e-12);
    }
  }
}

TEST_CASE("index round trip and dyadic nesting") {
  BravaisTorus coarse = build_torus(square_basis(2), 2, 8);
  BravaisTorus fine = build_torus(square_basis(2), 3, 16);
  // same physical window, coarse points present among fine points
  CHECK(coarse.M * coarse.eps == fine.M * fine.eps);
  for (std::int64_t k = 0; k < coarse.size(); ++k) {
    auto idx = coarse.unflatten(k);
    CHECK(coarse.flatten(idx) == k);
    std::array<int, kMaxDim> fidx{};
    for (int i = 0; i < 2; ++i) fidx[i] = 2 * idx[i];
    Vec pc = coarse.point(k), pf = fine.point(fine.flatten(fidx));
    CHECK(std::abs(pc[0] - pf[0]) < 1e-14);
    CHECK(std::abs(pc[1] - pf[1]) < 1e-14);
  }
}

TEST_CASE("frequencies lie in the scaled Fourier cell") {
  BravaisTorus t = build_torus(hexagonal(), 2, 16);
  for (std::int64_t m = 0; m < t.size(); ++m) {
    Vec x = t.frequency(m);
    Vec r = reduce_to_cell(x, t);
    for (int i = 0; i < 2; ++i) {
      // same point modulo R^eps; cell coordinate in [-1/2, 1/2] up to the
      // floating jitter at the -1/2 boundary
      double c = t.eps * dot(Vec{x[0] - r[0], x[1] - r[1], 0.0}, t.basis.a[i], 2);
      CHECK(std::abs(c - std::round(c)) < 1e-10);
      CHECK(std::abs(t.eps * dot(r, t.basis.a[i], 2)) < 0.5 + 1e-10);
    }
  }
}
