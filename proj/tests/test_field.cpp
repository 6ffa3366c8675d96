#include <doctest.h>

#include <cstdio>

#include "nearres/field.hpp"
#include "nearres/rng.hpp"

using namespace nearres;

namespace {
std::shared_ptr<const ModeSet> unit_basis(double r) {
  return ModeSet::create(TorusGeometry::unit(), BallRadius::from_double(r));
}
}  // namespace

TEST_CASE("hs_norm: zero field, two-term Parseval, shell homogeneity") {
  auto basis = unit_basis(6.0);
  CHECK(hs_norm(SpectralField::zero(basis), 0.0) == 0.0);
  CHECK(hs_norm(SpectralField::zero(basis), 2.0) == 0.0);

  SpectralField f = SpectralField::zero(basis);
  f.set({0, 0, 1}, {Complex(1, 0) / std::sqrt(3.0), Complex(1, 0) / std::sqrt(3.0),
                    Complex(0, 1) / std::sqrt(3.0)});
  f.set({0, 0, -1}, {Complex(1, 0) / std::sqrt(3.0), Complex(1, 0) / std::sqrt(3.0),
                     Complex(0, -1) / std::sqrt(3.0)});
  const double two_pi = 2.0 * M_PI;
  CHECK(hs_norm(f, 0.0) ==
        doctest::Approx(std::sqrt(2.0 * two_pi * two_pi * two_pi)).epsilon(1e-14));

  SpectralField shell = SpectralField::zero(basis);
  shell.set({3, 4, 0}, {1, 0, 0});
  shell.set({-3, -4, 0}, {1, 0, 0});
  shell.set({0, 3, 4}, {0, 1, 0});
  shell.set({0, -3, -4}, {0, 1, 0});
  CHECK(hs_norm(shell, 1.0) == doctest::Approx(5.0 * hs_norm(shell, 0.0)).epsilon(1e-14));
}

TEST_CASE("random_field: determinism, reality, divergence, normalization") {
  auto basis = unit_basis(5.0);
  const SpectralField a = random_field(basis, 2.0, 1.5, 42);
  const SpectralField b = random_field(basis, 2.0, 1.5, 42);
  CHECK(a.coeff == b.coeff);  // bitwise identical
  const SpectralField c = random_field(basis, 2.0, 1.5, 43);
  CHECK(a.coeff != c.coeff);

  CHECK(reality_residual(a) < 1e-12);
  CHECK(divergence_residual(a) < 1e-14);
  CHECK(hs_norm(a, 2.0) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(std::isfinite(hs_norm(a, 3.0)));
}

TEST_CASE("transform: identity at t=0, norm preservation, horizontal invariance") {
  auto basis = unit_basis(4.0);
  const SpectralField U = random_field(basis, 1.5, 1.0, 7);
  const SpectralField id = to_transformed(U, 50.0, 0.0);
  CHECK(id.coeff == U.coeff);

  const SpectralField u = to_transformed(U, 50.0, 0.37);
  for (double s : {0.0, 1.0, 2.0})
    CHECK(hs_norm(u, s) == doctest::Approx(hs_norm(U, s)).epsilon(1e-12));

  const SpectralField back = from_transformed(u, 50.0, 0.37);
  double worst = 0.0;
  for (std::size_t i = 0; i < U.coeff.size(); ++i)
    worst = std::max(worst, std::sqrt(abs2(U.coeff[i] - back.coeff[i])));
  CHECK(worst < 1e-13);
  CHECK(reality_residual(u) < 1e-12);
  CHECK(divergence_residual(u) < 1e-10);

  // horizontal-only field is untouched for any Omega t
  SpectralField h = SpectralField::zero(basis);
  h.set({1, 2, 0}, {Complex(0.4, 0.1), Complex(-0.2, 0.05), Complex(0, 0.3)});
  h.set({-1, -2, 0}, {Complex(0.4, -0.1), Complex(-0.2, -0.05), Complex(0, -0.3)});
  const SpectralField ht = to_transformed(h, 123.0, 0.77);
  CHECK(ht.coeff == h.coeff);
}

TEST_CASE("hs_norm: triangle inequality, homogeneity, coefficient monotonicity") {
  auto basis = unit_basis(4.0);
  const SpectralField a = random_field(basis, 1.0, 1.0, 1);
  const SpectralField b = random_field(basis, 1.0, 2.0, 2);
  SpectralField sum = a;
  for (int i = 0; i < basis->size(); ++i) sum.coeff[i] = sum.coeff[i] + b.coeff[i];
  for (double s : {0.0, 1.5}) {
    CHECK(hs_norm(sum, s) <= hs_norm(a, s) + hs_norm(b, s) + 1e-12);
    SpectralField scaled = a;
    for (auto& v : scaled.coeff) v = 3.0 * v;
    CHECK(hs_norm(scaled, s) == doctest::Approx(3.0 * hs_norm(a, s)).epsilon(1e-14));
  }
  SpectralField grown = a;
  for (auto& v : grown.coeff)
    for (int c = 0; c < 3; ++c) v[c] *= 1.5;
  CHECK(hs_norm(grown, 1.0) > hs_norm(a, 1.0));
}

TEST_CASE("field snapshot round trip") {
  auto basis = unit_basis(3.0);
  const SpectralField f = random_field(basis, 1.0, 2.0, 99);
  const std::string path = "/tmp/nearres_test_field.txt";
  save_field(f, path);
  const SpectralField g = load_field(basis, path);
  CHECK(f.coeff == g.coeff);  // %.17g round trip is exact for doubles
  std::remove(path.c_str());
}
