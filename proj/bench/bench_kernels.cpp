// Timing comparison between the serial reference kernels and the
// OpenMP-parallel paths, plus a max-deviation check (expected: bitwise 0).

#include <chrono>
#include <cstdio>

#include "nearres/bilinear.hpp"
#include "nearres/solver.hpp"
#include "nearres/sublevel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace nearres;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_dev(const SpectralField& a, const SpectralField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coeff.size(); ++i)
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, std::abs(a.coeff[i][c] - b.coeff[i][c]));
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  const double radius = argc > 1 ? std::strtod(argv[1], nullptr) : 6.0;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 20;

  const TorusGeometry geom = TorusGeometry::unit();
  auto basis = ModeSet::create(geom, BallRadius::from_double(radius));
  std::printf("radius %.3g: %d modes", radius, basis->size());
#ifdef _OPENMP
  std::printf(", %d threads\n", omp_get_max_threads());
#else
  std::printf(", no OpenMP\n");
#endif

  BandwidthSpec spec;
  spec.mode = BandwidthMode::theorem;
  const SpectralField u = random_field(basis, 2.0, 1.0, 42);
  const SpectralField v = random_field(basis, 2.0, 1.0, 43);

  auto t0 = std::chrono::steady_clock::now();
  auto table = TriadTable::build(basis, spec);
  std::printf("triad table: %zu pairs, built in %.3f s\n", table->pair_count(),
              seconds_since(t0));

  t0 = std::chrono::steady_clock::now();
  SpectralField ref;
  for (int r = 0; r < reps; ++r) ref = bilinear_serial(u, v, spec);
  const double t_serial = seconds_since(t0) / reps;

  t0 = std::chrono::steady_clock::now();
  SpectralField par;
  for (int r = 0; r < reps; ++r) par = bilinear(u, v, *table);
  const double t_par = seconds_since(t0) / reps;

  std::printf("bilinear: serial %.4f s/eval, parallel+table %.4f s/eval, speedup %.2fx, "
              "max dev %.3g\n",
              t_serial, t_par, t_serial / t_par, max_dev(ref, par));

  SublevelProblem prob;
  prob.geom = geom;
  prob.n = {0, 0, 64};
  prob.delta = 0.01;
  const long long samples = 4'000'000;
  t0 = std::chrono::steady_clock::now();
  const McResult mc = volume_mc(prob, samples, 7);
  std::printf("volume_mc: %lld samples in %.3f s (est %.6g +- %.2g)\n", samples,
              seconds_since(t0), mc.estimate, mc.std_error);
  return 0;
}
