#include "nearres/field.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nearres/rng.hpp"

namespace nearres {

std::shared_ptr<const ModeSet> ModeSet::create(const TorusGeometry& geom, const BallRadius& r,
                                               long long cap) {
  auto ms = std::make_shared<ModeSet>();
  ms->geom_ = geom;
  ms->radius_ = r.value;
  const std::vector<Vec3i> pts = modes_in_ball(r, geom, cap);
  ms->modes_.reserve(pts.size());
  for (const Vec3i& n : pts) ms->modes_.push_back(adjust(n, geom));
  ms->b1_ = static_cast<long long>(std::ceil(r.value * geom.l1));
  ms->b2_ = static_cast<long long>(std::ceil(r.value * geom.l2));
  ms->b3_ = static_cast<long long>(std::ceil(r.value));
  const std::size_t cells = static_cast<std::size_t>(2 * ms->b1_ + 1) *
                            static_cast<std::size_t>(2 * ms->b2_ + 1) *
                            static_cast<std::size_t>(2 * ms->b3_ + 1);
  ms->lookup_.assign(cells, -1);
  for (int i = 0; i < ms->size(); ++i) {
    const Vec3i& n = ms->modes_[i].n;
    const std::size_t cell =
        (static_cast<std::size_t>(n[0] + ms->b1_) * (2 * ms->b2_ + 1) +
         static_cast<std::size_t>(n[1] + ms->b2_)) *
            (2 * ms->b3_ + 1) +
        static_cast<std::size_t>(n[2] + ms->b3_);
    ms->lookup_[cell] = i;
  }
  ms->neg_index_.resize(ms->size());
  for (int i = 0; i < ms->size(); ++i) ms->neg_index_[i] = ms->index_of(-ms->modes_[i].n);
  return ms;
}

int ModeSet::index_of(const Vec3i& n) const {
  if (n[0] < -b1_ || n[0] > b1_ || n[1] < -b2_ || n[1] > b2_ || n[2] < -b3_ || n[2] > b3_)
    return -1;
  const std::size_t cell = (static_cast<std::size_t>(n[0] + b1_) * (2 * b2_ + 1) +
                            static_cast<std::size_t>(n[1] + b2_)) *
                               (2 * b3_ + 1) +
                           static_cast<std::size_t>(n[2] + b3_);
  return lookup_[cell];
}

SpectralField SpectralField::zero(std::shared_ptr<const ModeSet> basis) {
  SpectralField f;
  f.coeff.assign(basis->size(), Vec3c{});
  f.basis = std::move(basis);
  return f;
}

const Vec3c& SpectralField::at(const Vec3i& n) const {
  const int i = basis->index_of(n);
  if (i < 0) throw std::out_of_range("SpectralField::at: mode outside truncation ball");
  return coeff[i];
}

void SpectralField::set(const Vec3i& n, const Vec3c& v) {
  const int i = basis->index_of(n);
  if (i < 0) throw std::out_of_range("SpectralField::set: mode outside truncation ball");
  coeff[i] = v;
}

double hs_norm_sq(const SpectralField& f, double s) {
  double sum = 0.0;
  const auto& modes = f.basis->modes();
  for (int i = 0; i < f.basis->size(); ++i) {
    double w = 1.0;
    if (s == 1.0)
      w = modes[i].norm * modes[i].norm;
    else if (s != 0.0)
      w = std::pow(modes[i].norm, 2.0 * s);
    sum += w * abs2(f.coeff[i]);
  }
  return f.basis->geom().volume() * sum;
}

double hs_norm(const SpectralField& f, double s) { return std::sqrt(hs_norm_sq(f, s)); }

double reality_residual(const SpectralField& f) {
  double worst = 0.0;
  for (int i = 0; i < f.basis->size(); ++i) {
    const int j = f.basis->neg_index(i);
    const Vec3c& a = f.coeff[i];
    const Vec3c& b = f.coeff[j];
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(std::conj(a[c]) - b[c]));
  }
  return worst;
}

double divergence_residual(const SpectralField& f) {
  double worst = 0.0;
  for (int i = 0; i < f.basis->size(); ++i) {
    const WaveVector& n = f.basis->mode(i);
    const double vmag = std::sqrt(abs2(f.coeff[i]));
    if (vmag == 0.0) continue;
    worst = std::max(worst, std::abs(dot(f.coeff[i], n.adjusted)) / (n.norm * vmag));
  }
  return worst;
}

SpectralField random_field(std::shared_ptr<const ModeSet> basis, double s, double amplitude,
                           std::uint64_t seed) {
  SpectralField f = SpectralField::zero(basis);
  Rng rng(seed);
  // populate each (n,-n) pair once, in lexicographic order of the positive
  // representative, so the construction is deterministic
  for (int i = 0; i < basis->size(); ++i) {
    const int j = basis->neg_index(i);
    if (j < i) continue;  // i owns the pair
    const WaveVector& n = basis->mode(i);
    Vec3c g;
    for (int c = 0; c < 3; ++c) g[c] = Complex(rng.normal(), rng.normal());
    const double scale = std::pow(n.norm, -(s + 2.0));
    Vec3c v = leray_project(n, scale * g);
    f.coeff[i] = v;
    f.coeff[j] = {std::conj(v[0]), std::conj(v[1]), std::conj(v[2])};
  }
  const double nrm = hs_norm(f, s);
  if (nrm > 0.0) {
    const double fac = amplitude / nrm;
    for (auto& v : f.coeff) v = fac * v;
  }
  return f;
}

SpectralField to_transformed(const SpectralField& U, double omega, double t) {
  SpectralField out = U;
  const double tau = -omega * t;
  if (tau == 0.0) return out;
  for (int i = 0; i < U.basis->size(); ++i)
    out.coeff[i] = wave_exponential(U.basis->mode(i), tau, U.coeff[i]);
  return out;
}

SpectralField from_transformed(const SpectralField& u, double omega, double t) {
  return to_transformed(u, -omega, t);
}

void save_field(const SpectralField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw std::runtime_error("save_field: cannot open " + path);
  for (int i = 0; i < f.basis->size(); ++i) {
    const Vec3i& n = f.basis->mode(i).n;
    const Vec3c& v = f.coeff[i];
    std::fprintf(fp, "%lld %lld %lld %.17g %.17g %.17g %.17g %.17g %.17g\n", n[0], n[1], n[2],
                 v[0].real(), v[0].imag(), v[1].real(), v[1].imag(), v[2].real(), v[2].imag());
  }
  std::fclose(fp);
}

SpectralField load_field(std::shared_ptr<const ModeSet> basis, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("load_field: cannot open " + path);
  SpectralField f = SpectralField::zero(std::move(basis));
  long long n1, n2, n3;
  double re1, im1, re2, im2, re3, im3;
  while (std::fscanf(fp, "%lld %lld %lld %lg %lg %lg %lg %lg %lg", &n1, &n2, &n3, &re1, &im1,
                     &re2, &im2, &re3, &im3) == 9) {
    f.set({n1, n2, n3}, {Complex(re1, im1), Complex(re2, im2), Complex(re3, im3)});
  }
  std::fclose(fp);
  return f;
}

}  // namespace nearres
