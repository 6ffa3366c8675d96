#include "nearres/bilinear.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nearres {

namespace {

void require_same_basis(const SpectralField& a, const SpectralField& b, const ModeSet& basis) {
  if (a.basis.get() != &basis || b.basis.get() != &basis)
    throw std::invalid_argument("bilinear: geometry/radius mismatch between fields");
}

// theorem-mode delta depends only on N_max; memoize per distinct norm
class DeltaMemo {
 public:
  explicit DeltaMemo(const BandwidthSpec& spec) : spec_(spec) {}
  double operator()(double nmax) {
    if (spec_.mode != BandwidthMode::theorem) return 0.0;
    auto it = memo_.find(nmax);
    if (it != memo_.end()) return it->second;
    const double d = solve_bandwidth_branch(spec_.c_hat / nmax, spec_.cap);
    memo_.emplace(nmax, d);
    return d;
  }

 private:
  BandwidthSpec spec_;
  std::unordered_map<double, double> memo_;
};

}  // namespace

std::shared_ptr<const TriadTable> TriadTable::build(std::shared_ptr<const ModeSet> basis,
                                                    const BandwidthSpec& spec) {
  auto table = std::make_shared<TriadTable>();
  table->basis_ = basis;
  table->spec_ = spec;
  const int M = basis->size();
  std::vector<std::vector<Pair>> rows(M);
#pragma omp parallel
  {
    DeltaMemo delta(spec);
#pragma omp for schedule(dynamic, 16)
    for (int p = 0; p < M; ++p) {
      const WaveVector& wp = basis->mode(p);
      auto& row = rows[p];
      for (int k = 0; k < M; ++k) {
        const WaveVector& wk = basis->mode(k);
        const int m = basis->index_of(wp.n - wk.n);
        if (m < 0) continue;
        const WaveVector& wm = basis->mode(m);
        bool keep = true;
        if (spec.mode != BandwidthMode::all_pass) {
          double del;
          if (spec.mode == BandwidthMode::theorem)
            del = delta(std::max({wp.norm, wk.norm, wm.norm}));
          else if (spec.mode == BandwidthMode::constant)
            del = std::min(spec.const_delta, spec.cap);
          else
            del = 0.0;
          keep = min_triplet(wp, wk, wm) <= del;  // indicator is even: 1_N(-p,k,m)=1_N(p,-k,-m)
        }
        if (keep) row.push_back({k, m});
      }
    }
  }
  table->offsets_.resize(M + 1);
  std::size_t total = 0;
  for (int p = 0; p < M; ++p) {
    table->offsets_[p] = total;
    total += rows[p].size();
  }
  table->offsets_[M] = total;
  table->pairs_.reserve(total);
  for (int p = 0; p < M; ++p)
    table->pairs_.insert(table->pairs_.end(), rows[p].begin(), rows[p].end());
  return table;
}

SpectralField bilinear(const SpectralField& U, const SpectralField& V, const TriadTable& table) {
  const ModeSet& basis = table.basis();
  require_same_basis(U, V, basis);
  SpectralField out = SpectralField::zero(table.basis_ptr());
  const int M = basis.size();
  const Complex iu(0.0, 1.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (int p = 0; p < M; ++p) {
    Vec3c acc{};
    for (const TriadTable::Pair* it = table.pairs_begin(p); it != table.pairs_end(p); ++it) {
      const Complex s = iu * dot(U.coeff[it->k], basis.mode(it->m).adjusted);
      const Vec3c& vm = V.coeff[it->m];
      acc[0] += s * vm[0];
      acc[1] += s * vm[1];
      acc[2] += s * vm[2];
    }
    out.coeff[p] = leray_project(basis.mode(p), acc);
  }
  return out;
}

SpectralField bilinear_serial(const SpectralField& U, const SpectralField& V,
                              const BandwidthSpec& spec) {
  const ModeSet& basis = *U.basis;
  require_same_basis(U, V, basis);
  SpectralField out = SpectralField::zero(U.basis);
  const int M = basis.size();
  const Complex iu(0.0, 1.0);
  for (int p = 0; p < M; ++p) {
    const WaveVector& wp = basis.mode(p);
    Vec3c acc{};
    for (int k = 0; k < M; ++k) {
      const int m = basis.index_of(wp.n - basis.mode(k).n);
      if (m < 0) continue;
      const WaveVector& wk = basis.mode(k);
      const WaveVector& wm = basis.mode(m);
      if (spec.mode != BandwidthMode::all_pass &&
          min_triplet(wp, wk, wm) > bandwidth(wp, wk, wm, spec))
        continue;
      const Complex s = iu * dot(U.coeff[k], wm.adjusted);
      const Vec3c& vm = V.coeff[m];
      acc[0] += s * vm[0];
      acc[1] += s * vm[1];
      acc[2] += s * vm[2];
    }
    out.coeff[p] = leray_project(wp, acc);
  }
  return out;
}

SpectralField bilinear_transformed(double tau, const SpectralField& u, const SpectralField& v,
                                   const TriadTable& table) {
  const ModeSet& basis = table.basis();
  require_same_basis(u, v, basis);
  const int M = basis.size();
  SpectralField eu = SpectralField::zero(table.basis_ptr());
  for (int i = 0; i < M; ++i) eu.coeff[i] = wave_exponential(basis.mode(i), tau, u.coeff[i]);
  SpectralField ev;
  if (&u == &v || u.coeff == v.coeff) {
    ev = eu;
  } else {
    ev = SpectralField::zero(table.basis_ptr());
    for (int i = 0; i < M; ++i) ev.coeff[i] = wave_exponential(basis.mode(i), tau, v.coeff[i]);
  }
  SpectralField w = bilinear(eu, ev, table);
  for (int i = 0; i < M; ++i) w.coeff[i] = wave_exponential(basis.mode(i), -tau, w.coeff[i]);
  return w;
}

double trilinear(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                 double s, const TriadTable& table) {
  const ModeSet& basis = table.basis();
  require_same_basis(u, v, basis);
  if (w.basis.get() != &basis)
    throw std::invalid_argument("trilinear: geometry/radius mismatch between fields");
  const int M = basis.size();
  const Complex iu(0.0, 1.0);
  std::vector<Complex> partial(M);
#pragma omp parallel for schedule(dynamic, 16)
  for (int p = 0; p < M; ++p) {
    const double wgt = (s == 0.0) ? 1.0 : std::pow(basis.mode(p).norm, 2.0 * s);
    Complex acc(0.0, 0.0);
    for (const TriadTable::Pair* it = table.pairs_begin(p); it != table.pairs_end(p); ++it) {
      const Complex fac = iu * dot(u.coeff[it->k], basis.mode(it->m).adjusted);
      const Vec3c& vm = v.coeff[it->m];
      const Vec3c& wp = w.coeff[p];
      acc += fac * (vm[0] * std::conj(wp[0]) + vm[1] * std::conj(wp[1]) + vm[2] * std::conj(wp[2]));
    }
    partial[p] = wgt * acc;
  }
  Complex total(0.0, 0.0);
  for (int p = 0; p < M; ++p) total += partial[p];  // fixed order: bit-stable
  return (basis.geom().volume() * total).real();
}

double estimate_ratio_2d(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                         double s, const TriadTable& table) {
  const double lhs = std::abs(trilinear(u, v, w, s, table));
  const double two_s = std::pow(2.0, s);
  const double rhs =
      two_s * (hs_norm(u, 0) * hs_norm(v, s + 1) + hs_norm(u, s) * hs_norm(v, 1)) *
          hs_norm(w, s + 1) +
      two_s * (hs_norm(u, 1) * hs_norm(v, s + 1) + hs_norm(u, s + 1) * hs_norm(v, 1)) *
          hs_norm(w, s);
  if (rhs == 0.0) {
    if (lhs == 0.0 && hs_norm(u, 0) + hs_norm(v, 0) + hs_norm(w, 0) > 0.0) return 0.0;
    throw std::invalid_argument("estimate_ratio_2d: zero fields");
  }
  return lhs / rhs;
}

}  // namespace nearres
