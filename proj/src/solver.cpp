#include "nearres/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace nearres {

namespace {

bool finite(const SpectralField& f) {
  for (const Vec3c& v : f.coeff)
    for (int c = 0; c < 3; ++c)
      if (!std::isfinite(v[c].real()) || !std::isfinite(v[c].imag())) return false;
  return true;
}

void axpy(SpectralField& y, double a, const SpectralField& x) {
  for (std::size_t i = 0; i < y.coeff.size(); ++i)
    for (int c = 0; c < 3; ++c) y.coeff[i][c] += a * x.coeff[i][c];
}

void scale_modes(SpectralField& f, const std::vector<double>& fac) {
  for (std::size_t i = 0; i < f.coeff.size(); ++i)
    for (int c = 0; c < 3; ++c) f.coeff[i][c] *= fac[i];
}

// composite fourth-order quadrature of step-grid samples: Simpson pairs,
// with a 3/8 block (or a single trapezoid when unavoidable) on an odd tail
double integrate_history(const std::vector<double>& g, double dt) {
  const std::size_t n = g.empty() ? 0 : g.size() - 1;  // intervals
  if (n == 0) return 0.0;
  double total = 0.0;
  std::size_t even_end = n;
  if (n % 2 == 1) {
    if (n >= 3)
      even_end = n - 3;
    else
      return 0.5 * dt * (g[0] + g[1]);
  }
  for (std::size_t i = 0; i + 2 <= even_end; i += 2)
    total += dt / 3.0 * (g[i] + 4.0 * g[i + 1] + g[i + 2]);
  if (even_end != n)
    total += 3.0 * dt / 8.0 *
             (g[n - 3] + 3.0 * g[n - 2] + 3.0 * g[n - 1] + g[n]);
  return total;
}

}  // namespace

Integrator::Integrator(const SimConfig& cfg, std::shared_ptr<const TriadTable> table)
    : cfg_(cfg), table_(std::move(table)) {}

void Integrator::refresh_factors(double dt) const {
  if (dt == cached_dt_) return;
  const ModeSet& basis = table_->basis();
  half_factor_.resize(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const double n2 = dot(basis.mode(i).adjusted, basis.mode(i).adjusted);
    half_factor_[i] = std::exp(-cfg_.mu * n2 * 0.5 * dt);
  }
  cached_dt_ = dt;
}

SpectralField Integrator::rhs(double tau, const SpectralField& u) const {
  if (cfg_.disable_nonlinear) return SpectralField::zero(table_->basis_ptr());
  SpectralField b = bilinear_transformed(tau, u, u, *table_);
  for (auto& v : b.coeff)
    for (int c = 0; c < 3; ++c) v[c] = -v[c];
  return b;
}

void Integrator::step(SpectralField& u, double t, double dt) const {
  refresh_factors(dt);
  const double om = cfg_.omega;

  const SpectralField k1 = rhs(om * t, u);

  SpectralField a2 = u;
  axpy(a2, 0.5 * dt, k1);
  scale_modes(a2, half_factor_);
  const SpectralField k2 = rhs(om * (t + 0.5 * dt), a2);

  SpectralField a3 = u;
  scale_modes(a3, half_factor_);
  axpy(a3, 0.5 * dt, k2);
  const SpectralField k3 = rhs(om * (t + 0.5 * dt), a3);

  SpectralField a4 = u;
  scale_modes(a4, half_factor_);
  axpy(a4, dt, k3);
  scale_modes(a4, half_factor_);
  const SpectralField k4 = rhs(om * (t + dt), a4);

  // u <- E2 u + dt/6 (E2 k1 + 2 E (k2 + k3) + k4)
  SpectralField acc = k1;
  scale_modes(acc, half_factor_);
  axpy(acc, 2.0, k2);
  axpy(acc, 2.0, k3);
  scale_modes(acc, half_factor_);
  axpy(acc, 1.0, k4);

  scale_modes(u, half_factor_);
  scale_modes(u, half_factor_);
  axpy(u, dt / 6.0, acc);
}

Trajectory run(const SimConfig& cfg, const SpectralField& U0, SystemKind kind) {
  SimConfig c = cfg;
  if (kind == SystemKind::full) c.spec.mode = BandwidthMode::all_pass;
  auto table = TriadTable::build(U0.basis, c.spec);
  Integrator ig(c, table);

  if (!(c.dt > 0.0) || c.t_end < 0.0) throw std::invalid_argument("run: need dt > 0, t_end >= 0");
  const long long nsteps = static_cast<long long>(std::llround(c.t_end / c.dt));

  SpectralField u = to_transformed(U0, c.omega, 0.0);  // identity at t = 0
  const double e0 = hs_norm_sq(u, 0.0);
  std::vector<double> grad_history;
  grad_history.reserve(nsteps + 1);
  grad_history.push_back(hs_norm_sq(u, 1.0));

  Trajectory traj;
  auto record = [&](double t) {
    DiagRow row;
    row.t = t;
    row.l2_sq = hs_norm_sq(u, 0.0);
    row.grad_sq = grad_history.back();
    for (double s : c.hs_list) row.hs_sq.push_back(hs_norm_sq(u, s));
    row.diss_integral = integrate_history(grad_history, c.dt);
    row.energy_residual =
        e0 > 0.0 ? std::abs(row.l2_sq + 2.0 * c.mu * row.diss_integral - e0) / e0 : 0.0;
    traj.diag.push_back(std::move(row));
    if (c.snapshots) traj.snapshots.push_back(from_transformed(u, c.omega, t));
  };
  record(0.0);

  for (long long step = 1; step <= nsteps; ++step) {
    ig.step(u, (step - 1) * c.dt, c.dt);
    if (!finite(u)) throw std::runtime_error("run: NaN/Inf detected in state");
    grad_history.push_back(hs_norm_sq(u, 1.0));
    const double t = step * c.dt;
    if (hs_norm_sq(u, 0.0) > c.blowup_factor * c.blowup_factor * e0 && e0 > 0.0) {
      traj.blew_up = true;
      traj.blowup_time = t;
      record(t);
      return traj;
    }
    if (step % c.record_stride == 0 || step == nsteps) record(t);
  }
  return traj;
}

std::vector<EnergyRow> energy_report(const Trajectory& traj, double mu) {
  // trapezoid accumulation over the recorded sample grid; the trajectory's
  // own diss_integral column carries the fourth-order step-grid value
  std::vector<EnergyRow> rows;
  if (traj.diag.empty()) return rows;
  const double e0 = traj.diag.front().l2_sq;
  double integral = 0.0;
  for (std::size_t i = 0; i < traj.diag.size(); ++i) {
    const DiagRow& d = traj.diag[i];
    if (i > 0) {
      const DiagRow& p = traj.diag[i - 1];
      integral += 0.5 * (d.t - p.t) * (d.grad_sq + p.grad_sq);
    }
    EnergyRow r;
    r.t = d.t;
    r.lhs = d.l2_sq + 2.0 * mu * integral;
    r.rhs = e0;
    r.residual = e0 > 0.0 ? std::abs(r.lhs - r.rhs) / e0 : 0.0;
    rows.push_back(r);
  }
  return rows;
}

ErrorScanResult error_scan(const SimConfig& cfg_base, const std::vector<double>& omegas,
                           double s_prime) {
  ErrorScanResult res;
  auto basis = ModeSet::create(cfg_base.geom, BallRadius::from_double(cfg_base.radius),
                               cfg_base.mode_cap);
  const SpectralField U0 = random_field(basis, cfg_base.field_s, cfg_base.amplitude,
                                        cfg_base.seed);

  BandwidthSpec full_spec = cfg_base.spec;
  full_spec.mode = BandwidthMode::all_pass;
  auto table_full = TriadTable::build(basis, full_spec);
  auto table_nr = TriadTable::build(basis, cfg_base.spec);

  const long long nsteps = static_cast<long long>(std::llround(cfg_base.t_end / cfg_base.dt));

  for (double om : omegas) {
    SimConfig cf = cfg_base;
    cf.omega = om;
    Integrator ig_full(cf, table_full);
    Integrator ig_nr(cf, table_nr);

    // same transform on both sides, so ||U - U~||_{s'} = ||u - u~||_{s'}
    SpectralField uf = U0;
    SpectralField un = U0;
    double sup = 0.0;
    bool blew = false;
    const double e0 = hs_norm_sq(U0, 0.0);
    for (long long step = 1; step <= nsteps; ++step) {
      const double t_prev = (step - 1) * cfg_base.dt;
      ig_full.step(uf, t_prev, cfg_base.dt);
      ig_nr.step(un, t_prev, cfg_base.dt);
      if (!finite(uf) || !finite(un) ||
          hs_norm_sq(uf, 0.0) > cfg_base.blowup_factor * cfg_base.blowup_factor * e0) {
        blew = true;
        break;
      }
      SpectralField diff = uf;
      for (std::size_t i = 0; i < diff.coeff.size(); ++i)
        diff.coeff[i] = diff.coeff[i] - un.coeff[i];
      sup = std::max(sup, hs_norm(diff, s_prime));
    }
    res.rows.push_back({om, sup, blew});
  }

  // least-squares slope of log(err) vs log(Omega) over usable rows
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& r : res.rows) {
    if (r.blew_up || r.sup_error <= 0.0 || r.omega <= 0.0) continue;
    const double x = std::log(r.omega), y = std::log(r.sup_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  res.slope = (cnt >= 2) ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
  return res;
}

}  // namespace nearres
