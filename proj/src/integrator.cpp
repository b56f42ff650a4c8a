#include "ring/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <variant>

#include "ring/integrals.hpp"

namespace ring {

std::string to_string(Method method) { return method == Method::rk4 ? "rk4" : "leapfrog"; }

Method parse_method(const std::string& text) {
  if (text == "leapfrog" || text == "symplectic-leapfrog") return Method::leapfrog;
  if (text == "rk4" || text == "runge-kutta-4") return Method::rk4;
  throw std::invalid_argument("unknown integration method '" + text + "'");
}

void IntegratorConfig::validate() const {
  if (!(step > 0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (!(axis_epsilon > 0)) throw std::invalid_argument("axis_epsilon must be positive");
  if (!(max_steps > 0)) throw std::invalid_argument("max_steps must be positive");
}

SingularityError::SingularityError(double time, const PhasePointd& last_good)
    : std::runtime_error("trajectory reached the singular set at t = " + std::to_string(time) +
                         ", last good position " +
                         describe_position(last_good.q.x(), last_good.q.y(), last_good.q.z())),
      time_(time),
      last_good_(last_good) {}

namespace {

template <typename Params>
bool too_close(const Params& params, const Vec3d& q, double eps) {
  if (params.ring > 0 && cylindrical_radius2(q) < eps * eps) return true;
  if constexpr (std::is_same_v<Params, CoulombParams>) return q.squaredNorm() < eps * eps;
  return false;
}

template <typename Params>
Vec3d force(const Params& params, const Vec3d& q, double eps) {
  if (too_close(params, q, eps)) throw DomainError("force evaluated inside axis_epsilon");
  return -potential_gradient(params, q);
}

template <typename Params>
PhasePointd leapfrog_step(const Params& params, PhasePointd s, double h, double eps) {
  s.q += 0.5 * h * s.p;
  s.p += h * force(params, s.q, eps);
  s.q += 0.5 * h * s.p;
  return s;
}

template <typename Params>
PhasePointd rk4_step(const Params& params, const PhasePointd& s, double h, double eps) {
  auto deriv = [&](const PhasePointd& x) { return PhasePointd(x.p, force(params, x.q, eps)); };
  auto shifted = [](const PhasePointd& x, const PhasePointd& d, double c) {
    return PhasePointd(x.q + c * d.q, x.p + c * d.p);
  };
  const PhasePointd k1 = deriv(s);
  const PhasePointd k2 = deriv(shifted(s, k1, 0.5 * h));
  const PhasePointd k3 = deriv(shifted(s, k2, 0.5 * h));
  const PhasePointd k4 = deriv(shifted(s, k3, h));
  return PhasePointd(s.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
                     s.p + h / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p));
}

long step_count(double t_begin, double t_end, const IntegratorConfig& config) {
  config.validate();
  if (!(t_end > t_begin)) throw std::invalid_argument("integrate: t_span must be increasing");
  const double ratio = (t_end - t_begin) / config.step;
  const double n = std::ceil(ratio - 1e-9 * std::max(1.0, ratio));
  if (n > double(config.max_steps))
    throw TruncationError("integrate: " + std::to_string(n) + " steps needed, max_steps = " +
                          std::to_string(config.max_steps));
  return static_cast<long>(n);
}

// Calls visit(t, state) for the start state and after every step.
template <typename Params, typename Visitor>
void run(const Params& params, const PhasePointd& start, double t_begin, double t_end,
         const IntegratorConfig& config, Visitor&& visit) {
  const long n = step_count(t_begin, t_end, config);
  const double eps = config.axis_epsilon;
  if (too_close(params, start.q, eps)) throw SingularityError(t_begin, start);
  PhasePointd state = start;
  visit(t_begin, state);
  for (long i = 0; i < n; ++i) {
    const double t = t_begin + double(i) * config.step;
    const double t_next = i + 1 == n ? t_end : t + config.step;
    const double h = t_next - t;
    PhasePointd next;
    try {
      next = config.method == Method::leapfrog ? leapfrog_step(params, state, h, eps)
                                               : rk4_step(params, state, h, eps);
    } catch (const DomainError&) {
      throw SingularityError(t, state);
    }
    if (too_close(params, next.q, eps) || !next.all_finite()) throw SingularityError(t, state);
    state = next;
    visit(t_next, state);
  }
}

template <typename Params>
Trajectory integrate_impl(const Params& params, const PhasePointd& start, double t_begin,
                          double t_end, const IntegratorConfig& config) {
  Trajectory traj(params);
  traj.samples.reserve(static_cast<std::size_t>(step_count(t_begin, t_end, config)) + 1);
  run(params, start, t_begin, t_end, config,
      [&](double t, const PhasePointd& s) { traj.append(t, s); });
  return traj;
}

}  // namespace

Trajectory integrate(const OscillatorParams& params, const PhasePointd& start, double t_begin,
                     double t_end, const IntegratorConfig& config) {
  return integrate_impl(params, start, t_begin, t_end, config);
}

Trajectory integrate(const CoulombParams& params, const PhasePointd& start, double t_begin,
                     double t_end, const IntegratorConfig& config) {
  return integrate_impl(params, start, t_begin, t_end, config);
}

Trajectory integrate(const SystemParams& params, const PhasePointd& start, double t_begin,
                     double t_end, const IntegratorConfig& config) {
  return std::visit([&](const auto& p) { return integrate_impl(p, start, t_begin, t_end, config); },
                    params);
}

PhasePointd propagate(const SystemParams& params, const PhasePointd& start, double duration,
                      const IntegratorConfig& config) {
  PhasePointd last = start;
  std::visit(
      [&](const auto& p) {
        run(p, start, 0.0, duration, config, [&](double, const PhasePointd& s) { last = s; });
      },
      params);
  return last;
}

double DriftReport::worst() const {
  double w = 0;
  for (double d : max_relative) w = std::max(w, d);
  return w;
}

DriftReport drift_report(const Trajectory& traj) {
  if (traj.empty()) throw std::invalid_argument("drift_report: empty trajectory");
  DriftReport report;
  report.names = kind_of(traj.params) == SystemKind::oscillator
                     ? std::array<std::string, 4>{"H", "A1", "A2", "A3"}
                     : std::array<std::string, 4>{"H", "B1", "B2", "B3"};
  std::visit(
      [&](const auto& p) {
        const auto first = integral_values(p, traj.front().state);
        std::array<double, 4> scale{};
        for (int i = 0; i < 4; ++i)
          scale[i] = std::abs(first[i]) > kVanishingIntegral ? std::abs(first[i]) : 1.0;
        for (const auto& s : traj.samples) {
          const auto now = integral_values(p, s.state);
          for (int i = 0; i < 4; ++i) {
            const double d = std::abs(now[i] - first[i]) / scale[i];
            report.max_relative[i] = std::max(report.max_relative[i], d);
          }
        }
      },
      traj.params);
  return report;
}

double EnergyTrend::secular_change() const { return std::abs(slope) * duration; }

EnergyTrend energy_trend(const Trajectory& traj) {
  EnergyTrend trend;
  const std::size_t n = traj.size();
  if (n < 3) return trend;
  const double h0 = traj.front().integrals[0];
  double st = 0, sy = 0;
  for (const auto& s : traj.samples) {
    st += s.t;
    sy += s.integrals[0] - h0;
  }
  const double tm = st / double(n), ym = sy / double(n);
  double stt = 0, sty = 0;
  for (const auto& s : traj.samples) {
    const double dt = s.t - tm;
    stt += dt * dt;
    sty += dt * (s.integrals[0] - h0 - ym);
  }
  trend.slope = sty / stt;
  double rss = 0;
  for (const auto& s : traj.samples) {
    const double resid = s.integrals[0] - h0 - ym - trend.slope * (s.t - tm);
    rss += resid * resid;
  }
  trend.residual_rms = std::sqrt(rss / double(n));
  trend.duration = traj.back().t - traj.front().t;
  return trend;
}

}  // namespace ring
