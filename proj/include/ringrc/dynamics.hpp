// Coupled-mode dynamics of the multi-channel ring with delayed feedback:
// right-hand sides, feedback-loop fields, and the RK4 stepper.
//
// The mode amplitudes a_i are energy-normalized (|a|^2 in joules); input and
// loop fields are in sqrt(watt). Free carriers (delta_n, 1/m^3) and excess
// temperature (delta_t, K) are shared across channels.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ringrc/common.hpp"
#include "ringrc/params.hpp"

namespace ringrc {

// Minimal complex value for the integrator hot path. std::complex
// multiplication routes through the C99 Annex G helper on this toolchain,
// which costs a function call per product.
struct cplx {
  double re = 0.0;
  double im = 0.0;
};

inline cplx operator+(cplx a, cplx b) { return {a.re + b.re, a.im + b.im}; }
inline cplx operator-(cplx a, cplx b) { return {a.re - b.re, a.im - b.im}; }
inline cplx operator*(cplx a, cplx b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cplx operator*(double s, cplx a) { return {s * a.re, s * a.im}; }
inline double norm2(cplx a) { return a.re * a.re + a.im * a.im; }
inline std::complex<double> to_std(cplx a) { return {a.re, a.im}; }
inline cplx from_std(std::complex<double> a) { return {a.real(), a.imag()}; }

// Fixed-length ring buffer over the last `length` solver steps. Starts
// zero-filled, which models an empty loop during the first delay period.
class delay_line {
 public:
  explicit delay_line(std::size_t length) : buf_(length) {
    if (length < 2) throw config_error("delay line must span at least 2 solver steps");
  }
  std::size_t length() const { return buf_.size(); }
  // Value from `length` steps ago (the sample about to be overwritten).
  cplx oldest() const { return buf_[head_]; }
  // Value from `length - 1` steps ago.
  cplx oldest_next() const {
    std::size_t i = head_ + 1;
    return buf_[i == buf_.size() ? 0 : i];
  }
  void push(cplx v) {
    buf_[head_] = v;
    ++head_;
    if (head_ == buf_.size()) head_ = 0;
  }

 private:
  std::vector<cplx> buf_;
  std::size_t head_ = 0;
};

struct field_sample {
  std::vector<std::complex<double>> e_in;
  std::vector<std::complex<double>> e_add;
  std::vector<std::complex<double>> e_drop;
};

struct state_derivative {
  std::vector<std::complex<double>> da;
  double d_delta_n = 0.0;
  double d_delta_t = 0.0;
};

struct reservoir_state {
  reservoir_state(std::size_t channels, std::size_t delay_steps)
      : a(channels),
        input_history(channels, delay_line(delay_steps)),
        amplitude_history(channels, delay_line(delay_steps)),
        ka_(4, std::vector<cplx>(channels)),
        aa_(channels),
        drive_(3, std::vector<cplx>(channels)) {}

  std::vector<cplx> a;
  double delta_n = 0.0;
  double delta_t = 0.0;
  std::vector<delay_line> input_history;
  std::vector<delay_line> amplitude_history;
  std::size_t step_index = 0;

  // integrator scratch, owned here so each thread's state is self-contained
  std::vector<std::vector<cplx>> ka_;
  std::vector<cplx> aa_;
  double nn_ = 0.0, tt_ = 0.0;
  std::vector<std::vector<cplx>> drive_;
};

class tcmt_model {
 public:
  tcmt_model(const physical_params& p, std::vector<channel_config> channels,
             model_flags flags, double step_s)
      : p_(p), channels_(std::move(channels)), flags_(flags), step_s_(step_s) {
    p_.validate();
    if (!(step_s_ > 0.0)) throw config_error("solver step must be > 0");
    for (const auto& ch : channels_) ch.validate();

    double ratio = p_.feedback_delay_s / step_s_;
    double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio)
      throw config_error("feedback delay is not an integer number of solver steps (tau_d/eta = " +
                         std::to_string(ratio) + ")");
    delay_steps_ = static_cast<std::size_t>(rounded);

    kc_ = p_.coupling_rate();
    gamma_lin_ = p_.linear_loss_rate();
    intrinsic_ = p_.intrinsic_loss_rate();
    double n = p_.si_refractive_index;
    double c = speed_of_light_m_s;
    tpa_coef_ = p_.tpa_coeff_m_per_w * c * c / (n * n * p_.tpa_volume_m3);
    fca_coef_ = p_.fca_confinement * p_.fca_cross_section_m2 * c / (2.0 * n);
    carrier_coef_ = p_.fca_confinement * c * c * p_.tpa_coeff_m_per_w /
                    (2.0 * hbar_j_s * p_.pump_frequency_rad_s * p_.fca_volume_m3 *
                     p_.fca_volume_m3 * n * n);
    thermal_coef_ = p_.thermal_confinement / (p_.mass_kg * p_.specific_heat_j_per_gk * 1000.0);
    inv_carrier_lifetime_ = 1.0 / p_.carrier_lifetime_s;
    inv_thermal_lifetime_ = 1.0 / p_.thermal_lifetime_s;

    double phi = p_.loop_phase_rad();
    loop_gain_ = {p_.feedback_coupling * std::cos(phi), -p_.feedback_coupling * std::sin(phi)};
    feedback_coef_ = flags_.eq3_literal ? 1.0 / p_.coupling_lifetime_s : kc_;
    drop_coef_ = flags_.eq4_literal ? 1.0 / p_.coupling_lifetime_s : kc_;

    detuning_.resize(channels_.size());
    fcd_shift_.resize(channels_.size());
    to_shift_.resize(channels_.size());
    for (std::size_t i = 0; i < channels_.size(); ++i) {
      detuning_[i] = channels_[i].carrier_detuning_rad_s;
      double wr = channels_[i].resonance_freq_rad_s;
      fcd_shift_[i] = wr / n * p_.fcd_coeff_m3;
      to_shift_[i] = wr / n * p_.thermo_optic_coeff_per_k;
    }
  }

  std::size_t channel_count() const { return channels_.size(); }
  std::size_t delay_steps() const { return delay_steps_; }
  double step_s() const { return step_s_; }
  double coupling_rate() const { return kc_; }
  double linear_loss_rate() const { return gamma_lin_; }
  const physical_params& params() const { return p_; }
  const std::vector<channel_config>& channels() const { return channels_; }
  const model_flags& flags() const { return flags_; }

  reservoir_state make_state() const {
    return reservoir_state(channels_.size(), delay_steps_);
  }

  double total_detuning(const reservoir_state& s, std::size_t i) const {
    return detuning_[i] + fcd_shift_[i] * s.delta_n + to_shift_[i] * s.delta_t;
  }

  double total_loss_rate(const reservoir_state& s, std::size_t i) const {
    return gamma_lin_ + tpa_coef_ * norm2(s.a[i]) + fca_coef_ * s.delta_n;
  }

  // Heat-generating dissipation; coupling loss is radiated, not absorbed.
  double absorbed_power(const reservoir_state& s, std::size_t i) const {
    double a2 = norm2(s.a[i]);
    return (intrinsic_ + tpa_coef_ * a2 + fca_coef_ * s.delta_n) * a2;
  }

  // Add-port field fed back from the loop, per channel, at the state's time.
  cplx add_field(const reservoir_state& s, std::size_t i) const {
    return loop_gain_ *
           (s.input_history[i].oldest() + feedback_coef_ * s.amplitude_history[i].oldest());
  }

  // Drop-port output field for one channel.
  cplx drop_field(const reservoir_state& s, std::size_t i, cplx e_in_now) const {
    cplx add = add_field(s, i);
    if (flags_.eq4_literal) return drop_coef_ * (s.a[i] * e_in_now) + add;
    return drop_coef_ * s.a[i] + add;
  }

  // Loop and drop fields at the state's current time.
  field_sample feedback_fields(const reservoir_state& s,
                               const std::vector<std::complex<double>>& e_in_now) const {
    field_sample f;
    const std::size_t m = channels_.size();
    f.e_in = e_in_now;
    f.e_add.resize(m);
    f.e_drop.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      f.e_add[i] = to_std(add_field(s, i));
      f.e_drop[i] = to_std(drop_field(s, i, from_std(e_in_now[i])));
    }
    return f;
  }

  // Time derivatives of (a_i, delta_n, delta_t) for the given fields.
  state_derivative tcmt_rhs(const reservoir_state& s, const field_sample& fields) const {
    const std::size_t m = channels_.size();
    state_derivative d;
    d.da.resize(m);
    double src_n = 0.0, src_t = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      cplx drive = from_std(fields.e_in[i]) + from_std(fields.e_add[i]);
      cplx da = stage_rhs(s.a[i], s.delta_n, s.delta_t, drive, i, src_n, src_t);
      d.da[i] = to_std(da);
    }
    d.d_delta_n = -s.delta_n * inv_carrier_lifetime_ + carrier_coef_ * src_n;
    d.d_delta_t = -s.delta_t * inv_thermal_lifetime_ + thermal_coef_ * src_t;
    return d;
  }

  // One classical RK4 step. input_fn(k) must return per-channel input field
  // amplitudes (sqrt W) at t (k=0), t+eta/2 (k=1), and t+eta (k=2). Delayed
  // loop quantities come from the state's ring buffers; the mid-step delayed
  // value is the average of the two adjacent stored samples.
  template <class InputFn>
  void rk4_step(reservoir_state& s, InputFn&& input_fn) const {
    const std::size_t m = channels_.size();
    const double eta = step_s_;
    const double* in0 = input_fn(0);
    const double* in1 = input_fn(1);
    const double* in2 = input_fn(2);

    for (std::size_t i = 0; i < m; ++i) {
      cplx din0 = s.input_history[i].oldest();
      cplx din2 = s.input_history[i].oldest_next();
      cplx din1 = 0.5 * (din0 + din2);
      cplx dam0 = s.amplitude_history[i].oldest();
      cplx dam2 = s.amplitude_history[i].oldest_next();
      cplx dam1 = 0.5 * (dam0 + dam2);
      s.drive_[0][i] = cplx{in0[i], 0.0} + loop_gain_ * (din0 + feedback_coef_ * dam0);
      s.drive_[1][i] = cplx{in1[i], 0.0} + loop_gain_ * (din1 + feedback_coef_ * dam1);
      s.drive_[2][i] = cplx{in2[i], 0.0} + loop_gain_ * (din2 + feedback_coef_ * dam2);
    }

    double kn[4], kt[4];
    for (int stage = 0; stage < 4; ++stage) {
      const std::vector<cplx>& sa = (stage == 0) ? s.a : s.aa_;
      double sn = (stage == 0) ? s.delta_n : s.nn_;
      double st = (stage == 0) ? s.delta_t : s.tt_;
      const std::vector<cplx>& drive =
          (stage == 0) ? s.drive_[0] : (stage == 3 ? s.drive_[2] : s.drive_[1]);
      double src_n = 0.0, src_t = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        s.ka_[stage][i] = stage_rhs(sa[i], sn, st, drive[i], i, src_n, src_t);
      kn[stage] = -sn * inv_carrier_lifetime_ + carrier_coef_ * src_n;
      kt[stage] = -st * inv_thermal_lifetime_ + thermal_coef_ * src_t;
      if (stage < 3) {
        double w = (stage == 2) ? eta : eta * 0.5;
        for (std::size_t i = 0; i < m; ++i) s.aa_[i] = s.a[i] + w * s.ka_[stage][i];
        s.nn_ = s.delta_n + w * kn[stage];
        s.tt_ = s.delta_t + w * kt[stage];
      }
    }

    const double w = eta / 6.0;
    for (std::size_t i = 0; i < m; ++i) {
      cplx prev = s.a[i];
      s.a[i] = prev + w * (s.ka_[0][i] + 2.0 * s.ka_[1][i] + 2.0 * s.ka_[2][i] + s.ka_[3][i]);
      s.input_history[i].push({in0[i], 0.0});
      s.amplitude_history[i].push(prev);
    }
    s.delta_n += w * (kn[0] + 2.0 * kn[1] + 2.0 * kn[2] + kn[3]);
    s.delta_t += w * (kt[0] + 2.0 * kt[1] + 2.0 * kt[2] + kt[3]);
    // Sources are non-negative; clip integrator undershoot at zero.
    if (s.delta_n < 0.0) s.delta_n = 0.0;
    if (s.delta_t < 0.0) s.delta_t = 0.0;
    ++s.step_index;

    double t = static_cast<double>(s.step_index) * eta;
    for (std::size_t i = 0; i < m; ++i)
      if (!std::isfinite(s.a[i].re) || !std::isfinite(s.a[i].im))
        throw integration_diverged(t, "a[" + std::to_string(i) + "]");
    if (!std::isfinite(s.delta_n)) throw integration_diverged(t, "delta_n");
    if (!std::isfinite(s.delta_t)) throw integration_diverged(t, "delta_t");
  }

 private:
  // da/dt for one channel; accumulates the shared carrier and heat sources.
  cplx stage_rhs(cplx a, double dn, double dt, cplx drive, std::size_t i, double& src_n,
                 double& src_t) const {
    double a2 = norm2(a);
    double delta = detuning_[i] + fcd_shift_[i] * dn + to_shift_[i] * dt;
    double g_tpa = tpa_coef_ * a2;
    double g_fca = fca_coef_ * dn;
    double gamma = gamma_lin_ + g_tpa + g_fca;
    src_n += a2 * a2;
    double p_abs = (intrinsic_ + g_tpa + g_fca) * a2;
    src_t += flags_.eq12_literal ? p_abs * a2 : p_abs;
    // (j*delta - gamma)*a + j*kc*drive
    return {-gamma * a.re - delta * a.im - kc_ * drive.im,
            delta * a.re - gamma * a.im + kc_ * drive.re};
  }

  physical_params p_;
  std::vector<channel_config> channels_;
  model_flags flags_;
  double step_s_;
  std::size_t delay_steps_ = 0;

  double kc_ = 0, gamma_lin_ = 0, intrinsic_ = 0;
  double tpa_coef_ = 0, fca_coef_ = 0, carrier_coef_ = 0, thermal_coef_ = 0;
  double inv_carrier_lifetime_ = 0, inv_thermal_lifetime_ = 0;
  cplx loop_gain_;
  double feedback_coef_ = 0, drop_coef_ = 0;
  std::vector<double> detuning_, fcd_shift_, to_shift_;
};

}  // namespace ringrc
