// Copyright 2026 The holoqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <string>
#include <vector>

namespace holoqed::circuit {

// SI constants (2019 exact values where defined).
inline constexpr double kFluxQuantum = 2.067833848e-15;  // Φ₀ = h/2e, Wb
inline constexpr double kHbar = 1.054571817e-34;         // J·s
inline constexpr double kElementaryCharge = 1.602176634e-19;

/// rad/s → rad/ns
constexpr double per_ns(double angular_per_s) { return angular_per_s * 1e-9; }

struct DeviceSpec {
  double unit_inductance = 4.1e-7;               // l, H/m
  double unit_capacitance = 1.6e-10;             // c, F/m
  std::array<double, 3> lengths{10.2e-3, 8.5e-3, 9.57e-3};  // m
  double critical_current = 46e-6;               // I_J0, A
  double dc_bias = 0.43;                         // Φ_dc / Φ₀
  double junction_capacitance = 0.5e-12;         // C_J, F
  double ac13 = 0.0153;                          // Φ₁₃ / Φ₀
  double ac23 = 0.0166;                          // Φ₂₃ / Φ₀
  /// rms node-flux fluctuations (units of Φ₀); empty → estimated.
  std::vector<double> phi_rms{3.6e-3, 3.4e-3, 3.1e-3};

  static DeviceSpec reference() { return DeviceSpec{}; }
  /// Throws ConfigurationError on non-positive or non-finite inputs.
  void validate() const;
  /// Physics warnings (e.g. ac amplitude above 10% of the dc bias).
  std::vector<std::string> warnings() const;
};

/// λ/2 mode of a line shorted at both ends: π/(L·√(lc)), rad/ns.
double tlr_eigenfrequency(double l, double c, double length);
/// E_J0 = I_J0·Φ₀/(2π), as an angular frequency in rad/ns.
double josephson_energy(double critical_current);
/// L_J = Φ₀/(2π·I·cos(π·bias)), H. Throws at bias = 0.5 (mod 1).
double josephson_inductance(double critical_current, double dc_bias);
/// 1/√(L_J·C_J), rad/ns.
double plasma_frequency(double critical_current, double junction_capacitance, double dc_bias);
/// φ_m·φ_n·E_J0·cos(π·bias), with φ in units of Φ₀.
double dc_mixing(double phi_m, double phi_n, double e_j0, double dc_bias);

struct FourthOrder {
  double energy = 0.0;  // (1/48)·φ⁴·E_J0·cos(π·bias)
  double ratio = 0.0;   // energy / J_dc(φ, φ) = φ²/48
};
FourthOrder fourth_order_ratio(double phi_rms, double e_j0, double dc_bias);

/// Co-rotating a_m†a_n amplitude from the ac flux tone:
/// ¼·φ_m·φ_n·E_J0·sin(π·bias)·π·ac_amplitude.
double parametric_hopping(double phi_m, double phi_n, double e_j0, double dc_bias, double ac_amplitude);

/// Node flux at the SQUID end of mode m when the SQUID is a small
/// inductance L_J: φ ≈ L_J·(π/L)/l · √(ħ/(ω·c·L)), in units of Φ₀/2π.
/// Only the order of magnitude is meaningful.
double estimate_phi_rms(double l, double c, double length, double critical_current, double dc_bias);

struct DerivedCellParams {
  std::array<double, 3> omega_c{};
  std::array<double, 3> phi_rms{};
  bool phi_estimated = false;
  double e_j0 = 0.0;
  double j12 = 0.0, j13 = 0.0, j23 = 0.0;
  double t13 = 0.0, t23 = 0.0;
  double omega_p = 0.0;
  double fourth_order_ratio = 0.0;
  double delta_c = 0.0;  // ω_c3 − ω_c1

  /// J_mn < |ω_m − ω_n|/7 for every pair.
  bool mixing_weak() const;
  double plasma_margin() const { return omega_p / delta_c; }
};

DerivedCellParams derive_cell(const DeviceSpec& device);

struct ScalingRow {
  double e_j0 = 0.0;
  double phi1 = 0.0;
  double phi3 = 0.0;
  double j13 = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  double slope = 0.0;  // d log J13 / d log E_J0
};

/// Recomputes J13 along a sweep of E_J0 values (rad/ns) with φ ∝ 1/E_J0
/// anchored at the device's own E_J0.
ScalingTable scaling_check(const DeviceSpec& device, const std::vector<double>& e_j0_sweep);

/// Plain-text design report.
std::string report(const DeviceSpec& device, const DerivedCellParams& params);

}  // namespace holoqed::circuit
