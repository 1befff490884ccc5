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

#include "holoqed/circuit.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "holoqed/error.hpp"

namespace holoqed::circuit {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigurationError(std::string(what) + " must be positive and finite");
}

double mhz(double angular) { return angular / (2.0 * kPi) * 1e3; }

}  // namespace

void DeviceSpec::validate() const {
  require_positive(unit_inductance, "unit_inductance");
  require_positive(unit_capacitance, "unit_capacitance");
  for (double l : lengths) require_positive(l, "lengths");
  require_positive(critical_current, "critical_current");
  require_positive(dc_bias, "dc_bias");
  require_positive(junction_capacitance, "junction_capacitance");
  require_positive(ac13, "ac13");
  require_positive(ac23, "ac23");
  if (!phi_rms.empty()) {
    if (phi_rms.size() != 3) throw ConfigurationError("phi_rms needs exactly three entries");
    for (double p : phi_rms) require_positive(p, "phi_rms");
  }
  if (std::abs(std::cos(kPi * dc_bias)) < 1e-12) {
    throw ConfigurationError("dc_bias at a half flux quantum makes the Josephson inductance diverge");
  }
}

std::vector<std::string> DeviceSpec::warnings() const {
  std::vector<std::string> out;
  for (auto [name, amp] : {std::pair{"ac13", ac13}, std::pair{"ac23", ac23}}) {
    if (amp > 0.1 * dc_bias) {
      std::ostringstream os;
      os << name << " = " << amp << " Phi0 exceeds 10% of the dc bias (" << dc_bias
         << " Phi0); the linear flux expansion is questionable";
      out.push_back(os.str());
    }
  }
  return out;
}

double tlr_eigenfrequency(double l, double c, double length) {
  require_positive(l, "l");
  require_positive(c, "c");
  require_positive(length, "length");
  return per_ns(kPi / (length * std::sqrt(l * c)));
}

double josephson_energy(double critical_current) {
  require_positive(critical_current, "critical current");
  return per_ns(critical_current * kFluxQuantum / (2.0 * kPi) / kHbar);
}

double josephson_inductance(double critical_current, double dc_bias) {
  require_positive(critical_current, "critical current");
  const double cosine = std::cos(kPi * dc_bias);
  if (std::abs(cosine) < 1e-12) throw ConfigurationError("Josephson inductance diverges at a half flux quantum");
  return kFluxQuantum / (2.0 * kPi * critical_current * std::abs(cosine));
}

double plasma_frequency(double critical_current, double junction_capacitance, double dc_bias) {
  require_positive(junction_capacitance, "junction capacitance");
  return per_ns(1.0 / std::sqrt(josephson_inductance(critical_current, dc_bias) * junction_capacitance));
}

double dc_mixing(double phi_m, double phi_n, double e_j0, double dc_bias) {
  return phi_m * phi_n * e_j0 * std::cos(kPi * dc_bias);
}

FourthOrder fourth_order_ratio(double phi_rms, double e_j0, double dc_bias) {
  FourthOrder f;
  f.energy = std::pow(phi_rms, 4) / 48.0 * e_j0 * std::cos(kPi * dc_bias);
  const double j = dc_mixing(phi_rms, phi_rms, e_j0, dc_bias);
  f.ratio = j != 0.0 ? f.energy / j : 0.0;
  return f;
}

double parametric_hopping(double phi_m, double phi_n, double e_j0, double dc_bias, double ac_amplitude) {
  // ¼ prefactor × 2 (cross term of the square) × ½ (co-rotating half of the tone).
  return 0.25 * phi_m * phi_n * e_j0 * std::sin(kPi * dc_bias) * (kPi * ac_amplitude);
}

double estimate_phi_rms(double l, double c, double length, double critical_current, double dc_bias) {
  const double omega = tlr_eigenfrequency(l, c, length) * 1e9;  // rad/s
  const double l_j = josephson_inductance(critical_current, dc_bias);
  // Current antinode at the shorted end, flux drop across the SQUID.
  const double flux = l_j * (kPi / length) / l * std::sqrt(kHbar / (omega * c * length));
  return flux / (kFluxQuantum / (2.0 * kPi));
}

bool DerivedCellParams::mixing_weak() const {
  const double j[3] = {j12, j13, j23};
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int k = 0; k < 3; ++k) {
    if (!(j[k] < std::abs(omega_c[pairs[k][0]] - omega_c[pairs[k][1]]) / 7.0)) return false;
  }
  return true;
}

DerivedCellParams derive_cell(const DeviceSpec& device) {
  device.validate();
  DerivedCellParams p;
  for (std::size_t m = 0; m < 3; ++m) {
    p.omega_c[m] = tlr_eigenfrequency(device.unit_inductance, device.unit_capacitance, device.lengths[m]);
  }
  if (device.phi_rms.empty()) {
    p.phi_estimated = true;
    for (std::size_t m = 0; m < 3; ++m) {
      p.phi_rms[m] = estimate_phi_rms(device.unit_inductance, device.unit_capacitance, device.lengths[m],
                                      device.critical_current, device.dc_bias);
    }
  } else {
    for (std::size_t m = 0; m < 3; ++m) p.phi_rms[m] = device.phi_rms[m];
  }
  p.e_j0 = josephson_energy(device.critical_current);
  p.j12 = dc_mixing(p.phi_rms[0], p.phi_rms[1], p.e_j0, device.dc_bias);
  p.j13 = dc_mixing(p.phi_rms[0], p.phi_rms[2], p.e_j0, device.dc_bias);
  p.j23 = dc_mixing(p.phi_rms[1], p.phi_rms[2], p.e_j0, device.dc_bias);
  p.t13 = parametric_hopping(p.phi_rms[0], p.phi_rms[2], p.e_j0, device.dc_bias, device.ac13);
  p.t23 = parametric_hopping(p.phi_rms[1], p.phi_rms[2], p.e_j0, device.dc_bias, device.ac23);
  p.omega_p = plasma_frequency(device.critical_current, device.junction_capacitance, device.dc_bias);
  double worst = 0.0;
  for (double phi : p.phi_rms) worst = std::max(worst, fourth_order_ratio(phi, p.e_j0, device.dc_bias).ratio);
  p.fourth_order_ratio = worst;
  p.delta_c = std::abs(p.omega_c[2] - p.omega_c[0]);
  return p;
}

ScalingTable scaling_check(const DeviceSpec& device, const std::vector<double>& sweep) {
  if (sweep.size() < 2) throw ConfigurationError("scaling sweep needs at least two E_J0 values");
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    require_positive(sweep[k], "E_J0 sweep value");
    if (k > 0 && !(sweep[k] > sweep[k - 1])) throw ConfigurationError("E_J0 sweep must be strictly increasing");
  }
  const DerivedCellParams base = derive_cell(device);
  ScalingTable table;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double e : sweep) {
    const double shrink = base.e_j0 / e;  // φ ∝ 1/E_J0
    ScalingRow row{e, base.phi_rms[0] * shrink, base.phi_rms[2] * shrink, 0.0};
    row.j13 = dc_mixing(row.phi1, row.phi3, e, device.dc_bias);
    table.rows.push_back(row);
    const double x = std::log(e);
    const double y = std::log(row.j13);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(sweep.size());
  table.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return table;
}

std::string report(const DeviceSpec& device, const DerivedCellParams& p) {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "unit cell design report\n\n";
  os << "inputs\n";
  os << "  l = " << device.unit_inductance << " H/m, c = " << device.unit_capacitance << " F/m\n";
  os << "  L = (" << device.lengths[0] * 1e3 << ", " << device.lengths[1] * 1e3 << ", " << device.lengths[2] * 1e3
     << ") mm\n";
  os << "  I_J0 = " << device.critical_current * 1e6 << " uA, dc bias = " << device.dc_bias
     << " Phi0, C_J = " << device.junction_capacitance * 1e12 << " pF\n";
  os << "  ac amplitudes = (" << device.ac13 * 100 << "%, " << device.ac23 * 100 << "%) Phi0\n\n";
  os << "derived\n";
  for (int m = 0; m < 3; ++m) {
    os << "  omega_c" << m + 1 << "/2pi = " << mhz(p.omega_c[m]) / 1e3 << " GHz, phi_rms = " << p.phi_rms[m]
       << (p.phi_estimated ? " (estimated)" : "") << "\n";
  }
  os << "  E_J0/2pi = " << mhz(p.e_j0) / 1e6 << " THz\n";
  os << "  J_dc/2pi: 12 = " << mhz(p.j12) << " MHz, 13 = " << mhz(p.j13) << " MHz, 23 = " << mhz(p.j23) << " MHz\n";
  os << "  T_ac/2pi: 13 = " << mhz(p.t13) << " MHz, 23 = " << mhz(p.t23) << " MHz\n";
  os << "  omega_p/2pi = " << mhz(p.omega_p) / 1e3 << " GHz\n";
  os << "  delta_c/2pi = " << mhz(p.delta_c) << " MHz\n";
  os << "  fourth-order ratio = " << p.fourth_order_ratio << "\n\n";
  os << "checks\n";
  os << "  J_13 < delta_c/7 (" << mhz(p.delta_c / 7.0) << " MHz): " << (p.j13 < p.delta_c / 7.0 ? "yes" : "NO")
     << "\n";
  os << "  J_mn < |w_m - w_n|/7 for all pairs: " << (p.mixing_weak() ? "yes" : "NO") << "\n";
  os << "  omega_p/delta_c = " << p.plasma_margin() << (p.plasma_margin() > 10.0 ? " (> 10)" : " (NOT > 10)")
     << "\n";
  for (const auto& w : device.warnings()) os << "  warning: " << w << "\n";
  return os.str();
}

}  // namespace holoqed::circuit
