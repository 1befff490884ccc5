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

#include "holoqed/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holoqed/error.hpp"
#include "holoqed/kernels.hpp"

namespace holoqed {

namespace {

// Dormand–Prince 8(5,3) tableau (Hairer & Wanner, DOP853).
constexpr double c[12] = {0.0,
                          0.526001519587677318785587544488e-01,
                          0.789002279381515978178381316732e-01,
                          0.118350341907227396726757197510e+00,
                          0.281649658092772603273242802490e+00,
                          0.333333333333333333333333333333e+00,
                          0.25e+00,
                          0.307692307692307692307692307692e+00,
                          0.651282051282051282051282051282e+00,
                          0.6e+00,
                          0.857142857142857142857142857142e+00,
                          1.0};

struct StageRow {
  std::size_t count;
  std::size_t index[9];
  double coef[9];
};

constexpr StageRow kStages[12] = {
    {0, {}, {}},
    {1, {0}, {5.26001519587677318785587544488e-2}},
    {2, {0, 1}, {1.97250569845378994544595329183e-2, 5.91751709536136983633785987549e-2}},
    {2, {0, 2}, {2.95875854768068491816892993775e-2, 8.87627564304205475450678981324e-2}},
    {3,
     {0, 2, 3},
     {2.41365134159266685502369798665e-1, -8.84549479328286085344864962717e-1, 9.24834003261792003115737966543e-1}},
    {3,
     {0, 3, 4},
     {3.7037037037037037037037037037e-2, 1.70828608729473871279604482173e-1, 1.25467687566822425016691814123e-1}},
    {4,
     {0, 3, 4, 5},
     {3.7109375e-2, 1.70252211019544039314978060272e-1, 6.02165389804559606850219397283e-2, -1.7578125e-2}},
    {5,
     {0, 3, 4, 5, 6},
     {3.70920001185047927108779319836e-2, 1.70383925712239993810214054705e-1, 1.07262030446373284651809199168e-1,
      -1.53194377486244017527936158236e-2, 8.27378916381402288758473766002e-3}},
    {6,
     {0, 3, 4, 5, 6, 7},
     {6.24110958716075717114429577812e-1, -3.36089262944694129406857109825e0, -8.68219346841726006818189891453e-1,
      2.75920996994467083049415600797e1, 2.01540675504778934086186788979e1, -4.34898841810699588477366255144e1}},
    {7,
     {0, 3, 4, 5, 6, 7, 8},
     {4.77662536438264365890433908527e-1, -2.48811461997166764192642586468e0, -5.90290826836842996371446475743e-1,
      2.12300514481811942347288949897e1, 1.52792336328824235832596922938e1, -3.32882109689848629194453265587e1,
      -2.03312017085086261358222928593e-2}},
    {8,
     {0, 3, 4, 5, 6, 7, 8, 9},
     {-9.3714243008598732571704021658e-1, 5.18637242884406370830023853209e0, 1.09143734899672957818500254654e0,
      -8.14978701074692612513997267357e0, -1.85200656599969598641566180701e1, 2.27394870993505042818970056734e1,
      2.49360555267965238987089396762e0, -3.0467644718982195003823669022e0}},
    {9,
     {0, 3, 4, 5, 6, 7, 8, 9, 10},
     {2.27331014751653820792359768449e0, -1.05344954667372501984066689879e1, -2.00087205822486249909675718444e0,
      -1.79589318631187989172765950534e1, 2.79488845294199600508499808837e1, -2.85899827713502369474065508674e0,
      -8.87285693353062954433549289258e0, 1.23605671757943030647266201528e1, 6.43392746015763530355970484046e-1}},
};

constexpr std::size_t kWeightIndex[8] = {0, 5, 6, 7, 8, 9, 10, 11};
constexpr double kWeight[8] = {5.42937341165687622380535766363e-2,  4.45031289275240888144113950566e0,
                               1.89151789931450038304281599044e0,   -5.8012039600105847814672114227e0,
                               3.1116436695781989440891606237e-1,   -1.52160949662516078556178806805e-1,
                               2.01365400804030348374776537501e-1,  4.47106157277725905176885569043e-2};

// Third-order embedded weights (applied against the 8th-order increment).
constexpr double kBhh1 = 0.244094488188976377952755905512e+00;
constexpr double kBhh2 = 0.733846688281611857341361741547e+00;
constexpr double kBhh3 = 0.220588235294117647058823529412e-01;

// Fifth-order error weights on k1, k6..k12.
constexpr double kErr5[8] = {0.1312004499419488073250102996e-01,  -0.1225156446376204440720569753e+01,
                             -0.4957589496572501915214079952e+00, 0.1664377182454986536961530415e+01,
                             -0.3503288487499736816886487290e+00, 0.3341791187130174790297318841e+00,
                             0.8192320648511571246570742613e-01,  -0.2235530786388629525884427845e-01};

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.333;  // largest shrink 1/3
constexpr double kFacMax = 6.0;
constexpr double kOrderExp = 1.0 / 8.0;

}  // namespace

Dop853::Dop853(std::size_t n, Rhs rhs, StepControl control)
    : n_(n), rhs_(std::move(rhs)), control_(control), k_(12, std::vector<double>(n)), work_(n), increment_(n) {
  if (!(control_.rtol > 0.0) || !(control_.atol >= 0.0)) {
    throw NumericalError("integrator tolerances must be positive");
  }
  if (!(control_.initial_step > 0.0)) throw NumericalError("initial step must be positive");
}

// Returns the scaled error norm of a trial step of size h from (t, y). On
// return y_new holds the 8th-order solution.
double Dop853::attempt_step(double t, double h, const double* y, double* y_new) {
  const auto& kt = kernels::active();
  const double* ks[9];
  for (std::size_t s = 1; s < 12; ++s) {
    const auto& row = kStages[s];
    for (std::size_t j = 0; j < row.count; ++j) ks[j] = k_[row.index[j]].data();
    kt.lincomb(n_, y, h, row.coef, ks, row.count, work_.data());
    rhs_(t + c[s] * h, work_.data(), k_[s].data());
  }
  stats_.rhs_evals += 11;

  for (std::size_t j = 0; j < 8; ++j) ks[j] = k_[kWeightIndex[j]].data();
  // increment_ = Σ b_i k_i; y_new = y + h · increment_
  kt.lincomb(n_, y, h, kWeight, ks, 8, y_new);
  const std::vector<double> zeros;  // unused
  (void)zeros;

  double err3 = 0.0;
  double err5 = 0.0;
  const auto& k1 = k_[0];
  const auto& k9 = k_[8];
  const auto& k12 = k_[11];
  for (std::size_t i = 0; i < n_; ++i) {
    const double sk = control_.atol + control_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double incr = (y_new[i] - y[i]) / h;
    const double e3 = incr - kBhh1 * k1[i] - kBhh2 * k9[i] - kBhh3 * k12[i];
    double e5 = kErr5[0] * k1[i];
    for (std::size_t j = 1; j < 8; ++j) e5 += kErr5[j] * k_[kWeightIndex[j]][i];
    err3 += (e3 / sk) * (e3 / sk);
    err5 += (e5 / sk) * (e5 / sk);
  }
  double denom = err5 + 0.01 * err3;
  if (denom <= 0.0) denom = 1.0;
  const double err = std::abs(h) * err5 * std::sqrt(1.0 / (double(n_) * denom));
  return std::isfinite(err) ? err : 1e300;
}

void Dop853::integrate(double t0, std::span<double> y, std::span<const double> stops, const StopCallback& on_stop) {
  if (y.size() != n_) throw NumericalError("integrator state has the wrong length");
  std::vector<double> y_new(n_);
  double t = t0;
  double h = control_.initial_step;
  rhs_(t, y.data(), k_[0].data());
  stats_.rhs_evals += 1;

  bool last_rejected = false;
  for (std::size_t s = 0; s < stops.size(); ++s) {
    const double target = stops[s];
    if (target < t) throw NumericalError("integration stops must be ascending");
    while (t < target) {
      if (stats_.accepted + stats_.rejected >= control_.max_steps) {
        throw PropagationError(PropagationError::Kind::StepLimit,
                               "step limit exceeded at t = " + std::to_string(t) + " ns");
      }
      if (control_.max_step > 0.0) h = std::min(h, control_.max_step);
      const double remaining = target - t;
      const bool clamped = h >= remaining;
      const double h_try = clamped ? remaining : h;
      if (h_try <= 1e-13 * std::max(1.0, std::abs(t))) {
        std::ostringstream os;
        os << "step size underflow at t = " << t << " ns (h = " << h_try
           << " ns); the problem is too stiff for the explicit stepper at rtol=" << control_.rtol;
        throw PropagationError(PropagationError::Kind::StepUnderflow, os.str());
      }

      const double err = attempt_step(t, h_try, y.data(), y_new.data());
      double fac = std::pow(err, kOrderExp) / kSafety;
      fac = std::clamp(fac, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_new = h_try / fac;

      if (err <= 1.0) {
        t = clamped ? target : t + h_try;
        std::copy(y_new.begin(), y_new.end(), y.begin());
        rhs_(t, y.data(), k_[0].data());
        stats_.rhs_evals += 1;
        stats_.accepted += 1;
        if (stats_.smallest_step == 0.0 || h_try < stats_.smallest_step) stats_.smallest_step = h_try;
        stats_.largest_step = std::max(stats_.largest_step, h_try);
        if (last_rejected) h_new = std::min(h_new, h_try);
        last_rejected = false;
        // A step shortened to land on a stop says nothing about the natural
        // step size; keep the previous proposal in that case.
        h = (clamped && h_try < h) ? std::max(h, h_new) : h_new;
      } else {
        stats_.rejected += 1;
        last_rejected = true;
        h = h_try / std::min(1.0 / kFacMin, std::pow(err, kOrderExp) / kSafety);
      }
    }
    if (on_stop) on_stop(s, t, y.data());
  }
}

}  // namespace holoqed
