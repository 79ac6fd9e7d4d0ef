// Copyright 2026 The fockstir Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "fockstir/amplitudes.hpp"
#include "fockstir/integrator.hpp"
#include "fockstir/pulses.hpp"

#include <vector>

namespace fockstir {

/// Amplitudes over atom1 (1..4) x atom2 (1..4) x photon number (0..n_max).
class JointState {
  public:
    explicit JointState(int n_max);

    static JointState product(int atom1, int atom2, int photons, int n_max);

    int n_max() const { return n_max_; }
    std::size_t size() const { return amplitudes_.size(); }

    cplx& at(int atom1, int atom2, int photons);
    cplx at(int atom1, int atom2, int photons) const;

    double norm2() const;

    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  private:
    int n_max_;
    Eigen::VectorXcd amplitudes_;
};

enum class Atom { First, Second };

/// Bipartitions: atom1 | atom2 x cavity, and atom1 x cavity | atom2.
enum class Cut { Atom1VsRest, Atom2VsRest };

/// |<a|b>|^2. Throws ConfigError on mismatched truncation.
double fidelity(const JointState& a, const JointState& b);

/// Von Neumann entropy in bits of the reduced state on either side of the cut.
double schmidt_entropy(const JointState& s, Cut cut);

/// Photon-number distribution P(n), n = 0..n_max.
std::vector<double> photon_distribution(const JointState& s);

double cavity_mean_photons(const JointState& s);

/// Tr(rho_cavity^2).
double cavity_purity(const JointState& s);

/// Photons plus one per atom outside state 4; conserved by each stage.
double mean_excitation_number(const JointState& s);

/// (1/2)((|1>-|3>)_1 |4>_2 - |4>_1 (|1>-|3>)_2) (x) |0>.
JointState entanglement_target(int n_max);

struct EntanglementReport {
    double fidelity_to_target = 0.0;
    double schmidt_entropy_atom1 = 0.0;
    double schmidt_entropy_atom2 = 0.0;
    double cavity_mean_photons = 0.0;
    double cavity_purity = 1.0;
};

EntanglementReport entanglement_report(const JointState& s);

/// Population that leaked beyond the photon truncation above which run_protocol fails.
inline constexpr double kLeakTolerance = 1e-6;

struct StageResult {
    double leaked_norm = 0.0;
};

/**
 * Lets one atom pass through a schedule while the other is a spectator.
 * Each photon manifold is propagated with its own sqrt(n+1) coupling; the
 * schedule's own `n` is ignored. Population pushed above n_max is dropped
 * and reported in leaked_norm.
 */
StageResult propagate_stage(JointState& state, const PulseSchedule& schedule, Atom atom,
                            const IntegratorOptions& options = {});

/// Throws ConfigError unless stage1 has equal lasers after the cavity and
/// stage2 the reverse order.
void validate_protocol(const PulseSchedule& stage1, const PulseSchedule& stage2);

struct ProtocolResult {
    JointState state;
    EntanglementReport report;
    double leaked_stage1 = 0.0;
    double leaked_stage2 = 0.0;
};

/**
 * Two-atom protocol from |1>_1 |4>_2 |0>: atom 1 through stage1, then
 * atom 2 through stage2. Throws NumericalError when more than
 * kLeakTolerance of the norm leaves the photon truncation.
 */
ProtocolResult run_protocol(const PulseSchedule& stage1, const PulseSchedule& stage2, int n_max = 2,
                            const IntegratorOptions& options = {});

/**
 * Equal-laser stage pair with common width `width`: the cavity leads the
 * lasers by `delay` in stage 1, and stage 2 is its time mirror.
 *
 * With W1 = W2, tan(phi) = sin(theta), so the stage-1 dark rotation is
 * pi/4 for any such pair and the two dark branches are weighted equally.
 */
std::pair<PulseSchedule, PulseSchedule> protocol_schedules(double laser_amplitude, double beta_amplitude,
                                                           double width = 20.0, double delay = 20.0);

} // namespace fockstir
