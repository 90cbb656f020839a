// dynamics.hpp — Adaptive propagation of pure states (Schrodinger) and
// density matrices (Lindblad) under static or oscillating-coefficient
// Hamiltonians, with observables sampled on a uniform grid through the
// integrator's dense output.
//
// Units are the caller's: the Hamiltonian's angular frequencies must be the
// reciprocal of the grid's time unit (scenarios use 1/nu1 time units and
// Hamiltonians scaled by 1/nu1).

#pragma once

#include "omsim/fock.hpp"
#include "omsim/model.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace omsim::dyn {

class integrator_error : public std::runtime_error {
public:
    integrator_error(const std::string& what, double t_fail_)
        : std::runtime_error(what), t_fail(t_fail_) {}
    double t_fail;
};

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    long n_samples = 2;
    double tolerance = 1e-9;

    void validate() const;
    std::vector<double> sample_times() const;
};

struct IntegratorStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evaluations = 0;
    double norm_or_trace_drift = 0.0;            // max |norm-or-trace - 1| over samples
    double min_eigenvalue = 0.0;                 // most negative spot-checked eigenvalue
    std::array<double, fock::kNumModes> max_top_fock{};  // per-mode top-layer population
    std::vector<std::string> warnings;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> observable_names;   // last column is norm or trace
    std::vector<std::vector<double>> observables;
    fock::Frame frame = fock::Frame::Lab;
    IntegratorStats stats;

    const std::vector<double>& series(const std::string& name) const;
};

using ObservableSet = std::vector<std::pair<std::string, fock::OperatorMatrix>>;

// n_opt1, n_opt2, n_mec1, n_mec2
ObservableSet standard_observables(const fock::HilbertSpace& space);

// Schrodinger propagation d psi/dt = -i H(t) psi. No renormalization is
// applied; the norm drift is recorded in the returned stats.
Trajectory propagate_schrodinger(const model::TimeDependentHamiltonian& h,
                                 const fock::QuantumState& psi0, const TimeGrid& grid,
                                 const ObservableSet& observables);

// Lindblad propagation d rho/dt = -i[H,rho] + sum_k rate_k (L rho L^dag
// - {L^dag L, rho}/2). Pure inputs are promoted to rho = |psi><psi|. The
// density matrix is re-symmetrized after every accepted step; positivity is
// spot-checked at sampled times and violations beyond -1e-6 are recorded as
// warnings in the trajectory stats.
Trajectory propagate_lindblad(const model::TimeDependentHamiltonian& h,
                              const std::vector<model::CollapseOp>& collapse,
                              const fock::QuantumState& rho0, const TimeGrid& grid,
                              const ObservableSet& observables);

// --------------------------- Initial states ----------------------------

struct StateTerm {
    fock::Complex amplitude;
    std::array<int, fock::kNumModes> occupations;
};

// Normalized superposition of occupation basis states. Throws
// std::invalid_argument when an occupation exceeds its cutoff or the
// amplitudes have zero norm.
fock::QuantumState build_initial_state(const fock::HilbertSpace& space,
                                       const std::vector<StateTerm>& terms,
                                       fock::Frame frame);

}  // namespace omsim::dyn
