// model.hpp — Hamiltonians of the two-nanobeam optomechanical system: full
// lab-frame, rotating-frame, polaron-frame parametric series, and the three
// sideband-selected regime Hamiltonians, plus loss (collapse) operators.
//
// Conventions: hbar = 1, all energies/rates in rad/s. Mode ordering is
// [opt1, opt2, mec1, mec2]. Public nanobeam indices j are 1-based (1|2);
// parameter arrays are 0-based.

#pragma once

#include "omsim/fock.hpp"

#include <array>
#include <string>
#include <vector>

namespace omsim::model {

// --------------------------- Parameters --------------------------------

struct ModelParams {
    std::array<double, 2> omega{};    // optical resonance frequencies
    std::array<double, 2> nu{};       // mechanical resonance frequencies
    std::array<double, 2> g{};        // optomechanical couplings
    std::array<double, 2> Omega{};    // drive strengths
    std::array<double, 2> omega_d{};  // drive frequencies
    double gamma = 0.0;               // evanescent optical coupling
    std::array<double, 2> kappa_opt{};
    std::array<double, 2> kappa_mec{};

    double alpha(int beam) const { return -g[static_cast<size_t>(beam - 1)] / nu[static_cast<size_t>(beam - 1)]; }
    double detuning(int beam) const {
        return omega[static_cast<size_t>(beam - 1)] - omega_d[static_cast<size_t>(beam - 1)];
    }
    double delta() const { return omega[0] - omega[1]; }

    // Throws std::invalid_argument on hard violations (nu <= 0, negative
    // rates, |alpha| >= 1); returns warnings for |alpha| > 0.3.
    std::vector<std::string> validate() const;
};

enum class Regime { FullLab, Rotating, PolaronSeries, Nbs, Omc, Oms };
enum class FMode { ExactHypergeometric, LeadingOrder };

std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);
std::string f_mode_name(FMode f);
FMode f_mode_from_name(const std::string& name);

struct RegimeSpec {
    Regime regime = Regime::Nbs;
    int series_order = 4;  // max p+q and r+s+u+v retained in the series
    FMode f_mode = FMode::ExactHypergeometric;
};

// --------------------------- Time-dependent operators -------------------

// H(t) = static + sum_k [ op_k e^{i w_k t} + op_k^dag e^{-i w_k t} ].
// The sparsity pattern is fixed; only phases change per evaluation.
struct OscillatingTerm {
    fock::SparseMatrix op;
    fock::SparseMatrix op_dag;
    double frequency = 0.0;
};

struct TimeDependentHamiltonian {
    fock::HilbertSpace space;
    fock::SparseMatrix static_term;
    std::vector<OscillatingTerm> terms;

    bool is_static() const { return terms.empty(); }

    fock::OperatorMatrix evaluate(double t) const;

    // out = H(t) * in
    void apply(double t, const fock::Vector& in, fock::Vector& out) const;

    // returns H(t) * m (for density-matrix propagation)
    fock::DenseMatrix apply_matrix(double t, const fock::DenseMatrix& m) const;

    // Multiplies all operators and frequencies by `factor` (unit change;
    // use factor = 1/nu1 to work in 1/nu1 time units).
    TimeDependentHamiltonian scaled(double factor) const;

    static TimeDependentHamiltonian from_static(const fock::OperatorMatrix& h);
};

// --------------------------- Special functions -------------------------

// 1F1(-n; b; x) for nonnegative integer n as the exact finite sum,
// accumulated in extended precision.
double confluent_1F1_neg_int(long n, int b, double x);

// --------------------------- Auxiliary operator ------------------------

// F[j,p,q] = (-g_j/nu_j)^q e^{-(g_j/nu_j)^2/2} 1F1[-n_mec_j; p; (g_j/nu_j)^2],
// diagonal in the mechanical-j number basis.
fock::OperatorMatrix aux_F(const ModelParams& params, const fock::HilbertSpace& space,
                           int j, int p, int q);

// Leading-order expansion of aux_F, sign convention matched term-by-term:
// (-g/nu)^q [1 - (1/2 + n/p)(g/nu)^2].
fock::OperatorMatrix aux_F_leading(const ModelParams& params,
                                   const fock::HilbertSpace& space, int j, int p,
                                   int q);

// --------------------------- Hamiltonians ------------------------------

// Full lab-frame Hamiltonian with cos(w_d t) drive terms.
TimeDependentHamiltonian full_hamiltonian_terms(const ModelParams& params,
                                                const fock::HilbertSpace& space);
fock::OperatorMatrix full_hamiltonian(const ModelParams& params,
                                      const fock::HilbertSpace& space, double t);

// Rotating-frame Hamiltonian: free optical terms removed, drive terms at
// detunings Delta_j and the optical coupling at delta.
TimeDependentHamiltonian rotating_frame_terms(const ModelParams& params,
                                              const fock::HilbertSpace& space);
fock::OperatorMatrix rotating_frame_hamiltonian(const ModelParams& params,
                                                const fock::HilbertSpace& space,
                                                double t);

// Polaron-frame parametric series H_K + H_OM + H_OC, truncated at
// p+q <= series_order and r+s+u+v <= series_order.
TimeDependentHamiltonian polaron_series_terms(const ModelParams& params,
                                              const fock::HilbertSpace& space,
                                              int series_order);
fock::OperatorMatrix h_polaron_series(const ModelParams& params,
                                      const fock::HilbertSpace& space, double t,
                                      int series_order);

// Driven nonlinear optical beam splitter (on-resonance drive, identical
// cavities): Kerr + dressed drive + mechanically dressed photon hopping.
fock::OperatorMatrix h_nbs(const ModelParams& params, const fock::HilbertSpace& space,
                           FMode f_mode);

// Nonlinear optomechanical coupler (red-sideband drive, delta = -nu1+nu2):
// photon hopping accompanied by mechanical excitation transfer.
fock::OperatorMatrix h_omc(const ModelParams& params, const fock::HilbertSpace& space,
                           FMode f_mode);

// Two-mode mechanical squeezer (red-sideband drive, delta = -nu1-nu2):
// photon hopping accompanied by mechanical pair creation/annihilation.
fock::OperatorMatrix h_oms(const ModelParams& params, const fock::HilbertSpace& space,
                           FMode f_mode);

// --------------------------- Losses ------------------------------------

struct CollapseOp {
    fock::OperatorMatrix op;
    double rate = 0.0;
    std::string label;
};

// a_j with rate kappa_opt_j and b_j with rate kappa_mec_j, for every
// nonzero rate.
std::vector<CollapseOp> drive_collapse_ops(const ModelParams& params,
                                           const fock::HilbertSpace& space);

}  // namespace omsim::model
