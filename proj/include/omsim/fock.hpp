// fock.hpp — Truncated Fock spaces and composite operator algebra for the
// four bosonic modes [opt1, opt2, mec1, mec2].

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace omsim::fock {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;

inline constexpr int kNumModes = 4;
inline constexpr int kOpt1 = 0;
inline constexpr int kOpt2 = 1;
inline constexpr int kMec1 = 2;
inline constexpr int kMec2 = 3;

inline constexpr long kDefaultDimLimit = 200000;

// Thrown when a requested space exceeds the composite-dimension limit.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when operators/states on different spaces are combined.
class dimension_mismatch_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative kernel fails to reach its tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double residual_)
        : std::runtime_error(what), residual(residual_) {}
    double residual;
};

// --------------------------- Hilbert space -----------------------------

// Composite truncated Fock space. Mode ordering is fixed globally as
// [opt1, opt2, mec1, mec2]; basis index runs row-major with opt1 slowest.
struct HilbertSpace {
    std::array<int, kNumModes> cutoffs{};   // max occupation per mode
    std::array<long, kNumModes> strides{};
    long dim = 0;

    int levels(int mode) const { return cutoffs[static_cast<size_t>(mode)] + 1; }

    int occupation(long index, int mode) const {
        return static_cast<int>((index / strides[static_cast<size_t>(mode)]) %
                                levels(mode));
    }

    std::array<int, kNumModes> occupations(long index) const {
        std::array<int, kNumModes> occ{};
        for (int m = 0; m < kNumModes; ++m) occ[static_cast<size_t>(m)] = occupation(index, m);
        return occ;
    }

    long index_of(const std::array<int, kNumModes>& occ) const {
        long idx = 0;
        for (int m = 0; m < kNumModes; ++m) idx += occ[static_cast<size_t>(m)] * strides[static_cast<size_t>(m)];
        return idx;
    }

    bool operator==(const HilbertSpace& other) const { return cutoffs == other.cutoffs; }
    bool operator!=(const HilbertSpace& other) const { return !(*this == other); }
};

// Builds the composite space. Throws capacity_error when the product of
// (cutoff+1) exceeds dim_limit, naming the offending product.
HilbertSpace build_space(const std::array<int, kNumModes>& cutoffs,
                         long dim_limit = kDefaultDimLimit);

// --------------------------- Operators ---------------------------------

// Sparse complex operator on a composite space. hermitian_hint marks
// operators expected to satisfy A == A^dagger; validated in debug builds.
struct OperatorMatrix {
    HilbertSpace space;
    SparseMatrix data;
    bool hermitian_hint = false;
};

OperatorMatrix make_operator(const HilbertSpace& space, SparseMatrix data,
                             bool hermitian_hint = false);

OperatorMatrix identity_op(const HilbertSpace& space);

// Single-mode lowering operator embedded in the composite space:
// entries sqrt(n) on (n-1, n) positions of the given mode.
OperatorMatrix annihilation(const HilbertSpace& space, int mode);

// adjoint of annihilation
OperatorMatrix creation(const HilbertSpace& space, int mode);

// Diagonal occupation-number operator of the given mode.
OperatorMatrix number_op(const HilbertSpace& space, int mode);

// Diagonal operator with entry f(n) on every basis state whose occupation
// of `mode` is n.
OperatorMatrix op_function_of_number(const HilbertSpace& space, int mode,
                                     const std::function<double(int)>& f);

OperatorMatrix adjoint_of(const OperatorMatrix& op);

double max_abs_entry(const SparseMatrix& m);

// max |AB - BA| entry; helper for conservation-law checks
double commutator_max_abs(const OperatorMatrix& a, const OperatorMatrix& b);

// --------------------------- Per-mode embedding ------------------------

// Small dense matrix acting on a single mode's (cutoff+1) levels.
using ModeMatrix = Eigen::MatrixXcd;

ModeMatrix mode_annihilation(int levels);
ModeMatrix mode_creation(int levels);
ModeMatrix mode_identity(int levels);

// b^dag^p b^q on a single mode, exact within truncation.
ModeMatrix mode_ladder_product(int levels, int p, int q);

// Tensor-embeds per-mode factors into the composite space. Entries of
// `factors` left as empty (size-0) matrices mean identity on that mode.
OperatorMatrix embed_mode_ops(const HilbertSpace& space,
                              const std::array<ModeMatrix, kNumModes>& factors,
                              bool hermitian_hint = false);

// --------------------------- States ------------------------------------

enum class Frame { Lab, Rotating, PolaronRotating };

std::string frame_name(Frame f);

enum class StateKind { PureVector, DensityMatrix };

// Pure-state vector or density matrix, tagged with its reference frame.
struct QuantumState {
    HilbertSpace space;
    StateKind kind = StateKind::PureVector;
    Frame frame = Frame::Lab;
    Vector vec;        // kind == PureVector
    DenseMatrix rho;   // kind == DensityMatrix

    long dim() const { return space.dim; }
    double norm_or_trace() const;

    // rho = |psi><psi| promotion (identity for density inputs)
    QuantumState to_density() const;

    static QuantumState pure(const HilbertSpace& space, Vector v, Frame frame);
    static QuantumState density(const HilbertSpace& space, DenseMatrix rho, Frame frame);
};

// <psi|A|psi> or Tr(rho A). Throws dimension_mismatch_error on space mismatch.
Complex expectation(const QuantumState& state, const OperatorMatrix& a);

// exp(scale*A) applied to the state (pure: exp(sA)|psi>, density:
// exp(sA) rho exp(sA)^dag), computed by sub-stepped Taylor iteration.
// Throws convergence_error with the residual when a sub-step fails to
// converge within max_terms.
QuantumState matrix_exp_apply(const OperatorMatrix& a, const QuantumState& state,
                              Complex scale, double tol = 1e-10,
                              int max_terms = 300);

// exp(scale*A) v for a bare vector; kernel behind matrix_exp_apply.
Vector matrix_exp_apply_vec(const SparseMatrix& a, const Vector& v, Complex scale,
                            double tol = 1e-10, int max_terms = 300);

}  // namespace omsim::fock
