#include "omsim/fock.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace omsim::fock {

namespace {

#ifndef NDEBUG
constexpr bool kDebugChecks = true;
#else
constexpr bool kDebugChecks = false;
#endif

void check_mode(int mode) {
    if (mode < 0 || mode >= kNumModes) {
        throw std::out_of_range("fock: mode index " + std::to_string(mode) +
                                " outside [0, 3]");
    }
}

void debug_check_hermitian(const OperatorMatrix& op) {
    if (!kDebugChecks || !op.hermitian_hint) return;
    SparseMatrix diff = op.data - SparseMatrix(op.data.adjoint());
    assert(max_abs_entry(diff) <= 1e-12 * std::max(1.0, max_abs_entry(op.data)) &&
           "hermitian_hint violated");
}

double infinity_norm(const SparseMatrix& m) {
    std::vector<double> row_sums(static_cast<size_t>(m.rows()), 0.0);
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            row_sums[static_cast<size_t>(it.row())] += std::abs(it.value());
        }
    }
    double best = 0.0;
    for (double s : row_sums) best = std::max(best, s);
    return best;
}

}  // namespace

HilbertSpace build_space(const std::array<int, kNumModes>& cutoffs, long dim_limit) {
    HilbertSpace space;
    space.cutoffs = cutoffs;
    long dim = 1;
    for (int m = 0; m < kNumModes; ++m) {
        if (cutoffs[static_cast<size_t>(m)] < 0) {
            throw std::invalid_argument("build_space: cutoff for mode " +
                                        std::to_string(m) + " is negative");
        }
        dim *= cutoffs[static_cast<size_t>(m)] + 1;
    }
    if (dim > dim_limit) {
        std::ostringstream msg;
        msg << "build_space: composite dimension " << dim << " = ";
        for (int m = 0; m < kNumModes; ++m) {
            msg << (cutoffs[static_cast<size_t>(m)] + 1) << (m + 1 < kNumModes ? "*" : "");
        }
        msg << " exceeds limit " << dim_limit;
        throw capacity_error(msg.str());
    }
    space.dim = dim;
    long stride = 1;
    for (int m = kNumModes - 1; m >= 0; --m) {
        space.strides[static_cast<size_t>(m)] = stride;
        stride *= cutoffs[static_cast<size_t>(m)] + 1;
    }
    return space;
}

OperatorMatrix make_operator(const HilbertSpace& space, SparseMatrix data,
                             bool hermitian_hint) {
    if (data.rows() != space.dim || data.cols() != space.dim) {
        throw dimension_mismatch_error("make_operator: matrix is " +
                                       std::to_string(data.rows()) + "x" +
                                       std::to_string(data.cols()) +
                                       ", space dim is " + std::to_string(space.dim));
    }
    OperatorMatrix op{space, std::move(data), hermitian_hint};
    debug_check_hermitian(op);
    return op;
}

OperatorMatrix identity_op(const HilbertSpace& space) {
    SparseMatrix id(space.dim, space.dim);
    id.setIdentity();
    return OperatorMatrix{space, std::move(id), true};
}

OperatorMatrix annihilation(const HilbertSpace& space, int mode) {
    check_mode(mode);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<size_t>(space.dim));
    const long stride = space.strides[static_cast<size_t>(mode)];
    for (long i = 0; i < space.dim; ++i) {
        const int n = space.occupation(i, mode);
        if (n > 0) trips.emplace_back(i - stride, i, std::sqrt(static_cast<double>(n)));
    }
    SparseMatrix m(space.dim, space.dim);
    m.setFromTriplets(trips.begin(), trips.end());
    return OperatorMatrix{space, std::move(m), false};
}

OperatorMatrix creation(const HilbertSpace& space, int mode) {
    return adjoint_of(annihilation(space, mode));
}

OperatorMatrix number_op(const HilbertSpace& space, int mode) {
    check_mode(mode);
    return op_function_of_number(space, mode,
                                 [](int n) { return static_cast<double>(n); });
}

OperatorMatrix op_function_of_number(const HilbertSpace& space, int mode,
                                     const std::function<double(int)>& f) {
    check_mode(mode);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<size_t>(space.dim));
    for (long i = 0; i < space.dim; ++i) {
        const double v = f(space.occupation(i, mode));
        if (v != 0.0) trips.emplace_back(i, i, v);
    }
    SparseMatrix m(space.dim, space.dim);
    m.setFromTriplets(trips.begin(), trips.end());
    return OperatorMatrix{space, std::move(m), true};
}

OperatorMatrix adjoint_of(const OperatorMatrix& op) {
    return OperatorMatrix{op.space, SparseMatrix(op.data.adjoint()), op.hermitian_hint};
}

double max_abs_entry(const SparseMatrix& m) {
    double best = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            best = std::max(best, std::abs(it.value()));
        }
    }
    return best;
}

double commutator_max_abs(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.space != b.space) {
        throw dimension_mismatch_error("commutator_max_abs: operators on different spaces");
    }
    SparseMatrix c = a.data * b.data - b.data * a.data;
    return max_abs_entry(c);
}

// --------------------------- Per-mode embedding ------------------------

ModeMatrix mode_annihilation(int levels) {
    ModeMatrix m = ModeMatrix::Zero(levels, levels);
    for (int n = 1; n < levels; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

ModeMatrix mode_creation(int levels) { return mode_annihilation(levels).adjoint(); }

ModeMatrix mode_identity(int levels) { return ModeMatrix::Identity(levels, levels); }

ModeMatrix mode_ladder_product(int levels, int p, int q) {
    // <m| b^dag^p b^q |n> = sqrt(n!/(n-q)!) sqrt(m!/(m-p)!) with m = n - q + p
    ModeMatrix m = ModeMatrix::Zero(levels, levels);
    for (int n = q; n < levels; ++n) {
        const int row = n - q + p;
        if (row < 0 || row >= levels) continue;
        long double amp = 1.0L;
        for (int k = 0; k < q; ++k) amp *= static_cast<long double>(n - k);
        for (int k = 0; k < p; ++k) amp *= static_cast<long double>(n - q + 1 + k);
        m(row, n) = static_cast<double>(std::sqrt(amp));
    }
    return m;
}

OperatorMatrix embed_mode_ops(const HilbertSpace& space,
                              const std::array<ModeMatrix, kNumModes>& factors,
                              bool hermitian_hint) {
    // Collect nonzero entries per mode (identity for empty factors).
    struct Entry {
        int row, col;
        Complex val;
    };
    std::array<std::vector<Entry>, kNumModes> entries;
    for (int m = 0; m < kNumModes; ++m) {
        const int levels = space.levels(m);
        const ModeMatrix& f = factors[static_cast<size_t>(m)];
        auto& dst = entries[static_cast<size_t>(m)];
        if (f.size() == 0) {
            for (int n = 0; n < levels; ++n) dst.push_back({n, n, Complex(1.0)});
            continue;
        }
        if (f.rows() != levels || f.cols() != levels) {
            throw dimension_mismatch_error(
                "embed_mode_ops: factor for mode " + std::to_string(m) + " is " +
                std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
                ", expected " + std::to_string(levels));
        }
        for (int c = 0; c < levels; ++c) {
            for (int r = 0; r < levels; ++r) {
                if (f(r, c) != Complex(0.0)) dst.push_back({r, c, f(r, c)});
            }
        }
    }

    std::vector<Eigen::Triplet<Complex>> trips;
    for (const Entry& e0 : entries[0]) {
        for (const Entry& e1 : entries[1]) {
            const Complex v01 = e0.val * e1.val;
            for (const Entry& e2 : entries[2]) {
                const Complex v012 = v01 * e2.val;
                for (const Entry& e3 : entries[3]) {
                    const long row = e0.row * space.strides[0] + e1.row * space.strides[1] +
                                     e2.row * space.strides[2] + e3.row * space.strides[3];
                    const long col = e0.col * space.strides[0] + e1.col * space.strides[1] +
                                     e2.col * space.strides[2] + e3.col * space.strides[3];
                    trips.emplace_back(row, col, v012 * e3.val);
                }
            }
        }
    }
    SparseMatrix m(space.dim, space.dim);
    m.setFromTriplets(trips.begin(), trips.end());
    OperatorMatrix op{space, std::move(m), hermitian_hint};
    debug_check_hermitian(op);
    return op;
}

// --------------------------- States ------------------------------------

std::string frame_name(Frame f) {
    switch (f) {
        case Frame::Lab: return "lab";
        case Frame::Rotating: return "rotating";
        case Frame::PolaronRotating: return "polaron-rotating";
    }
    return "unknown";
}

double QuantumState::norm_or_trace() const {
    if (kind == StateKind::PureVector) return vec.norm();
    return rho.trace().real();
}

QuantumState QuantumState::to_density() const {
    if (kind == StateKind::DensityMatrix) return *this;
    QuantumState out;
    out.space = space;
    out.kind = StateKind::DensityMatrix;
    out.frame = frame;
    out.rho = vec * vec.adjoint();
    return out;
}

QuantumState QuantumState::pure(const HilbertSpace& space, Vector v, Frame frame) {
    if (v.size() != space.dim) {
        throw dimension_mismatch_error("QuantumState::pure: vector size " +
                                       std::to_string(v.size()) + " != space dim " +
                                       std::to_string(space.dim));
    }
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-9) {
        throw std::invalid_argument("QuantumState::pure: norm " + std::to_string(norm) +
                                    " deviates from 1 by more than 1e-9");
    }
    QuantumState s;
    s.space = space;
    s.kind = StateKind::PureVector;
    s.frame = frame;
    s.vec = std::move(v);
    return s;
}

QuantumState QuantumState::density(const HilbertSpace& space, DenseMatrix rho, Frame frame) {
    if (rho.rows() != space.dim || rho.cols() != space.dim) {
        throw dimension_mismatch_error("QuantumState::density: matrix does not match space dim " +
                                       std::to_string(space.dim));
    }
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-12) {
        throw std::invalid_argument("QuantumState::density: hermiticity deviation " +
                                    std::to_string(herm_dev) + " exceeds 1e-12");
    }
    const double trace_dev = std::abs(rho.trace().real() - 1.0);
    if (trace_dev > 1e-9) {
        throw std::invalid_argument("QuantumState::density: trace deviates from 1 by " +
                                    std::to_string(trace_dev));
    }
    if (kDebugChecks || rho.rows() <= 256) {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8) {
            throw std::invalid_argument("QuantumState::density: min eigenvalue " +
                                        std::to_string(es.eigenvalues().minCoeff()) +
                                        " below -1e-8");
        }
    }
    QuantumState s;
    s.space = space;
    s.kind = StateKind::DensityMatrix;
    s.frame = frame;
    s.rho = std::move(rho);
    return s;
}

Complex expectation(const QuantumState& state, const OperatorMatrix& a) {
    if (state.space != a.space) {
        throw dimension_mismatch_error("expectation: state and operator on different spaces");
    }
    if (state.kind == StateKind::PureVector) {
        return state.vec.dot(a.data * state.vec);
    }
    return DenseMatrix(a.data * state.rho).trace();
}

Vector matrix_exp_apply_vec(const SparseMatrix& a, const Vector& v, Complex scale,
                            double tol, int max_terms) {
    if (scale == Complex(0.0) || max_abs_entry(a) == 0.0) return v;
    const double scaled_norm = std::abs(scale) * infinity_norm(a);
    const int substeps = std::max(1, static_cast<int>(std::ceil(scaled_norm / 4.0)));
    const Complex step_scale = scale / static_cast<double>(substeps);

    Vector acc = v;
    for (int s = 0; s < substeps; ++s) {
        Vector term = acc;
        Vector sum = acc;
        bool converged = false;
        double residual = 0.0;
        for (int k = 1; k <= max_terms; ++k) {
            term = (step_scale / static_cast<double>(k)) * (a * term).eval();
            sum += term;
            residual = term.norm();
            if (residual <= tol * std::max(1.0, sum.norm())) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw convergence_error(
                "matrix_exp_apply: Taylor iteration did not reach tolerance " +
                    std::to_string(tol) + " within " + std::to_string(max_terms) +
                    " terms (residual " + std::to_string(residual) + ")",
                residual);
        }
        acc = sum;
    }
    return acc;
}

QuantumState matrix_exp_apply(const OperatorMatrix& a, const QuantumState& state,
                              Complex scale, double tol, int max_terms) {
    if (state.space != a.space) {
        throw dimension_mismatch_error("matrix_exp_apply: state and operator on different spaces");
    }
    QuantumState out = state;
    if (state.kind == StateKind::PureVector) {
        out.vec = matrix_exp_apply_vec(a.data, state.vec, scale, tol, max_terms);
        return out;
    }
    // exp(sA) rho exp(sA)^dag, column blocks through the vector kernel
    DenseMatrix tmp(state.rho.rows(), state.rho.cols());
    for (long c = 0; c < state.rho.cols(); ++c) {
        tmp.col(c) = matrix_exp_apply_vec(a.data, state.rho.col(c), scale, tol, max_terms);
    }
    DenseMatrix result(state.rho.rows(), state.rho.cols());
    DenseMatrix tmp_adj = tmp.adjoint();
    for (long c = 0; c < tmp_adj.cols(); ++c) {
        result.col(c) = matrix_exp_apply_vec(a.data, tmp_adj.col(c), scale, tol, max_terms);
    }
    out.rho = result.adjoint();
    return out;
}

}  // namespace omsim::fock
