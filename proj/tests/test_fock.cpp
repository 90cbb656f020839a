#include "doctest.h"

#include "omsim/fock.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace omsim;
using fock::Complex;

namespace {

fock::HilbertSpace space4(int c0, int c1, int c2, int c3) {
    return fock::build_space({c0, c1, c2, c3});
}

fock::QuantumState basis_state(const fock::HilbertSpace& sp, std::array<int, 4> occ,
                               fock::Frame frame = fock::Frame::Lab) {
    fock::Vector v = fock::Vector::Zero(sp.dim);
    v(sp.index_of(occ)) = 1.0;
    return fock::QuantumState::pure(sp, std::move(v), frame);
}

fock::Vector random_normalized(long dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    fock::Vector v(dim);
    for (long i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    v /= v.norm();
    return v;
}

}  // namespace

TEST_CASE("build_space dimensions") {
    CHECK(space4(1, 1, 1, 1).dim == 16);
    CHECK(space4(3, 3, 2, 2).dim == 144);
    CHECK(space4(0, 0, 0, 0).dim == 1);
}

TEST_CASE("build_space errors") {
    CHECK_THROWS_AS(fock::build_space({100, 100, 100, 100}), fock::capacity_error);
    CHECK_THROWS_AS(fock::build_space({-1, 0, 0, 0}), std::invalid_argument);
    // error names the offending product
    try {
        fock::build_space({100, 100, 100, 100});
    } catch (const fock::capacity_error& e) {
        CHECK(std::string(e.what()).find("104060401") != std::string::npos);
    }
}

TEST_CASE("index map is bijective") {
    auto sp = space4(2, 1, 3, 2);
    for (long i = 0; i < sp.dim; ++i) {
        auto occ = sp.occupations(i);
        for (int m = 0; m < 4; ++m) {
            CHECK(occ[static_cast<size_t>(m)] >= 0);
            CHECK(occ[static_cast<size_t>(m)] <= sp.cutoffs[static_cast<size_t>(m)]);
        }
        CHECK(sp.index_of(occ) == i);
    }
}

TEST_CASE("annihilation acts as lowering operator") {
    auto sp = space4(1, 1, 1, 1);
    auto a0 = fock::annihilation(sp, 0);

    auto one = basis_state(sp, {1, 0, 0, 0});
    fock::Vector lowered = a0.data * one.vec;
    CHECK(std::abs(lowered(sp.index_of({0, 0, 0, 0})) - Complex(1.0)) < 1e-15);
    CHECK(lowered.norm() == doctest::Approx(1.0));

    auto vac = basis_state(sp, {0, 0, 0, 0});
    CHECK((a0.data * vac.vec).norm() == 0.0);

    CHECK_THROWS_AS(fock::annihilation(sp, 4), std::out_of_range);
    CHECK_THROWS_AS(fock::annihilation(sp, -1), std::out_of_range);
}

TEST_CASE("single-mode ladder entries are sqrt(n)") {
    auto sp = space4(3, 0, 0, 0);
    auto a = fock::annihilation(sp, 0);
    std::vector<double> values;
    for (int k = 0; k < a.data.outerSize(); ++k) {
        for (fock::SparseMatrix::InnerIterator it(a.data, k); it; ++it) {
            values.push_back(it.value().real());
        }
    }
    std::sort(values.begin(), values.end());
    REQUIRE(values.size() == 3);
    CHECK(values[0] == doctest::Approx(1.0));
    CHECK(values[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(values[2] == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("number operator equals a^dag a") {
    auto sp = space4(5, 1, 2, 1);
    for (int mode : {0, 2}) {
        auto n = fock::number_op(sp, mode);
        auto a = fock::annihilation(sp, mode);
        fock::SparseMatrix ada = fock::SparseMatrix(a.data.adjoint()) * a.data;
        CHECK(fock::max_abs_entry(fock::SparseMatrix(n.data - ada)) <= 1e-14);
    }

    auto s = basis_state(space4(1, 1, 1, 1), {0, 1, 0, 0});
    CHECK(fock::expectation(s, fock::number_op(s.space, 1)).real() == doctest::Approx(1.0));
    CHECK(std::abs(fock::expectation(s, fock::number_op(s.space, 0))) == 0.0);
}

TEST_CASE("op_function_of_number") {
    auto sp = space4(0, 0, 2, 0);
    auto ident = fock::op_function_of_number(sp, 2, [](int) { return 1.0; });
    CHECK(fock::max_abs_entry(fock::SparseMatrix(ident.data - fock::identity_op(sp).data)) == 0.0);

    auto n_again = fock::op_function_of_number(sp, 2, [](int n) { return double(n); });
    CHECK(fock::max_abs_entry(fock::SparseMatrix(n_again.data - fock::number_op(sp, 2).data)) == 0.0);

    auto parity = fock::op_function_of_number(sp, 2, [](int n) { return n % 2 == 0 ? 1.0 : -1.0; });
    for (long i = 0; i < sp.dim; ++i) {
        const double expect = sp.occupation(i, 2) % 2 == 0 ? 1.0 : -1.0;
        CHECK(parity.data.coeff(i, i).real() == doctest::Approx(expect));
    }
}

TEST_CASE("commutator [a, adag] is 1 below the cutoff") {
    auto sp = space4(3, 2, 2, 1);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int mode = 0; mode < 4; ++mode) {
        auto a = fock::annihilation(sp, mode);
        auto ad = fock::adjoint_of(a);
        fock::SparseMatrix comm = a.data * ad.data - ad.data * a.data;
        for (long i = 0; i < sp.dim; ++i) {
            const int n = sp.occupation(i, mode);
            const Complex expected = n < sp.cutoffs[static_cast<size_t>(mode)]
                                         ? Complex(1.0)
                                         : Complex(-double(n));
            // sqrt(n)*sqrt(n) products round at machine epsilon
            CHECK(std::abs(comm.coeff(i, i) - expected) <= 4.0 * eps * (n + 1));
        }
    }
}

TEST_CASE("operators on different modes commute") {
    auto sp = space4(2, 2, 2, 2);
    auto a1 = fock::annihilation(sp, 0);
    auto b2 = fock::creation(sp, 3);
    CHECK(fock::commutator_max_abs(a1, b2) <= 1e-13);
    auto n2 = fock::number_op(sp, 1);
    auto b1 = fock::annihilation(sp, 2);
    CHECK(fock::commutator_max_abs(n2, b1) <= 1e-13);
}

TEST_CASE("expectation: identity, linearity, conjugate symmetry") {
    auto sp = space4(2, 1, 2, 1);
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
        auto psi = fock::QuantumState::pure(sp, random_normalized(sp.dim, rng), fock::Frame::Lab);
        CHECK(fock::expectation(psi, fock::identity_op(sp)).real() == doctest::Approx(1.0));

        auto a = fock::annihilation(sp, 0);
        auto b = fock::creation(sp, 2);
        const Complex alpha(0.3, -1.1), beta(2.0, 0.7);
        fock::OperatorMatrix combo{sp, alpha * a.data + beta * b.data, false};
        const Complex lhs = fock::expectation(psi, combo);
        const Complex rhs = alpha * fock::expectation(psi, a) + beta * fock::expectation(psi, b);
        CHECK(std::abs(lhs - rhs) <= 1e-12);

        // <A^dag> = conj(<A>)
        const Complex ea = fock::expectation(psi, a);
        const Complex ead = fock::expectation(psi, fock::adjoint_of(a));
        CHECK(std::abs(ead - std::conj(ea)) <= 1e-12);
    }
}

TEST_CASE("expectation on truncated coherent state") {
    // oracle: direct scalar sums of the truncated series for alpha = 0.1, cutoff 5
    const double alpha = 0.1;
    const int cutoff = 5;
    std::vector<double> amps(static_cast<size_t>(cutoff) + 1);
    double norm2 = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        double fact = 1.0;
        for (int k = 2; k <= n; ++k) fact *= k;
        amps[static_cast<size_t>(n)] = std::pow(alpha, n) / std::sqrt(fact);
        norm2 += amps[static_cast<size_t>(n)] * amps[static_cast<size_t>(n)];
    }
    double oracle = 0.0;  // <a + a^dag> = 2 sum_n amp_n amp_{n+1} sqrt(n+1) / norm2
    for (int n = 0; n < cutoff; ++n) {
        oracle += 2.0 * amps[static_cast<size_t>(n)] * amps[static_cast<size_t>(n) + 1] *
                  std::sqrt(double(n + 1));
    }
    oracle /= norm2;

    auto sp = space4(cutoff, 0, 0, 0);
    fock::Vector v = fock::Vector::Zero(sp.dim);
    for (int n = 0; n <= cutoff; ++n) v(sp.index_of({n, 0, 0, 0})) = amps[static_cast<size_t>(n)];
    v /= v.norm();
    auto psi = fock::QuantumState::pure(sp, std::move(v), fock::Frame::Lab);

    auto a = fock::annihilation(sp, 0);
    fock::OperatorMatrix x{sp, fock::SparseMatrix(a.data + fock::SparseMatrix(a.data.adjoint())), true};
    const Complex got = fock::expectation(psi, x);
    CHECK(std::abs(got.imag()) <= 1e-10);
    CHECK(got.real() == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(got.real() == doctest::Approx(0.2).epsilon(1e-4));
}

TEST_CASE("expectation dimension mismatch") {
    auto sp_a = space4(1, 1, 1, 1);
    auto sp_b = space4(2, 1, 1, 1);
    auto psi = basis_state(sp_a, {0, 0, 0, 0});
    CHECK_THROWS_AS(fock::expectation(psi, fock::number_op(sp_b, 0)),
                    fock::dimension_mismatch_error);
}

TEST_CASE("matrix_exp_apply basics") {
    auto sp = space4(3, 0, 2, 0);
    std::mt19937 rng(99);
    auto psi = fock::QuantumState::pure(sp, random_normalized(sp.dim, rng), fock::Frame::Lab);

    // scale = 0 leaves the state unchanged
    auto same = fock::matrix_exp_apply(fock::number_op(sp, 0), psi, Complex(0.0));
    CHECK((same.vec - psi.vec).norm() == 0.0);

    // exp(i theta n) puts phase e^{i theta n} on each occupation
    const double theta = 0.7;
    auto phased = fock::matrix_exp_apply(fock::number_op(sp, 0), psi, Complex(0.0, theta));
    for (long i = 0; i < sp.dim; ++i) {
        const Complex expect = psi.vec(i) * std::exp(Complex(0.0, theta * sp.occupation(i, 0)));
        CHECK(std::abs(phased.vec(i) - expect) <= 1e-10);
    }
    CHECK(std::abs(phased.vec.norm() - 1.0) <= 1e-9);
}

TEST_CASE("matrix_exp_apply displacement oracle") {
    // exp(alpha (b^dag - b)) |0> is a coherent state with <n> = alpha^2
    const double alpha = 0.3;
    auto sp = space4(0, 0, 20, 0);
    auto b = fock::annihilation(sp, 2);
    fock::OperatorMatrix gen{sp, fock::SparseMatrix(fock::SparseMatrix(b.data.adjoint()) - b.data), false};
    auto vac = basis_state(sp, {0, 0, 0, 0});
    auto displaced = fock::matrix_exp_apply(gen, vac, Complex(alpha));
    CHECK(std::abs(displaced.vec.norm() - 1.0) <= 1e-9);
    const double n_mean = fock::expectation(displaced, fock::number_op(sp, 2)).real();
    CHECK(std::abs(n_mean - alpha * alpha) <= 1e-8);
}

TEST_CASE("matrix_exp_apply anti-hermitian generator preserves norm") {
    auto sp = space4(2, 2, 2, 0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mag(0.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto psi = fock::QuantumState::pure(sp, random_normalized(sp.dim, rng), fock::Frame::Lab);
        auto a = fock::annihilation(sp, trial % 3);
        // real * (a^dag - a) and imaginary * (a^dag + a) are both anti-hermitian
        fock::OperatorMatrix diff{sp, fock::SparseMatrix(fock::SparseMatrix(a.data.adjoint()) - a.data), false};
        fock::OperatorMatrix sum{sp, fock::SparseMatrix(fock::SparseMatrix(a.data.adjoint()) + a.data), true};
        auto moved = fock::matrix_exp_apply(diff, psi, Complex(mag(rng), 0.0));
        CHECK(std::abs(moved.vec.norm() - 1.0) <= 1e-9);
        auto rotated = fock::matrix_exp_apply(sum, psi, Complex(0.0, mag(rng)));
        CHECK(std::abs(rotated.vec.norm() - 1.0) <= 1e-9);
    }
}

TEST_CASE("matrix_exp_apply reports non-convergence") {
    auto sp = space4(5, 0, 0, 0);
    auto n = fock::number_op(sp, 0);
    CHECK_THROWS_AS(fock::matrix_exp_apply(n, basis_state(sp, {5, 0, 0, 0}), Complex(3.0),
                                           1e-10, 2),
                    fock::convergence_error);
}

TEST_CASE("embed_mode_ops matches composite products") {
    auto sp = space4(2, 1, 2, 1);
    // a1^dag a2 via embedding vs composite sparse product
    std::array<fock::ModeMatrix, 4> factors;
    factors[0] = fock::mode_creation(sp.levels(0));
    factors[1] = fock::mode_annihilation(sp.levels(1));
    auto embedded = fock::embed_mode_ops(sp, factors);
    auto direct = fock::SparseMatrix(fock::creation(sp, 0).data * fock::annihilation(sp, 1).data);
    CHECK(fock::max_abs_entry(fock::SparseMatrix(embedded.data - direct)) <= 1e-14);
}

TEST_CASE("mode_ladder_product against explicit powers") {
    const int levels = 6;
    auto b = fock::mode_annihilation(levels);
    auto bd = fock::mode_creation(levels);
    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; q <= 3; ++q) {
            fock::ModeMatrix ref = fock::mode_identity(levels);
            for (int k = 0; k < q; ++k) ref = b * ref;
            for (int k = 0; k < p; ++k) ref = bd * ref;
            auto got = fock::mode_ladder_product(levels, p, q);
            CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("pure state norm validated at construction") {
    auto sp = space4(1, 0, 0, 0);
    fock::Vector bad(sp.dim);
    bad << 1.0, 1.0;
    CHECK_THROWS_AS(fock::QuantumState::pure(sp, bad, fock::Frame::Lab), std::invalid_argument);
}

TEST_CASE("density state invariants validated") {
    auto sp = space4(1, 0, 0, 0);
    fock::DenseMatrix rho(2, 2);
    rho << 0.5, Complex(0.0, 0.3), Complex(0.0, 0.3), 0.5;  // not hermitian
    CHECK_THROWS_AS(fock::QuantumState::density(sp, rho, fock::Frame::Lab), std::invalid_argument);

    fock::DenseMatrix rho2(2, 2);
    rho2 << 0.7, 0.0, 0.0, 0.7;  // trace 1.4
    CHECK_THROWS_AS(fock::QuantumState::density(sp, rho2, fock::Frame::Lab), std::invalid_argument);

    fock::DenseMatrix rho3(2, 2);
    rho3 << 1.2, 0.0, 0.0, -0.2;  // negative eigenvalue
    CHECK_THROWS_AS(fock::QuantumState::density(sp, rho3, fock::Frame::Lab), std::invalid_argument);

    fock::DenseMatrix ok(2, 2);
    ok << 0.25, 0.0, 0.0, 0.75;
    auto st = fock::QuantumState::density(sp, ok, fock::Frame::Rotating);
    CHECK(st.norm_or_trace() == doctest::Approx(1.0));
    CHECK(fock::expectation(st, fock::number_op(sp, 0)).real() == doctest::Approx(0.75));
}

TEST_CASE("density matrix exp-apply is a unitary conjugation") {
    auto sp = space4(3, 0, 0, 0);
    std::mt19937 rng(4);
    auto psi = fock::QuantumState::pure(sp, random_normalized(sp.dim, rng), fock::Frame::Lab);
    auto rho = psi.to_density();

    auto a = fock::annihilation(sp, 0);
    fock::OperatorMatrix gen{sp, fock::SparseMatrix(fock::SparseMatrix(a.data.adjoint()) - a.data), false};
    const Complex s(0.0, 0.8);

    auto moved_psi = fock::matrix_exp_apply(gen, psi, s);
    auto moved_rho = fock::matrix_exp_apply(gen, rho, s);
    fock::DenseMatrix expected = moved_psi.vec * moved_psi.vec.adjoint();
    CHECK((moved_rho.rho - expected).cwiseAbs().maxCoeff() <= 1e-9);
}
