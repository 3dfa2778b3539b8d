#include <catch_amalgamated.hpp>

#include "fanostat/two_level_algebra.hpp"

using namespace fanostat;

namespace {

using Op = TwoLevelOperator;

const Op kBasis[4] = {Op::identity(), Op::sigma_minus(), Op::sigma_plus(), Op::sigma_z()};

}  // namespace

TEST_CASE("product table matches 2x2 matrices") {
    for (const Op& a : kBasis) {
        for (const Op& b : kBasis) {
            CHECK(((a * b).matrix() - a.matrix() * b.matrix()).norm() < 1e-15);
        }
    }
}

TEST_CASE("named reductions") {
    const Op m = Op::sigma_minus(), p = Op::sigma_plus(), z = Op::sigma_z(), one = Op::identity();
    CHECK((m * m).matrix().norm() == 0.0);
    CHECK(((z * m).matrix() + m.matrix()).norm() < 1e-15);
    CHECK(((m * p).matrix() - (Complex(0.5) * (one + Complex(-1.0) * z)).matrix()).norm() < 1e-15);
    CHECK(((p * m).matrix() - (Complex(0.5) * (one + z)).matrix()).norm() < 1e-15);
}

TEST_CASE("adjoint and expectation") {
    const Op x = Complex(0.62) * Op::identity() + Complex(0.1, -0.4) * Op::sigma_minus() + Complex(0.0, 2.0) * Op::sigma_z();
    CHECK((x.adjoint().matrix() - x.matrix().adjoint()).norm() < 1e-15);

    const BlochState s{Complex(0.2, -0.1), Complex(0.2, 0.1), -0.3};
    // density matrix in the (|e>, |g>) basis
    Eigen::Matrix2cd rho;
    rho << (1 + s.s_z) / 2, s.s_minus, s.s_plus, (1 - s.s_z) / 2;
    for (const Op& a : kBasis) {
        const Complex direct = (rho * a.matrix()).trace();
        CHECK(std::abs(a.expectation(s) - direct) < 1e-15);
    }
}
