#include "fanostat/two_level_algebra.hpp"

namespace fanostat {

namespace {

using Row = std::array<Complex, 4>;

// kProducts[i][j] = basis_i * basis_j on {1, σ-, σ+, σz}.
const std::array<std::array<Row, 4>, 4> kProducts = {{
    {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}},
    {{{0, 1, 0, 0}, {0, 0, 0, 0}, {0.5, 0, 0, -0.5}, {0, 1, 0, 0}}},
    {{{0, 0, 1, 0}, {0.5, 0, 0, 0.5}, {0, 0, 0, 0}, {0, 0, -1, 0}}},
    {{{0, 0, 0, 1}, {0, -1, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}}},
}};

}  // namespace

TwoLevelOperator TwoLevelOperator::adjoint() const {
    return {std::conj(c_[kIdentity]), std::conj(c_[kPlus]), std::conj(c_[kMinus]), std::conj(c_[kZ])};
}

Complex TwoLevelOperator::expectation(const BlochState& s) const {
    return c_[kIdentity] + c_[kMinus] * s.s_minus + c_[kPlus] * s.s_plus + c_[kZ] * s.s_z;
}

Eigen::Matrix2cd TwoLevelOperator::matrix() const {
    Eigen::Matrix2cd m;
    m << c_[kIdentity] + c_[kZ], c_[kPlus],
         c_[kMinus], c_[kIdentity] - c_[kZ];
    return m;
}

TwoLevelOperator operator+(const TwoLevelOperator& a, const TwoLevelOperator& b) {
    TwoLevelOperator out;
    for (int i = 0; i < 4; ++i) out.c_[i] = a.c_[i] + b.c_[i];
    return out;
}

TwoLevelOperator operator*(const TwoLevelOperator& a, const TwoLevelOperator& b) {
    TwoLevelOperator out;
    for (int i = 0; i < 4; ++i) {
        if (a.c_[i] == 0.0) continue;
        for (int j = 0; j < 4; ++j) {
            const Complex k = a.c_[i] * b.c_[j];
            if (k == 0.0) continue;
            for (int r = 0; r < 4; ++r) out.c_[r] += k * kProducts[i][j][r];
        }
    }
    return out;
}

TwoLevelOperator operator*(Complex k, const TwoLevelOperator& a) {
    TwoLevelOperator out;
    for (int i = 0; i < 4; ++i) out.c_[i] = k * a.c_[i];
    return out;
}

}  // namespace fanostat
