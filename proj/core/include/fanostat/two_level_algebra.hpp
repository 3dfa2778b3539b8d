#pragma once

#include <array>

#include <Eigen/Core>

#include "fanostat/physical_model.hpp"

namespace fanostat {

/// Bloch vector in the rotating frame. s_plus = conj(s_minus) for a physical state.
struct BlochState {
    Complex s_minus{0.0, 0.0};
    Complex s_plus{0.0, 0.0};
    double s_z = -1.0;
};

/// Operator on a two-level system expanded on {1, σ-, σ+, σz}.
class TwoLevelOperator {
public:
    enum Basis { kIdentity = 0, kMinus = 1, kPlus = 2, kZ = 3 };

    TwoLevelOperator() = default;
    TwoLevelOperator(Complex identity, Complex minus, Complex plus, Complex z)
        : c_{identity, minus, plus, z} {}

    static TwoLevelOperator identity() { return {1.0, 0.0, 0.0, 0.0}; }
    static TwoLevelOperator sigma_minus() { return {0.0, 1.0, 0.0, 0.0}; }
    static TwoLevelOperator sigma_plus() { return {0.0, 0.0, 1.0, 0.0}; }
    static TwoLevelOperator sigma_z() { return {0.0, 0.0, 0.0, 1.0}; }

    Complex operator[](Basis b) const { return c_[b]; }

    TwoLevelOperator adjoint() const;
    Complex expectation(const BlochState& s) const;
    /// 2×2 matrix in the (|e>, |g>) basis.
    Eigen::Matrix2cd matrix() const;

    friend TwoLevelOperator operator+(const TwoLevelOperator& a, const TwoLevelOperator& b);
    friend TwoLevelOperator operator*(const TwoLevelOperator& a, const TwoLevelOperator& b);
    friend TwoLevelOperator operator*(Complex k, const TwoLevelOperator& a);

private:
    std::array<Complex, 4> c_{};
};

}  // namespace fanostat
