#pragma once

namespace semihilbert::tol {

// Residual tolerances are applied as eps * (1 + norm of the input).
inline constexpr double kEig = 1e-10;
inline constexpr double kMoorePenrose = 1e-10;
inline constexpr double kHermitian = 1e-10;

// Eigenvalues at or below kRank * lambda_max count as zero; eigenvalues below
// -kNegative * lambda_max make a matrix "not PSD". Smaller negatives are clipped.
inline constexpr double kRank = 1e-10;
inline constexpr double kNegative = 1e-10;

// Membership gates for B_A and B_{A^{1/2}} (relative).
inline constexpr double kMembership = 1e-8;

// Certification classes, scaled by (1 + instance scale).
inline constexpr double kEquality = 1e-7;
inline constexpr double kInequality = 1e-8;

// Angle search defaults for the numerical radius.
inline constexpr int kThetaGrid = 1024;
inline constexpr int kThetaBrackets = 3;
inline constexpr double kThetaBracket = 1e-12;

}  // namespace semihilbert::tol
