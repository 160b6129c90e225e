#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace l1adapt {

/// Coefficients in ascending powers of the delay variable.
///
/// An a-polynomial stores (1, a_1, ..., a_n); a b-polynomial stores
/// (b_1, ..., b_m). Trailing entries may be zero, the stored length is
/// the model order, not the algebraic degree.
struct Polynomial {
  std::vector<double> coeffs;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) {}

  std::size_t size() const { return coeffs.size(); }
  double operator[](std::size_t i) const { return coeffs[i]; }

  /// Index of the last nonzero coefficient (0 for the zero polynomial).
  std::size_t degree() const;

  /// Evaluate at a real point by Horner's scheme.
  double eval(double x) const;
};

/// Truncated impulse response of the optimal-controller transfer function
/// together with a certified l1 tail bound. The true l1 norm lies in
/// [l1_norm, l1_norm + tail_bound].
struct ImpulseNorm {
  std::vector<double> coefficients;
  double l1_norm = 0.0;
  double tail_bound = 0.0;
  std::size_t truncation_length = 0;
};

/// Stability margin threshold: a Schur-Cohn reflection coefficient closer
/// to the unit circle than this is treated as non-minimum-phase.
inline constexpr double kMinPhaseMargin = 1e-9;

/// Smallest Schur-Cohn margin 1-|k_i| over the recursion applied to the
/// reversed polynomial of b; positive iff all roots of b lie strictly
/// outside the unit disk. Throws if b is empty or b_1 = 0.
double jury_margin(const Polynomial& b);

/// True iff every root of b(lambda) has modulus > 1, decided by the
/// Schur-Cohn/Jury recursion without extracting roots.
bool is_minimum_phase(const Polynomial& b);

/// Certified lower bound on the smallest root modulus of b, found by
/// bisecting the radius at which the scaled Jury test flips. Returns +inf
/// for (near-)constant b with no roots.
double min_root_modulus_lower_bound(const Polynomial& b);

/// Power-series coefficients g_k of (a(lambda)-1)/(lambda b(lambda)) by
/// long division, truncated once the certified geometric tail bound drops
/// below tol (relative to the running l1 norm, absolute floor 1e-12).
///
/// This is the causal series of the controller recursion
/// b(q^-1) u_t = (a(q^-1)-1) y_{t+1}, with g_0 = a_1/b_1.
///
/// Throws NotMinimumPhase, NonConvergent.
ImpulseNorm controller_impulse_response(const Polynomial& a, const Polynomial& b,
                                        double tol = 1e-9,
                                        std::size_t max_len = 100000);

/// Convenience: split a stacked coefficient vector (a_1..a_n, b_1..b_m)
/// into the monic a-polynomial (1, a_1..a_n) and the b-polynomial.
std::pair<Polynomial, Polynomial> split_xi(const std::vector<double>& xi,
                                           std::size_t n, std::size_t m);

/// l1 norm of the controller transfer function for a stacked xi.
ImpulseNorm xi_impulse_norm(const std::vector<double>& xi, std::size_t n,
                            std::size_t m, double tol = 1e-9,
                            std::size_t max_len = 100000);

}  // namespace l1adapt
