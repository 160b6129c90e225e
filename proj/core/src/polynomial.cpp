#include "l1adapt/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "l1adapt/errors.hpp"

namespace l1adapt {

std::size_t Polynomial::degree() const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) d = i;
  }
  return d;
}

double Polynomial::eval(double x) const {
  double r = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) r = r * x + coeffs[i];
  return r;
}

namespace {

// Schur-Cohn recursion on p(z) = c_0 + c_1 z + ... + c_d z^d with c_d != 0.
// Returns the smallest margin 1 - |c_0/c_d| seen; all roots lie strictly
// inside the unit disk iff the result is positive.
double schur_cohn_margin(std::vector<double> c) {
  double margin = std::numeric_limits<double>::infinity();
  while (c.size() > 1) {
    const std::size_t d = c.size() - 1;
    const double k = c[0] / c[d];
    margin = std::min(margin, 1.0 - std::abs(k));
    if (margin <= 1e-12) return margin;
    std::vector<double> next(d);
    for (std::size_t i = 0; i < d; ++i) next[i] = c[i + 1] - k * c[d - 1 - i];
    c = std::move(next);
  }
  return margin;
}

// Margin of the Jury test for "all roots of b outside the disk of radius r".
// +inf when the (trimmed) b has no roots at all.
double jury_margin_at_radius(const Polynomial& b, double r) {
  const std::size_t d = b.degree();
  if (d == 0) return std::numeric_limits<double>::infinity();
  // Roots of b(r*lambda) outside the unit disk <=> roots of b outside radius r.
  // Reverse so the test becomes Schur stability.
  std::vector<double> scaled(d + 1);
  double rp = 1.0;
  for (std::size_t j = 0; j <= d; ++j) {
    scaled[j] = b.coeffs[j] * rp;
    rp *= r;
  }
  std::vector<double> rev(d + 1);
  for (std::size_t j = 0; j <= d; ++j) rev[j] = scaled[d - j];
  return schur_cohn_margin(std::move(rev));
}

}  // namespace

double jury_margin(const Polynomial& b) {
  if (b.coeffs.empty()) throw NotMinimumPhase("empty b polynomial");
  if (b.coeffs[0] == 0.0) throw NotMinimumPhase("b_1 = 0");
  return jury_margin_at_radius(b, 1.0);
}

bool is_minimum_phase(const Polynomial& b) {
  return jury_margin(b) >= kMinPhaseMargin;
}

double min_root_modulus_lower_bound(const Polynomial& b) {
  const std::size_t d = b.degree();
  if (d == 0) return std::numeric_limits<double>::infinity();
  if (jury_margin(b) < kMinPhaseMargin)
    throw NotMinimumPhase("root inside or on the unit disk");
  // Cauchy bound on root moduli caps the bracket.
  double cauchy = 0.0;
  for (std::size_t j = 0; j < d; ++j)
    cauchy = std::max(cauchy, std::abs(b.coeffs[j] / b.coeffs[d]));
  const double r_cap = 2.0 + cauchy;
  double lo = 1.0;
  double hi = 2.0;
  while (hi < r_cap && jury_margin_at_radius(b, hi) > 1e-12) {
    lo = hi;
    hi *= 2.0;
  }
  hi = std::min(hi, r_cap);
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (jury_margin_at_radius(b, mid) > 1e-12)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

ImpulseNorm controller_impulse_response(const Polynomial& a, const Polynomial& b,
                                        double tol, std::size_t max_len) {
  if (a.coeffs.empty() || std::abs(a.coeffs[0] - 1.0) > 1e-12)
    throw Error("a polynomial must be monic in its constant term");
  if (jury_margin(b) < kMinPhaseMargin)
    throw NotMinimumPhase("b is not minimum phase");

  const std::size_t n = a.size() - 1;  // numerator (a(l)-1)/l has n terms
  const std::size_t d = b.degree();

  ImpulseNorm out;
  if (n == 0) return out;  // zero numerator, zero series

  const double r_lo = min_root_modulus_lower_bound(b);
  const double rho =
      std::isfinite(r_lo) ? 1.0 / r_lo + 1e-12 : 0.0;  // decay rate bound
  constexpr std::size_t kFitWindow = 10;

  std::vector<double>& g = out.coefficients;
  g.reserve(256);
  double l1 = 0.0;
  double rho_pow = 1.0;              // rho^k for the current k
  std::vector<double> fit(kFitWindow, 0.0);  // |g_k| / rho^k, ring buffer

  for (std::size_t k = 0; k < max_len; ++k) {
    double num = (k + 1 <= n) ? a.coeffs[k + 1] : 0.0;
    for (std::size_t j = 1; j <= std::min(k, d); ++j)
      num -= b.coeffs[j] * g[k - j];
    const double gk = num / b.coeffs[0];
    g.push_back(gk);
    l1 += std::abs(gk);
    if (rho > 0.0 && rho_pow > 0.0) fit[k % kFitWindow] = std::abs(gk) / rho_pow;
    rho_pow *= rho;

    if (k + 1 >= n) {
      // Exact termination: remainder state identically zero.
      bool all_zero = true;
      for (std::size_t j = 0; j < std::min(d, g.size()) && all_zero; ++j)
        all_zero = (g[g.size() - 1 - j] == 0.0);
      if (all_zero) {
        out.tail_bound = 0.0;
        out.l1_norm = l1;
        out.truncation_length = g.size();
        return out;
      }
      if (rho > 0.0 && rho < 1.0 && k + 1 >= kFitWindow) {
        const double c_fit = 2.0 * *std::max_element(fit.begin(), fit.end());
        const double tail = c_fit * rho_pow / (1.0 - rho);
        if (tail <= std::max(tol * l1, 1e-12)) {
          out.tail_bound = tail;
          out.l1_norm = l1;
          out.truncation_length = g.size();
          return out;
        }
      }
    }
  }
  throw NonConvergent("impulse-response tail bound not met within max_len");
}

std::pair<Polynomial, Polynomial> split_xi(const std::vector<double>& xi,
                                           std::size_t n, std::size_t m) {
  if (xi.size() != n + m) throw Error("xi length does not match n + m");
  std::vector<double> ac(n + 1);
  ac[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) ac[i + 1] = xi[i];
  std::vector<double> bc(xi.begin() + static_cast<std::ptrdiff_t>(n), xi.end());
  return {Polynomial(std::move(ac)), Polynomial(std::move(bc))};
}

ImpulseNorm xi_impulse_norm(const std::vector<double>& xi, std::size_t n,
                            std::size_t m, double tol, std::size_t max_len) {
  auto [a, b] = split_xi(xi, n, m);
  return controller_impulse_response(a, b, tol, max_len);
}

}  // namespace l1adapt
