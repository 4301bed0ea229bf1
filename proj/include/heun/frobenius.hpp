#pragma once

#include <vector>

#include "heun/params.hpp"

namespace heun {

enum class SeriesKind { plain, log_nonpositive, log_gamma_one };

// Local solution data at z = 0.  Interpretation by kind:
//
//  plain            H = sum b_n z^n                          (coeff_main = b)
//  log_nonpositive  H = sum c_n z^n + (C log z + A) sum s_n z^n
//                   coeff_main = c, coeff_aux = s, log_constant = C,
//                   free_constant = A = 0, c_{n_star+1} = 0 convention
//  log_gamma_one    H = sum d_n z^n + (log z + B) sum t_n z^n
//                   coeff_main = d, coeff_aux = t (= b at gamma=1),
//                   log_constant = 1, free_constant = B = 0
struct SeriesLocal {
  SeriesKind kind = SeriesKind::plain;
  int n_star = 0;
  std::vector<cplx> coeff_main;
  std::vector<cplx> coeff_aux;
  cplx log_constant{0.0};
  cplx free_constant{0.0};
  double radius = 0.0;  // min(1, |a|)
};

// Coefficients of the three-term recurrence P_n b_n = Q_n b_{n-1} + R_n b_{n-2}
// and the S,T,U companions entering the logarithmic recurrences.
struct RecurrenceCoeffs {
  cplx P, Q, R, S, T, U;
};

RecurrenceCoeffs rec_at(const HeunParams& p, int n);

// Plain series b_n; requires dist(gamma, Z<=0) >= 1e-14 (else the recurrence
// hits P_{n_star+1} = 0).
SeriesLocal coeffs_plain(const HeunParams& p, int N);

// Logarithmic series at gamma = -n_star; the caller fixes gamma (p.gamma must
// already be the exact integer, epsilon re-derived accordingly).
SeriesLocal coeffs_log_nonpositive(const HeunParams& p, int n_star, int N);

// Logarithmic second solution at gamma = 1; the t_n sequence is the plain
// HeunL coefficient sequence at gamma = 1.
SeriesLocal coeffs_log_gamma_one(const HeunParams& p, int N);

// Residue of HeunL(gamma; z) at gamma = -n_star:
//   K = (Q_{n_star+1} c_{n_star} + R_{n_star+1} c_{n_star-1}) / (a (n_star+1)),
// everything evaluated with gamma fixed to -n_star (gamma inside p is ignored,
// epsilon re-derived).
cplx residue_K(const HeunParams& p, int n_star);

struct SumResult {
  cplx H{0.0}, dH{0.0};
  double err_est = 0.0;
  bool converged = false;  // stopping rule fired within the stored coefficients
};

// Sums the stored series (value and term-wise derivative) at z with the
// stopping rule: |term| < tol * |partial sum| for 4 consecutive terms and
// n > 20.  err_est is a geometric tail bound from the observed term ratio.
// Throws out_of_disk beyond 0.95 * radius and on_cut for log kinds on B0.
SumResult sum_series(const SeriesLocal& s, cplx z, double tol);

inline constexpr int kSeriesMaxTerms = 10000;
inline constexpr double kDiskSafety = 0.95;

}  // namespace heun
