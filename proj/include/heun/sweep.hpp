#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "heun/regular.hpp"

namespace heun {

enum class FnChoice { heunl, heuns, heunl_reg, heuns_reg };

const char* fn_name(FnChoice fn);
FnChoice fn_from_name(const std::string& name);  // raises bad_argument

struct GridAxis {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
  int n_re = 0, n_im = 0;
};

// One sweep: the chosen function over a rectangular grid in gamma or z, the
// other arguments fixed.  Rows iterate the imaginary axis, the real axis is
// the fast index.
struct SweepSpec {
  FnChoice fn = FnChoice::heunl;
  HeunParams params;    // gamma inside is the fixed gamma for z sweeps
  cplx z{0.0};          // fixed z for gamma sweeps
  enum class Axis { gamma, z } axis = Axis::gamma;
  GridAxis grid;
  double tol = 1e-12;
  RegConfig reg;
};

struct SweepCell {
  cplx axis_value{0.0};
  bool ok = false;
  cplx value{0.0}, deriv{0.0};
  double err_est = 0.0;
  EvalFlags flags;
  std::string error_tag;  // errc name when !ok
};

EvalResult eval_fn(FnChoice fn, const HeunParams& p, cplx z, const RegConfig& cfg,
                   double tol);

// Deterministic regardless of internal parallelism: cells are computed into
// fixed grid slots and emitted in grid order.  Per-point failures become
// error-tagged cells, never aborts.
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

std::string format_flags(const EvalFlags& f);

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells);
void write_sweep_json(std::ostream& os, const SweepSpec& spec,
                      const std::vector<SweepCell>& cells);

}  // namespace heun
