#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace heun {

using cplx = std::complex<double>;

// Error categories. The CLI maps domain errors to exit code 3 and
// convergence errors to exit code 4.
enum class errc {
  invalid_singular_point,
  pole_at_gamma,
  on_cut,
  outside_sheet,
  out_of_disk,
  singular_center,
  target_on_cut,
  target_outside_sheet,
  non_convergence,
  segment_near_singularity,
  tolerance_unreachable,
  quadrature_unresolved,
  bad_argument,
};

const char* errc_name(errc c);
bool errc_is_domain(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg, int detail = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code),
        detail_(detail) {}
  errc code() const noexcept { return code_; }
  // n_star / pole index when meaningful, -1 otherwise
  int detail() const noexcept { return detail_; }

 private:
  errc code_;
  int detail_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg, int detail = -1) {
  throw Error(code, msg, detail);
}

struct EvalFlags {
  bool used_log_case = false;
  bool used_index_transform = false;
  bool used_contour = false;
  int path_elements = 0;
};

// Value and z-derivative of one evaluation, with a truncation/rounding error
// estimate and a record of the code path taken.
struct EvalResult {
  cplx value{0.0};
  cplx derivative{0.0};
  double err_est = 0.0;
  EvalFlags flags;
};

}  // namespace heun
