#include "heun/sweep.hpp"

#include <cstdio>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace heun {

const char* fn_name(FnChoice fn) {
  switch (fn) {
    case FnChoice::heunl: return "heunl";
    case FnChoice::heuns: return "heuns";
    case FnChoice::heunl_reg: return "heunl-reg";
    case FnChoice::heuns_reg: return "heuns-reg";
  }
  return "?";
}

FnChoice fn_from_name(const std::string& name) {
  if (name == "heunl") return FnChoice::heunl;
  if (name == "heuns") return FnChoice::heuns;
  if (name == "heunl-reg") return FnChoice::heunl_reg;
  if (name == "heuns-reg") return FnChoice::heuns_reg;
  raise(errc::bad_argument, "unknown function '" + name + "'");
}

EvalResult eval_fn(FnChoice fn, const HeunParams& p, cplx z, const RegConfig& cfg,
                   double tol) {
  switch (fn) {
    case FnChoice::heunl: return heunl(p, z, tol);
    case FnChoice::heuns: return heuns(p, z, tol);
    case FnChoice::heunl_reg: return heunl_reg(p, z, cfg, tol);
    case FnChoice::heuns_reg: return heuns_reg(p, z, cfg, tol);
  }
  raise(errc::bad_argument, "unknown function choice");
}

std::string format_flags(const EvalFlags& f) {
  std::string s;
  if (f.used_log_case) s += "log_case|";
  if (f.used_index_transform) s += "index_transform|";
  if (f.used_contour) s += "contour|";
  s += "elems=" + std::to_string(f.path_elements);
  return s;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
  const GridAxis& g = spec.grid;
  if (g.n_re < 1 || g.n_im < 1) raise(errc::bad_argument, "grid needs n >= 1 per axis");
  const std::size_t total = static_cast<std::size_t>(g.n_re) * g.n_im;
  std::vector<SweepCell> cells(total);

  const auto cell_at = [&](std::size_t idx) {
    const int i_im = static_cast<int>(idx) / g.n_re;
    const int i_re = static_cast<int>(idx) % g.n_re;
    const double re =
        (g.n_re == 1) ? g.re_lo : g.re_lo + (g.re_hi - g.re_lo) * i_re / (g.n_re - 1);
    const double im =
        (g.n_im == 1) ? g.im_lo : g.im_lo + (g.im_hi - g.im_lo) * i_im / (g.n_im - 1);
    const cplx axis_value(re, im);

    SweepCell c;
    c.axis_value = axis_value;
    try {
      HeunParams p = spec.params;
      cplx z = spec.z;
      if (spec.axis == SweepSpec::Axis::gamma)
        p = with_gamma(spec.params, axis_value);
      else
        z = axis_value;
      const EvalResult r = eval_fn(spec.fn, p, z, spec.reg, spec.tol);
      c.ok = true;
      c.value = r.value;
      c.deriv = r.derivative;
      c.err_est = r.err_est;
      c.flags = r.flags;
    } catch (const Error& e) {
      c.error_tag = errc_name(e.code());
    } catch (const std::exception&) {
      c.error_tag = "internal_error";
    }
    return c;
  };

  unsigned n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  n_threads = std::min<unsigned>(n_threads, 8);
  if (total < 32 || n_threads == 1) {
    for (std::size_t i = 0; i < total; ++i) cells[i] = cell_at(i);
    return cells;
  }

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < total; i += n_threads) cells[i] = cell_at(i);
    });
  }
  for (auto& th : pool) th.join();
  return cells;
}

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
  os << "axis_re,axis_im,value_re,value_im,deriv_re,deriv_im,err_est,flags,error\n";
  for (const auto& c : cells) {
    os << num17(c.axis_value.real()) << ',' << num17(c.axis_value.imag()) << ',';
    if (c.ok) {
      os << num17(c.value.real()) << ',' << num17(c.value.imag()) << ','
         << num17(c.deriv.real()) << ',' << num17(c.deriv.imag()) << ','
         << num17(c.err_est) << ',' << format_flags(c.flags) << ",\n";
    } else {
      os << ",,,,,-," << c.error_tag << "\n";
    }
  }
}

void write_sweep_json(std::ostream& os, const SweepSpec& spec,
                      const std::vector<SweepCell>& cells) {
  nlohmann::json j;
  j["fn"] = fn_name(spec.fn);
  j["axis"] = (spec.axis == SweepSpec::Axis::gamma) ? "gamma" : "z";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json r;
    r["axis_re"] = c.axis_value.real();
    r["axis_im"] = c.axis_value.imag();
    if (c.ok) {
      r["value_re"] = c.value.real();
      r["value_im"] = c.value.imag();
      r["deriv_re"] = c.deriv.real();
      r["deriv_im"] = c.deriv.imag();
      r["err_est"] = c.err_est;
      r["flags"] = format_flags(c.flags);
    } else {
      r["error"] = c.error_tag;
    }
    rows.push_back(std::move(r));
  }
  j["cells"] = std::move(rows);
  os << j.dump() << "\n";
}

}  // namespace heun
