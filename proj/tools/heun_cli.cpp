// Command-line front end: point evaluation, gamma/z grid sweeps as data
// files, and the invariant self-test.
//
// Complex flags use "re,im" (decimal only); a bare "re" means imaginary
// part zero.  Exit codes: 0 success, 2 usage error, 3 domain error,
// 4 convergence error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "heun/oracle.hpp"
#include "heun/selftest.hpp"
#include "heun/sweep.hpp"

namespace {

using heun::cplx;

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  std::size_t used = 0;
  double re = 0.0, im = 0.0;
  if (comma == std::string::npos) {
    re = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
  } else {
    const std::string rs = text.substr(0, comma), is = text.substr(comma + 1);
    re = std::stod(rs, &used);
    if (used != rs.size()) throw std::invalid_argument("trailing characters");
    im = std::stod(is, &used);
    if (used != is.size()) throw std::invalid_argument("trailing characters");
  }
  return {re, im};
}

// "re_lo:re_hi:n,im_lo:im_hi:n"
heun::GridAxis parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("grid needs re and im specs separated by ','");
  const auto parse_one = [](const std::string& s, double& lo, double& hi, int& n) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("grid axis needs lo:hi:n");
    lo = std::stod(s.substr(0, c1));
    hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    n = std::stoi(s.substr(c2 + 1));
  };
  heun::GridAxis g;
  parse_one(text.substr(0, comma), g.re_lo, g.re_hi, g.n_re);
  parse_one(text.substr(comma + 1), g.im_lo, g.im_hi, g.n_im);
  if (g.n_re < 2 || g.n_im < 2)
    throw std::invalid_argument("grid needs at least 2 points per axis");
  if (!(std::isfinite(g.re_lo) && std::isfinite(g.re_hi) && std::isfinite(g.im_lo) &&
        std::isfinite(g.im_hi)))
    throw std::invalid_argument("grid bounds must be finite");
  return g;
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonFlags {
  std::string fn = "heunl";
  std::string a = "2,0", q = "0,0", alpha = "0,0", beta = "0,0", gamma = "0.5,0",
              delta = "0,0";
  std::string z = "0,0";
  double tol = 1e-12;
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_z) {
  cmd->add_option("--fn", f.fn, "heunl|heuns|heunl-reg|heuns-reg");
  cmd->add_option("--a", f.a, "singular point a, re,im");
  cmd->add_option("--q", f.q, "accessory parameter, re,im");
  cmd->add_option("--alpha", f.alpha, "re,im");
  cmd->add_option("--beta", f.beta, "re,im");
  cmd->add_option("--gamma", f.gamma, "re,im");
  cmd->add_option("--delta", f.delta, "re,im");
  if (with_z) cmd->add_option("--z", f.z, "evaluation point, re,im");
  cmd->add_option("--tol", f.tol, "target tolerance");
  cmd->add_option("--format", f.format, "csv|json");
  cmd->add_option("--out", f.out, "output file (default stdout)");
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
  return file;
}

int exit_code_for(const heun::Error& e) {
  // bad_argument from flag-derived values is a usage problem, not a domain one
  if (e.code() == heun::errc::bad_argument) return 2;
  return heun::errc_is_domain(e.code()) ? 3 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local Heun functions HeunL/HeunS and their gamma-regularized versions"};
  app.require_subcommand(1);

  CommonFlags ef;
  bool verify = false;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one point");
  add_common(eval, ef, true);
  eval->add_flag("--verify", verify, "cross-check against the ODE integrator");

  CommonFlags sf;
  std::string gamma_grid, z_grid;
  CLI::App* sweep = app.add_subcommand("sweep", "grid sweep to a data file");
  add_common(sweep, sf, true);
  sweep->add_option("--gamma-grid", gamma_grid, "re_lo:re_hi:n,im_lo:im_hi:n");
  sweep->add_option("--z-grid", z_grid, "re_lo:re_hi:n,im_lo:im_hi:n");

  std::uint64_t seed = 12345;
  std::string filter;
  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_option("--seed", seed, "corpus seed");
  selftest->add_option("--filter", filter, "run only checks containing this substring");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (eval->parsed()) {
      const heun::FnChoice fn = heun::fn_from_name(ef.fn);
      const heun::HeunParams p =
          heun::make_params(parse_complex(ef.a), parse_complex(ef.q),
                            parse_complex(ef.alpha), parse_complex(ef.beta),
                            parse_complex(ef.gamma), parse_complex(ef.delta));
      const cplx z = parse_complex(ef.z);
      const heun::RegConfig cfg;
      const heun::EvalResult r = heun::eval_fn(fn, p, z, cfg, ef.tol);

      std::optional<double> verify_abs, verify_rel;
      if (verify) {
        const double m = std::min(1.0, std::abs(p.a));
        if (std::abs(z) > 1e-3) {
          const cplx zs = 0.3 * m * z / std::abs(z);
          if (std::abs(z - zs) > 1e-6) {
            const heun::EvalResult seed_r = heun::eval_fn(fn, p, zs, cfg, ef.tol);
            const heun::OracleResult o =
                heun::integrate(p, zs, seed_r.value, seed_r.derivative, z,
                                std::min(ef.tol, 1e-10));
            verify_abs = std::abs(r.value - o.H);
            verify_rel = *verify_abs / std::max({std::abs(r.value), std::abs(o.H), 1e-300});
          } else {
            verify_abs = verify_rel = 0.0;
          }
        }
      }

      std::ofstream file;
      std::ostream& os = open_out(ef.out, file);
      if (ef.format == "json") {
        nlohmann::json j;
        j["fn"] = heun::fn_name(fn);
        j["value_re"] = r.value.real();
        j["value_im"] = r.value.imag();
        j["deriv_re"] = r.derivative.real();
        j["deriv_im"] = r.derivative.imag();
        j["err_est"] = r.err_est;
        j["flags"] = heun::format_flags(r.flags);
        if (verify_rel) {
          j["verify_abs_diff"] = *verify_abs;
          j["verify_rel_diff"] = *verify_rel;
        }
        os << j.dump() << "\n";
      } else {
        os << "value_re,value_im,deriv_re,deriv_im,err_est,flags";
        if (verify_rel) os << ",verify_abs_diff,verify_rel_diff";
        os << "\n";
        os << num17(r.value.real()) << ',' << num17(r.value.imag()) << ','
           << num17(r.derivative.real()) << ',' << num17(r.derivative.imag()) << ','
           << num17(r.err_est) << ',' << heun::format_flags(r.flags);
        if (verify_rel) os << ',' << num17(*verify_abs) << ',' << num17(*verify_rel);
        os << "\n";
      }
      return 0;
    }

    if (sweep->parsed()) {
      if (gamma_grid.empty() == z_grid.empty())
        throw std::invalid_argument("exactly one of --gamma-grid / --z-grid is required");
      heun::SweepSpec spec;
      spec.fn = heun::fn_from_name(sf.fn);
      spec.params = heun::make_params(parse_complex(sf.a), parse_complex(sf.q),
                                      parse_complex(sf.alpha), parse_complex(sf.beta),
                                      parse_complex(sf.gamma), parse_complex(sf.delta));
      spec.z = parse_complex(sf.z);
      spec.tol = sf.tol;
      if (!gamma_grid.empty()) {
        spec.axis = heun::SweepSpec::Axis::gamma;
        spec.grid = parse_grid(gamma_grid);
      } else {
        spec.axis = heun::SweepSpec::Axis::z;
        spec.grid = parse_grid(z_grid);
      }
      const std::vector<heun::SweepCell> cells = heun::run_sweep(spec);
      std::ofstream file;
      std::ostream& os = open_out(sf.out, file);
      if (sf.format == "json")
        heun::write_sweep_json(os, spec, cells);
      else
        heun::write_sweep_csv(os, cells);
      return 0;
    }

    if (selftest->parsed()) {
      const int failures = heun::run_selftest(seed, filter, std::cout);
      return failures == 0 ? 0 : 1;
    }
  } catch (const heun::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
