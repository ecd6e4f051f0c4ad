// Command-line front end. Argument parsing only; the commands live in the
// library (sparsepot/cli_commands.hpp).
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsepot/cli_commands.hpp"
#include "sparsepot/errors.hpp"

namespace cli = sparsepot::cli;

int main(int argc, char** argv) {
  CLI::App app{"sparsepot: eigenvalues of complex step and sparse potentials"};
  app.require_subcommand(1);
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (0: SPARSEPOT_WORKERS or all cores)");

  cli::BumpArgs bump;
  std::vector<std::string> q_list;
  auto* c_bump = app.add_subcommand("bump", "single step bump with a prescribed eigenvalue");
  c_bump->add_option("--zeta", bump.zeta, "target eigenvalue a+bi")->required();
  c_bump->add_option("--sigma", bump.sigma, "bump parameter sigma in (0, 1]");
  c_bump->add_option("--eps0", bump.eps0, "sector aperture");
  c_bump->add_option("--q", q_list, "L^q norms to report (inf allowed)")->delimiter(',');
  c_bump->add_option("--out", bump.report_path, "JSON report (default stdout)");
  c_bump->add_option("--potential", bump.potential_path, "write the potential file");
  c_bump->add_option("--svg", bump.svg_path, "|psi| profile plot");

  cli::SpectrumArgs spec;
  std::string rect, disk;
  auto* c_spec = app.add_subcommand("spectrum", "eigenvalues of a potential file in a region");
  c_spec->add_option("--potential", spec.potential_path, "potential JSON")->required();
  auto* o_rect = c_spec->add_option("--rect", rect, "re_lo,re_hi,im_lo,im_hi");
  auto* o_disk = c_spec->add_option("--disk", disk, "re,im,radius");
  o_rect->excludes(o_disk);
  c_spec->add_option("--out", spec.csv_path, "CSV (default stdout)");
  c_spec->add_option("--svg", spec.svg_path, "scatter plot");
  c_spec->add_option("--min-diameter", spec.min_diameter, "smallest cell before reporting a cluster");

  cli::ImagStepArgs imag;
  auto* c_imag = app.add_subcommand("imag-step", "eigenvalue census of V = i on [-N, N]");
  c_imag->add_option("--N", imag.N, "comma-separated N >= 8")->delimiter(',')->required();
  c_imag->add_option("--C-box", imag.C_box, "census box constant");
  c_imag->add_option("--out", imag.csv_path, "CSV (default stdout)");
  c_imag->add_option("--svg", imag.svg_path, "scatter plot colored by sheet");

  cli::SparseArgs sparse;
  std::string mode = "desk";
  auto* c_sparse = app.add_subcommand("sparse", "sparse potential with eigenvalues near targets");
  c_sparse->add_option("--targets", sparse.targets_path, "targets JSON")->required();
  c_sparse->add_option("--mode", mode, "desk or faithful")->check(CLI::IsMember({"desk", "faithful"}));
  c_sparse->add_option("--delta", sparse.delta, "desk-mode disk radius");
  c_sparse->add_option("--sigma", sparse.sigma, "bump parameter");
  c_sparse->add_option("--C-L", sparse.C_L, "gap prefactor");
  c_sparse->add_option("--rule-constant", sparse.rule_constant, "separation rule constant");
  c_sparse->add_option("--eps0", sparse.eps0, "sector aperture");
  c_sparse->add_flag("--no-verify", [&](std::int64_t) { sparse.verify = false; }, "skip disk checks");
  c_sparse->add_option("--out", sparse.report_path, "JSON report (default stdout)");
  c_sparse->add_option("--potential", sparse.potential_path, "write the assembled potential");
  c_sparse->add_option("--svg", sparse.svg_path, "potential profile plot");

  cli::EnvelopesArgs env;
  auto* c_env = app.add_subcommand("envelopes", "resolvent envelopes and separation sums at z");
  c_env->add_option("--z", env.z, "spectral parameter a+bi")->required();
  c_env->add_option("--L", env.L, "gap rule: k, 2^k, log k, k^a, list:l1,l2,...");
  c_env->add_option("--d", env.d, "dimension");
  c_env->add_option("--q", env.q, "Lebesgue exponent");
  c_env->add_option("--p", env.p, "Schatten exponent");
  c_env->add_option("--alpha", env.alpha, "alpha");
  c_env->add_option("--gamma", env.gamma, "gamma");
  c_env->add_option("--vnorm", env.vnorm, "sup_j ||V_j||_q");
  c_env->add_option("--eta", env.eta, "eta for the sep column");
  c_env->add_option("--s", env.s, "s for the h_L column");
  c_env->add_option("--out", env.csv_path, "CSV (default stdout)");

  cli::CheckArgs check;
  auto* c_check = app.add_subcommand("check", "re-localize eigenvalue rows in tight disks");
  c_check->add_option("--potential", check.potential_path, "potential JSON")->required();
  c_check->add_option("--eigs", check.eigs_csv, "CSV with re,im columns")->required();
  c_check->add_option("--radius", check.radius, "disk radius around each row");
  c_check->add_option("--q", check.q, "exponent for the magnitude ratio");
  c_check->add_option("--d", check.d, "dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  try {
    if (c_bump->parsed()) {
      if (!q_list.empty()) {
        bump.q_list.clear();
        for (const std::string& q : q_list) bump.q_list.push_back(q == "inf" ? HUGE_VAL : std::stod(q));
      }
      return cli::run_bump(bump, std::cout, std::cerr);
    }
    if (c_spec->parsed()) {
      if (rect.empty() == disk.empty()) {
        std::cerr << "error: give exactly one of --rect or --disk\n";
        return cli::kUsage;
      }
      spec.region = rect.empty() ? cli::parse_disk(disk) : cli::parse_rect(rect);
      spec.workers = workers;
      return cli::run_spectrum(spec, std::cout, std::cerr);
    }
    if (c_imag->parsed()) {
      imag.workers = workers;
      return cli::run_imag_step(imag, std::cout, std::cerr);
    }
    if (c_sparse->parsed()) {
      sparse.faithful = mode == "faithful";
      sparse.workers = workers;
      return cli::run_sparse(sparse, std::cout, std::cerr);
    }
    if (c_env->parsed()) return cli::run_envelopes(env, std::cout, std::cerr);
    if (c_check->parsed()) {
      check.workers = workers;
      return cli::run_check(check, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    // Argument conversions done here (regions, q list) are usage errors.
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  }
  return cli::kUsage;
}
