#pragma once

#include <cmath>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sparsepot/envelopes.hpp"
#include "sparsepot/special_functions.hpp"
#include "sparsepot/spectral_count.hpp"

namespace sparsepot::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumeric = 2, kContour = 3 };

/// Parses "a+bi", "a-bi", "bi", "a" (also with j). Throws DomainError.
cplx parse_complex(std::string_view text);

/// "re_lo,re_hi,im_lo,im_hi" or "re,im,radius". Throws DomainError.
Region parse_rect(std::string_view text);
Region parse_disk(std::string_view text);

/// True if the closed region meets [0, inf).
bool meets_positive_axis(const Region& region);

/// %.17g, the CSV float format.
std::string fmt(double x);

struct BumpArgs {
  std::string zeta;
  double sigma = 1.0;
  double eps0 = 0.2;
  std::vector<double> q_list = {1.0, 2.0, 4.0, HUGE_VAL};
  std::string report_path;     // JSON; stdout when empty
  std::string potential_path;  // optional potential file
  std::string svg_path;        // optional |psi| profile
};

struct SpectrumArgs {
  std::string potential_path;
  Region region;
  std::string csv_path;  // stdout when empty
  std::string svg_path;
  double min_diameter = 1e-8;
  int workers = 0;
};

struct ImagStepArgs {
  std::vector<int> N;
  double C_box = 10.0;
  std::string csv_path;
  std::string svg_path;  // with several N, "_N<k>" is inserted before the extension
  int workers = 0;
};

struct SparseArgs {
  std::string targets_path;
  bool faithful = false;
  double delta = 1e-2;
  double sigma = 1.0;
  double C_L = 1.0;
  double rule_constant = 2.0;
  double eps0 = 0.2;
  bool verify = true;
  std::string report_path;
  std::string potential_path;  // desk mode only
  std::string svg_path;        // desk mode only: potential profile
  int workers = 0;
};

struct EnvelopesArgs {
  std::string z;
  std::string L = "k";  // k | 2^k | log k | k^a | list:l1,l2,...
  int d = 1;
  double q = 2.0;
  double p = 4.0;
  double alpha = 1.0;
  double gamma = 1.0;
  double vnorm = 1.0;
  double eta = 1.0;  // for the sep column
  double s = 0.1;    // for the h_L column
  std::string csv_path;
};

struct CheckArgs {
  std::string potential_path;
  std::string eigs_csv;  // rows re,im,... as written by spectrum
  double radius = 1e-6;  // tight disk around each row
  double q = 2.0;
  int d = 1;
  int workers = 0;
};

/// Each command writes its primary output to the named file or `out`, and
/// diagnostics to `log`. The return value is the process exit code.
int run_bump(const BumpArgs& args, std::ostream& out, std::ostream& log);
int run_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& log);
int run_imag_step(const ImagStepArgs& args, std::ostream& out, std::ostream& log);
int run_sparse(const SparseArgs& args, std::ostream& out, std::ostream& log);
int run_envelopes(const EnvelopesArgs& args, std::ostream& out, std::ostream& log);
int run_check(const CheckArgs& args, std::ostream& out, std::ostream& log);

/// Separation rule from its textual form (see EnvelopesArgs::L).
/// Throws DomainError.
SeparationSequence parse_separation(std::string_view text);

}  // namespace sparsepot::cli
