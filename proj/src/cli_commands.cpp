#include "sparsepot/cli_commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sparsepot/errors.hpp"
#include "sparsepot/imag_step.hpp"
#include "sparsepot/potential.hpp"
#include "sparsepot/schrodinger_1d.hpp"
#include "sparsepot/sparse_builder.hpp"
#include "sparsepot/step_model.hpp"

namespace sparsepot::cli {

using nlohmann::json;

namespace {

double to_double(const std::string& s, std::string_view whole) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("cannot parse number in \"" + std::string(whole) + "\"");
  }
}

std::vector<double> split_numbers(std::string_view text, std::size_t expected, const char* what) {
  std::vector<double> v;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) v.push_back(to_double(item, text));
  if (v.size() != expected) {
    throw DomainError(std::string(what) + ": expected " + std::to_string(expected) +
                      " comma-separated numbers, got \"" + std::string(text) + "\"");
  }
  return v;
}

// Primary output goes to a file when a path is given, else to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw SchemaError("cannot write " + path, -1);
    os_ = &file_;
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path, -1);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SchemaError& e) {
    log << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    log << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContourError& e) {
    log << "error: " << e.what()
        << "\nhint: a zero sits on or very near the contour; nudge the region boundary\n";
    return kContour;
  } catch (const ConvergenceError& e) {
    log << "error: " << e.what() << " (last iterate " << fmt(e.last_iterate().real()) << ","
        << fmt(e.last_iterate().imag()) << ")\n";
    return kNumeric;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kNumeric;
  }
}

int resolve_workers(int w) { return w > 0 ? w : default_workers(); }

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Static SVG with a linear data window mapped onto a fixed canvas.
class Svg {
 public:
  Svg(double x_lo, double x_hi, double y_lo, double y_hi, std::string title)
      : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi), title_(std::move(title)) {
    if (!(x_hi_ > x_lo_)) x_hi_ = x_lo_ + 1.0;
    if (!(y_hi_ > y_lo_)) y_hi_ = y_lo_ + 1.0;
  }

  bool inside(double x, double y) const {
    return x >= x_lo_ && x <= x_hi_ && y >= y_lo_ && y <= y_hi_;
  }

  void rect(double x0, double x1, double y0, double y1, const char* stroke) {
    const double a = px(std::max(x0, x_lo_)), b = px(std::min(x1, x_hi_));
    const double c = py(std::min(y1, y_hi_)), d = py(std::max(y0, y_lo_));
    body_ << "<rect x=\"" << short_num(a) << "\" y=\"" << short_num(c) << "\" width=\""
          << short_num(b - a) << "\" height=\"" << short_num(d - c) << "\" fill=\"none\" stroke=\""
          << stroke << "\" stroke-dasharray=\"4 3\"/>\n";
  }

  void circle(double cx, double cy, double r, const char* stroke) {
    body_ << "<ellipse cx=\"" << short_num(px(cx)) << "\" cy=\"" << short_num(py(cy))
          << "\" rx=\"" << short_num(r / (x_hi_ - x_lo_) * kW) << "\" ry=\""
          << short_num(r / (y_hi_ - y_lo_) * kH) << "\" fill=\"none\" stroke=\"" << stroke
          << "\" stroke-dasharray=\"4 3\"/>\n";
  }

  void point(double x, double y, const char* fill) {
    if (!inside(x, y)) return;
    body_ << "<circle cx=\"" << short_num(px(x)) << "\" cy=\"" << short_num(py(y))
          << "\" r=\"3\" fill=\"" << fill << "\"/>\n";
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const char* stroke) {
    body_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double y = std::clamp(ys[i], y_lo_, y_hi_);
      body_ << short_num(px(xs[i])) << "," << short_num(py(y)) << " ";
    }
    body_ << "\"/>\n";
  }

  void legend(const std::string& text, const char* color) {
    body_ << "<text x=\"" << kM + 10 << "\" y=\"" << kM + 18 + 16 * legends_++
          << "\" font-size=\"12\" fill=\"" << color << "\">" << text << "</text>\n";
  }

  std::string str() const {
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW + 2 * kM << "\" height=\""
      << kH + 2 * kM << "\" font-family=\"sans-serif\">\n"
      << "<rect x=\"" << kM << "\" y=\"" << kM << "\" width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\" stroke=\"black\"/>\n"
      << "<text x=\"" << kM << "\" y=\"" << kM - 12 << "\" font-size=\"14\">" << title_
      << "</text>\n";
    auto label = [&](double x, double y, const char* anchor, double v) {
      o << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"11\" text-anchor=\"" << anchor
        << "\">" << short_num(v) << "</text>\n";
    };
    label(kM, kM + kH + 16, "start", x_lo_);
    label(kM + kW, kM + kH + 16, "end", x_hi_);
    label(kM - 4, kM + kH, "end", y_lo_);
    label(kM - 4, kM + 10, "end", y_hi_);
    o << body_.str() << "</svg>\n";
    return o.str();
  }

  void save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw SchemaError("cannot write " + path, -1);
    f << str();
  }

 private:
  static constexpr double kW = 560, kH = 400, kM = 60;
  double px(double x) const { return kM + (x - x_lo_) / (x_hi_ - x_lo_) * kW; }
  double py(double y) const { return kM + kH - (y - y_lo_) / (y_hi_ - y_lo_) * kH; }

  double x_lo_, x_hi_, y_lo_, y_hi_;
  std::string title_;
  std::ostringstream body_;
  int legends_ = 0;
};

// Plot failures are reported but never change the exit code.
void try_plot(std::ostream& log, const std::string& path, const std::function<void()>& draw) {
  if (path.empty()) return;
  try {
    draw();
  } catch (const std::exception& e) {
    log << "warning: plot " << path << " skipped: " << e.what() << "\n";
  }
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

void write_zero_csv(std::ostream& os, const std::vector<Zero>& zeros) {
  os << "re,im,multiplicity,residual\n";
  for (const Zero& z : zeros) {
    os << fmt(z.location.real()) << "," << fmt(z.location.imag()) << "," << z.multiplicity << ","
       << fmt(z.residual) << "\n";
  }
}

}  // namespace

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

cplx parse_complex(std::string_view text) {
  static const std::regex full(
      R"(\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*([ij]))?\s*)");
  static const std::regex imag_only(
      R"(\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*([ij])\s*)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, imag_only)) {
    const double mag = m[2].matched ? to_double(m[2].str(), text) : 1.0;
    return {0.0, m[1].str() == "-" ? -mag : mag};
  }
  if (std::regex_match(s, m, full) && m[1].matched) {
    const double re = to_double(m[1].str(), text);
    double im = 0.0;
    if (m[4].matched) {
      im = m[3].matched ? to_double(m[3].str(), text) : 1.0;
      if (m[2].str() == "-") im = -im;
    }
    return {re, im};
  }
  throw DomainError("cannot parse complex number \"" + s + "\" (expected a+bi)");
}

Region parse_rect(std::string_view text) {
  const auto v = split_numbers(text, 4, "rect");
  if (!(v[0] < v[1]) || !(v[2] < v[3])) throw DomainError("rect: need re_lo < re_hi and im_lo < im_hi");
  return Region::rect(v[0], v[1], v[2], v[3]);
}

Region parse_disk(std::string_view text) {
  const auto v = split_numbers(text, 3, "disk");
  if (!(v[2] > 0.0)) throw DomainError("disk: radius must be positive");
  return Region::disk({v[0], v[1]}, v[2]);
}

bool meets_positive_axis(const Region& r) {
  if (r.kind == Region::Kind::disk) return dist_to_positive_axis(r.center) <= r.radius;
  return r.re_hi >= 0.0 && r.im_lo <= 0.0 && r.im_hi >= 0.0;
}

SeparationSequence parse_separation(std::string_view text) {
  const std::string s(text);
  if (s == "k") return SeparationSequence::rule([](std::uint64_t k) { return double(k); });
  if (s == "2^k") {
    return SeparationSequence::rule([](std::uint64_t k) { return std::ldexp(1.0, int(std::min<std::uint64_t>(k, 2000))); });
  }
  if (s == "log k" || s == "log(k)") {
    return SeparationSequence::rule([](std::uint64_t k) { return std::log(double(k)); });
  }
  if (s.rfind("k^", 0) == 0) {
    const double a = to_double(s.substr(2), text);
    if (!(a > 0.0)) throw DomainError("separation: exponent must be positive");
    return SeparationSequence::rule([a](std::uint64_t k) { return std::pow(double(k), a); });
  }
  if (s.rfind("list:", 0) == 0) {
    std::vector<double> v;
    std::string item;
    std::stringstream ss(s.substr(5));
    while (std::getline(ss, item, ',')) v.push_back(to_double(item, text));
    return SeparationSequence::finite(std::move(v));
  }
  throw DomainError("separation: unknown rule \"" + s + "\" (k, 2^k, log k, k^a, list:...)");
}

int run_bump(const BumpArgs& args, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const cplx zeta = parse_complex(args.zeta);
    if (!(zeta.imag() > 0.0)) throw DomainError("bump: Im zeta > 0 required");
    if (!in_sector(zeta, args.eps0)) {
      throw DomainError("bump: zeta must satisfy Im zeta <= eps0 Re zeta (eps0 = " +
                        short_num(args.eps0) + ")");
    }
    BumpOptions opts;
    opts.sigma = args.sigma;
    opts.eps0 = args.eps0;
    opts.q_list = args.q_list;
    BumpReport r;
    try {
      r = construct_bump(zeta, opts);
    } catch (const Error& e) {
      log << "error: bump construction failed: " << e.what() << "\n";
      return int(kNumeric);
    }

    json doc;
    doc["zeta"] = cjson(zeta);
    doc["sigma"] = args.sigma;
    doc["parity"] = to_string(r.parity);
    doc["R"] = r.bump.R;
    doc["V0"] = cjson(r.bump.v0);
    doc["x0"] = r.bump.x0;
    doc["kappa"] = cjson(r.kappa);
    doc["achieved_eigenvalue"] = cjson(r.achieved_eigenvalue);
    doc["residual"] = r.residual;
    doc["newton_iterations"] = r.newton_iterations;
    doc["reseeded"] = r.reseeded;
    doc["decay_rate"] = sqrt_upper(zeta).imag();
    json norms = json::object();
    for (const auto& [q, v] : r.lq_norms) norms[std::isinf(q) ? "inf" : short_num(q)] = v;
    doc["lq_norms"] = norms;
    doc["davies_nath"] = r.davies_nath;
    Sink sink(args.report_path, out);
    *sink << doc.dump(2) << "\n";

    if (!args.potential_path.empty()) {
      save_potential(PiecewisePotential::from_bump(r.bump), args.potential_path);
    }
    try_plot(log, args.svg_path, [&] {
      const double R = r.bump.R;
      const double rate = sqrt_upper(zeta).imag();
      const double edge = std::abs(eigenfunction(r.bump, zeta, r.parity, R));
      std::vector<double> xs, ys, env_x, env_y;
      double top = 0.0;
      for (int i = 0; i <= 600; ++i) {
        const double x = -3.0 * R + 6.0 * R * i / 600.0;
        xs.push_back(x);
        ys.push_back(std::abs(eigenfunction(r.bump, zeta, r.parity, x)));
        top = std::max(top, ys.back());
        if (std::abs(x) >= R) {
          env_x.push_back(x);
          env_y.push_back(edge * std::exp(-rate * (std::abs(x) - R)));
        }
      }
      Svg svg(-3.0 * R, 3.0 * R, 0.0, 1.05 * top, "|psi(x)|, zeta = " + args.zeta);
      svg.rect(-R, R, 0.0, 1.05 * top, "gray");
      svg.polyline(xs, ys, "black");
      const auto mid = std::find_if(env_x.begin(), env_x.end(), [](double x) { return x > 0; });
      const std::size_t k = static_cast<std::size_t>(mid - env_x.begin());
      svg.polyline({env_x.begin(), env_x.begin() + k}, {env_y.begin(), env_y.begin() + k}, "red");
      svg.polyline({env_x.begin() + k, env_x.end()}, {env_y.begin() + k, env_y.end()}, "red");
      svg.legend("|psi|", "black");
      svg.legend("exp(-Im sqrt(zeta) (|x| - R))", "red");
      svg.save(args.svg_path);
    });
    return int(kOk);
  });
}

int run_spectrum(const SpectrumArgs& args, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    if (meets_positive_axis(args.region)) {
      throw DomainError("spectrum: the region must stay clear of [0, inf)");
    }
    const PiecewisePotential pot = load_potential(args.potential_path);
    LocateParams lp;
    lp.workers = resolve_workers(args.workers);
    lp.min_diameter = args.min_diameter;
    const ZeroReport rep =
        locate_zeros([&pot](cplx E) { return global_secular(pot, E); }, args.region, lp);
    Sink sink(args.csv_path, out);
    write_zero_csv(*sink, rep.zeros);
    log << "# winding_total=" << rep.winding_total << " zeros=" << rep.zeros.size()
        << (rep.complete ? "" : " (incomplete: some multiplicities unresolved)") << "\n";
    try_plot(log, args.svg_path, [&] {
      const Region b = args.region.bounding_rect();
      const double px = 0.05 * (b.re_hi - b.re_lo), py = 0.05 * (b.im_hi - b.im_lo);
      Svg svg(b.re_lo - px, b.re_hi + px, b.im_lo - py, b.im_hi + py, "eigenvalues");
      if (args.region.kind == Region::Kind::disk) {
        svg.circle(args.region.center.real(), args.region.center.imag(), args.region.radius, "gray");
      } else {
        svg.rect(b.re_lo, b.re_hi, b.im_lo, b.im_hi, "gray");
      }
      for (const Zero& z : rep.zeros) svg.point(z.location.real(), z.location.imag(), "black");
      svg.save(args.svg_path);
    });
    return int(kOk);
  });
}

int run_imag_step(const ImagStepArgs& args, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    if (args.N.empty()) throw DomainError("imag-step: at least one N required");
    for (int N : args.N) {
      if (N < 8) throw DomainError("imag-step: N >= 8 required, got " + std::to_string(N));
    }
    if (!(args.C_box > 1.0)) throw DomainError("imag-step: C_box > 1 required");
    const int workers = resolve_workers(args.workers);
    Sink sink(args.csv_path, out);
    *sink << census_csv_header() << "\n";
    for (int N : args.N) {
      const CensusRow row = census_imag_step(N, args.C_box, workers);
      *sink << census_csv_row(row) << "\n";

      // Sheet flags for the scatter, and the per-branch failure log.
      const long nmax = census_branch_bound(N, args.C_box);
      std::vector<ImagStepBranch> all;
      long failed = 0;
      for (const LambertFamily& fam : all_families()) {
        for (ImagStepBranch& b : enumerate_imag_step(N, -nmax, nmax, fam, workers)) {
          if (!b.converged) {
            ++failed;
          } else {
            all.push_back(b);
          }
        }
      }
      if (failed > 0) log << "N=" << N << ": " << failed << " branches did not converge\n";
      const std::string path = args.N.size() > 1 && !args.svg_path.empty()
                                   ? with_suffix(args.svg_path, "_N" + std::to_string(N))
                                   : args.svg_path;
      try_plot(log, path, [&] {
        const Region& b = row.box;
        Svg svg(0.0, 1.2 * b.re_hi, -1.2 * b.im_hi, 1.2 * b.im_hi,
                "imaginary step N = " + std::to_string(N) + ", count = " + std::to_string(row.count));
        svg.rect(b.re_lo, b.re_hi, b.im_lo, b.im_hi, "blue");
        for (const ImagStepBranch& br : all) {
          svg.point(br.E.real(), br.E.imag(), br.on_physical_sheet ? "green" : "gray");
        }
        svg.legend("physical sheet", "green");
        svg.legend("unphysical sheet", "gray");
        svg.save(path);
      });
    }
    return int(kOk);
  });
}

int run_sparse(const SparseArgs& args, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const TargetSequence t = TargetSequence::from_json(read_file(args.targets_path));
    EnvelopeParams P;
    P.C_L = args.C_L;
    P.rule_constant = args.rule_constant;
    P.eps0 = args.eps0;
    t.validate(P.eps0);
    ChooseOptions co;
    co.mode = args.faithful ? BuildMode::faithful : BuildMode::desk;
    co.delta = args.delta;
    co.sigma = args.sigma;
    SparseBuild b;
    try {
      b = build_sparse(t, P, co, args.verify, resolve_workers(args.workers));
    } catch (const TargetError& e) {
      log << "error: " << e.what() << "\n";
      return int(kNumeric);
    }
    Sink sink(args.report_path, out);
    *sink << build_report_json(b);
    for (const std::string& w : b.warnings) log << "warning: " << w << "\n";
    if (!b.assembled) return int(kOk);

    if (!args.potential_path.empty()) save_potential(b.assembly.potential, args.potential_path);
    for (std::size_t i = 0; i < b.disks.size(); ++i) {
      const DiskCheck& c = b.disks[i];
      log << "n=" << i + 1 << " zeta=" << short_num(c.zeta.real()) << "+" << short_num(c.zeta.imag())
          << "i " << (c.found ? "found" : "NOT found") << " winding=" << c.winding
          << (c.error.empty() ? "" : " (" + c.error + ")") << "\n";
    }
    try_plot(log, args.svg_path, [&] {
      const PiecewisePotential& pot = b.assembly.potential;
      double top = 0.0;
      for (const Piece& pc : pot.pieces()) top = std::max(top, std::abs(pc.value.imag()));
      const double lo = pot.left(), hi = pot.right(), pad = 0.05 * (hi - lo);
      Svg svg(lo - pad, hi + pad, -0.1 * top, 1.1 * top, "Im V(x)");
      std::vector<double> xs{lo - pad}, ys{0.0};
      for (const Piece& pc : pot.pieces()) {
        for (double x : {pc.a, pc.a, pc.b, pc.b}) xs.push_back(x);
        for (double y : {0.0, pc.value.imag(), pc.value.imag(), 0.0}) ys.push_back(y);
      }
      xs.push_back(hi + pad);
      ys.push_back(0.0);
      svg.polyline(xs, ys, "black");
      svg.save(args.svg_path);
    });
    return int(kOk);
  });
}

int run_envelopes(const EnvelopesArgs& args, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const cplx z = parse_complex(args.z);
    if (z.imag() == 0.0 && z.real() >= 0.0) throw DomainError("envelopes: z must lie off [0, inf)");
    const SeparationSequence L = parse_separation(args.L);
    EnvelopeParams P;
    P.d = args.d;
    P.q = args.q;
    P.p = args.p;
    P.alpha = args.alpha;
    P.gamma = args.gamma;
    // Divergent sums and overflowing counts print as inf.
    auto or_inf = [](const std::function<double()>& f) {
      try {
        return f();
      } catch (const DomainError&) {
        return HUGE_VAL;
      }
    };
    const double s = or_inf([&] { return s_of_L_z(L, z, P.d); });
    const double h = or_inf([&] { return double(h_L(L, args.s)); });
    Sink sink(args.csv_path, out);
    *sink << "z_re,z_im,omega_q,s_L_z,M_pq,M_pq_L,sep,h_L\n"
          << fmt(z.real()) << "," << fmt(z.imag()) << "," << fmt(omega_q(z, P.d, P.q)) << ","
          << fmt(s) << "," << fmt(M_pq(z, P, args.vnorm)) << ","
          << fmt(or_inf([&] { return M_pq_L(z, L, P, args.vnorm); })) << ","
          << fmt(or_inf([&] { return sep(L, args.eta); })) << "," << fmt(h) << "\n";
    (void)log;
    return int(kOk);
  });
}

int run_check(const CheckArgs& args, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const PiecewisePotential pot = load_potential(args.potential_path);
    std::vector<cplx> eigs;
    {
      std::stringstream ss(read_file(args.eigs_csv));
      std::string line;
      long lineno = 0;
      while (std::getline(ss, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || line.rfind("re,", 0) == 0) continue;
        std::stringstream ls(line);
        std::string re, im;
        if (!std::getline(ls, re, ',') || !std::getline(ls, im, ',')) {
          throw SchemaError("check: line " + std::to_string(lineno) + " needs re,im", lineno);
        }
        eigs.emplace_back(to_double(re, line), to_double(im, line));
      }
    }
    LocateParams lp;
    lp.workers = resolve_workers(args.workers);
    const AnalyticFn f = [&pot](cplx E) { return global_secular(pot, E); };
    const auto mags = magnitude_check(eigs, pot, args.q, args.d);
    out << "re,im,reproduced,winding,shift,magnitude_ratio\n";
    bool all = true;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      const ZeroReport rep = locate_zeros(f, Region::disk(eigs[i], args.radius), lp);
      double shift = HUGE_VAL;
      for (const Zero& z : rep.zeros) shift = std::min(shift, std::abs(z.location - eigs[i]));
      const bool ok = rep.winding_total >= 1 && shift <= args.radius;
      all = all && ok;
      out << fmt(eigs[i].real()) << "," << fmt(eigs[i].imag()) << "," << (ok ? 1 : 0) << ","
            << rep.winding_total << "," << fmt(shift) << "," << fmt(mags[i].ratio) << "\n";
    }
    log << "# " << eigs.size() << " rows, " << (all ? "all reproduced" : "some NOT reproduced")
        << "\n";
    return int(all ? kOk : kNumeric);
  });
}

}  // namespace sparsepot::cli
