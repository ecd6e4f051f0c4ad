#include "sparsepot/sparse_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "sparsepot/errors.hpp"
#include "sparsepot/schrodinger_1d.hpp"

namespace sparsepot {

using nlohmann::json;

void TargetSequence::validate(double eps0) const {
  if (d < 1) throw DomainError("targets: d >= 1 required");
  if (!(q > d)) throw DomainError("targets: q > d required");
  if (!(gamma > 0.0)) throw DomainError("targets: gamma > 0 required");
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    const cplx z = zetas[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError("targets: zeta[" + std::to_string(i) + "] is not finite");
    }
    if (!in_sector(z, eps0)) {
      throw DomainError("targets: zeta[" + std::to_string(i) +
                        "] must satisfy 0 < Im z <= eps0 Re z");
    }
    if (i > 0 && z.imag() > zetas[i - 1].imag()) {
      throw DomainError("targets: Im zeta must be nonincreasing (index " + std::to_string(i) + ")");
    }
  }
}

TargetSequence TargetSequence::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("targets: invalid JSON: ") + e.what(), -1);
  }
  if (!doc.is_object() || !doc.contains("zetas") || !doc["zetas"].is_array()) {
    throw SchemaError("targets: expected an object with a \"zetas\" array", -1);
  }
  TargetSequence t;
  const json& arr = doc["zetas"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw SchemaError("targets: zetas[" + std::to_string(i) + "] must be [re, im]",
                        static_cast<long>(i));
    }
    t.zetas.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  auto number = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw SchemaError(std::string("targets: \"") + key + "\" must be a number", -1);
    out = doc[key].get<double>();
  };
  number("q", t.q);
  number("gamma", t.gamma);
  double d = t.d;
  number("d", d);
  t.d = static_cast<int>(d);
  return t;
}

namespace {

double condition_term(cplx z, int d, double q) {
  const double r = std::abs(z);
  const double im = std::abs(z.imag());
  return std::pow(r, 0.5 * d) * std::pow(im, q - d) * std::pow(std::abs(std::log(im / r)), d);
}

}  // namespace

double sequence_condition_value(const TargetSequence& t) {
  double acc = 0.0;
  for (const cplx& z : t.zetas) acc += condition_term(z, t.d, t.q);
  return std::pow(acc, 1.0 / t.q);
}

double sequence_condition_value(const std::function<cplx(long)>& zeta, int d, double q,
                                long max_terms) {
  double acc = 0.0;
  double prev = 0.0;
  for (long n = 1; n <= max_terms; ++n) {
    const double term = condition_term(zeta(n), d, q);
    if (!std::isfinite(term)) {
      throw DomainError("sequence_condition_value: non-finite term at n = " + std::to_string(n));
    }
    acc += term;
    if (term == 0.0) return std::pow(acc, 1.0 / q);
    if (n > 1 && prev > 0.0) {
      const double r = term / prev;
      if (r < 1.0 && term * r / (1.0 - r) <= 1e-15 * acc) return std::pow(acc, 1.0 / q);
    }
    prev = term;
  }
  throw DomainError("sequence_condition_value: sum not certified; partial sum after " +
                    std::to_string(max_terms) + " terms is " + std::to_string(acc));
}

GapChoice choose_L(const TargetSequence& t, const EnvelopeParams& base, const ChooseOptions& opts) {
  EnvelopeParams P = base;
  P.d = t.d;
  P.q = t.q;
  P.gamma = t.gamma;
  t.validate(P.eps0);

  GapChoice out;
  const std::size_t n = t.zetas.size();
  if (n == 0) {
    out.L = SeparationSequence::finite({});
    return out;
  }
  const bool desk = opts.mode == BuildMode::desk;
  out.kappa_tilde = desk ? 1.0 : kappa_tilde(P);

  BumpOptions bo;
  bo.sigma = opts.sigma;
  bo.eps0 = P.eps0;
  double sup_v = 0.0;
  double sup_vq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out.bumps.push_back(construct_bump(t.zetas[i], bo));
    } catch (const Error& e) {
      throw TargetError("target " + std::to_string(i) + ": " + e.what(), static_cast<long>(i));
    }
    sup_v = std::max(sup_v, std::abs(out.bumps.back().bump.v0));
    sup_vq = std::max(sup_vq, bump_norm_lq(out.bumps.back().bump, P.q));
  }

  // Power law.
  out.log_L.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.log_L[i] = std::log(P.C_L) - out.kappa_tilde * std::log(t.zetas[i].imag());
    if (!std::isfinite(out.log_L[i])) {
      throw DomainError("choose_L: log L overflows at index " + std::to_string(i));
    }
  }

  // Closeness eps_n and disk radii delta_n, in log space.
  std::vector<double> Lvals(n);
  for (std::size_t i = 0; i < n; ++i) Lvals[i] = std::exp(out.log_L[i]);
  std::sort(Lvals.begin(), Lvals.end());
  const SeparationSequence Lpow = SeparationSequence::finite(Lvals);
  out.log_eps_inv.resize(n);
  out.log_delta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z = t.zetas[i];
    if (desk) {
      out.log_delta[i] = std::log(opts.delta);
      out.log_eps_inv[i] = P.big_o * -out.log_delta[i];
    } else {
      const double faithful = -std::pow(z.imag(), -P.gamma);
      out.log_delta[i] = std::max(faithful, std::log(P.delta_floor));
      out.log_eps_inv[i] = P.big_o * M_pq_L(z, Lpow, P, sup_vq) * -out.log_delta[i];
    }
    if (!std::isfinite(out.log_eps_inv[i])) {
      throw DomainError("choose_L: log(1/eps) overflows at index " + std::to_string(i));
    }
  }

  // a_j^{-d/q~} with q~ = inf: |zeta_j|^{1/4} (L_j / Im sqrt(zeta_j))^{-(d-1)/4}.
  double sup_log_eps_a = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const cplx z = t.zetas[j];
    const double log_a = 0.25 * std::log(std::abs(z)) -
                         0.25 * (P.d - 1) * (out.log_L[j] - std::log(sqrt_upper(z).imag()));
    sup_log_eps_a = std::max(sup_log_eps_a, out.log_eps_inv[j] + log_a);
  }

  out.rule_lhs.resize(n);
  out.rule_rhs.resize(n);
  out.raised.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1);
    const double eta = sqrt_upper(t.zetas[i]).imag();
    const double inner = std::log(k) + 2.0 * std::log(std::log(japanese(k))) + sup_log_eps_a +
                         std::log(sup_v);
    const double rhs = P.rule_constant * inner;
    out.rule_rhs[i] = rhs;
    if (rhs > 0.0 && std::log(eta) + out.log_L[i] < std::log(rhs)) {
      out.log_L[i] = std::log(rhs) - std::log(eta);
      out.raised[i] = true;
    }
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (out.log_L[i] < out.log_L[i - 1]) {
      out.log_L[i] = out.log_L[i - 1];
      out.resorted = true;
    }
  }
  std::vector<double> L(n);
  for (std::size_t i = 0; i < n; ++i) {
    L[i] = std::exp(out.log_L[i]);
    out.rule_lhs[i] = sqrt_upper(t.zetas[i]).imag() * L[i];
  }
  out.L = SeparationSequence::finite(std::move(L));
  return out;
}

SparseAssembly assemble_sparse(const TargetSequence& t, const SeparationSequence& L, double sigma,
                               double kappa_tilde_for_decay) {
  const std::size_t n = t.zetas.size();
  if (n > 1 && L.size() + 1 < n) throw DomainError("assemble_sparse: need one gap per consecutive pair");
  SparseAssembly out;
  BumpOptions bo;
  bo.sigma = sigma;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out.bumps.push_back(construct_bump(t.zetas[i], bo));
    } catch (const Error& e) {
      throw TargetError("target " + std::to_string(i) + ": " + e.what(), static_cast<long>(i));
    }
  }
  std::vector<StepBump> placed;
  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    StepBump b = out.bumps[i].bump;
    if (i > 0) x += out.bumps[i - 1].bump.R + L.at(i) + b.R;
    b.x0 = x;
    out.bumps[i].bump.x0 = x;
    out.centers.push_back(x);
    placed.push_back(b);
  }
  out.potential = PiecewisePotential::from_bumps(placed);
  const auto& pieces = out.potential.pieces();
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) out.gaps.push_back(pieces[i + 1].a - pieces[i].b);
  for (std::size_t i = 0; i < n && i < L.size(); ++i) {
    out.sparsity.push_back(2.0 * placed[i].R / L.at(i + 1));
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.decay_ratio.push_back(std::abs(placed[i].v0) *
                              std::pow(japanese(out.centers[i]), 1.0 / kappa_tilde_for_decay));
  }
  out.norm_lq = out.potential.norm_lq(t.q);
  out.condition_value = sequence_condition_value(t);
  return out;
}

double lp_lq_norm(const PiecewisePotential& pot, double p, double q) {
  double acc = 0.0;
  for (const Piece& pc : pot.pieces()) {
    const double nq = PiecewisePotential({pc}).norm_lq(q);
    if (std::isinf(p)) {
      acc = std::max(acc, nq);
    } else {
      acc += std::pow(nq, p);
    }
  }
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

std::vector<DiskCheck> verify_disks(const PiecewisePotential& pot, const std::vector<cplx>& zetas,
                                    double delta, int workers) {
  std::vector<DiskCheck> out;
  const AnalyticFn f = [&pot](cplx E) { return global_secular(pot, E); };
  LocateParams lp;
  lp.workers = workers;
  for (const cplx& z : zetas) {
    DiskCheck c;
    c.zeta = z;
    c.delta = delta;
    try {
      const ZeroReport rep = locate_zeros(f, Region::disk(z, delta), lp);
      c.winding = rep.winding_total;
      c.zeros = rep.zeros;
      c.found = rep.winding_total >= 1;
    } catch (const Error& e) {
      c.error = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<MagnitudeEntry> magnitude_check(const std::vector<cplx>& eigs,
                                            const PiecewisePotential& pot, double q, int d,
                                            double ceiling) {
  if (!(q >= 1.0) || std::isinf(q)) throw DomainError("magnitude_check: finite q >= 1 required");
  double rhs = 0.0;
  for (const Piece& pc : pot.pieces()) rhs = std::max(rhs, std::pow(std::abs(pc.value), q) * (pc.b - pc.a));
  const double qd = 0.5 * (d + 1);
  std::vector<MagnitudeEntry> out;
  for (const cplx& z : eigs) {
    MagnitudeEntry e;
    e.z = z;
    e.rhs = rhs;
    const double small = std::pow(std::abs(z), q - 0.5 * d);
    e.large_q_form = q > qd;
    e.lhs = e.large_q_form
                ? std::sqrt(std::abs(z)) * std::pow(dist_to_positive_axis(z), q - 0.5 * (d + 1))
                : small;
    e.ratio = e.lhs / rhs;
    e.ratio_small_q = small / rhs;
    e.flagged = e.ratio > ceiling;
    out.push_back(e);
  }
  return out;
}

SparseBuild build_sparse(const TargetSequence& t, const EnvelopeParams& params,
                         const ChooseOptions& opts, bool verify, int workers) {
  SparseBuild b;
  b.targets = t;
  b.params = params;
  b.options = opts;
  b.gaps = choose_L(t, params, opts);
  if (b.gaps.resorted) b.warnings.push_back("L was lifted to stay nondecreasing");
  for (double eta : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}) {
    b.sep_table.emplace_back(eta, sep(b.gaps.L, eta));
  }
  if (opts.mode == BuildMode::faithful) {
    b.warnings.push_back("faithful mode: gaps reported in log space only, no potential assembled");
    return b;
  }
  b.assembly = assemble_sparse(t, b.gaps.L, opts.sigma, b.gaps.kappa_tilde);
  b.assembled = true;
  if (verify) b.disks = verify_disks(b.assembly.potential, t.zetas, opts.delta, workers);
  return b;
}

namespace {

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string build_report_json(const SparseBuild& b) {
  json doc;
  doc["mode"] = b.options.mode == BuildMode::desk ? "desk" : "faithful";
  doc["delta"] = b.options.delta;
  doc["q"] = b.targets.q;
  doc["d"] = b.targets.d;
  doc["gamma"] = b.targets.gamma;
  doc["kappa_tilde"] = b.gaps.kappa_tilde;
  json targets = json::array();
  for (const cplx& z : b.targets.zetas) targets.push_back(cjson(z));
  doc["targets"] = targets;

  json per = json::array();
  for (std::size_t i = 0; i < b.targets.zetas.size(); ++i) {
    json e;
    e["n"] = i + 1;
    e["zeta"] = cjson(b.targets.zetas[i]);
    e["log10_L"] = b.gaps.log_L[i] / std::log(10.0);
    e["log_eps_inv"] = b.gaps.log_eps_inv[i];
    e["log_delta"] = b.gaps.log_delta[i];
    e["rule_lhs"] = b.gaps.rule_lhs[i];
    e["rule_rhs"] = b.gaps.rule_rhs[i];
    e["raised"] = static_cast<bool>(b.gaps.raised[i]);
    const BumpReport& br = b.gaps.bumps[i];
    e["R"] = br.bump.R;
    e["V0"] = cjson(br.bump.v0);
    e["residual"] = br.residual;
    if (b.assembled) {
      e["x"] = b.assembly.centers[i];
      if (i < b.assembly.sparsity.size()) e["sparsity"] = b.assembly.sparsity[i];
      e["decay_ratio"] = b.assembly.decay_ratio[i];
    } else {
      e["x"] = nullptr;
    }
    if (i < b.disks.size()) {
      const DiskCheck& c = b.disks[i];
      e["found"] = c.found;
      e["winding"] = c.winding;
      json zs = json::array();
      for (const Zero& z : c.zeros) zs.push_back(cjson(z.location));
      e["zeros"] = zs;
      if (!c.error.empty()) e["error"] = c.error;
    }
    per.push_back(e);
  }
  doc["per_n"] = per;

  json norms;
  norms["condition_value"] = sequence_condition_value(b.targets);
  if (b.assembled) {
    norms["lq"] = b.assembly.norm_lq;
    if (b.assembly.condition_value > 0.0) {
      norms["lq_over_condition"] = b.assembly.norm_lq / b.assembly.condition_value;
    } else {
      norms["lq_over_condition"] = nullptr;
    }
  }
  doc["norms"] = norms;

  json st = json::array();
  for (const auto& [eta, s] : b.sep_table) st.push_back({{"eta", eta}, {"sep", s}});
  doc["sep_table"] = st;
  doc["warnings"] = b.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace sparsepot
