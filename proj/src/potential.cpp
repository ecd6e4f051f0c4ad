#include "sparsepot/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sparsepot/errors.hpp"

namespace sparsepot {

using nlohmann::json;

PiecewisePotential::PiecewisePotential(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    const long idx = static_cast<long>(i);
    if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
      throw SchemaError("piece " + std::to_string(i) + ": non-finite endpoint", idx);
    }
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag())) {
      throw SchemaError("piece " + std::to_string(i) + ": non-finite value", idx);
    }
    if (!(p.a < p.b)) {
      throw SchemaError("piece " + std::to_string(i) + ": requires a < b", idx);
    }
    if (i > 0 && p.a < pieces_[i - 1].b) {
      throw SchemaError("piece " + std::to_string(i) + ": overlaps or precedes piece " +
                            std::to_string(i - 1),
                        idx);
    }
  }
}

PiecewisePotential PiecewisePotential::from_bump(const StepBump& bump) {
  return PiecewisePotential({{bump.x0 - bump.R, bump.x0 + bump.R, bump.v0}});
}

PiecewisePotential PiecewisePotential::from_bumps(const std::vector<StepBump>& bumps) {
  std::vector<Piece> pieces;
  pieces.reserve(bumps.size());
  for (const StepBump& b : bumps) pieces.push_back({b.x0 - b.R, b.x0 + b.R, b.v0});
  return PiecewisePotential(std::move(pieces));
}

PiecewisePotential PiecewisePotential::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("potential: invalid JSON: ") + e.what(), -1);
  }
  if (!doc.is_object() || !doc.contains("pieces") || !doc["pieces"].is_array()) {
    throw SchemaError("potential: expected an object with a \"pieces\" array", -1);
  }
  std::vector<Piece> pieces;
  const json& arr = doc["pieces"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& e = arr[i];
    const long idx = static_cast<long>(i);
    for (const char* key : {"a", "b", "re", "im"}) {
      if (!e.is_object() || !e.contains(key) || !e[key].is_number()) {
        throw SchemaError("piece " + std::to_string(i) + ": missing numeric field \"" + key +
                              "\"",
                          idx);
      }
    }
    pieces.push_back({e["a"].get<double>(), e["b"].get<double>(),
                      cplx(e["re"].get<double>(), e["im"].get<double>())});
  }
  return PiecewisePotential(std::move(pieces));
}

std::string PiecewisePotential::to_json() const {
  json arr = json::array();
  for (const Piece& p : pieces_) {
    arr.push_back({{"a", p.a}, {"b", p.b}, {"re", p.value.real()}, {"im", p.value.imag()}});
  }
  return json{{"pieces", arr}}.dump(2) + "\n";
}

double PiecewisePotential::left() const {
  if (pieces_.empty()) throw DomainError("potential: empty");
  return pieces_.front().a;
}

double PiecewisePotential::right() const {
  if (pieces_.empty()) throw DomainError("potential: empty");
  return pieces_.back().b;
}

cplx PiecewisePotential::operator()(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < p.a; });
  if (it == pieces_.begin()) return 0.0;
  --it;
  return (x <= it->b) ? it->value : cplx(0.0);
}

PiecewisePotential PiecewisePotential::prefix(std::size_t n) const {
  n = std::min(n, pieces_.size());
  return PiecewisePotential(std::vector<Piece>(pieces_.begin(), pieces_.begin() + n));
}

PiecewisePotential PiecewisePotential::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("potential: scale factor must be positive");
  std::vector<Piece> out;
  out.reserve(pieces_.size());
  for (const Piece& p : pieces_) out.push_back({p.a / lambda, p.b / lambda, lambda * lambda * p.value});
  return PiecewisePotential(std::move(out));
}

double PiecewisePotential::norm_lq(double q) const {
  if (!(q >= 1.0)) throw DomainError("norm_lq: q >= 1 required");
  double acc = 0.0;
  for (const Piece& p : pieces_) {
    const double v = std::abs(p.value);
    if (std::isinf(q)) {
      acc = std::max(acc, v);
    } else {
      acc += std::pow(v, q) * (p.b - p.a);
    }
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

PiecewisePotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("potential: cannot open " + path, -1);
  std::stringstream ss;
  ss << in.rdbuf();
  return PiecewisePotential::from_json(ss.str());
}

void save_potential(const PiecewisePotential& pot, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("potential: cannot write " + path);
  out << pot.to_json();
}

}  // namespace sparsepot
