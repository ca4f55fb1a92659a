#include "bst/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bst/error.hpp"

namespace bst {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vector_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

std::map<int, double> int_keyed(const Json& doc, const char* key) {
  std::map<int, double> out;
  if (!doc.contains(key)) return out;
  for (const auto& [k, v] : doc.at(key).items()) {
    const double value = v.get<double>();
    if (!std::isfinite(value) || value == 0.0)
      throw Error(ErrorCode::InvalidInput, std::string(key) + "[" + k + "] must be finite and nonzero");
    out[std::stoi(k)] = value;
  }
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
  }
}

void require_finite(const Json& doc, const std::string& where) {
  if (doc.is_number_float() && !std::isfinite(doc.get<double>()))
    throw Error(ErrorCode::InvalidInput, "non-finite number at " + where);
  if (doc.is_object())
    for (const auto& [k, v] : doc.items()) require_finite(v, where + "." + k);
  if (doc.is_array())
    for (std::size_t i = 0; i < doc.size(); ++i) require_finite(doc[i], where + "[" + std::to_string(i) + "]");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
  out << text;
}

std::string dump_json(const Json& doc) {
  require_finite(doc);
  return doc.dump(2) + "\n";
}

BoundarySpec spec_from_json(const Json& doc) {
  try {
    BoundarySpec spec;
    spec.label = doc.value("label", std::string{});
    spec.rotation = doc.value("rotation", 0.0);
    for (const auto& row : doc.at("radial_coeffs")) {
      if (!row.is_array() || row.size() < 2 || row.size() > 3)
        throw Error(ErrorCode::InvalidInput, "radial_coeffs rows are [freq, cos, sin]");
      const double freq = row[0].get<double>();
      if (freq != std::floor(freq)) throw Error(ErrorCode::InvalidInput, "frequencies must be integers");
      spec.radial_coeffs.push_back({static_cast<int>(freq), row[1].get<double>(), row.size() > 2 ? row[2].get<double>() : 0.0});
    }
    return spec;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("domain spec: ") + e.what());
  }
}

Json spec_to_json(const BoundarySpec& spec) {
  Json coeffs = Json::array();
  for (const auto& m : spec.radial_coeffs) coeffs.push_back({m.freq, m.cos_coeff, m.sin_coeff});
  return {{"label", spec.label}, {"radial_coeffs", coeffs}, {"rotation", spec.rotation}};
}

std::string domain_hash(const BoundarySpec& spec) {
  const std::string text = spec_to_json(spec).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

InvariantConstants constants_from_json(const Json& doc) {
  try {
    InvariantConstants c;
    c.C_tilde = int_keyed(doc, "C_tilde");
    c.C = int_keyed(doc, "C");
    c.C_hat = int_keyed(doc, "C_hat");
    c.A = int_keyed(doc, "A");
    const double w = doc.value("remainder_weight", 0.0);
    if (!std::isfinite(w)) throw Error(ErrorCode::InvalidInput, "remainder_weight must be finite");
    if (w != 0.0) c.remainder = quadratic_remainder(w);
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("constants: ") + e.what());
  }
}

SpectralData spectral_from_json(const Json& doc) {
  try {
    SpectralData d;
    d.L = doc.at("L").get<double>();
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "elliptic") d.kind = StabilityKind::Elliptic;
    else if (kind == "hyperbolic") d.kind = StabilityKind::Hyperbolic;
    else throw Error(ErrorCode::InvalidInput, "kind must be elliptic or hyperbolic");
    d.alpha = doc.at("alpha").get<double>();
    for (const auto& [k, v] : doc.at("signatures").items()) d.signatures[std::stoi(k)] = v.get<int>();
    for (const auto& e : doc.at("b_prime")) d.b_prime[{e.at("r").get<int>(), e.at("j").get<int>()}] = e.at("value").get<double>();
    if (!(d.L > 0.0) || !std::isfinite(d.alpha)) throw Error(ErrorCode::InvalidInput, "L must be positive, alpha finite");
    return d;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("spectral data: ") + e.what());
  }
}

Json spectral_to_json(const SpectralData& d) {
  Json sig = Json::object();
  for (const auto& [r, s] : d.signatures) sig[std::to_string(r)] = s;
  Json b = Json::array();
  for (const auto& [key, v] : d.b_prime) b.push_back({{"r", key.first}, {"j", key.second}, {"value", number_or_null(v)}});
  return {{"L", d.L}, {"kind", std::string(to_string(d.kind))}, {"alpha", d.alpha}, {"signatures", sig}, {"b_prime", b}};
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number_or_null(m(i, j)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const GraphJet& jet) {
  return {{"side", jet.side == Side::Plus ? "plus" : "minus"}, {"derivatives", vector_json(jet.derivatives)}};
}

Json to_json(const StabilityData& s) {
  Json det = Json::array();
  for (int r = 1; r <= 4; ++r) det.push_back(number_or_null(s.det_I_minus_P(r)));
  return {{"kind", std::string(to_string(s.kind))},
          {"trace", s.trace},
          {"det", s.det},
          {"alpha", s.alpha},
          {"a", s.a},
          {"L", s.L},
          {"jet_trace", s.jet_trace},
          {"matrix", to_json(Eigen::MatrixXd(s.matrix))},
          {"det_I_minus_P", det}};
}

Json to_json(const BouncingBallData& bb) {
  Json out = {{"L", bb.L},
              {"length", 2.0 * bb.L},
              {"theta", bb.theta},
              {"frame_rotation", bb.frame_rotation},
              {"vertex_a", {bb.vertex_a.x(), bb.vertex_a.y()}},
              {"vertex_b", {bb.vertex_b.x(), bb.vertex_b.y()}},
              {"orthogonality", bb.orthogonality},
              {"degenerate_family", bb.degenerate_family},
              {"jet_plus", to_json(bb.plus)},
              {"jet_minus", to_json(bb.minus)}};
  out["stability"] = bb.stability ? to_json(*bb.stability) : Json(nullptr);
  return out;
}

Json to_json(const PeriodicOrbit& o) {
  return {{"class", o.orbit_class},
          {"p", o.p},
          {"q", o.q},
          {"length", o.length},
          {"s", vector_json(o.config.s)},
          {"angles", vector_json(o.angles)},
          {"gradient_norm", o.gradient_norm},
          {"hessian_det", number_or_null(o.hessian_det)},
          {"hessian_rank_ratio", number_or_null(o.hessian_rank_ratio)},
          {"nondegenerate", o.nondegenerate},
          {"degenerate_family", o.degenerate_family}};
}

Json to_json(const Condition4Report& r) {
  Json collisions = Json::array();
  for (const auto& o : r.collisions) collisions.push_back(to_json(o));
  std::size_t literal_failures = 0;
  std::size_t symmetric_failures = 0;
  for (const auto& l : r.lazutkin) {
    literal_failures += !l.holds;
    symmetric_failures += !l.symmetric_holds;
  }
  return {{"half_length", r.half_length},
          {"perimeter", r.perimeter},
          {"q_max", r.q_max},
          {"multiplicity_2L", r.multiplicity_2L},
          {"multiplicity_4L", r.multiplicity_4L},
          {"perimeter_distinct", r.perimeter_distinct},
          {"passed", r.passed},
          {"violations", r.violations},
          {"collisions", collisions},
          {"heuristic_bounce_bound", number_or_null(r.heuristic_bounce_bound)},
          {"lazutkin_links", r.lazutkin.size()},
          {"lazutkin_failures", literal_failures},
          {"lazutkin_symmetric_failures", symmetric_failures},
          {"lazutkin_holds", r.lazutkin_holds},
          {"spectrum_warnings", r.spectrum.warnings}};
}

Json to_json(const DomainConditionReport& r) {
  Json conditions = Json::array();
  for (const auto& c : r.conditions)
    conditions.push_back({{"name", c.name},
                          {"evaluated", c.evaluated},
                          {"passed", c.passed},
                          {"margin", number_or_null(c.margin)},
                          {"detail", c.detail}});
  Json out = {{"orbit", to_json(r.orbit)}, {"conditions", conditions}, {"passed", r.passed}};
  out["condition4"] = r.condition4 ? to_json(*r.condition4) : Json(nullptr);
  return out;
}

Json to_json(const MaslovData& m) {
  return {{"signature", m.signature},
          {"n_plus", m.n_plus},
          {"n_minus", m.n_minus},
          {"m", m.m},
          {"factor", {m.factor.real(), m.factor.imag()}},
          {"m_alt", m.m_alt},
          {"factor_alt", {m.factor_alt.real(), m.factor_alt.imag()}},
          {"conventions_disagree", m.conventions_disagree}};
}

Json to_json(const HessianData& h) {
  return {{"r", h.r},
          {"a", h.a},
          {"L", h.L},
          {"H", to_json(h.H)},
          {"h_inv", to_json(h.h_inv)},
          {"eigenvalues", vector_json(h.eigenvalues)},
          {"maslov", to_json(h.maslov)},
          {"G", number_or_null(h.G_value)}};
}

Json to_json(const PrefactorData& p) {
  return {{"boundary_condition", std::string(to_string(p.boundary_condition))},
          {"r", p.r},
          {"epsilon", p.epsilon},
          {"maslov_m", p.maslov_m},
          {"length", p.length},
          {"det_factor", p.det_factor},
          {"value", {p.value.real(), p.value.imag()}},
          {"modulus", std::abs(p.value)}};
}

Json to_json(const InvariantData& d) {
  return {{"r", d.r},
          {"j", d.j},
          {"b", number_or_null(d.b)},
          {"b_prime", number_or_null(d.b_prime)},
          {"b_prime_direct", number_or_null(d.b_prime_direct)},
          {"h11_squared", d.h11_squared},
          {"row_cubes", d.row_cubes},
          {"coeff_top", d.coeff_top},
          {"coeff_mixed", d.coeff_mixed},
          {"remainder", d.remainder_normalized}};
}

Json to_json(const DecouplingSystem& s) {
  return {{"j", s.j},
          {"matrix", to_json(Eigen::MatrixXd(s.matrix))},
          {"determinant", s.determinant},
          {"relative_determinant", s.relative_determinant},
          {"condition_number", number_or_null(s.condition_number)}};
}

Json to_json(const ReconstructionResult& r) {
  return {{"jets", vector_json(r.jets)},
          {"branch", std::string(to_string(r.branch))},
          {"a", r.a},
          {"sign_convention", r.sign_convention ? "f'''(0) > 0" : "none"},
          {"worst_condition", number_or_null(r.worst_condition)}};
}

std::string spectrum_csv(const LengthSpectrum& spectrum) {
  std::ostringstream out;
  out << "length,multiplicity,p,q,degenerate_flag\n";
  char buf[64];
  for (const auto& e : spectrum.entries) {
    for (const auto& o : e.orbits) {
      std::snprintf(buf, sizeof buf, "%.15g", o.length);
      out << buf << "," << e.multiplicity << "," << o.p << "," << o.q << "," << (o.degenerate_family ? 1 : 0) << "\n";
    }
  }
  return out.str();
}

}  // namespace bst
