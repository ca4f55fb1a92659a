#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bst/billiard.hpp"
#include "bst/bouncing_ball.hpp"
#include "bst/boundary.hpp"
#include "bst/hessian.hpp"
#include "bst/invariants.hpp"
#include "bst/reconstruction.hpp"

namespace bst {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

Json read_json_file(const std::filesystem::path& path);
/// Throws InvalidInput if any number in `doc` is NaN or infinite.
void require_finite(const Json& doc, const std::string& where = "$");
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string dump_json(const Json& doc);

/// {label, radial_coeffs: [[freq, cos, sin], ...], rotation}
BoundarySpec spec_from_json(const Json& doc);
Json spec_to_json(const BoundarySpec& spec);
/// FNV-1a of the canonical JSON form, as 16 hex digits.
std::string domain_hash(const BoundarySpec& spec);

/// {C_tilde: {j: v}, C: {...}, C_hat: {...}, A: {r: v}, remainder_weight: w}
InvariantConstants constants_from_json(const Json& doc);

/// {L, kind, alpha, signatures: {r: s}, b_prime: [{r, j, value}, ...]}
SpectralData spectral_from_json(const Json& doc);
Json spectral_to_json(const SpectralData& data);

Json to_json(const GraphJet& jet);
Json to_json(const StabilityData& s);
Json to_json(const BouncingBallData& bb);
Json to_json(const PeriodicOrbit& orbit);
Json to_json(const Condition4Report& report);
Json to_json(const DomainConditionReport& report);
Json to_json(const MaslovData& m);
Json to_json(const HessianData& h);
Json to_json(const PrefactorData& p);
Json to_json(const InvariantData& d);
Json to_json(const DecouplingSystem& s);
Json to_json(const ReconstructionResult& r);
Json to_json(const Eigen::MatrixXd& m);

/// One row per orbit class: length, multiplicity, p, q, degenerate_flag.
std::string spectrum_csv(const LengthSpectrum& spectrum);

}  // namespace bst
