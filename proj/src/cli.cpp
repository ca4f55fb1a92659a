#include "bst/cli.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bst/error.hpp"
#include "bst/io.hpp"

namespace bst::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

constexpr const char* kSchemaHelp = R"(File formats:
  domain      {"label": str, "radial_coeffs": [[freq, cos, sin], ...], "rotation": num}
              frequencies must be even integers
  constants   {"C_tilde": {"j": v}, "C": {"j": v}, "C_hat": {"j": v}, "A": {"r": v},
               "remainder_weight": w}   missing entries default to 1 (weight 0)
  spectral    {"L": num, "kind": "elliptic"|"hyperbolic", "alpha": num,
               "signatures": {"1": s, "2": s}, "b_prime": [{"r": r, "j": j, "value": v}, ...]}
Exit codes: 0 success, 1 condition violated or numerical failure, 2 input error.
Env: BST_THREADS caps the orbit search workers.)";

struct Context {
  std::string command;
  Json args = Json::object();
  Json tolerances = Json::object();
  std::optional<std::string> domain_hash;
  std::uint64_t seed = 0;
  std::string out;
};

struct Outcome {
  std::string text;
  int code = kExitOk;
};

int input_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidInput:
    case ErrorCode::NotStarShaped:
    case ErrorCode::NotEmbedded:
    case ErrorCode::OddModePresent:
      return kExitInput;
    default:
      return kExitViolation;
  }
}

void emit(const Context& ctx, const std::string& text, double seconds) {
  if (ctx.out.empty()) {
    std::cout << text;
    return;
  }
  write_text_file(ctx.out, text);
  Json manifest = {{"command", ctx.command},
                   {"args", ctx.args},
                   {"seed", ctx.seed},
                   {"tolerances", ctx.tolerances},
                   {"tool_version", kToolVersion},
                   {"timing", {{"wall_seconds", seconds}}}};
  manifest["domain_hash"] = ctx.domain_hash ? Json(*ctx.domain_hash) : Json(nullptr);
  write_text_file(ctx.out + ".manifest.json", dump_json(manifest));
}

BoundaryGeometry load_domain(Context& ctx, const std::string& path) {
  const BoundarySpec spec = spec_from_json(read_json_file(path));
  ctx.domain_hash = domain_hash(spec);
  return validate_spec(spec);
}

InvariantConstants load_constants(const std::string& path) {
  return path.empty() ? InvariantConstants{} : constants_from_json(read_json_file(path));
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int q = std::stoi(text);
      return {q, q};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidInput, "range must look like 2..8, got '" + text + "'");
  }
}

OrbitSearchConfig search_config(int starts, std::uint64_t seed) {
  OrbitSearchConfig config;
  config.starts_per_winding = starts;
  config.seed = seed;
  return config;
}

std::optional<StabilityData> try_stability(const BoundaryGeometry& geom, const BouncingBallData& bb) {
  try {
    return poincare_map(geom, bb);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateOrbit) throw;
    return std::nullopt;
  }
}

std::vector<BouncingBallData> select_orbits(const BoundaryGeometry& geom, std::size_t order, int index) {
  BouncingBallOptions options;
  options.jet_order = order;
  auto all = detect_bouncing_balls(geom, options);
  if (index < 0) return all;
  if (index >= static_cast<int>(all.size()))
    throw Error(ErrorCode::InvalidInput, "orbit index " + std::to_string(index) + " out of range (" +
                                             std::to_string(all.size()) + " found)");
  return {all[index]};
}

// Subcommands

Outcome cmd_validate(Context& ctx, const std::string& domain) {
  const BoundaryGeometry geom = load_domain(ctx, domain);
  const Json doc = {{"label", geom.spec().label},
                    {"domain_hash", *ctx.domain_hash},
                    {"modes", geom.spec().radial_coeffs.size()},
                    {"perimeter", geom.perimeter()},
                    {"curvature_min", geom.curvature_min()},
                    {"curvature_max", geom.curvature_max()},
                    {"convex", geom.convex()}};
  return {dump_json(doc)};
}

Outcome cmd_bouncing_ball(Context& ctx, const std::string& domain, int order) {
  const BoundaryGeometry geom = load_domain(ctx, domain);
  Json orbits = Json::array();
  for (auto bb : select_orbits(geom, order, -1)) {
    bb.stability = try_stability(geom, bb);
    orbits.push_back(to_json(bb));
  }
  return {dump_json({{"domain_hash", *ctx.domain_hash}, {"perimeter", geom.perimeter()}, {"orbits", orbits}})};
}

Outcome cmd_check(Context& ctx, const std::string& domain, int q_max, double tol, int starts, int index) {
  const BoundaryGeometry geom = load_domain(ctx, domain);
  DomainConditionOptions options;
  options.spectrum_tolerance = tol;
  options.search = search_config(starts, ctx.seed);
  Json reports = Json::array();
  bool any = false;
  for (const auto& bb : select_orbits(geom, 12, index)) {
    const DomainConditionReport report = check_domain_conditions(geom, bb, q_max, options);
    any = any || report.passed;
    reports.push_back(to_json(report));
  }
  const Json doc = {{"domain_hash", *ctx.domain_hash}, {"q_max", q_max}, {"in_DL", any}, {"orbits", reports}};
  return {dump_json(doc), any ? kExitOk : kExitViolation};
}

Outcome cmd_orbits(Context& ctx, const std::string& domain, const std::string& range, int p, int starts) {
  const BoundaryGeometry geom = load_domain(ctx, domain);
  const auto [q_lo, q_hi] = parse_range(range);
  if (q_lo < 2 || q_hi < q_lo) throw Error(ErrorCode::InvalidInput, "need 2 <= q_min <= q_max");
  const OrbitSearchConfig config = search_config(starts, ctx.seed);
  Json per_q = Json::array();
  for (int q = q_lo; q <= q_hi; ++q) {
    const auto result = find_orbits(geom, q, p > 0 ? std::optional<int>(p) : std::nullopt, config);
    Json orbits = Json::array();
    for (const auto& o : result.orbits) orbits.push_back(to_json(o));
    per_q.push_back({{"q", q},
                     {"starts", result.starts},
                     {"failed_starts", result.failed_starts},
                     {"clearance_floor", result.clearance_floor},
                     {"orbits", orbits}});
  }
  return {dump_json({{"domain_hash", *ctx.domain_hash}, {"perimeter", geom.perimeter()}, {"results", per_q}})};
}

Outcome cmd_spectrum(Context& ctx, const std::string& domain, int q_max, double tol, int starts) {
  const BoundaryGeometry geom = load_domain(ctx, domain);
  const LengthSpectrum spectrum = length_spectrum(geom, q_max, tol, search_config(starts, ctx.seed));
  for (const auto& w : spectrum.warnings) std::cerr << "warning: " << w << "\n";
  return {spectrum_csv(spectrum)};
}

Outcome cmd_hessian(double a, double L, int r, const std::string& branch_name) {
  const Branch branch = branch_name == "minus" ? Branch::Minus : Branch::Plus;
  const double effective = branch == Branch::Minus ? -a : a;
  const HessianData data = hessian_data(effective, L, r);
  Json doc = to_json(data);
  doc["branch"] = std::string(to_string(branch));
  doc["input_a"] = a;
  doc["row_sum"] = data.first_row_sum();
  doc["row_sum_closed_form"] = -L / (effective + 2.0);
  doc["h_inv_branch_table"] = to_json(inverse_entries(a, L, r, branch));
  return {dump_json(doc)};
}

Json invariant_block(const BouncingBallData& bb, const std::optional<StabilityData>& stability,
                     const InvariantConstants& consts, int j_max, int r_max, double k) {
  const std::span<const double> jet(bb.plus.derivatives);
  const double a = -2.0 * (1.0 + bb.L * jet[2]);
  Json iterates = Json::array();
  for (int r = 1; r <= r_max; ++r) {
    Json entry = {{"r", r}};
    try {
      const HessianData hess = hessian_data(a, bb.L, r);
      entry["maslov"] = to_json(hess.maslov);
      if (stability) {
        entry["prefactor_dirichlet"] = to_json(prefactor(*stability, r, BoundaryCondition::Dirichlet, hess.maslov.m, k));
        entry["prefactor_neumann"] = to_json(prefactor(*stability, r, BoundaryCondition::Neumann, hess.maslov.m, k));
      }
      Json b = Json::array();
      for (int j = 2; j <= j_max; ++j) b.push_back(to_json(b_invariant(jet, hess, consts, j)));
      entry["invariants"] = b;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidInput) throw;
      entry["error"] = e.what();
    }
    iterates.push_back(entry);
  }
  Json out = {{"L", bb.L}, {"theta", bb.theta}, {"a", a}, {"jet", to_json(bb.plus)}, {"iterates", iterates}};
  out["stability"] = stability ? to_json(*stability) : Json(nullptr);
  return out;
}

Outcome cmd_invariants(Context& ctx, const std::string& domain, int j_max, int r_max, const std::string& constants,
                       double k, int index) {
  if (j_max < 2 || r_max < 1) throw Error(ErrorCode::InvalidInput, "need jmax >= 2 and rmax >= 1");
  const BoundaryGeometry geom = load_domain(ctx, domain);
  const InvariantConstants consts = load_constants(constants);
  Json orbits = Json::array();
  for (const auto& bb : select_orbits(geom, std::max<std::size_t>(12, 2 * j_max), index)) {
    if (bb.degenerate_family) continue;
    orbits.push_back(invariant_block(bb, try_stability(geom, bb), consts, j_max, r_max, k));
  }
  if (orbits.empty()) throw Error(ErrorCode::DegenerateOrbit, "no isolated bouncing ball orbit");
  return {dump_json({{"domain_hash", *ctx.domain_hash}, {"k", k}, {"orbits", orbits}})};
}

Outcome cmd_reconstruct(const std::string& spectral, const std::string& constants, int J) {
  const SpectralData data = spectral_from_json(read_json_file(spectral));
  const ReconstructionResult result = recover_jet(data, load_constants(constants), J);
  return {dump_json({{"input", spectral_to_json(data)}, {"result", to_json(result)}})};
}

Outcome cmd_roundtrip(Context& ctx, const std::string& domain, int J, const std::string& constants, double tol,
                      int index) {
  if (J < 2) throw Error(ErrorCode::InvalidInput, "J must be at least 2");
  const BoundaryGeometry geom = load_domain(ctx, domain);
  const InvariantConstants consts = load_constants(constants);
  Json runs = Json::array();
  double worst = 0.0;
  int completed = 0;
  for (const auto& bb : select_orbits(geom, 2 * J, index)) {
    Json run = {{"L", bb.L}, {"theta", bb.theta}};
    try {
      if (bb.degenerate_family) throw Error(ErrorCode::DegenerateOrbit, "continuous family");
      std::vector<double> truth = bb.plus.derivatives;
      truth.resize(2 * J + 1);
      const SpectralData data = synthesize_spectral_data(truth, consts, J);
      const ReconstructionResult rec = recover_jet(data, consts, J);
      const bool reflect = truth[3] < 0.0;
      double err = 0.0;
      for (int n = 2; n <= 2 * J; ++n) {
        const double expected = reflect && n % 2 == 1 ? -truth[n] : truth[n];
        err = std::max(err, std::abs(rec.jets[n] - expected) / std::max(1.0, std::abs(expected)));
      }
      run["kind"] = std::string(to_string(data.kind));
      run["reflected"] = reflect;
      run["true_jet"] = truth;
      run["recovered"] = to_json(rec);
      run["max_jet_error"] = err;
      worst = std::max(worst, err);
      ++completed;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidInput) throw;
      run["error"] = e.what();
    }
    runs.push_back(run);
  }
  const bool ok = completed > 0 && worst <= tol;
  std::cerr << "max_jet_error " << worst << " over " << completed << " orbit(s)\n";
  Json doc = {{"domain_hash", *ctx.domain_hash}, {"J", J}, {"orbits", runs}, {"passed", ok}};
  doc["max_jet_error"] = completed > 0 ? Json(worst) : Json(nullptr);
  return {dump_json(doc), ok ? kExitOk : kExitViolation};
}

Outcome cmd_duality(double alpha, double L, const std::string& kind_name) {
  const StabilityKind kind = kind_name == "hyperbolic" ? StabilityKind::Hyperbolic : StabilityKind::Elliptic;
  const auto [f_plus, f_minus] = curvature_branches(alpha, kind, L);
  Json members = Json::array();
  std::map<int, std::pair<std::optional<int>, std::optional<int>>> by_r;
  for (const auto& [f2, branch] : {std::pair{f_plus, Branch::Plus}, std::pair{f_minus, Branch::Minus}}) {
    const double a = -2.0 * (1.0 + L * f2);
    Json sig = Json::object();
    for (int r = 1; r <= 2; ++r) {
      try {
        const int s = signature_and_maslov(normalized_eigenvalues(a, r), r).signature;
        sig[std::to_string(r)] = s;
        (branch == Branch::Plus ? by_r[r].first : by_r[r].second) = s;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroEigenvalue) throw;
        sig[std::to_string(r)] = nullptr;
      }
    }
    members.push_back({{"branch", std::string(to_string(branch))}, {"f2", f2}, {"a", a}, {"signatures", sig}});
  }
  const int r_used = kind == StabilityKind::Elliptic ? 2 : 1;
  const auto& [s_plus, s_minus] = by_r[r_used];
  const bool distinguished = s_plus && s_minus && *s_plus != *s_minus;
  const Json doc = {{"alpha", alpha},
                    {"L", L},
                    {"kind", std::string(to_string(kind))},
                    {"pair", members},
                    {"r_used", r_used},
                    {"verdict", distinguished ? "distinguished by signature" : "not distinguished"}};
  return {dump_json(doc), distinguished ? kExitOk : kExitViolation};
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Bouncing ball spectral tools"};
  app.footer(kSchemaHelp);
  app.require_subcommand(1);

  Context ctx;
  std::string domain, constants, spectral, range = "2..8", branch = "plus", kind = "elliptic";
  int q_max = 8, starts = 24, order = 12, j_max = 6, r_max = 2, J = 8, r = 1, index = -1, p = 0;
  double tol = 1e-9, a = -1.0, L = 2.0, alpha = 2.0 * std::acos(0.5), k = 0.0, rt_tol = 1e-8;
  std::uint64_t seed = 0;
  std::function<Outcome()> action;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", ctx.out, "output file; stdout if omitted"); };
  auto add_domain = [&](CLI::App* sub) {
    sub->add_option("--domain", domain, "domain spec JSON")->required();
    add_out(sub);
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--starts", starts, "multistart seeds per winding number")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed of the start sequence");
  };

  auto* validate = app.add_subcommand("validate", "check a domain spec and report its geometry");
  add_domain(validate);
  validate->callback([&] { action = [&] { return cmd_validate(ctx, domain); }; });

  auto* bb = app.add_subcommand("bouncing-ball", "locate bouncing ball orbits, jets and stability");
  add_domain(bb);
  bb->add_option("--order", order, "jet truncation order")->check(CLI::Range(3, 40));
  bb->callback([&] { action = [&] { return cmd_bouncing_ball(ctx, domain, order); }; });

  auto* check = app.add_subcommand("check", "evaluate the four domain conditions");
  add_domain(check);
  check->add_option("--qmax", q_max, "largest bounce number searched")->check(CLI::Range(2, 64));
  check->add_option("--tol", tol, "length clustering tolerance")->check(CLI::PositiveNumber);
  check->add_option("--orbit", index, "restrict to one bouncing ball by index");
  add_search(check);
  check->callback([&] {
    ctx.tolerances = {{"spectrum", tol}};
    action = [&] { return cmd_check(ctx, domain, q_max, tol, starts, index); };
  });

  auto* orbits = app.add_subcommand("orbits", "find periodic orbits for a range of bounce numbers");
  add_domain(orbits);
  orbits->add_option("--q", range, "bounce numbers, e.g. 2..8");
  orbits->add_option("--p", p, "restrict to one winding number");
  add_search(orbits);
  orbits->callback([&] { action = [&] { return cmd_orbits(ctx, domain, range, p, starts); }; });

  auto* spectrum = app.add_subcommand("spectrum", "length spectrum as CSV");
  add_domain(spectrum);
  spectrum->add_option("--qmax", q_max, "largest bounce number searched")->check(CLI::Range(2, 64));
  spectrum->add_option("--tol", tol, "length clustering tolerance")->check(CLI::PositiveNumber);
  add_search(spectrum);
  spectrum->callback([&] {
    ctx.tolerances = {{"spectrum", tol}};
    action = [&] { return cmd_spectrum(ctx, domain, q_max, tol, starts); };
  });

  auto* hessian = app.add_subcommand("hessian", "closed-form Hessian data of an iterate");
  hessian->add_option("--a", a, "orbit parameter a")->required();
  hessian->add_option("--L", L, "half length")->check(CLI::PositiveNumber);
  hessian->add_option("--r", r, "iterate")->check(CLI::Range(1, 1000));
  hessian->add_option("--branch", branch, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
  add_out(hessian);
  hessian->callback([&] { action = [&] { return cmd_hessian(a, L, r, branch); }; });

  auto* invariants = app.add_subcommand("invariants", "wave invariants of the bouncing ball iterates");
  add_domain(invariants);
  invariants->add_option("--jmax", j_max, "largest invariant index")->check(CLI::Range(2, 20));
  invariants->add_option("--rmax", r_max, "largest iterate")->check(CLI::Range(1, 50));
  invariants->add_option("--constants", constants, "constants JSON");
  invariants->add_option("--k", k, "wave number for the prefactor phase");
  invariants->add_option("--orbit", index, "restrict to one bouncing ball by index");
  invariants->callback([&] { action = [&] { return cmd_invariants(ctx, domain, j_max, r_max, constants, k, index); }; });

  auto* reconstruct = app.add_subcommand("reconstruct", "recover the Taylor jet from spectral data");
  reconstruct->add_option("--spectral", spectral, "spectral data JSON")->required();
  reconstruct->add_option("--constants", constants, "constants JSON");
  reconstruct->add_option("--J", J, "highest invariant index")->check(CLI::Range(2, 20));
  add_out(reconstruct);
  reconstruct->callback([&] { action = [&] { return cmd_reconstruct(spectral, constants, J); }; });

  auto* roundtrip = app.add_subcommand("roundtrip", "boundary jet -> invariants -> recovered jet");
  add_domain(roundtrip);
  roundtrip->add_option("--J", J, "highest invariant index")->check(CLI::Range(2, 20));
  roundtrip->add_option("--constants", constants, "constants JSON");
  roundtrip->add_option("--tol", rt_tol, "accepted relative jet error")->check(CLI::PositiveNumber);
  roundtrip->add_option("--orbit", index, "restrict to one bouncing ball by index");
  roundtrip->callback([&] {
    ctx.tolerances = {{"jet_error", rt_tol}};
    action = [&] { return cmd_roundtrip(ctx, domain, J, constants, rt_tol, index); };
  });

  auto* duality = app.add_subcommand("duality", "the dual pair sharing Poincare eigenvalues");
  duality->add_option("--alpha", alpha, "rotation angle or expansion exponent")->check(CLI::PositiveNumber);
  duality->add_option("--L", L, "half length")->check(CLI::PositiveNumber);
  duality->add_option("--kind", kind, "elliptic or hyperbolic")->check(CLI::IsMember({"elliptic", "hyperbolic"}));
  add_out(duality);
  duality->callback([&] { action = [&] { return cmd_duality(alpha, L, kind); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  for (const auto* sub : app.get_subcommands()) {
    ctx.command = sub->get_name();
    for (const auto* opt : sub->get_options()) {
      if (opt->get_name() == "--help" || opt->count() == 0) continue;
      ctx.args[opt->get_name()] = opt->as<std::string>();
    }
  }
  ctx.seed = seed;

  const auto start = std::chrono::steady_clock::now();
  try {
    const Outcome outcome = action();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(ctx, outcome.text, seconds);
    return outcome.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace bst::cli
