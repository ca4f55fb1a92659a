#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "bst/billiard.hpp"
#include "bst/error.hpp"

namespace bst {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (index > 0) {
    out += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return out;
}

double wrap_positive(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

double wrap_centered(double x, double period) {
  return x - period * std::round(x / period);
}

int resolve_threads(int requested, std::size_t tasks) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("BST_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, std::min<int>(n, static_cast<int>(tasks)));
}

// All cyclic shifts and reversals of a configuration.
std::vector<Eigen::VectorXd> dihedral_images(const Eigen::VectorXd& x) {
  const Eigen::Index q = x.size();
  std::vector<Eigen::VectorXd> out;
  out.reserve(2 * q);
  for (Eigen::Index k = 0; k < q; ++k) {
    Eigen::VectorXd shifted(q);
    Eigen::VectorXd reversed(q);
    for (Eigen::Index j = 0; j < q; ++j) {
      shifted[j] = x[(j + k) % q];
      reversed[j] = x[((k - j) % q + q) % q];
    }
    out.push_back(std::move(shifted));
    out.push_back(std::move(reversed));
  }
  return out;
}

double wrapped_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double period) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double d = wrap_centered(a[j] - b[j], period);
    acc += d * d;
  }
  return std::sqrt(acc);
}

double class_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double period) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& img : dihedral_images(b)) best = std::min(best, wrapped_distance(a, img, period));
  return best;
}

int winding_of(const std::vector<double>& s, double period) {
  double total = 0.0;
  const std::size_t q = s.size();
  for (std::size_t j = 0; j < q; ++j) total += wrap_positive(s[(j + 1) % q] - s[j], period);
  return static_cast<int>(std::lround(total / period));
}

// Reduce mod P, orient so that p <= q/2, and rotate to start at the smallest
// parameter.
void canonicalize(PeriodicOrbit& orbit, double period) {
  auto& s = orbit.config.s;
  for (double& v : s) v = wrap_positive(v, period);
  const int q = static_cast<int>(s.size());
  int p = winding_of(s, period);
  if (2 * p > q) {
    std::reverse(s.begin(), s.end());
    p = winding_of(s, period);
  }
  const auto first = std::min_element(s.begin(), s.end());
  std::rotate(s.begin(), first, s.end());
  orbit.p = p;
  orbit.q = q;
}

struct Candidate {
  PeriodicOrbit orbit;
  Eigen::VectorXd x;
};

struct TaskResult {
  std::vector<Candidate> found;
  int starts = 0;
  int failed = 0;
};

class Searcher {
 public:
  Searcher(const BoundaryGeometry& geom, int q, const OrbitSearchConfig& config, double floor)
      : geom_(geom), q_(q), config_(config), floor_(floor), period_(geom.perimeter()) {}

  // Plain Newton first; only when it lands on a known orbit is the start
  // repeated with deflation of everything found so far.
  TaskResult run(int p_seed, std::uint64_t first_index, int count) const {
    TaskResult result;
    std::vector<Eigen::VectorXd> roots;
    for (int i = 0; i < count; ++i) {
      ++result.starts;
      const Eigen::VectorXd start = seed_point(p_seed, first_index + static_cast<std::uint64_t>(i));
      auto solved = newton(start, {});
      if (!solved) {
        ++result.failed;
        continue;
      }
      Candidate cand{classify(*solved), *solved};
      if (known(cand, result.found, roots)) {
        solved = newton(start, roots);
        if (!solved) continue;
        cand = Candidate{classify(*solved), *solved};
        if (known(cand, result.found, roots)) continue;
      }
      for (auto& img : dihedral_images(*solved)) roots.push_back(std::move(img));
      result.found.push_back(std::move(cand));
    }
    return result;
  }

 private:
  Eigen::VectorXd seed_point(int p, std::uint64_t index) const {
    Eigen::VectorXd x(q_);
    const double base = radical_inverse(index, kPrimes[0]) * period_;
    const double step = p * period_ / q_;
    for (int j = 0; j < q_; ++j) {
      const double u = radical_inverse(index, kPrimes[(j + 1) % std::size(kPrimes)]);
      x[j] = base + j * step + 0.6 * (u - 0.5) * period_ / q_;
    }
    return x;
  }

  std::optional<Eigen::VectorXd> newton(Eigen::VectorXd x, const std::vector<Eigen::VectorXd>& roots) const {
    const double tol = config_.gradient_tolerance * period_;
    const double max_step = 0.25 * period_ / q_;
    for (int it = 0; it < config_.max_newton_iterations; ++it) {
      ConfigurationPoint cp{std::vector<double>(x.data(), x.data() + q_)};
      if (cp.clearance(period_) < 0.5 * floor_) return std::nullopt;
      LengthEvaluation eval;
      try {
        eval = length_functional(geom_, cp);
      } catch (const Error&) {
        return std::nullopt;
      }
      if (eval.gradient.norm() <= tol) {
        if (cp.clearance(period_) < floor_) return std::nullopt;
        return x;
      }

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(eval.hessian);
      const Eigen::VectorXd& lambda = eig.eigenvalues();
      const double lmax = lambda.cwiseAbs().maxCoeff();
      Eigen::VectorXd step = Eigen::VectorXd::Zero(q_);
      for (int k = 0; k < q_; ++k) {
        if (std::abs(lambda[k]) <= 1e-10 * lmax) continue;
        const Eigen::VectorXd v = eig.eigenvectors().col(k);
        step -= (v.dot(eval.gradient) / lambda[k]) * v;
      }

      // Deflation M(x) = Π (1/‖x − r‖² + 1); the deflated Newton step is the
      // plain step scaled by 1 / (1 − ∇log M · step).
      double directional = 0.0;
      for (const auto& r : roots) {
        Eigen::VectorXd d(q_);
        for (int j = 0; j < q_; ++j) d[j] = wrap_centered(x[j] - r[j], period_);
        const double n2 = d.squaredNorm();
        if (n2 < 1e-300) return std::nullopt;
        const double factor = 1.0 / n2 + 1.0;
        directional += (-2.0 / (n2 * n2)) * d.dot(step) / factor;
      }
      const double denom = 1.0 - directional;
      if (std::abs(denom) < 1e-12) return std::nullopt;
      step /= denom;

      const double largest = step.cwiseAbs().maxCoeff();
      if (largest > max_step) step *= max_step / largest;
      x += step;
    }
    return std::nullopt;
  }

  bool known(const Candidate& cand, const std::vector<Candidate>& found, const std::vector<Eigen::VectorXd>& roots) const {
    if (cand.orbit.degenerate_family) {
      for (const auto& f : found)
        if (f.orbit.degenerate_family && f.orbit.p == cand.orbit.p &&
            std::abs(f.orbit.length - cand.orbit.length) <= 1e-8 * period_)
          return true;
    }
    for (const auto& r : roots)
      if (wrapped_distance(cand.x, r, period_) <= 1e-6 * period_) return true;
    return false;
  }

  PeriodicOrbit classify(const Eigen::VectorXd& x) const {
    PeriodicOrbit orbit;
    orbit.config.s.assign(x.data(), x.data() + q_);
    canonicalize(orbit, period_);
    const LengthEvaluation eval = length_functional(geom_, orbit.config);
    orbit.length = eval.value;
    orbit.gradient_norm = eval.gradient.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(eval.hessian, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd abs_lambda = eig.eigenvalues().cwiseAbs();
    orbit.hessian_det = eig.eigenvalues().prod();
    orbit.hessian_rank_ratio = abs_lambda.minCoeff() / abs_lambda.maxCoeff();
    orbit.nondegenerate = orbit.hessian_rank_ratio > config_.rank_tolerance;
    orbit.degenerate_family = !orbit.nondegenerate;
    orbit.angles = reflection_angles(geom_, orbit.config);
    return orbit;
  }

  const BoundaryGeometry& geom_;
  int q_;
  const OrbitSearchConfig& config_;
  double floor_;
  double period_;
};

bool canonical_less(const PeriodicOrbit& a, const PeriodicOrbit& b) {
  if (a.length != b.length) return a.length < b.length;
  return std::lexicographical_compare(a.config.s.begin(), a.config.s.end(), b.config.s.begin(), b.config.s.end());
}

}  // namespace

OrbitSearchResult find_orbits(const BoundaryGeometry& geom, int q, std::optional<int> p_filter,
                              const OrbitSearchConfig& config) {
  if (q < 2) throw Error(ErrorCode::InvalidInput, "q must be at least 2");
  const double period = geom.perimeter();
  const double c = config.clearance_constant > 0.0
                       ? config.clearance_constant
                       : std::min(0.1 * period, 1.0 / std::max(geom.curvature_max(), 1e-300));

  OrbitSearchResult result;
  result.clearance_floor = c / q;

  // Fixed task partition (winding seed × chunk) keeps the output independent
  // of the number of worker threads.
  constexpr int kChunks = 2;
  struct Task {
    int p;
    std::uint64_t first;
    int count;
  };
  std::vector<Task> tasks;
  const int per_chunk = (config.starts_per_winding + kChunks - 1) / kChunks;
  for (int p = 1; 2 * p <= q; ++p) {
    if (p_filter && *p_filter != p) continue;
    for (int chunk = 0; chunk < kChunks; ++chunk) {
      const int first = chunk * per_chunk;
      const int count = std::min(per_chunk, config.starts_per_winding - first);
      if (count <= 0) continue;
      const std::uint64_t index = config.seed + 1 + static_cast<std::uint64_t>((p - 1) * config.starts_per_winding + first);
      tasks.push_back({p, index, count});
    }
  }

  Searcher searcher(geom, q, config, result.clearance_floor);
  std::vector<TaskResult> outputs(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) outputs[i] = searcher.run(tasks[i].p, tasks[i].first, tasks[i].count);
  };
  const int nthreads = resolve_threads(config.threads, tasks.size());
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<Candidate> all;
  for (auto& out : outputs) {
    result.starts += out.starts;
    result.failed_starts += out.failed;
    for (auto& cand : out.found) all.push_back(std::move(cand));
  }
  std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) { return canonical_less(a.orbit, b.orbit); });

  std::vector<Candidate> kept;
  for (auto& cand : all) {
    if (p_filter && cand.orbit.p != *p_filter) continue;
    bool duplicate = false;
    for (const auto& k : kept) {
      if (k.orbit.p != cand.orbit.p) continue;
      if (cand.orbit.degenerate_family && k.orbit.degenerate_family) {
        if (std::abs(k.orbit.length - cand.orbit.length) <= 1e-8 * period) duplicate = true;
      } else if (class_distance(k.x, cand.x, period) <= 1e-6 * period) {
        duplicate = true;
      }
      if (duplicate) break;
    }
    if (!duplicate) kept.push_back(std::move(cand));
  }

  int index = 0;
  for (auto& k : kept) {
    std::ostringstream id;
    id << "q" << k.orbit.q << "p" << k.orbit.p << "#" << index++;
    k.orbit.orbit_class = id.str();
    result.orbits.push_back(std::move(k.orbit));
  }
  return result;
}

const SpectrumEntry* LengthSpectrum::find(double length) const {
  for (const auto& e : entries)
    if (std::abs(e.length - length) <= tolerance) return &e;
  return nullptr;
}

LengthSpectrum length_spectrum(const BoundaryGeometry& geom, int q_max, double tolerance,
                               const OrbitSearchConfig& config) {
  if (q_max < 2) throw Error(ErrorCode::InvalidInput, "q_max must be at least 2");
  LengthSpectrum spectrum;
  spectrum.tolerance = tolerance;
  spectrum.q_max = q_max;
  spectrum.starts_per_winding = config.starts_per_winding;
  spectrum.seed = config.seed;

  std::vector<PeriodicOrbit> all;
  for (int q = 2; q <= q_max; ++q) {
    OrbitSearchResult found = find_orbits(geom, q, std::nullopt, config);
    if (found.failed_starts > 0) {
      std::ostringstream msg;
      msg << "q=" << q << ": " << found.failed_starts << " of " << found.starts << " starts did not converge";
      spectrum.warnings.push_back(msg.str());
    }
    for (auto& o : found.orbits) all.push_back(std::move(o));
  }
  std::stable_sort(all.begin(), all.end(), canonical_less);

  for (auto& orbit : all) {
    if (spectrum.entries.empty() || orbit.length - spectrum.entries.back().orbits.back().length > tolerance) {
      spectrum.entries.push_back({});
    }
    spectrum.entries.back().orbits.push_back(std::move(orbit));
  }
  for (auto& entry : spectrum.entries) {
    double sum = 0.0;
    for (const auto& o : entry.orbits) sum += o.length;
    entry.length = sum / entry.orbits.size();
    entry.multiplicity = static_cast<int>(entry.orbits.size());
  }
  return spectrum;
}

Condition4Report check_condition4(const BoundaryGeometry& geom, double half_length, int q_max, double tolerance,
                                  const OrbitSearchConfig& config) {
  Condition4Report report;
  report.half_length = half_length;
  report.perimeter = geom.perimeter();
  report.q_max = q_max;
  report.spectrum = length_spectrum(geom, q_max, tolerance, config);

  const double L = half_length;
  const double P = geom.perimeter();
  // γ^k has 2k bounces; below that bound it is absent from the enumeration
  // and is counted implicitly.
  auto check_simple = [&](double length, const char* name, int iterate, int& multiplicity) {
    const SpectrumEntry* entry = report.spectrum.find(length);
    multiplicity = (entry ? entry->multiplicity : 0) + (q_max < 2 * iterate ? 1 : 0);
    if (multiplicity == 1) return;
    std::ostringstream msg;
    msg << name << " = " << length << " has multiplicity " << multiplicity;
    if (entry) {
      msg << " (";
      for (std::size_t i = 0; i < entry->orbits.size(); ++i) {
        const auto& o = entry->orbits[i];
        msg << (i ? ", " : "") << "(p,q)=(" << o.p << "," << o.q << ") length " << o.length;
        report.collisions.push_back(o);
      }
      msg << ")";
    }
    report.violations.push_back(msg.str());
  };
  check_simple(2.0 * L, "2L", 1, report.multiplicity_2L);
  check_simple(4.0 * L, "4L", 2, report.multiplicity_4L);

  report.perimeter_distinct = std::abs(4.0 * L - P) > tolerance;
  if (!report.perimeter_distinct) {
    std::ostringstream msg;
    msg << "4L = " << 4.0 * L << " coincides with the perimeter " << P;
    report.violations.push_back(msg.str());
  }

  // Short link of length ≤ 4L/q forces reflection angles ≲ C/q with
  // C = 4 L κ_max, and then |ℓ − pP| ≤ 2 κ_max C² / (κ_min² q).
  const double c1 = geom.curvature_min();
  const double c2 = geom.curvature_max();
  if (c1 > 0.0) {
    const double C = 4.0 * L * c2;
    double bound = 0.0;
    for (double ell : {2.0 * L, 4.0 * L}) {
      const double p_near = std::max(1.0, std::round(ell / P));
      double gap = std::abs(ell - p_near * P);
      if (p_near > 1.0) gap = std::min(gap, std::abs(ell - (p_near - 1.0) * P));
      bound = std::max(bound, gap > 0.0 ? 2.0 * c2 * C * C / (c1 * c1 * gap) : std::numeric_limits<double>::infinity());
    }
    report.heuristic_bounce_bound = bound;

    for (const auto& entry : report.spectrum.entries)
      for (const auto& orbit : entry.orbits)
        for (const auto& link : lazutkin_links(geom, orbit)) {
          report.lazutkin_holds = report.lazutkin_holds && link.holds;
          report.lazutkin.push_back(link);
        }
  } else {
    report.heuristic_bounce_bound = std::numeric_limits<double>::infinity();
  }

  report.passed = report.violations.empty();
  return report;
}

}  // namespace bst
