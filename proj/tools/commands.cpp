#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "specoarse/error.hpp"
#include "specoarse/generators.hpp"
#include "specoarse/matrix_market.hpp"
#include "specoarse/pipeline.hpp"
#include "specoarse/report.hpp"
#include "specoarse/rng.hpp"
#include "specoarse/verify.hpp"

namespace specoarse::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

/// Dense oracle spectra are only computed up to this order.
constexpr std::size_t kOracleLimit = 3000;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct MatrixSource {
  std::string path;
  std::string gen;

  Json to_json() const {
    Json j;
    if (!path.empty()) j["matrix"] = path;
    if (!gen.empty()) j["gen"] = gen;
    return j;
  }
  static MatrixSource from_json(const Json& j) {
    MatrixSource s;
    s.path = j.value("matrix", std::string());
    s.gen = j.value("gen", std::string());
    return s;
  }
};

SparseMatrix load(const MatrixSource& src) {
  if (src.path.empty() == src.gen.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --matrix and --gen");
  }
  if (!src.path.empty()) return load_matrix_market(src.path);
  return generate(parse_generator_spec(src.gen));
}

void add_source_options(CLI::App* cmd, MatrixSource& src) {
  auto* m = cmd->add_option("--matrix", src.path, "Matrix Market file");
  auto* g = cmd->add_option("--gen", src.gen,
                            "generator: lap1d:n | lap2d:AxB | lap3d:AxBxC | sky:AxBxC[:seed] | rand:n | "
                            "rand:mxn[:seed] | randsym:n[:seed]");
  m->excludes(g);
}

std::uint64_t default_seed() {
  const char* env = std::getenv("SPECOARSE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw Error(ErrorCode::InvalidArgument, std::string("SPECOARSE_SEED is not an unsigned integer: ") + env);
  }
  return v;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
}

std::optional<Spectrum> oracle_spectrum(const SparseMatrix& a, SpectrumKind kind) {
  if (std::max(a.nrows(), a.ncols()) > kOracleLimit) return std::nullopt;
  if (kind == SpectrumKind::Singular) return dense_singular_values(a.to_dense());
  if (!a.symmetric()) return std::nullopt;
  return sym_eigenvalues(a.to_dense());
}

double distance_to(const std::vector<double>& spectrum, double v) {
  double best = INFINITY;
  for (double s : spectrum) best = std::min(best, std::abs(s - v));
  return best;
}

std::optional<ShiftTarget> parse_target(const std::string& s) {
  if (s == "smallest") return ShiftTarget::Smallest;
  if (s == "largest") return ShiftTarget::Largest;
  if (s == "nearest") return ShiftTarget::Nearest;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// estimate-eig, estimate-svd, spectrum-plot

struct EstimateRequest {
  std::string command;
  SpectrumKind kind = SpectrumKind::Eigen;
  MatrixSource source;
  SampleConfig config;
  std::string partition_file;
  bool svg = false;
  bool oracle = false;
};

struct EstimateFlags {
  MatrixSource source;
  std::size_t samples = 1;
  std::size_t per_sample = 0;
  std::size_t coarse = 0;
  std::string partitioner;
  std::optional<std::uint64_t> seed;
  double tol = 1e-10;
  std::size_t max_iters = 1000;
  std::string target = "smallest";
  double point = 0.0;
  std::string out = "specoarse-out";
  int threads = 0;
  bool paper_literal = false;
  bool svg = false;
  bool oracle = false;
  bool singular = false;
  std::string partition_file;
};

void add_estimate_options(CLI::App* cmd, EstimateFlags& f, bool allow_svd_switch) {
  add_source_options(cmd, f.source);
  cmd->add_option("--samples", f.samples, "number of coarse grids J")->check(CLI::PositiveNumber);
  cmd->add_option("--per-sample", f.per_sample, "shifts refined per coarse grid k (default: N_c)");
  cmd->add_option("--coarse", f.coarse, "aggregates per coarse grid N_c (default: ceil(N/10))");
  cmd->add_option("--partitioner", f.partitioner, "strong[:beta] | bfs | random");
  cmd->add_option("--seed", f.seed, "master seed (default: $SPECOARSE_SEED or 0)");
  cmd->add_option("--tol", f.tol, "refinement tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iters", f.max_iters, "inverse iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--target", f.target, "which coarse eigenvalues become shifts: smallest | largest | nearest");
  cmd->add_option("--point", f.point, "reference point for --target nearest");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--threads", f.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--paper-literal", f.paper_literal, "unit-entry interpolation (P^T P != I)");
  cmd->add_flag("--svg", f.svg, "also write spectrum.svg");
  cmd->add_flag("--oracle", f.oracle, "check every value against a dense solve");
  cmd->add_option("--partition-file", f.partition_file, "use this fixed partition for every sample");
  if (allow_svd_switch) cmd->add_flag("--svd", f.singular, "singular values instead of eigenvalues");
}

EstimateRequest make_request(const std::string& command, SpectrumKind kind, const EstimateFlags& f,
                             const SparseMatrix& a) {
  EstimateRequest r;
  r.command = command;
  r.kind = kind;
  r.source = f.source;
  r.svg = f.svg || command == "spectrum-plot";
  r.oracle = f.oracle;
  r.partition_file = f.partition_file;

  SampleConfig& cfg = r.config;
  cfg.samples = f.samples;
  cfg.seed = f.seed ? *f.seed : default_seed();
  cfg.tol = f.tol;
  cfg.max_iters = f.max_iters;
  cfg.normalized = !f.paper_literal;
  cfg.target_point = f.point;
  const auto target = parse_target(f.target);
  if (!target) throw Error(ErrorCode::InvalidArgument, "unknown --target '" + f.target + "'");
  cfg.target = *target;

  if (kind == SpectrumKind::Singular) {
    if (!f.partitioner.empty() && parse_partitioner(f.partitioner).kind != PartitionerKind::Random) {
      throw Error(ErrorCode::InvalidArgument, "singular value estimation uses random clustering only");
    }
    if (!f.partition_file.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--partition-file applies to eigenvalue runs only");
    }
    cfg.partitioner = parse_partitioner("random");
    cfg.n_aggregates = f.coarse != 0 ? f.coarse : default_aggregate_count(std::max(a.nrows(), a.ncols()));
    const std::size_t limit = std::min({cfg.n_aggregates, a.nrows(), a.ncols()});
    cfg.per_sample = f.per_sample != 0 ? f.per_sample : limit;
  } else {
    cfg.partitioner = parse_partitioner(f.partitioner.empty() ? "bfs" : f.partitioner);
    if (!f.partition_file.empty()) {
      const Partition p = load_partition(f.partition_file);
      cfg.n_aggregates = p.n_aggregates();
    } else {
      cfg.n_aggregates = f.coarse != 0 ? f.coarse : default_aggregate_count(a.nrows());
    }
    cfg.per_sample = f.per_sample != 0 ? f.per_sample : cfg.n_aggregates;
  }
  return r;
}

Json manifest_json(const EstimateRequest& r, const SparseMatrix& a, const Json& timings) {
  Json m;
  m["tool"] = "specoarse";
  m["version"] = SPECOARSE_VERSION;
  m["command"] = r.command;
  m["kind"] = r.kind == SpectrumKind::Eigen ? "eigen" : "singular";
  m["source"] = r.source.to_json();
  m["matrix"] = {{"rows", a.nrows()}, {"cols", a.ncols()}, {"nnz", a.nnz()}};
  m["config"] = to_json(r.config);
  m["partition_file"] = r.partition_file;
  m["svg"] = r.svg;
  m["oracle"] = r.oracle;
  if (!r.config.normalized) {
    m["interlace_check"] = "skipped: unnormalized interpolation does not satisfy P^T P = I";
  } else {
    m["interlace_check"] = r.oracle ? "checked" : "not requested";
  }
  m["timings_ms"] = timings;
  return m;
}

EstimateRequest request_from_manifest(const Json& m) {
  EstimateRequest r;
  try {
    r.command = m.at("command").get<std::string>();
    r.kind = m.at("kind").get<std::string>() == "singular" ? SpectrumKind::Singular : SpectrumKind::Eigen;
    r.source = MatrixSource::from_json(m.at("source"));
    r.config = sample_config_from_json(m.at("config"));
    r.partition_file = m.value("partition_file", std::string());
    r.svg = m.value("svg", false);
    r.oracle = m.value("oracle", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("manifest: ") + e.what());
  }
  if (r.command != "estimate-eig" && r.command != "estimate-svd" && r.command != "spectrum-plot") {
    throw Error(ErrorCode::InvalidArgument, "cannot replay command '" + r.command + "'");
  }
  return r;
}

/// Soundness of every value plus per-sample interlacing. Returns the number
/// of failed checks.
std::size_t oracle_checks(const EstimateRequest& r, const SparseMatrix& a, const SpectrumEstimate& est,
                          const Spectrum& fine, Json& report, std::ostream& out) {
  const double scale = spectral_radius(fine);
  const double sound_tol = 1e-8 * scale;
  std::size_t failures = 0;
  double worst = 0.0;
  for (double v : est.values) {
    const double d = distance_to(fine.values, v);
    worst = std::max(worst, d);
    if (d > sound_tol) ++failures;
  }
  report["fine"] = fine.values;
  report["soundness_tolerance"] = sound_tol;
  report["max_distance"] = worst;
  report["unsound_values"] = failures;
  out << "oracle: " << est.values.size() - failures << '/' << est.values.size()
      << " values within " << format_double(sound_tol) << " of the dense spectrum\n";

  if (!r.config.normalized) {
    report["interlacing"] = "skipped";
    out << "oracle: interlacing skipped (unnormalized interpolation)\n";
    return failures;
  }
  Json per_sample = Json::array();
  std::size_t violations = 0;
  for (const auto& tr : est.samples) {
    const InterlaceReport rep =
        r.kind == SpectrumKind::Eigen
            ? compare_eigenvalues(fine, tr.coarse_values)
            : compare_singular_values(fine, a.nrows(), a.ncols(), tr.n_aggregates, tr.n_col_aggregates,
                                      tr.coarse_values);
    violations += rep.violations;
    Json j = to_json(rep);
    j["sample"] = tr.sample;
    per_sample.push_back(std::move(j));
  }
  report["interlacing"] = std::move(per_sample);
  out << "oracle: " << violations << " interlacing violations over " << est.samples.size() << " samples\n";
  return failures + violations;
}

int run_estimate(const EstimateRequest& r, const SparseMatrix& a, double load_ms, const fs::path& out_dir,
                 int threads, std::ostream& out) {
  Json timings;
  timings["load"] = load_ms;
  SampleConfig cfg = r.config;
  cfg.workers = threads;
  if (!r.partition_file.empty()) cfg.partition = load_partition(r.partition_file);

  auto t0 = Clock::now();
  const SpectrumEstimate est =
      r.kind == SpectrumKind::Eigen ? estimate_eigenvalues(a, cfg) : estimate_singular_values(a, cfg);
  timings["estimate"] = elapsed_ms(t0);

  t0 = Clock::now();
  make_dir(out_dir);
  write_text(out_dir / "estimate.json", to_json(est).dump(2) + "\n");
  std::ostringstream csv;
  write_csv(csv, est);
  write_text(out_dir / "estimate.csv", csv.str());

  std::optional<Spectrum> fine;
  if (r.svg || r.oracle) fine = oracle_spectrum(a, r.kind);
  if (r.svg) {
    const std::string title = (r.kind == SpectrumKind::Eigen ? "eigenvalues of " : "singular values of ") +
                              (r.source.gen.empty() ? fs::path(r.source.path).filename().string() : r.source.gen);
    const std::vector<double> empty;
    write_text(out_dir / "spectrum.svg", spectrum_svg(est, fine ? fine->values : empty, title));
  }
  std::size_t failures = 0;
  if (r.oracle) {
    if (!fine) {
      out << "oracle: skipped (matrix too large or not symmetric)\n";
    } else {
      Json report;
      failures = oracle_checks(r, a, est, *fine, report, out);
      write_text(out_dir / "oracle.json", report.dump(2) + "\n");
    }
  }
  timings["write"] = elapsed_ms(t0);
  write_text(out_dir / "manifest.json", manifest_json(r, a, timings).dump(2) + "\n");

  out << (r.kind == SpectrumKind::Eigen ? "eigenvalues" : "singular values") << ": " << est.values.size()
      << " distinct from " << est.samples.size() << " samples (" << est.rejected << " refinements rejected)\n";
  for (double v : est.values) out << "  " << format_double(v) << '\n';
  out << "wrote " << (out_dir / "estimate.json").string() << '\n';
  return failures == 0 ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// extremes

struct ExtremesFlags {
  MatrixSource source;
  std::size_t samples = 1;
  std::size_t coarse = 0;
  std::string partitioner = "bfs";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool singular = false;
  bool refine = false;
  bool oracle = false;
  bool paper_literal = false;
  std::string out;
};

int run_extremes(const ExtremesFlags& f, std::ostream& out) {
  const SparseMatrix a = load(f.source);
  ExtremeConfig cfg;
  cfg.samples = f.samples;
  cfg.seed = f.seed ? *f.seed : default_seed();
  cfg.workers = f.threads;
  cfg.refine = f.refine;
  cfg.normalized = !f.paper_literal;
  cfg.partitioner = parse_partitioner(f.partitioner);
  const std::size_t n = f.singular ? std::max(a.nrows(), a.ncols()) : a.nrows();
  cfg.n_aggregates = f.coarse != 0 ? f.coarse : default_aggregate_count(n);

  const ExtremeEstimate e = f.singular ? extreme_singular_values(a, cfg) : extreme_eigenvalues(a, cfg);
  Json j;
  j["kind"] = f.singular ? "singular" : "eigen";
  j["samples"] = cfg.samples;
  j["n_aggregates"] = cfg.n_aggregates;
  j["partitioner"] = f.singular ? "random" : to_string(cfg.partitioner);
  j["seed"] = cfg.seed;
  j["min"] = e.min;
  j["max"] = e.max;
  j["sample_min"] = e.sample_min;
  j["sample_max"] = e.sample_max;
  out << "min " << format_double(e.min) << '\n' << "max " << format_double(e.max) << '\n';
  if (e.refined_min && e.refined_max) {
    j["refined_min"] = e.refined_min->value;
    j["refined_max"] = e.refined_max->value;
    out << "refined_min " << format_double(e.refined_min->value) << '\n'
        << "refined_max " << format_double(e.refined_max->value) << '\n';
  }

  int code = kExitOk;
  if (f.oracle) {
    const auto fine = oracle_spectrum(a, f.singular ? SpectrumKind::Singular : SpectrumKind::Eigen);
    if (!fine) {
      out << "oracle skipped (matrix too large or not symmetric)\n";
    } else {
      const auto& v = fine->values;
      const double tol = 1e-9 * spectral_radius(*fine);
      // Singular values are stored descending, eigenvalues ascending.
      const double lo = f.singular ? v.back() : v.front();
      const double hi = f.singular ? v.front() : v.back();
      const double slack_max = hi - e.max;
      j["oracle_min"] = lo;
      j["oracle_max"] = hi;
      j["slack_max"] = slack_max;
      out << "oracle_min " << format_double(lo) << '\n' << "oracle_max " << format_double(hi) << '\n';
      out << "slack_max " << format_double(slack_max) << '\n';
      bool ok = slack_max >= -tol;
      if (!f.singular) {
        const double slack_min = e.min - lo;
        j["slack_min"] = slack_min;
        out << "slack_min " << format_double(slack_min) << '\n';
        ok = ok && slack_min >= -tol;
      }
      if (!cfg.normalized) {
        out << "inner bounds not guaranteed for unnormalized interpolation\n";
      } else if (!ok) {
        out << "inner bound violated\n";
        code = kExitFailed;
      }
    }
  }
  if (!f.out.empty()) {
    make_dir(f.out);
    write_text(fs::path(f.out) / "extremes.json", j.dump(2) + "\n");
  }
  return code;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyFlags {
  MatrixSource source;
  std::size_t trials = 10;
  std::size_t coarse = 0;
  std::size_t coarse_cols = 0;
  std::string partitioner = "random";
  std::optional<std::uint64_t> seed;
  bool singular = false;
  std::string out;
};

int run_verify(const VerifyFlags& f, std::ostream& out) {
  const SparseMatrix a = load(f.source);
  const std::uint64_t seed = f.seed ? *f.seed : default_seed();
  const std::size_t m = a.nrows(), n = a.ncols();
  const PartitionerSpec spec = parse_partitioner(f.partitioner);
  if (f.singular && spec.kind != PartitionerKind::Random) {
    throw Error(ErrorCode::InvalidArgument, "singular value verification uses random clustering only");
  }
  Spectrum fine;
  if (f.singular) {
    fine = dense_singular_values(a.to_dense());
  } else {
    if (!a.symmetric()) throw Error(ErrorCode::NotSymmetric, "eigenvalue interlacing needs a symmetric matrix");
    fine = sym_eigenvalues(a.to_dense());
  }
  const std::size_t p = f.coarse != 0 ? f.coarse : default_aggregate_count(m);
  const std::size_t q = f.coarse_cols != 0 ? f.coarse_cols : (f.coarse != 0 ? f.coarse : default_aggregate_count(n));
  if (p > m || (f.singular && q > n)) throw Error(ErrorCode::InvalidAggregateCount, "coarse size exceeds the matrix");

  std::ostringstream table;
  table << "trial,index,coarse,lower_slack,upper_slack,lower_vacuous\n";
  Json trials = Json::array();
  std::size_t violations = 0;
  double min_slack = INFINITY;
  for (std::size_t t = 0; t < f.trials; ++t) {
    const std::uint64_t ts = derive_seed(seed, t);
    InterlaceReport rep;
    if (f.singular) {
      const auto u = build_interpolation(random_partition(m, p, derive_seed(ts, 1)), true);
      const auto v = build_interpolation(random_partition(n, q, derive_seed(ts, 2)), true);
      rep = verify_svd_interlacing(fine, m, n, two_sided_product(a, u, v));
    } else {
      const auto part = sample_partition(a, spec, p, ts);
      rep = verify_interlacing(fine, galerkin_product(a, build_interpolation(part, true)));
    }
    violations += rep.violations;
    if (!rep.coarse.empty()) min_slack = std::min(min_slack, rep.min_slack());
    for (std::size_t i = 0; i < rep.coarse.size(); ++i) {
      table << t << ',' << i << ',' << format_double(rep.coarse[i]) << ','
            << (rep.lower_vacuous[i] ? std::string() : format_double(rep.lower_slack[i])) << ','
            << format_double(rep.upper_slack[i]) << ',' << (rep.lower_vacuous[i] ? 1 : 0) << '\n';
    }
    Json j = to_json(rep);
    j["trial"] = t;
    j["seed"] = ts;
    trials.push_back(std::move(j));
  }
  out << "trials " << f.trials << '\n'
      << "violations " << violations << '\n'
      << "min_slack " << format_double(min_slack) << '\n';
  if (!f.out.empty()) {
    make_dir(f.out);
    write_text(fs::path(f.out) / "verify.csv", table.str());
    Json j;
    j["kind"] = f.singular ? "singular" : "eigen";
    j["fine"] = fine.values;
    j["trials"] = std::move(trials);
    j["violations"] = violations;
    write_text(fs::path(f.out) / "verify.json", j.dump(2) + "\n");
  }
  return violations == 0 ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------
// gershgorin

struct GershgorinFlags {
  MatrixSource source;
  std::string out = "specoarse-out";
  std::string title;
  bool oracle = false;
};

int run_gershgorin(const GershgorinFlags& f, std::ostream& out) {
  const SparseMatrix a = load(f.source);
  const auto discs = gershgorin_discs(a);
  std::vector<double> eig;
  if (f.oracle) {
    if (auto s = oracle_spectrum(a, SpectrumKind::Eigen)) {
      eig = std::move(s->values);
    } else {
      out << "oracle skipped (matrix too large or not symmetric)\n";
    }
  }
  std::ostringstream csv;
  csv << "center,radius\n";
  for (const auto& d : discs) csv << format_double(d.center) << ',' << format_double(d.radius) << '\n';
  make_dir(f.out);
  write_text(fs::path(f.out) / "gershgorin.csv", csv.str());
  const std::string title =
      !f.title.empty() ? f.title
                       : "Gershgorin discs of " +
                             (f.source.gen.empty() ? fs::path(f.source.path).filename().string() : f.source.gen);
  write_text(fs::path(f.out) / "gershgorin.svg", gershgorin_svg(discs, eig, title));

  out << "discs " << discs.size() << '\n'
      << "excludes_zero " << (discs_exclude_zero(discs) ? "yes" : "no") << '\n'
      << "sdd_m_matrix " << (is_strictly_diagonally_dominant_m_matrix(a) ? "yes" : "no") << '\n';
  int code = kExitOk;
  if (!eig.empty()) {
    std::size_t outside = 0;
    for (double lambda : eig) {
      const bool inside = std::any_of(discs.begin(), discs.end(), [&](const GershgorinDisc& d) {
        return std::abs(lambda - d.center) <= d.radius * (1 + 1e-12) + 1e-12 * (std::abs(d.center) + 1);
      });
      outside += inside ? 0 : 1;
    }
    out << "eigenvalues_outside_discs " << outside << '\n';
    if (outside != 0) code = kExitFailed;
  }
  return code;
}

// ---------------------------------------------------------------------------
// partition

struct PartitionFlags {
  MatrixSource source;
  std::size_t coarse = 0;
  std::string partitioner = "bfs";
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_partition(const PartitionFlags& f, std::ostream& out) {
  const SparseMatrix a = load(f.source);
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "partitioning needs a square matrix");
  const std::size_t nc = f.coarse != 0 ? f.coarse : default_aggregate_count(a.nrows());
  const Partition p = sample_partition(a, parse_partitioner(f.partitioner), nc, f.seed ? *f.seed : default_seed());
  std::ostringstream text;
  write_partition(text, p);
  if (f.out.empty()) {
    out << text.str();
  } else {
    write_text(f.out, text.str());
    out << "wrote " << p.n_aggregates() << " aggregates to " << f.out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized coarse-grid estimation of eigenvalues and singular values", "specoarse"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SPECOARSE_VERSION);

  EstimateFlags eig_flags, svd_flags, plot_flags;
  auto* eig = app.add_subcommand("estimate-eig", "eigenvalues from refined coarse-grid shifts");
  add_estimate_options(eig, eig_flags, false);
  auto* svd = app.add_subcommand("estimate-svd", "singular values from two-sided coarse grids");
  add_estimate_options(svd, svd_flags, false);
  auto* plot = app.add_subcommand("spectrum-plot", "estimate and draw coarse vs fine spectra as SVG");
  add_estimate_options(plot, plot_flags, true);

  ExtremesFlags ext_flags;
  auto* ext = app.add_subcommand("extremes", "smallest and largest value over coarse grids only");
  add_source_options(ext, ext_flags.source);
  ext->add_option("--samples", ext_flags.samples, "number of coarse grids J")->check(CLI::PositiveNumber);
  ext->add_option("--coarse", ext_flags.coarse, "aggregates per coarse grid (default: ceil(N/10))");
  ext->add_option("--partitioner", ext_flags.partitioner, "strong[:beta] | bfs | random");
  ext->add_option("--seed", ext_flags.seed, "master seed");
  ext->add_option("--threads", ext_flags.threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  ext->add_flag("--svd", ext_flags.singular, "singular values instead of eigenvalues");
  ext->add_flag("--refine", ext_flags.refine, "polish both bounds on the fine grid");
  ext->add_flag("--oracle", ext_flags.oracle, "compare with the dense extremes");
  ext->add_flag("--paper-literal", ext_flags.paper_literal, "unit-entry interpolation");
  ext->add_option("--out", ext_flags.out, "directory for extremes.json");

  VerifyFlags ver_flags;
  auto* ver = app.add_subcommand("verify", "check interlacing over random partitions");
  add_source_options(ver, ver_flags.source);
  ver->add_option("--trials", ver_flags.trials, "number of random partitions")->check(CLI::PositiveNumber);
  ver->add_option("--coarse", ver_flags.coarse, "aggregates (rows for --svd)");
  ver->add_option("--coarse-cols", ver_flags.coarse_cols, "column aggregates for --svd");
  ver->add_option("--partitioner", ver_flags.partitioner, "strong[:beta] | bfs | random");
  ver->add_option("--seed", ver_flags.seed, "master seed");
  ver->add_flag("--svd", ver_flags.singular, "singular value interlacing");
  ver->add_option("--out", ver_flags.out, "directory for verify.csv and verify.json");

  GershgorinFlags ger_flags;
  auto* ger = app.add_subcommand("gershgorin", "disc list and SVG");
  add_source_options(ger, ger_flags.source);
  ger->add_option("--out", ger_flags.out, "output directory");
  ger->add_option("--title", ger_flags.title, "plot title");
  ger->add_flag("--oracle", ger_flags.oracle, "overlay dense eigenvalues");

  PartitionFlags part_flags;
  auto* part = app.add_subcommand("partition", "write one partition as 'node aggregate' lines");
  add_source_options(part, part_flags.source);
  part->add_option("--coarse", part_flags.coarse, "aggregate count (default: ceil(N/10))");
  part->add_option("--partitioner", part_flags.partitioner, "strong[:beta] | bfs | random");
  part->add_option("--seed", part_flags.seed, "seed");
  part->add_option("--out", part_flags.out, "output file (default: stdout)");

  std::string manifest_path, replay_out;
  int replay_threads = 0;
  auto* replay = app.add_subcommand("replay", "re-run an estimate from its manifest.json");
  replay->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
  replay->add_option("--out", replay_out, "output directory")->required();
  replay->add_option("--threads", replay_threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    auto estimate = [&](const std::string& name, SpectrumKind kind, const EstimateFlags& f) {
      const auto t0 = Clock::now();
      const SparseMatrix a = load(f.source);
      return run_estimate(make_request(name, kind, f, a), a, elapsed_ms(t0), f.out, f.threads, out);
    };
    if (eig->parsed()) return estimate("estimate-eig", SpectrumKind::Eigen, eig_flags);
    if (svd->parsed()) return estimate("estimate-svd", SpectrumKind::Singular, svd_flags);
    if (plot->parsed()) {
      return estimate("spectrum-plot", plot_flags.singular ? SpectrumKind::Singular : SpectrumKind::Eigen,
                      plot_flags);
    }
    if (ext->parsed()) return run_extremes(ext_flags, out);
    if (ver->parsed()) return run_verify(ver_flags, out);
    if (ger->parsed()) return run_gershgorin(ger_flags, out);
    if (part->parsed()) return run_partition(part_flags, out);
    if (replay->parsed()) {
      const EstimateRequest r = request_from_manifest(read_json(manifest_path));
      const auto t0 = Clock::now();
      const SparseMatrix a = load(r.source);
      return run_estimate(r, a, elapsed_ms(t0), replay_out, replay_threads, out);
    }
  } catch (const Error& e) {
    err << "specoarse: " << e.what() << '\n';
    return e.code() == ErrorCode::EmptyEstimate ? kExitFailed : kExitInput;
  } catch (const std::exception& e) {
    err << "specoarse: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace specoarse::cli
