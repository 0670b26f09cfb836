// gsvd-dist: structural queries, density tables, sampling and verification
// runs for the generalized singular values of complex Gaussian pairs.
//
// Exit codes: 0 success / verdict pass, 1 statistical failure, 2 usage or
// regime error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsvd/gsvd_dist.hpp"
#include "gsvd/report_io.hpp"

namespace {

using gsvd::io::Json;
using gsvd::io::format_double;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::size_t m = 0, q = 0, n = 0;
  std::size_t mp = 0, p = 0, np = 0;
  std::vector<double> grid{1e-3, 1e3, 200};
  std::size_t samples = 20000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string format = "csv";
  std::string out;
  std::string sampler;
  std::string block = "upper";
  std::string experiment;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes to --out (resolved against $GSVD_DIST_OUT_DIR when relative) or stdout.
void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::filesystem::path path(opt.out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("GSVD_DIST_OUT_DIR"); dir != nullptr && *dir != '\0') {
      path = std::filesystem::path(dir) / path;
    }
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open output file " + path.string());
  file << text;
}

bool has_problem_dims(const Options& o) { return o.m || o.q || o.n; }
bool has_reduced_dims(const Options& o) { return o.mp || o.p || o.np; }

gsvd::ProblemDims problem_dims(const Options& o) {
  if (!o.m || !o.q || !o.n) throw UsageError("--m, --q and --n are all required");
  return gsvd::make_problem_dims(o.m, o.q, o.n);
}

gsvd::ReducedDims reduced(const Options& o) {
  if (!o.mp || !o.p || !o.np) throw UsageError("--mp, --p and --np are all required");
  return gsvd::make_reduced_dims(o.mp, o.p, o.np);
}

std::vector<double> grid_points(const Options& o) {
  if (o.grid.size() != 3) throw UsageError("--grid takes MIN MAX POINTS");
  const double lo = o.grid[0], hi = o.grid[1];
  const double count = o.grid[2];
  if (!(lo > 0.0) || !(count >= 1.0) || count != std::floor(count)) {
    throw UsageError("--grid needs MIN > 0 and an integer POINTS >= 1");
  }
  const auto points = std::size_t(count);
  if (points == 1) {
    if (hi < lo) throw UsageError("--grid needs MIN <= MAX");
    return {lo};
  }
  if (!(lo < hi)) throw UsageError("--grid needs MIN < MAX when POINTS >= 2");
  std::vector<double> out(points);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = std::exp(a + (b - a) * double(i) / double(points - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

int cmd_dims(const Options& o) {
  const gsvd::ProblemDims d = problem_dims(o);
  const gsvd::GsvdStructure st = gsvd::compute_structure(d);
  const gsvd::Reduction red = gsvd::reduced_dims(d);
  const auto* rd = std::get_if<gsvd::ReducedDims>(&red);
  std::optional<double> power;
  try {
    power = gsvd::expected_q_power(d);
  } catch (const gsvd::UndefinedExpectationError&) {
  }
  const std::string power_text = power ? format_double(*power) : "undefined (m+q = n)";

  if (o.format == "json") {
    Json data = {{"m", d.m}, {"q", d.q}, {"n", d.n}, {"k", st.k}, {"r", st.r}, {"s", st.s},
                 {"regime", gsvd::to_string(st.regime)}};
    data["reduced_dims"] = rd ? gsvd::io::to_json(*rd) : Json("deterministic");
    data["expected_q_power"] = power ? Json(*power) : Json(power_text);
    emit(o, Json{{"meta", gsvd::io::meta("dims", o.seed, o.workers)}, {"data", data}}.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "m,q,n,k,r,s,regime,m_prime,p,n_prime,expected_q_power\n";
  os << d.m << ',' << d.q << ',' << d.n << ',' << st.k << ',' << st.r << ',' << st.s << ','
     << gsvd::to_string(st.regime) << ',';
  if (rd) {
    os << rd->m_prime << ',' << rd->p << ',' << rd->n_prime << ',';
  } else {
    os << "deterministic,,,";
  }
  os << gsvd::io::csv_field(power_text) << '\n';
  emit(o, os.str());
  return 0;
}

int cmd_table(const Options& o, bool density) {
  const gsvd::LawParams law(reduced(o));
  (void)law.terms();
  const std::vector<double> grid = grid_points(o);
  const char* column = density ? "pdf" : "cdf";
  std::vector<double> values;
  values.reserve(grid.size());
  for (double w : grid) values.push_back(density ? gsvd::marginal_pdf(law, w) : gsvd::marginal_cdf(law, w));

  if (o.format == "json") {
    Json rows = Json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({{"w", grid[i]}, {column, values[i]}});
    Json data = {{"law", gsvd::io::to_json(law)}, {"rows", rows}};
    emit(o, Json{{"meta", gsvd::io::meta(column, o.seed, o.workers)}, {"data", data}}.dump(2) + "\n");
    return 0;
  }
  std::string text = std::string("w,") + column + "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    text += format_double(grid[i]) + "," + format_double(values[i]) + "\n";
  }
  emit(o, text);
  return 0;
}

int cmd_sample(const Options& o) {
  const gsvd::RngStream rng(o.seed, 0);
  const gsvd::SamplerOptions opts{o.workers};
  gsvd::SampleBatch batch;
  if (o.sampler == "gsvd") {
    batch = gsvd::sample_w_gsvd(problem_dims(o), o.samples, rng, opts);
  } else if (o.sampler == "L") {
    batch = gsvd::sample_w_L(has_reduced_dims(o) ? reduced(o) : gsvd::require_reduced_dims(problem_dims(o)),
                             o.samples, rng, opts);
  } else if (o.sampler == "haar") {
    const auto block = o.block == "lower" ? gsvd::HaarBlock::LowerRight : gsvd::HaarBlock::UpperLeft;
    batch = gsvd::sample_alpha_haar(problem_dims(o), o.samples, rng, opts, block);
  } else if (o.sampler == "qpower") {
    batch = gsvd::sample_q_power(problem_dims(o), o.samples, rng, opts);
  } else {
    throw UsageError("unknown sampler '" + o.sampler + "' (expected gsvd, L, haar or qpower)");
  }

  const Json dims = std::visit([](const auto& d) { return gsvd::io::to_json(d); }, batch.dims);
  if (o.format == "json") {
    Json draws = Json::array();
    for (std::size_t i = 0; i < batch.count; ++i) {
      const auto d = batch.draw(i);
      draws.push_back(Json(std::vector<double>(d.begin(), d.end())));
    }
    Json data = {{"sampler", gsvd::to_string(batch.sampler)}, {"dims", dims}, {"seed", batch.seed},
                 {"count", batch.count}, {"arity", batch.arity}, {"failures", batch.failures},
                 {"draws", draws}};
    emit(o, Json{{"meta", gsvd::io::meta("sample", o.seed, o.workers)}, {"data", data}}.dump(2) + "\n");
    return 0;
  }
  std::string dims_text;
  for (const auto& [key, value] : dims.items()) {
    if (!dims_text.empty()) dims_text += ';';
    dims_text += key + "=" + value.dump();
  }
  const std::string prefix = std::string(gsvd::to_string(batch.sampler)) + "," + dims_text + "," +
                             std::to_string(batch.seed) + ",";
  std::string text = "sampler,dims,seed,draw,index,value\n";
  for (std::size_t i = 0; i < batch.count; ++i) {
    for (std::size_t j = 0; j < batch.arity; ++j) {
      text += prefix + std::to_string(i) + "," + std::to_string(j) + "," +
              format_double(batch.values[i * batch.arity + j]) + "\n";
    }
  }
  emit(o, text);
  return 0;
}

gsvd::Experiment parse_experiment(const std::string& name) {
  if (name == "theorem1") return gsvd::Experiment::Theorem1;
  if (name == "lemma1") return gsvd::Experiment::Lemma1;
  if (name == "normalization") return gsvd::Experiment::Normalization;
  if (name == "corollary2") return gsvd::Experiment::Corollary2;
  if (name == "haar_chain") return gsvd::Experiment::HaarChain;
  throw UsageError("unknown experiment '" + name + "'");
}

int cmd_verify(const Options& o) {
  const gsvd::Experiment exp = parse_experiment(o.experiment);
  gsvd::ExperimentDims dims;
  if (has_problem_dims(o)) {
    dims = problem_dims(o);
  } else if (has_reduced_dims(o)) {
    dims = reduced(o);
  } else {
    throw UsageError("verify needs --m/--q/--n or --mp/--p/--np");
  }
  gsvd::ExperimentConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  const gsvd::VerificationReport rep = gsvd::run_experiment(exp, dims, cfg);
  emit(o, o.format == "json" ? gsvd::io::to_json(rep).dump(2) + "\n" : gsvd::io::to_csv(rep));
  return rep.pass ? 0 : kExitFail;
}

void add_problem_dims(CLI::App* cmd, Options& o) {
  cmd->add_option("--m", o.m, "rows of A");
  cmd->add_option("--q", o.q, "rows of C (q >= m)");
  cmd->add_option("--n", o.n, "shared column count");
}

void add_reduced_dims(CLI::App* cmd, Options& o) {
  cmd->add_option("--mp", o.mp, "m' (rows of X and Y)");
  cmd->add_option("--p", o.p, "p (columns of X)");
  cmd->add_option("--np", o.np, "n' (columns of Y), n' >= m'");
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output file (default: standard output)");
}

void add_run(CLI::App* cmd, Options& o) {
  cmd->add_option("--samples", o.samples, "number of Monte Carlo draws")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution of the GSVD of complex Gaussian matrix pairs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gsvd::kVersion));
  Options o;

  auto* dims = app.add_subcommand("dims", "structural parameters of (m, q, n)");
  add_problem_dims(dims, o);
  add_output(dims, o);

  auto* pdf = app.add_subcommand("pdf", "marginal density on a log-spaced grid");
  auto* cdf = app.add_subcommand("cdf", "marginal CDF on a log-spaced grid");
  for (auto* cmd : {pdf, cdf}) {
    add_reduced_dims(cmd, o);
    cmd->add_option("--grid", o.grid, "MIN MAX POINTS (default 1e-3 1e3 200)")->expected(3);
    add_output(cmd, o);
  }

  auto* sample = app.add_subcommand("sample", "dump Monte Carlo draws");
  sample->add_option("--sampler", o.sampler, "gsvd | L | haar | qpower")->required();
  sample->add_option("--block", o.block, "haar block: upper (P11) or lower (P22)")
      ->check(CLI::IsMember({"upper", "lower"}));
  add_problem_dims(sample, o);
  add_reduced_dims(sample, o);
  add_run(sample, o);
  add_output(sample, o);

  auto* verify = app.add_subcommand("verify", "run a named verification experiment");
  verify->add_option("experiment", o.experiment, "theorem1 | lemma1 | normalization | corollary2 | haar_chain")
      ->required();
  add_problem_dims(verify, o);
  add_reduced_dims(verify, o);
  add_run(verify, o);
  add_output(verify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (dims->parsed()) return cmd_dims(o);
    if (pdf->parsed()) return cmd_table(o, true);
    if (cdf->parsed()) return cmd_table(o, false);
    if (sample->parsed()) return cmd_sample(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gsvd::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gsvd::RegimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gsvd::ComplexityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gsvd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
