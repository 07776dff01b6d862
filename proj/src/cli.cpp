#include "minctrl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "minctrl/matrix_io.hpp"
#include "minctrl/parametrize.hpp"
#include "minctrl/report.hpp"
#include "minctrl/synthesis.hpp"

namespace minctrl {
namespace {

struct Options {
  std::string command;
  std::vector<std::string> paths;
  std::string backend = "auto";
  std::optional<double> tol_rank;
  std::optional<double> tol_eigen;
  std::optional<double> tol_real;
  std::string kind = "input";
  std::optional<std::uint64_t> alpha_seed;
  std::string out_path;
  std::string mode = "ctrb";
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
};

// Problems with the invocation or the input files (exit 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double env_tolerance(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0') throw InputError(std::string(name) + " is not a number: " + raw);
  return v;
}

ToleranceConfig resolve_tolerances(const Options& opt) {
  ToleranceConfig tol;
  tol.rank_tol = opt.tol_rank.value_or(env_tolerance("MINCTRL_TOL_RANK", tol.rank_tol));
  tol.eigen_cluster_tol = opt.tol_eigen.value_or(env_tolerance("MINCTRL_TOL_EIGEN", tol.eigen_cluster_tol));
  tol.realness_tol = opt.tol_real.value_or(env_tolerance("MINCTRL_TOL_REAL", tol.realness_tol));
  try {
    tol.validate();
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  return tol;
}

struct Context {
  Options opt;
  ToleranceConfig tol;
  std::vector<MatrixFile> files;
  bool exact = false;
  bool fallback = false;
  Json warnings = Json::array();
};

void choose_backend(Context& ctx) {
  bool representable = true;
  bool rational_strings = false;
  for (const auto& f : ctx.files) {
    representable = representable && f.exact_representable();
    rational_strings = rational_strings || f.has_rational_strings();
  }
  if (ctx.opt.backend == "exact") {
    if (!representable) throw InputError("exact backend requested but some entries have no exact rational form");
    ctx.exact = true;
  } else if (ctx.opt.backend == "float") {
    ctx.exact = rational_strings;
    if (rational_strings) ctx.warnings.push_back("rational string entries force the exact backend");
  } else {
    ctx.exact = representable;
  }
}

template <class B>
RealMatrixOf<B> load(const MatrixFile& f) {
  if constexpr (kIsExactBackend<B>) {
    return f.to_rational();
  } else {
    return f.to_real();
  }
}

void require_square(const MatrixFile& f, const std::string& path) {
  if (f.rows != f.cols) {
    throw InputError(path + ": state matrix must be square, got " + std::to_string(f.rows) + "x" +
                     std::to_string(f.cols));
  }
}

template <class B>
Json matrix_file_json(const RealMatrixOf<B>& m) {
  return Json::parse(format_matrix_json(m));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

struct Outcome {
  Json result;
  int exit = kExitOk;
};

template <class B>
Outcome analyze(Context& ctx, const EigenStructure<B>& eigen, const RealMatrixOf<B>& a) {
  const auto js = jordan_structure<B>(a, eigen, ctx.tol);
  return {eigen_json(eigen, &js), kExitOk};
}

template <class B>
Outcome synth(Context& ctx, const EigenStructure<B>& eigen, const RealMatrixOf<B>& a) {
  std::optional<AlphaAssignment<B>> alphas;
  Json doc;
  doc["kind"] = ctx.opt.kind;
  doc["alphas"] = ctx.opt.alpha_seed ? Json{{"seed", *ctx.opt.alpha_seed}} : Json("ones");
  RealMatrixOf<B> m;
  if (ctx.opt.kind == "input") {
    const auto js = jordan_structure<B>(a, eigen, ctx.tol);
    if (ctx.opt.alpha_seed) alphas = AlphaAssignment<B>::random(js, *ctx.opt.alpha_seed);
    const auto s = synthesize_minimal_input<B>(a, js, alphas, ctx.tol);
    doc["analysis"] = eigen_json(eigen, &js);
    doc["q"] = s.q;
    doc["imag_residue"] = s.imag_residue;
    doc["verification"] = verify_json(s.verification);
    m = s.b;
  } else {
    const RealMatrixOf<B> at = a.transpose();
    const EigenStructure<B> eigen_t = compute_eigenstructure(at, ctx.tol);
    const auto js = jordan_structure<B>(at, eigen_t, ctx.tol);
    if (ctx.opt.alpha_seed) alphas = AlphaAssignment<B>::random(js, *ctx.opt.alpha_seed);
    const auto s = synthesize_minimal_output<B>(a, js, alphas, ctx.tol);
    doc["analysis"] = eigen_json(eigen, static_cast<const JordanStructure<B>*>(nullptr));
    doc["q"] = s.dual.q;
    doc["imag_residue"] = s.dual.imag_residue;
    doc["verification"] = verify_json(s.verification);
    m = s.c;
  }
  doc["matrix"] = matrix_file_json<B>(m);
  if (!ctx.opt.out_path.empty()) {
    write_text(ctx.opt.out_path, format_matrix_json(m));
    doc["written"] = ctx.opt.out_path;
  }
  return {std::move(doc), kExitOk};
}

template <class B>
Outcome verify(Context& ctx, const EigenStructure<B>& eigen, const RealMatrixOf<B>& a) {
  const RealMatrixOf<B> m = load<B>(ctx.files[1]);
  const bool ctrb = ctx.opt.mode == "ctrb";
  const auto rep = ctrb ? pbh_controllable<B>(a, m, eigen, ctx.tol) : pbh_observable<B>(a, m, eigen, ctx.tol);
  Json doc;
  doc["mode"] = ctx.opt.mode;
  doc["p_max"] = eigen.p_max;
  doc["report"] = verify_json(rep);
  bool lemma2 = true;
  for (bool b : rep.lemma2) lemma2 = lemma2 && b;
  const bool kalman_full = rep.kalman.rank == rep.n;
  bool pencil = true;
  for (const auto& r : rep.ranks) pencil = pencil && r.pencil_rank == rep.n;
  const bool agree = pencil == lemma2 && lemma2 == kalman_full && kalman_full == rep.affirmative();
  doc["oracles"] = Json{{"pbh_pencil", pencil}, {"lemma2", lemma2}, {"kalman_full_rank", kalman_full},
                        {"agree", agree}};
  if (!agree) {
    ctx.warnings.push_back("controllability oracles disagree; the decision is numerically ambiguous");
    return {std::move(doc), kExitAmbiguity};
  }
  return {std::move(doc), rep.affirmative() ? kExitOk : kExitNegative};
}

template <class B>
Outcome sample(Context& ctx, const EigenStructure<B>& eigen, const RealMatrixOf<B>& a) {
  const auto js = jordan_structure<B>(a, eigen, ctx.tol);
  const auto res = sample_minimal<B>(js, ctx.opt.seed, ctx.opt.count, ctx.tol);
  Json doc;
  doc["seed"] = ctx.opt.seed;
  doc["count"] = ctx.opt.count;
  doc["q"] = eigen.p_max;
  doc["draws"] = res.draws;
  if (!ctx.opt.out_dir.empty()) std::filesystem::create_directories(ctx.opt.out_dir);
  Json samples = Json::array();
  bool all_ok = true;
  for (std::size_t k = 0; k < res.matrices.size(); ++k) {
    const auto rep = pbh_controllable<B>(a, res.matrices[k], eigen, ctx.tol);
    all_ok = all_ok && rep.affirmative();
    Json s{{"index", k}, {"verdict", to_string(rep.verdict)}, {"kalman_rank", rep.kalman.rank}};
    if (!ctx.opt.out_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "sample_%03zu.json", k);
      write_text((std::filesystem::path(ctx.opt.out_dir) / name).string(), format_matrix_json(res.matrices[k]));
      s["file"] = name;
    }
    samples.push_back(std::move(s));
  }
  doc["samples"] = std::move(samples);
  if (!all_ok) {
    ctx.warnings.push_back("a sampled matrix failed the PBH test");
    return {std::move(doc), kExitInternal};
  }
  return {std::move(doc), kExitOk};
}

template <class B>
Outcome dispatch(Context& ctx, const EigenStructure<B>& eigen, const RealMatrixOf<B>& a) {
  for (const auto& w : eigen.warnings) ctx.warnings.push_back(w);
  if (ctx.opt.command == "analyze") return analyze<B>(ctx, eigen, a);
  if (ctx.opt.command == "synth") return synth<B>(ctx, eigen, a);
  if (ctx.opt.command == "verify") return verify<B>(ctx, eigen, a);
  return sample<B>(ctx, eigen, a);
}

Outcome execute(Context& ctx) {
  if (ctx.exact) {
    const RationalMatrix a = ctx.files[0].to_rational();
    std::optional<EigenStructure<ExactBackend>> eigen;
    try {
      eigen = compute_eigenstructure(a, ctx.tol);
    } catch (const IrrationalSpectrumError& e) {
      ctx.exact = false;
      ctx.fallback = true;
      ctx.warnings.push_back(std::string("exact backend unavailable, using floating point: ") + e.what());
    }
    if (eigen) return dispatch<ExactBackend>(ctx, *eigen, a);
  }
  const RealMatrix a = ctx.files[0].to_real();
  return dispatch<FloatBackend>(ctx, compute_eigenstructure(a, ctx.tol), a);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
      return kExitInput;
    case ErrorCode::kSpectrumAmbiguity:
    case ErrorCode::kDefectiveStructure:
    case ErrorCode::kNoSolution:
    case ErrorCode::kNotAnEigenvalue:
    case ErrorCode::kIrrationalSpectrum:
      return kExitAmbiguity;
    case ErrorCode::kRealness:
    case ErrorCode::kVerification:
    case ErrorCode::kRejectionBudget:
      return kExitInternal;
  }
  return kExitInternal;
}

int run_command(Options opt, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Context ctx;
  ctx.opt = std::move(opt);
  try {
    ctx.tol = resolve_tolerances(ctx.opt);
    for (const auto& p : ctx.opt.paths) ctx.files.push_back(read_matrix_file(p));
    require_square(ctx.files[0], ctx.opt.paths[0]);
    if (ctx.opt.command == "verify") {
      const auto& m = ctx.files[1];
      const bool ok = ctx.opt.mode == "ctrb" ? m.rows == ctx.files[0].rows : m.cols == ctx.files[0].rows;
      if (!ok) {
        throw InputError("shape mismatch: A is " + std::to_string(ctx.files[0].rows) + "x" +
                         std::to_string(ctx.files[0].cols) + ", second matrix is " + std::to_string(m.rows) + "x" +
                         std::to_string(m.cols));
      }
    }
    choose_backend(ctx);
    Outcome outcome = execute(ctx);

    std::string canonical;
    for (const auto& f : ctx.files) canonical += f.canonical() + "|";
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = ctx.opt.command;
    doc["input_hash"] = "fnv1a64:" + fnv1a_hex(canonical);
    doc["n"] = ctx.files[0].rows;
    doc["backend"] = ctx.exact ? ExactBackend::kName : FloatBackend::kName;
    doc["backend_fallback"] = ctx.fallback;
    doc["tolerances"] = tolerance_json(ctx.tol);
    doc["result"] = std::move(outcome.result);
    doc["warnings"] = ctx.warnings;
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    doc["timings"] = Json{{"total_ms", elapsed.count()}};
    out << doc.dump(2) << "\n";
    for (const auto& w : ctx.warnings) err << "warning: " << w.get<std::string>() << "\n";
    return outcome.exit;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SpectrumAmbiguityError& e) {
    err << "error: " << e.what() << " (gap " << e.gap() << ")\n";
    return kExitAmbiguity;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--backend", opt.backend, "float, exact or auto")
      ->check(CLI::IsMember({"float", "exact", "auto"}))
      ->capture_default_str();
  cmd->add_option("--tol-rank", opt.tol_rank, "relative singular value cutoff (env MINCTRL_TOL_RANK)");
  cmd->add_option("--tol-eigen", opt.tol_eigen, "relative eigenvalue merge distance (env MINCTRL_TOL_EIGEN)");
  cmd->add_option("--tol-real", opt.tol_real, "absolute imaginary residue ceiling (env MINCTRL_TOL_REAL)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Minimal input/output synthesis for controllability and observability", "minctrl"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "eigenstructure, Jordan blocks and the minimal input count");
  analyze->add_option("matrix", opt.paths, "state matrix file")->required()->expected(1);
  add_common(analyze, opt);

  auto* synth = app.add_subcommand("synth", "construct a minimal-width input or output matrix");
  synth->add_option("matrix", opt.paths, "state matrix file")->required()->expected(1);
  synth->add_option("--kind", opt.kind, "input or output")
      ->check(CLI::IsMember({"input", "output"}))
      ->capture_default_str();
  synth->add_option("--alpha-seed", opt.alpha_seed, "draw random nonzero alphas from this seed");
  synth->add_option("--out", opt.out_path, "write the matrix to this file");
  add_common(synth, opt);

  auto* verify = app.add_subcommand("verify", "PBH, eigenvector-rank and Kalman rank tests");
  verify->add_option("matrices", opt.paths, "state matrix file and input (ctrb) or output (obsv) matrix file")
      ->required()
      ->expected(2);
  verify->add_option("--mode", opt.mode, "ctrb or obsv")
      ->check(CLI::IsMember({"ctrb", "obsv"}))
      ->capture_default_str();
  add_common(verify, opt);

  auto* sample = app.add_subcommand("sample", "draw random minimal-width input matrices");
  sample->add_option("matrix", opt.paths, "state matrix file")->required()->expected(1);
  sample->add_option("--count", opt.count, "number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--seed", opt.seed, "random seed")->capture_default_str();
  sample->add_option("--out-dir", opt.out_dir, "directory for sample_NNN.json files");
  add_common(sample, opt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitInput;
  }
  for (auto* cmd : {analyze, synth, verify, sample}) {
    if (cmd->parsed()) opt.command = cmd->get_name();
  }
  return run_command(std::move(opt), out, err);
}

}  // namespace minctrl
