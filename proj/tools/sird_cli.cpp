// Command-line front end: simultaneous integer relation detection,
// minimal polynomial reconstruction, factoring, and a deterministic
// bench harness. All numeric values cross this boundary as decimal
// strings; outputs are single JSON documents on stdout.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sird/json_io.hpp"
#include "sird/minpoly.hpp"
#include "sird/planted.hpp"
#include "sird/sird.hpp"

namespace {

using sird::json;

constexpr int kExitOk = 0;
constexpr int kExitNotFound = 1;
constexpr int kExitBadInput = 2;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

json read_json_file(const std::string& path) {
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw sird::Error(sird::Errc::ParseError, "cannot open input file: " + path);
  return json::parse(in);
}

struct DetectFlags {
  std::string gamma = "2";
  std::string mode = "exact";
  long precision = 128;
  std::string norm_bound;
  long max_iters = -1;
  std::string lambda;
};

sird::DetectionConfig build_config(const DetectFlags& f) {
  sird::DetectionConfig cfg;
  if (f.mode != "float" && f.mode != "exact")
    throw sird::Error(sird::Errc::InvalidArgument, "--mode must be exact or float");
  cfg.mode = f.mode == "float" ? sird::Mode::Float : sird::Mode::Exact;
  cfg.precision = static_cast<mpfr_prec_t>(f.precision);
  cfg.gamma = sird::Scalar::parse(f.gamma, sird::Mode::Exact);
  if (!f.norm_bound.empty())
    cfg.norm_bound = sird::Scalar::parse(f.norm_bound, sird::Mode::Exact);
  if (f.max_iters >= 0) cfg.max_iterations = static_cast<uint64_t>(f.max_iters);
  if (!f.lambda.empty()) cfg.lambda_guess = sird::Scalar::parse(f.lambda, sird::Mode::Exact);
  cfg.validate();
  return cfg;
}

json config_echo(const DetectFlags& f) {
  json j{{"gamma", f.gamma}, {"mode", f.mode}};
  if (f.mode == "float") j["precision"] = f.precision;
  if (!f.norm_bound.empty()) j["norm_bound"] = f.norm_bound;
  if (f.max_iters >= 0) j["max_iters"] = f.max_iters;
  if (!f.lambda.empty()) j["lambda"] = f.lambda;
  return j;
}

int emit(const json& report) {
  std::cout << report.dump() << "\n";
  return kExitOk;
}

int run_detect(const std::string& input_path, const DetectFlags& flags) {
  Timer timer;
  sird::DetectionConfig cfg = build_config(flags);
  sird::Mat x = sird::vectors_from_json(read_json_file(input_path), sird::Mode::Exact, 64);
  sird::DetectionOutcome out = sird::detect(x, cfg);

  json report{{"command", "detect"}, {"config", config_echo(flags)}};
  report["iterations"] = out.iterations;
  report["best_bound"] = out.bound_decimal(24);
  report["wall_time_ms"] = timer.ms();
  if (out.kind == sird::OutcomeKind::Relation) {
    bool ok = sird::verify_relation(x, out.relation, cfg.policy());
    report["outcome"] = json{{"type", "relation"},
                             {"relation", sird::relation_to_json(out.relation)},
                             {"source", out.source == sird::RelationSource::DiagonalZero
                                            ? "diagonal-zero"
                                            : "zero-column"},
                             {"verified", ok}};
    return emit(report);
  }
  report["outcome"] =
      json{{"type", out.kind == sird::OutcomeKind::BoundExceeded ? "bound-exceeded"
                                                                 : "iteration-cap-reached"}};
  emit(report);
  return kExitNotFound;
}

int run_minpoly(const std::string& value, unsigned degree, const std::string& height,
                const std::string& epsilon, long precision) {
  Timer timer;
  sird::MinPolyQuery q;
  q.approx = sird::parse_complex(value);
  q.degree_bound = degree;
  if (mpz_set_str(q.height_bound.get_mpz_t(), height.c_str(), 10) != 0)
    throw sird::Error(sird::Errc::ParseError, "--height must be an integer");
  if (!epsilon.empty()) q.epsilon = sird::parse_rational(epsilon);
  sird::MinPolyOptions opts;
  if (precision > 0) opts.precision = static_cast<mpfr_prec_t>(precision);

  json report{{"command", "minpoly"},
              {"config",
               {{"value", value},
                {"degree", degree},
                {"height", height},
                {"epsilon", epsilon.empty() ? "default" : epsilon}}}};
  try {
    sird::CertifiedResult r = sird::find_minimal_polynomial(q, opts);
    report["outcome"] = json{{"type", "polynomial"},
                             {"poly", sird::poly_to_json(r.poly)},
                             {"pretty", r.poly.to_string()},
                             {"certified", r.certified}};
    report["iterations"] = r.iterations_total;
    report["precision_bits"] = static_cast<long>(r.precision_bits);
    report["wall_time_ms"] = timer.ms();
    return emit(report);
  } catch (const sird::NoPolynomialError& e) {
    json rejected = json::array();
    for (const auto& rej : e.rejected())
      rejected.push_back(json{{"degree_tried", rej.degree_tried},
                              {"poly", sird::poly_to_json(rej.poly)},
                              {"height", rej.poly.height().get_str()}});
    report["outcome"] = json{{"type", "no-polynomial"},
                             {"detail", e.what()},
                             {"rejected", std::move(rejected)}};
    report["wall_time_ms"] = timer.ms();
    emit(report);
    return kExitNotFound;
  }
}

int run_factor(const std::string& poly_path, long precision) {
  Timer timer;
  sird::IntPolynomial f = sird::poly_from_json(read_json_file(poly_path));
  sird::FactorOptions opts;
  if (precision > 0) opts.precision = static_cast<mpfr_prec_t>(precision);

  json report{{"command", "factor"}, {"config", {{"poly", poly_path}}}};
  try {
    auto factors = sird::factor_via_minpoly(f, opts);
    sird::IntPolynomial product = sird::IntPolynomial::from_longs({1});
    json jf = json::array();
    for (const auto& p : factors) {
      jf.push_back(sird::poly_to_json(p));
      product = product.mul(p);
    }
    bool exact = product == f || product == f.negate();
    report["outcome"] =
        json{{"type", "factors"}, {"factors", std::move(jf)}, {"product_matches", exact}};
    report["wall_time_ms"] = timer.ms();
    return emit(report);
  } catch (const sird::Error& e) {
    if (e.code() != sird::Errc::FactorizationFailed) throw;
    report["outcome"] = json{{"type", "factorization-failed"}, {"detail", e.what()}};
    report["wall_time_ms"] = timer.ms();
    emit(report);
    return kExitNotFound;
  }
}

int run_bench(uint64_t seed, size_t n, size_t t, size_t trials, const DetectFlags& flags) {
  Timer timer;
  sird::DetectionConfig cfg = build_config(flags);

  json report{{"command", "bench"},
              {"config", config_echo(flags)},
              {"seed", seed},
              {"n", n},
              {"t", t},
              {"trials", trials}};

  // Built-in worked examples with their documented gamma values.
  struct BuiltIn {
    const char* name;
    std::vector<std::vector<long>> cols;
    const char* gamma;
  };
  const std::vector<BuiltIn> built_ins = {
      {"three-term", {{11, 27, 31}, {1, 2, 3}}, "1.154700538379261529"},
      {"three-term-g2", {{11, 27, 31}, {1, 2, 3}}, "2"},
      {"four-term-g1.16", {{86, 6, 8, 673}, {83, 5, 87, 91}}, "1.16"},
      {"four-term-g5", {{86, 6, 8, 673}, {83, 5, 87, 91}}, "5"},
  };
  json examples = json::array();
  for (const auto& b : built_ins) {
    std::vector<std::vector<sird::Scalar>> cols;
    for (const auto& c : b.cols) {
      std::vector<sird::Scalar> col;
      for (long v : c) col.emplace_back(v);
      cols.push_back(std::move(col));
    }
    sird::Mat x = sird::Mat::from_columns(cols);
    sird::DetectionConfig ecfg;
    ecfg.gamma = sird::Scalar::parse(b.gamma, sird::Mode::Exact);
    auto out = sird::detect(x, ecfg);
    examples.push_back(json{{"name", b.name},
                            {"gamma", b.gamma},
                            {"iterations", out.iterations},
                            {"relation", sird::relation_to_json(out.relation)},
                            {"verified", sird::verify_relation(x, out.relation,
                                                               sird::ZeroPolicy::exact())}});
  }
  report["examples"] = std::move(examples);

  sird::Rng rng(seed);
  json rows = json::array();
  size_t verified_count = 0;
  uint64_t total_iters = 0;
  for (size_t trial = 0; trial < trials; ++trial) {
    auto inst = sird::make_planted(rng, n, t, 10);
    uint64_t cap = sird::iteration_cap(
        n, t, cfg.gamma,
        sird::Scalar(sird::BigFloat::from_mpz(inst.m_norm_sq, 96).sqrt()) + sird::Scalar(1));
    auto out = sird::detect(inst.x, cfg);
    bool ok = out.kind == sird::OutcomeKind::Relation &&
              sird::verify_relation(inst.x, out.relation, sird::ZeroPolicy::exact());
    verified_count += ok ? 1 : 0;
    total_iters += out.iterations;
    rows.push_back(json{{"trial", trial},
                        {"planted", sird::relation_to_json(inst.m)},
                        {"relation", sird::relation_to_json(out.relation)},
                        {"iterations", out.iterations},
                        {"cap", cap},
                        {"within_cap", out.iterations <= cap},
                        {"verified", ok}});
  }
  report["rows"] = std::move(rows);
  report["verified"] = verified_count;

  int rc = emit(report);
  std::cerr << "bench: " << verified_count << "/" << trials << " verified, " << total_iters
            << " iterations total, " << timer.ms() << " ms\n";
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simultaneous integer relation detection and minimal polynomial reconstruction"};
  app.require_subcommand(1);

  DetectFlags flags;
  std::string input_path;
  auto add_detect_flags = [&](CLI::App* cmd) {
    cmd->add_option("--gamma", flags.gamma, "exchange weight, > 2/sqrt(3) (decimal)");
    cmd->add_option("--mode", flags.mode, "exact | float");
    cmd->add_option("--precision", flags.precision, "float working precision in bits");
    cmd->add_option("--norm-bound", flags.norm_bound, "stop once no relation below this norm exists");
    cmd->add_option("--max-iters", flags.max_iters, "iteration cap");
    cmd->add_option("--lambda", flags.lambda, "least-norm guess for the default iteration cap");
  };

  CLI::App* detect = app.add_subcommand("detect", "detect a simultaneous integer relation");
  detect->add_option("input", input_path, "JSON file with {\"vectors\": [[...], ...]}; - for stdin")
      ->required();
  add_detect_flags(detect);

  CLI::App* minpoly = app.add_subcommand("minpoly", "reconstruct a minimal polynomial");
  std::string value, height = "1", epsilon;
  unsigned degree = 1;
  long mp_precision = 0;
  minpoly->add_option("--value", value, "approximation, e.g. \"2.00000+1.73205i\"")->required();
  minpoly->add_option("--degree", degree, "degree bound")->required();
  minpoly->add_option("--height", height, "height bound")->required();
  minpoly->add_option("--epsilon", epsilon, "accuracy promise (defaults to the certified bound)");
  minpoly->add_option("--precision", mp_precision, "working precision override in bits");

  CLI::App* factor = app.add_subcommand("factor", "factor an integer polynomial");
  std::string poly_path;
  long f_precision = 0;
  factor->add_option("--poly", poly_path, "JSON file with {\"coeffs\": [...]} ascending")->required();
  factor->add_option("--precision", f_precision, "working precision override in bits");

  CLI::App* bench = app.add_subcommand("bench", "worked examples plus seeded planted instances");
  uint64_t seed = 1;
  size_t bn = 5, bt = 2, trials = 5;
  bench->add_option("--seed", seed, "PRNG seed");
  bench->add_option("--n", bn, "vector length");
  bench->add_option("--t", bt, "number of vectors");
  bench->add_option("--trials", trials, "number of planted instances");
  add_detect_flags(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    if (detect->parsed()) return run_detect(input_path, flags);
    if (minpoly->parsed()) return run_minpoly(value, degree, height, epsilon, mp_precision);
    if (factor->parsed()) return run_factor(poly_path, f_precision);
    return run_bench(seed, bn, bt, trials, flags);
  } catch (const sird::Error& e) {
    json err{{"error", sird::errc_name(e.code())}, {"detail", e.what()}};
    std::cout << err.dump() << "\n";
    switch (e.code()) {
      case sird::Errc::NoPolynomialFound:
      case sird::Errc::FactorizationFailed:
      case sird::Errc::PrecisionExhausted:
        return kExitNotFound;
      default:
        return kExitBadInput;
    }
  } catch (const json::exception& e) {
    json err{{"error", "ParseError"}, {"detail", e.what()}};
    std::cout << err.dump() << "\n";
    return kExitBadInput;
  }
}
