// Command-line front end: reproducible experiments emitting CSV/JSON/SVG.
//
// Exit codes: 0 success, 2 invalid configuration, 3 verification failure,
// 4 numerical non-convergence.

#include "dimec/certify.hpp"
#include "dimec/ghz.hpp"
#include "dimec/jordan.hpp"
#include "dimec/mabk.hpp"
#include "dimec/protocol.hpp"
#include "dimec/qmath.hpp"
#include "dimec/tradeoff.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitVerificationFailure = 3;
constexpr int kExitNonConvergence = 4;

// Relative output paths land in $DIMEC_OUT_DIR when it is set.
std::string resolve_output(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("DIMEC_OUT_DIR");
  if (!dir || !*dir) return path;
  std::string base(dir);
  if (base.back() != '/') base += '/';
  return base + path;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const std::string full = resolve_output(path);
  std::ofstream out(full, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + full);
  out << content;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string rate_curve_svg(const std::vector<dimec::RateCurvePoint>& points) {
  const double width = 640, height = 480, margin = 50;
  double x_lo = points.front().omega_exp, x_hi = points.back().omega_exp;
  double y_lo = 0.0, y_hi = 0.0;
  for (const auto& p : points) {
    y_lo = std::min(y_lo, p.leading_order_rate);
    y_hi = std::max(y_hi, p.leading_order_rate);
  }
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  auto sx = [&](double x) { return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin); };
  auto sy = [&](double y) { return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  // axes
  svg += "<line x1=\"" + format_g(margin) + "\" y1=\"" + format_g(height - margin) + "\" x2=\"" +
         format_g(width - margin) + "\" y2=\"" + format_g(height - margin) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_g(margin) + "\" y1=\"" + format_g(margin) + "\" x2=\"" + format_g(margin) +
         "\" y2=\"" + format_g(height - margin) + "\" stroke=\"black\"/>\n";
  // dashed zero-rate line
  svg += "<line x1=\"" + format_g(margin) + "\" y1=\"" + format_g(sy(0.0)) + "\" x2=\"" +
         format_g(width - margin) + "\" y2=\"" + format_g(sy(0.0)) +
         "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  svg += "<polyline fill=\"none\" stroke=\"blue\" points=\"";
  for (const auto& p : points) svg += format_g(sx(p.omega_exp)) + "," + format_g(sy(p.leading_order_rate)) + " ";
  svg += "\"/>\n";
  svg += "<text x=\"" + format_g(width / 2) + "\" y=\"" + format_g(height - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">omega_exp</text>\n";
  svg += "<text x=\"14\" y=\"" + format_g(height / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 14 " + format_g(height / 2) +
         ")\">leading-order rate (bits/round)</text>\n";
  svg += "</svg>\n";
  return svg;
}

int cmd_rate_curve(int M, double gamma, long long n, double delta_est, double eps_smo, double eps_snd,
                   int grid, const std::string& out_path, const std::string& svg_path) {
  dimec::CertificationParams base;
  base.M = M;
  base.M_prime = M - 1;
  base.gamma = gamma;
  base.n = n;
  base.delta_est = delta_est;
  base.eps_smo = eps_smo;
  base.eps_snd = eps_snd;
  base.omega_exp = dimec::p_bounds(M).second;  // placeholder; swept below
  const auto points = dimec::rate_curve(base, grid);

  std::string csv = "omega_exp,leading_order_rate,rate_per_round,pt_star\n";
  for (const auto& p : points)
    csv += format_g(p.omega_exp) + "," + format_g(p.leading_order_rate) + "," + format_g(p.rate_per_round) +
           "," + format_g(p.pt_star) + "\n";
  emit(out_path, csv);
  if (!svg_path.empty()) emit(svg_path, rate_curve_svg(points));
  return 0;
}

int cmd_simulate(int M, long long n, double gamma, double visibility, double delta_est, double omega_exp,
                 long long trials, std::uint64_t seed, int protocol_version, double eps_smo, double eps_snd,
                 const std::string& out_path, const std::string& transcript_path) {
  dimec::CertificationParams params;
  params.M = M;
  params.M_prime = M - 1;
  params.n = n;
  params.gamma = gamma;
  params.delta_est = delta_est;
  params.eps_smo = eps_smo;
  params.eps_snd = eps_snd;
  params.omega_exp = omega_exp > 0.0 ? omega_exp : dimec::p_bounds(M).second;

  const dimec::SourceModel source = dimec::SourceModel::honest_werner(M, visibility);
  const dimec::DeviceModel device = dimec::DeviceModel::honest_optimal(M);

  const dimec::Transcript tr = protocol_version == 2
                                   ? dimec::run_protocol_with_projection(source, device, params, seed)
                                   : dimec::run_protocol(source, device, params, seed);
  if (!transcript_path.empty()) emit(transcript_path, dimec::transcript_to_jsonl(tr));

  nlohmann::json summary;
  summary["M"] = M;
  summary["n"] = n;
  summary["gamma"] = gamma;
  summary["visibility"] = visibility;
  summary["omega_exp"] = params.omega_exp;
  summary["delta_est"] = delta_est;
  summary["protocol"] = protocol_version;
  summary["seed"] = seed;
  summary["W_total"] = tr.W_total;
  summary["test_rounds"] = tr.test_rounds;
  summary["empirical_omega"] = tr.empirical_omega();
  summary["aborted"] = tr.aborted;
  if (trials > 1) {
    const dimec::AbortEstimate est =
        dimec::estimate_abort_probability(source, device, params, trials, seed);
    summary["abort_rate"] = est.rate;
    summary["abort_rate_wilson95"] = {est.lo, est.hi};
    summary["trials"] = trials;
    summary["completeness_bound"] = dimec::completeness_bound(n, delta_est);
  }
  emit(out_path, summary.dump(2) + "\n");
  return 0;
}

int cmd_verify(int M, int trials, std::uint64_t seed, const std::string& out_path) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-3.141592653589793, 3.141592653589793);

  double worst_reassembly = 0.0, worst_factorization = 0.0, worst_beta = 0.0;
  const dimec::CoeffTable table = dimec::unroll_coefficients(M);
  for (int t = 0; t < trials; ++t) {
    std::vector<dimec::ObservablePair> parties;
    for (int i = 0; i < M; ++i)
      parties.emplace_back(dimec::equatorial_observable(angle(rng)), dimec::equatorial_observable(angle(rng)));
    const dimec::Mat recursive = dimec::mabk_operator(parties);
    const dimec::Mat assembled = dimec::assemble_from_coefficients(table, parties);
    worst_reassembly = std::max(worst_reassembly, (recursive - assembled).norm());
    for (int m = 1; m <= M - 1; ++m)
      worst_factorization =
          std::max(worst_factorization, dimec::verify_bipartition_factorization(M, m, parties));
    // Tsirelson-type cap via the spectral radius of the normalized operator.
    Eigen::SelfAdjointEigenSolver<dimec::Mat> es(recursive);
    const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
    worst_beta = std::max(worst_beta, std::pow(2.0, (4.0 - M) / 2.0) * radius);
  }

  const bool ok = worst_reassembly < 1e-10 && worst_factorization < 1e-10 &&
                  worst_beta <= 2.0 * std::sqrt(2.0) + 1e-8;
  nlohmann::json report;
  report["M"] = M;
  report["trials"] = trials;
  report["seed"] = seed;
  report["max_reassembly_residual"] = worst_reassembly;
  report["max_factorization_residual"] = worst_factorization;
  report["max_beta_spectral"] = worst_beta;
  report["pass"] = ok;
  emit(out_path, report.dump(2) + "\n");
  return ok ? 0 : kExitVerificationFailure;
}

int cmd_tradeoff(int M, double gamma, double pt_ratio, int points, const std::string& out_path) {
  emit(out_path, dimec::tradeoff_csv(M, gamma, gamma * pt_ratio, points));
  return 0;
}

int cmd_entropy(const std::string& spec_path, const std::string& out_path) {
  std::ifstream in(spec_path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + spec_path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const dimec::GhzDiagonalSpec spec = dimec::GhzDiagonalSpec::from_json(text);
  const dimec::DensityMatrix rho = dimec::ghz_diagonal_state(spec);

  nlohmann::json report;
  report["M"] = spec.M;
  report["von_neumann_entropy"] = dimec::von_neumann_entropy(rho);
  nlohmann::json marginals = nlohmann::json::array();
  nlohmann::json coherent = nlohmann::json::array();
  for (int i = 0; i < spec.M; ++i) {
    marginals.push_back(dimec::von_neumann_entropy(dimec::partial_trace(rho, {i})));
    coherent.push_back(dimec::coherent_information(rho, {i}));
  }
  report["marginal_entropies"] = marginals;
  report["single_party_coherent_information"] = coherent;
  report["asymptotic_distill_rate"] = dimec::asymptotic_distill_rate(rho, spec.M);
  emit(out_path, report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Device-independent multipartite entanglement certification toolkit"};
  app.require_subcommand(1);

  // rate-curve
  auto* rc = app.add_subcommand("rate-curve", "Sweep the certified rate over omega_exp and emit CSV/SVG");
  int rc_m = 4;
  double rc_gamma = 0.5, rc_delta = 0.0, rc_eps_smo = 1e-2, rc_eps_snd = 1e-2;
  long long rc_n = 1000000000000LL;
  int rc_grid = 200;
  std::string rc_out, rc_svg;
  rc->add_option("--m", rc_m, "party count (>= 2)")->check(CLI::Range(2, 8));
  rc->add_option("--gamma", rc_gamma, "test probability, in (0,1)")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  rc->add_option("--n", rc_n, "round count")->check(CLI::PositiveNumber);
  rc->add_option("--delta-est", rc_delta, "confidence width, in [0,1)");
  rc->add_option("--eps-smo", rc_eps_smo, "smoothing parameter, in (0,1)");
  rc->add_option("--eps-snd", rc_eps_snd, "soundness parameter, in (0,1)");
  rc->add_option("--grid", rc_grid, "number of omega_exp grid points (>= 2)")->check(CLI::Range(2, 100000));
  rc->add_option("-o,--output", rc_out, "CSV output path (default: stdout)");
  rc->add_option("--svg", rc_svg, "optional SVG output path");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo protocol run; JSON summary and optional transcript");
  int sim_m = 3, sim_protocol = 1;
  long long sim_n = 1000, sim_trials = 1;
  double sim_gamma = 0.5, sim_vis = 1.0, sim_delta = 0.05, sim_omega = -1.0;
  double sim_eps_smo = 1e-4, sim_eps_snd = 1e-4;
  std::uint64_t sim_seed = 1;
  std::string sim_out, sim_transcript;
  sim->add_option("--m", sim_m, "party count")->check(CLI::Range(2, 6));
  sim->add_option("--n", sim_n, "rounds per trial")->check(CLI::PositiveNumber);
  sim->add_option("--gamma", sim_gamma, "test probability, in (0,1)")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  sim->add_option("--visibility", sim_vis, "Werner source visibility, in [0,1]")->check(CLI::Range(0.0, 1.0));
  sim->add_option("--delta-est", sim_delta, "confidence width, in [0,1)");
  sim->add_option("--omega-exp", sim_omega, "expected winning probability (default: parity maximum)");
  sim->add_option("--trials", sim_trials, "Monte Carlo trials for the abort-rate estimate");
  sim->add_option("--seed", sim_seed, "root seed (64-bit)");
  sim->add_option("--protocol", sim_protocol, "protocol variant: 1 or 2")->check(CLI::Range(1, 2));
  sim->add_option("--eps-smo", sim_eps_smo, "smoothing parameter, in (0,1)");
  sim->add_option("--eps-snd", sim_eps_snd, "soundness parameter, in (0,1)");
  sim->add_option("-o,--output", sim_out, "summary JSON path (default: stdout)");
  sim->add_option("--transcript", sim_transcript, "optional JSON-lines transcript path");

  // verify
  auto* ver = app.add_subcommand("verify", "Operator-identity verification report (JSON)");
  int ver_m = 4, ver_trials = 50;
  std::uint64_t ver_seed = 1;
  std::string ver_out;
  ver->add_option("--m", ver_m, "party count")->check(CLI::Range(2, 8));
  ver->add_option("--trials", ver_trials, "random observable sets")->check(CLI::PositiveNumber);
  ver->add_option("--seed", ver_seed, "root seed (64-bit)");
  ver->add_option("-o,--output", ver_out, "report JSON path (default: stdout)");

  // tradeoff
  auto* tra = app.add_subcommand("tradeoff", "Tradeoff-function CSV (p1, f, f_max, a, b)");
  int tra_m = 4, tra_points = 512;
  double tra_gamma = 0.5, tra_pt = 0.8;
  std::string tra_out;
  tra->add_option("--m", tra_m, "party count")->check(CLI::Range(2, 10));
  tra->add_option("--gamma", tra_gamma, "test probability, in (0,1)")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  tra->add_option("--pt-ratio", tra_pt, "tangent point as pt1/gamma, in (p_min, p_max)");
  tra->add_option("--points", tra_points, "grid points (>= 2)")->check(CLI::Range(2, 1000000));
  tra->add_option("-o,--output", tra_out, "CSV output path (default: stdout)");

  // entropy
  auto* ent = app.add_subcommand("entropy", "Entropy table for a GHZ-diagonal state spec (JSON in/out)");
  std::string ent_spec, ent_out;
  ent->add_option("--spec", ent_spec, "GHZ-diagonal state spec JSON file")->required();
  ent->add_option("-o,--output", ent_out, "report JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (rc->parsed())
      return cmd_rate_curve(rc_m, rc_gamma, rc_n, rc_delta, rc_eps_smo, rc_eps_snd, rc_grid, rc_out, rc_svg);
    if (sim->parsed())
      return cmd_simulate(sim_m, sim_n, sim_gamma, sim_vis, sim_delta, sim_omega, sim_trials, sim_seed,
                          sim_protocol, sim_eps_smo, sim_eps_snd, sim_out, sim_transcript);
    if (ver->parsed()) return cmd_verify(ver_m, ver_trials, ver_seed, ver_out);
    if (tra->parsed()) return cmd_tradeoff(tra_m, tra_gamma, tra_pt, tra_points, tra_out);
    if (ent->parsed()) return cmd_entropy(ent_spec, ent_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  }
  return kExitInvalidConfig;
}
