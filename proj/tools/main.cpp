// Command-line driver: verification campaigns, bowl geometry runs and cone
// samplers, with JSON/CSV outputs that embed their run manifest.
//
// Exit codes: 0 all checks pass, 1 usage/configuration error, 2 a
// mathematical property was violated.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smin/domains.hpp"
#include "smin/errors.hpp"
#include "smin/geometry.hpp"
#include "smin/properties.hpp"
#include "smin/report_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitViolation = 2;

struct VerifyOptions {
  std::string lemma;
  int n = 3;
  double alpha = 0.2;
  double beta = 0.36;
  double delta = 1e-4;
  std::vector<double> delta_grid;
  long long samples = 10000;
  std::uint64_t seed = 7;
  std::string out = "reports";
  int threads = 1;
};

json verify_params(const VerifyOptions& o) {
  json p{{"lemma", o.lemma},     {"n", o.n},
         {"alpha", o.alpha},     {"beta", o.beta},
         {"delta", o.delta},     {"samples", o.samples},
         {"seed", o.seed},       {"out", o.out},
         {"threads", o.threads}};
  if (!o.delta_grid.empty()) p["delta_grid"] = o.delta_grid;
  return p;
}

int run_verify(const VerifyOptions& o) {
  static const std::vector<std::string> kAll = {"lemma23", "lemma24", "cor25",
                                                "lemma26", "lemma27"};
  std::vector<std::string> wanted;
  if (o.lemma == "all") {
    wanted = kAll;
  } else if (std::find(kAll.begin(), kAll.end(), o.lemma) != kAll.end()) {
    wanted = {o.lemma};
  } else {
    std::cerr << "unknown campaign '" << o.lemma << "'\n";
    return kExitConfig;
  }

  const smin::DomainSpec spec{o.n, o.alpha, o.beta};
  const std::vector<double> grid =
      o.delta_grid.empty() ? std::vector<double>{o.delta} : o.delta_grid;

  long long violations = 0;
  const json manifest = smin::make_manifest("verify", verify_params(o));
  for (const auto& name : wanted) {
    smin::PropertyReport rep;
    if (name == "lemma23") {
      rep = smin::check_lemma23(o.delta, o.seed, o.samples, o.alpha, o.threads);
    } else if (name == "lemma24") {
      rep = smin::check_lemma24(spec, o.delta, o.seed, o.samples, o.threads);
    } else if (name == "cor25") {
      rep = smin::check_cor25(spec, o.delta, o.seed, o.samples, o.threads);
    } else if (name == "lemma26") {
      rep = smin::check_lemma26(spec, grid, o.seed, o.samples, o.threads);
    } else {
      rep = smin::check_lemma27(spec, o.delta, o.seed, o.samples, o.threads);
    }
    json doc = smin::report_to_json(rep);
    doc["manifest"] = manifest;
    smin::write_json_file(o.out + "/" + name + ".json", doc);
    std::cout << name << ": samples=" << rep.samples_tested
              << " violations=" << rep.violations << " worst_margin="
              << (rep.samples_tested ? smin::format_g17(rep.worst_margin)
                                     : std::string("n/a"))
              << "\n";
    violations += rep.violations;
  }
  return violations == 0 ? kExitOk : kExitViolation;
}

struct BowlOptions {
  int n = 3;
  double rmax = 30.0;
  double step = 0.01;
  double delta = 1e-4;
  std::string prefix = "bowl";
  // residual tolerances; <= 0 selects the step^2-scaled default
  double tol18 = 0.0;
  double tol21 = 0.0;
  double tol22 = 0.0;
};

int run_bowl(const BowlOptions& o) {
  const smin::BowlProfile prof = smin::solve_bowl(o.n, o.rmax, o.step);
  const smin::ApproxConfig cfg{o.n, o.delta};
  const auto samples = smin::operator_samples(prof, cfg);

  const json manifest = smin::make_manifest(
      "bowl", json{{"n", o.n},
                   {"rmax", o.rmax},
                   {"step", o.step},
                   {"delta", o.delta},
                   {"out_prefix", o.prefix},
                   {"tol18", o.tol18},
                   {"tol21", o.tol21},
                   {"tol22", o.tol22}});

  std::vector<std::vector<double>> rows;
  rows.reserve(prof.size());
  for (std::size_t i = 0; i < prof.size(); ++i) {
    rows.push_back({prof.r[i], prof.u[i], prof.u_p[i], prof.u_pp[i],
                    prof.kappa_rad[i], prof.kappa_ang[i], prof.H[i],
                    prof.nu_e[i], prof.tau_e[i]});
  }
  smin::write_csv(o.prefix + "_profile.csv", manifest,
                  {"r", "u", "u_p", "u_pp", "kappa_rad", "kappa_ang", "H",
                   "nu_e", "tau_e"},
                  rows);

  rows.clear();
  rows.reserve(samples.size());
  for (const auto& s : samples) {
    rows.push_back({s.r, s.mu_n, s.Q_delta, s.L_H, s.L_mu, s.L_Q, s.term24,
                    s.residual18, s.residual21, s.lhs22, s.rhs22});
  }
  smin::write_csv(o.prefix + "_operator.csv", manifest,
                  {"r", "mu_n", "Q_delta", "L_H", "L_mu", "L_Q", "term24",
                   "residual18", "residual21", "lhs22", "rhs22"},
                  rows);

  // sign/residual gates; default constants calibrated by the refinement
  // studies in the test suite.  residual18 is gated on r >= 0.05 only: the
  // radial 1/r weight makes the first nodes' truncation O((step/r)^2), so
  // the step^2 law holds on any fixed region away from the axis.
  const double h2 = o.step * o.step;
  const double tol18 = o.tol18 > 0.0 ? o.tol18 : 120.0 * h2;
  const double tol21 = o.tol21 > 0.0 ? o.tol21 : 10.0 * h2;
  const double tol22 = o.tol22 > 0.0 ? o.tol22 : 10.0 * h2;
  const double qcap = 1.0 / (o.n - 1);

  long long bad = 0;
  double max18 = 0.0, max21 = 0.0, max22 = 0.0;
  for (const auto& s : samples) {
    if (s.r >= 0.05) max18 = std::max(max18, std::abs(s.residual18));
    max21 = std::max(max21, std::abs(s.residual21));
    max22 = std::max(max22, s.lhs22);
    if (!(s.Q_delta > 0.0 && s.Q_delta <= qcap + 1e-12)) ++bad;
    if (!(s.term24 <= 1e-10)) ++bad;
    if (s.r >= 0.05 && std::abs(s.residual18) > tol18) ++bad;
    if (std::abs(s.residual21) > tol21) ++bad;
    if (s.lhs22 > tol22) ++bad;
  }
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (!(prof.kappa_rad[i] > 0.0 && prof.kappa_rad[i] < 1.0)) ++bad;
    if (!(prof.kappa_ang[i] > 0.0 && prof.kappa_ang[i] < 1.0)) ++bad;
    const double nt =
        prof.nu_e[i] * prof.nu_e[i] + prof.tau_e[i] * prof.tau_e[i];
    if (std::abs(nt - 1.0) > 1e-12) ++bad;
  }

  std::cout << "bowl: nodes=" << prof.size()
            << " translator_residual=" << smin::format_g17(prof.translator_residual)
            << " max|residual18|=" << smin::format_g17(max18)
            << " max|residual21|=" << smin::format_g17(max21)
            << " max lhs22=" << smin::format_g17(max22)
            << " failed_checks=" << bad << "\n";
  return bad == 0 ? kExitOk : kExitViolation;
}

struct SampleOptions {
  std::string domain = "A";
  int n = 3;
  double alpha = 0.2;
  double beta = 0.36;
  long long count = 100;
  std::uint64_t seed = 1;
  std::string out = "samples.csv";
};

int run_sample(const SampleOptions& o) {
  const smin::DomainSpec spec{o.n, o.alpha, o.beta};
  std::vector<smin::Vector> pts;
  if (o.domain == "A") {
    pts = smin::sample_A(spec, o.seed, o.count);
  } else if (o.domain == "Aminus") {
    pts = smin::sample_Aminus(spec, o.seed, o.count);
  } else {
    std::cerr << "unknown domain '" << o.domain << "' (use A or Aminus)\n";
    return kExitConfig;
  }

  const json manifest = smin::make_manifest(
      "sample", json{{"domain", o.domain},
                     {"n", o.n},
                     {"alpha", o.alpha},
                     {"beta", o.beta},
                     {"count", o.count},
                     {"seed", o.seed},
                     {"out", o.out}});
  std::vector<std::string> header(static_cast<std::size_t>(o.n));
  for (int i = 0; i < o.n; ++i) header[i] = "x" + std::to_string(i);
  std::vector<std::vector<double>> rows;
  rows.reserve(pts.size());
  for (const auto& p : pts) {
    rows.emplace_back(p.data(), p.data() + p.size());
  }
  smin::write_csv(o.out, manifest, header, rows);
  std::cout << "wrote " << pts.size() << " points to " << o.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smooth-min approximation and translator geometry toolkit"};
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand(
      "verify", "run verification campaigns and write JSON reports");
  verify
      ->add_option("lemma", vo.lemma,
                   "lemma23|lemma24|cor25|lemma26|lemma27|all")
      ->required();
  verify->add_option("--n", vo.n, "tuple dimension");
  verify->add_option("--alpha", vo.alpha, "negative-minimum fraction");
  verify->add_option("--beta", vo.beta, "pair-sum fraction");
  verify->add_option("--delta", vo.delta, "smoothing parameter");
  verify->add_option("--delta-grid", vo.delta_grid,
                     "decreasing delta grid (lemma26)");
  verify->add_option("--samples", vo.samples, "samples per campaign");
  verify->add_option("--seed", vo.seed, "RNG seed");
  verify->add_option("--out", vo.out, "report directory");
  verify->add_option("--threads", vo.threads, "worker threads");

  BowlOptions bo;
  auto* bowl = app.add_subcommand(
      "bowl", "integrate the rotational translator and check the operators");
  bowl->add_option("--n", bo.n, "surface dimension");
  bowl->add_option("--rmax", bo.rmax, "radial extent");
  bowl->add_option("--step", bo.step, "grid step");
  bowl->add_option("--delta", bo.delta, "smoothing parameter");
  bowl->add_option("--out-prefix", bo.prefix, "output CSV prefix");
  bowl->add_option("--tol18", bo.tol18, "residual18 gate (0 = step^2 default)");
  bowl->add_option("--tol21", bo.tol21, "residual21 gate (0 = step^2 default)");
  bowl->add_option("--tol22", bo.tol22, "lhs22 gate (0 = step^2 default)");

  SampleOptions so;
  auto* sample =
      app.add_subcommand("sample", "draw seeded points from A_n or A_n^-");
  sample->add_option("--domain", so.domain, "A or Aminus");
  sample->add_option("--n", so.n, "tuple dimension");
  sample->add_option("--alpha", so.alpha, "negative-minimum fraction");
  sample->add_option("--beta", so.beta, "pair-sum fraction");
  sample->add_option("--count", so.count, "points to draw");
  sample->add_option("--seed", so.seed, "RNG seed");
  sample->add_option("--out", so.out, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (verify->parsed()) return run_verify(vo);
    if (bowl->parsed()) return run_bowl(bo);
    if (sample->parsed()) return run_sample(so);
  } catch (const smin::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
