// qheis: command-line front end for the verification suites.
//
//   qheis suite <id> [--q <f>...] [--cutoff <int>] [--modes <int>] [--sign +|-]
//                    [--eps <f>...] [--tol <f>] [--jobs <int>] [--out <path>]
//                    [--config <path>] [--n <f>...] [--hbar2 <z>...] [--h <f>...]
//
// Exit status: 0 when every case passes, 1 when some case fails, 2 for a
// usage or configuration error, 3 when the report cannot be written.

#include "qheis/config.hpp"
#include "qheis/harness.hpp"
#include "qheis/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Residual checks for q-deformed Heisenberg algebras on truncated Fock spaces"};
  app.require_subcommand(1);
  CLI::App* suite = app.add_subcommand("suite", "run one verification suite and write its JSON report");
  suite->set_help_flag("--help", "print this help and exit");  // -h would clash with --h

  std::string id, sign, config_path;
  std::vector<std::string> hbar2;
  qheis::SuiteConfig flags;
  int cutoff = -1, modes = -1;
  double tol = 0.0;
  suite->add_option("id", id, "sl2-bose, sl2-fermi, slN, soN-orbital, qspecial, kz-scalar, kz-operator or braid")
      ->required();
  suite->add_option("--q", flags.q, "deformation parameters");
  auto* cutoff_opt = suite->add_option("--cutoff", cutoff, "maximum total occupation of bosonic spaces");
  auto* modes_opt = suite->add_option("--modes", modes, "number of modes N");
  suite->add_option("--sign", sign, "+ or -");
  suite->add_option("--eps", flags.eps, "regularisation distances for the KZ suites");
  auto* tol_opt = suite->add_option("--tol", tol, "replace the tolerance of every ordinary check");
  suite->add_option("--jobs", flags.jobs, "worker threads");
  suite->add_option("--out", flags.out, "report path (stdout when omitted)");
  suite->add_option("--config", config_path, "JSON file with the same keys as the long flags");
  suite->add_option("--n", flags.n, "number-operator eigenvalues for kz-scalar");
  suite->add_option("--hbar2", hbar2, "values of 2*hbar for kz-scalar, e.g. 0.05 or 0.1i");
  suite->add_option("--h", flags.h, "values of h = ln q for kz-operator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  qheis::Report report;
  qheis::SuiteConfig cfg;
  try {
    flags.suite = id;
    if (*cutoff_opt) flags.cutoff = cutoff;
    if (*modes_opt) flags.modes = modes;
    if (*tol_opt) flags.tol = tol;
    if (!sign.empty()) flags.sign = qheis::parse_sign(sign);
    for (const auto& z : hbar2) flags.hbar2.push_back(qheis::parse_complex(z));
    qheis::SuiteConfig file;
    if (!config_path.empty()) file = qheis::load_config_file(config_path);
    cfg = qheis::merge(file, flags);
    report = qheis::run_suite(cfg);
  } catch (const qheis::ConfigError& e) {
    std::cerr << "qheis: invalid configuration: " << e.what() << "\n" << suite->help();
    return 2;
  }

  try {
    if (cfg.out.empty())
      std::cout << qheis::serialize(report);
    else
      qheis::emit_report(report, cfg.out);
  } catch (const std::exception& e) {
    std::cerr << "qheis: " << e.what() << "\n";
    return 3;
  }

  int failed = 0;
  for (const auto& c : report.cases)
    if (!c.pass) {
      ++failed;
      std::cerr << "FAIL " << c.name << " residual=" << qheis::format_double(c.residual)
                << " tolerance=" << qheis::format_double(c.tolerance) << "\n";
    }
  std::cerr << report.suite << ": " << report.cases.size() - failed << "/" << report.cases.size() << " cases pass\n";
  return failed == 0 ? 0 : 1;
}
