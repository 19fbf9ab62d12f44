#include <catch_amalgamated.hpp>

#include "qheis/harness.hpp"

#include <cstdio>
#include <fstream>
#include <limits>

using namespace qheis;

TEST_CASE("empty report", "[report]") {
  Report r;
  r.suite = "braid";
  std::string text = serialize(r);
  json j = json::parse(text);
  CHECK(j.at("cases").is_array());
  CHECK(j.at("cases").empty());
  CHECK(j.at("version") == kVersion);
  CHECK(text.back() == '\n');
}

TEST_CASE("serialisation is canonical", "[report]") {
  Report r;
  r.suite = "qspecial";
  r.params = {{"q", {0.1, 2.0}}, {"tol", nullptr}};
  r.cases.push_back(make_case("zeta", 0.1, 1.0, {{"b", 1}, {"a", 2}}));
  r.cases.push_back(make_case("alpha", 1.0 / 3.0, 1e-12));
  std::string text = serialize(r);
  // cases sorted by name, keys sorted
  CHECK(text.find("\"alpha\"") < text.find("\"zeta\""));
  CHECK(text.find("\"cases\"") < text.find("\"params\""));
  CHECK(text.find("\"params\"") < text.find("\"suite\""));
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  // 17 significant digits
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("0.10000000000000001") != std::string::npos);
  // round trip
  Report back = report_from_json(json::parse(text));
  CHECK(serialize(back) == text);
  REQUIRE(back.cases.size() == 2);
  CHECK(back.cases[0].residual == 1.0 / 3.0);
  CHECK_FALSE(back.cases[0].pass);
  CHECK(back.cases[1].pass);
  CHECK_THROWS(format_double(std::numeric_limits<double>::quiet_NaN()));
}

TEST_CASE("non-finite residuals fail and stay valid JSON", "[report]") {
  Case c = make_case("x", std::numeric_limits<double>::infinity(), 1.0);
  CHECK_FALSE(c.pass);
  CHECK(c.residual == std::numeric_limits<double>::max());
  CHECK(c.metadata.at("nonfinite_residual") == true);
  Case e = failed_case("y", 1.0, "boom");
  CHECK(e.metadata.at("error") == "boom");
  Report r;
  r.suite = "braid";
  r.cases = {c, e};
  CHECK_NOTHROW((void)json::parse(serialize(r)));
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("report file output", "[report]") {
  Report r;
  r.suite = "braid";
  r.cases.push_back(make_case("a", 0.0, 1.0));
  const std::string path = "qheis_test_report.json";
  emit_report(r, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == serialize(r));
  std::remove(path.c_str());
  CHECK_THROWS(emit_report(r, "/nonexistent-dir/x.json"));
}

TEST_CASE("complex and sign parsing", "[config]") {
  CHECK(parse_complex("0.1i") == cplx(0.0, 0.1));
  CHECK(parse_complex("0.05") == cplx(0.05, 0.0));
  CHECK(parse_complex("0.02-0.1i") == cplx(0.02, -0.1));
  CHECK(parse_complex("1e-2+3e-2i") == cplx(0.01, 0.03));
  CHECK(parse_complex("-i") == cplx(0.0, -1.0));
  CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
  CHECK_THROWS_AS(parse_double("1.5x"), ConfigError);
  CHECK(format_complex(cplx(0.0, 0.1)) == "0.1i");
  CHECK(format_complex(cplx(0.02, -0.1)) == "0.02-0.1i");
  CHECK(parse_sign("+") == 1);
  CHECK(parse_sign("-1") == -1);
  CHECK_THROWS_AS(parse_sign("up"), ConfigError);
}

TEST_CASE("configuration defaults and validation", "[config]") {
  SuiteConfig c;
  c.suite = "sl2-bose";
  SuiteConfig r = resolve(c);
  CHECK(r.q == std::vector<double>{0.7, 1.3});
  CHECK(*r.cutoff == 8);

  auto bad = [](SuiteConfig x) { CHECK_THROWS_AS(resolve(x), ConfigError); };
  bad(SuiteConfig{});
  SuiteConfig u;
  u.suite = "nope";
  bad(u);
  SuiteConfig cut = c;
  cut.cutoff = 2;
  bad(cut);
  SuiteConfig neg = c;
  neg.q = {-1.0};
  bad(neg);
  SuiteConfig jobs = c;
  jobs.jobs = 0;
  bad(jobs);
  SuiteConfig tol = c;
  tol.tol = -1.0;
  bad(tol);
  SuiteConfig eps = c;
  eps.eps = {1e-5};
  bad(eps);
  SuiteConfig kz;
  kz.suite = "kz-scalar";
  kz.eps = {1e-5, 1e-5, 1e-6};
  bad(kz);
  kz.eps = {1e-4, 1e-5};
  bad(kz);
  kz.eps = {};
  kz.hbar2 = {cplx(0.0, 0.3)};
  bad(kz);
  kz.hbar2 = {};
  kz.q = {1.1};
  bad(kz);
  SuiteConfig op;
  op.suite = "kz-operator";
  op.h = {0.0};
  bad(op);
}

TEST_CASE("config files", "[config]") {
  const std::string path = "qheis_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"suite": "kz-scalar", "n": [2], "hbar2": ["0.1i", 0.05], "sign": "-", "jobs": 2})";
  }
  SuiteConfig file = load_config_file(path);
  CHECK(file.suite == "kz-scalar");
  CHECK(file.hbar2 == std::vector<cplx>{cplx(0.0, 0.1), cplx(0.05, 0.0)});
  CHECK(*file.sign == -1);
  SuiteConfig flags;
  flags.n = {3.0};
  SuiteConfig m = merge(file, flags);
  CHECK(m.n == std::vector<double>{3.0});
  CHECK(m.jobs == 2);
  {
    std::ofstream f(path);
    f << R"({"suite": "braid", "colour": 3})";
  }
  CHECK_THROWS_AS(load_config_file(path), ConfigError);
  {
    std::ofstream f(path);
    f << "{not json";
  }
  CHECK_THROWS_AS(load_config_file(path), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("params exclude run-only settings", "[config]") {
  SuiteConfig c;
  c.suite = "braid";
  c.jobs = 3;
  c.out = "x.json";
  json p = params_json(resolve(c));
  CHECK_FALSE(p.contains("jobs"));
  CHECK_FALSE(p.contains("out"));
  CHECK(p.at("tol").is_null());
}

TEST_CASE("case sink conventions", "[harness]") {
  CaseSink sink("pre", 1e-3);
  sink.check("a", 1e-4, 1e-12);
  sink.count("b", 0.0);
  sink.control("c", 2.0, 0.01);
  sink.control("d", 0.0, 0.01);
  auto cases = sink.take();
  REQUIRE(cases.size() == 4);
  CHECK(cases[0].name == "pre/a");
  CHECK(cases[0].tolerance == 1e-3);
  CHECK(cases[0].pass);
  CHECK(cases[1].tolerance == 0.0);
  CHECK(cases[1].pass);
  CHECK(cases[2].tolerance == 1.0);
  CHECK(cases[2].residual == 0.005);
  CHECK(cases[2].pass);
  CHECK_FALSE(cases[3].pass);
}

TEST_CASE("task runner", "[harness]") {
  std::vector<Task> tasks;
  for (int k = 0; k < 6; ++k)
    tasks.push_back({"t" + std::to_string(k), [k] {
                       if (k == 3) throw std::runtime_error("broken");
                       return std::vector<Case>{make_case("t" + std::to_string(k), 0.0, 1.0)};
                     }});
  auto serial = run_tasks(tasks, 1);
  auto parallel = run_tasks(tasks, 4);
  REQUIRE(serial.size() == 6);
  CHECK(serial[3].name == "t3/error");
  CHECK_FALSE(serial[3].pass);
  CHECK(serial[3].metadata.at("error") == "broken");
  for (std::size_t k = 0; k < serial.size(); ++k) CHECK(serial[k].name == parallel[k].name);
}

TEST_CASE("suite runs are deterministic", "[harness]") {
  SuiteConfig c;
  c.suite = "braid";
  c.q = {0.8};
  Report a = run_suite(c);
  c.jobs = 4;
  Report b = run_suite(c);
  CHECK(serialize(a) == serialize(b));
  CHECK(a.all_pass());
  SuiteConfig strict;
  strict.suite = "qspecial";
  strict.tol = 1e-300;
  CHECK_FALSE(run_suite(strict).all_pass());
}
