#pragma once

#include "qheis/fock.hpp"
#include "qheis/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qheis {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const std::array<const char*, 8> kSuites = {"braid",     "kz-operator", "kz-scalar", "qspecial",
                                                   "sl2-bose",  "sl2-fermi",   "slN",       "soN-orbital"};

inline bool known_suite(const std::string& s) {
  return std::find_if(kSuites.begin(), kSuites.end(), [&](const char* k) { return s == k; }) != kSuites.end();
}

// Everything a suite run depends on.  Unset optionals and empty lists mean
// "use the suite default"; resolve() fills them in.
struct SuiteConfig {
  std::string suite;
  std::vector<double> q;
  std::optional<int> cutoff;
  std::optional<int> modes;
  std::optional<int> sign;  // +1 or -1
  std::vector<double> eps;
  std::optional<double> tol;
  int jobs = 1;
  std::string out;
  std::vector<double> n;
  std::vector<cplx> hbar2;
  std::vector<double> h;
};

// shortest round-trip text for a double, used in case names
inline std::string short_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline std::string format_complex(cplx z) {
  if (z.imag() == 0.0) return short_double(z.real());
  if (z.real() == 0.0) return short_double(z.imag()) + "i";
  std::string im = short_double(z.imag());
  return short_double(z.real()) + (z.imag() < 0 ? "" : "+") + im + "i";
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v)) throw ConfigError("not a number: '" + s + "'");
  return v;
}

// "0.1", "0.1i", "-0.05i", "0.02+0.1i", "i"
inline cplx parse_complex(const std::string& s) {
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i') return parse_double(s);
  std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not the leading one and not an exponent sign
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  auto imag_of = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t);
  };
  if (cut == std::string::npos) return cplx(0.0, imag_of(body));
  return cplx(parse_double(body.substr(0, cut)), imag_of(body.substr(cut)));
}

inline int parse_sign(const std::string& s) {
  if (s == "+" || s == "+1" || s == "1") return 1;
  if (s == "-" || s == "-1") return -1;
  throw ConfigError("sign must be '+' or '-', got '" + s + "'");
}

// Reads a JSON config file.  Keys mirror the long command-line flags.
inline SuiteConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  SuiteConfig c;
  auto nums = [&](const json& v, const char* key) {
    std::vector<double> out;
    auto one = [&](const json& x) {
      if (!x.is_number()) throw ConfigError(std::string("'") + key + "' must hold numbers");
      out.push_back(x.get<double>());
    };
    if (v.is_array())
      for (const auto& x : v) one(x);
    else
      one(v);
    return out;
  };
  auto integer = [](const json& v, const char* key) {
    if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    return v.get<int>();
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "suite") {
        if (!v.is_string()) throw ConfigError("'suite' must be a string");
        c.suite = v.get<std::string>();
      } else if (key == "q") {
        c.q = nums(v, "q");
      } else if (key == "cutoff") {
        c.cutoff = integer(v, "cutoff");
      } else if (key == "modes") {
        c.modes = integer(v, "modes");
      } else if (key == "sign") {
        if (v.is_string()) c.sign = parse_sign(v.get<std::string>());
        else c.sign = parse_sign(std::to_string(integer(v, "sign")));
      } else if (key == "eps") {
        c.eps = nums(v, "eps");
      } else if (key == "tol") {
        c.tol = nums(v, "tol").at(0);
      } else if (key == "jobs") {
        c.jobs = integer(v, "jobs");
      } else if (key == "out") {
        if (!v.is_string()) throw ConfigError("'out' must be a string");
        c.out = v.get<std::string>();
      } else if (key == "n") {
        c.n = nums(v, "n");
      } else if (key == "h") {
        c.h = nums(v, "h");
      } else if (key == "hbar2") {
        json arr = v.is_array() ? v : json::array({v});
        for (const auto& x : arr) {
          if (x.is_string()) c.hbar2.push_back(parse_complex(x.get<std::string>()));
          else if (x.is_number()) c.hbar2.push_back(x.get<double>());
          else throw ConfigError("'hbar2' entries must be numbers or strings like \"0.1i\"");
        }
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

// command-line values win over file values, field by field
inline SuiteConfig merge(const SuiteConfig& file, const SuiteConfig& flags) {
  SuiteConfig c = file;
  if (!flags.suite.empty()) c.suite = flags.suite;
  if (!flags.q.empty()) c.q = flags.q;
  if (flags.cutoff) c.cutoff = flags.cutoff;
  if (flags.modes) c.modes = flags.modes;
  if (flags.sign) c.sign = flags.sign;
  if (!flags.eps.empty()) c.eps = flags.eps;
  if (flags.tol) c.tol = flags.tol;
  if (flags.jobs != 1) c.jobs = flags.jobs;
  if (!flags.out.empty()) c.out = flags.out;
  if (!flags.n.empty()) c.n = flags.n;
  if (!flags.hbar2.empty()) c.hbar2 = flags.hbar2;
  if (!flags.h.empty()) c.h = flags.h;
  return c;
}

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

inline void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) require(std::isfinite(x), std::string(what) + " must be finite");
}

}  // namespace detail

// Fills in suite defaults and checks every field.  Throws ConfigError.
inline SuiteConfig resolve(SuiteConfig c) {
  using detail::require;
  require(!c.suite.empty(), "no suite given");
  require(known_suite(c.suite), "unknown suite '" + c.suite + "'");
  require(c.jobs >= 1 && c.jobs <= 256, "--jobs must lie in [1, 256]");
  if (c.tol) require(std::isfinite(*c.tol) && *c.tol > 0.0, "--tol must be positive");
  detail::require_finite(c.q, "q");
  detail::require_finite(c.eps, "eps");
  detail::require_finite(c.n, "n");
  detail::require_finite(c.h, "h");
  const std::string& s = c.suite;

  auto default_q = [&](std::vector<double> d) {
    if (c.q.empty()) c.q = std::move(d);
    for (double q : c.q) require(q > 0.0 && q <= 10.0, "q values must lie in (0, 10]");
  };
  auto unused = [&](bool has, const char* flag) {
    require(!has, std::string(flag) + " does not apply to suite " + s);
  };

  if (s == "sl2-bose" || s == "sl2-fermi") {
    default_q({0.7, 1.3});
    if (s == "sl2-bose") {
      if (!c.cutoff) c.cutoff = 8;
      require(*c.cutoff >= 3 && *c.cutoff <= 24, "--cutoff must lie in [3, 24] for sl2-bose");
    } else {
      unused(c.cutoff.has_value(), "--cutoff");
    }
    if (!c.modes) c.modes = 2;
    require(*c.modes == 2, "sl(2) suites have exactly 2 modes");
  } else if (s == "slN") {
    default_q({1.3});
    if (!c.modes) c.modes = 3;
    if (!c.cutoff) c.cutoff = 5;
    require(*c.modes >= 2 && *c.modes <= 4, "--modes must lie in [2, 4] for slN");
    require(*c.cutoff >= 2 && *c.cutoff <= 10, "--cutoff must lie in [2, 10] for slN");
  } else if (s == "soN-orbital") {
    default_q({0.7, 1.3});
    if (!c.modes) c.modes = 3;
    if (!c.cutoff) c.cutoff = 6;
    require(*c.modes >= 3 && *c.modes <= 5, "--modes must lie in [3, 5] for soN-orbital");
    require(*c.cutoff >= 4 && *c.cutoff <= 10, "--cutoff must lie in [4, 10] for soN-orbital");
  } else if (s == "qspecial") {
    default_q({0.5, 0.9, 1.1, 2.0});
  } else if (s == "braid") {
    default_q({0.7, 1.3});
  } else if (s == "kz-scalar") {
    unused(!c.q.empty(), "--q");
    if (c.n.empty()) c.n = {2.0, 3.0, 5.0};
    if (c.hbar2.empty()) c.hbar2 = {cplx(0.05), cplx(0.0, 0.1)};
    if (c.eps.empty()) c.eps = {1e-4, 1e-5, 1e-6};
    for (double n : c.n) require(n >= 1.0 && n <= 50.0, "--n must lie in [1, 50]");
    for (cplx e : c.hbar2)
      require(std::isfinite(e.real()) && std::isfinite(e.imag()) && std::abs(e) <= 0.2, "|hbar2| must not exceed 0.2");
    require(c.eps.size() == 3, "kz-scalar needs exactly three --eps values");
    for (double e : c.eps) require(e >= 1e-8 && e <= 1e-3, "--eps values must lie in [1e-8, 1e-3]");
    std::vector<double> sorted = c.eps;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "--eps values must be distinct");
  } else if (s == "kz-operator") {
    unused(!c.q.empty(), "--q");
    if (!c.modes) c.modes = 2;
    if (!c.cutoff) c.cutoff = 5;
    if (c.h.empty()) c.h = {0.1};
    if (c.eps.empty()) c.eps = {1e-8};
    if (!c.sign) c.sign = 1;
    require(*c.modes >= 2 && *c.modes <= 3, "--modes must be 2 or 3 for kz-operator");
    require(*c.cutoff >= 1 && *c.cutoff <= 6, "--cutoff must lie in [1, 6] for kz-operator");
    for (double h : c.h) require(h > 0.0 && h <= 0.5, "--h must lie in (0, 0.5]");
    require(c.eps.size() == 1, "kz-operator takes one --eps value (it is halved for the error estimate)");
    require(c.eps[0] >= 1e-10 && c.eps[0] <= 1e-3, "--eps must lie in [1e-10, 1e-3]");
  }
  if (s != "kz-scalar" && s != "kz-operator") {
    unused(!c.n.empty(), "--n");
    unused(!c.hbar2.empty(), "--hbar2");
    unused(!c.h.empty(), "--h");
    unused(!c.eps.empty(), "--eps");
    unused(c.sign.has_value(), "--sign");
  }
  if (s == "kz-scalar" || s == "qspecial" || s == "braid") {
    unused(c.modes.has_value(), "--modes");
    unused(c.cutoff.has_value(), "--cutoff");
  }
  return c;
}

// the resolved configuration as it appears in the report; jobs and the output
// path are left out so that they cannot change the document
inline json params_json(const SuiteConfig& c) {
  json p = json::object();
  if (!c.q.empty()) p["q"] = c.q;
  if (c.cutoff) p["cutoff"] = *c.cutoff;
  if (c.modes) p["modes"] = *c.modes;
  if (c.sign) p["sign"] = *c.sign > 0 ? "+" : "-";
  if (!c.eps.empty()) p["eps"] = c.eps;
  p["tol"] = c.tol ? json(*c.tol) : json(nullptr);
  if (!c.n.empty()) p["n"] = c.n;
  if (!c.h.empty()) p["h"] = c.h;
  if (!c.hbar2.empty()) {
    json arr = json::array();
    for (cplx z : c.hbar2) arr.push_back(format_complex(z));
    p["hbar2"] = arr;
  }
  return p;
}

}  // namespace qheis
