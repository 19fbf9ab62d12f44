#pragma once

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

namespace qheis {

using json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

struct Case {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  json metadata = json::object();
};

// pass <=> residual <= tolerance.  A non-finite residual is stored as the
// largest double so the document stays valid JSON, and always fails.
inline Case make_case(std::string name, double residual, double tolerance, json metadata = json::object()) {
  Case c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  c.metadata = metadata.is_object() ? std::move(metadata) : json::object();
  if (!std::isfinite(residual)) {
    c.metadata["nonfinite_residual"] = true;
    c.residual = std::numeric_limits<double>::max();
    c.pass = false;
  } else {
    c.residual = std::abs(residual);
    c.pass = c.residual <= tolerance;
  }
  return c;
}

inline Case failed_case(std::string name, double tolerance, const std::string& diagnostic) {
  Case c = make_case(std::move(name), std::numeric_limits<double>::infinity(), tolerance);
  c.metadata["error"] = diagnostic;
  return c;
}

struct Report {
  std::string suite;
  std::string version = kVersion;
  json params = json::object();
  std::vector<Case> cases;

  void sort_cases() {
    std::stable_sort(cases.begin(), cases.end(), [](const Case& a, const Case& b) { return a.name < b.name; });
  }

  bool all_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const Case& c) { return c.pass; });
  }
};

inline json to_json(const Report& r) {
  json cases = json::array();
  for (const Case& c : r.cases)
    cases.push_back({{"name", c.name},
                     {"residual", c.residual},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass},
                     {"metadata", c.metadata}});
  return {{"suite", r.suite}, {"version", r.version}, {"params", r.params}, {"cases", cases}};
}

inline Report report_from_json(const json& j) {
  Report r;
  r.suite = j.at("suite").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.params = j.at("params");
  for (const auto& c : j.at("cases")) {
    Case k;
    k.name = c.at("name").get<std::string>();
    k.residual = c.at("residual").get<double>();
    k.tolerance = c.at("tolerance").get<double>();
    k.pass = c.at("pass").get<bool>();
    k.metadata = c.at("metadata");
    r.cases.push_back(std::move(k));
  }
  return r;
}

inline std::string format_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("format_double: non-finite value");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

namespace detail {

inline void write_json(std::ostringstream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map order: sorted keys
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << inner;
        write_json(os, j[k], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float:
      if (std::isfinite(j.get<double>()))
        os << format_double(j.get<double>());
      else
        os << "null";
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

// sorted keys, 17 significant digits, cases in name order
inline std::string serialize(Report r) {
  r.sort_cases();
  std::ostringstream os;
  detail::write_json(os, to_json(r), 0);
  os << "\n";
  return os.str();
}

inline void emit_report(const Report& r, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_report: cannot open " + path);
  f << serialize(r);
  if (!f) throw std::runtime_error("emit_report: write failed for " + path);
}

}  // namespace qheis
