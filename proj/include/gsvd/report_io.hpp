#pragma once

// CSV and JSON encodings shared by the command-line tool and its tests.

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <string>
#include <variant>

#include <json.hpp>

#include "gsvd/experiments.hpp"
#include "gsvd/version.hpp"

namespace gsvd::io {

using Json = nlohmann::ordered_json;

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

inline Json to_json(const ProblemDims& d) { return {{"m", d.m}, {"q", d.q}, {"n", d.n}}; }
inline Json to_json(const ReducedDims& d) {
  return {{"m_prime", d.m_prime}, {"p", d.p}, {"n_prime", d.n_prime}};
}
inline Json to_json(const ExperimentDims& d) {
  return std::visit([](const auto& v) { return to_json(v); }, d);
}

inline Json to_json(const LawParams& law) {
  return {{"m_prime", law.m_prime()}, {"p", law.p()}, {"n_prime", law.n_prime()},
          {"l", law.l()}, {"t1", law.t1()}, {"t2", law.t2()},
          {"t1_reciprocal", law.t1_reciprocal()}, {"log_M", law.log_M()}};
}

inline Json meta(std::string_view command, std::uint64_t seed, unsigned workers,
                 std::optional<double> wall_seconds = std::nullopt) {
  Json timing = {{"timestamp", utc_timestamp()}};
  if (wall_seconds) timing["wall_seconds"] = *wall_seconds;
  return {{"command", command}, {"version", kVersion}, {"seed", seed}, {"workers", workers},
          {"timing", timing}};
}

inline Json to_json(const CheckReport& c) {
  Json j = {{"name", c.name}};
  std::visit(
      [&j](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, KsReport>) {
          j["kind"] = r.n2 == 0 ? "ks_one_sample" : "ks_two_sample";
          j["statistic"] = r.statistic;
          j["critical_value"] = r.critical_value;
          j["n1"] = r.n1;
          j["n2"] = r.n2;
          j["alpha_level"] = r.alpha_level;
        } else if constexpr (std::is_same_v<T, MeanReport>) {
          j["kind"] = "mean";
          j["estimate"] = r.estimate;
          j["std_error"] = r.std_error;
          j["target"] = r.target;
          j["z_score"] = r.z_score;
          j["n"] = r.n;
        } else {
          j["kind"] = "normalization";
          j["value"] = r.value;
          j["target"] = r.target;
          j["tolerance"] = r.tolerance;
          j["log_M"] = r.log_M;
        }
        j["pass"] = r.pass;
      },
      c.result);
  return j;
}

/// Deterministic part of a verification report.
inline Json report_data(const VerificationReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(to_json(c));
  Json batches = Json::array();
  for (const auto& b : rep.batches) {
    batches.push_back({{"name", b.name}, {"sampler", to_string(b.sampler)}, {"seed", b.seed},
                       {"stream_index", b.stream_index}, {"count", b.count}, {"arity", b.arity},
                       {"failures", b.failures}});
  }
  Json data = {{"experiment", to_string(rep.experiment)}, {"dims", to_json(rep.dims)}};
  data["reduced_dims"] = rep.reduced ? to_json(*rep.reduced) : Json(nullptr);
  data["samples"] = rep.config.samples;
  data["thresholds"] = {{"alpha_level", rep.config.alpha_level},
                        {"ks_constant", ks_critical_constant(rep.config.alpha_level)},
                        {"max_abs_z", 3.0},
                        {"normalization_tolerance", rep.config.normalization_tolerance},
                        {"min_power_gap", rep.config.min_power_gap}};
  data["checks"] = checks;
  data["batches"] = batches;
  data["pass"] = rep.pass;
  data["note"] = "alpha and sample sizes are this tool's own calibration; the tests are asymptotic";
  return data;
}

inline Json to_json(const VerificationReport& rep) {
  return {{"meta", meta("verify", rep.config.seed, rep.config.workers, rep.wall_seconds)},
          {"data", report_data(rep)}};
}

inline std::string to_csv(const VerificationReport& rep) {
  std::string out = "experiment,check,kind,statistic,threshold,n1,n2,pass\n";
  for (const auto& c : rep.checks) {
    const Json j = to_json(c);
    std::string stat, threshold, n1, n2;
    std::visit(
        [&](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, KsReport>) {
            stat = format_double(r.statistic);
            threshold = format_double(r.critical_value);
            n1 = std::to_string(r.n1);
            n2 = std::to_string(r.n2);
          } else if constexpr (std::is_same_v<T, MeanReport>) {
            stat = format_double(r.z_score);
            threshold = "3";
            n1 = std::to_string(r.n);
            n2 = "0";
          } else {
            stat = format_double(r.value);
            threshold = format_double(r.tolerance);
            n1 = "0";
            n2 = "0";
          }
        },
        c.result);
    out += std::string(to_string(rep.experiment)) + "," + csv_field(c.name) + "," +
           j["kind"].get<std::string>() + "," + stat + "," + threshold + "," + n1 + "," + n2 + "," +
           (c.pass() ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace gsvd::io
