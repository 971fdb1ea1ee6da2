#pragma once

/// Command-line front end. `run` takes the argument vector and two streams so
/// tests can drive it without a process boundary.
///
/// Exit codes: 0 success, 1 usage/config/data error, 2 numerical failure or
/// I/O failure (partial outputs and the manifest are still written).

#include <chrono>
#include <ctime>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kropina/experiments.hpp"
#include "kropina/io.hpp"
#include "kropina/verification.hpp"

namespace kropina::cli {

inline int exit_code_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::usage:
    case ErrorKind::data:
    case ErrorKind::domain:
    case ErrorKind::excluded_heading: return 1;
    default: return 2;
  }
}

struct Overrides {
  std::string config;
  std::string out = "out";
  std::string metric, phi0, dphi, t_end, rel_tol;
  bool svg = false;
  // verify only
  std::string snapshot;
  bool write_snapshot = false;
};

namespace detail {

inline std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline double flag_real(const std::string& flag, const std::string& text) {
  try {
    return io::parse_real(text);
  } catch (const Error& e) {
    throw Error(ErrorKind::usage, "--" + flag + ": " + e.what());
  }
}

inline RunConfig build_config(Experiment e, const Overrides& o, std::vector<std::string>& warnings) {
  RunConfig c;
  c.experiment = e;
  if (!o.config.empty()) {
    std::string text;
    try {
      text = io::read_text(o.config);
    } catch (const Error& err) {
      throw Error(ErrorKind::usage, std::string("cannot read config: ") + err.what());
    }
    apply_config(io::parse_config(text, o.config), c);
  }
  if (!o.metric.empty()) c.metric = parse_metric_choice(o.metric);
  if (!o.phi0.empty()) c.phi0 = flag_real("phi0", o.phi0);
  if (!o.dphi.empty()) c.dphi = flag_real("dphi", o.dphi);
  if (!o.t_end.empty()) c.t_end = flag_real("t-end", o.t_end);
  if (!o.rel_tol.empty()) c.integrator.rel_tol = flag_real("rel-tol", o.rel_tol);
  if (o.svg) c.svg = true;
  return resolve(c, &warnings);
}

}  // namespace detail

/// Executes one subcommand; `argv[0]` is the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-optimal navigation paths under strong wind with space-dependent ship speed", "kropina"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Overrides o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "configuration file (INI sections)");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--metric", o.metric, "original | generalized | both");
    sub->add_option("--phi0", o.phi0, "initial heading, e.g. pi/4");
    sub->add_option("--dphi", o.dphi, "heading increment of a sweep, e.g. pi/8");
    sub->add_option("--t-end", o.t_end, "integration horizon");
    sub->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
    sub->add_flag("--svg", o.svg, "also write an SVG plot");
  };
  std::vector<std::pair<Experiment, CLI::App*>> subs;
  auto add = [&](Experiment e, const std::string& help) {
    auto* s = app.add_subcommand(std::string(to_string(e)), help);
    subs.push_back({e, s});
    return s;
  };
  common(add(Experiment::eval, "metric value and spray at the origin; --svg draws the wind field"));
  common(add(Experiment::geodesic, "single geodesic from heading phi0"));
  common(add(Experiment::fan, "geodesic fan over a heading sweep"));
  common(add(Experiment::isochrone, "time-t fronts of a heading sweep"));
  common(add(Experiment::reachable, "reachable region of a dense sweep (desk scale unless full_scale)"));
  common(add(Experiment::compare, "travel times to targets under both metrics"));
  auto* ver = add(Experiment::verify, "run the invariant suite and print a pass/fail table");
  ver->add_option("--out", o.out, "output directory")->capture_default_str();
  ver->add_option("--snapshot", o.snapshot, "endpoint snapshot CSV to regress against");
  ver->add_flag("--write-snapshot", o.write_snapshot, "record the snapshot instead of comparing");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  Experiment exp = Experiment::fan;
  for (const auto& [e, s] : subs)
    if (s->parsed()) exp = e;

  std::string command;
  for (const auto& a : args) command += (command.empty() ? "" : " ") + a;
  const auto t0 = std::chrono::steady_clock::now();
  const auto started = detail::utc_now();
  const std::filesystem::path dir(o.out);

  nlohmann::ordered_json manifest;
  manifest["tool"] = "kropina";
  manifest["version"] = kToolVersion;
  manifest["command"] = command;
  manifest["experiment"] = to_string(exp);
  manifest["started_at"] = started;

  int code = 0;
  std::string status = "ok";
  std::vector<std::string> warnings;
  RunSummary sum;
  std::string resolved_text;

  auto finish = [&]() {
    manifest["status"] = status;
    manifest["exit_code"] = code;
    manifest["outputs"] = sum.outputs;
    manifest["warnings"] = warnings;
    manifest["details"] = sum.details;
    manifest["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
      if (!resolved_text.empty()) io::write_text(dir / "resolved.ini", resolved_text);
      io::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const Error& e) {
      err << e.what() << '\n';
      if (code == 0) code = 2;
    }
    for (const auto& f : sum.outputs) out << (dir / f).string() << '\n';
    return code;
  };

  try {
    if (exp == Experiment::verify) {
      verify::Options vo;
      vo.work_dir = dir / "verify_artifacts";
      if (!o.snapshot.empty()) vo.snapshot = std::filesystem::path(o.snapshot);
      vo.write_snapshot = o.write_snapshot;
      const auto results = verify::run_all(vo);
      const auto table = verify::format_table(results);
      out << table;
      io::write_text(dir / "verify.txt", table);
      sum.outputs.push_back("verify.txt");
      auto rows = nlohmann::ordered_json::array();
      bool all = true;
      for (const auto& r : results) {
        rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                        {"seconds", r.seconds}});
        all = all && r.passed;
      }
      sum.details["criteria"] = rows;
      if (!all) {
        status = "failed";
        code = 2;
      }
      return finish();
    }

    const auto cfg = detail::build_config(exp, o, warnings);
    resolved_text = to_config_text(cfg);
    manifest["config"] = resolved_text;
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    sum = run_experiment(cfg, dir);
    for (const auto& w : sum.warnings) {
      err << "warning: " << w << '\n';
      warnings.push_back(w);
    }
    if (sum.numerical_failure) {
      status = "numerical-failure";
      manifest["error"] = sum.failure;
      err << "numerical failure: " << sum.failure << '\n';
      code = 2;
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    code = exit_code_of(e.kind());
    status = "error";
    manifest["error"] = e.what();
    manifest["error_kind"] = to_string(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = 2;
    status = "error";
    manifest["error"] = e.what();
  }
  return finish();
}

}  // namespace kropina::cli
