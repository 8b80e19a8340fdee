#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bgc/constants.hpp"
#include "bgc/csv.hpp"
#include "bgc/spaces.hpp"
#include "bgc/verify.hpp"

namespace bgc::cli {

struct NamedSpace {
  std::string name;
  NormedSpace space;
};

/// Spaces addressable by name on the command line; also the default verify set.
inline std::vector<NamedSpace> builtin_spaces() {
  return {{"l1", l1()}, {"linf", linf()}, {"l2", l2()}, {"l3", lq(3.0)}, {"hexagon", regular_hexagon()}};
}

inline NormedSpace resolve_space(std::string_view text) {
  for (auto& s : builtin_spaces()) {
    if (s.name == text) return s.space;
  }
  return parse_space(text);
}

/// `start:stop:step`, both ends included; a point within 1e-12 of stop is snapped to it.
inline std::vector<double> parse_grid(std::string_view text) {
  const auto parts = bgc::detail::split_top(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("grid '" + std::string(text) + "' is not start:stop:step");
  const double start = bgc::detail::parse_double(parts[0], "grid start");
  const double stop = bgc::detail::parse_double(parts[1], "grid stop");
  const double step = bgc::detail::parse_double(parts[2], "grid step");
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive in '" + std::string(text) + "'");
  if (!(stop >= start)) throw std::invalid_argument("grid stop precedes start in '" + std::string(text) + "'");
  if ((stop - start) / step > 1e6) throw std::invalid_argument("grid '" + std::string(text) + "' has too many points");
  std::vector<double> out;
  for (long k = 0;; ++k) {
    double v = start + static_cast<double>(k) * step;
    if (v > stop + 1e-12) break;
    if (std::abs(v - stop) <= 1e-12) v = stop;
    out.push_back(v);
  }
  return out;
}

inline std::string witness_text(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) s += ',';
    s += csv::format_number(v[i]);
  }
  return s + ")";
}

inline nlohmann::json estimate_json(const NormedSpace& space, const ConstantRequest& req, const Estimate& e) {
  nlohmann::json params = nlohmann::json::object();
  if (req.alpha) params["alpha"] = *req.alpha;
  if (req.p) params["p"] = *req.p;
  if (req.q) params["q"] = *req.q;
  if (req.t) params["t"] = *req.t;
  return {
      {"space", space.descriptor()},
      {"constant", std::string(to_string(req.id))},
      {"params", params},
      {"strategy_request", req.strategy.to_string()},
      {"strategy", std::string(to_string(e.strategy))},
      {"exact", e.exact},
      {"sense", e.sense == Sense::Sup ? "sup" : "inf"},
      {"value", e.value},
      {"witness", {e.first.raw(), e.second.raw()}},
      {"evaluations", e.evaluations},
      {"metadata", e.metadata},
      {"notes", e.notes},
  };
}

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses and runs one invocation. Exit codes: 0 success, 1 verify failures or
/// runtime errors, 2 usage errors (unknown tokens, invalid parameters).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isosceles von Neumann-Jordan constants on finite-dimensional normed spaces", "bgc"};
  app.require_subcommand(1);

  std::vector<std::string> space_texts;
  std::string constant_text;
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<double> q;
  std::optional<double> t;
  std::string alpha_grid;
  std::string t_grid;
  std::string strategy_text = "auto";
  std::optional<std::uint64_t> seed;
  std::string format = "json";
  std::string out_path;
  std::string profile_text = "fast";
  std::vector<std::string> checks;
  bool timings = false;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--strategy", strategy_text, "exact | auto | grid2d:res=,refine= | multistart:starts=,steps=,seed=");
    c->add_option("--seed", seed, "seed for multistart and sampled checks");
    c->add_option("--format", format, "json | csv");
    c->add_option("--out", out_path, "output file (default stdout)");
  };
  auto add_params = [&](CLI::App* c) {
    c->add_option("--alpha", alpha, "alpha in [0, 1/2]");
    c->add_option("--p", p, "power p >= 1");
    c->add_option("--q", q, "second power q (comparisons)");
    c->add_option("--t", t, "t in [0, 1]");
  };

  CLI::App* compute = app.add_subcommand("compute", "compute one constant");
  compute->add_option("--space", space_texts, "space descriptor or builtin name")->required();
  compute->add_option("--constant", constant_text, "constant id")->required();
  add_params(compute);
  add_common(compute);

  CLI::App* sweep = app.add_subcommand("sweep", "sweep alpha or t over a grid");
  sweep->add_option("--space", space_texts, "space descriptor or builtin name")->required();
  sweep->add_option("--constant", constant_text, "constant id")->required();
  add_params(sweep);
  auto* ag = sweep->add_option("--alpha-grid", alpha_grid, "start:stop:step");
  auto* tg = sweep->add_option("--t-grid", t_grid, "start:stop:step");
  ag->excludes(tg);
  add_common(sweep);

  CLI::App* verify = app.add_subcommand("verify", "run the check catalog");
  verify->add_option("--space", space_texts, "space descriptors (repeatable; default: l1 linf l2 l3 hexagon)");
  verify->add_option("--check", checks, "restrict to these check ids (repeatable)");
  add_params(verify);
  verify->add_option("--profile", profile_text, "fast | thorough");
  verify->add_flag("--timings", timings, "include runtime_ms per check");
  add_common(verify);

  CLI::App* spaces = app.add_subcommand("spaces", "space catalog");
  spaces->require_subcommand(1);
  CLI::App* spaces_list = spaces->add_subcommand("list", "list builtin spaces");
  spaces_list->add_option("--format", format, "json | csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::ostringstream doc;
  int status = 0;
  try {
    if (format != "json" && format != "csv") throw UsageError("unknown format '" + format + "'");

    auto request_for = [&]() {
      ConstantRequest req;
      req.id = parse_constant_id(constant_text);
      req.alpha = alpha;
      req.p = p;
      req.q = q;
      req.t = t;
      req.strategy = Strategy::parse(strategy_text);
      if (seed) req.strategy.seed = *seed;
      return req;
    };
    auto single_space = [&]() {
      if (space_texts.size() != 1) throw UsageError("exactly one --space is required");
      return resolve_space(space_texts.front());
    };

    if (compute->parsed()) {
      const NormedSpace space = single_space();
      const ConstantRequest req = request_for();
      const Estimate e = bgc::compute(space, req);
      if (format == "json") {
        doc << estimate_json(space, req, e).dump(2) << "\n";
      } else {
        csv::write_csv(doc, {"constant", "space", "value", "witness1", "witness2", "strategy", "exact"},
                       {{std::string(to_string(req.id)), space.descriptor(), e.value, witness_text(e.first),
                         witness_text(e.second), std::string(to_string(e.strategy)), e.exact ? "true" : "false"}});
      }
    } else if (sweep->parsed()) {
      const NormedSpace space = single_space();
      ConstantRequest req = request_for();
      if (alpha_grid.empty() == t_grid.empty()) throw UsageError("sweep needs exactly one of --alpha-grid, --t-grid");
      const bool by_alpha = !alpha_grid.empty();
      const std::vector<double> grid = parse_grid(by_alpha ? alpha_grid : t_grid);
      const std::string axis = by_alpha ? "alpha" : "t";
      std::vector<csv::Row> rows;
      nlohmann::json jrows = nlohmann::json::array();
      for (double v : grid) {
        (by_alpha ? req.alpha : req.t) = v;
        const Estimate e = bgc::compute(space, req);
        rows.push_back({v, e.value, witness_text(e.first), witness_text(e.second), std::string(to_string(e.strategy)),
                        e.exact ? "true" : "false"});
        jrows.push_back({{axis, v},
                         {"value", e.value},
                         {"witness", {e.first.raw(), e.second.raw()}},
                         {"strategy", std::string(to_string(e.strategy))},
                         {"exact", e.exact}});
      }
      if (format == "json") {
        nlohmann::json j{{"space", space.descriptor()},
                         {"constant", std::string(to_string(req.id))},
                         {"strategy_request", req.strategy.to_string()},
                         {"axis", axis},
                         {"rows", jrows}};
        doc << j.dump(2) << "\n";
      } else {
        csv::write_csv(doc, {axis, "value", "witness1", "witness2", "strategy", "exact"}, rows);
      }
    } else if (verify->parsed()) {
      const verify::Profile profile = verify::parse_profile(profile_text);
      const std::uint64_t s = seed.value_or(7);
      std::vector<NormedSpace> xs;
      if (space_texts.empty()) {
        for (auto& n : builtin_spaces()) xs.push_back(n.space);
      } else {
        for (const auto& text : space_texts) xs.push_back(resolve_space(text));
      }
      const bool explicit_params = alpha || p || q || t;
      verify::SuiteReport report;
      if (explicit_params) {
        if (checks.empty()) throw UsageError("--alpha/--p/--q/--t need --check");
        verify::Params params;
        if (alpha) params["alpha"] = *alpha;
        if (p) params["p"] = *p;
        if (q) params["q"] = *q;
        if (t) params["t"] = *t;
        verify::Context ctx(profile, s);
        report.seed = s;
        report.profile = profile;
        for (const auto& x : xs) {
          report.spaces.push_back(x.descriptor());
          for (const auto& id : checks) report.checks.push_back(verify::run_check(id, x, params, ctx));
        }
        std::sort(report.checks.begin(), report.checks.end(), verify::result_less);
        for (const auto& r : report.checks) (r.passed ? report.passed : report.failed) += 1;
      } else {
        report = verify::run_suite(xs, s, profile, checks);
      }
      if (format == "json") {
        doc << verify::to_json(report, timings).dump(2) << "\n";
      } else {
        std::vector<std::string> header{"check_id", "space", "params", "passed", "slack_declared", "slack_used"};
        if (timings) header.push_back("runtime_ms");
        std::vector<csv::Row> rows;
        for (const auto& r : report.checks) {
          std::string ptext;
          for (const auto& [k, v] : r.params) {
            if (!ptext.empty()) ptext += ';';
            ptext += k + "=" + csv::format_number(v);
          }
          csv::Row row{r.check_id, r.space, ptext, r.passed ? "true" : "false", r.slack_declared, r.slack_used};
          if (timings) row.emplace_back(static_cast<double>(r.runtime_ms));
          rows.push_back(std::move(row));
        }
        csv::write_csv(doc, header, rows);
      }
      status = report.failed == 0 ? 0 : 1;
    } else if (spaces_list->parsed()) {
      if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& n : builtin_spaces()) {
          arr.push_back({{"name", n.name},
                         {"descriptor", n.space.descriptor()},
                         {"dim", n.space.dim()},
                         {"polyhedral", n.space.is_polyhedral()}});
        }
        doc << arr.dump(2) << "\n";
      } else {
        std::vector<csv::Row> rows;
        for (const auto& n : builtin_spaces()) {
          rows.push_back({n.name, n.space.descriptor(), static_cast<double>(n.space.dim()),
                          n.space.is_polyhedral() ? "true" : "false"});
        }
        csv::write_csv(doc, {"name", "descriptor", "dim", "polyhedral"}, rows);
      }
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (out_path.empty()) {
    out << doc.str();
  } else {
    std::ofstream file(out_path, std::ios::binary);
    file << doc.str();
    if (!file) {
      err << "error: cannot write '" << out_path << "'\n";
      return 1;
    }
  }
  return status;
}

}  // namespace bgc::cli
