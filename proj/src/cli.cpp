#include "ssc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssc/code.hpp"
#include "ssc/errors.hpp"
#include "ssc/verify.hpp"

namespace ssc::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string str(std::uint64_t v) { return std::to_string(v); }

Json rational(const mpq_class& q) {
  return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

std::string rational_text(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string quoted(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

EngineOptions engine_options(const RunConfig& cfg) {
  EngineOptions opts;
  opts.threads = std::max(1u, cfg.threads);
  return opts;
}

int cmd_count(const RunConfig& cfg, std::ostream& out) {
  const auto g = parse_group(cfg.group);
  const auto a = g.parse_element(cfg.target.value_or(""));
  const auto split = uniform_part_and_corrections(g, cfg.h, engine_options(cfg));
  const auto rank = g.rank(a);
  const mpz_class ordered = split.good_constant + split.corrections[rank];
  mpz_class subsets;
  mpz_divexact(subsets.get_mpz_t(), ordered.get_mpz_t(), factorial(cfg.h).get_mpz_t());

  if (cfg.format == Format::csv) {
    out << "group,h,a,subsets,ordered,baseline,delta\n";
    out << g.to_string() << ',' << cfg.h << ',' << quoted(g.format_element(a)) << ','
        << subsets.get_str() << ',' << ordered.get_str() << ','
        << (split.baseline ? split.baseline->get_str() : "") << ','
        << (split.baseline ? split.deviation[rank].get_str() : "") << '\n';
    return kOk;
  }
  Json j;
  j["command"] = "count";
  j["group"] = g.to_string();
  j["n"] = g.order().get_str();
  j["h"] = str(cfg.h);
  j["a"] = g.format_element(a);
  j["subsets"] = subsets.get_str();
  j["ordered"] = ordered.get_str();
  j["baseline"] = split.baseline ? Json(split.baseline->get_str()) : Json(nullptr);
  j["delta"] = split.baseline ? Json(split.deviation[rank].get_str()) : Json(nullptr);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_distribution(const RunConfig& cfg, std::ostream& out) {
  const auto g = parse_group(cfg.group);
  const auto opts = engine_options(cfg);
  const auto ordered = count_distinct_ordered_all(g, cfg.h, opts);
  const auto subsets = count_subsets_all(g, cfg.h, opts);
  const auto ext = extremes(subsets);
  const auto n = g.size();
  std::optional<mpz_class> baseline;
  if (cfg.h >= 1) baseline = falling_factorial(n, cfg.h) / mpz_class(g.order());
  const bool subsets_ok = subsets.total() == binomial(n, cfg.h);
  const bool ordered_ok = ordered.total() == falling_factorial(n, cfg.h);

  if (cfg.format == Format::csv) {
    out << "rank,element,subsets,ordered,delta\n";
    for (std::uint64_t r = 0; r < n; ++r) {
      out << r << ',' << quoted(g.format_element(g.unrank(r))) << ',' << subsets[r].get_str()
          << ',' << ordered[r].get_str() << ','
          << (baseline ? mpz_class(ordered[r] - *baseline).get_str() : "") << '\n';
    }
    out << "# m=" << ext.min.get_str() << " M=" << ext.max.get_str()
        << " ratio=" << rational_text(ext.ratio) << '\n';
    out << "# total_subsets=" << subsets.total().get_str()
        << " binomial_check=" << (subsets_ok ? "ok" : "FAILED")
        << " total_ordered=" << ordered.total().get_str()
        << " falling_factorial_check=" << (ordered_ok ? "ok" : "FAILED") << '\n';
    return kOk;
  }
  Json j;
  j["command"] = "distribution";
  j["group"] = g.to_string();
  j["n"] = g.order().get_str();
  j["h"] = str(cfg.h);
  j["baseline"] = baseline ? Json(baseline->get_str()) : Json(nullptr);
  j["extremes"] = {{"m", ext.min.get_str()},
                   {"M", ext.max.get_str()},
                   {"ratio", rational(ext.ratio)},
                   {"argmin", g.format_element(ext.argmin)},
                   {"argmax", g.format_element(ext.argmax)}};
  j["totals"] = {{"subsets", subsets.total().get_str()},
                 {"binomial", binomial(n, cfg.h).get_str()},
                 {"subsets_ok", subsets_ok},
                 {"ordered", ordered.total().get_str()},
                 {"falling_factorial", falling_factorial(n, cfg.h).get_str()},
                 {"ordered_ok", ordered_ok}};
  Json rows = Json::array();
  for (std::uint64_t r = 0; r < n; ++r) {
    rows.push_back({{"rank", str(r)},
                    {"element", g.format_element(g.unrank(r))},
                    {"subsets", subsets[r].get_str()},
                    {"ordered", ordered[r].get_str()},
                    {"delta", baseline ? Json(mpz_class(ordered[r] - *baseline).get_str())
                                       : Json(nullptr)}});
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_verify(const RunConfig& cfg, std::optional<unsigned> h, std::ostream& out,
               const Hooks& hooks) {
  VerifyOptions opts;
  opts.max_order = cfg.max_order;
  opts.h = h;
  opts.brute_cap = cfg.brute_cap;
  opts.engine = engine_options(cfg);
  opts.perturb = hooks.perturb;
  const auto sum = verify_against_brute_force(opts);

  if (cfg.format == Format::csv) {
    out << "max_order,groups,cases,passed,mismatches,skipped\n";
    out << sum.max_order << ',' << sum.groups << ',' << sum.cases << ','
        << (sum.passed() ? "true" : "false") << ',' << sum.mismatches.size() << ','
        << sum.skipped.size() << '\n';
    for (const auto& m : sum.mismatches) {
      out << "# mismatch group=" << m.group << " h=" << m.h << " a=" << m.target
          << " formula=" << m.formula << " brute=" << m.brute << '\n';
    }
  } else {
    Json j;
    j["command"] = "verify";
    j["max_order"] = str(sum.max_order);
    j["groups"] = str(sum.groups);
    j["cases"] = str(sum.cases);
    j["passed"] = sum.passed();
    Json mism = Json::array();
    for (const auto& m : sum.mismatches) {
      mism.push_back({{"group", m.group},
                      {"h", str(m.h)},
                      {"a", m.target},
                      {"formula", m.formula},
                      {"brute", m.brute}});
    }
    j["mismatches"] = std::move(mism);
    Json skipped = Json::array();
    for (const auto& s : sum.skipped) {
      skipped.push_back({{"group", s.group}, {"h", str(s.h)}, {"reason", s.reason}});
    }
    j["skipped"] = std::move(skipped);
    out << j.dump(2) << '\n';
  }
  return sum.passed() ? kOk : kMismatch;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const auto g = parse_group(cfg.group);
  const auto rep = theorem2_report(g, cfg.h, engine_options(cfg));
  const auto n = g.size();

  if (cfg.format == Format::csv) {
    out << "rank,element,ordered,delta,within_bound\n";
    for (std::uint64_t r = 0; r < n; ++r) {
      out << r << ',' << quoted(g.format_element(g.unrank(r))) << ',' << rep.ordered[r].get_str()
          << ',' << rep.delta[r].get_str() << ',' << (rep.within_bound[r] ? "true" : "false")
          << '\n';
    }
    out << "# baseline=" << rep.baseline.get_str() << " envelope=" << rational_text(rep.envelope)
        << " max_ratio=" << rational_text(rep.max_ratio)
        << " all_within_bound=" << (rep.all_within_bound ? "true" : "false") << '\n';
    return kOk;
  }
  Json j;
  j["command"] = "bounds";
  j["group"] = rep.group;
  j["n"] = g.order().get_str();
  j["h"] = str(rep.h);
  j["baseline"] = rep.baseline.get_str();
  j["envelope"] = rational(rep.envelope);
  j["max_ratio"] = rational(rep.max_ratio);
  j["all_within_bound"] = rep.all_within_bound;
  Json rows = Json::array();
  for (std::uint64_t r = 0; r < n; ++r) {
    rows.push_back({{"rank", str(r)},
                    {"element", g.format_element(g.unrank(r))},
                    {"ordered", rep.ordered[r].get_str()},
                    {"delta", rep.delta[r].get_str()},
                    {"within_bound", static_cast<bool>(rep.within_bound[r])}});
  }
  j["targets"] = std::move(rows);
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_code(const RunConfig& cfg, std::ostream& out) {
  const auto g = parse_group(cfg.group);
  const auto a = g.parse_element(cfg.target.value_or(""));
  const auto code = build_code(g, cfg.h, a, cfg.brute_cap);
  const auto dist = min_pairwise_distance(code);
  const auto violations = code_violations(code);
  const auto text = export_code(code, g, a);

  if (cfg.out_path) {
    std::ofstream file(*cfg.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + *cfg.out_path + " for writing");
    file << text;
    if (!file.flush()) throw std::runtime_error("write to " + *cfg.out_path + " failed");
  }

  const std::string dist_text = dist ? std::to_string(*dist) : "no pairs";
  if (cfg.format == Format::csv) {
    out << "group,h,a,count,min_distance\n";
    out << g.to_string() << ',' << cfg.h << ',' << quoted(g.format_element(a)) << ','
        << code.codewords.size() << ',' << dist_text << '\n';
    if (!cfg.out_path) out << text;
    return violations.empty() ? kOk : kMismatch;
  }
  Json j;
  j["command"] = "code";
  j["group"] = g.to_string();
  j["n"] = str(code.length);
  j["h"] = str(code.weight);
  j["a"] = g.format_element(a);
  j["count"] = str(code.codewords.size());
  j["min_distance"] = dist_text;
  j["violations"] = violations;
  if (cfg.out_path) {
    j["out"] = *cfg.out_path;
  } else {
    Json words = Json::array();
    for (const auto& w : code.codewords) words.push_back(w.to_string());
    j["codewords"] = std::move(words);
  }
  out << j.dump(2) << '\n';
  return violations.empty() ? kOk : kMismatch;
}

}  // namespace

std::uint64_t default_brute_cap() {
  if (const char* env = std::getenv("SSC_BRUTE_CAP")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultBruteCap;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks) {
  CLI::App app{"Exact h-subset sum counts over finite abelian groups"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.brute_cap = default_brute_cap();
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "json";
  std::optional<unsigned> verify_h;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--brute-cap", cfg.brute_cap, "Maximum C(n,h) for enumeration")
        ->check(CLI::PositiveNumber);
  };

  auto* count = app.add_subcommand("count", "Subset and ordered counts for one target");
  count->add_option("--group", cfg.group, "Group spec, e.g. 4x2 or 2^3")->required();
  count->add_option("--h", cfg.h, "Subset size")->required();
  count->add_option("--a", cfg.target, "Target element, e.g. 3,1")->required();
  common(count);

  auto* distribution = app.add_subcommand("distribution", "Counts for every target");
  distribution->add_option("--group", cfg.group, "Group spec")->required();
  distribution->add_option("--h", cfg.h, "Subset size")->required();
  common(distribution);

  auto* verify = app.add_subcommand("verify", "Formula against brute force on small groups");
  verify->add_option("--max-order", cfg.max_order, "Largest group order")->check(CLI::PositiveNumber);
  verify->add_option("--h", verify_h, "Only this subset size");
  common(verify);

  auto* bounds = app.add_subcommand("bounds", "Deviation report against (3/4)^h envelope");
  bounds->add_option("--group", cfg.group, "Group spec")->required();
  bounds->add_option("--h", cfg.h, "Subset size")->required();
  common(bounds);

  auto* code = app.add_subcommand("code", "Export one subset-sum class as a binary code");
  code->add_option("--group", cfg.group, "Group spec")->required();
  code->add_option("--h", cfg.h, "Code weight")->required();
  code->add_option("--a", cfg.target, "Target element")->required();
  code->add_option("--out", cfg.out_path, "Write codewords here");
  common(code);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  cfg.format = format == "csv" ? Format::csv : Format::json;

  try {
    if (count->parsed()) cfg.command = Command::count;
    if (distribution->parsed()) cfg.command = Command::distribution;
    if (verify->parsed()) cfg.command = Command::verify;
    if (bounds->parsed()) cfg.command = Command::bounds;
    if (code->parsed()) cfg.command = Command::code;
    switch (cfg.command) {
      case Command::count:
        return cmd_count(cfg, out);
      case Command::distribution:
        return cmd_distribution(cfg, out);
      case Command::verify:
        return cmd_verify(cfg, verify_h, out, hooks);
      case Command::bounds:
        return cmd_bounds(cfg, out);
      case Command::code:
        return cmd_code(cfg, out);
    }
  } catch (const InternalError& e) {
    err << "internal consistency failure: " << e.what() << '\n';
    return kMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ssc::cli
