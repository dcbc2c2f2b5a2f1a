#include "dpbinom/cli.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpbinom/distributions.hpp"
#include "dpbinom/errors.hpp"
#include "dpbinom/intervals.hpp"
#include "dpbinom/nonparametric.hpp"
#include "dpbinom/one_sided.hpp"
#include "dpbinom/rng.hpp"
#include "dpbinom/simulation.hpp"
#include "dpbinom/two_sided.hpp"
#include "dpbinom/version.hpp"

namespace dpbinom::cli {

namespace {

using nlohmann::json;

int fail(std::ostream& err, const std::string& kind, const std::string& msg,
         int code) {
  const json j{{"error", {{"kind", kind}, {"message", msg}}}};
  err << j.dump() << "\n";
  return code;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw DomainError("bad list entry: " + item);
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (const double v : parse_double_list(csv)) {
    if (v != std::floor(v)) throw DomainError("expected integer list");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

// First line is treated as a header when it does not start with a number.
std::vector<std::vector<double>> read_csv_columns(const std::string& path,
                                                  size_t min_cols) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open input file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (first) {
      first = false;
      try {
        size_t pos = 0;
        std::stod(fields.at(0), &pos);
      } catch (const std::exception&) {
        continue;  // header row
      }
    }
    if (fields.size() < min_cols)
      throw DomainError("expected at least " + std::to_string(min_cols) +
                        " columns in " + path);
    std::vector<double> row;
    for (size_t c = 0; c < min_cols; ++c) {
      size_t pos = 0;
      double v;
      try {
        v = std::stod(fields[c], &pos);
      } catch (const std::exception&) {
        throw DomainError("non-numeric value '" + fields[c] + "' in " + path);
      }
      if (pos != fields[c].size())
        throw DomainError("non-numeric value '" + fields[c] + "' in " + path);
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError("no data rows in " + path);
  return rows;
}

json summary_to_json(const PrivateSummary& s, std::uint64_t seed) {
  return json{{"z", s.z},
              {"n", s.n},
              {"epsilon", s.privacy.epsilon},
              {"delta", s.privacy.delta},
              {"b", s.privacy.b},
              {"q", s.privacy.q},
              {"null_pmf_kind", "binomial"},
              {"seed", seed},
              {"version", kVersion}};
}

Alternative parse_alternative(const std::string& s) {
  if (s == "greater") return Alternative::Greater;
  if (s == "less") return Alternative::Less;
  if (s == "two-sided") return Alternative::TwoSided;
  throw DomainError("unknown alternative: " + s);
}

struct SummaryArgs {
  std::string path;
  double z = std::numeric_limits<double>::quiet_NaN();
  int x = -1;
  bool has_z = false;
  bool has_x = false;
  int n = -1;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

// Resolve the private statistic from one of: a stored summary file, an
// inline z, or a raw count that is privatized on the spot.
struct ResolvedSummary {
  double z = 0.0;
  int n = 0;
  PrivacyParams privacy;
  bool raw_mode = false;
  std::uint64_t seed = 0;
};

ResolvedSummary resolve_summary(const SummaryArgs& a, std::ostream& err) {
  const int sources =
      static_cast<int>(!a.path.empty()) + static_cast<int>(a.has_z) +
      static_cast<int>(a.has_x);
  if (sources != 1)
    throw DomainError(
        "provide exactly one of --summary, --z, or --x as the statistic");
  ResolvedSummary r;
  if (!a.path.empty()) {
    std::ifstream in(a.path);
    if (!in) throw DomainError("cannot open summary file: " + a.path);
    json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw DomainError(std::string("bad summary file: ") + e.what());
    }
    try {
      r.z = j.at("z").get<double>();
      r.n = j.at("n").get<int>();
      r.privacy = privacy_to_tulap(j.at("epsilon").get<double>(),
                                   j.at("delta").get<double>());
    } catch (const json::exception& e) {
      throw DomainError(std::string("summary file missing fields: ") +
                        e.what());
    }
    if (j.contains("null_pmf_kind") &&
        j.at("null_pmf_kind").get<std::string>() != "binomial")
      throw DomainError("summary does not carry a binomial statistic");
    return r;
  }
  if (a.n < 0) throw DomainError("--n is required with --z or --x");
  r.n = a.n;
  r.privacy = privacy_to_tulap(a.epsilon, a.delta);
  if (a.has_z) {
    r.z = a.z;
    return r;
  }
  if (!a.has_seed) throw DomainError("--seed is required with --x");
  err << "warning: privatizing a raw count in-process; the released decision "
         "consumes the privacy budget for this data\n";
  Rng rng(a.seed);
  r.z = privatize(a.x, a.n, r.privacy, rng).z;
  r.raw_mode = true;
  r.seed = a.seed;
  return r;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open output file: " + path);
  out << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Exact differentially private inference for a proportion"};
  app.require_subcommand(1);

  // privatize
  auto* c_priv = app.add_subcommand(
      "privatize", "Release a private version of a count statistic");
  int p_x = 0, p_n = 0;
  double p_eps = 0.0, p_delta = 0.0;
  std::uint64_t p_seed = 0;
  std::string p_out;
  bool p_force = false;
  c_priv->add_option("--x", p_x, "true count")->required();
  c_priv->add_option("--n", p_n, "sample size")->required();
  c_priv->add_option("--epsilon", p_eps, "privacy parameter")->required();
  c_priv->add_option("--delta", p_delta, "privacy parameter");
  c_priv->add_option("--seed", p_seed, "RNG seed")->required();
  c_priv->add_option("--out", p_out, "write the summary JSON here");
  c_priv->add_flag("--force", p_force, "overwrite an existing summary file");

  // shared statistic options for test / ci / confdist
  auto add_summary_opts = [](CLI::App* cmd, SummaryArgs& a, bool allow_raw) {
    cmd->add_option("--summary", a.path, "stored private summary JSON");
    cmd->add_option("--z", a.z, "private statistic value");
    if (allow_raw)
      cmd->add_option("--x", a.x, "raw count (privatized in-process)");
    cmd->add_option("--n", a.n, "sample size (with --z or --x)");
    cmd->add_option("--epsilon", a.epsilon, "privacy parameter");
    cmd->add_option("--delta", a.delta, "privacy parameter");
    cmd->add_option("--seed", a.seed, "RNG seed (with --x)");
  };
  auto fill_presence = [](CLI::App* cmd, SummaryArgs& a) {
    a.has_z = cmd->count("--z") > 0;
    a.has_x = cmd->get_option_no_throw("--x") != nullptr &&
              cmd->count("--x") > 0;
    a.has_seed = cmd->count("--seed") > 0;
  };

  auto* c_test = app.add_subcommand("test", "Hypothesis test on a summary");
  SummaryArgs t_sum;
  add_summary_opts(c_test, t_sum, true);
  double t_theta0 = 0.0, t_alpha = 0.05;
  std::string t_side = "greater";
  c_test->add_option("--theta0", t_theta0, "null value")->required();
  c_test
      ->add_option("--side", t_side,
                   "greater|less|bonferroni|umpu-approx|umau")
      ->check(CLI::IsMember(
          {"greater", "less", "bonferroni", "umpu-approx", "umau"}));
  c_test->add_option("--alpha", t_alpha, "test level");

  auto* c_ci = app.add_subcommand("ci", "Confidence interval from a summary");
  SummaryArgs i_sum;
  add_summary_opts(c_ci, i_sum, false);
  double i_alpha = 0.05;
  std::string i_kind;
  c_ci->add_option("--alpha", i_alpha, "one minus coverage");
  c_ci->add_option("--kind", i_kind, "lower|upper|bonferroni|approx|umau")
      ->required()
      ->check(CLI::IsMember({"lower", "upper", "bonferroni", "approx",
                             "umau"}));

  auto* c_cd = app.add_subcommand(
      "confdist", "Confidence distribution over the parameter");
  SummaryArgs d_sum;
  add_summary_opts(c_cd, d_sum, false);
  int d_grid = 101;
  std::string d_out;
  c_cd->add_option("--grid-size", d_grid, "number of grid points");
  c_cd->add_option("--out", d_out, "write the CSV here instead of stdout");

  auto* c_sign = app.add_subcommand(
      "sign-test", "Private sign test on paired CSV data");
  std::string s_input;
  double s_theta0 = 0.5, s_eps = 0.0, s_delta = 0.0;
  std::string s_alt = "two-sided";
  std::uint64_t s_seed = 0;
  c_sign->add_option("--input", s_input, "CSV with two numeric columns")
      ->required();
  c_sign->add_option("--theta0", s_theta0, "null success probability");
  c_sign->add_option("--epsilon", s_eps, "privacy parameter")->required();
  c_sign->add_option("--delta", s_delta, "privacy parameter");
  c_sign->add_option("--alternative", s_alt, "greater|less|two-sided")
      ->check(CLI::IsMember({"greater", "less", "two-sided"}));
  c_sign->add_option("--seed", s_seed, "RNG seed")->required();

  auto* c_med = app.add_subcommand(
      "median-test", "Private two-sample median test");
  std::string m_xs, m_ys;
  double m_eps = 0.0, m_delta = 0.0;
  std::string m_alt = "two-sided";
  std::uint64_t m_seed = 0;
  c_med->add_option("--xs", m_xs, "CSV with one numeric column")->required();
  c_med->add_option("--ys", m_ys, "CSV with one numeric column")->required();
  c_med->add_option("--epsilon", m_eps, "privacy parameter")->required();
  c_med->add_option("--delta", m_delta, "privacy parameter");
  c_med->add_option("--alternative", m_alt, "greater|less|two-sided")
      ->check(CLI::IsMember({"greater", "less", "two-sided"}));
  c_med->add_option("--seed", m_seed, "RNG seed")->required();

  auto* c_sim = app.add_subcommand("simulate", "Reproduce a study table");
  std::string f_figure;
  c_sim->add_option("--figure", f_figure, "1|2|power|widths")
      ->required()
      ->check(CLI::IsMember({"1", "2", "power", "widths"}));
  int f_n = -1;
  double f_theta0 = -1.0, f_truth = -1.0, f_eps = -1.0, f_delta = 0.0,
         f_alpha = 0.05;
  long long f_reps = -1;
  std::string f_ngrid, f_tgrid, f_out;
  std::uint64_t f_seed = 0;
  c_sim->add_option("--n", f_n, "sample size override");
  c_sim->add_option("--theta0", f_theta0, "null value override");
  c_sim->add_option("--truth", f_truth, "true parameter override");
  c_sim->add_option("--epsilon", f_eps, "privacy override");
  c_sim->add_option("--delta", f_delta, "privacy override");
  c_sim->add_option("--alpha", f_alpha, "level override");
  c_sim->add_option("--replicates", f_reps, "replicate count override");
  c_sim->add_option("--n-grid", f_ngrid, "comma-separated n values");
  c_sim->add_option("--theta-grid", f_tgrid, "comma-separated theta values");
  c_sim->add_option("--seed", f_seed, "RNG seed")->required();
  c_sim->add_option("--out", f_out, "write the CSV here instead of stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("dpbinom");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (app.got_subcommand(c_priv)) {
      const PrivacyParams priv = privacy_to_tulap(p_eps, p_delta);
      if (p_x < 0 || p_x > p_n)
        throw DomainError("count x must lie in [0, n]");
      if (!p_out.empty() && !p_force && std::filesystem::exists(p_out))
        throw DomainError("summary file already exists; a second release "
                          "would spend more privacy budget (use --force)");
      Rng rng(p_seed);
      const PrivateSummary s = privatize(p_x, p_n, priv, rng);
      const std::string text = summary_to_json(s, p_seed).dump(2) + "\n";
      if (!p_out.empty()) write_text_file(p_out, text);
      out << text;
      return 0;
    }

    if (app.got_subcommand(c_test)) {
      fill_presence(c_test, t_sum);
      const ResolvedSummary r = resolve_summary(t_sum, err);
      if (!(t_alpha > 0.0 && t_alpha < 1.0))
        throw DomainError("alpha must lie strictly inside (0, 1)");
      json j{{"theta0", t_theta0}, {"alpha", t_alpha}, {"side", t_side},
             {"z", r.z},           {"n", r.n},
             {"epsilon", r.privacy.epsilon}, {"delta", r.privacy.delta},
             {"version", kVersion}};
      if (r.raw_mode) j["seed"] = r.seed;
      double p = 1.0;
      if (t_side == "greater")
        p = ump_pvalue(r.z, r.n, t_theta0, r.privacy, Side::Greater);
      else if (t_side == "less")
        p = ump_pvalue(r.z, r.n, t_theta0, r.privacy, Side::Less);
      else if (t_side == "bonferroni")
        p = bonferroni_pvalue(r.z, r.n, t_theta0, r.privacy);
      else if (t_side == "umpu-approx")
        p = approx_pvalue(r.z, r.n, t_theta0, r.privacy);
      else {
        const UmauPvalue u = umau_pvalue(r.z, r.n, t_theta0, r.privacy);
        p = u.value;
        j["predicate_monotone"] = u.predicate_monotone;
        if (!u.predicate_monotone)
          err << "warning: rejection was not monotone in the level; the "
                 "reported p-value is the first crossing\n";
      }
      j["p_value"] = p;
      j["reject"] = p < t_alpha;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(c_ci)) {
      fill_presence(c_ci, i_sum);
      const ResolvedSummary r = resolve_summary(i_sum, err);
      if (!(i_alpha > 0.0 && i_alpha < 1.0))
        throw DomainError("alpha must lie strictly inside (0, 1)");
      IntervalResult res;
      if (i_kind == "lower")
        res = ci_lower(r.z, r.n, i_alpha, r.privacy);
      else if (i_kind == "upper")
        res = ci_upper(r.z, r.n, i_alpha, r.privacy);
      else if (i_kind == "bonferroni")
        res = ci_bonferroni(r.z, r.n, i_alpha, r.privacy);
      else if (i_kind == "approx")
        res = ci_approx_umpu(r.z, r.n, i_alpha, r.privacy);
      else
        res = ci_umau(r.z, r.n, i_alpha, r.privacy);
      const json j{{"lower", res.lower},
                   {"upper", res.upper},
                   {"coverage", res.coverage},
                   {"kind", i_kind},
                   {"z", r.z},
                   {"n", r.n},
                   {"epsilon", r.privacy.epsilon},
                   {"delta", r.privacy.delta},
                   {"alpha", i_alpha},
                   {"unimodality_warning", res.unimodality_warning},
                   {"version", kVersion}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(c_cd)) {
      fill_presence(c_cd, d_sum);
      const ResolvedSummary r = resolve_summary(d_sum, err);
      if (d_grid < 2) throw DomainError("grid size must be at least 2");
      std::vector<double> grid(static_cast<size_t>(d_grid));
      for (int i = 0; i < d_grid; ++i)
        grid[static_cast<size_t>(i)] =
            static_cast<double>(i) / (d_grid - 1);
      const CdResult cd = confidence_distribution(r.z, r.n, r.privacy, grid);
      std::ostringstream csv;
      csv << "theta,cd\n";
      csv.precision(17);
      for (size_t i = 0; i < cd.grid.size(); ++i)
        csv << cd.grid[i] << ',' << cd.values[i] << '\n';
      if (!d_out.empty())
        write_text_file(d_out, csv.str());
      else
        out << csv.str();
      return 0;
    }

    if (app.got_subcommand(c_sign)) {
      const auto rows = read_csv_columns(s_input, 2);
      PairedSample sample;
      for (const auto& row : rows) {
        sample.x.push_back(row[0]);
        sample.y.push_back(row[1]);
      }
      const PrivacyParams priv = privacy_to_tulap(s_eps, s_delta);
      Rng rng(s_seed);
      const NonparamResult res =
          sign_test(sample, s_theta0, priv, rng, parse_alternative(s_alt));
      const json j{{"z", res.z},
                   {"p_value", res.p_value},
                   {"n_effective", res.n_effective},
                   {"ties_dropped", res.ties_dropped},
                   {"alternative", s_alt},
                   {"theta0", s_theta0},
                   {"epsilon", s_eps},
                   {"delta", s_delta},
                   {"seed", s_seed},
                   {"version", kVersion}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(c_med)) {
      TwoSample sample;
      for (const auto& row : read_csv_columns(m_xs, 1))
        sample.x.push_back(row[0]);
      for (const auto& row : read_csv_columns(m_ys, 1))
        sample.y.push_back(row[0]);
      const PrivacyParams priv = privacy_to_tulap(m_eps, m_delta);
      Rng rng(m_seed);
      const NonparamResult res =
          median_test(sample, priv, rng, parse_alternative(m_alt));
      const json j{{"z", res.z},
                   {"p_value", res.p_value},
                   {"n", res.n_effective},
                   {"alternative", m_alt},
                   {"epsilon", m_eps},
                   {"delta", m_delta},
                   {"seed", m_seed},
                   {"version", kVersion}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(c_sim)) {
      std::string csv;
      json manifest{{"figure", f_figure},
                    {"seed", f_seed},
                    {"version", kVersion}};
      const auto maybe = [](double v, double fallback) {
        return v >= 0.0 ? v : fallback;
      };
      if (f_figure == "1") {
        PowerVsNConfig cfg;
        if (!f_ngrid.empty()) cfg.n_grid = parse_int_list(f_ngrid);
        cfg.theta0 = maybe(f_theta0, cfg.theta0);
        cfg.theta = maybe(f_truth, cfg.theta);
        cfg.epsilon = maybe(f_eps, cfg.epsilon);
        cfg.delta = f_delta;
        cfg.alpha = f_alpha;
        if (f_reps > 0) cfg.replicates = f_reps;
        cfg.seed = f_seed;
        manifest["n_grid"] = cfg.n_grid;
        manifest["theta0"] = cfg.theta0;
        manifest["theta"] = cfg.theta;
        manifest["epsilon"] = cfg.epsilon;
        manifest["delta"] = cfg.delta;
        manifest["alpha"] = cfg.alpha;
        manifest["replicates"] = cfg.replicates;
        csv = to_csv(power_vs_n(cfg));
      } else if (f_figure == "2") {
        Type1Config cfg;
        if (f_n > 0) cfg.n = f_n;
        if (!f_tgrid.empty()) cfg.theta0_grid = parse_double_list(f_tgrid);
        cfg.epsilon = maybe(f_eps, cfg.epsilon);
        cfg.delta = f_delta;
        cfg.alpha = f_alpha;
        if (f_reps > 0) cfg.replicates = f_reps;
        cfg.seed = f_seed;
        manifest["n"] = cfg.n;
        manifest["theta0_grid"] =
            cfg.theta0_grid.empty() ? json("default 0.02..0.98 by 0.02")
                                    : json(cfg.theta0_grid);
        manifest["epsilon"] = cfg.epsilon;
        manifest["delta"] = cfg.delta;
        manifest["alpha"] = cfg.alpha;
        manifest["replicates"] = cfg.replicates;
        csv = to_csv(type1_sweep(cfg));
      } else if (f_figure == "power") {
        TwoSidedPowerConfig cfg;
        if (f_n > 0) cfg.n = f_n;
        cfg.theta0 = maybe(f_theta0, cfg.theta0);
        cfg.theta = maybe(f_truth, cfg.theta);
        cfg.epsilon = maybe(f_eps, cfg.epsilon);
        cfg.delta = f_delta;
        cfg.alpha = f_alpha;
        if (!f_ngrid.empty()) cfg.n_grid = parse_int_list(f_ngrid);
        if (!f_tgrid.empty()) cfg.theta_grid = parse_double_list(f_tgrid);
        manifest["n"] = cfg.n;
        manifest["theta0"] = cfg.theta0;
        manifest["theta"] = cfg.theta;
        manifest["epsilon"] = cfg.epsilon;
        manifest["delta"] = cfg.delta;
        manifest["alpha"] = cfg.alpha;
        manifest["n_grid"] = cfg.n_grid;
        csv = to_csv(two_sided_power_sweep(cfg));
      } else {
        CiWidthConfig cfg;
        if (f_n > 0) cfg.n = f_n;
        cfg.theta = maybe(f_truth, cfg.theta);
        cfg.epsilon = maybe(f_eps, cfg.epsilon);
        cfg.delta = f_delta;
        cfg.alpha = f_alpha;
        if (f_reps > 0) cfg.replicates = f_reps;
        if (!f_ngrid.empty()) cfg.n_grid = parse_int_list(f_ngrid);
        if (!f_tgrid.empty()) cfg.theta_grid = parse_double_list(f_tgrid);
        cfg.seed = f_seed;
        manifest["n"] = cfg.n;
        manifest["theta"] = cfg.theta;
        manifest["epsilon"] = cfg.epsilon;
        manifest["delta"] = cfg.delta;
        manifest["alpha"] = cfg.alpha;
        manifest["replicates"] = cfg.replicates;
        manifest["n_grid"] = cfg.n_grid;
        csv = to_csv(ci_width_sweep(cfg));
      }
      if (!f_out.empty()) {
        write_text_file(f_out, csv);
        write_text_file(f_out + ".manifest.json", manifest.dump(2) + "\n");
      } else {
        out << csv;
        err << manifest.dump(2) << "\n";
      }
      return 0;
    }

    throw DomainError("no subcommand given");
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(err, "validation", e.what(), 2);
  } catch (const DomainError& e) {
    return fail(err, "validation", e.what(), 2);
  } catch (const ConvergenceError& e) {
    return fail(err, "convergence", e.what(), 3);
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what(), 3);
  }
}

}  // namespace dpbinom::cli
