#include "coinweigh/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "coinweigh/analysis.hpp"
#include "coinweigh/channel.hpp"
#include "coinweigh/search.hpp"
#include "coinweigh/verify.hpp"

#include "CLI11.hpp"

namespace coinweigh {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes a finished report to --out or stdout. Output is built in full
// before any byte is written, so a failed run never leaves a partial file.
int deliver(const std::string& body, const std::string& out_path, std::ostream& out,
            std::ostream& err) {
  if (out_path.empty()) {
    out << body;
    return 0;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    err << "coinweigh: cannot open " << out_path << " for writing\n";
    return 2;
  }
  file << body;
  return 0;
}

struct FormatOptions {
  std::string format;
  std::string out_path;
};

void add_format_options(CLI::App* cmd, FormatOptions& opts, const std::string& default_format) {
  opts.format = default_format;
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opts.out_path, "Write output to a file instead of stdout");
}

struct RunArgs {
  std::uint32_t m = 0;
  std::vector<std::uint64_t> forged;
  std::optional<std::uint64_t> seed;
  FormatOptions fmt;
};

struct VerifyArgs {
  std::uint32_t m_max = 0;
  int threads = 0;
  bool cross_check = false;
  bool histogram = false;
  FormatOptions fmt;
};

struct MonteCarloArgs {
  std::uint32_t m = 0;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  FormatOptions fmt;
};

struct AnalyzeArgs {
  int m_min = 2;
  int m_max = 0;
  std::optional<std::uint64_t> mc_trials;
  std::optional<std::uint64_t> mc_seed;
  int threads = 0;
  FormatOptions fmt;
};

struct ChannelSimArgs {
  std::uint32_t l = 0;
  std::uint64_t m1 = 0, m2 = 0, m3 = 0;
  FormatOptions fmt;
};

struct ChannelVerifyArgs {
  std::uint32_t l_max = 0;
  FormatOptions fmt;
};

int do_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  if (args.forged.empty() == !args.seed.has_value()) {
    err << "coinweigh run: give exactly one of --forged or --seed\n";
    return 2;
  }
  std::array<std::uint64_t, 3> forged;
  if (args.seed) {
    forged = sample_placement(args.m, *args.seed, 0);
  } else {
    if (args.forged.size() != 3) {
      err << "coinweigh run: --forged needs exactly three indices\n";
      return 2;
    }
    std::copy(args.forged.begin(), args.forged.end(), forged.begin());
  }
  ScaleOracle oracle(ProblemInstance(args.m, forged));
  SearchTrace trace = search(oracle);
  return deliver(to_json(trace).dump(2) + "\n", args.fmt.out_path, out, err);
}

int do_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<SweepReport> reports;
  for (std::uint32_t m = 2; m <= args.m_max; ++m)
    reports.push_back(exhaustive_verify(m, SweepOptions{args.threads, args.cross_check}));

  std::uint64_t failures = 0;
  for (const SweepReport& r : reports) failures += r.failures.size();

  std::string body;
  if (args.fmt.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const SweepReport& r : reports) doc.push_back(to_json(r));
    body = doc.dump(2) + "\n";
  } else if (args.histogram) {
    std::ostringstream csv;
    csv << "m,total,count\n";
    for (const SweepReport& r : reports)
      for (const auto& [total, count] : r.histogram)
        csv << r.m << "," << total << "," << count << "\n";
    body = csv.str();
  } else {
    std::ostringstream csv;
    csv << "m,placements,failures,max_total,exact_mean\n";
    for (const SweepReport& r : reports)
      csv << r.m << "," << r.placements_checked << "," << r.failures.size() << "," << r.max_total
          << "," << fmt_double(r.exact_mean.to_double()) << "\n";
    body = csv.str();
  }
  int rc = deliver(body, args.fmt.out_path, out, err);
  if (rc != 0) return rc;
  if (failures != 0) {
    err << "coinweigh verify: " << failures << " failing placement(s)\n";
    return 1;
  }
  return 0;
}

int do_montecarlo(const MonteCarloArgs& args, std::ostream& out, std::ostream& err) {
  MonteCarloReport report = monte_carlo(args.m, args.trials, *args.seed, args.threads);
  std::string body;
  if (args.fmt.format == "json") {
    body = to_json(report).dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "m,trials,seed,mean,stddev,stderr\n";
    csv << report.m << "," << report.trials << "," << report.seed << ","
        << fmt_double(report.mean) << "," << fmt_double(report.stddev) << ","
        << fmt_double(report.std_error) << "\n";
    body = csv.str();
  }
  return deliver(body, args.fmt.out_path, out, err);
}

int do_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<DurationReport> reports;
  for (int m = args.m_min; m <= args.m_max; ++m) {
    std::optional<Rational> exact;
    if (m <= 7) exact = exhaustive_verify(static_cast<std::uint32_t>(m),
                                          SweepOptions{args.threads, false})
                            .exact_mean;
    std::optional<MonteCarloEstimate> mc;
    if (args.mc_trials) {
      MonteCarloReport r =
          monte_carlo(static_cast<std::uint32_t>(m), *args.mc_trials, *args.mc_seed, args.threads);
      mc = MonteCarloEstimate{r.trials, r.seed, r.mean, r.std_error};
    }
    reports.push_back(make_duration_report(m, exact, mc));
  }

  std::string body;
  if (args.fmt.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const DurationReport& r : reports) {
      nlohmann::ordered_json row{{"m", r.m},
                                 {"triple_sum", r.triple_sum},
                                 {"closed_form", r.closed_form},
                                 {"exact_mean", nullptr},
                                 {"monte_carlo", nullptr},
                                 {"rate", r.rate_at_m}};
      if (r.exact) row["exact_mean"] = r.exact->str();
      if (r.monte_carlo)
        row["monte_carlo"] = nlohmann::ordered_json{{"trials", r.monte_carlo->trials},
                                                    {"seed", r.monte_carlo->seed},
                                                    {"mean", r.monte_carlo->mean},
                                                    {"stderr", r.monte_carlo->std_error}};
      doc.push_back(std::move(row));
    }
    body = doc.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "m,triple_sum,closed_form,exact_mean,mc_mean,rate\n";
    for (const DurationReport& r : reports) {
      csv << r.m << "," << fmt_double(r.triple_sum) << "," << fmt_double(r.closed_form) << ",";
      if (r.exact) csv << fmt_double(r.exact->to_double());
      csv << ",";
      if (r.monte_carlo) csv << fmt_double(r.monte_carlo->mean);
      csv << "," << fmt_double(r.rate_at_m) << "\n";
    }
    body = csv.str();
  }
  return deliver(body, args.fmt.out_path, out, err);
}

int do_channel_simulate(const ChannelSimArgs& args, std::ostream& out, std::ostream& err) {
  SessionResult result = run_session(MessageTriple(args.l, {args.m1, args.m2, args.m3}));
  return deliver(to_json(result).dump(2) + "\n", args.fmt.out_path, out, err);
}

int do_channel_verify(const ChannelVerifyArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<ChannelVerifyReport> reports;
  for (std::uint32_t l = 1; l <= args.l_max; ++l) reports.push_back(verify_channel(l));

  std::uint64_t violations = 0;
  std::uint64_t sessions = 0;
  for (const ChannelVerifyReport& r : reports) {
    violations += r.decode_failures + r.law_violations;
    sessions += r.sessions;
  }

  std::string body;
  if (args.fmt.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const ChannelVerifyReport& r : reports) doc.push_back(to_json(r));
    body = doc.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "l,total,count\n";
    for (const ChannelVerifyReport& r : reports)
      for (const auto& [total, count] : r.distribution)
        csv << r.length << "," << total << "," << count << "\n";
    body = csv.str();
  }
  int rc = deliver(body, args.fmt.out_path, out, err);
  if (rc != 0) return rc;
  if (violations != 0) {
    err << "coinweigh channel-verify: FAIL (" << violations << " violation(s) over " << sessions
        << " sessions)\n";
    return 1;
  }
  err << "coinweigh channel-verify: PASS (" << sessions << " sessions, zero violations)\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential weighing search for three forged coins, its mean-duration "
               "analysis, and the derived three-user adder-channel feedback code"};
  app.name("coinweigh");
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Search one instance and print its trace");
  run_cmd->add_option("--m", run_args.m, "Pool exponent (2^m coins)")->required();
  run_cmd->add_option("--forged", run_args.forged, "The three forged indices")->delimiter(',');
  run_cmd->add_option("--seed", run_args.seed, "Sample the forged triple from this seed");
  add_format_options(run_cmd, run_args.fmt, "json");

  VerifyArgs verify_args;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Exhaustively check every placement for m = 2..m-max");
  verify_cmd->add_option("--m-max", verify_args.m_max, "Largest pool exponent (2..7)")
      ->required()
      ->check(CLI::Range(2u, 7u));
  verify_cmd->add_option("--threads", verify_args.threads, "Worker threads (0 = auto)");
  verify_cmd->add_flag("--cross-check", verify_args.cross_check,
                       "Validate every weighing against explicit sets");
  verify_cmd->add_flag("--histogram", verify_args.histogram,
                       "Emit the weighing-count histogram instead of the summary");
  add_format_options(verify_cmd, verify_args.fmt, "csv");

  MonteCarloArgs mc_args;
  CLI::App* mc_cmd = app.add_subcommand("montecarlo", "Estimate the mean duration by simulation");
  mc_cmd->add_option("--m", mc_args.m, "Pool exponent")->required();
  mc_cmd->add_option("--trials", mc_args.trials, "Number of trials")->required();
  mc_cmd->add_option("--seed", mc_args.seed, "PRNG seed (required: no wall-clock defaults)")
      ->required();
  mc_cmd->add_option("--threads", mc_args.threads, "Worker threads (0 = auto)");
  add_format_options(mc_cmd, mc_args.fmt, "csv");

  AnalyzeArgs analyze_args;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Tabulate the mean duration from every route");
  analyze_cmd->add_option("--m-min", analyze_args.m_min, "First pool exponent (default 2)");
  analyze_cmd->add_option("--m-max", analyze_args.m_max, "Last pool exponent")->required();
  analyze_cmd->add_option("--mc-trials", analyze_args.mc_trials,
                          "Add a Monte Carlo column with this many trials");
  analyze_cmd->add_option("--mc-seed", analyze_args.mc_seed, "Seed for the Monte Carlo column");
  analyze_cmd->add_option("--threads", analyze_args.threads, "Worker threads (0 = auto)");
  add_format_options(analyze_cmd, analyze_args.fmt, "csv");

  ChannelSimArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("channel-simulate", "Run one feedback-code session");
  sim_cmd->add_option("--l", sim_args.l, "Bits per message")->required();
  sim_cmd->add_option("--m1", sim_args.m1, "User 1 message")->required();
  sim_cmd->add_option("--m2", sim_args.m2, "User 2 message")->required();
  sim_cmd->add_option("--m3", sim_args.m3, "User 3 message")->required();
  add_format_options(sim_cmd, sim_args.fmt, "json");

  ChannelVerifyArgs cv_args;
  CLI::App* cv_cmd =
      app.add_subcommand("channel-verify", "Check zero-error decoding over all message triples");
  cv_cmd->add_option("--l-max", cv_args.l_max, "Largest message length (1..8)")
      ->required()
      ->check(CLI::Range(1u, 8u));
  add_format_options(cv_cmd, cv_args.fmt, "csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 convention
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "coinweigh: " << e.what() << "\n";
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      if (run_args.fmt.format != "json") {
        err << "coinweigh run: only --format json is supported\n";
        return 2;
      }
      return do_run(run_args, out, err);
    }
    if (verify_cmd->parsed()) return do_verify(verify_args, out, err);
    if (mc_cmd->parsed()) return do_montecarlo(mc_args, out, err);
    if (analyze_cmd->parsed()) {
      if (analyze_args.m_min < 2 || analyze_args.m_max < analyze_args.m_min) {
        err << "coinweigh analyze: need 2 <= m-min <= m-max\n";
        return 2;
      }
      if (analyze_args.mc_trials.has_value() != analyze_args.mc_seed.has_value()) {
        err << "coinweigh analyze: --mc-trials and --mc-seed go together\n";
        return 2;
      }
      return do_analyze(analyze_args, out, err);
    }
    if (sim_cmd->parsed()) {
      if (sim_args.fmt.format != "json") {
        err << "coinweigh channel-simulate: only --format json is supported\n";
        return 2;
      }
      return do_channel_simulate(sim_args, out, err);
    }
    if (cv_cmd->parsed()) return do_channel_verify(cv_args, out, err);
  } catch (const std::invalid_argument& e) {
    // precondition violations surface before any work starts
    err << "coinweigh: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "coinweigh: " << e.what() << "\n";
    return 2;
  }
  err << "coinweigh: no subcommand\n";
  return 2;
}

}  // namespace coinweigh
