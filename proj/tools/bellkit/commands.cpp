#include "commands.hpp"

#include "report.hpp"

#include <bellkit/errors.hpp>
#include <bellkit/format.hpp>
#include <bellkit/optimizer.hpp>
#include <bellkit/parallel.hpp>

#include <filesystem>
#include <optional>

#include "CLI11.hpp"

namespace bellkit::cli {

namespace {

// Below this the optimum is reported as no violation; it absorbs rounding
// in CH sums that are analytically zero.
constexpr double kNoViolationFloor = 1e-12;

const char* mode_name(ChMode m) { return m == ChMode::heralded ? "heralded" : "strict"; }

const char* kAngleNames[] = {"theta1_deg", "theta2_deg", "theta1p_deg", "theta2p_deg"};

std::filesystem::path output_dir(const CliConfig& config) {
  std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("out_dir: cannot create '" + config.out_dir + "': " + ec.message());
  return dir;
}

void check_library_invariants(const CliConfig& config, bool need_state) {
  try {
    if (need_state) config.state().validate();
    config.arm1.validate();
    config.arm2.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

OptimOptions optimizer_options(const CliConfig& config) {
  OptimOptions o;
  o.background_fraction = config.background_fraction;
  return o;
}

}  // namespace

int cmd_eval(const CliConfig& config, std::ostream& out) {
  check_library_invariants(config, true);
  if (!config.angles) throw ConfigError("eval needs theta1_deg, theta2_deg, theta1p_deg and theta2p_deg");
  const auto b = ch_sum(config.state(), config.arm1, config.arm2, *config.angles, config.mode,
                        config.background_fraction);
  Report r;
  r.text("command", "eval").text("mode", mode_name(config.mode));
  const auto deg = config.angles->degrees();
  for (int i = 0; i < 4; ++i) r.number(kAngleNames[i], deg[i]);
  for (std::size_t k = 0; k < kConfigCount; ++k) r.number(std::string("term_") + std::string(kConfigLabels[k]), b.terms[k]);
  r.number("ch", b.ch).number("ratio", b.ratio);
  out << r.render(config.format);
  return 0;
}

int cmd_optimize(const CliConfig& config, std::ostream& out) {
  check_library_invariants(config, true);
  const auto res = optimize_angles(config.state(), config.arm1, config.arm2, config.mode, optimizer_options(config));
  Report r;
  r.text("command", "optimize").text("mode", mode_name(config.mode));
  const auto deg = res.settings.degrees();
  for (int i = 0; i < 4; ++i) r.fixed2(kAngleNames[i], deg[i]);
  r.number("ch", res.ch).number("ratio", res.ratio);
  r.text("status", res.ch > kNoViolationFloor ? "violation" : "no violation");
  r.flag("converged", res.converged).integer("evaluations", res.evaluations);
  out << r.render(config.format);
  return res.converged ? 0 : 1;
}

int cmd_map(const CliConfig& config, std::ostream& out) {
  check_library_invariants(config, false);
  const auto& p1 = config.arm1.polarizer;
  const auto& p2 = config.arm2.polarizer;
  if (p1.eps_par != p2.eps_par || p1.eps_perp != p2.eps_perp)
    throw ConfigError("map needs identical polarisers on both arms (eps_par/eps_perp overrides differ)");
  GridSpec spec = config.grid;
  spec.polarizer = p1;
  try {
    spec.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  const auto map = grid_map(spec, default_thread_count());
  const auto dir = output_dir(config);
  write_file_atomic(dir / "ch_over_n.csv", map_csv(map));
  write_file_atomic(dir / "contours.csv", contours_csv(map));

  int crossing_rows = 0;
  for (int fi = 0; fi < spec.f_steps; ++fi)
    if (map.zero_crossing_eta(fi)) ++crossing_rows;
  Report r;
  r.text("command", "map")
      .integer("eta_steps", spec.eta_steps)
      .integer("f_steps", spec.f_steps)
      .number("eps_par", spec.polarizer.eps_par)
      .number("eps_perp", spec.polarizer.eps_perp)
      .integer("contour_lines", static_cast<std::int64_t>(map.contours.size()))
      .integer("rows_with_violation", crossing_rows)
      .text("grid_file", "ch_over_n.csv")
      .text("contour_file", "contours.csv");
  out << r.render(config.format);
  return 0;
}

int cmd_simulate(const CliConfig& config, std::ostream& out) {
  check_library_invariants(config, true);
  AngleSettings settings;
  bool optimized = false;
  if (config.angles) {
    settings = *config.angles;
  } else {
    const auto res = optimize_angles(config.state(), config.arm1, config.arm2, config.mode, optimizer_options(config));
    if (!res.converged) throw std::runtime_error("angle optimisation did not converge");
    settings = res.settings;
    optimized = true;
  }
  RunConfig run = config.run_config(settings);
  try {
    run.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }

  const auto record = simulate_run(run);
  const auto a = ch_from_counts(record, config.subtract_accidentals);
  const auto dir = output_dir(config);
  write_file_atomic(dir / "counts.csv", count_csv(record));

  Report rep;
  rep.text("command", "simulate").unsigned_integer("seed", config.seed);
  rep.flag("angles_optimized", optimized);
  const auto deg = settings.degrees();
  for (int i = 0; i < 4; ++i) rep.number(kAngleNames[i], deg[i]);
  rep.number("expected_ch", expected_ch_counts(run))
      .number("ch", a.ch)
      .number("sigma_ch", a.sigma_ch)
      .number("z_score", a.z_score)
      .number("ch_rate", a.ch_rate)
      .number("sigma_ch_rate", a.sigma_ch_rate)
      .number("ratio", a.ratio)
      .number("sigma_ratio", a.sigma_ratio)
      .text("ratio_status", a.ratio ? "defined" : "undefined")
      .flag("accidentals_subtracted", config.subtract_accidentals);

  if (config.replicas >= 2) {
    const auto s = replicate_study(run, config.replicas, default_thread_count());
    std::string csv = "replica,seed,ch,sigma_ch,z_score\n";
    for (int k = 0; k < s.replicas; ++k) {
      csv += std::to_string(k) + "," + std::to_string(config.seed + static_cast<std::uint64_t>(k)) + "," +
             format_number(s.ch[k]) + "," + format_number(s.sigma_ch[k]) + "," + format_number(s.z_scores[k]) + "\n";
    }
    write_file_atomic(dir / "replicates.csv", csv);
    rep.integer("replicas", s.replicas)
        .number("mean_ch", s.mean_ch)
        .number("empirical_sigma_ch", s.empirical_sigma_ch)
        .number("mean_propagated_sigma_ch", s.mean_propagated_sigma_ch)
        .integer("ratio_defined", s.ratio_defined)
        .number("mean_ratio", s.ratio_defined ? std::optional<double>(s.mean_ratio) : std::nullopt)
        .number("empirical_sigma_ratio", s.ratio_defined > 1 ? std::optional<double>(s.empirical_sigma_ratio) : std::nullopt)
        .flag("wide_uncertainty", s.wide_uncertainty);
  }

  const std::string text = rep.render(config.format);
  write_file_atomic(dir / (config.format == OutputFormat::json ? "analysis.json" : "analysis.csv"), text);
  out << text;
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bellkit: Clauser-Horne violation with realistic photon-pair sources"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format, mode;
  std::optional<std::uint64_t> seed;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_option("--mode", mode, "CH mode")->check(CLI::IsMember({"heralded", "strict"}));
  };
  CLI::App* eval = app.add_subcommand("eval", "evaluate CH and R at the configured angles");
  CLI::App* optimize = app.add_subcommand("optimize", "find the CH-maximising analyser angles");
  CLI::App* map = app.add_subcommand("map", "CH/N over efficiency and f, with contours");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo counting run and analysis");
  for (auto* sub : {eval, optimize, map, simulate}) add_common(sub);

  // CLI11 wants argv order reversed when given a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    CliConfig config = load_config(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!format.empty()) config.format = parse_format(format);
    if (!mode.empty()) config.mode = parse_mode(mode);
    if (seed) config.seed = *seed;

    if (eval->parsed()) return cmd_eval(config, out);
    if (optimize->parsed()) return cmd_optimize(config, out);
    if (map->parsed()) return cmd_map(config, out);
    return cmd_simulate(config, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bellkit::cli
