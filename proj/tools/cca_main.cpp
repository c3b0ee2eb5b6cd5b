#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cca/experiments.hpp"

namespace {

std::vector<long long> parse_times(const std::string& csv) {
  std::vector<long long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic cellular automata, walk encodings and exact laws"};
  app.require_subcommand(1);

  // --- simulate ---------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "run a rule and print or render the result");
  std::string sim_rule = "cyclic3", sim_params, sim_boundary = "shrink", sim_render, sim_initial;
  std::uint64_t sim_seed = 0;
  long long sim_steps = 100;
  std::size_t sim_width = 0;
  long long sim_origin = 0;
  simulate->add_option("--rule", sim_rule, "cyclicN | cyclic3+ | probN:q | tournament:<file|g1|g2>");
  simulate->add_option("--params", sim_params, "comma-separated initial state probabilities");
  simulate->add_option("--steps", sim_steps, "number of updates")->check(CLI::NonNegativeNumber);
  simulate->add_option("--width", sim_width, "initial window width (default: just the light cone)");
  simulate->add_option("--seed", sim_seed, "master seed");
  simulate->add_option("--origin", sim_origin, "lattice index of the leftmost sampled cell");
  simulate->add_option("--boundary", sim_boundary, "shrink (exact) or periodic (pictures only)")
      ->check(CLI::IsMember({"shrink", "periodic"}));
  simulate->add_option("--render", sim_render, "write a PGM space-time diagram to this path");
  simulate->add_option("--initial", sim_initial, "read the initial configuration from a file");

  // --- walk-check -------------------------------------------------------
  auto* walk_check = app.add_subcommand("walk-check", "exhaustive column-vs-walk oracle sweep");
  int wc_max_len = 10, wc_max_steps = 10, wc_workers = 0;
  walk_check->add_option("--max-len", wc_max_len, "largest word length minus one");
  walk_check->add_option("--max-steps", wc_max_steps, "largest step count");
  walk_check->add_option("--workers", wc_workers, "thread count (0 = all)");

  // --- tails ------------------------------------------------------------
  auto* tails = app.add_subcommand("tails", "empirical 3-tail distribution of sampled walks");
  std::string tl_params = "0.1,0.3,0.6", tl_out;
  std::size_t tl_len = 1000;
  std::uint64_t tl_samples = 10000, tl_seed = 0;
  long long tl_start = 0;
  double tl_beta = -1;
  int tl_workers = 0;
  tails->add_option("--params", tl_params, "walk parameters p0,p1,p2");
  tails->add_option("--len", tl_len, "walk length");
  tails->add_option("--samples", tl_samples, "number of walks");
  tails->add_option("--seed", tl_seed, "master seed");
  tails->add_option("--start", tl_start, "start value");
  tails->add_option("--beta", tl_beta, "embedded-growth floor (default p0^2 p1 p2 / 4)");
  tails->add_option("--workers", tl_workers, "thread count (0 = all)");
  tails->add_option("--out", tl_out, "CSV output path (default stdout)");

  // --- exact ------------------------------------------------------------
  auto* exact = app.add_subcommand("exact", "exact max-law by dynamic programming");
  std::string ex_params = "0.1,0.3,0.6";
  long long ex_start = 0;
  std::size_t ex_steps = 1000;
  int ex_workers = 0;
  exact->add_option("--params", ex_params, "walk parameters p0,p1,p2");
  exact->add_option("--start", ex_start, "start value");
  exact->add_option("--steps", ex_steps, "horizon n");
  exact->add_option("--workers", ex_workers, "thread count (0 = all)");

  // --- km ---------------------------------------------------------------
  auto* km = app.add_subcommand("km", "barrier survival probabilities and their ratios");
  std::string km_params = "0.1,0.3,0.6", km_out;
  std::size_t km_max = 100;
  km->add_option("--params", km_params, "walk parameters p0,p1,p2");
  km->add_option("--max-m", km_max, "largest horizon");
  km->add_option("--out", km_out, "CSV output path (default stdout)");

  // --- enumerate-tournaments -------------------------------------------
  auto* enumerate = app.add_subcommand("enumerate-tournaments",
                                       "classify all tournaments on n states");
  int en_n = 4;
  std::string en_out;
  enumerate->add_option("--n", en_n, "number of states (3..7)")->required();
  enumerate->add_option("--out", en_out, "JSON output path (default stdout)");

  // --- estimate ---------------------------------------------------------
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo column-law estimate");
  std::string es_rule = "cyclic3", es_params = "0.1,0.3,0.6", es_times = "0,50,100,150",
              es_engine = "auto", es_out;
  std::uint64_t es_samples = 10000, es_seed = 0, es_stream = 0;
  int es_workers = 0;
  estimate->add_option("--rule", es_rule, "cyclicN | cyclic3+ | probN:q | tournament:<file|g1|g2>");
  estimate->add_option("--params", es_params, "initial state probabilities");
  estimate->add_option("--times", es_times, "comma-separated observation times");
  estimate->add_option("--samples", es_samples, "number of samples");
  estimate->add_option("--seed", es_seed, "master seed");
  estimate->add_option("--stream", es_stream, "stream index");
  estimate->add_option("--workers", es_workers, "thread count (0 = all)");
  estimate->add_option("--engine", es_engine, "auto | ca | walk")
      ->check(CLI::IsMember({"auto", "ca", "walk"}));
  estimate->add_option("--out", es_out, "JSON output path (default stdout)");

  // --- reproduce-tables -------------------------------------------------
  auto* tables = app.add_subcommand("reproduce-tables",
                                    "re-estimate the published column-law tables");
  std::string tb_out = "tables";
  std::uint64_t tb_samples = 100000, tb_seed = 1;
  int tb_workers = 0;
  tables->add_option("--out", tb_out, "output directory")->required();
  tables->add_option("--samples", tb_samples, "samples per table");
  tables->add_option("--seed", tb_seed, "master seed");
  tables->add_option("--workers", tb_workers, "thread count (0 = all)");

  // --- render-figures ---------------------------------------------------
  auto* figures = app.add_subcommand("render-figures", "render the space-time diagram gallery");
  std::string fg_out = "figures";
  std::uint64_t fg_seed = cca::kDefaultFigureSeed;
  figures->add_option("--out", fg_out, "output directory")->required();
  figures->add_option("--seed", fg_seed, "master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const cca::RuleSpec rule = cca::parse_rule(sim_rule);
      std::optional<cca::SeedSpec> noise;
      if (cca::is_probabilistic(rule)) noise = cca::SeedSpec{sim_seed, 1};
      cca::Configuration init;
      if (!sim_initial.empty()) {
        init = cca::read_configuration_file(sim_initial, cca::alphabet_size(rule));
      } else {
        std::string ptext = sim_params;
        if (ptext.empty()) {  // uniform by default
          std::ostringstream os;
          const int n = cca::alphabet_size(rule);
          for (int s = 0; s < n; ++s) os << (s ? "," : "") << 1.0 / n;
          ptext = os.str();
        }
        const cca::BernoulliParams params = cca::parse_params(ptext);
        if (params.states() != cca::alphabet_size(rule))
          throw std::invalid_argument("parameter count does not match rule alphabet");
        std::size_t width = sim_width;
        if (width == 0)
          width = static_cast<std::size_t>(
                      (cca::left_radius(rule) + cca::right_radius(rule)) * sim_steps) +
                  1;
        init = cca::sample_configuration(params, width, sim_origin, cca::SeedSpec{sim_seed, 0});
      }
      if (sim_boundary == "periodic") {
        const auto rows = cca::run_periodic(rule, init.cells, static_cast<std::size_t>(sim_steps), noise);
        if (!sim_render.empty()) {
          std::ostringstream comment;
          comment << "rule=" << sim_rule << " steps=" << sim_steps << " seed=" << sim_seed
                  << "\nboundary=periodic (approximate; wrap breaks the exact light cone)";
          cca::write_pgm_file(sim_render, rows, comment.str());
          std::cerr << "wrote " << sim_render << "\n";
        } else {
          cca::write_configuration(std::cout,
                                   cca::Configuration(init.alphabet_size, 0, rows.back()));
        }
      } else {
        const auto diagram = cca::run_diagram(rule, init, static_cast<std::size_t>(sim_steps), noise);
        if (!sim_render.empty()) {
          std::ostringstream comment;
          comment << "rule=" << sim_rule << " steps=" << sim_steps << " seed=" << sim_seed
                  << "\nboundary=shrink (exact light cone)";
          std::ofstream out(sim_render, std::ios::binary);
          if (!out) throw std::runtime_error("cannot open output file: " + sim_render);
          cca::write_pgm(out, diagram, comment.str());
          std::cerr << "wrote " << sim_render << "\n";
        } else {
          cca::write_configuration(std::cout, diagram.rows.back());
        }
      }
    } else if (*walk_check) {
      const auto sweep = cca::oracle_equivalence_sweep(wc_max_len, wc_max_steps, wc_workers);
      std::cout << "checked " << sweep.checked << " column values, " << sweep.mismatches
                << " mismatches\n";
      return sweep.mismatches == 0 ? 0 : 1;
    } else if (*tails) {
      const auto stats =
          cca::tail_statistics(cca::parse_params(tl_params), tl_start, tl_len, tl_samples,
                               cca::SeedSpec{tl_seed, 0}, tl_beta, tl_workers);
      std::ofstream file;
      std::ostream& out = open_out(file, tl_out);
      out << "m,count,fraction\n";
      for (const auto& [m, c] : stats.tail_hist)
        out << m << ',' << c << ',' << static_cast<double>(c) / static_cast<double>(tl_samples)
            << "\n";
      if (stats.tail_none)
        out << "none," << stats.tail_none << ','
            << static_cast<double>(stats.tail_none) / static_cast<double>(tl_samples) << "\n";
      std::cerr << "fraction with 3-tail <= n^(1/4): " << stats.frac_tail_le_root4()
                << "\nfraction with embedded growth below beta*n: " << stats.frac_embedded_below()
                << "\n";
    } else if (*exact) {
      const cca::BernoulliParams params = cca::parse_params(ex_params);
      const auto law = cca::exact_max_law(params, ex_start, ex_steps, ex_workers);
      const double target[3] = {params[2], params[0], params[1]};
      double linf = 0;
      for (int r = 0; r < 3; ++r) linf = std::max(linf, std::abs(law[r] - target[r]));
      nlohmann::json j;
      j["n"] = ex_steps;
      j["law"] = law;
      j["target"] = target;
      j["linf_error"] = linf;
      std::cout << j.dump(2) << "\n";
    } else if (*km) {
      const cca::BarrierDp dp(cca::parse_params(km_params), km_max);
      std::ofstream file;
      std::ostream& out = open_out(file, km_out);
      out << "m,survival,km\n";
      for (std::size_t m = 1; m <= km_max; ++m)
        out << m << ',' << dp.survival(m) << ',' << dp.k_m(m) << "\n";
    } else if (*enumerate) {
      const auto census = cca::enumerate_mpp(en_n);
      nlohmann::json j;
      j["n"] = census.n;
      j["total_orders"] = census.total_orders;
      j["family2"] = census.family2;
      j["family3"] = census.family3;
      j["not_mpp"] = census.not_mpp;
      j["members"] = census.members;
      std::ofstream file;
      std::ostream& out = open_out(file, en_out);
      out << j.dump(2) << "\n";
    } else if (*estimate) {
      const cca::RuleSpec rule = cca::parse_rule(es_rule);
      cca::EstimateOptions opts;
      opts.times = parse_times(es_times);
      opts.samples = es_samples;
      opts.seed = cca::SeedSpec{es_seed, es_stream};
      opts.workers = es_workers;
      opts.engine = es_engine == "auto" ? cca::ColumnEngine::automatic
                    : es_engine == "ca" ? cca::ColumnEngine::ca
                                        : cca::ColumnEngine::walk;
      const auto report = cca::estimate_column_law(rule, cca::parse_params(es_params), opts);
      std::ofstream file;
      std::ostream& out = open_out(file, es_out);
      out << report.to_json().dump(2) << "\n";
    } else if (*tables) {
      cca::reproduce_tables(tb_out, tb_samples, cca::SeedSpec{tb_seed, 0}, tb_workers);
      std::cerr << "wrote tables to " << tb_out << "\n";
    } else if (*figures) {
      cca::render_figures(fg_out, cca::SeedSpec{fg_seed, 0});
      std::cerr << "wrote figures to " << fg_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
