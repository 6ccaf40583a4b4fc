// ghcert: certified Gromov-Hausdorff bounds, packing/covering numbers,
// Bishop-measure dimension fits and foliation separation scans on finite
// metric samples. Every command is a pure function of (inputs, flags, seed)
// and writes canonical JSON so reruns are byte-identical.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ghcert/serialization.hpp"
#include "ghcert/version.hpp"

namespace {

using namespace ghcert;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const auto colon1 = text.find(':');
  if (colon1 != std::string::npos) {
    const auto colon2 = text.find(':', colon1 + 1);
    if (colon2 == std::string::npos)
      throw invalid_argument_error("grid syntax is start:step:stop or a comma list");
    const double start = std::stod(text.substr(0, colon1));
    const double step = std::stod(text.substr(colon1 + 1, colon2 - colon1 - 1));
    const double stop = std::stod(text.substr(colon2 + 1));
    if (!(step > 0.0)) throw invalid_argument_error("grid step must be positive");
    for (double v = start; v <= stop + 1e-12 * step; v += step) grid.push_back(v);
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string::npos) comma = text.size();
      grid.push_back(std::stod(text.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  if (grid.empty()) throw invalid_argument_error("empty grid");
  return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    values.push_back(std::stoi(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    values.push_back(std::stod(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return values;
}

// Reports carry the tool version and the full resolved configuration.
json report_envelope(const std::string& command, json config, json result) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"] = std::move(result);
  return j;
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty())
    std::cout << report.dump(2) << '\n';
  else
    write_json_file(out_path, report);
}

// Inputs for net/pack/cover/gh/bishop: bare metric JSON, a foliated sample,
// or a leafspace report (takes its quotient metric).
FiniteMetricSpace load_metric_input(const std::string& path) {
  const json j = read_json_file(path);
  if (j.contains("result") && j.at("result").contains("space"))
    return metric_space_from_json(j.at("result").at("space"), /*validate=*/false);
  if (j.contains("model")) return load_any_metric(j, /*validate=*/false);
  return metric_space_from_json(j, /*validate=*/false);
}

FoliatedSample load_sample_input(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.contains("model"))
    throw invalid_argument_error(path + " is not a foliated sample file");
  return foliated_sample_from_json(j);
}

int run_selftest();

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified Gromov-Hausdorff bounds and foliation separation toolkit"};
  app.require_subcommand(1);

  // ---- validate -------------------------------------------------------------
  std::string v_in, v_out;
  bool v_csv = false;
  auto* validate_cmd = app.add_subcommand("validate", "validate a metric space file");
  validate_cmd->add_option("--in", v_in, "metric space, sample, or CSV file")->required();
  validate_cmd->add_flag("--csv", v_csv, "input is lower-triangular CSV");
  validate_cmd->add_option("--out", v_out, "report path (stdout when omitted)");

  // ---- sample ---------------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "draw a foliated sample");
  sample_cmd->require_subcommand(1);

  int t_n = 2, t_p = 1, t_leaves = 10, t_per = 30;
  std::string t_scales = "1,1", t_out;
  std::uint64_t t_seed = 0;
  int t_threads = 1;
  auto* torus_cmd = sample_cmd->add_subcommand("torus", "flat torus with subtorus leaves");
  torus_cmd->add_option("--n", t_n, "manifold dimension")->required();
  torus_cmd->add_option("--p", t_p, "leaf dimension")->required();
  torus_cmd->add_option("--leaves", t_leaves, "number of leaves")->required();
  torus_cmd->add_option("--per-leaf", t_per, "points per leaf")->required();
  torus_cmd->add_option("--scale", t_scales, "circle circumferences, comma list");
  torus_cmd->add_option("--seed", t_seed, "RNG seed");
  torus_cmd->add_option("--threads", t_threads, "worker cap for materialization");
  torus_cmd->add_option("--out", t_out, "sample path")->required();

  int h_fibers = 100, h_per = 10;
  std::uint64_t h_seed = 0;
  std::string h_out;
  int h_threads = 1;
  auto* hopf_cmd = sample_cmd->add_subcommand("hopf", "unit 3-sphere with Hopf circle fibers");
  hopf_cmd->add_option("--fibers", h_fibers, "number of fibers")->required();
  hopf_cmd->add_option("--per-fiber", h_per, "points per fiber")->required();
  hopf_cmd->add_option("--seed", h_seed, "RNG seed");
  hopf_cmd->add_option("--threads", h_threads, "worker cap for materialization");
  hopf_cmd->add_option("--out", h_out, "sample path")->required();

  std::string g_points, g_out;
  double g_radius = 0.0;
  auto* graph_cmd =
      sample_cmd->add_subcommand("graph", "custom cloud with graph geodesic distances");
  graph_cmd->add_option("--points", g_points, "JSON with points and optional leaf_id")->required();
  graph_cmd->add_option("--radius", g_radius, "edge connection radius")->required();
  graph_cmd->add_option("--out", g_out, "sample path")->required();

  // ---- net / pack / cover ---------------------------------------------------
  std::string n_in, n_out;
  double n_eps = 0.0;
  auto* net_cmd = app.add_subcommand("net", "greedy farthest-point epsilon-net");
  net_cmd->add_option("--in", n_in, "metric input")->required();
  net_cmd->add_option("--eps", n_eps, "net radius")->required();
  net_cmd->add_option("--out", n_out, "report path");

  std::string p_in, p_out, p_mode = "greedy", p_grid, p_csv;
  double p_eps = 0.0;
  auto* pack_cmd = app.add_subcommand("pack", "packing number Cap(eps)");
  pack_cmd->add_option("--in", p_in, "metric input")->required();
  pack_cmd->add_option("--eps", p_eps, "packing radius")->required();
  pack_cmd->add_option("--mode", p_mode, "exact|greedy")->check(CLI::IsMember({"exact", "greedy"}));
  pack_cmd->add_option("--eps-grid", p_grid, "grid for the CSV side table");
  pack_cmd->add_option("--csv", p_csv, "CSV side table path (eps,cov,cap)");
  pack_cmd->add_option("--out", p_out, "report path");

  std::string c_in, c_out, c_mode = "greedy", c_grid, c_csv;
  double c_eps = 0.0;
  auto* cover_cmd = app.add_subcommand("cover", "covering number Cov(eps)");
  cover_cmd->add_option("--in", c_in, "metric input")->required();
  cover_cmd->add_option("--eps", c_eps, "covering radius")->required();
  cover_cmd->add_option("--mode", c_mode, "exact|greedy")->check(CLI::IsMember({"exact", "greedy"}));
  cover_cmd->add_option("--eps-grid", c_grid, "grid for the CSV side table");
  cover_cmd->add_option("--csv", c_csv, "CSV side table path (eps,cov,cap)");
  cover_cmd->add_option("--out", c_out, "report path");

  // ---- gh -------------------------------------------------------------------
  std::string gh_x, gh_y, gh_grid, gh_sizes, gh_out, gh_csv;
  std::uint64_t gh_seed = 0, gh_budget = 2000;
  int gh_nd_kmax = 0;
  auto* gh_cmd = app.add_subcommand("gh", "certified GH distance bounds");
  gh_cmd->add_option("--x", gh_x, "first space")->required();
  gh_cmd->add_option("--y", gh_y, "second space")->required();
  gh_cmd->add_option("--eps-grid", gh_grid, "lower-bound grid, start:step:stop or list")->required();
  gh_cmd->add_option("--net-sizes", gh_sizes, "upper-bound net sizes, comma list");
  gh_cmd->add_option("--budget", gh_budget, "tuple evaluations for the upper search");
  gh_cmd->add_option("--seed", gh_seed, "RNG seed");
  gh_cmd->add_option("--net-distortion", gh_nd_kmax,
                     "also try the exhaustive net-distortion lower bound up to this net size");
  gh_cmd->add_option("--csv", gh_csv, "CSV side table (eps,cov_x,cap3_y,fired)");
  gh_cmd->add_option("--out", gh_out, "report path");

  // ---- bishop ---------------------------------------------------------------
  std::string b_in, b_out, b_csv, b_cap_grid;
  double b_eta_min = 0.0, b_eta_max = 0.0;
  int b_steps = 8, b_centers = 64;
  std::uint64_t b_seed = 0;
  auto* bishop_cmd = app.add_subcommand("bishop", "Bishop-measure dimension fit");
  bishop_cmd->add_option("--space", b_in, "metric input")->required();
  bishop_cmd->add_option("--eta-min", b_eta_min, "lowest radius (default: resolution floor)");
  bishop_cmd->add_option("--eta-max", b_eta_max, "highest radius (default: diameter/4)");
  bishop_cmd->add_option("--steps", b_steps, "radii in the grid");
  bishop_cmd->add_option("--centers", b_centers, "sampled centers (clamped to [20,200])");
  bishop_cmd->add_option("--seed", b_seed, "RNG seed");
  bishop_cmd->add_option("--cap-grid", b_cap_grid, "radii for the packing estimate check");
  bishop_cmd->add_option("--csv", b_csv, "profile CSV path (center,eta,mass)");
  bishop_cmd->add_option("--out", b_out, "report path");

  // ---- leafspace ------------------------------------------------------------
  std::string ls_in, ls_out, ls_mode = "chain";
  int ls_threads = 1;
  auto* ls_cmd = app.add_subcommand("leafspace", "quotient leaf-space metric");
  ls_cmd->add_option("--in", ls_in, "foliated sample")->required();
  ls_cmd->add_option("--mode", ls_mode, "chain|hausdorff")
      ->check(CLI::IsMember({"chain", "hausdorff"}));
  ls_cmd->add_option("--threads", ls_threads, "worker cap");
  ls_cmd->add_option("--out", ls_out, "report path");

  // ---- broader ---------------------------------------------------------------
  std::string br_a, br_b, br_grid, br_out;
  auto* br_cmd = app.add_subcommand("broader", "Cap(delta,B) >= Cap(delta,A) at every delta");
  br_cmd->add_option("--a", br_a, "baseline space")->required();
  br_cmd->add_option("--b", br_b, "claimed-broader space")->required();
  br_cmd->add_option("--delta-grid", br_grid, "grid, start:step:stop or list")->required();
  br_cmd->add_option("--out", br_out, "report path");

  // ---- classcheck -------------------------------------------------------------
  std::string cc_in, cc_out;
  double cc_d = 1.0, cc_c = 2.0;
  std::uint64_t cc_seed = 0;
  auto* cc_cmd = app.add_subcommand("classcheck", "class-M condition report");
  cc_cmd->add_option("--in", cc_in, "foliated sample")->required();
  cc_cmd->add_option("--d", cc_d, "disjointness scale bound d");
  cc_cmd->add_option("--c", cc_c, "class constant C");
  cc_cmd->add_option("--seed", cc_seed, "RNG seed");
  cc_cmd->add_option("--out", cc_out, "report path");

  // ---- compare-metrics --------------------------------------------------------
  std::string cm_base, cm_alt, cm_out;
  double cm_c = 2.0;
  auto* cm_cmd = app.add_subcommand("compare-metrics",
                                    "leaf-space comparability of two metrics on one sample");
  cm_cmd->add_option("--base", cm_base, "foliated sample with metric d")->required();
  cm_cmd->add_option("--alt", cm_alt, "foliated sample with metric d'")->required();
  cm_cmd->add_option("--c", cm_c, "comparability constant C");
  cm_cmd->add_option("--out", cm_out, "report path");

  // ---- separate ---------------------------------------------------------------
  std::string s_m, s_mp, s_grid, s_out, s_csv;
  double s_c = 2.0, s_d = 0.0;
  std::uint64_t s_seed = 0;
  int s_threads = 1;
  bool s_no_normalize = false, s_override = false, s_no_cert = false;
  auto* sep_cmd = app.add_subcommand("separate", "A(r)/B(r) separation scan and certificate");
  sep_cmd->add_option("--m", s_m, "sample with leaf dimension p")->required();
  sep_cmd->add_option("--mprime", s_mp, "sample with leaf dimension p' > p")->required();
  sep_cmd->add_option("--r-grid", s_grid, "radius grid, start:step:stop or list")->required();
  sep_cmd->add_option("--c", s_c, "class constant C");
  sep_cmd->add_option("--d", s_d, "class scale bound d (informational)");
  sep_cmd->add_option("--seed", s_seed, "RNG seed");
  sep_cmd->add_option("--threads", s_threads, "worker cap");
  sep_cmd->add_flag("--no-normalize", s_no_normalize, "skip diameter-1 normalization");
  sep_cmd->add_flag("--override-broader", s_override, "proceed on inconclusive broader check");
  sep_cmd->add_flag("--no-certificate", s_no_cert, "skip the certificate scan");
  sep_cmd->add_option("--csv", s_csv, "CSV side table (r,A,B,ratio)");
  sep_cmd->add_option("--out", s_out, "report path");

  // ---- selftest ----------------------------------------------------------------
  auto* self_cmd = app.add_subcommand("selftest", "run the embedded invariant corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (*validate_cmd) {
      FiniteMetricSpace space;
      if (v_csv) {
        std::ifstream in(v_in, std::ios::binary);
        if (!in) throw Error("io", "cannot open " + v_in);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        space = metric_space_from_csv(text, /*validate=*/true);
      } else {
        space = load_any_metric(read_json_file(v_in), /*validate=*/true);
      }
      json result;
      result["valid"] = true;
      result["n"] = space.size();
      result["diameter"] = space.diameter();
      result["fill_radius"] = space.fill_radius();
      json config{{"in", v_in}, {"csv", v_csv}};
      emit(report_envelope("validate", config, result), v_out);
    } else if (*torus_cmd) {
      const auto scales = parse_double_list(t_scales);
      FoliatedSample sample =
          sample_torus_fibration(t_n, t_p, t_leaves, t_per, scales, t_seed);
      sample.materialize(3000, t_threads);
      write_json_file(t_out, to_json(sample));
    } else if (*hopf_cmd) {
      FoliatedSample sample = sample_hopf(h_fibers, h_per, h_seed);
      sample.materialize(3000, h_threads);
      write_json_file(h_out, to_json(sample));
    } else if (*graph_cmd) {
      const json pts = read_json_file(g_points);
      FoliatedSample sample;
      sample.model = FoliationModel::Custom;
      sample.ambient = pts.at("points").get<std::vector<std::vector<double>>>();
      const int n_pts = static_cast<int>(sample.ambient.size());
      if (pts.contains("leaf_id") && !pts.at("leaf_id").is_null()) {
        sample.leaf_id = pts.at("leaf_id").get<std::vector<int>>();
        sample.leaf_dim = pts.contains("p") ? pts.at("p").get<int>() : 0;
      } else {
        sample.leaf_id.resize(static_cast<std::size_t>(n_pts));
        for (int i = 0; i < n_pts; ++i) sample.leaf_id[static_cast<std::size_t>(i)] = i;
        sample.leaf_dim = 0;
      }
      sample.manifold_dim = pts.contains("n")
                                ? pts.at("n").get<int>()
                                : static_cast<int>(sample.ambient.empty() ? 1
                                                                          : sample.ambient[0].size());
      sample.set_dense(graph_geodesic_metric(sample.ambient, g_radius));
      sample.check_well_formed();
      write_json_file(g_out, to_json(sample));
    } else if (*net_cmd) {
      const FiniteMetricSpace space = load_metric_input(n_in);
      const Net net = greedy_net(space, n_eps);
      json result;
      result["epsilon"] = n_eps;
      result["count"] = static_cast<int>(net.centers.size());
      result["centers"] = net.centers;
      result["radius"] = net.radius;
      json config{{"in", n_in}, {"eps", n_eps}};
      emit(report_envelope("net", config, result), n_out);
    } else if (*pack_cmd || *cover_cmd) {
      const bool is_pack = pack_cmd->parsed();
      const std::string in = is_pack ? p_in : c_in;
      const double eps = is_pack ? p_eps : c_eps;
      const std::string mode_name = is_pack ? p_mode : c_mode;
      const std::string grid_text = is_pack ? p_grid : c_grid;
      const std::string csv_path = is_pack ? p_csv : c_csv;
      const BoundMode mode = mode_name == "exact" ? BoundMode::Exact : BoundMode::Greedy;

      const FiniteMetricSpace space = load_metric_input(in);
      json result;
      if (is_pack)
        result = to_json(packing_number(space, eps, mode));
      else
        result = to_json(covering_number(space, eps, mode), eps);

      if (!csv_path.empty()) {
        const auto grid = grid_text.empty() ? std::vector<double>{eps} : parse_grid(grid_text);
        std::string csv = "eps,cov,cap\n";
        for (double e : grid) {
          const auto cov = covering_number(
              space, e, !is_pack ? mode : BoundMode::Greedy);
          const auto cap = packing_number(space, e, is_pack ? mode : BoundMode::Greedy);
          csv += format_double(e) + "," + std::to_string(cov.count) + "," +
                 std::to_string(cap.count) + "\n";
        }
        write_text_file(csv_path, csv);
      }
      json config{{"in", in}, {"eps", eps}, {"mode", mode_name}};
      if (!grid_text.empty()) config["eps_grid"] = grid_text;
      emit(report_envelope(is_pack ? "pack" : "cover", config, result), is_pack ? p_out : c_out);
    } else if (*gh_cmd) {
      const FiniteMetricSpace x = load_metric_input(gh_x);
      const FiniteMetricSpace y = load_metric_input(gh_y);
      const auto grid = parse_grid(gh_grid);
      const auto sizes = gh_sizes.empty() ? std::vector<int>{} : parse_int_list(gh_sizes);
      const GhScanResult scan = gh_scan(x, y, grid, sizes, gh_budget, gh_seed);

      json result;
      result["lower"] = scan.lower ? to_json(*scan.lower) : json(nullptr);
      result["upper"] = scan.upper ? to_json(*scan.upper) : json(nullptr);
      json rows = json::array();
      for (const auto& row : scan.rows) {
        rows.push_back({{"epsilon", row.epsilon},
                        {"cov_x", row.cov_x_upper},
                        {"cap3_y", row.cap_y_lower},
                        {"fired", row.fired}});
      }
      result["rows"] = std::move(rows);
      if (gh_nd_kmax > 0) {
        json nd_json = nullptr;
        // Largest firing eps over the grid, scanned from the top.
        for (std::size_t i = grid.size(); i-- > 0;) {
          const auto outcome = lower_bound_net_distortion(x, y, grid[i], gh_nd_kmax);
          if (outcome.status == NetDistortionStatus::Fired) {
            nd_json = to_json(*outcome.certificate);
            break;
          }
        }
        result["net_distortion_lower"] = std::move(nd_json);
      }
      if (!gh_csv.empty()) {
        std::string csv = "eps,cov_x,cap3_y,fired\n";
        for (const auto& row : scan.rows)
          csv += format_double(row.epsilon) + "," + std::to_string(row.cov_x_upper) + "," +
                 std::to_string(row.cap_y_lower) + "," + (row.fired ? "1" : "0") + "\n";
        write_text_file(gh_csv, csv);
      }
      json config{{"x", gh_x},       {"y", gh_y},       {"eps_grid", gh_grid},
                  {"net_sizes", gh_sizes}, {"budget", gh_budget}, {"seed", gh_seed}};
      emit(report_envelope("gh", config, result), gh_out);
    } else if (*bishop_cmd) {
      const FiniteMetricSpace space = load_metric_input(b_in);
      const double floor = 2.0 * space.fill_radius();
      const double eta_min = b_eta_min > 0.0 ? b_eta_min : floor;
      const double eta_max = b_eta_max > 0.0 ? b_eta_max : space.diameter() / 4.0;
      const EmpiricalMeasure measure = EmpiricalMeasure::uniform(space.size());
      const BishopFit fit = bishop_fit(space, measure, eta_min, eta_max, b_steps, b_centers, b_seed);

      json result;
      result["fit"] = to_json(fit);
      result["replay_ok"] = replay_bishop_fit(fit);
      if (!b_cap_grid.empty()) {
        const auto grid = parse_grid(b_cap_grid);
        json rows = json::array();
        for (const auto& row : cap_bounds_check(space, fit, measure, grid)) {
          rows.push_back({{"r", row.r},
                          {"cap_lower", row.cap_lower},
                          {"cap_upper", row.cap_upper},
                          {"cap_exact", row.cap_exact},
                          {"lemma_lhs", row.lemma_lhs},
                          {"lemma_rhs", row.lemma_rhs},
                          {"lemma_lower_pass", row.lemma_lower_pass},
                          {"lemma_upper_pass", row.lemma_upper_pass},
                          {"scaling_half_evaluated", row.scaling_half_evaluated},
                          {"scaling_half_pass", row.scaling_half_pass},
                          {"scaling_two_evaluated", row.scaling_two_evaluated},
                          {"scaling_two_pass", row.scaling_two_pass}});
        }
        result["cap_bounds"] = std::move(rows);
      }
      if (!b_csv.empty()) {
        std::string csv = "center,eta,mass\n";
        for (std::size_t c = 0; c < fit.centers.size(); ++c)
          for (std::size_t e = 0; e < fit.eta_grid.size(); ++e)
            csv += std::to_string(fit.centers[c]) + "," + format_double(fit.eta_grid[e]) + "," +
                   format_double(fit.masses[c][e]) + "\n";
        write_text_file(b_csv, csv);
      }
      json config{{"space", b_in},   {"eta_min", eta_min}, {"eta_max", eta_max},
                  {"steps", b_steps}, {"centers", b_centers}, {"seed", b_seed}};
      emit(report_envelope("bishop", config, result), b_out);
    } else if (*ls_cmd) {
      const FoliatedSample sample = load_sample_input(ls_in);
      const LeafSpaceMode mode =
          ls_mode == "chain" ? LeafSpaceMode::ChainInfimum : LeafSpaceMode::LeafwiseHausdorff;
      const LeafSpace ls = leaf_space(sample, mode, ls_threads);
      json config{{"in", ls_in}, {"mode", ls_mode}, {"threads", ls_threads}};
      emit(report_envelope("leafspace", config, to_json(ls)), ls_out);
    } else if (*br_cmd) {
      const FiniteMetricSpace a = load_metric_input(br_a);
      const FiniteMetricSpace b = load_metric_input(br_b);
      const auto grid = parse_grid(br_grid);
      const BroaderReport report = check_broader(a, b, grid);
      json config{{"a", br_a}, {"b", br_b}, {"delta_grid", br_grid}};
      emit(report_envelope("broader", config, to_json(report)), br_out);
    } else if (*cc_cmd) {
      const FoliatedSample sample = load_sample_input(cc_in);
      const ClassConditionReport report = check_class_conditions(sample, cc_d, cc_c, cc_seed);
      json config{{"in", cc_in}, {"d", cc_d}, {"c", cc_c}, {"seed", cc_seed}};
      emit(report_envelope("classcheck", config, to_json(report)), cc_out);
    } else if (*cm_cmd) {
      const FoliatedSample base = load_sample_input(cm_base);
      const FoliatedSample alt = load_sample_input(cm_alt);
      const ComparabilityReport report = metric_comparability(base, alt, cm_c);
      json config{{"base", cm_base}, {"alt", cm_alt}, {"c", cm_c}};
      emit(report_envelope("compare-metrics", config, to_json(report)), cm_out);
    } else if (*sep_cmd) {
      const FoliatedSample m = load_sample_input(s_m);
      const FoliatedSample mp = load_sample_input(s_mp);
      const auto grid = parse_grid(s_grid);
      SeparationOptions options;
      options.normalize = !s_no_normalize;
      options.override_broader = s_override;
      options.threads = s_threads;
      options.seed = s_seed;
      options.class_d = s_d;
      SeparationReport report = separation_scan(m, mp, grid, s_c, options);
      if (!s_no_cert) separation_certificate(report, m, mp);
      if (!s_csv.empty()) {
        std::string csv = "r,A,B,ratio\n";
        for (const auto& row : report.rows)
          csv += format_double(row.r) + "," + format_double(row.a) + "," +
                 format_double(row.b) + "," + format_double(row.ratio) + "\n";
        write_text_file(s_csv, csv);
      }
      json config{{"m", s_m},
                  {"mprime", s_mp},
                  {"r_grid", s_grid},
                  {"c", s_c},
                  {"d", s_d},
                  {"seed", s_seed},
                  {"threads", s_threads},
                  {"normalize", !s_no_normalize},
                  {"override_broader", s_override}};
      emit(report_envelope("separate", config, to_json(report)), s_out);
    } else if (*self_cmd) {
      return run_selftest();
    }
  } catch (const Error& e) {
    json err;
    err["error"] = {{"kind", e.kind()}, {"message", e.what()}};
    std::cerr << err.dump(2) << '\n';
    return 1;
  } catch (const std::exception& e) {
    json err;
    err["error"] = {{"kind", "unexpected"}, {"message", e.what()}};
    std::cerr << err.dump(2) << '\n';
    return 1;
  }
  return 0;
}

namespace {

int run_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "[ok] " : "[FAIL] ") << name << '\n';
    if (!ok) ++failures;
  };

  // Line {0,1,2,3}.
  const FiniteMetricSpace line = FiniteMetricSpace::validated(
      {{0, 1, 2, 3}, {1, 0, 1, 2}, {2, 1, 0, 1}, {3, 2, 1, 0}});
  const std::vector<int> a{0, 1}, b{2, 3};
  check(hausdorff_distance(line, a, b) == 2.0, "hausdorff on the integer line");
  check(covering_number(line, 1.1, BoundMode::Exact).count == 2, "exact cover of the line");
  check(packing_number(line, 0.5, BoundMode::Exact).count == 4, "exact packing of the line");
  check(packing_number(line, 1.01, BoundMode::Exact).count == 2, "exact packing, wide radius");

  // Oracle identities.
  const FiniteMetricSpace two_1 = FiniteMetricSpace::validated({{0, 1}, {1, 0}});
  const FiniteMetricSpace two_3 = FiniteMetricSpace::validated({{0, 3}, {3, 0}});
  check(std::abs(gh_oracle_exact(two_1, two_3) - 1.0) < 1e-12, "gh oracle on two-point spaces");

  // Cov/Cap lower bound fires on point vs spread line.
  const FiniteMetricSpace point = FiniteMetricSpace::validated({{0.0}});
  const FiniteMetricSpace spread = FiniteMetricSpace::validated(
      {{0, 2, 4, 6}, {2, 0, 2, 4}, {4, 2, 0, 2}, {6, 4, 2, 0}});
  const auto cert = lower_bound_capcov(point, spread, 0.5);
  check(cert.has_value() && replay_certificate(*cert, point, spread),
        "cov/cap certificate fires and replays");

  // Torus leaf space matches the base circle.
  const std::vector<double> scales{1.0, 1.0};
  const FoliatedSample torus = sample_torus_fibration(2, 1, 8, 12, scales, 7);
  const LeafSpace ls = leaf_space(torus, LeafSpaceMode::ChainInfimum);
  bool rho_ok = true;
  for (int i = 0; i < 8 && rho_ok; ++i)
    for (int j = i + 1; j < 8; ++j) {
      double base = std::abs(i - j) / 8.0;
      base = std::min(base, 1.0 - base);
      if (std::abs(ls.space.distance(i, j) - base) > 2.0 * torus.fill_radius()) {
        rho_ok = false;
        break;
      }
    }
  check(rho_ok, "torus leaf space tracks the base circle");

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
  return failures == 0 ? 0 : 1;
}

}  // namespace
