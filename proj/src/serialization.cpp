#include "ghcert/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ghcert {

namespace {

constexpr int kDenseSerializationLimit = 3000;

json dist_matrix_json(const FiniteMetricSpace& space) {
  json rows = json::array();
  for (int i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < space.size(); ++j) row.push_back(space.distance(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json labels_json(const std::vector<std::string>& labels) {
  if (labels.empty()) return nullptr;
  return json(labels);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json to_json(const FiniteMetricSpace& space) {
  json j;
  j["n"] = space.size();
  j["dist"] = dist_matrix_json(space);
  j["labels"] = labels_json(space.labels());
  return j;
}

FiniteMetricSpace metric_space_from_json(const json& j, bool validate) {
  if (!j.contains("n") || !j.contains("dist"))
    throw invalid_argument_error("metric space JSON needs \"n\" and \"dist\"");
  const int n = j.at("n").get<int>();
  if (j.at("dist").is_null())
    throw invalid_argument_error("metric space JSON has no distance matrix");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (const auto& row : j.at("dist")) {
    if (static_cast<int>(row.size()) != n)
      throw invalid_argument_error("distance matrix row length mismatch");
    for (const auto& v : row) flat.push_back(v.get<double>());
  }
  if (static_cast<int>(flat.size()) != n * n)
    throw invalid_argument_error("distance matrix row count mismatch");
  std::vector<std::string> labels;
  if (j.contains("labels") && !j.at("labels").is_null())
    labels = j.at("labels").get<std::vector<std::string>>();
  return validate ? FiniteMetricSpace::validated(n, std::move(flat), std::move(labels))
                  : FiniteMetricSpace::trusted(n, std::move(flat), std::move(labels));
}

json to_json(const FoliatedSample& sample) {
  json space;
  space["n"] = sample.size();
  if (sample.has_dense() && sample.size() <= kDenseSerializationLimit) {
    space["dist"] = dist_matrix_json(sample.dense());
    space["labels"] = labels_json(sample.dense().labels());
  } else if (!sample.has_dense() && sample.model == FoliationModel::Custom) {
    throw invalid_argument_error("custom sample without a distance matrix cannot be saved");
  } else if (sample.model == FoliationModel::Custom) {
    space["dist"] = dist_matrix_json(sample.dense());
    space["labels"] = labels_json(sample.dense().labels());
  } else {
    // Too large to materialize; distances are recomputed from the model.
    space["dist"] = nullptr;
    space["labels"] = nullptr;
  }

  json j;
  j["space"] = std::move(space);
  j["leaf_id"] = sample.leaf_id;
  j["ambient"] = sample.ambient;
  j["p"] = sample.leaf_dim;
  j["n"] = sample.manifold_dim;
  j["model"] = model_name(sample.model);
  j["metric_scale"] = sample.metric_scale;
  j["scales"] = sample.model == FoliationModel::TorusFibration ? json(sample.scales) : json(nullptr);
  j["fiber_phase"] =
      sample.model == FoliationModel::Hopf ? json(sample.fiber_phase) : json(nullptr);
  return j;
}

FoliatedSample foliated_sample_from_json(const json& j) {
  FoliatedSample sample;
  sample.model = model_from_name(j.at("model").get<std::string>());
  sample.leaf_dim = j.at("p").get<int>();
  sample.manifold_dim = j.at("n").get<int>();
  sample.ambient = j.at("ambient").get<std::vector<std::vector<double>>>();
  sample.leaf_id = j.at("leaf_id").get<std::vector<int>>();
  if (j.contains("metric_scale")) sample.metric_scale = j.at("metric_scale").get<double>();
  if (j.contains("scales") && !j.at("scales").is_null())
    sample.scales = j.at("scales").get<std::vector<double>>();
  if (j.contains("fiber_phase") && !j.at("fiber_phase").is_null())
    sample.fiber_phase = j.at("fiber_phase").get<std::vector<double>>();

  const json& space = j.at("space");
  if (space.contains("dist") && !space.at("dist").is_null()) {
    sample.set_dense(metric_space_from_json(space, /*validate=*/false));
    if (sample.dense().size() != sample.size())
      throw invalid_argument_error("sample matrix size does not match the point count");
  } else if (sample.model == FoliationModel::Custom) {
    throw invalid_argument_error("custom sample JSON needs an explicit distance matrix");
  }
  sample.check_well_formed();
  return sample;
}

FiniteMetricSpace load_any_metric(const json& j, bool validate) {
  if (j.contains("space")) {
    FoliatedSample sample = foliated_sample_from_json(j);
    if (sample.has_dense())
      return validate
                 ? FiniteMetricSpace::validated(sample.dense().size(), sample.dense().flat(),
                                                sample.dense().labels())
                 : sample.dense();
    // Materialize through the model; large samples stay usable via the
    // sample-specific commands instead.
    const int n = sample.size();
    std::vector<double> flat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const double d = sample.distance(a, b);
        flat[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] = d;
        flat[static_cast<std::size_t>(b) * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = d;
      }
    return validate ? FiniteMetricSpace::validated(n, std::move(flat))
                    : FiniteMetricSpace::trusted(n, std::move(flat));
  }
  return metric_space_from_json(j, validate);
}

json to_json(const Net& net) {
  json j;
  j["centers"] = net.centers;
  j["radius"] = net.radius;
  return j;
}

json to_json(const CoveringResult& result, double epsilon) {
  json j;
  j["epsilon"] = epsilon;
  j["count"] = result.count;
  j["mode"] = result.mode == BoundMode::Exact ? "exact" : "greedy-upper";
  j["centers"] = result.net.centers;
  j["below_resolution_floor"] = result.below_floor;
  return j;
}

json to_json(const PackingResult& result) {
  json j;
  j["epsilon"] = result.epsilon;
  j["count"] = result.count;
  j["mode"] = result.mode == BoundMode::Exact ? "exact" : "greedy-lower";
  j["centers"] = result.centers;
  j["below_resolution_floor"] = result.below_floor;
  return j;
}

json to_json(const GhBoundCertificate& cert) {
  json j;
  j["kind"] = cert.kind == GhBoundCertificate::Kind::Upper ? "upper" : "lower";
  j["value"] = cert.value;
  if (const auto* nets = std::get_if<MatchedNetsEvidence>(&cert.evidence)) {
    json e;
    e["type"] = "matched-nets";
    e["x_net"] = nets->x_net;
    e["y_tuple"] = nets->y_tuple;
    e["r_x"] = nets->r_x;
    e["r_y"] = nets->r_y;
    e["distortion"] = nets->distortion;
    j["evidence"] = std::move(e);
  } else if (const auto* capcov = std::get_if<CovCapEvidence>(&cert.evidence)) {
    json e;
    e["type"] = "cov-cap";
    e["epsilon"] = capcov->epsilon;
    e["cover_x"] = to_json(capcov->cover_x, capcov->epsilon);
    e["packing_y"] = to_json(capcov->packing_y);
    j["evidence"] = std::move(e);
  } else if (const auto* nd = std::get_if<NetDistortionEvidence>(&cert.evidence)) {
    json e;
    e["type"] = "net-distortion";
    e["epsilon"] = nd->epsilon;
    e["x_net"] = nd->x_net;
    e["best_tuple"] = nd->best_tuple;
    e["best_distortion"] = nd->best_distortion;
    e["tuples_checked"] = nd->tuples_checked;
    j["evidence"] = std::move(e);
  }
  return j;
}

GhBoundCertificate certificate_from_json(const json& j) {
  GhBoundCertificate cert;
  cert.kind = j.at("kind").get<std::string>() == "upper" ? GhBoundCertificate::Kind::Upper
                                                         : GhBoundCertificate::Kind::Lower;
  cert.value = j.at("value").get<double>();
  const json& e = j.at("evidence");
  const std::string type = e.at("type").get<std::string>();
  if (type == "matched-nets") {
    MatchedNetsEvidence ev;
    ev.x_net = e.at("x_net").get<std::vector<int>>();
    ev.y_tuple = e.at("y_tuple").get<std::vector<int>>();
    ev.r_x = e.at("r_x").get<double>();
    ev.r_y = e.at("r_y").get<double>();
    ev.distortion = e.at("distortion").get<double>();
    cert.evidence = std::move(ev);
  } else if (type == "cov-cap") {
    CovCapEvidence ev;
    ev.epsilon = e.at("epsilon").get<double>();
    ev.cover_x.count = e.at("cover_x").at("count").get<int>();
    ev.cover_x.net.centers = e.at("cover_x").at("centers").get<std::vector<int>>();
    ev.cover_x.net.radius = e.at("cover_x").at("epsilon").get<double>();
    ev.cover_x.mode = e.at("cover_x").at("mode").get<std::string>() == "exact"
                          ? BoundMode::Exact
                          : BoundMode::Greedy;
    ev.packing_y.count = e.at("packing_y").at("count").get<int>();
    ev.packing_y.centers = e.at("packing_y").at("centers").get<std::vector<int>>();
    ev.packing_y.epsilon = e.at("packing_y").at("epsilon").get<double>();
    ev.packing_y.mode = e.at("packing_y").at("mode").get<std::string>() == "exact"
                            ? BoundMode::Exact
                            : BoundMode::Greedy;
    cert.evidence = std::move(ev);
  } else if (type == "net-distortion") {
    NetDistortionEvidence ev;
    ev.epsilon = e.at("epsilon").get<double>();
    ev.x_net = e.at("x_net").get<std::vector<int>>();
    ev.best_tuple = e.at("best_tuple").get<std::vector<int>>();
    ev.best_distortion = e.at("best_distortion").get<double>();
    ev.tuples_checked = e.at("tuples_checked").get<std::uint64_t>();
    cert.evidence = std::move(ev);
  } else {
    throw invalid_argument_error("unknown certificate evidence type: " + type);
  }
  return cert;
}

json to_json(const BishopFit& fit) {
  json j;
  j["p_hat"] = fit.p_hat;
  j["beta_hat"] = fit.beta_hat;
  j["eta0"] = fit.eta0;
  j["c_derived"] = fit.c_derived;
  j["theta_derived"] = fit.theta_derived;
  j["residual"] = fit.residual;
  j["centers"] = fit.centers;
  j["eta_grid"] = fit.eta_grid;
  j["masses"] = fit.masses;
  return j;
}

json to_json(const LeafSpace& ls) {
  json j;
  j["mode"] = ls.mode == LeafSpaceMode::ChainInfimum ? "chain" : "hausdorff";
  j["leaf_sizes"] = ls.leaf_sizes;
  j["space"] = to_json(ls.space);
  return j;
}

std::string tri_state_name(TriState s) {
  switch (s) {
    case TriState::Holds: return "holds";
    case TriState::Fails: return "fails";
    case TriState::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

json to_json(const BroaderReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["delta"] = row.delta;
    r["cap_b_lower"] = row.cap_b_lower;
    r["cap_a_ref"] = row.cap_a_ref;
    r["a_exact"] = row.a_exact;
    r["b_exact"] = row.b_exact;
    r["status"] = tri_state_name(row.status);
    rows.push_back(std::move(r));
  }
  json j;
  j["overall"] = tri_state_name(report.overall);
  j["holds"] = report.holds();
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const ClassConditionReport& report) {
  json j;
  json c1;
  c1["verified_up_to"] = report.cond1_verified_up_to;
  c1["vacuous_above"] = report.cond1_vacuous_above;
  c1["first_violation"] =
      report.cond1_first_violation ? json(*report.cond1_first_violation) : json(nullptr);
  c1["pass"] = report.cond1_pass;
  j["condition1"] = std::move(c1);

  json fits = json::array();
  for (const auto& row : report.leaf_fits) {
    json f;
    f["leaf"] = row.leaf;
    f["fit_ok"] = row.fit_ok;
    f["p_hat"] = row.p_hat;
    f["c_leaf"] = row.c_leaf;
    f["theta_leaf"] = row.theta_leaf;
    f["note"] = row.note;
    fits.push_back(std::move(f));
  }
  json c2;
  c2["leaf_fits"] = std::move(fits);
  c2["max_c_leaf"] = report.max_c_leaf;
  c2["min_theta_leaf"] = report.min_theta_leaf;
  c2["c_manifold"] = report.c_manifold;
  c2["theta_manifold"] = report.theta_manifold;
  c2["c_pass"] = report.cond2_c_pass;
  c2["theta_leq_c"] = report.cond2_theta_leq_c;
  c2["theta_geq_inv_c"] = report.cond2_theta_geq_inv;
  c2["note"] = report.cond2_note;
  j["condition2"] = std::move(c2);

  json c3;
  c3["checkable"] = report.cond3_checkable;
  c3["leaf_volumes"] = report.leaf_volumes;
  c3["pass"] = report.cond3_pass;
  j["condition3"] = std::move(c3);

  j["leaves_sampled"] = report.leaves_sampled;
  j["leaves_subsampled"] = report.leaves_subsampled;
  return j;
}

json to_json(const ComparabilityReport& report) {
  json j;
  j["pointwise_worst_ratio"] = report.pointwise_worst_ratio;
  j["leafspace_worst_ratio"] = report.leafspace_worst_ratio;
  j["pass"] = report.pass;
  return j;
}

json to_json(const SeparationReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["r"] = row.r;
    r["k"] = row.k;
    r["l_prime"] = row.l_prime;
    r["l"] = row.l;
    r["A"] = row.a;
    r["B"] = row.b;
    r["ratio"] = row.ratio;
    r["leaf_below_floor"] = row.leaf_below_floor;
    r["base_below_floor"] = row.base_below_floor;
    r["packing_replay_ok"] = row.packing_replay_ok;
    r["cover_replay_ok"] = row.cover_replay_ok;
    r["analytic_a_ok"] = row.analytic_a_ok;
    r["analytic_b_ok"] = row.analytic_b_ok;
    rows.push_back(std::move(r));
  }
  json j;
  j["rows"] = std::move(rows);
  j["fitted_exponent"] = report.fitted_exponent;
  j["valid_rows"] = report.valid_rows;
  j["broader"] = to_json(report.broader);
  j["broader_overridden"] = report.broader_overridden;
  j["normalized"] = report.normalized;
  j["leaves_subsampled"] = report.leaves_subsampled;
  json constants;
  constants["C"] = report.constants.c;
  constants["d"] = report.constants.d > 0.0 ? json(report.constants.d) : json(nullptr);
  constants["p"] = report.constants.p;
  constants["n"] = report.constants.n;
  constants["p_prime"] = report.constants.p_prime;
  constants["n_prime"] = report.constants.n_prime;
  j["constants"] = std::move(constants);
  j["certificate"] = report.certificate ? to_json(*report.certificate) : json(nullptr);
  j["certificate_eps0"] = report.certificate ? json(report.certificate_eps0) : json(nullptr);
  return j;
}

std::string metric_space_to_csv(const FiniteMetricSpace& space) {
  std::ostringstream out;
  for (int i = 0; i < space.size(); ++i) {
    for (int j = 0; j <= i; ++j) {
      if (j > 0) out << ',';
      out << format_double(space.distance(i, j));
    }
    out << '\n';
  }
  return out.str();
}

FiniteMetricSpace metric_space_from_csv(const std::string& text, bool validate) {
  std::vector<std::vector<double>> lower;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      double v = 0.0;
      const char* begin = line.data() + pos;
      const char* end = line.data() + comma;
      const auto res = std::from_chars(begin, end, v);
      if (res.ec != std::errc() || res.ptr != end)
        throw invalid_argument_error("malformed CSV entry: " + line.substr(pos, comma - pos));
      row.push_back(v);
      pos = comma + 1;
    }
    if (row.size() != lower.size() + 1)
      throw invalid_argument_error("CSV is not lower-triangular");
    lower.push_back(std::move(row));
  }
  const int n = static_cast<int>(lower.size());
  std::vector<double> flat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = lower[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      flat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = v;
      flat[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = v;
    }
  return validate ? FiniteMetricSpace::validated(n, std::move(flat))
                  : FiniteMetricSpace::trusted(n, std::move(flat));
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("io", "write failed: " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open for reading: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error("malformed-input", std::string("JSON parse error in ") + path.string() + ": " +
                                       e.what());
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot open for writing: " + path.string());
  out << text;
  if (!out) throw Error("io", "write failed: " + path.string());
}

}  // namespace ghcert
