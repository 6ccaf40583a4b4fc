#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ghcert/bishop.hpp"
#include "ghcert/foliation.hpp"
#include "ghcert/gh_bounds.hpp"
#include "ghcert/metric_space.hpp"
#include "ghcert/nets.hpp"
#include "ghcert/separation.hpp"

namespace ghcert {

using nlohmann::json;

// Metric space: {"n": int, "dist": [[...]], "labels": [...] | null}.
json to_json(const FiniteMetricSpace& space);
FiniteMetricSpace metric_space_from_json(const json& j, bool validate = true);

// Foliated sample: the metric-space object nested under "space" ("dist" is
// null above the materialization limit and recomputed from the model), plus
// leaf_id, ambient, p, n, model and model parameters.
json to_json(const FoliatedSample& sample);
FoliatedSample foliated_sample_from_json(const json& j);

// Accepts either format; foliated samples are detected by the "space" key.
FiniteMetricSpace load_any_metric(const json& j, bool validate = true);

json to_json(const Net& net);
json to_json(const CoveringResult& result, double epsilon);
json to_json(const PackingResult& result);

json to_json(const GhBoundCertificate& cert);
GhBoundCertificate certificate_from_json(const json& j);

json to_json(const BishopFit& fit);
json to_json(const LeafSpace& ls);
json to_json(const BroaderReport& report);
json to_json(const ClassConditionReport& report);
json to_json(const ComparabilityReport& report);
json to_json(const SeparationReport& report);

std::string tri_state_name(TriState s);

// Lower-triangular CSV (rows 0..n-1, row i holds d(i,0..i)); doubles are
// emitted shortest-round-trip so files reload bit-exactly.
std::string metric_space_to_csv(const FiniteMetricSpace& space);
FiniteMetricSpace metric_space_from_csv(const std::string& text, bool validate = true);

std::string format_double(double v);

// Canonical report writing: sorted keys, shortest round-trip floats, final
// newline. Identical inputs produce byte-identical files.
void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ghcert
