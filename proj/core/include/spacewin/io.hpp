#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spacewin/altmin.hpp"
#include "spacewin/model.hpp"

namespace spacewin {

// Scenario documents may state units for lengths (m, km, ft, mile), times
// (s, min, h), speeds (m/s, km/h, mph) and accelerations (m/s^2, mph/s);
// everything is converted to meters and seconds on the way in. With
// "coordinates": "lonlat" points are [lon, lat] and are projected to local
// meters around the depot.
ScenarioData parse_scenario(std::string_view json_text);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

// Writes an instance in SI units, readable by parse_scenario.
std::string scenario_to_json(const ScenarioData& data);

std::string route_to_json(const Route& route, const Scenario& scenario,
                          const SolveResult* solve = nullptr);

// Reads the timeline back from route_to_json output.
Route parse_route(std::string_view json_text, const Scenario& scenario);

// LineString of the visit plus one LineString per walk, as a FeatureCollection.
std::string route_geojson(const Route& route, const Scenario& scenario);
std::string route_svg(const Route& route, const Scenario& scenario);

struct ReplayBatch {
  double time = 0.0;
  std::vector<RideRequest> requests;
  std::optional<ClusteringPattern> clusters;
};

// The scenario holds the first batch; later batches arrive at their times.
struct ReplayFile {
  ScenarioData scenario;
  std::vector<ReplayBatch> batches;
};

ReplayFile parse_replay(std::string_view json_text);
std::string replay_to_json(const ReplayFile& replay);

}  // namespace spacewin
