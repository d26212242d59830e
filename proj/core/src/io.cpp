#include "spacewin/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "spacewin/cost.hpp"

namespace spacewin {

using json = nlohmann::ordered_json;

namespace {

constexpr double kEarthRadius = 6371008.8;

[[noreturn]] void parse_error(const std::string& what) {
  throw ValidationError({{ErrorCode::ParseError, what}});
}

struct Units {
  double length = 1.0;
  double time = 1.0;
  double speed = 1.0;
  double accel = 1.0;
  std::optional<GeoReference> geo;   // set when points are lon/lat
};

double unit_factor(const json& units, const char* key,
                   std::initializer_list<std::pair<const char*, double>> table) {
  if (!units.contains(key)) {
    return 1.0;
  }
  const auto name = units.at(key).get<std::string>();
  for (const auto& [n, f] : table) {
    if (name == n) {
      return f;
    }
  }
  parse_error(fmt::format("unknown {} unit '{}'", key, name));
}

Units read_units(const json& doc) {
  Units u;
  if (doc.contains("units")) {
    const json& units = doc.at("units");
    u.length = unit_factor(units, "length",
                           {{"m", 1.0}, {"km", 1000.0}, {"ft", 0.3048}, {"mile", 1609.344}, {"mi", 1609.344}});
    u.time = unit_factor(units, "time", {{"s", 1.0}, {"min", 60.0}, {"h", 3600.0}});
    u.speed = unit_factor(units, "speed", {{"m/s", 1.0}, {"km/h", 1.0 / 3.6}, {"mph", 0.44704}});
    u.accel = unit_factor(units, "acceleration",
                          {{"m/s^2", 1.0}, {"mph/s", 0.44704}, {"km/h/s", 1.0 / 3.6}});
  }
  return u;
}

Point raw_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_error(fmt::format("expected a point [x, y], got {}", j.dump()));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Point read_point(const json& j, const Units& u) {
  const Point p = raw_point(j);
  if (u.geo) {
    const double rad = std::numbers::pi / 180.0;
    return {kEarthRadius * (p.x - u.geo->lon0) * rad * std::cos(u.geo->lat0 * rad),
            kEarthRadius * (p.y - u.geo->lat0) * rad};
  }
  return u.length * p;
}

json write_point(Point p) { return json::array({p.x, p.y}); }

Point to_lonlat(Point p, const GeoReference& g) {
  const double rad = std::numbers::pi / 180.0;
  return {g.lon0 + p.x / (kEarthRadius * rad * std::cos(g.lat0 * rad)),
          g.lat0 + p.y / (kEarthRadius * rad)};
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number()) {
    parse_error(fmt::format("'{}' must be a number", key));
  }
  return v.get<double>();
}

int integer(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    parse_error(fmt::format("'{}' must be an integer", key));
  }
  return v.get<int>();
}

RideRequest read_request(const json& j, const Units& u) {
  RideRequest r;
  r.id = integer(j, "id", 0);
  if (!j.contains("pickup") || !j.contains("dropoff")) {
    parse_error(fmt::format("request {} needs pickup and dropoff", r.id));
  }
  r.pickup = read_point(j.at("pickup"), u);
  r.dropoff = read_point(j.at("dropoff"), u);
  r.pickup_radius = number(j, "r_pickup", 0.0) * u.length;
  r.dropoff_radius = number(j, "r_dropoff", 0.0) * u.length;
  r.request_time = number(j, "t_request", 0.0) * u.time;
  if (j.contains("frozen_pickup")) {
    r.frozen_pickup = read_point(j.at("frozen_pickup"), u);
  }
  return r;
}

ClusteringPattern read_clusters(const json& j) {
  if (!j.is_array()) {
    parse_error("'clusters' must be a list of event lists");
  }
  ClusteringPattern pattern;
  for (const auto& c : j) {
    if (!c.is_array()) {
      parse_error("each cluster must be a list of event references");
    }
    Cluster cluster;
    for (const auto& ref : c) {
      auto e = ref.is_string() ? parse_event_ref(ref.get<std::string>()) : std::nullopt;
      if (!e) {
        parse_error(fmt::format("bad event reference {}", ref.dump()));
      }
      cluster.events.push_back(*e);
    }
    pattern.clusters.push_back(std::move(cluster));
  }
  return pattern;
}

std::vector<RideRequest> read_requests(const json& j, const Units& u) {
  if (!j.is_array()) {
    parse_error("'requests' must be a list");
  }
  std::vector<RideRequest> out;
  for (const auto& r : j) {
    out.push_back(read_request(r, u));
  }
  return out;
}

ScenarioData read_scenario(const json& doc, Units& u) {
  if (!doc.is_object()) {
    parse_error("scenario must be a JSON object");
  }
  u = read_units(doc);
  ScenarioData d;
  if (!doc.contains("depot")) {
    parse_error("missing 'depot'");
  }
  const std::string coords = doc.value("coordinates", std::string("planar"));
  if (coords == "lonlat") {
    const Point origin = raw_point(doc.at("depot"));
    u.geo = GeoReference{origin.x, origin.y};
    d.geo = u.geo;
  } else if (coords != "planar") {
    parse_error(fmt::format("unknown coordinates '{}'", coords));
  } else if (doc.contains("geo_reference")) {
    const Point g = raw_point(doc.at("geo_reference"));
    d.geo = GeoReference{g.x, g.y};
  }
  d.depot = read_point(doc.at("depot"), u);
  d.start_time = number(doc, "start_time", 0.0) * u.time;
  d.requests = read_requests(doc.value("requests", json::array()), u);
  if (doc.contains("clusters") && !doc.at("clusters").is_null()) {
    d.pattern = read_clusters(doc.at("clusters"));
  }

  if (doc.contains("vehicle")) {
    const json& v = doc.at("vehicle");
    d.vehicle.shuttle_speed = number(v, "shuttle_speed", d.vehicle.shuttle_speed / u.speed) * u.speed;
    d.vehicle.walk_speed = number(v, "walk_speed", d.vehicle.walk_speed / u.speed) * u.speed;
    d.vehicle.service_time = number(v, "service_time", d.vehicle.service_time / u.time) * u.time;
    if (v.contains("acceleration") && v.at("acceleration").is_null()) {
      d.vehicle.acceleration = std::numeric_limits<double>::infinity();
    } else {
      d.vehicle.acceleration = number(v, "acceleration", d.vehicle.acceleration / u.accel) * u.accel;
    }
  }

  if (doc.contains("config")) {
    const json& c = doc.at("config");
    auto& cfg = d.config;
    cfg.gamma1 = number(c, "gamma1", cfg.gamma1);
    cfg.gamma2 = number(c, "gamma2", cfg.gamma2);
    cfg.alpha1 = number(c, "alpha1", cfg.alpha1);
    cfg.alpha2 = number(c, "alpha2", cfg.alpha2);
    const double alpha3 = number(c, "alpha3", cfg.alpha3_pickup);
    cfg.alpha3_pickup = number(c, "alpha3_pickup", alpha3);
    cfg.alpha3_dropoff = number(c, "alpha3_dropoff", c.contains("alpha3") ? alpha3 : cfg.alpha3_dropoff);
    cfg.capacity = integer(c, "capacity", cfg.capacity);
    const int mps = integer(c, "mps", cfg.mps_pickup);
    cfg.mps_pickup = integer(c, "mps_pickup", mps);
    cfg.mps_dropoff = integer(c, "mps_dropoff", c.contains("mps") ? mps : cfg.mps_dropoff);
    cfg.h_max = integer(c, "h_max", cfg.h_max);
    cfg.eps_place = number(c, "eps_place", cfg.eps_place);
    cfg.eps_geom = number(c, "eps_geom", cfg.eps_geom);
    cfg.max_placer_iterations = integer(c, "max_placer_iterations", cfg.max_placer_iterations);
    cfg.max_clusters = integer(c, "max_clusters", cfg.max_clusters);
  }

  if (doc.contains("onboard")) {
    for (const auto& o : doc.at("onboard")) {
      d.onboard.push_back({integer(o, "id", 0), number(o, "pickup_time", 0.0) * u.time,
                           number(o, "pickup_walk_time", 0.0) * u.time,
                           integer(o, "pickup_position", 0)});
    }
  }
  d.pickups_done = integer(doc, "pickups_done", 0);
  d.dropoffs_done = integer(doc, "dropoffs_done", 0);
  return d;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

json requests_json(std::span<const RideRequest> requests) {
  json out = json::array();
  for (const auto& r : requests) {
    json j;
    j["id"] = r.id;
    j["pickup"] = write_point(r.pickup);
    j["dropoff"] = write_point(r.dropoff);
    j["r_pickup"] = r.pickup_radius;
    j["r_dropoff"] = r.dropoff_radius;
    j["t_request"] = r.request_time;
    if (r.frozen_pickup) {
      j["frozen_pickup"] = write_point(*r.frozen_pickup);
    }
    out.push_back(std::move(j));
  }
  return out;
}

json clusters_json(const ClusteringPattern& pattern) {
  json out = json::array();
  for (const auto& c : pattern.clusters) {
    json refs = json::array();
    for (const auto& e : c.events) {
      refs.push_back(event_ref(e));
    }
    out.push_back(std::move(refs));
  }
  return out;
}

json scenario_json(const ScenarioData& d) {
  json doc;
  doc["depot"] = write_point(d.depot);
  if (d.geo) {
    doc["geo_reference"] = json::array({d.geo->lon0, d.geo->lat0});
  }
  if (d.start_time != 0.0) {
    doc["start_time"] = d.start_time;
  }
  doc["requests"] = requests_json(d.requests);
  if (d.pattern) {
    doc["clusters"] = clusters_json(*d.pattern);
  }
  json v;
  v["shuttle_speed"] = d.vehicle.shuttle_speed;
  v["walk_speed"] = d.vehicle.walk_speed;
  v["service_time"] = d.vehicle.service_time;
  v["acceleration"] = std::isinf(d.vehicle.acceleration) ? json(nullptr) : json(d.vehicle.acceleration);
  doc["vehicle"] = std::move(v);
  const auto& cfg = d.config;
  json c;
  c["gamma1"] = cfg.gamma1;
  c["gamma2"] = cfg.gamma2;
  c["alpha1"] = cfg.alpha1;
  c["alpha2"] = cfg.alpha2;
  c["alpha3_pickup"] = cfg.alpha3_pickup;
  c["alpha3_dropoff"] = cfg.alpha3_dropoff;
  c["capacity"] = cfg.capacity;
  c["mps_pickup"] = cfg.mps_pickup;
  c["mps_dropoff"] = cfg.mps_dropoff;
  c["h_max"] = cfg.h_max;
  c["eps_place"] = cfg.eps_place;
  c["eps_geom"] = cfg.eps_geom;
  c["max_placer_iterations"] = cfg.max_placer_iterations;
  c["max_clusters"] = cfg.max_clusters;
  doc["config"] = std::move(c);
  if (!d.onboard.empty()) {
    json ob = json::array();
    for (const auto& o : d.onboard) {
      ob.push_back({{"id", o.id},
                    {"pickup_time", o.pickup_time},
                    {"pickup_walk_time", o.pickup_walk_time},
                    {"pickup_position", o.pickup_position}});
    }
    doc["onboard"] = std::move(ob);
  }
  if (d.pickups_done != 0 || d.dropoffs_done != 0) {
    doc["pickups_done"] = d.pickups_done;
    doc["dropoffs_done"] = d.dropoffs_done;
  }
  return doc;
}

}  // namespace

ScenarioData parse_scenario(std::string_view json_text) {
  const json doc = parse_json(json_text);
  Units u;
  try {
    return read_scenario(doc, u);
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::ParseError, fmt::format("cannot read {}", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::ParseError, fmt::format("cannot write {}", path.string()));
  }
  out << text;
}

std::string scenario_to_json(const ScenarioData& data) { return scenario_json(data).dump(2) + "\n"; }

std::string route_to_json(const Route& route, const Scenario& scenario, const SolveResult* solve) {
  json doc;
  json seq = json::array();
  for (ClusterIndex c : route.sequence) {
    seq.push_back(c + 1);
  }
  doc["sequence"] = std::move(seq);
  json pts = json::array();
  for (const auto& p : route.routing_points) {
    pts.push_back(write_point(p));
  }
  doc["routing_points"] = {{"start", write_point(route.start)}, {"clusters", std::move(pts)}};
  doc["start_time"] = route.start_time;

  json timeline = json::array();
  for (std::size_t j = 0; j < route.sequence.size(); ++j) {
    const ClusterIndex c = route.sequence[j];
    json events = json::array();
    for (const auto& e : scenario.pattern().clusters[c].events) {
      events.push_back(event_ref(e));
    }
    timeline.push_back({{"position", j + 1},
                        {"cluster", c + 1},
                        {"point", write_point(route.routing_points[c])},
                        {"travel", route.travel_times[j]},
                        {"wait", route.waits[j]},
                        {"segment", route.segment_times[j]},
                        {"departure", route.departure_times[j]},
                        {"events", std::move(events)}});
  }
  doc["timeline"] = std::move(timeline);

  json passengers = json::array();
  for (const auto& p : route.passengers) {
    passengers.push_back({{"id", p.id},
                          {"wait", p.wait},
                          {"ride", p.ride},
                          {"walk_pickup", p.walk_pickup},
                          {"walk_dropoff", p.walk_dropoff},
                          {"pickup_time", p.pickup_time},
                          {"dropoff_time", p.dropoff_time},
                          {"pickup_position", p.pickup_position},
                          {"dropoff_position", p.dropoff_position}});
  }
  doc["per_passenger"] = std::move(passengers);
  doc["cost"] = {{"total", route.cost.total},
                 {"shuttle", route.cost.shuttle},
                 {"wait", route.cost.wait},
                 {"ride", route.cost.ride},
                 {"walk_pickup", route.cost.walk_pickup},
                 {"walk_dropoff", route.cost.walk_dropoff}};

  if (solve != nullptr) {
    json history = json::array();
    for (const auto& h : solve->history) {
      json s = json::array();
      for (ClusterIndex c : h.sequence) {
        s.push_back(c + 1);
      }
      json rec = {{"h", h.h}, {"sequence", std::move(s)}, {"sequence_cost", h.sequence_cost}};
      if (!h.repeated) {
        rec["cost"] = h.cost;
        rec["placer_iterations"] = h.placer_iterations;
        rec["placement_converged"] = h.placement_converged;
      }
      rec["repeated"] = h.repeated;
      rec["retained"] = h.retained;
      history.push_back(std::move(rec));
    }
    doc["solver"] = {{"hbar", solve->hbar},
                     {"termination", std::string(to_string(solve->termination))},
                     {"history", std::move(history)}};
  }
  return doc.dump(2) + "\n";
}

Route parse_route(std::string_view json_text, const Scenario& scenario) {
  const json doc = parse_json(json_text);
  try {
    Route r;
    for (const auto& id : doc.at("sequence")) {
      r.sequence.push_back(id.get<int>() - 1);
    }
    for (const auto& p : doc.at("routing_points").at("clusters")) {
      r.routing_points.push_back(raw_point(p));
    }
    r.start = raw_point(doc.at("routing_points").at("start"));
    r.start_time = doc.at("start_time").get<double>();
    for (const auto& t : doc.at("timeline")) {
      r.travel_times.push_back(t.at("travel").get<double>());
      r.waits.push_back(t.at("wait").get<double>());
      r.segment_times.push_back(t.at("segment").get<double>());
      r.departure_times.push_back(t.at("departure").get<double>());
    }
    r.cost = evaluate_cost(r, scenario);
    return r;
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

std::string route_geojson(const Route& route, const Scenario& scenario) {
  const auto& geo = scenario.data().geo;
  auto coord = [&](Point p) { return write_point(geo ? to_lonlat(p, *geo) : p); };
  auto line = [&](std::initializer_list<Point> pts, json props) {
    json c = json::array();
    for (Point p : pts) {
      c.push_back(coord(p));
    }
    return json{{"type", "Feature"},
                {"geometry", {{"type", "LineString"}, {"coordinates", std::move(c)}}},
                {"properties", std::move(props)}};
  };

  json features = json::array();
  json path = json::array({coord(route.start)});
  for (ClusterIndex c : route.sequence) {
    path.push_back(coord(route.routing_points[c]));
  }
  features.push_back({{"type", "Feature"},
                      {"geometry", {{"type", "LineString"}, {"coordinates", std::move(path)}}},
                      {"properties", {{"kind", "route"}, {"cost", route.cost.total}}}});
  features.push_back({{"type", "Feature"},
                      {"geometry", {{"type", "Point"}, {"coordinates", coord(route.start)}}},
                      {"properties", {{"kind", "start"}}}});
  for (std::size_t j = 0; j < route.sequence.size(); ++j) {
    const ClusterIndex c = route.sequence[j];
    json events = json::array();
    for (const auto& e : scenario.pattern().clusters[c].events) {
      events.push_back(event_ref(e));
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", coord(route.routing_points[c])}}},
                        {"properties",
                         {{"kind", "stop"},
                          {"position", j + 1},
                          {"cluster", c + 1},
                          {"departure", route.departure_times[j]},
                          {"events", std::move(events)}}}});
  }
  const auto requests = scenario.requests();
  for (int k = 0; k < scenario.passenger_count(); ++k) {
    const auto& r = requests[k];
    if (scenario.onboard_record(k) == nullptr) {
      features.push_back(line({r.pickup, route.routing_points[scenario.pickup_cluster(k)]},
                              {{"kind", "walk_pickup"}, {"passenger", r.id}}));
    }
    features.push_back(line({route.routing_points[scenario.dropoff_cluster(k)], r.dropoff},
                            {{"kind", "walk_dropoff"}, {"passenger", r.id}}));
  }
  json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump(2) + "\n";
}

std::string route_svg(const Route& route, const Scenario& scenario) {
  double min_x = route.start.x, max_x = route.start.x;
  double min_y = route.start.y, max_y = route.start.y;
  auto grow = [&](Point p, double r) {
    min_x = std::min(min_x, p.x - r);
    max_x = std::max(max_x, p.x + r);
    min_y = std::min(min_y, p.y - r);
    max_y = std::max(max_y, p.y + r);
  };
  for (const auto& r : scenario.requests()) {
    grow(r.pickup, r.pickup_radius);
    grow(r.dropoff, r.dropoff_radius);
  }
  for (const auto& p : route.routing_points) {
    grow(p, 0.0);
  }
  constexpr double kSize = 800.0;
  constexpr double kMargin = 20.0;
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  const double scale = (kSize - 2 * kMargin) / span;
  auto sx = [&](double x) { return kMargin + (x - min_x) * scale; };
  auto sy = [&](double y) { return kSize - kMargin - (y - min_y) * scale; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{0:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {0:.0f}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kSize);
  for (const auto& r : scenario.requests()) {
    out += fmt::format(
        "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"none\" stroke=\"#9ecae1\"/>\n",
        sx(r.pickup.x), sy(r.pickup.y), r.pickup_radius * scale);
    out += fmt::format(
        "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"none\" stroke=\"#fdae6b\"/>\n",
        sx(r.dropoff.x), sy(r.dropoff.y), r.dropoff_radius * scale);
  }
  const auto requests = scenario.requests();
  auto walk = [&](Point a, Point b, const char* color) {
    out += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
        "stroke-dasharray=\"4 3\"/>\n",
        sx(a.x), sy(a.y), sx(b.x), sy(b.y), color);
  };
  for (int k = 0; k < scenario.passenger_count(); ++k) {
    if (scenario.onboard_record(k) == nullptr) {
      walk(requests[k].pickup, route.routing_points[scenario.pickup_cluster(k)], "#3182bd");
    }
    walk(route.routing_points[scenario.dropoff_cluster(k)], requests[k].dropoff, "#e6550d");
  }
  std::string pts = fmt::format("{:.2f},{:.2f}", sx(route.start.x), sy(route.start.y));
  for (ClusterIndex c : route.sequence) {
    pts += fmt::format(" {:.2f},{:.2f}", sx(route.routing_points[c].x), sy(route.routing_points[c].y));
  }
  out += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"#222\" stroke-width=\"2\"/>\n", pts);
  out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"#222\"/>\n",
                     sx(route.start.x) - 5, sy(route.start.y) - 5);
  for (std::size_t j = 0; j < route.sequence.size(); ++j) {
    const Point p = route.routing_points[route.sequence[j]];
    out += fmt::format(
        "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"5\" fill=\"#31a354\"/>\n"
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" font-family=\"sans-serif\">{}</text>\n",
        sx(p.x), sy(p.y), sx(p.x) + 7, sy(p.y) - 7, j + 1);
  }
  out += "</svg>\n";
  return out;
}

ReplayFile parse_replay(std::string_view json_text) {
  const json doc = parse_json(json_text);
  try {
    if (!doc.contains("scenario")) {
      parse_error("replay needs a 'scenario'");
    }
    ReplayFile out;
    Units u;
    out.scenario = read_scenario(doc.at("scenario"), u);
    for (const auto& b : doc.value("batches", json::array())) {
      ReplayBatch batch;
      batch.time = number(b, "time", 0.0) * u.time;
      batch.requests = read_requests(b.value("requests", json::array()), u);
      if (b.contains("clusters") && !b.at("clusters").is_null()) {
        batch.clusters = read_clusters(b.at("clusters"));
      }
      out.batches.push_back(std::move(batch));
    }
    return out;
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

std::string replay_to_json(const ReplayFile& replay) {
  json doc;
  doc["scenario"] = scenario_json(replay.scenario);
  json batches = json::array();
  for (const auto& b : replay.batches) {
    json j;
    j["time"] = b.time;
    j["requests"] = requests_json(b.requests);
    if (b.clusters) {
      j["clusters"] = clusters_json(*b.clusters);
    }
    batches.push_back(std::move(j));
  }
  doc["batches"] = std::move(batches);
  return doc.dump(2) + "\n";
}

}  // namespace spacewin
