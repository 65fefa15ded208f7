#include "gatsbi/scenario.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace gatsbi {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

void require_fields(const Json& obj, const std::string& where,
                    const std::set<std::string>& required,
                    const std::set<std::string>& optional = {}) {
  for (const auto& item : obj.items()) {
    if (!required.count(item.key()) && !optional.count(item.key()))
      throw ParseError("unknown field: " + where + item.key());
  }
  for (const std::string& key : required) {
    if (!obj.contains(key)) throw ParseError("missing field: " + where + key);
  }
}

double number_at(const Json& obj, const std::string& where, const std::string& key) {
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ParseError("field must be a number: " + where + key);
  return v.get<double>();
}

int int_at(const Json& obj, const std::string& where, const std::string& key) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError("field must be an integer: " + where + key);
  return v.get<int>();
}

Vec3 vec3_at(const Json& obj, const std::string& where, const std::string& key) {
  const Json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number())
    throw ParseError("field must be an [x, y, z] array: " + where + key);
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

void merge_box(GridBounds& gb, const Vec3& min, const Vec3& max, double s, bool& first) {
  Vec3i lo, hi;
  for (int i = 0; i < 3; ++i) {
    lo[i] = int(std::ceil(min[i] / s - 0.5));
    hi[i] = int(std::ceil(max[i] / s - 0.5)) - 1;
    hi[i] = std::max(hi[i], lo[i]);
  }
  if (first) {
    gb.min = lo;
    gb.max = hi;
    first = false;
  } else {
    gb.min = gb.min.cwiseMin(lo);
    gb.max = gb.max.cwiseMax(hi);
  }
}

}  // namespace

GridBounds derive_bounds(const std::vector<BoxShape>& shapes, const ScenarioConfig& config) {
  const double s = config.voxel_size;
  GridBounds gb;
  bool first = true;
  for (const BoxShape& shape : shapes) merge_box(gb, shape.min, shape.max, s, first);

  const Vec3i start = voxel_of(config.start_pose.position, s);
  if (first) {
    gb.min = gb.max = start;
    first = false;
  } else {
    gb.min = gb.min.cwiseMin(start);
    gb.max = gb.max.cwiseMax(start);
  }
  if (config.bounding_box)
    merge_box(gb, config.bounding_box->min, config.bounding_box->max, s, first);

  const int pad = int(std::ceil(config.view.d_max / s)) + 2;
  gb.min -= Vec3i::Constant(pad);
  gb.max += Vec3i::Constant(pad);
  return gb;
}

Scenario load_world(const std::string& text, const std::string& name) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario document must be an object");

  require_fields(doc, "",
                 {"voxel_size", "shapes", "start_pose", "view", "lidar", "dd", "rpt",
                  "flight_speed", "scan_period", "rng_seed"},
                 {"bounding_box"});

  ScenarioConfig config;
  config.name = name;
  config.voxel_size = number_at(doc, "", "voxel_size");
  if (!(config.voxel_size > 0.0)) throw ParseError("voxel_size must be positive");

  const Json& shapes_json = doc.at("shapes");
  if (!shapes_json.is_array() || shapes_json.empty()) throw ParseError("empty world");
  std::vector<BoxShape> shapes;
  for (std::size_t i = 0; i < shapes_json.size(); ++i) {
    const Json& sj = shapes_json[i];
    const std::string where = "shapes[" + std::to_string(i) + "].";
    if (!sj.is_object()) throw ParseError("shape must be an object: " + where);
    require_fields(sj, where, {"label", "min", "max"});
    BoxShape shape;
    const std::string label = sj.at("label").get<std::string>();
    if (label == "bridge")
      shape.label = GroundTruthLabel::Bridge;
    else if (label == "obstacle")
      shape.label = GroundTruthLabel::Obstacle;
    else
      throw ParseError("shape label must be bridge or obstacle: " + where + "label");
    shape.min = vec3_at(sj, where, "min");
    shape.max = vec3_at(sj, where, "max");
    if (!(shape.min.array() < shape.max.array()).all())
      throw ParseError("shape min must be below max on every axis: " + where);
    shapes.push_back(shape);
  }

  const Json& pose_json = doc.at("start_pose");
  require_fields(pose_json, "start_pose.", {"position", "yaw"});
  config.start_pose.position = vec3_at(pose_json, "start_pose.", "position");
  config.start_pose.yaw = deg2rad(number_at(pose_json, "start_pose.", "yaw"));

  const Json& view_json = doc.at("view");
  require_fields(view_json, "view.", {"apex_deg", "d_min", "d_max", "angle_tol_deg"});
  config.view.apex_deg = number_at(view_json, "view.", "apex_deg");
  config.view.d_min = number_at(view_json, "view.", "d_min");
  config.view.d_max = number_at(view_json, "view.", "d_max");
  config.view.angle_tol_deg = number_at(view_json, "view.", "angle_tol_deg");
  if (config.view.d_min < 0.0 || config.view.d_max < config.view.d_min)
    throw ParseError("view distances need 0 <= d_min <= d_max");

  const Json& lidar_json = doc.at("lidar");
  require_fields(lidar_json, "lidar.",
                 {"range_max", "horizontal_fov", "vertical_fov_min", "vertical_fov_max",
                  "azimuth_steps", "elevation_steps"},
                 {"label_noise"});
  config.lidar.range_max = number_at(lidar_json, "lidar.", "range_max");
  config.lidar.horizontal_fov = number_at(lidar_json, "lidar.", "horizontal_fov");
  config.lidar.vertical_fov_min = number_at(lidar_json, "lidar.", "vertical_fov_min");
  config.lidar.vertical_fov_max = number_at(lidar_json, "lidar.", "vertical_fov_max");
  config.lidar.azimuth_steps = int_at(lidar_json, "lidar.", "azimuth_steps");
  config.lidar.elevation_steps = int_at(lidar_json, "lidar.", "elevation_steps");
  if (lidar_json.contains("label_noise"))
    config.lidar.label_noise = number_at(lidar_json, "lidar.", "label_noise");
  if (config.lidar.range_max <= 0.0) throw ParseError("lidar.range_max must be positive");
  if (config.lidar.azimuth_steps < 1 || config.lidar.elevation_steps < 1)
    throw ParseError("lidar step counts must be at least 1");
  if (config.lidar.label_noise < 0.0 || config.lidar.label_noise > 1.0)
    throw ParseError("lidar.label_noise must be within [0, 1]");

  config.dd = number_at(doc, "", "dd");
  config.rpt = number_at(doc, "", "rpt");
  config.flight_speed = number_at(doc, "", "flight_speed");
  config.scan_period = number_at(doc, "", "scan_period");
  if (config.dd < 0.0) throw ParseError("dd must be non-negative");
  if (config.rpt <= 0.0) throw ParseError("rpt must be positive");
  if (config.flight_speed <= 0.0) throw ParseError("flight_speed must be positive");
  if (config.scan_period <= 0.0) throw ParseError("scan_period must be positive");

  const Json& seed_json = doc.at("rng_seed");
  if (!seed_json.is_number_unsigned() && !seed_json.is_number_integer())
    throw ParseError("rng_seed must be an unsigned integer");
  config.rng_seed = seed_json.get<std::uint64_t>();

  if (doc.contains("bounding_box")) {
    const Json& box_json = doc.at("bounding_box");
    require_fields(box_json, "bounding_box.", {"min", "max"});
    MeterBox box;
    box.min = vec3_at(box_json, "bounding_box.", "min");
    box.max = vec3_at(box_json, "bounding_box.", "max");
    if (!(box.min.array() < box.max.array()).all())
      throw ParseError("bounding_box min must be below max on every axis");
    config.bounding_box = box;
  }

  const GridBounds bounds = derive_bounds(shapes, config);
  WorldModel world = world_from_primitives(shapes, config.voxel_size, 0, bounds);

  const Vec3i start_voxel = voxel_of(config.start_pose.position, config.voxel_size);
  if (!world.bounds().contains(start_voxel) || !world.is_empty(start_voxel))
    throw ParseError("start_pose must sit in an empty world cell");
  if (config.bounding_box) {
    const Vec3& p = config.start_pose.position;
    if (!((p.array() >= config.bounding_box->min.array()).all() &&
          (p.array() < config.bounding_box->max.array()).all()))
      throw ParseError("start_pose must sit inside the bounding_box");
  }

  return {std::move(world), std::move(config)};
}

std::string serialize_scenario(const std::vector<BoxShape>& shapes,
                               const ScenarioConfig& config) {
  OrderedJson doc;
  doc["voxel_size"] = config.voxel_size;
  doc["shapes"] = OrderedJson::array();
  for (const BoxShape& s : shapes) {
    OrderedJson sj;
    sj["label"] = (s.label == GroundTruthLabel::Bridge) ? "bridge" : "obstacle";
    sj["min"] = {s.min.x(), s.min.y(), s.min.z()};
    sj["max"] = {s.max.x(), s.max.y(), s.max.z()};
    doc["shapes"].push_back(sj);
  }
  doc["start_pose"] = {{"position",
                        {config.start_pose.position.x(), config.start_pose.position.y(),
                         config.start_pose.position.z()}},
                       {"yaw", rad2deg(config.start_pose.yaw)}};
  doc["view"] = {{"apex_deg", config.view.apex_deg},
                 {"d_min", config.view.d_min},
                 {"d_max", config.view.d_max},
                 {"angle_tol_deg", config.view.angle_tol_deg}};
  doc["lidar"] = {{"range_max", config.lidar.range_max},
                  {"horizontal_fov", config.lidar.horizontal_fov},
                  {"vertical_fov_min", config.lidar.vertical_fov_min},
                  {"vertical_fov_max", config.lidar.vertical_fov_max},
                  {"azimuth_steps", config.lidar.azimuth_steps},
                  {"elevation_steps", config.lidar.elevation_steps}};
  if (config.lidar.label_noise > 0.0) doc["lidar"]["label_noise"] = config.lidar.label_noise;
  doc["dd"] = config.dd;
  doc["rpt"] = config.rpt;
  doc["flight_speed"] = config.flight_speed;
  doc["scan_period"] = config.scan_period;
  doc["rng_seed"] = config.rng_seed;
  if (config.bounding_box) {
    doc["bounding_box"] = {
        {"min",
         {config.bounding_box->min.x(), config.bounding_box->min.y(),
          config.bounding_box->min.z()}},
        {"max",
         {config.bounding_box->max.x(), config.bounding_box->max.y(),
          config.bounding_box->max.z()}}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace gatsbi
