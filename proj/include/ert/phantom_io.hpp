#ifndef ERT_PHANTOM_IO_HPP
#define ERT_PHANTOM_IO_HPP

// Phantom description files:
//   {"shapes": [{"kind": "disk", "center": [x, y], "params": {"radius": r},
//                "amplitude": 1.0}, ...]}
// kinds and params: disk {radius}; ellipse {semi_x, semi_y, angle?};
// rectangle {half_width, half_height, angle?}; gaussian {sigma}.

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ert/error.hpp"
#include "ert/phantom.hpp"

namespace ert {

namespace detail {

inline double json_number(const nlohmann::json& j, const char* key, std::size_t index) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ParseError("shape " + std::to_string(index) + ": missing numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

inline double json_number_or(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>() : fallback;
}

}  // namespace detail

inline nlohmann::json to_json(const Shape& shape) {
  nlohmann::json j;
  j["kind"] = shape_kind(shape);
  std::visit(
      [&j](const auto& s) {
        j["center"] = {s.center.x, s.center.y};
        j["amplitude"] = s.amplitude;
      },
      shape);
  nlohmann::json params;
  if (const auto* d = std::get_if<Disk>(&shape)) {
    params["radius"] = d->radius;
  } else if (const auto* e = std::get_if<EllipseShape>(&shape)) {
    params = {{"semi_x", e->semi_x}, {"semi_y", e->semi_y}, {"angle", e->angle}};
  } else if (const auto* r = std::get_if<Rectangle>(&shape)) {
    params = {{"half_width", r->half_width}, {"half_height", r->half_height}, {"angle", r->angle}};
  } else if (const auto* gb = std::get_if<GaussianBump>(&shape)) {
    params["sigma"] = gb->sigma;
  }
  j["params"] = params;
  return j;
}

inline nlohmann::json to_json(const Phantom& p) {
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& s : p.shapes) shapes.push_back(to_json(s));
  return {{"shapes", shapes}};
}

inline Phantom phantom_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("shapes") || !j.at("shapes").is_array()) {
    throw ParseError("phantom description needs a top-level 'shapes' array");
  }
  Phantom p;
  std::size_t index = 0;
  for (const auto& item : j.at("shapes")) {
    if (!item.is_object()) throw ParseError("shape " + std::to_string(index) + " is not an object");
    const std::string kind = item.value("kind", "");
    const auto& c = item.contains("center") ? item.at("center") : nlohmann::json();
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ParseError("shape " + std::to_string(index) + ": 'center' must be [x, y]");
    }
    const Vec2 center{c[0].get<double>(), c[1].get<double>()};
    const double amp = detail::json_number_or(item, "amplitude", 1.0);
    const nlohmann::json params = item.contains("params") ? item.at("params") : nlohmann::json::object();
    if (kind == "disk") {
      p.shapes.emplace_back(Disk{center, detail::json_number(params, "radius", index), amp});
    } else if (kind == "ellipse") {
      p.shapes.emplace_back(EllipseShape{center, detail::json_number(params, "semi_x", index),
                                         detail::json_number(params, "semi_y", index),
                                         detail::json_number_or(params, "angle", 0.0), amp});
    } else if (kind == "rectangle") {
      p.shapes.emplace_back(Rectangle{center, detail::json_number(params, "half_width", index),
                                      detail::json_number(params, "half_height", index),
                                      detail::json_number_or(params, "angle", 0.0), amp});
    } else if (kind == "gaussian") {
      p.shapes.emplace_back(GaussianBump{center, detail::json_number(params, "sigma", index), amp});
    } else {
      throw ParseError("shape " + std::to_string(index) + ": unknown kind '" + kind + "'");
    }
    ++index;
  }
  return p;
}

inline Phantom read_phantom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open phantom file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("phantom file '" + path + "': " + e.what());
  }
  return phantom_from_json(j);
}

inline void write_phantom(const Phantom& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write phantom file '" + path + "'");
  out << to_json(p).dump(2) << '\n';
}

}  // namespace ert

#endif  // ERT_PHANTOM_IO_HPP
