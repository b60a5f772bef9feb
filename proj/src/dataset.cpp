#include "ris/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ris/error.hpp"

namespace ris {

using nlohmann::json;

namespace {

json complex_array(std::span<const Complex> values) {
  json arr = json::array();
  for (const auto& c : values) arr.push_back(json::array({c.real(), c.imag()}));
  return arr;
}

double finite_number(const json& v, const std::string& where) {
  if (v.is_null()) throw ValidationError(where + ": null/NaN value");
  if (!v.is_number()) throw ParseError(where + ": expected a number", 0);
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(where + ": non-finite value");
  return x;
}

std::vector<Complex> read_complex_array(const json& arr, std::size_t expected,
                                        const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array", 0);
  if (arr.size() != expected) {
    throw DimensionError(where + ": expected " + std::to_string(expected) +
                         " coefficients, found " + std::to_string(arr.size()));
  }
  std::vector<Complex> out(expected);
  for (std::size_t m = 0; m < expected; ++m) {
    const std::string at = where + "[" + std::to_string(m) + "]";
    const json& pair = arr[m];
    if (!pair.is_array() || pair.size() != 2) throw ParseError(at + ": expected [re, im]", 0);
    out[m] = {finite_number(pair[0], at + ".re"), finite_number(pair[1], at + ".im")};
  }
  return out;
}

template <typename T>
T required(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what(), 0);
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

ChannelDataset to_dataset(const ScenarioData& data, unsigned q_hint) {
  ChannelDataset ds;
  ds.geometry = data.geometry;
  ds.users = data.users;
  ds.transmitter = data.transmitter;
  ds.labels = data.labels;
  ds.seed = data.seed;
  ds.q_hint = q_hint;
  return ds;
}

std::string serialize_channels(const ChannelDataset& ds) {
  json geometry;
  json elements = json::array();
  for (const auto& p : ds.geometry.elements()) elements.push_back(json::array({p.x, p.y, p.z}));
  json subs = json::array();
  for (const auto& s : ds.geometry.subsurfaces()) subs.push_back(json::array({s.start, s.size}));
  geometry["elements"] = std::move(elements);
  geometry["subsurfaces"] = std::move(subs);

  json doc;
  doc["format_version"] = kChannelFormatVersion;
  doc["M"] = ds.geometry.size();
  doc["num_users"] = ds.users.size();
  doc["q_hint"] = ds.q_hint;
  doc["seed"] = ds.seed;
  doc["geometry"] = std::move(geometry);
  if (ds.transmitter) doc["transmitter"] = complex_array(ds.transmitter->coefficients());
  if (!ds.labels.empty()) doc["labels"] = ds.labels;
  json users = json::array();
  for (const auto& u : ds.users) users.push_back(complex_array(u.coefficients()));
  doc["users"] = std::move(users);
  return doc.dump(1);
}

ChannelDataset parse_channels(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t lo = e.byte > 8 ? e.byte - 8 : 0;
    const std::string near = text.substr(lo, 16);
    for (const char* token : {"NaN", "nan", "Infinity", "inf"}) {
      if (near.find(token) != std::string::npos) {
        throw ValidationError("channel file has a non-finite value near line " +
                              std::to_string(line_of(text, e.byte)));
      }
    }
    throw ParseError("channel file parse error at line " + std::to_string(line_of(text, e.byte)) +
                         " (byte " + std::to_string(e.byte) + "): " + e.what(),
                     e.byte);
  }
  if (!doc.is_object()) throw ParseError("channel file: top level must be an object", 0);
  const int version = required<int>(doc, "format_version");
  if (version != kChannelFormatVersion) {
    throw ParseError("unsupported channel format_version " + std::to_string(version), 0);
  }
  const auto m = required<std::size_t>(doc, "M");
  const auto num_users = required<std::size_t>(doc, "num_users");

  const json& g = doc.at("geometry");
  std::vector<Position> elements;
  for (std::size_t i = 0; i < g.at("elements").size(); ++i) {
    const json& p = g.at("elements")[i];
    const std::string at = "geometry.elements[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 3) throw ParseError(at + ": expected [x, y, z]", i);
    elements.push_back({finite_number(p[0], at), finite_number(p[1], at), finite_number(p[2], at)});
  }
  std::vector<SubSurface> subs;
  for (const json& s : g.at("subsurfaces")) {
    subs.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
  }
  if (elements.size() != m) {
    throw DimensionError("geometry lists " + std::to_string(elements.size()) +
                         " elements but M = " + std::to_string(m));
  }

  ChannelDataset ds;
  ds.geometry = SurfaceGeometry(std::move(elements), std::move(subs));
  ds.q_hint = required<unsigned>(doc, "q_hint");
  ds.seed = required<std::uint64_t>(doc, "seed");
  if (doc.contains("transmitter")) {
    ds.transmitter = Channel(read_complex_array(doc["transmitter"], m, "transmitter"));
  }
  const json& users = doc.at("users");
  if (!users.is_array() || users.size() != num_users) {
    throw DimensionError("num_users = " + std::to_string(num_users) + " but users array has " +
                         std::to_string(users.is_array() ? users.size() : 0) + " records");
  }
  ds.users.reserve(num_users);
  for (std::size_t u = 0; u < num_users; ++u) {
    ds.users.emplace_back(read_complex_array(users[u], m, "users[" + std::to_string(u) + "]"));
  }
  if (doc.contains("labels")) {
    ds.labels = doc["labels"].get<std::vector<std::size_t>>();
    if (ds.labels.size() != num_users) throw DimensionError("labels length != num_users");
  }
  return ds;
}

void export_channels(const std::filesystem::path& path, const ChannelDataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize_channels(dataset) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

ChannelDataset import_channels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_channels(ss.str());
}

}  // namespace ris
