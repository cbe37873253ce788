#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "csched/core.hpp"
#include "csched/online.hpp"

namespace csched {

using Json = nlohmann::json;

namespace detail {

// Values are plain integers or "p/q" strings; anything else is rejected with
// the offending field in the message.
inline Rat rat_from_json(const Json& value, const std::string& where) {
  if (value.is_number_integer()) {
    return Rat(static_cast<std::int64_t>(value.get<std::int64_t>()));
  }
  if (value.is_number_unsigned()) {
    return Rat(Int(value.get<std::uint64_t>()));
  }
  if (value.is_string()) {
    std::optional<Rat> parsed = parse_rat(value.get<std::string>());
    if (parsed) return *parsed;
    throw ParseError(where + ": malformed rational '" + value.get<std::string>() + "'");
  }
  if (value.is_number_float()) {
    throw ParseError(where + ": floating point values are not accepted; use \"p/q\"");
  }
  throw ParseError(where + ": expected an integer or a \"p/q\" string");
}

inline Rat nonnegative_rat_from_json(const Json& value, const std::string& where) {
  Rat r = rat_from_json(value, where);
  if (r < 0) throw ParseError(where + ": value " + rat_to_string(r) + " violates nonnegativity");
  return r;
}

inline Json rat_to_json(const Rat& r) {
  if (is_integral(r)) {
    std::optional<std::int64_t> v = to_int64(r);
    if (v) return Json(*v);
  }
  return Json(rat_to_string(r));
}

inline int int_field(const Json& obj, const char* name) {
  if (!obj.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  const Json& v = obj.at(name);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ParseError(std::string("field '") + name + "' must be an integer");
  }
  return v.get<int>();
}

inline DemandMatrix<Rat> matrix_from_json(const Json& rows, int senders, int receivers,
                                          const std::string& where) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != senders) {
    throw ParseError(where + ": expected " + std::to_string(senders) + " rows");
  }
  std::vector<Rat> cells;
  cells.reserve(static_cast<std::size_t>(senders) * receivers);
  for (int s = 0; s < senders; ++s) {
    const Json& row = rows.at(s);
    if (!row.is_array() || static_cast<int>(row.size()) != receivers) {
      throw ParseError(where + "[" + std::to_string(s) + "]: expected " +
                       std::to_string(receivers) + " entries");
    }
    for (int r = 0; r < receivers; ++r) {
      cells.push_back(nonnegative_rat_from_json(
          row.at(r), where + "[" + std::to_string(s) + "][" + std::to_string(r) + "]"));
    }
  }
  return DemandMatrix<Rat>(senders, receivers, std::move(cells));
}

inline Json matrix_to_json(const DemandMatrix<Rat>& m) {
  Json rows = Json::array();
  for (int s = 0; s < m.senders(); ++s) {
    Json row = Json::array();
    for (int r = 0; r < m.receivers(); ++r) row.push_back(rat_to_json(m(s, r)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void save_json_file(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << value.dump(2) << '\n';
}

}  // namespace detail

inline Instance<Rat> instance_from_json(const Json& j) {
  const int senders = detail::int_field(j, "senders");
  const int receivers = detail::int_field(j, "receivers");
  if (senders < 1 || receivers < 1) throw ParseError("senders and receivers must be positive");
  if (!j.contains("demands")) throw ParseError("missing field 'demands'");
  DemandMatrix<Rat> demand = detail::matrix_from_json(j.at("demands"), senders, receivers, "demands");
  if (!j.contains("delta")) throw ParseError("missing field 'delta'");
  if (!j.contains("window")) throw ParseError("missing field 'window'");
  return Instance<Rat>(std::move(demand),
                       detail::nonnegative_rat_from_json(j.at("delta"), "delta"),
                       detail::nonnegative_rat_from_json(j.at("window"), "window"));
}

inline Json instance_to_json(const Instance<Rat>& inst) {
  Json j;
  j["senders"] = inst.demand.senders();
  j["receivers"] = inst.demand.receivers();
  j["demands"] = detail::matrix_to_json(inst.demand);
  j["delta"] = detail::rat_to_json(inst.delta);
  j["window"] = detail::rat_to_json(inst.window);
  return j;
}

inline Instance<Rat> parse_instance(const std::filesystem::path& path) {
  return instance_from_json(detail::load_json_file(path));
}

inline void write_instance(const std::filesystem::path& path, const Instance<Rat>& inst) {
  detail::save_json_file(path, instance_to_json(inst));
}

inline Trace<Rat> trace_from_json(const Json& j) {
  Trace<Rat> trace;
  trace.senders = detail::int_field(j, "senders");
  trace.receivers = detail::int_field(j, "receivers");
  if (trace.senders < 1 || trace.receivers < 1) {
    throw ParseError("senders and receivers must be positive");
  }
  if (!j.contains("steps") || !j.at("steps").is_array()) {
    throw ParseError("missing field 'steps'");
  }
  int index = 0;
  for (const Json& step : j.at("steps")) {
    trace.steps.push_back(detail::matrix_from_json(step, trace.senders, trace.receivers,
                                                   "steps[" + std::to_string(index) + "]"));
    ++index;
  }
  return trace;
}

inline Json trace_to_json(const Trace<Rat>& trace) {
  Json j;
  j["senders"] = trace.senders;
  j["receivers"] = trace.receivers;
  Json steps = Json::array();
  for (const auto& step : trace.steps) steps.push_back(detail::matrix_to_json(step));
  j["steps"] = std::move(steps);
  return j;
}

inline Trace<Rat> parse_trace(const std::filesystem::path& path) {
  return trace_from_json(detail::load_json_file(path));
}

inline void write_trace(const std::filesystem::path& path, const Trace<Rat>& trace) {
  detail::save_json_file(path, trace_to_json(trace));
}

inline Json schedule_to_json(const Schedule<Rat>& sched) {
  Json configs = Json::array();
  for (const auto& config : sched.configs) {
    Json edges = Json::array();
    for (const Edge& e : config.matching.edges()) {
      edges.push_back(Json::array({e.sender, e.receiver}));
    }
    configs.push_back(Json{{"edges", std::move(edges)}, {"alpha", detail::rat_to_json(config.alpha)}});
  }
  return Json{{"configs", std::move(configs)}};
}

// Schedule files carry only the configurations; delay and window come from
// the instance they were solved against.
inline Schedule<Rat> schedule_from_json(const Json& j, Rat delta, Rat window) {
  Schedule<Rat> sched;
  sched.delta = std::move(delta);
  sched.window = std::move(window);
  if (!j.contains("configs") || !j.at("configs").is_array()) {
    throw ParseError("missing field 'configs'");
  }
  int index = 0;
  for (const Json& config : j.at("configs")) {
    const std::string where = "configs[" + std::to_string(index) + "]";
    if (!config.contains("edges") || !config.at("edges").is_array()) {
      throw ParseError(where + ": missing 'edges'");
    }
    std::vector<Edge> edges;
    for (const Json& edge : config.at("edges")) {
      if (!edge.is_array() || edge.size() != 2) {
        throw ParseError(where + ": each edge is a [sender, receiver] pair");
      }
      edges.push_back(Edge{edge.at(0).get<int>(), edge.at(1).get<int>()});
    }
    if (!config.contains("alpha")) throw ParseError(where + ": missing 'alpha'");
    try {
      sched.configs.emplace_back(Matching::of(std::move(edges)),
                                 detail::nonnegative_rat_from_json(config.at("alpha"), where + ".alpha"));
    } catch (const InvariantError& e) {
      throw ParseError(where + ": " + e.what());
    }
    ++index;
  }
  return sched;
}

inline void write_schedule(const std::filesystem::path& path, const Schedule<Rat>& sched) {
  detail::save_json_file(path, schedule_to_json(sched));
}

}  // namespace csched
