#pragma once

// JSON forms of models, verdicts and rewrite traces.
//
//   model:   {"root": "w0", "depth": 3,
//             "nodes": {"w0": {"atoms": ["q"], "children": ["u", "w1"]}, ...}}
//   verdict: {"query": "...", "scale": {...}, "result": "no-counterexample-at-scale",
//             "models_checked": N}
//            or with "result": "counterexample" and
//             "counterexample": {"model": <model>, "branch": [ids], "index": i}
//   trace:   {"input": "...", "result": "...", "steps": [{"rule", "before", "after"}, ...]}

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "futura/error.hpp"
#include "futura/model.hpp"
#include "futura/oracle.hpp"
#include "futura/reduction.hpp"
#include "futura/syntax.hpp"

namespace futura {

using Json = nlohmann::ordered_json;

inline Json to_json(const TreeModel& m) {
  Json nodes = Json::object();
  for (NodeIndex n = 0; n < m.size(); ++n) {
    Json children = Json::array();
    for (auto c : m.children(n))
      children.push_back(m.id(c));
    nodes[m.id(n)] = Json{{"atoms", m.atoms(n)}, {"children", std::move(children)}};
  }
  return Json{{"root", m.id(TreeModel::root())}, {"depth", m.depth()}, {"nodes", std::move(nodes)}};
}

/// Checks the shape of the document, then every model invariant. All
/// problems are reported together as a ModelError.
inline TreeModel model_from_json(const Json& j) {
  std::vector<std::string> problems;
  if (!j.is_object())
    throw ModelError({"model must be a JSON object"});
  ModelDescription d;
  if (!j.contains("root") || !j["root"].is_string())
    problems.push_back("field 'root' must be a string");
  else
    d.root = j["root"].get<std::string>();
  if (!j.contains("depth") || !j["depth"].is_number_unsigned())
    problems.push_back("field 'depth' must be a non-negative integer");
  else
    d.depth = j["depth"].get<std::size_t>();
  if (!j.contains("nodes") || !j["nodes"].is_object()) {
    problems.push_back("field 'nodes' must be an object");
  } else {
    for (const auto& [id, node] : j["nodes"].items()) {
      ModelDescription::NodeSpec spec{id, {}, {}};
      auto strings = [&](const char* field, std::vector<std::string>& out) {
        if (!node.is_object() || !node.contains(field) || !node[field].is_array()) {
          problems.push_back("node '" + id + "': field '" + field + "' must be an array");
          return;
        }
        for (const auto& v : node[field]) {
          if (v.is_string())
            out.push_back(v.get<std::string>());
          else
            problems.push_back("node '" + id + "': field '" + field + "' must hold strings");
        }
      };
      strings("atoms", spec.atoms);
      strings("children", spec.children);
      d.nodes.push_back(std::move(spec));
    }
  }
  if (!problems.empty())
    throw ModelError(std::move(problems));
  return TreeModel::from_description(d);
}

inline TreeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open model file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError({std::string("invalid JSON: ") + e.what()});
  }
  return model_from_json(j);
}

inline void save_model(const TreeModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write model file '" + path + "'");
  out << to_json(m).dump(2) << '\n';
}

inline Json to_json(const Scale& s) {
  return Json{{"atoms", s.atoms},
              {"max_branch", s.max_branch},
              {"depth", s.depth},
              {"strategy", to_string(s.strategy)}};
}

inline Scale scale_from_json(const Json& j) {
  Scale s;
  s.atoms = j.at("atoms").get<std::vector<std::string>>();
  s.max_branch = j.at("max_branch").get<std::uint32_t>();
  s.depth = j.at("depth").get<std::size_t>();
  const auto strategy = j.at("strategy").get<std::string>();
  if (strategy != "window" && strategy != "exhaustive")
    throw Error("unknown strategy '" + strategy + "'");
  s.strategy = strategy == "window" ? Strategy::Window : Strategy::Exhaustive;
  return s;
}

inline Json to_json(const Counterexample& c) {
  return Json{{"model", to_json(c.model)}, {"branch", c.timeline.ids(c.model)}, {"index", c.index}};
}

inline Counterexample counterexample_from_json(const Json& j) {
  TreeModel m = model_from_json(j.at("model"));
  auto ids = j.at("branch").get<std::vector<std::string>>();
  Timeline t = Timeline::from_ids(m, ids);
  return Counterexample{std::move(m), std::move(t), j.at("index").get<std::size_t>()};
}

inline Json to_json(const Verdict& v, const std::string& query) {
  Json j{{"query", query},
         {"scale", to_json(v.scale)},
         {"result", v.no_counterexample_at_scale() ? "no-counterexample-at-scale" : "counterexample"},
         {"models_checked", v.models_checked}};
  if (v.counterexample)
    j["counterexample"] = to_json(*v.counterexample);
  return j;
}

inline Verdict verdict_from_json(const Json& j) {
  Verdict v{scale_from_json(j.at("scale")), j.at("models_checked").get<std::uint64_t>(), std::nullopt};
  const auto result = j.at("result").get<std::string>();
  if (result == "counterexample")
    v.counterexample = counterexample_from_json(j.at("counterexample"));
  else if (result != "no-counterexample-at-scale")
    throw Error("unknown verdict result '" + result + "'");
  return v;
}

inline Json to_json(const Reduction& r, const Formula& input) {
  Json steps = Json::array();
  for (const auto& s : r.trace)
    steps.push_back(Json{{"rule", s.rule}, {"before", to_string(s.before)}, {"after", to_string(s.after)}});
  return Json{{"input", to_string(input)}, {"result", to_string(r.result)}, {"steps", std::move(steps)}};
}

inline RewriteTrace trace_from_json(const Json& j) {
  RewriteTrace trace;
  for (const auto& s : j.at("steps"))
    trace.push_back({s.at("rule").get<std::string>(), parse(s.at("before").get<std::string>()),
                     parse(s.at("after").get<std::string>())});
  return trace;
}

} // namespace futura
