#include "atemp/json_io.hpp"

namespace atemp {

json to_json(const FinSet& s) { return json{{"elements", s.labels()}}; }

json to_json(const FinFun& f) {
  json map = json::object();
  for (int i = 0; i < f.dom().size(); ++i) map[f.dom().label(i)] = f.cod().label(f(i));
  return json{{"dom", to_json(f.dom())}, {"cod", to_json(f.cod())}, {"map", std::move(map)}};
}

json to_json(const FinRel& r) {
  json pairs = json::array();
  for (const auto& [x, y] : r.sorted_label_pairs()) pairs.push_back(json::array({x, y}));
  return json{{"dom", to_json(r.dom())}, {"cod", to_json(r.cod())}, {"pairs", std::move(pairs)}};
}

json to_json(const Learner& m) {
  return json{{"A", to_json(m.src.fwd)},   {"A'", to_json(m.src.bwd)},
              {"B", to_json(m.dst.fwd)},   {"B'", to_json(m.dst.bwd)},
              {"P", to_json(m.param)},     {"Q", to_json(m.residual)},
              {"l", to_json(m.forward)},   {"r", to_json(m.backward)}};
}

json to_json(const IntLearner& m) {
  return json{{"A", to_json(m.src.fwd)},         {"A'", to_json(m.src.bwd)},
              {"B", to_json(m.dst.fwd)},         {"B'", to_json(m.dst.bwd)},
              {"P", to_json(m.param)},           {"implement", to_json(m.implement)},
              {"update", to_json(m.update)},     {"request", to_json(m.request)}};
}

json to_json(const Witness& w) {
  json j{{"kind", witness_kind_name(w.kind)}, {"map", to_json(w.map)}, {"reversed", w.reversed}};
  if (w.filler) j["filler"] = to_json(*w.filler);
  if (w.comap) j["comap"] = to_json(*w.comap);
  return j;
}

FinSet finset_from_json(const json& j) {
  if (!j.contains("elements") || !j["elements"].is_array())
    throw Error("json: FinSet needs an 'elements' array");
  return FinSet(j["elements"].get<std::vector<std::string>>());
}

FinFun finfun_from_json(const json& j) {
  FinSet dom = finset_from_json(j.at("dom"));
  FinSet cod = finset_from_json(j.at("cod"));
  std::unordered_map<std::string, std::string> map;
  for (const auto& [k, v] : j.at("map").items()) map[k] = v.get<std::string>();
  return FinFun::from_labels(std::move(dom), std::move(cod), map);
}

FinRel finrel_from_json(const json& j) {
  FinSet dom = finset_from_json(j.at("dom"));
  FinSet cod = finset_from_json(j.at("cod"));
  std::vector<std::pair<int, int>> pairs;
  for (const auto& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 2) throw Error("json: relation pair must be [x,y]");
    pairs.emplace_back(dom.index(p[0].get<std::string>()), cod.index(p[1].get<std::string>()));
  }
  return FinRel(std::move(dom), std::move(cod), std::move(pairs));
}

Learner learner_from_json(const json& j) {
  Obj src{finset_from_json(j.at("A")), finset_from_json(j.at("A'"))};
  Obj dst{finset_from_json(j.at("B")), finset_from_json(j.at("B'"))};
  FinSet p = finset_from_json(j.at("P"));
  FinSet q = finset_from_json(j.at("Q"));
  return Learner(std::move(src), std::move(dst), std::move(p), std::move(q),
                 finfun_from_json(j.at("l")), finfun_from_json(j.at("r")));
}

IntLearner intlearner_from_json(const json& j) {
  Obj src{finset_from_json(j.at("A")), finset_from_json(j.at("A'"))};
  Obj dst{finset_from_json(j.at("B")), finset_from_json(j.at("B'"))};
  FinSet p = finset_from_json(j.at("P"));
  return IntLearner(std::move(src), std::move(dst), std::move(p),
                    finfun_from_json(j.at("implement")), finfun_from_json(j.at("update")),
                    finfun_from_json(j.at("request")));
}

std::string format_table(const FinFun& f, const std::string& indent) {
  std::string out;
  for (int i = 0; i < f.dom().size(); ++i)
    out += indent + f.dom().label(i) + " -> " + f.cod().label(f(i)) + "\n";
  return out;
}

std::string format_relation(const FinRel& r, const std::string& indent) {
  std::string out;
  for (const auto& [x, y] : r.sorted_label_pairs()) out += indent + x + " ~ " + y + "\n";
  return out;
}

std::string format_witness(const Witness& w) {
  std::string out = std::string("witness kind: ") + witness_kind_name(w.kind);
  if (w.reversed) out += " (reversed)";
  out += "\nmap:\n" + format_table(w.map);
  if (w.filler) out += "filler:\n" + format_table(*w.filler);
  if (w.comap) out += "comap:\n" + format_table(*w.comap);
  return out;
}

}  // namespace atemp
