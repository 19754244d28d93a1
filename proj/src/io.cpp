#include "idnet/io.hpp"

#include <fstream>
#include <sstream>

#include "idnet/errors.hpp"
#include "json.hpp"

namespace idnet {

namespace {

using json = nlohmann::ordered_json;

std::optional<Coord> coord_from(const json& node) {
  if (node.contains("x") && node.contains("y"))
    return Coord{node.at("x").get<double>(), node.at("y").get<double>()};
  return std::nullopt;
}

}  // namespace

NetworkInput network_input_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("network JSON parse error: ") + e.what());
  }
  NetworkInput input;
  try {
    for (const auto& u : doc.at("supply_nodes")) {
      SupplyNodeInput s;
      s.id = u.at("id").get<std::string>();
      s.p_fail = u.at("p_fail").get<double>();
      s.coord = coord_from(u);
      input.supply_nodes.push_back(std::move(s));
    }
    for (const auto& v : doc.at("demand_nodes")) {
      DemandNodeInput d;
      d.id = v.at("id").get<std::string>();
      for (const auto& s : v.at("supplies")) d.supplies.push_back(s.get<std::string>());
      d.coord = coord_from(v);
      input.demand_nodes.push_back(std::move(d));
    }
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error("edge entries must be [a, b] pairs");
      input.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    if (doc.contains("terminals") && !doc.at("terminals").is_null()) {
      const auto& t = doc.at("terminals");
      input.terminals = {t.at("s").get<std::string>(), t.at("t").get<std::string>()};
    }
  } catch (const json::exception& e) {
    throw Error(std::string("network JSON schema error: ") + e.what());
  }
  return input;
}

NetworkInput load_network_input(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open network file '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return network_input_from_json(buf.str());
}

Network load_network(const std::string& file) {
  return Network::from_input(load_network_input(file));
}

std::string network_to_json(const NetworkInput& input) {
  json doc;
  doc["supply_nodes"] = json::array();
  for (const auto& u : input.supply_nodes) {
    json node;
    node["id"] = u.id;
    node["p_fail"] = u.p_fail;
    if (u.coord) {
      node["x"] = (*u.coord)[0];
      node["y"] = (*u.coord)[1];
    }
    doc["supply_nodes"].push_back(std::move(node));
  }
  doc["demand_nodes"] = json::array();
  for (const auto& v : input.demand_nodes) {
    json node;
    node["id"] = v.id;
    node["supplies"] = v.supplies;
    if (v.coord) {
      node["x"] = (*v.coord)[0];
      node["y"] = (*v.coord)[1];
    }
    doc["demand_nodes"].push_back(std::move(node));
  }
  doc["edges"] = json::array();
  for (const auto& [a, b] : input.edges) doc["edges"].push_back(json::array({a, b}));
  if (input.terminals) {
    doc["terminals"] = {{"s", input.terminals->first}, {"t", input.terminals->second}};
  }
  return doc.dump(2) + "\n";
}

std::string network_to_json(const Network& net) {
  NetworkInput input;
  for (int u = 0; u < net.supply_count(); ++u) {
    const auto& s = net.supply(u);
    input.supply_nodes.push_back({s.id, s.p_fail, s.coord});
  }
  for (int v = 0; v < net.demand_count(); ++v) {
    const auto& d = net.demand(v);
    DemandNodeInput node;
    node.id = d.id;
    node.coord = d.coord;
    for (int u : d.supplies) node.supplies.push_back(net.supply(u).id);
    input.demand_nodes.push_back(std::move(node));
  }
  for (const auto& [a, b] : net.edges())
    input.edges.emplace_back(net.demand(a).id, net.demand(b).id);
  if (net.terminals())
    input.terminals = {net.demand(net.terminals()->first).id,
                       net.demand(net.terminals()->second).id};
  return network_to_json(input);
}

void save_network(const NetworkInput& input, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write network file '" + file + "'");
  out << network_to_json(input);
}

}  // namespace idnet
