#pragma once

#include <string>

#include "idnet/model.hpp"

namespace idnet {

/// Parses the network JSON document:
/// { "supply_nodes": [{"id", "p_fail", "x"?, "y"?}],
///   "demand_nodes": [{"id", "supplies", "x"?, "y"?}],
///   "edges": [[a, b]], "terminals": {"s", "t"}? }
NetworkInput network_input_from_json(const std::string& text);

NetworkInput load_network_input(const std::string& file);

/// Loads, validates and resolves in one step; throws Error on violations.
Network load_network(const std::string& file);

/// Serializes in the same schema, preserving node order. Byte-stable:
/// identical input yields identical text.
std::string network_to_json(const NetworkInput& input);
std::string network_to_json(const Network& net);

void save_network(const NetworkInput& input, const std::string& file);

}  // namespace idnet
