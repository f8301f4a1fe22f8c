#include "caeac/model_io.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace caeac {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

void append_json_string(std::string& out, const std::string& text) {
  out += '"';
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_double_array(std::string& out, std::span<const double> values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  out += ']';
}

std::vector<double> parse_double_array(const nlohmann::json& node,
                                       const char* what) {
  if (!node.is_array())
    throw std::invalid_argument(std::string("model JSON: ") + what +
                                " must be an array");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number())
      throw std::invalid_argument(std::string("model JSON: ") + what +
                                  " holds a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string to_json(const CaeaModel& model) {
  std::string out = "{\"lambda\":" + std::to_string(model.lambda());
  out += ",\"a_max\":" + std::to_string(model.a_max());
  out += ",\"variant\":";
  append_json_string(out, to_string(model.variant()));
  out += ",\"v_threshold\":";
  out += model.v_threshold().has_value() ? format_double(*model.v_threshold())
                                         : "null";
  out += ",\"nodes\":[";
  for (std::size_t k = 0; k < model.nodes().size(); ++k) {
    const auto& node = model.nodes()[k];
    if (k > 0) out += ',';
    out += "{\"weight\":";
    append_double_array(out, node.weight);
    out += ",\"bandwidth\":";
    if (node.bandwidth.empty()) {
      out += "null";  // init-phase node, bandwidth not yet assigned
    } else if (model.variant() == CimVariant::kBase) {
      out += format_double(node.bandwidth[0]);
    } else {
      append_double_array(out, node.bandwidth);
    }
    out += ",\"counter\":" + std::to_string(node.counter) + "}";
  }
  out += "],\"edges\":[";
  const auto edges = model.edges().sorted_edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (e > 0) out += ',';
    const auto& [i, j, age] = edges[e];
    out += '[' + std::to_string(i) + ',' + std::to_string(j) + ',' +
           std::to_string(age) + ']';
  }
  out += ']';
  if (model.grouping().has_value()) {
    out += ",\"grouping\":[";
    const auto& groups = model.grouping()->groups();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (g > 0) out += ',';
      out += '[';
      for (std::size_t i = 0; i < groups[g].size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(groups[g][i]);
      }
      out += ']';
    }
    out += ']';
  }
  out += '}';
  return out;
}

namespace {

CaeaModel caea_from_parsed(const nlohmann::json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("model JSON: expected an object");
  for (const char* key : {"lambda", "a_max", "variant", "v_threshold", "nodes",
                          "edges"})
    if (!doc.contains(key))
      throw std::invalid_argument(std::string("model JSON: missing key ") + key);

  CaeaModel::RawState state;
  state.lambda = doc.at("lambda").get<std::size_t>();
  state.a_max = doc.at("a_max").get<int>();
  state.variant = cim_variant_from_string(doc.at("variant").get<std::string>());
  if (!doc.at("v_threshold").is_null())
    state.v_threshold = doc.at("v_threshold").get<double>();

  for (const auto& node_doc : doc.at("nodes")) {
    Node node;
    node.weight = parse_double_array(node_doc.at("weight"), "node weight");
    const auto& bw = node_doc.at("bandwidth");
    if (bw.is_null())
      node.bandwidth = {};
    else if (bw.is_number())
      node.bandwidth = {bw.get<double>()};
    else
      node.bandwidth = parse_double_array(bw, "node bandwidth");
    node.counter = node_doc.at("counter").get<std::uint64_t>();
    if (node.counter < 1)
      throw std::invalid_argument("model JSON: node counter below 1");
    state.nodes.push_back(std::move(node));
  }
  for (const auto& edge_doc : doc.at("edges")) {
    if (!edge_doc.is_array() || edge_doc.size() != 3)
      throw std::invalid_argument("model JSON: edge must be [i, j, age]");
    state.edges.emplace_back(edge_doc[0].get<std::size_t>(),
                             edge_doc[1].get<std::size_t>(),
                             edge_doc[2].get<int>());
  }
  if (doc.contains("grouping")) {
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& group_doc : doc.at("grouping")) {
      std::vector<std::size_t> group;
      for (const auto& idx : group_doc) group.push_back(idx.get<std::size_t>());
      groups.push_back(std::move(group));
    }
    const std::size_t d =
        state.nodes.empty() ? 0 : state.nodes.front().weight.size();
    state.grouping = AttributeGrouping(std::move(groups), d);
  }
  return CaeaModel::from_raw_state(std::move(state));
}

}  // namespace

CaeaModel caea_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  return caea_from_parsed(doc);
}

std::string to_json(const CaeacModel& model) {
  std::string out = "{\"config\":{\"lambda\":" +
                    std::to_string(model.config().lambda);
  out += ",\"a_max\":" + std::to_string(model.config().a_max);
  out += ",\"variant\":";
  append_json_string(out, to_string(model.config().variant));
  out += ",\"predict_metric\":";
  append_json_string(out, to_string(model.config().predict_metric));
  out += "},\"classes\":{";
  for (std::size_t c = 0; c < model.class_order().size(); ++c) {
    const auto& label = model.class_order()[c];
    if (c > 0) out += ',';
    append_json_string(out, label);
    out += ':';
    out += to_json(model.class_model(label));
  }
  out += "},\"class_order\":[";
  for (std::size_t c = 0; c < model.class_order().size(); ++c) {
    if (c > 0) out += ',';
    append_json_string(out, model.class_order()[c]);
  }
  out += "]}";
  return out;
}

CaeacModel caeac_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_object() || !doc.contains("config") || !doc.contains("classes") ||
      !doc.contains("class_order"))
    throw std::invalid_argument(
        "classifier JSON: expected {config, classes, class_order}");
  const auto& config_doc = doc.at("config");
  CaeacConfig config;
  config.lambda = config_doc.at("lambda").get<std::size_t>();
  config.a_max = config_doc.at("a_max").get<int>();
  config.variant =
      cim_variant_from_string(config_doc.at("variant").get<std::string>());
  config.predict_metric = predict_metric_from_string(
      config_doc.at("predict_metric").get<std::string>());
  CaeacModel model(config);
  for (const auto& label : doc.at("class_order")) {
    const std::string name = label.get<std::string>();
    if (!doc.at("classes").contains(name))
      throw std::invalid_argument("classifier JSON: class_order names missing class " +
                                  name);
    model.adopt_class_model(name, caea_from_parsed(doc.at("classes").at(name)));
  }
  return model;
}

}  // namespace caeac
