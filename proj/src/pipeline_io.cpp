#include <string>

#include "json.hpp"
#include "seqfair/errors.hpp"
#include "seqfair/projection.hpp"

namespace seqfair {

namespace {

using nlohmann::json;

std::vector<std::string> split_joint(std::string_view key) {
  std::vector<std::string> out(1);
  for (char c : key) {
    if (c == '\x1f') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

// Field access with JSON-path locations for error messages.
const json& field(const json& obj, const char* name, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path);
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + name + "'", path);
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError("expected a number", path);
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError("expected a string", path);
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("expected an array", path);
  return v;
}

// Single-attribute steps store strings; joint steps store arrays of strings.
std::vector<std::string> string_or_list(const json& v, const std::string& path) {
  if (v.is_string()) return {v.get<std::string>()};
  const json& arr = as_array(v, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(as_string(arr[i], path + "[" + std::to_string(i) + "]"));
  }
  if (out.empty()) throw ParseError("expected a non-empty list", path);
  return out;
}

}  // namespace

std::string serialize_pipeline(const FairPipeline& pipeline) {
  json steps = json::array();
  for (const auto& step : pipeline.steps) {
    json groups = json::array();
    for (std::size_t g = 0; g < step.groups.size(); ++g) {
      const auto knots = step.dists[g].values();
      groups.push_back({
          {"value", step.is_joint() ? json(split_joint(step.groups[g])) : json(step.groups[g])},
          {"weight", step.weights[g]},
          {"quantile_knots", std::vector<double>(knots.begin(), knots.end())},
      });
    }
    steps.push_back({
        {"attribute",
         step.is_joint() ? json(step.attributes) : json(step.attributes.front())},
        {"epsilon", step.epsilon},
        {"groups", std::move(groups)},
    });
  }
  const json doc = {
      {"format_version", std::string(kPipelineFormatVersion)},
      {"order", pipeline.order},
      {"jitter", {{"amplitude", pipeline.jitter.amplitude}, {"seed", pipeline.jitter.seed}}},
      {"fitted_on", pipeline.fitted_on},
      {"steps", std::move(steps)},
  };
  return doc.dump(1) + "\n";
}

FairPipeline deserialize_pipeline(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed pipeline document: " + std::string(e.what()),
                     "byte " + std::to_string(e.byte));
  }
  const json& version = field(doc, "format_version", "$");
  const std::string v = version.is_number_integer() ? std::to_string(version.get<long long>())
                                                    : as_string(version, "$.format_version");
  if (v != kPipelineFormatVersion) {
    throw VersionError("pipeline format_version '" + v + "' is not supported (expected '" +
                       std::string(kPipelineFormatVersion) + "')");
  }

  FairPipeline p;
  const json& order = as_array(field(doc, "order", "$"), "$.order");
  for (std::size_t i = 0; i < order.size(); ++i) {
    p.order.push_back(as_string(order[i], "$.order[" + std::to_string(i) + "]"));
  }
  const json& jitter = field(doc, "jitter", "$");
  p.jitter.amplitude = as_number(field(jitter, "amplitude", "$.jitter"), "$.jitter.amplitude");
  const json& seed = field(jitter, "seed", "$.jitter");
  if (!seed.is_number_integer()) throw ParseError("expected an integer", "$.jitter.seed");
  p.jitter.seed = seed.get<std::uint64_t>();
  if (const auto it = doc.find("fitted_on"); it != doc.end()) {
    p.fitted_on = as_string(*it, "$.fitted_on");
  }

  const json& steps = as_array(field(doc, "steps", "$"), "$.steps");
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const std::string sp = "$.steps[" + std::to_string(s) + "]";
    TransportStep step;
    step.attributes = string_or_list(field(steps[s], "attribute", sp), sp + ".attribute");
    step.epsilon = as_number(field(steps[s], "epsilon", sp), sp + ".epsilon");
    const json& groups = as_array(field(steps[s], "groups", sp), sp + ".groups");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::string gp = sp + ".groups[" + std::to_string(g) + "]";
      const auto value = string_or_list(field(groups[g], "value", gp), gp + ".value");
      if (value.size() != step.attributes.size()) {
        throw ParseError("group value arity does not match the step's attributes", gp + ".value");
      }
      std::vector<std::string_view> tokens(value.begin(), value.end());
      step.groups.push_back(value.size() == 1 ? value.front() : joint_group_key(tokens));
      step.weights.push_back(as_number(field(groups[g], "weight", gp), gp + ".weight"));
      const json& knots = as_array(field(groups[g], "quantile_knots", gp), gp + ".quantile_knots");
      std::vector<double> values;
      values.reserve(knots.size());
      for (std::size_t k = 0; k < knots.size(); ++k) {
        values.push_back(as_number(knots[k], gp + ".quantile_knots[" + std::to_string(k) + "]"));
      }
      try {
        step.dists.push_back(EmpiricalDistribution::from_sorted(std::move(values)));
      } catch (const Error& e) {
        throw ParseError(e.what(), gp + ".quantile_knots");
      }
    }
    try {
      step.validate();
    } catch (const Error& e) {
      throw ParseError(e.what(), sp);
    }
    p.steps.push_back(std::move(step));
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw ParseError(e.what(), "$");
  }
  return p;
}

}  // namespace seqfair
