#include "nbhd/model_json.hpp"

#include <fstream>
#include <set>

#include "nbhd/error.hpp"
#include "nbhd/formula.hpp"

namespace nbhd {

namespace {

[[noreturn]] void format_error(const std::string& msg) {
  throw Error(ErrorCode::kModelFormat, msg);
}

NeighborhoodFunction families_from_json(const Json& j, const NeighborhoodFrame& frame,
                                        const char* what) {
  NeighborhoodFunction nbhd(frame.size());
  if (j.is_null()) return nbhd;
  if (!j.is_object()) format_error(std::string(what) + " must be an object");
  for (const auto& [name, family] : j.items()) {
    auto s = frame.index_of(name);
    if (!s) format_error(std::string(what) + ": unknown state '" + name + "'");
    if (!family.is_array()) format_error(std::string(what) + " of '" + name + "' must be an array");
    for (const auto& set : family) {
      StateSet x = set_from_json(set, frame);
      if (nbhd.contains(*s, x)) {
        format_error(std::string(what) + " of '" + name + "' lists the set " +
                     format_set(frame, x) + " twice");
      }
      nbhd.insert(*s, x);
    }
  }
  return nbhd;
}

Json families_to_json(const NeighborhoodFunction& nbhd, const NeighborhoodFrame& frame) {
  Json out = Json::object();
  for (int s = 0; s < frame.size(); ++s) {
    Json family = Json::array();
    nbhd.for_each(s, [&](std::uint32_t x) { family.push_back(set_to_json(frame, frame.make_set(x))); });
    out[frame.state_name(s)] = std::move(family);
  }
  return out;
}

}  // namespace

StateSet set_from_json(const Json& j, const NeighborhoodFrame& frame) {
  if (!j.is_array()) format_error("a state set must be an array of state names");
  std::uint32_t bits = 0;
  for (const auto& member : j) {
    if (!member.is_string()) format_error("state names must be strings");
    auto name = member.get<std::string>();
    auto i = frame.index_of(name);
    if (!i) format_error("unknown state '" + name + "'");
    if ((bits >> *i) & 1u) format_error("state '" + name + "' repeated inside a set");
    bits |= 1u << *i;
  }
  return frame.make_set(bits);
}

Json set_to_json(const NeighborhoodFrame& frame, StateSet x) {
  Json out = Json::array();
  for (int i = 0; i < frame.size(); ++i) {
    if (x.contains(i)) out.push_back(frame.state_name(i));
  }
  return out;
}

NeighborhoodModel model_from_json(const Json& j) {
  if (!j.is_object()) format_error("model must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "states" && key != "neighborhoods" && key != "valuation") {
      format_error("unexpected key '" + key + "'");
    }
  }
  if (!j.contains("states") || !j["states"].is_array()) format_error("missing array 'states'");
  std::vector<std::string> states;
  for (const auto& s : j["states"]) {
    if (!s.is_string()) format_error("state names must be strings");
    states.push_back(s.get<std::string>());
  }
  std::optional<NeighborhoodFrame> frame;
  try {
    frame.emplace(std::move(states));
  } catch (const Error& e) {
    format_error(e.what());
  }
  frame->nbhd() = families_from_json(j.contains("neighborhoods") ? j["neighborhoods"] : Json(),
                                     *frame, "neighborhoods");
  NeighborhoodModel model(std::move(*frame));
  if (j.contains("valuation")) {
    const auto& val = j["valuation"];
    if (!val.is_object()) format_error("'valuation' must be an object");
    for (const auto& [atom, set] : val.items()) {
      if (!is_identifier(atom)) format_error("invalid atom name '" + atom + "'");
      model.set_valuation(atom, set_from_json(set, model.frame()));
    }
  }
  return model;
}

Json model_to_json(const NeighborhoodModel& model) {
  const auto& frame = model.frame();
  Json out = Json::object();
  out["states"] = frame.states();
  out["neighborhoods"] = families_to_json(frame.nbhd(), frame);
  Json val = Json::object();
  for (const auto& [atom, set] : model.valuation()) val[atom] = set_to_json(frame, set);
  out["valuation"] = std::move(val);
  return out;
}

PerturbationMap perturbation_from_json(const Json& j, const NeighborhoodFrame& frame) {
  if (!j.is_object()) format_error("perturbation map must be a JSON object");
  PerturbationMap pmap;
  auto kind = j.value("kind", std::string());
  if (kind == "bullet") {
    pmap.kind = PerturbationKind::kBullet;
  } else if (kind == "wrong") {
    pmap.kind = PerturbationKind::kWrong;
  } else {
    format_error("perturbation 'kind' must be \"bullet\" or \"wrong\"");
  }
  auto sign = j.value("sign", std::string());
  if (sign == "add") {
    pmap.sign = PerturbationSign::kAdd;
  } else if (sign == "remove") {
    pmap.sign = PerturbationSign::kRemove;
  } else {
    format_error("perturbation 'sign' must be \"add\" or \"remove\"");
  }
  pmap.families = families_from_json(j.contains("families") ? j["families"] : Json(), frame,
                                     "families");
  return pmap;
}

Json perturbation_to_json(const PerturbationMap& pmap, const NeighborhoodFrame& frame) {
  Json out = Json::object();
  out["kind"] = pmap.kind == PerturbationKind::kBullet ? "bullet" : "wrong";
  out["sign"] = pmap.sign == PerturbationSign::kAdd ? "add" : "remove";
  out["families"] = families_to_json(pmap.families, frame);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) format_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    format_error("malformed JSON in '" + path + "': " + e.what());
  }
}

NeighborhoodModel read_model_file(const std::string& path) {
  return model_from_json(read_json_file(path));
}

}  // namespace nbhd
