#include "tmep/io.hpp"

#include "tmep/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace tmep {

namespace {

using nlohmann::ordered_json;

ordered_json model_value(const LatticeModel& model) {
  ordered_json j;
  j["n"] = model.range();
  j["t"] = std::vector<double>(model.hoppings().begin(), model.hoppings().end());
  return j;
}

} // namespace

LatticeModel parse_model_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    throw ModelError(std::string("model JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ModelError("model JSON: expected an object");
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw ModelError("model JSON: \"n\" must be an integer");
  }
  if (!j.contains("t") || !j["t"].is_array()) {
    throw ModelError("model JSON: \"t\" must be an array");
  }
  const auto n = j["n"].get<long long>();
  if (n < 1) {
    throw ModelError("model JSON: \"n\" must be >= 1");
  }
  if (static_cast<long long>(j["t"].size()) != n) {
    throw ModelError("model JSON: \"t\" has " + std::to_string(j["t"].size()) + " entries, expected " + std::to_string(n));
  }
  std::vector<double> t;
  for (const auto& v : j["t"]) {
    if (!v.is_number()) {
      throw ModelError("model JSON: hoppings must be numbers");
    }
    t.push_back(v.get<double>());
  }
  return LatticeModel(std::move(t));
}

LatticeModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ModelError("cannot read model file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_json(ss.str());
}

std::string model_json(const LatticeModel& model) { return model_value(model).dump(); }

std::string critical_report_json(std::span<const CriticalPoint> points) {
  ordered_json arr = ordered_json::array();
  for (const auto& cp : points) {
    ordered_json j;
    j["k0"] = cp.k0;
    j["omega0"] = cp.omega0;
    j["order"] = cp.order;
    j["a_p"] = cp.leading;
    j["index"] = cp.index;
    j["class"] = std::string(to_string(cp.kind));
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

std::string design_result_json(const DesignResult& r) {
  ordered_json j;
  const bool solved = r.status == DesignStatus::ok || r.status == DesignStatus::order_mismatch;
  j["model"] = solved ? model_value(r.model()) : ordered_json(nullptr);
  j["k0"] = r.k0;
  j["omega0"] = r.omega0;
  j["order"] = r.order;
  j["residuals"] = r.residuals;
  j["status"] = std::string(to_string(r.status));
  if (!r.message.empty()) {
    j["message"] = r.message;
  }
  return j.dump(2);
}

} // namespace tmep
