#pragma once

// JSON forms shared by the library and the CLI. Doubles are written with
// round-trip precision, keys in a fixed order, so equal inputs give equal
// bytes.

#include "tmep/critical.hpp"
#include "tmep/designer.hpp"
#include "tmep/model.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace tmep {

/// {"n": int, "t": [t_1, .., t_n]}. Throws ModelError on malformed JSON,
/// missing or mistyped fields, t.length != n, or an invalid model.
LatticeModel parse_model_json(std::string_view text);

/// Reads and parses a model file; unreadable files are a ModelError too.
LatticeModel read_model_file(const std::filesystem::path& path);

std::string model_json(const LatticeModel& model);

/// [{"k0", "omega0", "order", "a_p", "index", "class"}, ...]
std::string critical_report_json(std::span<const CriticalPoint> points);

/// {"model", "k0", "omega0", "order", "residuals", "status"}; failed designs
/// carry "message" and a null model.
std::string design_result_json(const DesignResult& result);

} // namespace tmep
