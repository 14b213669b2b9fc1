#pragma once

#include <json.hpp>
#include <string>

#include "bps/invariants.hpp"
#include "bps/lattice.hpp"
#include "bps/qseries.hpp"

// Canonical JSON forms: exponents sorted, big integers and rationals as
// decimal strings, field order fixed, so byte-identical output is meaningful
// for caching and golden tests.
namespace bps {

nlohmann::ordered_json to_json(const WLaurent& p);
nlohmann::ordered_json to_json(const QSeries& s);
nlohmann::ordered_json to_json(const PoleSeries& s);
nlohmann::ordered_json to_json(const PoleCoeff& c);
nlohmann::ordered_json to_json(const InvariantRecord& r);
nlohmann::ordered_json to_json(const Wall& w);
nlohmann::ordered_json to_json(const Polarization& j);

QSeries qseries_from_json(const nlohmann::ordered_json& j);
PoleSeries poleseries_from_json(const nlohmann::ordered_json& j);

std::string canonical_dump(const nlohmann::ordered_json& j);

// FNV-1a 64-bit over a string; used for cache keys
std::string content_hash(const std::string& payload);

const char* side_name(Side s);
Side side_from_name(const std::string& name);

}  // namespace bps
