#pragma once

#include <json.hpp>
#include <string>

#include "sdesplit/chen.hpp"
#include "sdesplit/expectation.hpp"
#include "sdesplit/mc.hpp"

namespace sdesplit {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a, hex; identifies the input in report envelopes.
std::string digest(const std::string& content);

// "p/q", or plain integer text when q = 1.
std::string render_order2(int order2);

// Integral symbol for the interpretation: Stratonovich J, Ito I.
std::string integral_symbol(Interpretation interp);

nlohmann::json iipoly_json(const IIPoly& p, const Alphabet& alphabet);
nlohmann::json hpoly_json(const HPoly& p);

nlohmann::json strong_report_json(const StrongOrderReport& r, const Alphabet& alphabet);
nlohmann::json weak_report_json(const WeakOrderReport& r, const Alphabet& alphabet);
nlohmann::json slope_report_json(const mc::SlopeReport& r, const std::string& scheme,
                                 const std::string& system);

std::string strong_report_text(const StrongOrderReport& r, const Alphabet& alphabet);
std::string weak_report_text(const WeakOrderReport& r, const Alphabet& alphabet);

// Deterministic wrapper: same inputs and version give identical bytes (the
// timestamp field is kept null for that reason).
nlohmann::json envelope(const std::string& command, const std::string& input_digest,
                        nlohmann::json payload);

}  // namespace sdesplit
