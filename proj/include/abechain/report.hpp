#pragma once

// Report rendering: a stable JSON schema (version 1) and a human-readable
// text table, plus a parser for the JSON form so reports can be consumed
// programmatically. Serialization is deterministic: equal reports render to
// identical bytes.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "verification.hpp"

namespace abechain {

using Json = nlohmann::ordered_json;

inline Json report_to_json(const CertificationReport& rep) {
  Json j;
  j["version"] = 1;
  j["scenario"] = rep.scenario;
  Json claims = Json::array();
  for (const auto& c : rep.claims) {
    Json jc;
    jc["id"] = c.id;
    jc["anchor"] = c.anchor;
    jc["status"] = c.pass ? "pass" : "fail";
    Json ev = Json::object();
    for (const auto& [k, v] : c.evidence) ev[k] = v;
    jc["evidence"] = ev;
    jc["tolerance"] = c.tolerance;
    claims.push_back(std::move(jc));
  }
  j["claims"] = std::move(claims);
  Json events = Json::array();
  for (const auto& e : rep.transcript.events) {
    Json je;
    je["actor"] = e.actor;
    je["action"] = e.action;
    je["targets"] = e.targets;
    je["detail"] = e.detail;
    events.push_back(std::move(je));
  }
  j["transcript"] = Json::object();
  j["transcript"]["events"] = std::move(events);
  j["transcript"]["singlets_consumed"] = rep.transcript.singlets_consumed;
  return j;
}

inline std::string report_to_json_text(const CertificationReport& rep) {
  return report_to_json(rep).dump(2) + "\n";
}

inline CertificationReport report_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1)
    throw std::invalid_argument("unsupported report version");
  CertificationReport rep;
  rep.scenario = j.at("scenario").get<std::string>();
  for (const auto& jc : j.at("claims")) {
    Claim c;
    c.id = jc.at("id").get<std::string>();
    c.anchor = jc.at("anchor").get<std::string>();
    const std::string status = jc.at("status").get<std::string>();
    if (status != "pass" && status != "fail") throw std::invalid_argument("unknown claim status");
    c.pass = status == "pass";
    for (auto it = jc.at("evidence").begin(); it != jc.at("evidence").end(); ++it)
      c.evidence.emplace_back(it.key(), it.value().get<double>());
    c.tolerance = jc.at("tolerance").get<double>();
    rep.claims.push_back(std::move(c));
  }
  const Json& jt = j.at("transcript");
  for (const auto& je : jt.at("events")) {
    TranscriptEvent e;
    e.actor = je.at("actor").get<std::string>();
    e.action = je.at("action").get<std::string>();
    e.targets = je.at("targets").get<std::vector<std::size_t>>();
    e.detail = je.at("detail").get<std::string>();
    rep.transcript.events.push_back(std::move(e));
  }
  rep.transcript.singlets_consumed = jt.at("singlets_consumed").get<std::size_t>();
  return rep;
}

inline std::string report_to_text(const CertificationReport& rep) {
  std::ostringstream os;
  os << "scenario: " << rep.scenario << "\n\n";
  std::size_t passed = 0;
  for (const auto& c : rep.claims) {
    if (c.pass) ++passed;
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << "\n";
    os << "       " << c.anchor << "\n";
    if (!c.evidence.empty()) {
      os << "      ";
      for (const auto& [k, v] : c.evidence) os << ' ' << k << '=' << v;
      if (c.tolerance > 0.0) os << " (tolerance " << c.tolerance << ')';
      os << "\n";
    }
  }
  os << "\ntranscript: " << rep.transcript.events.size() << " events, "
     << rep.transcript.singlets_consumed << " singlets consumed\n";
  for (const auto& e : rep.transcript.events) {
    os << "  " << e.actor << ' ' << e.action << " [";
    for (std::size_t i = 0; i < e.targets.size(); ++i) os << (i ? "," : "") << e.targets[i];
    os << "] " << e.detail << "\n";
  }
  os << "\nresult: " << (rep.all_pass() ? "PASS" : "FAIL") << " (" << passed << "/" << rep.claims.size()
     << " claims)\n";
  return os.str();
}

}  // namespace abechain
