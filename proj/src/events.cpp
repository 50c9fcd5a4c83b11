#include "swarm/events.hpp"

#include <sstream>

#include "json.hpp"

namespace swarm {

using nlohmann::json;

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::kDiscovery: return "discovery";
    case EventKind::kBroadcast: return "broadcast";
    case EventKind::kDeploy: return "deploy";
    case EventKind::kLeave: return "leave";
    case EventKind::kDecide: return "decide";
    case EventKind::kResample: return "resample";
    case EventKind::kSync: return "sync";
    case EventKind::kFailure: return "failure";
    case EventKind::kStranded: return "stranded";
    case EventKind::kRecharge: return "recharge";
  }
  return "?";
}

namespace {

json key_json(SpotKey k) { return json::array({k.qx, k.qy}); }

json keys_json(const std::vector<SpotKey>& keys) {
  json arr = json::array();
  for (const auto& k : keys) arr.push_back(key_json(k));
  return arr;
}

json frame_json(const WireFrame& frame) {
  json arr = json::array();
  for (const auto& slot : frame.slots) {
    json row = json::array();
    for (double v : slot) row.push_back(v);
    arr.push_back(std::move(row));
  }
  return arr;
}

struct PayloadToJson {
  json operator()(const DiscoveryPayload& p) const {
    return {{"key", key_json(p.key)},
            {"spot", p.spot_id},
            {"color", to_int(p.color)},
            {"target", to_int(p.worker_target)}};
  }
  json operator()(const BroadcastPayload& p) const {
    json receivers = json::array();
    for (const auto& r : p.receivers) receivers.push_back(r.str());
    json out = {{"receivers", std::move(receivers)},
                {"keys", keys_json(p.keys)}};
    if (p.frame) out["frame"] = frame_json(*p.frame);
    return out;
  }
  json operator()(const DeployPayload& p) const {
    return {{"spot", p.spot_id},
            {"color", to_int(p.color)},
            {"target", to_int(p.worker_target)},
            {"forage", p.forage_phase}};
  }
  json operator()(const LeavePayload& p) const {
    return {{"spot", p.spot_id}, {"reason", p.reason}};
  }
  json operator()(const DecidePayload& p) const {
    json out = {{"attempts", p.attempts}, {"go", p.go}};
    if (p.key) out["key"] = key_json(*p.key);
    return out;
  }
  json operator()(const ResamplePayload& p) const {
    return {{"old", to_int(p.old_target)}, {"new", to_int(p.new_target)}};
  }
  json operator()(const SyncPayload& p) const {
    return {{"station", p.station_id},
            {"to_station", keys_json(p.keys_to_station)},
            {"from_station", p.rows_from_station}};
  }
  json operator()(const FailurePayload& p) const {
    json out = json::object();
    if (p.freed_spot) out["freed_spot"] = *p.freed_spot;
    return out;
  }
  json operator()(const EmptyPayload&) const { return json::object(); }
};

}  // namespace

std::string event_to_json(const Event& e) {
  json j = {{"tick", e.tick},
            {"agent", e.agent.str()},
            {"kind", event_kind_name(e.kind)},
            {"payload", std::visit(PayloadToJson{}, e.payload)}};
  return j.dump();
}

void write_jsonl(const EventLog& log, const SimConfig& cfg, std::ostream& out) {
  json meta = {{"kind", "meta"},
               {"schema_version", cfg.schema_version},
               {"method", method_name(cfg.method)},
               {"seed", cfg.seed},
               {"worker_count", cfg.worker_count},
               {"chapar_count", cfg.chapar_count}};
  out << meta.dump() << '\n';
  for (const auto& e : log.events) {
    out << event_to_json(e) << '\n';
  }
}

std::string to_jsonl(const EventLog& log, const SimConfig& cfg) {
  std::ostringstream ss;
  write_jsonl(log, cfg, ss);
  return ss.str();
}

}  // namespace swarm
