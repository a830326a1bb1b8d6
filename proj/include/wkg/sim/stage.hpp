#pragma once
// The six per-package stages between a truck reaching its dock and the
// package resting on a shelf.

#include <array>
#include <optional>
#include <string_view>

namespace wkg::sim {

enum class StageId {
  WaitToWorker,        // discharge_start -> worker_pick_up_start
  WorkerCarry,         // worker_pick_up_start -> worker_pick_up_end
  WaitAtWaitingPoint,  // worker_pick_up_end -> agv_journey_start
  AgvTransport,        // agv_journey_start -> agv_journey_end
  WaitForForklift,     // agv_journey_end -> fl_placement_start
  ForkliftPlacement,   // fl_placement_start -> fl_placement_end
};

inline constexpr std::array<StageId, 6> kAllStages{
    StageId::WaitToWorker,    StageId::WorkerCarry,     StageId::WaitAtWaitingPoint,
    StageId::AgvTransport,    StageId::WaitForForklift, StageId::ForkliftPlacement};

inline constexpr std::string_view stage_name(StageId s) {
  switch (s) {
    case StageId::WaitToWorker: return "WaitToWorker";
    case StageId::WorkerCarry: return "WorkerCarry";
    case StageId::WaitAtWaitingPoint: return "WaitAtWaitingPoint";
    case StageId::AgvTransport: return "AgvTransport";
    case StageId::WaitForForklift: return "WaitForForklift";
    case StageId::ForkliftPlacement: return "ForkliftPlacement";
  }
  return "";
}

// snake_case key used for query column names
inline constexpr std::string_view stage_key(StageId s) {
  switch (s) {
    case StageId::WaitToWorker: return "wait_to_worker";
    case StageId::WorkerCarry: return "worker_carry";
    case StageId::WaitAtWaitingPoint: return "wait_at_waiting_point";
    case StageId::AgvTransport: return "agv_transport";
    case StageId::WaitForForklift: return "wait_for_forklift";
    case StageId::ForkliftPlacement: return "forklift_placement";
  }
  return "";
}

// Human label as used in reports ("Wait to Worker").
inline constexpr std::string_view stage_label(StageId s) {
  switch (s) {
    case StageId::WaitToWorker: return "Wait to Worker";
    case StageId::WorkerCarry: return "Worker Carry";
    case StageId::WaitAtWaitingPoint: return "Wait at Waiting Point";
    case StageId::AgvTransport: return "AGV Transport";
    case StageId::WaitForForklift: return "Wait for Forklift";
    case StageId::ForkliftPlacement: return "Forklift Placement";
  }
  return "";
}

inline std::optional<StageId> parse_stage(std::string_view text) {
  for (auto s : kAllStages)
    if (text == stage_name(s) || text == stage_key(s)) return s;
  return std::nullopt;
}

}  // namespace wkg::sim
