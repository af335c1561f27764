#include "frm/lifecycle/state.hpp"

#include "frm/common/error.hpp"

namespace frm::lifecycle {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Planning: return "planning";
    case Phase::Training: return "training";
    case Phase::Deployed: return "deployed";
  }
  return "planning";
}

Phase parse_phase(std::string_view name) {
  if (name == "planning") return Phase::Planning;
  if (name == "training") return Phase::Training;
  if (name == "deployed") return Phase::Deployed;
  throw Error(ErrorCode::NotFound, "unknown phase " + std::string(name));
}

std::optional<Phase> next_phase(Phase phase) {
  switch (phase) {
    case Phase::Planning: return Phase::Training;
    case Phase::Training: return Phase::Deployed;
    case Phase::Deployed: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace frm::lifecycle
