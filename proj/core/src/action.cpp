#include "agentkernel/action.hpp"

#include <array>

namespace agentkernel {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 16> kKindNames = {
    "click",        "type",          "hover",       "press_key",
    "select_option", "upload_file",  "drag",        "pan",
    "focus",        "wait_for",      "handle_dialog", "navigate",
    "navigate_back", "browser_tabs", "snapshot",    "take_screenshot",
};

json ref_to_json(const VersionedRef& ref) { return ref.to_text(); }

VersionedRef ref_from_json(const json& j, const char* field) {
  if (!j.is_string())
    throw KernelError(ErrorCode::ParseError,
                      std::string("expected \"version:ref\" string for '") + field + "'");
  auto parsed = VersionedRef::parse(j.get<std::string>());
  if (!parsed)
    throw KernelError(ErrorCode::ParseError,
                      "malformed ref '" + j.get<std::string>() + "' for '" + field + "'");
  return *parsed;
}

VersionedRef require_ref(const json& params, const char* field) {
  if (!params.contains(field))
    throw KernelError(ErrorCode::ParseError, std::string("missing required ref '") + field + "'");
  return ref_from_json(params.at(field), field);
}

std::string require_string(const json& params, const char* field) {
  if (!params.contains(field) || !params.at(field).is_string())
    throw KernelError(ErrorCode::ParseError,
                      std::string("missing required string '") + field + "'");
  return params.at(field).get<std::string>();
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view to_string(ActionKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<ActionKind> action_kind_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (s == kKindNames[i]) return static_cast<ActionKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(TabAction action) {
  switch (action) {
    case TabAction::Create: return "create";
    case TabAction::Switch: return "switch";
    case TabAction::Close: return "close";
  }
  return "create";
}

bool mutates_state(ActionKind kind) {
  return kind != ActionKind::Snapshot && kind != ActionKind::TakeScreenshot;
}

bool keyword_gated(ActionKind kind) {
  switch (kind) {
    case ActionKind::Click:
    case ActionKind::Type:
    case ActionKind::SelectOption:
    case ActionKind::UploadFile:
    case ActionKind::Drag:
      return true;
    default:
      return false;
  }
}

std::vector<VersionedRef> Action::refs() const {
  std::vector<VersionedRef> out;
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ClickParams> || std::is_same_v<T, TypeParams> ||
                      std::is_same_v<T, HoverParams> || std::is_same_v<T, SelectOptionParams> ||
                      std::is_same_v<T, UploadFileParams> || std::is_same_v<T, FocusParams>) {
          out.push_back(p.ref);
        } else if constexpr (std::is_same_v<T, DragParams>) {
          out.push_back(p.start_ref);
          out.push_back(p.end_ref);
        } else if constexpr (std::is_same_v<T, PanParams> ||
                             std::is_same_v<T, SnapshotParams> ||
                             std::is_same_v<T, TakeScreenshotParams>) {
          if (p.ref) out.push_back(*p.ref);
        }
      },
      params);
  return out;
}

nlohmann::json action_to_json(const Action& action) {
  json params = json::object();
  std::visit(
      [&params](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ClickParams>) {
          params["ref"] = ref_to_json(p.ref);
          if (p.double_click) params["doubleClick"] = true;
          if (p.right_click) params["rightClick"] = true;
          if (p.hold_ms > 0) params["holdMs"] = p.hold_ms;
        } else if constexpr (std::is_same_v<T, TypeParams>) {
          params["ref"] = ref_to_json(p.ref);
          params["text"] = p.text;
          if (p.should_clear) params["shouldClear"] = true;
        } else if constexpr (std::is_same_v<T, HoverParams> || std::is_same_v<T, FocusParams>) {
          params["ref"] = ref_to_json(p.ref);
        } else if constexpr (std::is_same_v<T, PressKeyParams>) {
          params["key"] = p.key;
        } else if constexpr (std::is_same_v<T, SelectOptionParams>) {
          params["ref"] = ref_to_json(p.ref);
          params["values"] = p.values;
        } else if constexpr (std::is_same_v<T, UploadFileParams>) {
          params["ref"] = ref_to_json(p.ref);
          params["filePaths"] = p.file_paths;
        } else if constexpr (std::is_same_v<T, DragParams>) {
          params["startRef"] = ref_to_json(p.start_ref);
          params["endRef"] = ref_to_json(p.end_ref);
        } else if constexpr (std::is_same_v<T, PanParams>) {
          if (p.ref) params["ref"] = ref_to_json(*p.ref);
          params["deltaX"] = p.delta_x;
          params["deltaY"] = p.delta_y;
        } else if constexpr (std::is_same_v<T, WaitForParams>) {
          if (p.time) params["time"] = *p.time;
          if (p.text_to_wait) params["textToWait"] = *p.text_to_wait;
          if (p.text_gone) params["textGone"] = *p.text_gone;
        } else if constexpr (std::is_same_v<T, HandleDialogParams>) {
          params["accept"] = p.accept;
          if (p.prompt_text) params["promptText"] = *p.prompt_text;
        } else if constexpr (std::is_same_v<T, NavigateParams>) {
          params["url"] = p.url;
        } else if constexpr (std::is_same_v<T, NavigateBackParams>) {
          // no params
        } else if constexpr (std::is_same_v<T, BrowserTabsParams>) {
          params["action"] = std::string(to_string(p.action));
          if (p.url) params["url"] = *p.url;
          if (p.tab_id) params["tabId"] = *p.tab_id;
        } else if constexpr (std::is_same_v<T, SnapshotParams>) {
          if (p.ref) params["ref"] = ref_to_json(*p.ref);
          if (p.media_type) params["mediaType"] = *p.media_type;
          if (p.start_ref) params["startRef"] = *p.start_ref;
          if (p.end_ref) params["endRef"] = *p.end_ref;
        } else if constexpr (std::is_same_v<T, TakeScreenshotParams>) {
          if (p.ref) params["ref"] = ref_to_json(*p.ref);
          if (p.full_page) params["fullPage"] = true;
        }
      },
      action.params);

  json out;
  out["kind"] = std::string(to_string(action.kind()));
  out["params"] = std::move(params);
  if (action.memo.evaluation_previous_goal)
    out["evaluation_previous_goal"] = *action.memo.evaluation_previous_goal;
  if (action.memo.memory) out["memory"] = *action.memo.memory;
  if (action.memo.next_goal) out["next_goal"] = *action.memo.next_goal;
  return out;
}

Action action_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw KernelError(ErrorCode::ParseError, "action must be an object with a 'kind' field");
  auto kind = action_kind_from_string(j.at("kind").get<std::string>());
  if (!kind)
    throw KernelError(ErrorCode::ParseError,
                      "unknown action kind '" + j.at("kind").get<std::string>() + "'");
  json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object())
    throw KernelError(ErrorCode::ParseError, "'params' must be an object");

  Action action;
  switch (*kind) {
    case ActionKind::Click: {
      ClickParams p;
      p.ref = require_ref(params, "ref");
      p.double_click = params.value("doubleClick", false);
      p.right_click = params.value("rightClick", false);
      p.hold_ms = params.value("holdMs", 0);
      action.params = p;
      break;
    }
    case ActionKind::Type: {
      TypeParams p;
      p.ref = require_ref(params, "ref");
      p.text = require_string(params, "text");
      p.should_clear = params.value("shouldClear", false);
      action.params = p;
      break;
    }
    case ActionKind::Hover: {
      action.params = HoverParams{require_ref(params, "ref")};
      break;
    }
    case ActionKind::PressKey: {
      action.params = PressKeyParams{require_string(params, "key")};
      break;
    }
    case ActionKind::SelectOption: {
      SelectOptionParams p;
      p.ref = require_ref(params, "ref");
      if (!params.contains("values") || !params.at("values").is_array())
        throw KernelError(ErrorCode::ParseError, "select_option requires a 'values' array");
      p.values = params.at("values").get<std::vector<std::string>>();
      action.params = p;
      break;
    }
    case ActionKind::UploadFile: {
      UploadFileParams p;
      p.ref = require_ref(params, "ref");
      if (!params.contains("filePaths") || !params.at("filePaths").is_array())
        throw KernelError(ErrorCode::ParseError, "upload_file requires a 'filePaths' array");
      p.file_paths = params.at("filePaths").get<std::vector<std::string>>();
      action.params = p;
      break;
    }
    case ActionKind::Drag: {
      action.params =
          DragParams{require_ref(params, "startRef"), require_ref(params, "endRef")};
      break;
    }
    case ActionKind::Pan: {
      PanParams p;
      if (params.contains("ref")) p.ref = ref_from_json(params.at("ref"), "ref");
      p.delta_x = params.value("deltaX", 0);
      p.delta_y = params.value("deltaY", 0);
      action.params = p;
      break;
    }
    case ActionKind::Focus: {
      action.params = FocusParams{require_ref(params, "ref")};
      break;
    }
    case ActionKind::WaitFor: {
      WaitForParams p;
      if (params.contains("time")) p.time = params.at("time").get<int>();
      if (params.contains("textToWait")) p.text_to_wait = params.at("textToWait").get<std::string>();
      if (params.contains("textGone")) p.text_gone = params.at("textGone").get<std::string>();
      action.params = p;
      break;
    }
    case ActionKind::HandleDialog: {
      HandleDialogParams p;
      if (!params.contains("accept") || !params.at("accept").is_boolean())
        throw KernelError(ErrorCode::ParseError, "handle_dialog requires boolean 'accept'");
      p.accept = params.at("accept").get<bool>();
      if (params.contains("promptText")) p.prompt_text = params.at("promptText").get<std::string>();
      action.params = p;
      break;
    }
    case ActionKind::Navigate: {
      action.params = NavigateParams{require_string(params, "url")};
      break;
    }
    case ActionKind::NavigateBack: {
      action.params = NavigateBackParams{};
      break;
    }
    case ActionKind::BrowserTabs: {
      BrowserTabsParams p;
      std::string a = require_string(params, "action");
      if (a == "create") p.action = TabAction::Create;
      else if (a == "switch") p.action = TabAction::Switch;
      else if (a == "close") p.action = TabAction::Close;
      else throw KernelError(ErrorCode::ParseError, "unknown tab action '" + a + "'");
      if (params.contains("url")) p.url = params.at("url").get<std::string>();
      if (params.contains("tabId")) p.tab_id = params.at("tabId").get<int>();
      action.params = p;
      break;
    }
    case ActionKind::Snapshot: {
      SnapshotParams p;
      if (params.contains("ref")) p.ref = ref_from_json(params.at("ref"), "ref");
      if (params.contains("mediaType")) p.media_type = params.at("mediaType").get<std::string>();
      if (params.contains("startRef")) p.start_ref = params.at("startRef").get<int>();
      if (params.contains("endRef")) p.end_ref = params.at("endRef").get<int>();
      action.params = p;
      break;
    }
    case ActionKind::TakeScreenshot: {
      TakeScreenshotParams p;
      if (params.contains("ref")) p.ref = ref_from_json(params.at("ref"), "ref");
      p.full_page = params.value("fullPage", false);
      action.params = p;
      break;
    }
  }

  if (j.contains("evaluation_previous_goal"))
    action.memo.evaluation_previous_goal = j.at("evaluation_previous_goal").get<std::string>();
  if (j.contains("memory")) action.memo.memory = j.at("memory").get<std::string>();
  if (j.contains("next_goal")) action.memo.next_goal = j.at("next_goal").get<std::string>();
  return action;
}

nlohmann::json bulk_to_json(const BulkRequest& request) {
  json out;
  out["kind"] = "bulk";
  json actions = json::array();
  for (const auto& action : request.actions) actions.push_back(action_to_json(action));
  out["actions"] = std::move(actions);
  if (request.memo.evaluation_previous_goal)
    out["evaluation_previous_goal"] = *request.memo.evaluation_previous_goal;
  if (request.memo.memory) out["memory"] = *request.memo.memory;
  if (request.memo.next_goal) out["next_goal"] = *request.memo.next_goal;
  return out;
}

BulkRequest bulk_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("kind", "") != "bulk" || !j.contains("actions") ||
      !j.at("actions").is_array())
    throw KernelError(ErrorCode::ParseError, "bulk request must carry an 'actions' array");
  BulkRequest request;
  for (const auto& item : j.at("actions")) request.actions.push_back(action_from_json(item));
  if (j.contains("evaluation_previous_goal"))
    request.memo.evaluation_previous_goal = j.at("evaluation_previous_goal").get<std::string>();
  if (j.contains("memory")) request.memo.memory = j.at("memory").get<std::string>();
  if (j.contains("next_goal")) request.memo.next_goal = j.at("next_goal").get<std::string>();
  return request;
}

std::string action_digest(const Action& action) {
  std::string out(to_string(action.kind()));
  out += '(';
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ClickParams>) {
          out += "ref=" + std::to_string(p.ref.ref);
        } else if constexpr (std::is_same_v<T, TypeParams>) {
          out += "ref=" + std::to_string(p.ref.ref) + ", " + quote(p.text);
        } else if constexpr (std::is_same_v<T, HoverParams> || std::is_same_v<T, FocusParams>) {
          out += "ref=" + std::to_string(p.ref.ref);
        } else if constexpr (std::is_same_v<T, PressKeyParams>) {
          out += quote(p.key);
        } else if constexpr (std::is_same_v<T, SelectOptionParams>) {
          out += "ref=" + std::to_string(p.ref.ref) + ", [";
          for (std::size_t i = 0; i < p.values.size(); ++i) {
            if (i) out += ", ";
            out += quote(p.values[i]);
          }
          out += ']';
        } else if constexpr (std::is_same_v<T, UploadFileParams>) {
          out += "ref=" + std::to_string(p.ref.ref);
        } else if constexpr (std::is_same_v<T, DragParams>) {
          out += "ref=" + std::to_string(p.start_ref.ref) + " -> ref=" +
                 std::to_string(p.end_ref.ref);
        } else if constexpr (std::is_same_v<T, PanParams>) {
          out += "dx=" + std::to_string(p.delta_x) + ", dy=" + std::to_string(p.delta_y);
        } else if constexpr (std::is_same_v<T, WaitForParams>) {
          bool first = true;
          if (p.time) { out += "time=" + std::to_string(*p.time); first = false; }
          if (p.text_to_wait) {
            if (!first) out += ", ";
            out += quote(*p.text_to_wait);
            first = false;
          }
          if (p.text_gone) {
            if (!first) out += ", ";
            out += "gone=" + quote(*p.text_gone);
          }
        } else if constexpr (std::is_same_v<T, HandleDialogParams>) {
          out += p.accept ? "accept" : "dismiss";
        } else if constexpr (std::is_same_v<T, NavigateParams>) {
          out += quote(p.url);
        } else if constexpr (std::is_same_v<T, BrowserTabsParams>) {
          out += to_string(p.action);
          if (p.tab_id) out += ", tab=" + std::to_string(*p.tab_id);
        } else if constexpr (std::is_same_v<T, SnapshotParams>) {
          if (p.start_ref && p.end_ref)
            out += "startRef=" + std::to_string(*p.start_ref) + ", endRef=" +
                   std::to_string(*p.end_ref);
        } else if constexpr (std::is_same_v<T, TakeScreenshotParams>) {
          if (p.full_page) out += "fullPage";
        }
      },
      action.params);
  out += ')';
  return out;
}

std::string actions_digest(const std::vector<Action>& actions) {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ", ";
    out += action_digest(actions[i]);
  }
  return out;
}

}  // namespace agentkernel
