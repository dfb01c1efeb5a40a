#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentkernel/snapshot.hpp"

namespace agentkernel {

enum class ActionKind {
  Click,
  Type,
  Hover,
  PressKey,
  SelectOption,
  UploadFile,
  Drag,
  Pan,
  Focus,
  WaitFor,
  HandleDialog,
  Navigate,
  NavigateBack,
  BrowserTabs,
  Snapshot,
  TakeScreenshot,
};

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> action_kind_from_string(std::string_view s);

// Kinds that can change page or session state. Reads (snapshot,
// take_screenshot) never trigger a rebuild.
bool mutates_state(ActionKind kind);

// Subset of mutating kinds whose resolved target is scanned for sensitive
// keywords before execution.
bool keyword_gated(ActionKind kind);

struct ClickParams {
  VersionedRef ref;
  bool double_click = false;
  bool right_click = false;
  int hold_ms = 0;
};

struct TypeParams {
  VersionedRef ref;
  std::string text;
  bool should_clear = false;
};

struct HoverParams {
  VersionedRef ref;
};

struct PressKeyParams {
  std::string key;
};

struct SelectOptionParams {
  VersionedRef ref;
  std::vector<std::string> values;
};

struct UploadFileParams {
  VersionedRef ref;
  std::vector<std::string> file_paths;
};

struct DragParams {
  VersionedRef start_ref;
  VersionedRef end_ref;
};

struct PanParams {
  std::optional<VersionedRef> ref;
  int delta_x = 0;
  int delta_y = 0;
};

struct FocusParams {
  VersionedRef ref;
};

struct WaitForParams {
  std::optional<int> time;  // ticks
  std::optional<std::string> text_to_wait;
  std::optional<std::string> text_gone;
};

struct HandleDialogParams {
  bool accept = false;
  std::optional<std::string> prompt_text;
};

struct NavigateParams {
  std::string url;
};

struct NavigateBackParams {};

enum class TabAction { Create, Switch, Close };

std::string_view to_string(TabAction action);

struct BrowserTabsParams {
  TabAction action = TabAction::Create;
  std::optional<std::string> url;
  std::optional<int> tab_id;
};

struct SnapshotParams {
  std::optional<VersionedRef> ref;
  std::optional<std::string> media_type;
  std::optional<int> start_ref;
  std::optional<int> end_ref;
};

struct TakeScreenshotParams {
  std::optional<VersionedRef> ref;
  bool full_page = false;
};

// The three self-reported progress fields carried on every tool call.
struct AgentMemo {
  std::optional<std::string> evaluation_previous_goal;
  std::optional<std::string> memory;
  std::optional<std::string> next_goal;
};

using ActionParams =
    std::variant<ClickParams, TypeParams, HoverParams, PressKeyParams, SelectOptionParams,
                 UploadFileParams, DragParams, PanParams, FocusParams, WaitForParams,
                 HandleDialogParams, NavigateParams, NavigateBackParams, BrowserTabsParams,
                 SnapshotParams, TakeScreenshotParams>;

struct Action {
  ActionParams params;
  AgentMemo memo;

  ActionKind kind() const { return static_cast<ActionKind>(params.index()); }

  template <typename T>
  const T& as() const {
    return std::get<T>(params);
  }

  // Refs the action carries, in declaration order. Empty for ref-free kinds.
  std::vector<VersionedRef> refs() const;
};

struct BulkRequest {
  std::vector<Action> actions;
  AgentMemo memo;
};

// Wire form: {"kind": ..., "params": {...}, "memory": ...} with refs encoded
// as "version:ref" strings. Throws ParseError on malformed input.
nlohmann::json action_to_json(const Action& action);
Action action_from_json(const nlohmann::json& j);

nlohmann::json bulk_to_json(const BulkRequest& request);
BulkRequest bulk_from_json(const nlohmann::json& j);

// Compact one-call rendering for the history log, e.g.
//   click(ref=42), type(ref=42, "John Doe")
std::string action_digest(const Action& action);
std::string actions_digest(const std::vector<Action>& actions);

}  // namespace agentkernel
