#include "agentkernel/snapshot.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace agentkernel {

namespace {

const char* kRoleNames[] = {
    "button",   "link",   "textbox", "checkbox", "radio",
    "combobox", "listbox", "option",  "heading",  "dialog",
    "list",     "listitem", "image",  "generic-container", "text",
};

std::string escape_quoted(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void index_tree(const AccessibilityNode& node,
                std::unordered_map<int, const AccessibilityNode*>& index, int& max_ref) {
  index.emplace(node.ref, &node);
  max_ref = std::max(max_ref, node.ref);
  for (const auto& child : node.children) index_tree(child, index, max_ref);
}

int assign_refs(AccessibilityNode& node, int next) {
  node.ref = next++;
  for (auto& child : node.children) next = assign_refs(child, next);
  return next;
}

void collect_lines(const AccessibilityNode& node, std::vector<std::string>& lines) {
  lines.push_back(serialize_node_line(node));
  for (const auto& child : node.children) collect_lines(child, lines);
}

// Returns nullopt when the node itself matches a rule (whole subtree removed).
std::optional<AccessibilityNode> filtered_copy(const AccessibilityNode& node,
                                               const std::vector<FilterRule>& rules) {
  for (const auto& rule : rules) {
    if (rule.matches(node)) return std::nullopt;
  }
  AccessibilityNode copy = node;
  copy.children.clear();
  for (const auto& child : node.children) {
    if (auto kept = filtered_copy(child, rules)) copy.children.push_back(std::move(*kept));
  }
  return copy;
}

}  // namespace

std::string_view to_string(NodeRole role) {
  return kRoleNames[static_cast<int>(role)];
}

std::optional<NodeRole> role_from_string(std::string_view s) {
  for (int i = 0; i < static_cast<int>(std::size(kRoleNames)); ++i) {
    if (s == kRoleNames[i]) return static_cast<NodeRole>(i);
  }
  return std::nullopt;
}

bool is_interactive(NodeRole role) {
  switch (role) {
    case NodeRole::Button:
    case NodeRole::Link:
    case NodeRole::Textbox:
    case NodeRole::Checkbox:
    case NodeRole::Radio:
    case NodeRole::Combobox:
    case NodeRole::Listbox:
    case NodeRole::Option:
      return true;
    default:
      return false;
  }
}

std::string serialize_node_line(const AccessibilityNode& node) {
  std::string line = "ref=" + std::to_string(node.ref);
  line += ' ';
  line += to_string(node.role);
  line += " \"" + escape_quoted(node.name) + '"';
  if (node.level) line += " level=\"" + std::to_string(*node.level) + '"';
  if (node.description) line += " description=\"" + escape_quoted(*node.description) + '"';
  if (node.value) line += " value=\"" + escape_quoted(*node.value) + '"';
  const auto& s = node.states;
  if (s.focusable) line += " focusable";
  if (s.focused) line += " focused";
  if (s.required) line += " required";
  if (s.disabled) line += " disabled";
  if (s.checked) line += " checked";
  if (s.selected) line += " selected";
  if (s.occluded) line += " occluded";
  return line;
}

std::string VersionedRef::to_text() const {
  return std::to_string(version) + ':' + std::to_string(ref);
}

std::optional<VersionedRef> VersionedRef::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  VersionedRef out;
  auto first = text.substr(0, colon);
  auto second = text.substr(colon + 1);
  auto r1 = std::from_chars(first.data(), first.data() + first.size(), out.version);
  auto r2 = std::from_chars(second.data(), second.data() + second.size(), out.ref);
  if (r1.ec != std::errc{} || r2.ec != std::errc{}) return std::nullopt;
  if (r1.ptr != first.data() + first.size() || r2.ptr != second.data() + second.size())
    return std::nullopt;
  return out;
}

bool FilterRule::matches(const AccessibilityNode& node) const {
  switch (match_kind) {
    case MatchKind::NameContains:
      return lowercase(node.name).find(lowercase(pattern)) != std::string::npos;
    case MatchKind::RoleEquals:
      return to_string(node.role) == lowercase(pattern);
  }
  return false;
}

const AccessibilityNode* AccessibilitySnapshot::find(int ref) const {
  if (!index_) return nullptr;
  auto it = index_->find(ref);
  return it == index_->end() ? nullptr : it->second;
}

std::vector<int> AccessibilitySnapshot::refs() const {
  std::vector<int> out;
  if (!index_) return out;
  out.reserve(index_->size());
  for (const auto& [ref, node] : *index_) out.push_back(ref);
  std::sort(out.begin(), out.end());
  return out;
}

AccessibilitySnapshot AccessibilitySnapshot::from_reffed_tree(AccessibilityNode tree,
                                                              int version,
                                                              std::string origin_url,
                                                              std::int64_t built_at_tick) {
  AccessibilitySnapshot snapshot;
  snapshot.version_ = version;
  snapshot.origin_url_ = std::move(origin_url);
  snapshot.built_at_tick_ = built_at_tick;
  auto root = std::make_shared<AccessibilityNode>(std::move(tree));
  auto index = std::make_shared<std::unordered_map<int, const AccessibilityNode*>>();
  int max_ref = 0;
  index_tree(*root, *index, max_ref);
  snapshot.root_ = std::move(root);
  snapshot.index_ = std::move(index);
  snapshot.max_ref_ = max_ref;
  return snapshot;
}

AccessibilitySnapshot build_snapshot(const std::optional<AccessibilityNode>& page_tree,
                                     int previous_version, std::string origin_url,
                                     std::int64_t built_at_tick) {
  if (!page_tree) throw KernelError(ErrorCode::EmptyTree, "page tree has no nodes");
  AccessibilityNode tree = *page_tree;
  assign_refs(tree, 1);
  return AccessibilitySnapshot::from_reffed_tree(std::move(tree), previous_version + 1,
                                                 std::move(origin_url), built_at_tick);
}

std::string truncation_marker(int first_omitted, int last_omitted) {
  return "[refs " + std::to_string(first_omitted) + '-' + std::to_string(last_omitted) +
         " trimmed]";
}

std::string serialize_snapshot(const AccessibilitySnapshot& snapshot, std::size_t max_chars) {
  if (snapshot.empty()) return {};
  max_chars = std::max<std::size_t>(max_chars, 256);

  std::vector<std::string> lines;
  collect_lines(snapshot.root(), lines);

  std::string out;
  std::size_t used = 0;
  std::size_t emitted = 0;
  for (const auto& line : lines) {
    if (used + line.size() + 1 > max_chars) break;
    out += line;
    out += '\n';
    used += line.size() + 1;
    ++emitted;
  }
  if (emitted < lines.size()) {
    // Lines are in pre-order so omitted refs are a contiguous tail.
    const auto& first_line = lines[emitted];
    int first_omitted = std::stoi(first_line.substr(4, first_line.find(' ') - 4));
    out += truncation_marker(first_omitted, snapshot.max_ref());
    out += '\n';
  }
  return out;
}

std::string extract_range(const AccessibilitySnapshot& snapshot, int start_ref, int end_ref) {
  if (snapshot.empty() || start_ref > end_ref)
    throw KernelError(ErrorCode::EmptyRange, "no refs in range " + std::to_string(start_ref) +
                                                 "-" + std::to_string(end_ref));
  std::string out;
  bool any = false;
  // Pre-order walk keeps output ordering identical to serialize_snapshot.
  std::vector<const AccessibilityNode*> stack{&snapshot.root()};
  while (!stack.empty()) {
    const AccessibilityNode* node = stack.back();
    stack.pop_back();
    if (node->ref >= start_ref && node->ref <= end_ref) {
      out += serialize_node_line(*node);
      out += '\n';
      any = true;
    }
    for (auto it = node->children.rbegin(); it != node->children.rend(); ++it)
      stack.push_back(&*it);
  }
  if (!any)
    throw KernelError(ErrorCode::EmptyRange, "no refs in range " + std::to_string(start_ref) +
                                                 "-" + std::to_string(end_ref));
  return out;
}

const AccessibilityNode& resolve_ref(const AccessibilitySnapshot& snapshot,
                                     VersionedRef target) {
  if (snapshot.empty() || target.version != snapshot.version())
    throw StaleRefError(snapshot.version(), target.version);
  const AccessibilityNode* node = snapshot.find(target.ref);
  if (!node)
    throw KernelError(ErrorCode::UnknownRef,
                      "ref " + std::to_string(target.ref) + " not present in snapshot v" +
                          std::to_string(snapshot.version()));
  return *node;
}

AccessibilitySnapshot filter_snapshot(const AccessibilitySnapshot& snapshot,
                                      const std::vector<FilterRule>& rules) {
  if (snapshot.empty()) return snapshot;
  if (rules.empty()) return snapshot;
  auto kept = filtered_copy(snapshot.root(), rules);
  if (!kept) {
    AccessibilityNode placeholder;
    placeholder.ref = 1;
    placeholder.role = NodeRole::GenericContainer;
    kept = std::move(placeholder);
  }
  return AccessibilitySnapshot::from_reffed_tree(std::move(*kept), snapshot.version(),
                                                 snapshot.origin_url(),
                                                 snapshot.built_at_tick());
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::StaleRef: return "StaleRef";
    case ErrorCode::UnknownRef: return "UnknownRef";
    case ErrorCode::EmptyTree: return "EmptyTree";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::ElementObscured: return "ElementObscured";
    case ErrorCode::ElementDisabled: return "ElementDisabled";
    case ErrorCode::NotInteractive: return "NotInteractive";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::NoDialogPending: return "NoDialogPending";
    case ErrorCode::NoSuchTab: return "NoSuchTab";
    case ErrorCode::InvalidBulk: return "InvalidBulk";
    case ErrorCode::PolicyDenied: return "PolicyDenied";
    case ErrorCode::ConfirmationRequired: return "ConfirmationRequired";
    case ErrorCode::MalformedUrl: return "MalformedUrl";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidDirective: return "InvalidDirective";
    case ErrorCode::MissingMemory: return "MissingMemory";
    case ErrorCode::InvalidLedger: return "InvalidLedger";
    case ErrorCode::ScenarioError: return "ScenarioError";
    case ErrorCode::IncomparableRuns: return "IncomparableRuns";
  }
  return "UnknownError";
}

}  // namespace agentkernel
