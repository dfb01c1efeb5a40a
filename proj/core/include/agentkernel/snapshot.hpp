#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "agentkernel/errors.hpp"

namespace agentkernel {

// Closed role set. Interactive roles are exactly the first eight.
enum class NodeRole {
  Button,
  Link,
  Textbox,
  Checkbox,
  Radio,
  Combobox,
  Listbox,
  Option,
  Heading,
  Dialog,
  List,
  ListItem,
  Image,
  GenericContainer,
  Text,
};

std::string_view to_string(NodeRole role);
std::optional<NodeRole> role_from_string(std::string_view s);
bool is_interactive(NodeRole role);

// Serialized as bare words after the attributes, in declaration order.
struct StateFlags {
  bool focusable = false;
  bool focused = false;
  bool required = false;
  bool disabled = false;
  bool checked = false;
  bool selected = false;
  bool occluded = false;

  bool operator==(const StateFlags&) const = default;
};

struct AccessibilityNode {
  int ref = 0;  // assigned at snapshot build; 0 on raw page trees
  NodeRole role = NodeRole::GenericContainer;
  std::string name;
  std::optional<std::string> description;
  StateFlags states;
  std::optional<int> level;
  std::optional<std::string> value;
  std::vector<AccessibilityNode> children;
};

// One line of the serialized snapshot text:
//   ref=<n> <role> "<name>" level="<k>" description="<d>" value="<v>" <flags...>
std::string serialize_node_line(const AccessibilityNode& node);

struct VersionedRef {
  int version = 0;
  int ref = 0;

  std::string to_text() const;  // "version:ref"
  static std::optional<VersionedRef> parse(std::string_view text);

  bool operator==(const VersionedRef&) const = default;
};

struct FilterRule {
  enum class MatchKind { NameContains, RoleEquals };

  MatchKind match_kind = MatchKind::NameContains;
  std::string pattern;  // case-insensitive for NameContains

  bool matches(const AccessibilityNode& node) const;
};

// Immutable after construction; cheap to copy (shares the tree).
class AccessibilitySnapshot {
 public:
  AccessibilitySnapshot() = default;

  int version() const { return version_; }
  bool empty() const { return root_ == nullptr; }
  const AccessibilityNode& root() const { return *root_; }
  const std::string& origin_url() const { return origin_url_; }
  std::int64_t built_at_tick() const { return built_at_tick_; }

  // Node count equals the highest assigned ref for freshly built snapshots;
  // filtering removes entries without renumbering.
  std::size_t node_count() const { return index_ ? index_->size() : 0; }
  int max_ref() const { return max_ref_; }

  const AccessibilityNode* find(int ref) const;

  // Refs present in the snapshot, ascending.
  std::vector<int> refs() const;

  static AccessibilitySnapshot from_reffed_tree(AccessibilityNode tree, int version,
                                                std::string origin_url,
                                                std::int64_t built_at_tick);

 private:
  int version_ = 0;
  std::shared_ptr<const AccessibilityNode> root_;
  std::shared_ptr<const std::unordered_map<int, const AccessibilityNode*>> index_;
  int max_ref_ = 0;
  std::string origin_url_;
  std::int64_t built_at_tick_ = 0;
};

// Assigns refs 1,2,3,... in depth-first pre-order over all nodes (any refs
// already present on the input are overwritten) and stamps the snapshot with
// version previous_version + 1. Throws EmptyTree when page_tree is empty.
AccessibilitySnapshot build_snapshot(const std::optional<AccessibilityNode>& page_tree,
                                     int previous_version, std::string origin_url = {},
                                     std::int64_t built_at_tick = 0);

// One line per node in pre-order. If the text would exceed max_chars it is
// cut at the last whole line that fits and a `[refs A-B trimmed]` marker line
// is appended (the marker itself is exempt from the cap). max_chars is
// clamped to >= 256.
std::string serialize_snapshot(const AccessibilitySnapshot& snapshot,
                               std::size_t max_chars = 50000);

// Serialized lines for refs in [start_ref, end_ref], no truncation marker.
// Throws EmptyRange when no present ref falls inside the interval.
std::string extract_range(const AccessibilitySnapshot& snapshot, int start_ref, int end_ref);

// Version must match exactly; otherwise StaleRefError. UnknownRef when the
// version matches but the ref is absent.
const AccessibilityNode& resolve_ref(const AccessibilitySnapshot& snapshot,
                                     VersionedRef target);

// Removes every matched node together with its subtree. Surviving refs are
// unchanged; version is unchanged. Filtering the root leaves an empty
// placeholder root (generic container, blank name, ref 1).
AccessibilitySnapshot filter_snapshot(const AccessibilitySnapshot& snapshot,
                                      const std::vector<FilterRule>& rules);

std::string truncation_marker(int first_omitted, int last_omitted);

}  // namespace agentkernel
