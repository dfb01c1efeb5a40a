#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentkernel/action.hpp"
#include "agentkernel/snapshot.hpp"

namespace agentkernel {

// What a click on a bound node does. Role-driven behavior (checkbox toggles,
// radio selection) needs no binding.
struct ClickEffect {
  enum class Kind {
    None,
    OpenDialog,        // target_id: dialog node to reveal and push
    CloseDialog,       // pops the top open dialog
    OpenNativeDialog,  // payload: "alert"|"confirm"|"prompt" '|' message; target_id: status node
    NavigateTo,        // payload: url (bubbled up as a navigation request)
    AddToCart,         // target_id: cart counter node
    NextPage,
    PrevPage,
    RevealNode,        // target_id: node to unhide (custom dropdown open)
    ChooseOption,      // target_id: dropdown button that receives this node's name as value
    SubmitForm,        // target_id: status node; payload: confirmation text
  };

  Kind kind = Kind::None;
  int target_id = 0;
  std::string payload;
};

struct PageNode {
  int id = 0;
  NodeRole role = NodeRole::GenericContainer;
  std::string name;
  std::optional<std::string> description;
  std::optional<int> level;
  std::optional<std::string> value;
  StateFlags states;
  bool hidden = false;       // excluded from snapshots while set
  bool value_slot = false;   // accepts type()
  bool file_input = false;   // accepts upload_file()
  bool reorderable = false;  // children accept drag()
  bool scrollable = false;   // accepts pan(); value mirrors the offset
  std::vector<std::string> options;  // native combobox/listbox choices
  ClickEffect on_click;
  int hover_reveal_id = 0;  // node unhidden by hover()
  std::vector<PageNode> children;
};

struct ScheduledEffect {
  enum class Kind { SetValue, SetName, Reveal, Hide };

  std::int64_t due_tick = 0;
  int seq = 0;  // stable order for effects due on the same tick
  Kind kind = Kind::SetValue;
  int target_id = 0;
  std::string payload;
};

struct MutationReport {
  std::vector<int> changed_nodes;
  bool needs_rebuild = true;
  std::optional<std::string> navigation_request;  // link clicks bubble up here
};

struct PageTemplate {
  std::string name;  // form | products | dialog-stack | article | blank
  nlohmann::json params = nlohmann::json::object();
};

PageTemplate page_template_from_json(const nlohmann::json& j);
nlohmann::json page_template_to_json(const PageTemplate& tmpl);

struct Product {
  std::string name;
  int price_cents = 0;
};

struct ProductsPageState {
  int current_page = 0;  // zero-based
  int items_per_page = 0;
  std::vector<Product> products;
};

struct VirtualPage {
  std::string url;
  bool ready = true;
  PageNode root;
  std::vector<int> open_dialogs;  // stack of dialog node ids
  std::vector<ScheduledEffect> scheduled;
  int next_seq = 0;
  int next_node_id = 1;
  int scroll_x = 0;  // page-level viewport offset; not part of the tree
  int scroll_y = 0;
  std::optional<ProductsPageState> products;

  PageNode* find(int id);
  const PageNode* find(int id) const;
  PageNode* parent_of(int id);
  bool in_open_dialog_top(int id) const;
  bool is_occluded(int id) const;
  void schedule(std::int64_t due_tick, ScheduledEffect::Kind kind, int target_id,
                std::string payload);

  // Accessibility projection: hidden nodes skipped, occlusion flags applied.
  // Second result lists page node ids in the same pre-order as the refs the
  // snapshot build will assign.
  std::pair<std::optional<AccessibilityNode>, std::vector<int>> project() const;
};

// Pure function of (template, rng_seed); throws UnknownTemplate/InvalidParams.
VirtualPage instantiate_template(const PageTemplate& tmpl, std::uint64_t rng_seed);

// The full price table the products template will serve, cheapest-first scan
// oracles regenerate it directly.
std::vector<Product> products_price_table(const nlohmann::json& params,
                                          std::uint64_t rng_seed);

struct NativeDialog {
  std::string kind;  // alert | confirm | prompt
  std::string message;
  int status_node_id = 0;
};

class BrowserSession {
 public:
  explicit BrowserSession(std::uint64_t rng_seed);

  std::uint64_t rng_seed() const { return rng_seed_; }
  std::int64_t clock() const { return clock_; }

  void set_routes(std::map<std::string, PageTemplate> routes);
  const PageTemplate* route_for(const std::string& url) const;

  bool has_tabs() const { return !tabs_.empty(); }
  int active_tab_id() const { return active_tab_; }
  std::vector<std::pair<int, std::string>> tab_list() const;

  int create_tab(const std::string& url);
  void switch_tab(int tab_id);
  void close_tab(int tab_id);

  // Replaces the active tab's page (creating tab 1 when none exist) and
  // rebuilds the snapshot.
  void load_template(const PageTemplate& tmpl);
  void do_navigate(const std::string& url);
  bool navigate_back();

  const AccessibilitySnapshot& current_snapshot() const;
  AccessibilitySnapshot rebuild_snapshot();
  int last_version() const { return last_version_; }
  int node_id_for_ref(int ref) const;

  VirtualPage& active_page();
  const VirtualPage& active_page() const;
  std::string active_host() const;

  bool native_dialog_pending() const { return pending_dialog_.has_value(); }
  const NativeDialog* pending_native_dialog() const;
  void handle_native_dialog(bool accept, const std::optional<std::string>& prompt_text);

  std::vector<ScheduledEffect> advance_clock(int ticks);

  MutationReport click_node(int id, const ClickParams& opts);
  MutationReport type_node(int id, const std::string& text, bool clear);
  MutationReport select_options_node(int id, const std::vector<std::string>& values);
  MutationReport upload_node(int id, const std::vector<std::string>& paths);
  MutationReport drag_nodes(int start_id, int end_id);
  MutationReport pan(std::optional<int> id, int delta_x, int delta_y);
  MutationReport focus_node(int id);
  MutationReport hover_node(int id);
  MutationReport press_key(const std::string& key);

  bool page_text_present(const std::string& text) const;

 private:
  struct Tab {
    int id = 0;
    VirtualPage page;
    std::vector<std::string> history;  // urls for navigate_back
    AccessibilitySnapshot snapshot;
    std::vector<int> ref_to_node;  // ref r -> page node id at index r-1
  };

  Tab& active_tab();
  const Tab& active_tab() const;
  Tab* find_tab(int tab_id);
  void ensure_actionable(int id) const;  // occlusion, native dialog, disabled
  MutationReport activate(PageNode& node);
  void apply_effect(const ScheduledEffect& effect);
  void rebuild_products_listing(VirtualPage& page);

  std::uint64_t rng_seed_;
  std::int64_t clock_ = 0;
  int last_version_ = 0;
  int next_tab_id_ = 1;
  int active_tab_ = 0;
  std::vector<Tab> tabs_;
  std::map<std::string, PageTemplate> routes_;
  std::optional<NativeDialog> pending_dialog_;
  std::string clipboard_;
};

// Extracts the host from scheme://host[:port]/... urls. Throws MalformedUrl.
std::string url_host(const std::string& url);

}  // namespace agentkernel
