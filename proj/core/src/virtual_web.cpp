#include "agentkernel/virtual_web.hpp"

#include <algorithm>
#include <cmath>

namespace agentkernel {

// Defined in page_templates.cpp next to the listing construction code.
void rebuild_products_listing_impl(VirtualPage& page);

namespace {

PageNode* find_in(PageNode& node, int id) {
  if (node.id == id) return &node;
  for (auto& child : node.children) {
    if (PageNode* hit = find_in(child, id)) return hit;
  }
  return nullptr;
}

PageNode* parent_in(PageNode& node, int id) {
  for (auto& child : node.children) {
    if (child.id == id) return &node;
    if (PageNode* hit = parent_in(child, id)) return hit;
  }
  return nullptr;
}

bool subtree_contains(const PageNode& node, int id) {
  if (node.id == id) return true;
  for (const auto& child : node.children) {
    if (subtree_contains(child, id)) return true;
  }
  return false;
}

void project_node(const PageNode& node, bool occlude_outside, const PageNode* top_dialog,
                  AccessibilityNode& out, std::vector<int>& preorder_ids) {
  AccessibilityNode projected;
  projected.role = node.role;
  projected.name = node.name;
  projected.description = node.description;
  projected.level = node.level;
  projected.value = node.value;
  projected.states = node.states;
  if (occlude_outside && !(top_dialog && subtree_contains(*top_dialog, node.id)))
    projected.states.occluded = true;
  preorder_ids.push_back(node.id);
  out = std::move(projected);
  for (const auto& child : node.children) {
    if (child.hidden) continue;
    AccessibilityNode projected_child;
    project_node(child, occlude_outside, top_dialog, projected_child, preorder_ids);
    out.children.push_back(std::move(projected_child));
  }
}

bool node_text_contains(const PageNode& node, const std::string& text) {
  if (node.hidden) return false;
  if (node.name.find(text) != std::string::npos) return true;
  if (node.value && node.value->find(text) != std::string::npos) return true;
  for (const auto& child : node.children) {
    if (node_text_contains(child, text)) return true;
  }
  return false;
}

bool collect_focusables(PageNode& node, std::vector<PageNode*>& out) {
  if (node.hidden) return false;
  if (node.states.focusable && !node.states.disabled) out.push_back(&node);
  for (auto& child : node.children) collect_focusables(child, out);
  return true;
}

PageNode* focused_in(PageNode& node) {
  if (node.states.focused) return &node;
  for (auto& child : node.children) {
    if (PageNode* hit = focused_in(child)) return hit;
  }
  return nullptr;
}

void clear_focus(PageNode& node) {
  node.states.focused = false;
  for (auto& child : node.children) clear_focus(child);
}

bool is_scroll_key(const std::string& key) {
  return key == "ArrowUp" || key == "ArrowDown" || key == "PageUp" || key == "PageDown" ||
         key == "Home" || key == "End";
}

bool is_chord(const std::string& key) {
  auto plus = key.find('+');
  if (plus == std::string::npos || plus == 0 || plus + 1 >= key.size()) return false;
  std::string mod = key.substr(0, plus);
  return mod == "Ctrl" || mod == "Cmd" || mod == "Alt" || mod == "Shift";
}

bool known_key(const std::string& key) {
  return key == "Tab" || key == "Enter" || key == "Escape" || key == "ArrowLeft" ||
         key == "ArrowRight" || is_scroll_key(key) || is_chord(key);
}

}  // namespace

PageTemplate page_template_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
    throw KernelError(ErrorCode::InvalidParams, "template must be {name, params}");
  PageTemplate tmpl;
  tmpl.name = j.at("name").get<std::string>();
  if (j.contains("params")) {
    if (!j.at("params").is_object())
      throw KernelError(ErrorCode::InvalidParams, "template params must be an object");
    tmpl.params = j.at("params");
  }
  return tmpl;
}

nlohmann::json page_template_to_json(const PageTemplate& tmpl) {
  return nlohmann::json{{"name", tmpl.name}, {"params", tmpl.params}};
}

PageNode* VirtualPage::find(int id) { return find_in(root, id); }

const PageNode* VirtualPage::find(int id) const {
  return find_in(const_cast<PageNode&>(root), id);
}

PageNode* VirtualPage::parent_of(int id) { return parent_in(root, id); }

bool VirtualPage::in_open_dialog_top(int id) const {
  if (open_dialogs.empty()) return false;
  const PageNode* top = find(open_dialogs.back());
  return top && subtree_contains(*top, id);
}

bool VirtualPage::is_occluded(int id) const {
  if (open_dialogs.empty()) return false;
  return !in_open_dialog_top(id);
}

void VirtualPage::schedule(std::int64_t due_tick, ScheduledEffect::Kind kind, int target_id,
                           std::string payload) {
  scheduled.push_back({due_tick, next_seq++, kind, target_id, std::move(payload)});
}

std::pair<std::optional<AccessibilityNode>, std::vector<int>> VirtualPage::project() const {
  std::vector<int> preorder_ids;
  const PageNode* top_dialog =
      open_dialogs.empty() ? nullptr : find(open_dialogs.back());
  AccessibilityNode tree;
  project_node(root, !open_dialogs.empty(), top_dialog, tree, preorder_ids);
  return {std::move(tree), std::move(preorder_ids)};
}

std::string url_host(const std::string& url) {
  auto scheme = url.find("://");
  if (scheme == std::string::npos || scheme == 0)
    throw KernelError(ErrorCode::MalformedUrl, "cannot parse host from '" + url + "'");
  auto start = scheme + 3;
  auto end = url.find_first_of("/?#", start);
  std::string authority = url.substr(start, end == std::string::npos ? std::string::npos
                                                                     : end - start);
  auto port = authority.find(':');
  if (port != std::string::npos) authority = authority.substr(0, port);
  if (authority.empty())
    throw KernelError(ErrorCode::MalformedUrl, "cannot parse host from '" + url + "'");
  return authority;
}

BrowserSession::BrowserSession(std::uint64_t rng_seed) : rng_seed_(rng_seed) {}

void BrowserSession::set_routes(std::map<std::string, PageTemplate> routes) {
  routes_ = std::move(routes);
}

const PageTemplate* BrowserSession::route_for(const std::string& url) const {
  auto it = routes_.find(url);
  return it == routes_.end() ? nullptr : &it->second;
}

std::vector<std::pair<int, std::string>> BrowserSession::tab_list() const {
  std::vector<std::pair<int, std::string>> out;
  out.reserve(tabs_.size());
  for (const auto& tab : tabs_) out.emplace_back(tab.id, tab.page.url);
  return out;
}

BrowserSession::Tab& BrowserSession::active_tab() {
  for (auto& tab : tabs_) {
    if (tab.id == active_tab_) return tab;
  }
  throw KernelError(ErrorCode::NoSuchTab, "session has no active tab");
}

const BrowserSession::Tab& BrowserSession::active_tab() const {
  for (const auto& tab : tabs_) {
    if (tab.id == active_tab_) return tab;
  }
  throw KernelError(ErrorCode::NoSuchTab, "session has no active tab");
}

BrowserSession::Tab* BrowserSession::find_tab(int tab_id) {
  for (auto& tab : tabs_) {
    if (tab.id == tab_id) return &tab;
  }
  return nullptr;
}

int BrowserSession::create_tab(const std::string& url) {
  Tab tab;
  tab.id = next_tab_id_++;
  if (const PageTemplate* tmpl = route_for(url)) {
    tab.page = instantiate_template(*tmpl, rng_seed_);
    tab.page.url = url;
  } else {
    tab.page = instantiate_template({"blank", nlohmann::json::object()}, rng_seed_);
    if (!url.empty()) tab.page.url = url;
  }
  tabs_.push_back(std::move(tab));
  active_tab_ = tabs_.back().id;
  rebuild_snapshot();
  return active_tab_;
}

void BrowserSession::switch_tab(int tab_id) {
  if (!find_tab(tab_id))
    throw KernelError(ErrorCode::NoSuchTab, "no tab with id " + std::to_string(tab_id));
  active_tab_ = tab_id;
  rebuild_snapshot();
}

void BrowserSession::close_tab(int tab_id) {
  auto it = std::find_if(tabs_.begin(), tabs_.end(),
                         [tab_id](const Tab& tab) { return tab.id == tab_id; });
  if (it == tabs_.end())
    throw KernelError(ErrorCode::NoSuchTab, "no tab with id " + std::to_string(tab_id));
  bool was_active = (tab_id == active_tab_);
  tabs_.erase(it);
  if (tabs_.empty()) {
    active_tab_ = 0;
    return;
  }
  if (was_active) {
    active_tab_ = tabs_.front().id;
    rebuild_snapshot();
  }
}

void BrowserSession::load_template(const PageTemplate& tmpl) {
  if (tabs_.empty()) {
    Tab tab;
    tab.id = next_tab_id_++;
    tabs_.push_back(std::move(tab));
    active_tab_ = tabs_.back().id;
  }
  Tab& tab = active_tab();
  tab.page = instantiate_template(tmpl, rng_seed_);
  tab.history.clear();
  rebuild_snapshot();
}

void BrowserSession::do_navigate(const std::string& url) {
  Tab& tab = active_tab();
  if (!tab.page.url.empty()) tab.history.push_back(tab.page.url);
  if (const PageTemplate* tmpl = route_for(url)) {
    tab.page = instantiate_template(*tmpl, rng_seed_);
    tab.page.url = url;
  } else {
    tab.page = instantiate_template({"blank", nlohmann::json::object()}, rng_seed_);
    tab.page.url = url;
  }
  rebuild_snapshot();
}

bool BrowserSession::navigate_back() {
  Tab& tab = active_tab();
  if (tab.history.empty()) return false;
  std::string url = tab.history.back();
  tab.history.pop_back();
  if (const PageTemplate* tmpl = route_for(url)) {
    tab.page = instantiate_template(*tmpl, rng_seed_);
    tab.page.url = url;
  } else {
    tab.page = instantiate_template({"blank", nlohmann::json::object()}, rng_seed_);
    tab.page.url = url;
  }
  rebuild_snapshot();
  return true;
}

const AccessibilitySnapshot& BrowserSession::current_snapshot() const {
  return active_tab().snapshot;
}

AccessibilitySnapshot BrowserSession::rebuild_snapshot() {
  Tab& tab = active_tab();
  auto [tree, preorder_ids] = tab.page.project();
  tab.snapshot = build_snapshot(tree, last_version_, tab.page.url, clock_);
  tab.ref_to_node = std::move(preorder_ids);
  last_version_ = tab.snapshot.version();
  return tab.snapshot;
}

int BrowserSession::node_id_for_ref(int ref) const {
  const Tab& tab = active_tab();
  if (ref < 1 || ref > static_cast<int>(tab.ref_to_node.size()))
    throw KernelError(ErrorCode::UnknownRef, "ref " + std::to_string(ref) + " has no page node");
  return tab.ref_to_node[ref - 1];
}

VirtualPage& BrowserSession::active_page() { return active_tab().page; }

const VirtualPage& BrowserSession::active_page() const { return active_tab().page; }

std::string BrowserSession::active_host() const {
  const std::string& url = active_tab().page.url;
  if (url.empty()) return {};
  try {
    return url_host(url);
  } catch (const KernelError&) {
    return {};
  }
}

const NativeDialog* BrowserSession::pending_native_dialog() const {
  return pending_dialog_ ? &*pending_dialog_ : nullptr;
}

void BrowserSession::handle_native_dialog(bool accept,
                                          const std::optional<std::string>& prompt_text) {
  if (!pending_dialog_)
    throw KernelError(ErrorCode::NoDialogPending, "no native dialog is pending");
  NativeDialog dialog = *pending_dialog_;
  pending_dialog_.reset();
  if (dialog.status_node_id != 0) {
    if (PageNode* status = active_page().find(dialog.status_node_id)) {
      if (accept && dialog.kind == "prompt" && prompt_text)
        status->value = *prompt_text;
      else
        status->value = dialog.kind + (accept ? " accepted" : " dismissed");
    }
  }
}

std::vector<ScheduledEffect> BrowserSession::advance_clock(int ticks) {
  std::vector<ScheduledEffect> fired;
  if (ticks < 1) return fired;
  clock_ += ticks;
  if (tabs_.empty()) return fired;
  auto& scheduled = active_page().scheduled;
  std::stable_sort(scheduled.begin(), scheduled.end(),
                   [](const ScheduledEffect& a, const ScheduledEffect& b) {
                     return std::tie(a.due_tick, a.seq) < std::tie(b.due_tick, b.seq);
                   });
  auto due_end = std::find_if(scheduled.begin(), scheduled.end(),
                              [this](const ScheduledEffect& e) { return e.due_tick > clock_; });
  fired.assign(scheduled.begin(), due_end);
  scheduled.erase(scheduled.begin(), due_end);
  for (const auto& effect : fired) apply_effect(effect);
  return fired;
}

void BrowserSession::apply_effect(const ScheduledEffect& effect) {
  PageNode* node = active_page().find(effect.target_id);
  if (!node) return;
  switch (effect.kind) {
    case ScheduledEffect::Kind::SetValue:
      node->value = effect.payload;
      break;
    case ScheduledEffect::Kind::SetName:
      node->name = effect.payload;
      break;
    case ScheduledEffect::Kind::Reveal:
      node->hidden = false;
      break;
    case ScheduledEffect::Kind::Hide:
      node->hidden = true;
      break;
  }
}

void BrowserSession::ensure_actionable(int id) const {
  if (pending_dialog_)
    throw KernelError(ErrorCode::ElementObscured,
                      "a native " + pending_dialog_->kind + " dialog is blocking the page");
  const VirtualPage& page = active_page();
  const PageNode* node = page.find(id);
  if (!node)
    throw KernelError(ErrorCode::UnknownRef, "node " + std::to_string(id) + " detached");
  if (page.is_occluded(id))
    throw KernelError(ErrorCode::ElementObscured,
                      "'" + node->name + "' is covered by an open dialog");
  if (node->states.disabled)
    throw KernelError(ErrorCode::ElementDisabled, "'" + node->name + "' is disabled");
}

MutationReport BrowserSession::activate(PageNode& node) {
  MutationReport report;
  report.changed_nodes.push_back(node.id);
  VirtualPage& page = active_page();

  if (node.role == NodeRole::Checkbox) {
    node.states.checked = !node.states.checked;
    return report;
  }
  if (node.role == NodeRole::Radio) {
    if (PageNode* parent = page.parent_of(node.id)) {
      for (auto& sibling : parent->children) {
        if (sibling.role == NodeRole::Radio) {
          sibling.states.checked = (sibling.id == node.id);
          report.changed_nodes.push_back(sibling.id);
        }
      }
    } else {
      node.states.checked = true;
    }
    return report;
  }

  switch (node.on_click.kind) {
    case ClickEffect::Kind::None:
      if (!is_interactive(node.role))
        throw KernelError(ErrorCode::NotInteractive,
                          "'" + node.name + "' has no click behavior");
      break;
    case ClickEffect::Kind::OpenDialog:
      if (PageNode* dialog = page.find(node.on_click.target_id)) {
        dialog->hidden = false;
        page.open_dialogs.push_back(dialog->id);
        report.changed_nodes.push_back(dialog->id);
      }
      break;
    case ClickEffect::Kind::CloseDialog:
      if (!page.open_dialogs.empty()) {
        int dialog_id = page.open_dialogs.back();
        page.open_dialogs.pop_back();
        if (PageNode* dialog = page.find(dialog_id)) dialog->hidden = true;
        report.changed_nodes.push_back(dialog_id);
      }
      break;
    case ClickEffect::Kind::OpenNativeDialog: {
      auto sep = node.on_click.payload.find('|');
      NativeDialog dialog;
      dialog.kind = node.on_click.payload.substr(0, sep);
      dialog.message = sep == std::string::npos ? "" : node.on_click.payload.substr(sep + 1);
      dialog.status_node_id = node.on_click.target_id;
      pending_dialog_ = std::move(dialog);
      break;
    }
    case ClickEffect::Kind::NavigateTo:
      report.navigation_request = node.on_click.payload;
      break;
    case ClickEffect::Kind::AddToCart:
      if (PageNode* cart = page.find(node.on_click.target_id)) {
        int count = cart->value ? std::stoi(*cart->value) : 0;
        cart->value = std::to_string(count + 1);
        report.changed_nodes.push_back(cart->id);
      }
      break;
    case ClickEffect::Kind::NextPage:
    case ClickEffect::Kind::PrevPage:
      if (page.products) {
        int pages = page.products->items_per_page == 0
                        ? 1
                        : static_cast<int>((page.products->products.size() +
                                            page.products->items_per_page - 1) /
                                           page.products->items_per_page);
        int delta = node.on_click.kind == ClickEffect::Kind::NextPage ? 1 : -1;
        int next = std::clamp(page.products->current_page + delta, 0, std::max(0, pages - 1));
        if (next != page.products->current_page) {
          page.products->current_page = next;
          rebuild_products_listing(page);
        }
      }
      break;
    case ClickEffect::Kind::RevealNode:
      if (PageNode* target = page.find(node.on_click.target_id)) {
        target->hidden = false;
        report.changed_nodes.push_back(target->id);
      }
      break;
    case ClickEffect::Kind::ChooseOption:
      if (PageNode* dropdown = page.find(node.on_click.target_id)) {
        dropdown->value = node.name;
        report.changed_nodes.push_back(dropdown->id);
      }
      if (PageNode* list = page.parent_of(node.id)) {
        list->hidden = true;
        report.changed_nodes.push_back(list->id);
      }
      break;
    case ClickEffect::Kind::SubmitForm:
      // payload: "<delay>|<confirmation text>"
      if (PageNode* status = page.find(node.on_click.target_id)) {
        status->value = "Submitting...";
        report.changed_nodes.push_back(status->id);
        auto sep = node.on_click.payload.find('|');
        if (sep != std::string::npos) {
          int delay = std::stoi(node.on_click.payload.substr(0, sep));
          page.schedule(clock_ + delay, ScheduledEffect::Kind::SetValue, status->id,
                        node.on_click.payload.substr(sep + 1));
        }
      }
      break;
  }
  return report;
}

MutationReport BrowserSession::click_node(int id, const ClickParams&) {
  ensure_actionable(id);
  PageNode* node = active_page().find(id);
  if (!is_interactive(node->role) && node->on_click.kind == ClickEffect::Kind::None)
    throw KernelError(ErrorCode::NotInteractive, "'" + node->name + "' is not clickable");
  return activate(*node);
}

MutationReport BrowserSession::type_node(int id, const std::string& text, bool clear) {
  ensure_actionable(id);
  PageNode* node = active_page().find(id);
  if (!node->value_slot)
    throw KernelError(ErrorCode::NotInteractive, "'" + node->name + "' does not accept text");
  if (clear || !node->value)
    node->value = text;
  else
    node->value = *node->value + text;
  clear_focus(active_page().root);
  node->states.focused = true;
  return {{id}, true, std::nullopt};
}

MutationReport BrowserSession::select_options_node(int id,
                                                   const std::vector<std::string>& values) {
  ensure_actionable(id);
  PageNode* node = active_page().find(id);
  if (node->role == NodeRole::Combobox && !node->options.empty()) {
    if (values.size() != 1)
      throw KernelError(ErrorCode::NotInteractive,
                        "'" + node->name + "' accepts exactly one value");
    if (std::find(node->options.begin(), node->options.end(), values[0]) ==
        node->options.end())
      throw KernelError(ErrorCode::NotInteractive,
                        "'" + node->name + "' has no option \"" + values[0] + "\"");
    node->value = values[0];
    return {{id}, true, std::nullopt};
  }
  if (node->role == NodeRole::Listbox) {
    MutationReport report{{id}, true, std::nullopt};
    std::string joined;
    for (auto& child : node->children) {
      if (child.role != NodeRole::Option) continue;
      bool pick = std::find(values.begin(), values.end(), child.name) != values.end();
      child.states.selected = pick;
      if (pick) {
        if (!joined.empty()) joined += ", ";
        joined += child.name;
        report.changed_nodes.push_back(child.id);
      }
    }
    for (const auto& value : values) {
      bool exists = std::any_of(node->children.begin(), node->children.end(),
                                [&value](const PageNode& child) {
                                  return child.role == NodeRole::Option && child.name == value;
                                });
      if (!exists)
        throw KernelError(ErrorCode::NotInteractive,
                          "'" + node->name + "' has no option \"" + value + "\"");
    }
    node->value = joined;
    return report;
  }
  throw KernelError(ErrorCode::NotInteractive,
                    "'" + node->name + "' is not a select element");
}

MutationReport BrowserSession::upload_node(int id, const std::vector<std::string>& paths) {
  ensure_actionable(id);
  PageNode* node = active_page().find(id);
  if (!node->file_input)
    throw KernelError(ErrorCode::NotInteractive, "'" + node->name + "' is not a file input");
  std::string joined;
  for (const auto& path : paths) {
    if (!joined.empty()) joined += ", ";
    joined += path;
  }
  node->value = joined;
  return {{id}, true, std::nullopt};
}

MutationReport BrowserSession::drag_nodes(int start_id, int end_id) {
  ensure_actionable(start_id);
  ensure_actionable(end_id);
  VirtualPage& page = active_page();
  PageNode* start_parent = page.parent_of(start_id);
  PageNode* end_parent = page.parent_of(end_id);
  if (!start_parent || start_parent != end_parent || !start_parent->reorderable)
    throw KernelError(ErrorCode::NotInteractive, "drag endpoints are not a reorderable pair");
  auto& children = start_parent->children;
  auto from = std::find_if(children.begin(), children.end(),
                           [start_id](const PageNode& n) { return n.id == start_id; });
  PageNode moved = std::move(*from);
  children.erase(from);
  auto to = std::find_if(children.begin(), children.end(),
                         [end_id](const PageNode& n) { return n.id == end_id; });
  children.insert(to, std::move(moved));
  return {{start_id, end_id, start_parent->id}, true, std::nullopt};
}

MutationReport BrowserSession::pan(std::optional<int> id, int delta_x, int delta_y) {
  VirtualPage& page = active_page();
  if (!id) {
    if (pending_dialog_)
      throw KernelError(ErrorCode::ElementObscured,
                        "a native " + pending_dialog_->kind + " dialog is blocking the page");
    page.scroll_x += delta_x;
    page.scroll_y += delta_y;
    return {{}, true, std::nullopt};
  }
  ensure_actionable(*id);
  PageNode* node = page.find(*id);
  if (!node->scrollable)
    throw KernelError(ErrorCode::NotInteractive, "'" + node->name + "' is not scrollable");
  int x = 0, y = 0;
  if (node->value && node->value->rfind("offset=", 0) == 0) {
    auto comma = node->value->find(',');
    x = std::stoi(node->value->substr(7, comma - 7));
    y = std::stoi(node->value->substr(comma + 1));
  }
  node->value = "offset=" + std::to_string(x + delta_x) + ',' + std::to_string(y + delta_y);
  return {{*id}, true, std::nullopt};
}

MutationReport BrowserSession::focus_node(int id) {
  ensure_actionable(id);
  PageNode* node = active_page().find(id);
  if (!node->states.focusable)
    throw KernelError(ErrorCode::NotInteractive, "'" + node->name + "' is not focusable");
  clear_focus(active_page().root);
  node->states.focused = true;
  return {{id}, true, std::nullopt};
}

MutationReport BrowserSession::hover_node(int id) {
  ensure_actionable(id);
  PageNode* node = active_page().find(id);
  MutationReport report{{id}, true, std::nullopt};
  if (node->hover_reveal_id != 0) {
    if (PageNode* target = active_page().find(node->hover_reveal_id)) {
      target->hidden = false;
      report.changed_nodes.push_back(target->id);
    }
  }
  return report;
}

MutationReport BrowserSession::press_key(const std::string& key) {
  if (!known_key(key))
    throw KernelError(ErrorCode::NotInteractive, "unsupported key '" + key + "'");
  if (pending_dialog_)
    throw KernelError(ErrorCode::ElementObscured,
                      "a native " + pending_dialog_->kind + " dialog is blocking the page");
  VirtualPage& page = active_page();
  MutationReport report{{}, true, std::nullopt};

  if (key == "Tab" || key == "Shift+Tab") {
    std::vector<PageNode*> focusables;
    collect_focusables(page.root, focusables);
    if (focusables.empty()) return report;
    PageNode* current = focused_in(page.root);
    std::ptrdiff_t index = -1;
    if (current) {
      auto it = std::find(focusables.begin(), focusables.end(), current);
      if (it != focusables.end()) index = it - focusables.begin();
    }
    std::ptrdiff_t n = static_cast<std::ptrdiff_t>(focusables.size());
    std::ptrdiff_t next = key == "Tab" ? (index + 1) % n : (index <= 0 ? n - 1 : index - 1);
    clear_focus(page.root);
    focusables[next]->states.focused = true;
    report.changed_nodes.push_back(focusables[next]->id);
    return report;
  }
  if (key == "Enter") {
    PageNode* current = focused_in(page.root);
    if (!current)
      throw KernelError(ErrorCode::NotInteractive, "no element is focused");
    ensure_actionable(current->id);
    return activate(*current);
  }
  if (key == "Escape") {
    if (!page.open_dialogs.empty()) {
      int dialog_id = page.open_dialogs.back();
      page.open_dialogs.pop_back();
      if (PageNode* dialog = page.find(dialog_id)) dialog->hidden = true;
      report.changed_nodes.push_back(dialog_id);
    }
    return report;
  }
  if (key == "ArrowUp" || key == "ArrowDown") {
    PageNode* current = focused_in(page.root);
    if (current && current->role == NodeRole::Combobox && !current->options.empty()) {
      auto it = current->value
                    ? std::find(current->options.begin(), current->options.end(),
                                *current->value)
                    : current->options.end();
      std::ptrdiff_t index = it == current->options.end() ? -1 : it - current->options.begin();
      std::ptrdiff_t n = static_cast<std::ptrdiff_t>(current->options.size());
      index = key == "ArrowDown" ? std::min(index + 1, n - 1) : std::max<std::ptrdiff_t>(index - 1, 0);
      current->value = current->options[index];
      report.changed_nodes.push_back(current->id);
      return report;
    }
    page.scroll_y += key == "ArrowDown" ? 40 : -40;
    return report;
  }
  if (key == "PageDown") { page.scroll_y += 600; return report; }
  if (key == "PageUp") { page.scroll_y -= 600; return report; }
  if (key == "Home") { page.scroll_y = 0; return report; }
  if (key == "End") { page.scroll_y = 10000; return report; }
  if (key == "ArrowLeft" || key == "ArrowRight") return report;

  // Modifier chords: clipboard pair implemented, the rest accepted as no-ops.
  if (key == "Ctrl+C" || key == "Cmd+C") {
    PageNode* current = focused_in(page.root);
    if (current && current->value) clipboard_ = *current->value;
    return report;
  }
  if (key == "Ctrl+V" || key == "Cmd+V") {
    PageNode* current = focused_in(page.root);
    if (current && current->value_slot) {
      current->value = current->value.value_or("") + clipboard_;
      report.changed_nodes.push_back(current->id);
    }
    return report;
  }
  return report;
}

bool BrowserSession::page_text_present(const std::string& text) const {
  if (tabs_.empty()) return false;
  return node_text_contains(active_page().root, text);
}

void BrowserSession::rebuild_products_listing(VirtualPage& page) {
  // Reuses the template module's listing builder.
  void rebuild_products_listing_impl(VirtualPage&);
  rebuild_products_listing_impl(page);
}

}  // namespace agentkernel
