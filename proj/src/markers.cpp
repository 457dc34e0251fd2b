#include "gramtrans/markers.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace gramtrans {

namespace {

constexpr std::string_view kOpen = "⟦";
constexpr std::string_view kClose = "⟧";

enum class Kind { unit, slot };

struct Marker {
  Kind kind;
  bool closing;
  std::string id;
  std::size_t begin;
  std::size_t end;
};

// Markers recognized in `s`: ⟦gu:ID⟧ ⟦/gu⟧ ⟦ds:N⟧ ⟦/ds⟧. Anything else
// between the brackets is plain text.
std::vector<Marker> scan(std::string_view s) {
  std::vector<Marker> out;
  std::size_t pos = 0;
  while ((pos = s.find(kOpen, pos)) != std::string_view::npos) {
    const auto body_start = pos + kOpen.size();
    const auto close = s.find(kClose, body_start);
    if (close == std::string_view::npos) break;
    const std::string_view body = s.substr(body_start, close - body_start);
    std::optional<Marker> m;
    if (body == "/gu" || body == "/ds") {
      m = Marker{body == "/gu" ? Kind::unit : Kind::slot, true, {}, pos, close + kClose.size()};
    } else if (body.size() > 3 && (body.substr(0, 3) == "gu:" || body.substr(0, 3) == "ds:") &&
               body.find(kOpen) == std::string_view::npos) {
      m = Marker{body[0] == 'g' ? Kind::unit : Kind::slot, false, std::string(body.substr(3)), pos,
                 close + kClose.size()};
    }
    if (m) {
      out.push_back(std::move(*m));
      pos = close + kClose.size();
    } else {
      pos = body_start;
    }
  }
  return out;
}

std::string open_marker(Kind kind, std::string_view id) {
  return std::string(kOpen) + (kind == Kind::unit ? "gu:" : "ds:") + std::string(id) + std::string(kClose);
}

std::string close_marker(Kind kind) {
  return std::string(kOpen) + (kind == Kind::unit ? "/gu" : "/ds") + std::string(kClose);
}

std::optional<std::size_t> slot_index(const std::string& id) {
  if (id.empty() || id.size() > 6 || !std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  return std::stoul(id);
}

}  // namespace

TaggedText mark_units(std::string_view rendered, const std::map<std::string, Span>& spans) {
  return mark_units(rendered, spans, {});
}

TaggedText mark_units(std::string_view rendered, const std::map<std::string, Span>& spans,
                      const std::vector<Span>& slot_spans) {
  struct Item {
    Span span;
    Kind kind;
    std::string id;
  };
  std::vector<Item> items;
  for (const auto& [id, span] : spans) items.push_back({span, Kind::unit, id});
  for (std::size_t i = 0; i < slot_spans.size(); ++i) items.push_back({slot_spans[i], Kind::slot, std::to_string(i)});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::tie(a.span.start, a.span.end) < std::tie(b.span.start, b.span.end);
  });
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& s = items[i].span;
    if (s.start > s.end || s.end > rendered.size()) {
      throw OverlappingSpans("span of '" + items[i].id + "' is out of bounds");
    }
    if (i > 0 && items[i - 1].span.end > s.start) {
      throw OverlappingSpans("spans of '" + items[i - 1].id + "' and '" + items[i].id + "' overlap");
    }
  }
  TaggedText out;
  std::size_t pos = 0;
  for (const auto& item : items) {
    out.text.append(rendered.substr(pos, item.span.start - pos));
    out.text += open_marker(item.kind, item.id);
    out.text.append(rendered.substr(item.span.start, item.span.size()));
    out.text += close_marker(item.kind);
    pos = item.span.end;
  }
  out.text.append(rendered.substr(pos));
  return out;
}

std::string strip_markers(std::string_view tagged) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& m : scan(tagged)) {
    out.append(tagged.substr(pos, m.begin - pos));
    pos = m.end;
  }
  out.append(tagged.substr(pos));
  return out;
}

bool markers_balanced(std::string_view tagged) {
  std::optional<Kind> open;
  std::set<std::string> seen;
  for (const auto& m : scan(tagged)) {
    if (m.closing) {
      if (open != m.kind) return false;
      open.reset();
    } else {
      if (open) return false;
      if (m.kind == Kind::unit && !seen.insert(m.id).second) return false;
      open = m.kind;
    }
  }
  return !open;
}

Alignment align_translation(const TaggedText& translated, const std::vector<std::string>& expected_units,
                            std::size_t expected_slots) {
  const std::string_view s = translated.text;
  const auto markers = scan(s);

  // Candidate pairs: an opening marker immediately followed (no marker in
  // between) by a closing marker of the same kind, enclosing non-empty text.
  struct Pair {
    std::size_t open;
    std::size_t close;
  };
  std::vector<Pair> pairs;
  std::map<std::string, int> unit_count;
  std::map<std::size_t, int> slot_count;
  for (std::size_t i = 0; i + 1 < markers.size(); ++i) {
    const auto& a = markers[i];
    const auto& b = markers[i + 1];
    if (a.closing || !b.closing || a.kind != b.kind || b.begin == a.end) continue;
    pairs.push_back({i, i + 1});
    if (a.kind == Kind::unit) {
      ++unit_count[a.id];
    } else if (auto idx = slot_index(a.id)) {
      ++slot_count[*idx];
    }
    ++i;
  }

  const std::set<std::string> expected(expected_units.begin(), expected_units.end());
  auto accepted = [&](const Marker& m) {
    if (m.kind == Kind::unit) return expected.count(m.id) && unit_count[m.id] == 1;
    auto idx = slot_index(m.id);
    return idx && *idx < expected_slots && slot_count[*idx] == 1;
  };

  Alignment out;
  std::string literal;
  std::size_t pos = 0;
  std::size_t next_pair = 0;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    const auto& m = markers[i];
    literal.append(s.substr(pos, m.begin - pos));
    pos = m.end;
    if (next_pair < pairs.size() && pairs[next_pair].open == i) {
      const auto& close = markers[pairs[next_pair].close];
      ++next_pair;
      if (accepted(m)) {
        if (!literal.empty()) out.pieces.emplace_back(std::move(literal));
        literal.clear();
        std::string snippet(s.substr(m.end, close.begin - m.end));
        if (m.kind == Kind::unit) {
          out.snippets[m.id] = snippet;
          out.pieces.emplace_back(AlignedUnit{m.id, std::move(snippet)});
        } else {
          out.pieces.emplace_back(AlignedSlot{*slot_index(m.id), std::move(snippet)});
        }
        pos = close.end;
        ++i;
      }
    }
  }
  literal.append(s.substr(pos));
  if (!literal.empty()) out.pieces.emplace_back(std::move(literal));

  for (const auto& id : expected_units) {
    if (!out.snippets.count(id)) out.lost.push_back(id);
  }
  std::set<std::size_t> found_slots;
  for (const auto& p : out.pieces) {
    if (auto* slot = std::get_if<AlignedSlot>(&p)) found_slots.insert(slot->index);
  }
  for (std::size_t i = 0; i < expected_slots; ++i) {
    if (!found_slots.count(i)) out.lost_slots.push_back(i);
  }
  return out;
}

}  // namespace gramtrans
