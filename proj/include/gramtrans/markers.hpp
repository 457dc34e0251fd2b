#pragma once

// Inline span markers carried through translation. Units are wrapped as
// ⟦gu:ID⟧…⟦/gu⟧; data slots as ⟦ds:N⟧…⟦/ds⟧ (N = slot position in the
// statement) so bound values can be re-bound in the target template.

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gramtrans/grammar.hpp"

namespace gramtrans {

struct TaggedText {
  std::string text;
  bool operator==(const TaggedText&) const = default;
};

class OverlappingSpans : public Error {
 public:
  using Error::Error;
};

TaggedText mark_units(std::string_view rendered, const std::map<std::string, Span>& spans);
// Slot spans are indexed by slot position; unit and slot spans must not
// overlap each other either.
TaggedText mark_units(std::string_view rendered, const std::map<std::string, Span>& spans,
                      const std::vector<Span>& slot_spans);

// Removes every marker, well-formed or not.
std::string strip_markers(std::string_view tagged);

// Each marker pair is closed before the next opens and unit ids are unique.
bool markers_balanced(std::string_view tagged);

struct AlignedUnit {
  std::string unit_id;
  std::string snippet;
  bool operator==(const AlignedUnit&) const = default;
};
struct AlignedSlot {
  std::size_t index = 0;
  std::string snippet;
  bool operator==(const AlignedSlot&) const = default;
};
// Literal text is a plain string.
using AlignedPiece = std::variant<std::string, AlignedUnit, AlignedSlot>;

struct Alignment {
  // The translated text split at surviving markers, in order; text of lost
  // units stays in the literal pieces.
  std::vector<AlignedPiece> pieces;
  std::map<std::string, std::string> snippets;
  std::vector<std::string> lost;
  std::vector<std::size_t> lost_slots;
};

// Never throws. An expected unit whose marker pair is missing, half-open,
// nested, empty or duplicated is lost. Unexpected ids are treated as
// literal text (markers dropped).
Alignment align_translation(const TaggedText& translated, const std::vector<std::string>& expected_units,
                            std::size_t expected_slots = 0);

}  // namespace gramtrans
