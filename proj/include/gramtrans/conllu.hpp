#pragma once

// CoNLL-U fragments: one dependency tree per transferred unit snippet.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gramtrans/grammar.hpp"

namespace gramtrans {

struct DependencyToken {
  std::size_t index = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  // UD notation, e.g. {"Case", "Dat"}.
  std::map<std::string, std::string> feats;
  std::size_t head = 0;
  std::string deprel;

  const std::string* feat(const std::string& name) const;
  bool operator==(const DependencyToken&) const = default;
};

struct ParseFragment {
  std::string unit_id;
  Locale locale = Locale::en_US;
  std::vector<DependencyToken> tokens;

  // Index into `tokens` of the root. Requires a valid tree.
  std::size_t root() const;
  // Children of 1-based token `head`, in surface order.
  std::vector<const DependencyToken*> children(std::size_t head) const;
};

class MalformedParse : public Error {
 public:
  using Error::Error;
};

// Contiguous 1-based indices, heads in range, no self-heads, exactly one
// root, acyclic. Throws MalformedParse.
void validate_fragment(const ParseFragment& frag);

std::map<std::string, std::string> parse_feats(std::string_view column);

// Reads fragments delimited by "# unit_id = ..." comments (an optional
// "# locale = ..." applies to the fragment it follows). Multiword-token
// lines ("1-2") and empty nodes ("1.1") are skipped. Every fragment is
// validated. Keys are the unit ids; a repeated id is an error.
std::map<std::string, ParseFragment> read_conllu(std::string_view text, Locale default_locale);
std::map<std::string, ParseFragment> load_conllu(const std::filesystem::path& path, Locale default_locale);

std::string write_conllu(const std::vector<ParseFragment>& fragments);

}  // namespace gramtrans
