#include "gramtrans/conllu.hpp"

#include <charconv>
#include <sstream>

#include "gramtrans/io.hpp"

namespace gramtrans {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t parse_index(std::string_view s, const std::string& where) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw MalformedParse(where + ": bad index '" + std::string(s) + "'");
  }
  return v;
}

// "# key = value" -> (key, value); empty key for other comments.
std::pair<std::string, std::string> comment_field(std::string_view line) {
  line.remove_prefix(1);
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) return {};
  return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

}  // namespace

const std::string* DependencyToken::feat(const std::string& name) const {
  auto it = feats.find(name);
  return it == feats.end() ? nullptr : &it->second;
}

std::size_t ParseFragment::root() const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].head == 0) return i;
  }
  throw MalformedParse("fragment '" + unit_id + "' has no root");
}

std::vector<const DependencyToken*> ParseFragment::children(std::size_t head) const {
  std::vector<const DependencyToken*> out;
  for (const auto& t : tokens) {
    if (t.head == head) out.push_back(&t);
  }
  return out;
}

void validate_fragment(const ParseFragment& frag) {
  const std::string where = "fragment '" + frag.unit_id + "'";
  if (frag.tokens.empty()) throw MalformedParse(where + " is empty");
  std::size_t roots = 0;
  for (std::size_t i = 0; i < frag.tokens.size(); ++i) {
    const auto& t = frag.tokens[i];
    if (t.index != i + 1) throw MalformedParse(where + ": token indices are not contiguous from 1");
    if (t.head > frag.tokens.size()) throw MalformedParse(where + ": token " + std::to_string(t.index) + " head out of range");
    if (t.head == t.index) throw MalformedParse(where + ": token " + std::to_string(t.index) + " is its own head");
    if (t.head == 0) ++roots;
  }
  if (roots != 1) throw MalformedParse(where + " has " + std::to_string(roots) + " roots");
  for (const auto& t : frag.tokens) {
    std::size_t cur = t.index, steps = 0;
    while (cur != 0) {
      if (++steps > frag.tokens.size()) throw MalformedParse(where + ": head graph has a cycle");
      cur = frag.tokens[cur - 1].head;
    }
  }
}

std::map<std::string, std::string> parse_feats(std::string_view column) {
  std::map<std::string, std::string> out;
  if (column == "_" || column.empty()) return out;
  for (auto item : split(column, '|')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) throw MalformedParse("bad FEATS item '" + std::string(item) + "'");
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
  }
  return out;
}

std::map<std::string, ParseFragment> read_conllu(std::string_view text, Locale default_locale) {
  std::map<std::string, ParseFragment> out;
  std::optional<ParseFragment> cur;
  auto flush = [&] {
    if (!cur) return;
    validate_fragment(*cur);
    auto id = cur->unit_id;
    if (!out.emplace(id, std::move(*cur)).second) throw MalformedParse("duplicate fragment '" + id + "'");
    cur.reset();
  };

  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    const std::string where = "line " + std::to_string(line_no);
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto [key, value] = comment_field(line);
      if (key == "unit_id") {
        flush();
        cur.emplace();
        cur->unit_id = value;
        cur->locale = default_locale;
      } else if (key == "locale" && cur) {
        cur->locale = parse_locale(value);
      }
      continue;
    }
    if (!cur) throw MalformedParse(where + ": token line before any '# unit_id' comment");
    const auto cols = split(raw, '\t');
    if (cols.size() < 8) throw MalformedParse(where + ": expected 10 tab-separated columns");
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    DependencyToken t;
    t.index = parse_index(cols[0], where);
    t.form = std::string(cols[1]);
    t.lemma = std::string(cols[2]);
    t.upos = std::string(cols[3]);
    try {
      t.feats = parse_feats(cols[5]);
    } catch (const MalformedParse& e) {
      throw MalformedParse(where + ": " + e.what());
    }
    t.head = parse_index(cols[6], where);
    t.deprel = std::string(cols[7]);
    cur->tokens.push_back(std::move(t));
  }
  flush();
  return out;
}

std::map<std::string, ParseFragment> load_conllu(const std::filesystem::path& path, Locale default_locale) {
  try {
    return read_conllu(read_text_file(path), default_locale);
  } catch (const MalformedParse& e) {
    throw MalformedParse(path.string() + ": " + e.what());
  }
}

std::string write_conllu(const std::vector<ParseFragment>& fragments) {
  std::ostringstream os;
  for (const auto& f : fragments) {
    os << "# unit_id = " << f.unit_id << "\n# locale = " << to_string(f.locale) << "\n";
    for (const auto& t : f.tokens) {
      std::string feats;
      for (const auto& [k, v] : t.feats) feats += (feats.empty() ? "" : "|") + k + "=" + v;
      os << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << "\t_\t" << (feats.empty() ? "_" : feats)
         << '\t' << t.head << '\t' << t.deprel << "\t_\t_\n";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace gramtrans
