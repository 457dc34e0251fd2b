#include <cmath>
#include <random>

#include "doctest.h"
#include "gramtrans/analytics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gramtrans;
using testsupport::fixture;
using C = ChangeCategory;
using oracles::as;
using oracles::golden_corpus;
using oracles::kTableRows;
using oracles::noun;
using oracles::with;

namespace {

GrammarUnit random_unit(std::mt19937& rng) {
  auto coin = [&] { return rng() % 2 == 0; };
  auto pick = [&](const auto& arr) { return arr[rng() % arr.size()]; };
  GrammarUnit u;
  u.id = "u" + std::to_string(rng() % 1000);
  u.locale = pick(kAllLocales);
  u.pos = pick(kAllPartsOfSpeech);
  u.features.lemma = pick(std::array<const char*, 4>{"Punkt", "punkt", "Double-Double-Ergebnis", "gewinnen"});
  if (coin()) u.features.grammatical_case = pick(kAllCases);
  if (coin()) u.features.number = coin() ? Number::singular : Number::plural;
  if (coin()) u.features.tense = Tense::past;
  if (coin()) u.features.preposition = "an";
  if (coin()) u.features.adjectives = {"gut"};
  if (coin()) u.features.numerals = Numeral{static_cast<std::int64_t>(rng() % 30), NumeralType::cardinal};
  if (coin()) u.features.determiner = Determiner::definite;
  if (coin()) u.features.head_index = 0;
  return u;
}

// Auto units u0..u(n-1); edited: drop `deleted`, append `inserted` units
// sharing nothing with the originals.
std::pair<std::vector<GrammarUnit>, std::vector<GrammarUnit>> corpus(std::size_t n, const std::set<std::size_t>& deleted,
                                                                     std::size_t inserted, std::mt19937& rng) {
  std::vector<GrammarUnit> a, e;
  for (std::size_t k = 0; k < n; ++k) {
    auto u = noun("lemma" + std::to_string(k));
    u.id = "u" + std::to_string(k);
    u.features.grammatical_case = Case::nominative;
    a.push_back(u);
    if (!deleted.count(k)) e.push_back(u);
  }
  for (std::size_t k = 0; k < inserted; ++k) {
    auto u = as(noun("new" + std::to_string(k)), PartOfSpeech::verb);
    u.id = "new" + std::to_string(k);
    u.features.tense = Tense::past;
    e.insert(e.begin() + static_cast<std::ptrdiff_t>(rng() % (e.size() + 1)), u);
  }
  return {a, e};
}

ChangeRecord record(std::string participant, Locale locale, CategorySet cats, std::string unit = "u") {
  ChangeRecord r;
  r.session_id = "s-" + participant;
  r.participant_id = std::move(participant);
  r.locale = locale;
  r.statement_id = "S1";
  r.unit_id = std::move(unit);
  r.categories = std::move(cats);
  r.before = noun("a");
  r.after = noun("b");
  return r;
}

}  // namespace

TEST_CASE("golden change corpus") {
  const auto corpus = golden_corpus();
  CHECK(corpus.size() >= 25);
  CategorySet covered;
  for (const auto& g : corpus) {
    CAPTURE(g.name);
    const CategorySet got = classify_change(g.before, g.after, g.before_text, g.after_text);
    CHECK(got == g.expected);
    covered.insert(got.begin(), got.end());
  }
  for (auto c : all_categories()) CHECK_MESSAGE(covered.count(c), to_string(c));
  CHECK_THROWS_AS(classify_change(std::nullopt, std::nullopt), PreconditionViolation);
}

TEST_CASE("property: identical units classify to nothing") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 5000; ++iter) {
    const GrammarUnit u = random_unit(rng);
    const std::string t = iter % 2 ? "Der Punkt" : "der punkt";
    CHECK(classify_change(u, u).empty());
    CHECK(classify_change(u, u, t, t).empty());
    CHECK_FALSE(make_change_record("s", "p", u.locale, "S", u.id, u, u, t, t, "").has_value());
  }
}

TEST_CASE("category labels") {
  CHECK(all_categories().size() == kCategoryCount);
  for (std::size_t i = 0; i < kTableCategoryCount; ++i) CHECK(to_string(all_categories()[i]) == kTableRows[i]);
  CHECK(to_string(C::add_unit) == "add unit");
  CHECK(to_string(C::remove_unit) == "remove unit");
  for (auto c : all_categories()) CHECK(parse_category(to_string(c)) == c);
  CHECK_THROWS_AS(parse_category("change gender"), FormatError);
}

TEST_CASE("match_units examples") {
  std::vector<GrammarUnit> five;
  for (int k = 0; k < 5; ++k) {
    auto u = noun("l" + std::to_string(k));
    u.id = "u" + std::to_string(k);
    five.push_back(u);
  }
  const auto same = match_units(five, five);
  CHECK(same.pairs.size() == 5);
  CHECK(same.match_rate == 1.0);

  auto four = five;
  four.erase(four.begin() + 2);
  const auto deletion = match_units(five, four);
  CHECK(deletion.unmatched_auto == std::vector<std::size_t>{2});
  CHECK(deletion.match_rate == doctest::Approx(2.0 * 4 / 9).epsilon(1e-15));

  CHECK(match_units({}, {}).match_rate == 1.0);
  CHECK(match_units(five, {}).match_rate == 0.0);

  // Pass 2: same lemma and pos under a new id.
  auto renamed = five;
  renamed[1].id = "x";
  const auto m2 = match_units(five, renamed);
  CHECK(m2.pairs.size() == 5);
  CHECK(std::count_if(m2.pairs.begin(), m2.pairs.end(), [](auto& p) { return p.pass == 2; }) == 1);

  // Pass 3: lemma edited, other features agree; flagged low-confidence.
  auto a = noun("Rückprall");
  a.id = "a";
  a.features.grammatical_case = Case::dative;
  a.features.number = Number::plural;
  auto b = a;
  b.id = "b";
  b.features.lemma = "Rückpraller";
  const auto m3 = match_units({a}, {b});
  REQUIRE(m3.pairs.size() == 1);
  CHECK(m3.pairs[0].pass == 3);
  CHECK(m3.pairs[0].low_confidence());
  CHECK(feature_overlap(a, b) == doctest::Approx(0.75));

  // Below threshold stays unmatched.
  auto c = as(noun("gewinnen"), PartOfSpeech::verb);
  c.id = "c";
  CHECK(match_units({a}, {c}).pairs.empty());
}

TEST_CASE("match rate oracle over injected edits") {
  std::mt19937 rng(5);
  auto oracle = [](double n, double d, double i) { return 2 * (n - d) / (2 * n - d + i); };
  auto run = [&](std::size_t n, std::size_t d, std::size_t i) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::set<std::size_t> deleted(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(d));
    const auto [a, e] = corpus(n, deleted, i, rng);
    const auto m = match_units(a, e);
    CHECK(m.pairs.size() == n - d);
    CHECK(m.unmatched_auto.size() == d);
    CHECK(m.unmatched_edited.size() == i);
    CHECK(m.match_rate == oracle(n, d, i));
    // Symmetric in rate.
    CHECK(match_units(e, a).match_rate == m.match_rate);
    return m.match_rate;
  };
  // 2 * 98 / (200 - 2 + 2)
  CHECK(run(100, 2, 2) == 0.98);
  for (int iter = 0; iter < 300; ++iter) {
    const std::size_t n = 1 + rng() % 60;
    run(n, rng() % (n + 1), rng() % 10);
  }
}

TEST_CASE("property: every unit lands in exactly one bucket") {
  std::mt19937 rng(9);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<GrammarUnit> a, e;
    for (int k = rng() % 8; k > 0; --k) a.push_back(random_unit(rng));
    for (int k = rng() % 8; k > 0; --k) e.push_back(random_unit(rng));
    const auto m = match_units(a, e);
    std::vector<int> seen_a(a.size()), seen_e(e.size());
    for (const auto& p : m.pairs) {
      ++seen_a[p.auto_index];
      ++seen_e[p.edited_index];
    }
    for (auto i : m.unmatched_auto) ++seen_a[i];
    for (auto j : m.unmatched_edited) ++seen_e[j];
    for (int s : seen_a) CHECK(s == 1);
    for (int s : seen_e) CHECK(s == 1);
    CHECK(match_units(e, a).match_rate == doctest::Approx(m.match_rate));
    CHECK(match_units(a, e).pairs == m.pairs);
  }
}

TEST_CASE("aggregate_changes") {
  std::vector<ChangeRecord> records;
  for (int k = 0; k < 8; ++k) records.push_back(record("p1", Locale::de_DE, {C::change_case}));
  const auto table = aggregate_changes(records, {{Locale::de_DE, 100}, {Locale::zh_CN, 50}});
  CHECK(table.count(Locale::de_DE, C::change_case) == 8);
  CHECK(table.percent(Locale::de_DE, C::change_case) == 8.0);
  CHECK(table.display_percent(Locale::de_DE, C::change_case) == 8);
  CHECK(table.count(Locale::zh_CN, C::change_case) == 0);

  const auto empty = aggregate_changes({}, {{Locale::de_DE, 10}});
  for (auto c : all_categories()) CHECK(empty.count(Locale::de_DE, c) == 0);

  const auto both = aggregate_changes({record("p", Locale::de_DE, {C::add_determiner, C::change_case})},
                                      {{Locale::de_DE, 10}});
  CHECK(both.count(Locale::de_DE, C::add_determiner) == 1);
  CHECK(both.count(Locale::de_DE, C::change_case) == 1);

  CHECK_THROWS_AS(aggregate_changes(records, {{Locale::fr_FR, 10}}), UnknownLocale);
  CHECK_THROWS_AS(aggregate_changes({}, {{Locale::fr_FR, 0}}), PreconditionViolation);
}

TEST_CASE("display rounding is half-up, blank only for zero") {
  auto one_of = [](std::int64_t count, std::int64_t total) {
    std::vector<ChangeRecord> rs(static_cast<std::size_t>(count), record("p", Locale::de_DE, {C::mark_head}));
    return aggregate_changes(rs, {{Locale::de_DE, total}});
  };
  CHECK(one_of(1, 200).display_percent(Locale::de_DE, C::mark_head) == 1);
  CHECK(one_of(1, 201).display_percent(Locale::de_DE, C::mark_head) == 0);
  CHECK(one_of(3, 200).display_percent(Locale::de_DE, C::mark_head) == 2);
  CHECK(one_of(5, 200).display_percent(Locale::de_DE, C::mark_head) == 3);

  const std::string csv = change_table_csv(one_of(1, 1000));
  CHECK(csv.find("\nmark head,0\n") != std::string::npos);
  CHECK(csv.find("\nchange case,\n") != std::string::npos);
}

TEST_CASE("csv shapes") {
  const auto table = aggregate_changes({record("p", Locale::de_DE, {C::change_case, C::add_unit})},
                                       {{Locale::de_DE, 4}, {Locale::es_ES, 10}});
  const std::string csv = change_table_csv(table);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "category,de-DE,es-ES");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line.substr(0, line.find(',')));
  CHECK(rows == kTableRows);
  CHECK(csv.find("\nchange case,25,\n") != std::string::npos);

  const std::string exact = change_table_exact_csv(table);
  CHECK(exact.find("change case,de-DE,1,4,25.000000\n") != std::string::npos);
  CHECK(exact.find("add unit,de-DE,1,4,25.000000\n") != std::string::npos);
  CHECK(std::count(exact.begin(), exact.end(), '\n') == 1 + 2 * static_cast<long>(kCategoryCount));

  CHECK(participant_csv({{"01", 3}, {"02", 1}}) == "participant,changes\n01,3\n02,1\n");
}

TEST_CASE("property: aggregation conserves incidences") {
  std::mt19937 rng(21);
  for (int iter = 0; iter < 200; ++iter) {
    std::map<Locale, std::int64_t> totals;
    for (auto l : kAllLocales) {
      if (rng() % 2) totals[l] = 1 + rng() % 500;
    }
    if (totals.empty()) totals[Locale::de_DE] = 7;
    std::vector<Locale> locales;
    for (auto& [l, _] : totals) locales.push_back(l);
    std::vector<ChangeRecord> rs;
    std::int64_t incidences = 0;
    for (int k = rng() % 60; k > 0; --k) {
      CategorySet cats;
      for (int m = 1 + rng() % 3; m > 0; --m) cats.insert(all_categories()[rng() % kCategoryCount]);
      incidences += static_cast<std::int64_t>(cats.size());
      rs.push_back(record("p", locales[rng() % locales.size()], cats));
    }
    const auto table = aggregate_changes(rs, totals);
    double recomputed = 0;
    for (auto l : table.locales) {
      for (auto c : all_categories()) recomputed += table.percent(l, c) / 100.0 * static_cast<double>(totals[l]);
    }
    CHECK(std::llround(recomputed) == incidences);
    CHECK(std::abs(recomputed - static_cast<double>(incidences)) < 1e-6);
  }
}

TEST_CASE("per-participant counts") {
  CHECK(per_participant_counts({}).empty());
  const std::vector<ChangeRecord> rs = {record("p1", Locale::de_DE, {C::change_case}),
                                        record("p1", Locale::de_DE, {C::mark_head}),
                                        record("p2", Locale::de_DE, {C::mark_head}),
                                        record("p1", Locale::de_DE, {C::lowercase})};
  CHECK(per_participant_counts(rs) == std::map<std::string, std::int64_t>{{"p1", 3}, {"p2", 1}});
}

TEST_CASE("participant 09 replay") {
  // Green unit edits, enumerated by hand: determiners on the three team
  // names and the loser, the rebounds/assists/steals phrases, and the
  // lower-cased adjective of the block.
  const std::vector<std::string> green_units = {"u_home", "u_visit", "u_bp_team", "u_reb",
                                                "u_ast",  "u_stl",   "u_blk",     "u_loser"};
  const auto records = load_edit_log(fixture("participant09/edits.jsonl"));
  CHECK(per_participant_counts(records) == std::map<std::string, std::int64_t>{{"09", 8}});
  REQUIRE(records.size() == green_units.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    CHECK(records[k].unit_id == green_units[k]);
    CHECK(records[k].categories ==
          classify_change(records[k].before, records[k].after, records[k].before_text, records[k].after_text));
  }
  CHECK(records.back().categories.count(C::change_case));

  const UnitsFile units = load_units_file(fixture("participant09/units.json"));
  const auto changed = changed_fraction(records, units.sessions);
  CHECK(changed.changed_units == 8);
  CHECK(changed.unit_total == 14);
}

TEST_CASE("edit log round trip and errors") {
  testsupport::TempDir dir;
  const auto log = dir / "edits.jsonl";
  auto r = make_change_record("s1", "p1", Locale::de_DE, "S6", "u_loser",
                              with(noun("Denver Nuggets"), [](auto& f) { f.grammatical_case = Case::genitive; }),
                              with(noun("Denver Nuggets"), [](auto& f) { f.grammatical_case = Case::nominative; }),
                              std::nullopt, std::nullopt, "2024-01-01T00:00:00Z");
  REQUIRE(r);
  CHECK(r->categories == CategorySet{C::change_case});
  append_record(log, *r);
  auto added = make_change_record("s1", "p1", Locale::de_DE, "S6", "new1", std::nullopt, noun("Sieg"), std::nullopt,
                                  std::nullopt, "t");
  append_record(log, *added);
  const auto back = load_edit_log(log);
  REQUIRE(back.size() == 2);
  CHECK(back[0].before == r->before);
  CHECK(back[0].after == r->after);
  CHECK(back[0].categories == r->categories);
  CHECK(back[1].categories == CategorySet{C::add_unit});
  CHECK_FALSE(back[1].before);

  auto expect_line = [&](const std::string& content, const std::string& needle) {
    write_text_file(dir / "bad.jsonl", content);
    try {
      load_edit_log(dir / "bad.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  const std::string good = json(*r).dump() + "\n";
  expect_line(good + "{not json\n", ":2:");
  json no_before = *r;
  no_before["before"] = nullptr;
  expect_line(good + good + no_before.dump() + "\n", ":3:");
  json same = *r;
  same["after"] = same["before"];
  expect_line(same.dump() + "\n", ":1:");
  write_text_file(dir / "same.jsonl", same.dump() + "\n");
  CHECK_THROWS_AS(load_edit_log(dir / "same.jsonl"), ConflictingInput);
  json unknown = *r;
  unknown["categories"] = json::array({"change gender"});
  expect_line(unknown.dump() + "\n", "change gender");

  // Text-only records for edits between units.
  ChangeRecord text;
  text.unit_id = "S4#literal";
  text.before_text = "106 - 101";
  text.after_text = "106:101";
  CHECK_NOTHROW(check_record(text));
  text.after_text = text.before_text;
  CHECK_THROWS_AS(check_record(text), ConflictingInput);
}

TEST_CASE("session filters and changed fraction") {
  const std::vector<SessionSummary> sessions = {{"s-a", "a", Locale::de_DE, 50, true},
                                                {"s-b", "b", Locale::de_DE, 50, true},
                                                {"s-c", "c", Locale::pl_PL, 40, false}};
  std::vector<ChangeRecord> rs = {record("a", Locale::de_DE, {C::change_case}, "u1"),
                                  record("a", Locale::de_DE, {C::mark_head}, "u1"),
                                  record("b", Locale::de_DE, {C::mark_head}, "u2"),
                                  record("c", Locale::pl_PL, {C::mark_head}, "u3")};
  CHECK(completed_only(rs, sessions).size() == 3);
  const auto f = changed_fraction(rs, sessions);
  CHECK(f.changed_units == 2);
  CHECK(f.unit_total == 100);
  CHECK(format_percent(f.fraction()) == "2.00%");
  CHECK(format_percent(0.19) == "19.00%");
  CHECK(format_percent(0.0) == "0.00%");

  const UnitsFile uf = units_file_from_json(json::parse(R"({"sessions": [
      {"session_id": "x", "locale": "de-DE", "unit_total": 10},
      {"session_id": "y", "locale": "de-DE", "unit_total": 5},
      {"session_id": "z", "locale": "pl-PL", "unit_total": 5, "completed": false}]})"));
  CHECK(uf.unit_totals == std::map<Locale, std::int64_t>{{Locale::de_DE, 15}});
  CHECK_THROWS_AS(units_file_from_json(json::parse(R"({"sessions": [{"locale": "de-DE"}]})")), FormatError);
}
