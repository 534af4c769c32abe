#include <doctest.h>

#include <random>
#include <set>

#include "foldframe/join.hpp"
#include "helpers.hpp"

using namespace foldframe;
using tf::fcol;
using tf::icol;
using tf::scol;

namespace {

Frame teacher() {
  Frame f;
  f.add(icol("id", {1, 2, 3, 4}));
  f.add(scol("names", {"John", "Jane", "Bob", "Carl"}));
  f.add(fcol("age", {35.0, 32.0, 42.0, 67.0}));
  f.add(scol("subject", {"Math", "Econ", "Stats", "Trade"}));
  return f;
}

Frame course() {
  Frame f;
  f.add(fcol("id", {1.0, 2.0, 2.0, 3.0, 5.0}));
  f.add(fcol("semester", {1.0, 1.0, 2.0, 1.0, 2.0}));
  f.add(scol("course", {"Math I", "Microecon", "Macroecon", "Stats I", "History"}));
  return f;
}

JoinSpec teacher_course_spec() {
  JoinSpec s;
  s.on = {{"id", "id"}};
  s.x_name = "teacher";
  s.y_name = "course";
  s.verbose = 1;
  return s;
}

std::vector<std::string> col_strings(const Frame& f, const std::string& name) {
  std::vector<std::string> out;
  for (std::int64_t i = 0; i < f.nrow(); ++i)
    out.push_back(value_to_string(f.column(name).value_at(i)));
  return out;
}

}  // namespace

TEST_CASE("match_first basics and oracle") {
  Frame x;
  x.add(icol("k", {1, 2, 3}));
  Frame y;
  y.add(icol("k", {3, 1}));
  MatchResult m = match_first(x, y);
  CHECK(m.positions == std::vector<std::int64_t>{1, -1, 0});
  CHECK(m.n_nomatch == 1);
  CHECK(m.n_groups == 2);
  CHECK(m.n_distinct == 2);

  // teacher ids vs course ids: first matches at course rows 0, 1, 3
  MatchResult tm = match_first(select(teacher(), std::vector<std::string>{"id"}),
                               select(course(), std::vector<std::string>{"id"}));
  CHECK(tm.positions == std::vector<std::int64_t>{0, 1, 3, -1});

  // random linear-scan oracle
  std::mt19937 rng(4);
  for (int rep = 0; rep < 25; ++rep) {
    int nx = 1 + static_cast<int>(rng() % 40);
    int ny = 1 + static_cast<int>(rng() % 40);
    std::vector<std::optional<std::int64_t>> xv(nx), yv(ny);
    for (auto& v : xv) v = rng() % 6 == 0 ? std::optional<std::int64_t>{} : std::optional<std::int64_t>(rng() % 8);
    for (auto& v : yv) v = rng() % 6 == 0 ? std::optional<std::int64_t>{} : std::optional<std::int64_t>(rng() % 8);
    Frame fx, fy;
    fx.add(icol("k", xv));
    fy.add(icol("k", yv));
    MatchResult got = match_first(fx, fy);
    for (int i = 0; i < nx; ++i) {
      std::int64_t want = -1;
      for (int j = 0; j < ny; ++j) {
        bool eq = xv[i].has_value() == yv[j].has_value() &&
                  (!xv[i].has_value() || *xv[i] == *yv[j]);
        if (eq) {
          want = j;
          break;
        }
      }
      CHECK(got.positions[static_cast<size_t>(i)] == want);
    }
  }
}

TEST_CASE("overidentification check warns when extra keys do not refine") {
  Frame x;
  x.add(icol("a", {1, 2, 3}));
  x.add(icol("b", {1, 1, 2}));
  x.add(icol("c", {7, 7, 7}));  // constant third key
  Frame y;
  y.add(icol("a", {1, 2, 3}));
  y.add(icol("b", {1, 1, 2}));
  y.add(icol("c", {7, 7, 7}));
  MatchResult m = match_first(x, y);
  CHECK(m.overidentified);
  CHECK(m.keys_needed == 2);

  // a third key that genuinely refines does not warn
  Frame x2;
  x2.add(icol("a", {1, 1}));
  x2.add(icol("b", {1, 1}));
  x2.add(icol("c", {1, 2}));
  Frame y2;
  y2.add(icol("a", {1, 1}));
  y2.add(icol("b", {1, 1}));
  y2.add(icol("c", {2, 1}));
  MatchResult m2 = match_first(x2, y2);
  CHECK_FALSE(m2.overidentified);
}

TEST_CASE("left join keeps x rows and order") {
  std::vector<std::string> lines;
  JoinResult r = join(teacher(), course(), teacher_course_spec(),
                      [&](const std::string& l) { lines.push_back(l); });
  CHECK(r.frame.nrow() == 4);
  CHECK(r.frame.names() ==
        std::vector<std::string>{"id", "names", "age", "subject", "semester", "course"});
  CHECK(col_strings(r.frame, "course") ==
        std::vector<std::string>{"Math I", "Microecon", "Stats I", ""});
  CHECK_FALSE(r.frame.column("semester").is_valid(3));  // Carl's y side is missing
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "left join: teacher[id] 3/4 (75.0%) <1:m> course[id] 4/5 (80.0%)");

  CHECK(r.report.x_matched == 3);
  CHECK(r.report.x_rows == 4);
  CHECK(r.report.y_matched == 4);
  CHECK(r.report.y_rows == 5);
  CHECK(r.report.relationship == "1:m");
  CHECK(r.report.match.n_nomatch == 1);
  CHECK(r.report.match.n_groups == 5);
}

TEST_CASE("full join with multiple matches and a match column") {
  JoinSpec spec = teacher_course_spec();
  spec.how = JoinHow::full;
  spec.multiple = true;
  spec.match_column = "";
  JoinResult r = join(teacher(), course(), spec);
  CHECK(r.frame.nrow() == 6);
  CHECK(col_strings(r.frame, "names") ==
        std::vector<std::string>{"John", "Jane", "Jane", "Bob", "Carl", ""});
  CHECK(col_strings(r.frame, "course") ==
        std::vector<std::string>{"Math I", "Microecon", "Macroecon", "Stats I", "", "History"});
  CHECK(col_strings(r.frame, ".join") ==
        std::vector<std::string>{"matched", "matched", "matched", "matched", "teacher",
                                 "course"});
  // appended y row carries its key value
  CHECK(r.frame.column("id").number_at(5) == 5.0);
  CHECK(r.report.match.n_distinct == 4);
}

TEST_CASE("semi and anti joins partition x") {
  JoinSpec spec = teacher_course_spec();
  spec.how = JoinHow::semi;
  JoinResult semi = join(teacher(), course(), spec);
  CHECK(semi.frame.nrow() == 3);
  CHECK(semi.frame.ncol() == 4);  // x columns only
  CHECK(col_strings(semi.frame, "names") == std::vector<std::string>{"John", "Jane", "Bob"});

  spec.how = JoinHow::anti;
  JoinResult anti = join(teacher(), course(), spec);
  CHECK(anti.frame.nrow() == 1);
  CHECK(col_strings(anti.frame, "names") == std::vector<std::string>{"Carl"});

  // disjoint union covers x exactly, in order
  std::vector<std::string> all = col_strings(semi.frame, "names");
  for (const auto& v : col_strings(anti.frame, "names")) all.push_back(v);
  CHECK(all.size() == 4);
}

TEST_CASE("inner join with duplicate columns renames y with the table suffix") {
  Frame c = course();
  c.add(scol("names", {"John", "Jane", "Jane", "Bob", std::nullopt}));
  JoinSpec spec = teacher_course_spec();
  spec.how = JoinHow::inner;
  spec.multiple = true;
  std::vector<std::string> lines;
  JoinResult r = join(teacher(), c, spec, [&](const std::string& l) { lines.push_back(l); });
  CHECK(r.frame.nrow() == 4);
  REQUIRE(r.frame.has("names_course"));
  CHECK(col_strings(r.frame, "names_course") ==
        std::vector<std::string>{"John", "Jane", "Jane", "Bob"});
  bool seen = false;
  for (const auto& l : lines)
    seen = seen || l == "duplicate columns: names => renamed using suffix '_course' for y";
  CHECK(seen);

  // drop from y instead
  spec.how = JoinHow::left;
  spec.drop_dup_cols = DropDupCols::y;
  lines.clear();
  JoinResult d = join(teacher(), c, spec, [&](const std::string& l) { lines.push_back(l); });
  CHECK_FALSE(d.frame.has("names_course"));
  bool dropped = false;
  for (const auto& l : lines)
    dropped = dropped || l == "duplicate columns: names => dropped from y";
  CHECK(dropped);
}

TEST_CASE("validate rejects non-unique keys with the documented phrasing") {
  JoinSpec spec = teacher_course_spec();
  spec.validate = JoinValidate::one_one;
  CHECK_THROWS_WITH_AS(
      join(teacher(), course(), spec),
      "Join is not 1:1: teacher (x) is unique on the join columns; course (y) is not unique "
      "on the join columns",
      std::invalid_argument);

  // m:1 fails for the same reason; 1:m passes
  spec.validate = JoinValidate::m_one;
  CHECK_THROWS_AS(join(teacher(), course(), spec), std::invalid_argument);
  spec.validate = JoinValidate::one_m;
  CHECK_NOTHROW(join(teacher(), course(), spec));
}

TEST_CASE("require enforces minimum match rates") {
  JoinSpec spec = teacher_course_spec();
  spec.require_x = 0.8;
  CHECK_THROWS_WITH_AS(join(teacher(), course(), spec), doctest::Contains("Matched 75.0%"),
                       std::invalid_argument);
  spec.require_x = 0.75;  // exactly met
  CHECK_NOTHROW(join(teacher(), course(), spec));
}

TEST_CASE("right join swaps roles but keeps the x column block first") {
  JoinSpec spec = teacher_course_spec();
  spec.how = JoinHow::right;
  JoinResult r = join(teacher(), course(), spec);
  CHECK(r.frame.nrow() == 5);
  CHECK(r.frame.names() ==
        std::vector<std::string>{"id", "names", "age", "subject", "semester", "course"});
  // unmatched y row (History) keeps its key and has missing x values
  CHECK(r.frame.column("id").number_at(4) == 5.0);
  CHECK_FALSE(r.frame.column("names").is_valid(4));
}

TEST_CASE("sorted output and key order") {
  Frame x;
  x.add(icol("k", {3, 1, 2}));
  x.add(scol("vx", {"c", "a", "b"}));
  Frame y;
  y.add(icol("k", {2, 3}));
  y.add(scol("vy", {"B", "C"}));
  JoinSpec spec;
  spec.on = {{"k", "k"}};
  spec.sort = true;
  spec.verbose = 0;
  JoinResult r = join(x, y, spec);
  CHECK(r.frame.column("k").i64_data() == std::vector<std::int64_t>{1, 2, 3});
}

TEST_CASE("self-join with validate 1:1 reproduces x") {
  Frame x;
  x.add(icol("k", {1, 2, 3}));
  x.add(fcol("v", {0.1, 0.2, 0.3}));
  JoinSpec spec;
  spec.on = {{"k", "k"}};
  spec.validate = JoinValidate::one_one;
  spec.verbose = 0;
  JoinResult r = join(x, x, spec);
  CHECK(r.frame.nrow() == 3);
  CHECK(r.frame.column("k").equal_values(x.column("k")));
  CHECK(r.frame.column("v").equal_values(x.column("v")));
  CHECK(r.frame.has("v_y"));  // suffixed duplicate
  CHECK(r.report.relationship == "1:1");
}

TEST_CASE("missing keys match missing keys") {
  Frame x;
  x.add(icol("k", {std::optional<std::int64_t>(1), std::nullopt}));
  Frame y;
  y.add(icol("k", {std::optional<std::int64_t>{}, std::optional<std::int64_t>(1)}));
  y.add(scol("v", {"null-row", "one-row"}));
  JoinSpec spec;
  spec.on = {{"k", "k"}};
  spec.verbose = 0;
  JoinResult r = join(x, y, spec);
  CHECK(value_to_string(r.frame.column("v").value_at(0)) == "one-row");
  CHECK(value_to_string(r.frame.column("v").value_at(1)) == "null-row");
}

TEST_CASE("join errors") {
  Frame x;
  x.add(icol("a", {1}));
  Frame y;
  y.add(icol("b", {1}));
  JoinSpec spec;
  spec.verbose = 0;
  CHECK_THROWS_WITH_AS(join(x, y, spec), doctest::Contains("no shared columns"),
                       std::invalid_argument);
  spec.on = {{"a", "zz"}};
  CHECK_THROWS_AS(join(x, y, spec), std::invalid_argument);

  // kind-incompatible keys
  Frame ty;
  ty.add(scol("a", {"1"}));
  spec.on = {{"a", "a"}};
  CHECK_THROWS_WITH_AS(join(x, ty, spec), doctest::Contains("incompatible key kinds"),
                       std::invalid_argument);
}

TEST_CASE("join invariants on random tables") {
  std::mt19937 rng(8);
  for (int rep = 0; rep < 15; ++rep) {
    int nx = 1 + static_cast<int>(rng() % 30);
    int ny = 1 + static_cast<int>(rng() % 30);
    std::vector<std::int64_t> xv(nx), yv(ny);
    for (auto& v : xv) v = static_cast<std::int64_t>(rng() % 10);
    for (auto& v : yv) v = static_cast<std::int64_t>(rng() % 10);
    Frame x;
    x.add(icol("k", xv));
    Frame y;
    y.add(icol("k", yv));
    y.add(icol("vy", std::vector<std::int64_t>(yv.begin(), yv.end())));

    JoinSpec spec;
    spec.on = {{"k", "k"}};
    spec.verbose = 0;

    JoinResult left = join(x, y, spec);
    CHECK(left.frame.nrow() == nx);
    CHECK(left.frame.column("k").i64_data() == xv);

    spec.how = JoinHow::semi;
    JoinResult semi = join(x, y, spec);
    spec.how = JoinHow::anti;
    JoinResult anti = join(x, y, spec);
    CHECK(semi.frame.nrow() + anti.frame.nrow() == nx);

    spec.how = JoinHow::inner;
    spec.multiple = true;
    JoinResult inner = join(x, y, spec);
    spec.how = JoinHow::full;
    JoinResult full = join(x, y, spec);
    std::int64_t unmatched_y = 0;
    {
      // y rows whose key never occurs in x
      std::set<std::int64_t> xkeys(xv.begin(), xv.end());
      for (auto v : yv) unmatched_y += xkeys.count(v) ? 0 : 1;
    }
    CHECK(full.frame.nrow() == inner.frame.nrow() + anti.frame.nrow() + unmatched_y);

    // report percentages recompute from counts
    CHECK(left.report.x_pct ==
          100.0 * static_cast<double>(left.report.x_matched) / static_cast<double>(nx));
  }
}
