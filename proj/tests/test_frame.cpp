#include <doctest.h>

#include "foldframe/frame.hpp"
#include "helpers.hpp"

using namespace foldframe;
using tf::fcol;
using tf::icol;
using tf::scol;

namespace {

Frame abc() {
  Frame f;
  f.add(icol("a", {1, 2, 3}));
  f.add(scol("b", {"x", "y", "z"}));
  f.add(fcol("c", {1.5, 2.5, 3.5}));
  return f;
}

}  // namespace

TEST_CASE("column construction normalizes NaN to missing") {
  Column c = Column::f64("x", std::vector<double>{1.0, std::nan(""), 3.0});
  CHECK(c.size() == 3);
  CHECK(c.is_valid(0));
  CHECK_FALSE(c.is_valid(1));
  CHECK(c.valid_count() == 2);
}

TEST_CASE("categorical codes are validated") {
  CHECK_THROWS_AS(Column::categorical("k", {0, 2}, {"a", "b"}), std::invalid_argument);
  Column ok = Column::categorical("k", {0, 1, 0}, {"a", "b"});
  CHECK(value_to_string(ok.value_at(2)) == "a");
}

TEST_CASE("frame invariants") {
  Frame f = abc();
  CHECK(f.nrow() == 3);
  CHECK(f.ncol() == 3);
  CHECK_THROWS_AS(f.add(icol("a", {1, 2, 3})), std::invalid_argument);   // duplicate
  CHECK_THROWS_AS(f.add(icol("d", {1, 2})), std::invalid_argument);      // length
  CHECK_THROWS_AS(f.add(icol("", {1, 2, 3})), std::invalid_argument);    // empty name
}

TEST_CASE("select permutes and preserves labels") {
  Frame f = abc();
  Frame s = select(f, std::vector<std::string>{"c", "a"});
  CHECK(s.names() == std::vector<std::string>{"c", "a"});

  Frame id = select(f, std::vector<std::string>{"a"});
  CHECK(id.ncol() == 1);

  CHECK_THROWS_WITH_AS(select(f, std::vector<std::string>{"z"}),
                       doctest::Contains("unknown column z"), std::invalid_argument);

  // composition: select(select(f, A), B) == select(f, B)
  Frame once = select(select(f, std::vector<std::string>{"c", "a", "b"}),
                      std::vector<std::string>{"b", "c"});
  CHECK(tf::frames_equal(once, select(f, std::vector<std::string>{"b", "c"})));
}

TEST_CASE("select by position") {
  Frame f = abc();
  Frame s = select(f, std::vector<std::int64_t>{2, 0});
  CHECK(s.names() == std::vector<std::string>{"c", "a"});
  CHECK_THROWS_AS(select(f, std::vector<std::int64_t>{5}), std::out_of_range);
}

TEST_CASE("filter_rows with mask keeps original order") {
  Frame f = abc();
  Frame kept = filter_rows(f, std::vector<std::uint8_t>{1, 0, 1});
  CHECK(kept.nrow() == 2);
  CHECK(value_to_string(kept.column("b").value_at(1)) == "z");

  Frame all = filter_rows(f, std::vector<std::uint8_t>{1, 1, 1});
  CHECK(tf::frames_equal(all, f, true));

  CHECK_THROWS_AS(filter_rows(f, std::vector<std::uint8_t>{1, 0}), std::invalid_argument);
}

TEST_CASE("filter_rows with indices uses requested order") {
  Frame f = abc();
  Frame r = filter_rows(f, std::vector<std::int64_t>{2, 0});
  CHECK(value_to_string(r.column("b").value_at(0)) == "z");
  CHECK_THROWS_AS(filter_rows(f, std::vector<std::int64_t>{4}), std::out_of_range);
}

TEST_CASE("filtering preserves labels, masks and kinds") {
  Column lab = fcol("v", {std::optional<double>(1.0), std::nullopt, 3.0});
  lab.set_label("speed");
  Frame f;
  f.add(lab);
  Frame kept = filter_rows(f, std::vector<std::uint8_t>{1, 1, 0});
  CHECK(kept.column("v").label() == std::optional<std::string>("speed"));
  CHECK_FALSE(kept.column("v").is_valid(1));

  Frame none = filter_rows(f, std::vector<std::uint8_t>{0, 0, 0});
  CHECK(none.nrow() == 0);
  CHECK(none.column("v").label() == std::optional<std::string>("speed"));
}

TEST_CASE("add_vars appends after existing columns") {
  Frame a;
  a.add(icol("a", {1, 2, 3}));
  Frame b;
  b.add(icol("b", {4, 5, 6}));
  Frame ab = add_vars(a, b);
  CHECK(ab.names() == std::vector<std::string>{"a", "b"});

  CHECK(tf::frames_equal(add_vars(a, Frame{}), a));

  Frame four;
  four.add(icol("d", {1, 2, 3, 4}));
  CHECK_THROWS_AS(add_vars(a, four), std::invalid_argument);
  CHECK_THROWS_AS(add_vars(a, a), std::invalid_argument);
}

TEST_CASE("namlab reports names, classes, labels and counts") {
  Column v = fcol("AGR", {std::optional<double>(1.0), 1.0, std::nullopt});
  v.set_label("Agriculture");
  Frame f;
  f.add(v);
  f.add(scol("note", {"a", "b", "c"}));

  Frame nl = namlab(f, true);
  CHECK(nl.names() == std::vector<std::string>{"Variable", "Class", "N", "Ndist", "Label"});
  CHECK(value_to_string(nl.column("Variable").value_at(0)) == "AGR");
  CHECK(value_to_string(nl.column("Class").value_at(0)) == "numeric");
  CHECK(nl.column("N").i64_data()[0] == 2);
  CHECK(nl.column("Ndist").i64_data()[0] == 1);
  CHECK(value_to_string(nl.column("Label").value_at(0)) == "Agriculture");
  CHECK_FALSE(nl.column("Label").is_valid(1));  // unlabeled -> missing
}

TEST_CASE("operations are pure") {
  Frame f = abc();
  Frame copy = f;
  (void)select(f, std::vector<std::string>{"a"});
  (void)filter_rows(f, std::vector<std::uint8_t>{1, 0, 0});
  (void)namlab(f, true);
  CHECK(tf::frames_equal(f, copy, true));
}
