#include <doctest.h>

#include <map>
#include <numeric>
#include <random>

#include "foldframe/timeindex.hpp"
#include "helpers.hpp"

using namespace foldframe;
using tf::fcol;
using tf::icol;
using tf::near;
using tf::scol;

TEST_CASE("time_id basics") {
  TimeId t = time_id(icol("t", {2001, 2002, 2004}));
  CHECK(t.gcd == 1.0);
  CHECK(t.ids.i64_data() == std::vector<std::int64_t>{1, 2, 4});
  CHECK(t.n_periods == 3);
  CHECK(t.span == 4);

  TimeId tens = time_id(icol("t", {10, 20, 40}));
  CHECK(tens.gcd == 10.0);
  CHECK(tens.ids.i64_data() == std::vector<std::int64_t>{1, 2, 4});

  TimeId one = time_id(icol("t", {5}));
  CHECK(one.ids.i64_data() == std::vector<std::int64_t>{1});
  CHECK(one.gcd == 1.0);

  Column allna = fcol("t", {std::optional<double>{}, std::optional<double>{}});
  CHECK_THROWS_AS(time_id(allna), std::invalid_argument);
}

TEST_CASE("time_id gcd oracle on random integer grids") {
  std::mt19937 rng(2);
  for (int rep = 0; rep < 30; ++rep) {
    std::int64_t step = 1 + static_cast<std::int64_t>(rng() % 9);
    std::int64_t base = static_cast<std::int64_t>(rng() % 50);
    std::vector<std::int64_t> raw;
    for (int i = 0; i < 12; ++i) raw.push_back(base + step * static_cast<std::int64_t>(rng() % 20));
    TimeId t = time_id(icol("t", raw));
    // gcd of deltas via the integer gcd
    std::vector<std::int64_t> d(raw);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    std::int64_t g = 0;
    for (size_t i = 1; i < d.size(); ++i) g = std::gcd(g, d[i] - d[i - 1]);
    if (d.size() > 1) CHECK(t.gcd == static_cast<double>(g));
    for (size_t i = 0; i < raw.size(); ++i) {
      CHECK(t.ids.i64_data()[i] ==
            (raw[i] - *std::min_element(raw.begin(), raw.end())) / (d.size() > 1 ? g : 1) + 1);
    }
  }
}

TEST_CASE("time_id is invariant to positive affine rescaling") {
  std::vector<std::int64_t> raw = {3, 9, 6, 21};
  TimeId base = time_id(icol("t", raw));
  std::vector<double> scaled;
  for (auto v : raw) scaled.push_back(2.5 + 4.0 * static_cast<double>(v));
  TimeId aff = time_id(fcol("t", scaled));
  CHECK(base.ids.i64_data() == aff.ids.i64_data());
}

TEST_CASE("time_id fractional and irregular spacing") {
  TimeId q = time_id(fcol("t", {0.25, 0.5, 1.0}));
  CHECK(near(q.gcd, 0.25, 1e-9));
  CHECK(q.ids.i64_data() == std::vector<std::int64_t>{1, 2, 4});

  // non-commensurable deltas degrade to the smallest delta
  TimeId odd = time_id(fcol("t", {0.0, 1.0, 1.0 + 0.3141592653589793}));
  CHECK(odd.approx);
}

TEST_CASE("index summaries render observed and total periods") {
  Frame exports;
  std::vector<std::string> c, s;
  std::vector<std::int64_t> y;
  for (int ci = 0; ci < 4; ++ci) {
    for (int yi = 2001; yi <= 2010; ++yi) {
      c.push_back("c" + std::to_string(ci + 1));
      s.push_back("s1");
      y.push_back(yi);
    }
  }
  exports.add(scol("c", c));
  exports.add(scol("s", s));
  exports.add(icol("y", y));
  PanelIndex full = make_index(exports, {"c", "s"}, "y");
  CHECK(full.summary() == "c.s [4] | y [10]");
  CHECK_FALSE(is_irregular(full));

  // single series with gaps at 2003 and 2006
  Frame series;
  series.add(icol("y", {2001, 2002, 2004, 2005, 2007, 2008, 2009, 2010}));
  PanelIndex sparse = make_index(series, {}, "y");
  CHECK(sparse.summary() == "y [8 (10)]");
  CHECK(is_irregular(sparse));

  Frame dup;
  dup.add(scol("c", {"a", "a"}));
  dup.add(icol("y", {2001, 2001}));
  CHECK_THROWS_WITH_AS(make_index(dup, {"c"}, "y"), doctest::Contains("duplicate"),
                       std::invalid_argument);
}

TEST_CASE("shift respects gaps") {
  Column x = fcol("x", {1.0, 2.0, 3.0});
  TimeId t = time_id(icol("t", {1, 2, 4}));
  Column lag1 = shift(x, 1, nullptr, &t);
  CHECK_FALSE(lag1.is_valid(0));
  CHECK(lag1.number_at(1) == 1.0);
  CHECK_FALSE(lag1.is_valid(2));  // gap at 3

  CHECK(shift(x, 0, nullptr, &t).equal_values(x));

  Column lead = shift(x, -1, nullptr, &t);
  CHECK(lead.number_at(0) == 2.0);
  CHECK_FALSE(lead.is_valid(1));
}

TEST_CASE("shift within panels matches a per-group map oracle") {
  std::mt19937 rng(13);
  std::vector<std::string> gid;
  std::vector<std::int64_t> tv;
  std::vector<std::optional<double>> x;
  std::map<std::pair<std::string, std::int64_t>, double> cell;
  for (int g = 0; g < 5; ++g) {
    std::int64_t tcur = 2000;
    for (int i = 0; i < 12; ++i) {
      tcur += 1 + static_cast<std::int64_t>(rng() % 2);  // occasional gaps
      std::string name = "g" + std::to_string(g);
      gid.push_back(name);
      tv.push_back(tcur);
      double val = static_cast<double>(rng() % 100);
      x.push_back(val);
      cell[{name, tcur}] = val;
    }
  }
  Column xc = fcol("x", x);
  Grouping g = group_by(scol("g", gid), true);
  TimeId t = time_id(icol("t", tv));
  for (std::int64_t n : {-2, 1, 3}) {
    Column got = shift(xc, n, &g, &t);
    for (size_t i = 0; i < x.size(); ++i) {
      auto it = cell.find({gid[i], tv[i] - n});
      if (it == cell.end()) {
        CHECK_FALSE(got.is_valid(static_cast<std::int64_t>(i)));
      } else {
        CHECK(got.number_at(static_cast<std::int64_t>(i)) == it->second);
      }
    }
  }
}

TEST_CASE("shift without time requires contiguous groups") {
  Column x = fcol("x", {1.0, 2.0, 3.0, 4.0});
  Grouping ok = group_by(scol("g", {"a", "a", "b", "b"}), true);
  Column lag = shift(x, 1, &ok, nullptr);
  CHECK_FALSE(lag.is_valid(0));
  CHECK(lag.number_at(1) == 1.0);
  CHECK_FALSE(lag.is_valid(2));

  Grouping bad = group_by(scol("g", {"a", "b", "a", "b"}), true);
  CHECK_THROWS_WITH_AS(shift(x, 1, &bad, nullptr), doctest::Contains("contiguous"),
                       std::invalid_argument);
}

TEST_CASE("lag composition and diff identity") {
  std::vector<double> x(20);
  std::iota(x.begin(), x.end(), 1.0);
  Column xc = fcol("x", x);
  // gap-free: lag(lag(x, a), b) == lag(x, a+b)
  Column l1 = shift(shift(xc, 2), 1);
  Column l2 = shift(xc, 3);
  CHECK(l1.equal_values(l2));

  TimeId t = time_id(icol("t", std::vector<std::int64_t>(x.begin(), x.end())));
  Column d = diff(xc, 4, nullptr, &t);
  Column lag4 = shift(xc, 4, nullptr, &t);
  for (std::int64_t i = 0; i < xc.size(); ++i) {
    if (d.is_valid(i)) {
      CHECK(d.number_at(i) == xc.number_at(i) - lag4.number_at(i));
    }
  }
}

TEST_CASE("diff golden values and log composition") {
  Column v = fcol("v", {0.552, 0.675, 0.214, 0.311});
  TimeId t = time_id(icol("y", {2002, 2003, 2004, 2005}));
  Column d = diff(v, 1, nullptr, &t);
  CHECK(near(d.number_at(1), 0.122, 1e-2));
  CHECK(near(d.number_at(2), -0.461, 1e-3));

  // constant series differences to zero
  Column c = fcol("x", {5.0, 5.0, 5.0});
  Column dc = diff(c, 1);
  CHECK(dc.number_at(1) == 0.0);
  CHECK(dc.number_at(2) == 0.0);

  // log difference equals diff of logs
  Column pos = fcol("x", {1.0, 2.0, 4.0, 8.0});
  Column dl = diff(pos, 1, nullptr, nullptr, true);
  for (std::int64_t i = 1; i < 4; ++i) {
    CHECK(near(dl.number_at(i), std::log(pos.number_at(i)) - std::log(pos.number_at(i - 1)),
               1e-15));
  }
  // non-positive values go missing
  Column mixed = fcol("x", {-1.0, 2.0, 3.0});
  Column dm = diff(mixed, 1, nullptr, nullptr, true);
  CHECK_FALSE(dm.is_valid(1));
  CHECK(dm.is_valid(2));
}

TEST_CASE("growth golden values from an irregular series") {
  Column v = fcol("v", {0.3893, 1.0726, 0.8450, 0.6559});
  TimeId t = time_id(icol("y", {2001, 2002, 2004, 2005}));

  Column g1 = growth(v, 1, nullptr, &t);
  CHECK_FALSE(g1.is_valid(0));
  CHECK(near(g1.number_at(1), 175.52, 1e-2));
  CHECK_FALSE(g1.is_valid(2));
  CHECK(near(g1.number_at(3), -22.37, 1e-2));

  Column g2 = growth(v, 2, nullptr, &t);
  CHECK(near(g2.number_at(2), -21.22, 1e-2));

  Column fg = growth(v, -1, nullptr, &t);
  CHECK(near(fg.number_at(0), -63.71, 1e-2));

  // growth with power=1 equals 100 * (x / lag - 1)
  Column lag1 = shift(v, 1, nullptr, &t);
  for (std::int64_t i = 0; i < v.size(); ++i) {
    if (g1.is_valid(i)) {
      CHECK(near(g1.number_at(i), 100.0 * (v.number_at(i) / lag1.number_at(i) - 1.0), 1e-12));
    }
  }

  // n = 0 passes the data through
  CHECK(growth(v, 0, nullptr, &t).equal_values(v));
}

TEST_CASE("multi-step output naming") {
  Column v = fcol("v", {0.3893, 1.0726, 0.8450, 0.6559});
  TimeId t = time_id(icol("y", {2001, 2002, 2004, 2005}));
  Frame g = growth(v, {-1, 0, 1, 2, 3}, nullptr, &t);
  CHECK(g.names() == std::vector<std::string>{"FG1", "v", "G1", "L2G1", "L3G1"});
  Frame d = diff(v, {-1, 1, 2}, nullptr, &t);
  CHECK(d.names() == std::vector<std::string>{"FD1", "D1", "L2D1"});
  Frame l = shift(v, {-2, -1, 0, 1, 2}, nullptr, &t);
  CHECK(l.names() == std::vector<std::string>{"F2", "F1", "v", "L1", "L2"});
}

TEST_CASE("cumsum within groups") {
  Column x = fcol("x", {1.0, 2.0, 3.0});
  Column got = cumsum_by(x);
  CHECK(got.f64_data() == std::vector<double>{1.0, 3.0, 6.0});

  Grouping g = group_by(scol("g", {"a", "b", "a"}), true);
  Column gr = cumsum_by(x, &g);
  CHECK(gr.f64_data() == std::vector<double>{1.0, 2.0, 4.0});

  // missing stays missing in place and contributes nothing
  Column xm = fcol("x", {std::optional<double>(1.0), std::nullopt, 2.0});
  Column cm = cumsum_by(xm);
  CHECK(cm.number_at(0) == 1.0);
  CHECK_FALSE(cm.is_valid(1));
  CHECK(cm.number_at(2) == 3.0);

  // custom ordering: accumulate in reverse
  std::vector<std::int64_t> rev = {2, 1, 0};
  Column cr = cumsum_by(x, nullptr, &rev);
  CHECK(cr.f64_data() == std::vector<double>{6.0, 5.0, 3.0});

  std::vector<std::int64_t> bad = {0, 0, 1};
  CHECK_THROWS_AS(cumsum_by(x, nullptr, &bad), std::invalid_argument);

  // integer columns accumulate exactly
  Column xi = icol("x", {1, 2, 3});
  CHECK(cumsum_by(xi).i64_data() == std::vector<std::int64_t>{1, 3, 6});
}

TEST_CASE("panel matrix lays out groups by periods") {
  Frame f;
  f.add(scol("c", {"c1", "c1", "c1", "c2", "c2"}));
  f.add(icol("y", {2002, 2003, 2005, 2002, 2004}));
  f.add(fcol("v", {0.552, 0.675, 0.214, 1.0, 2.0}));
  IndexedFrame ix = index_by(f, {"c"}, "y");
  Frame m = panel_matrix(ix.series("v"));
  CHECK(m.nrow() == 2);
  CHECK(m.names() == std::vector<std::string>{"c", "2002", "2003", "2004", "2005"});
  CHECK(m.column("2002").number_at(0) == 0.552);
  CHECK_FALSE(m.column("2004").is_valid(0));
  CHECK(m.column("2004").number_at(1) == 2.0);

  // flattening the non-missing cells recovers the (group, time, value) triples
  std::map<std::pair<std::string, std::string>, double> got;
  for (std::int64_t r = 0; r < m.nrow(); ++r) {
    for (std::int64_t c2 = 1; c2 < m.ncol(); ++c2) {
      if (m.column(c2).is_valid(r)) {
        got[{value_to_string(m.column(std::int64_t{0}).value_at(r)), m.column(c2).name()}] =
            m.column(c2).number_at(r);
      }
    }
  }
  CHECK(got.size() == 5);
  CHECK(got[{"c1", "2003"}] == 0.675);
  CHECK(got[{"c2", "2002"}] == 1.0);
}

TEST_CASE("psmat golden row over a 2001-2010 index") {
  std::vector<double> vals = {0.552, 0.675, 0.214, 0.311, 1.17, 0.619, 0.1127, 0.917, 0.223};
  Frame f;
  std::vector<std::string> c(10, "c1");
  std::vector<std::int64_t> y;
  std::vector<std::optional<double>> v;
  // anchor 2001 on a second group so the span covers 2001..2010
  y.push_back(2001);
  v.push_back(std::nullopt);
  c[0] = "c0";
  for (int i = 0; i < 9; ++i) {
    y.push_back(2002 + i);
    v.push_back(vals[static_cast<size_t>(i)]);
  }
  f.add(scol("c", c));
  f.add(icol("y", y));
  f.add(fcol("v", v));
  IndexedFrame ix = index_by(f, {"c"}, "y");
  Frame m = panel_matrix(ix.series("v"));
  REQUIRE(m.ncol() == 11);
  std::int64_t row = value_to_string(m.column("c").value_at(0)) == "c1" ? 0 : 1;
  CHECK_FALSE(m.column("2001").is_valid(row));
  for (int i = 0; i < 9; ++i) {
    CHECK(m.column(std::to_string(2002 + i)).number_at(row) == vals[static_cast<size_t>(i)]);
  }

  // diff golden values on the same series
  Column vv = fcol("v", vals);
  TimeId t = time_id(icol("y", std::vector<std::int64_t>(y.begin() + 1, y.end())));
  Column d = diff(vv, 1, nullptr, &t);
  CHECK(near(d.number_at(1), 0.122, 1e-3 + 1e-12));
  CHECK(near(d.number_at(2), -0.461, 1e-3));
}

TEST_CASE("is_irregular checks per-group ranges") {
  Frame f;
  f.add(scol("c", {"a", "a", "b", "b"}));
  f.add(icol("y", {1, 2, 5, 6}));
  f.add(fcol("v", {1.0, 2.0, 3.0, 4.0}));
  // both groups are internally consecutive even though ids differ
  CHECK_FALSE(is_irregular(index_by(f, {"c"}, "y")));

  Frame g;
  g.add(scol("c", {"a", "a", "a"}));
  g.add(icol("y", {1, 2, 4}));
  g.add(fcol("v", {1.0, 2.0, 3.0}));
  CHECK(is_irregular(index_by(g, {"c"}, "y")));
}
