#include <doctest.h>

#include <random>

#include "csv.hpp"
#include "foldframe/stats.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace foldframe;
using tf::fcol;
using tf::icol;
using tf::near;
using tf::scol;

namespace {

StatOptions quiet() {
  StatOptions o;
  o.use_group_names = false;
  return o;
}

StatOptions keep_na() {
  StatOptions o;
  o.na_rm = false;
  o.use_group_names = false;
  return o;
}

struct RandomData {
  Column x;
  Column w;
  Grouping g;
  std::vector<oracle::Seq> group_x;
  std::vector<oracle::Seq> group_w;
};

RandomData random_grouped(std::mt19937& rng, int max_rows = 300, int max_groups = 10,
                          bool integer_weights = false) {
  int n = 1 + static_cast<int>(rng() % max_rows);
  int k = 1 + static_cast<int>(rng() % max_groups);
  std::vector<std::optional<double>> x(n), w(n);
  std::vector<std::int64_t> gid(n);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  std::uniform_int_distribution<int> wi(1, 5);
  for (int i = 0; i < n; ++i) {
    gid[i] = static_cast<std::int64_t>(rng() % k);
    x[i] = rng() % 8 == 0 ? std::optional<double>{} : std::optional<double>(dist(rng));
    if (integer_weights)
      w[i] = static_cast<double>(wi(rng));
    else
      w[i] = rng() % 11 == 0 ? std::optional<double>{} : std::optional<double>(0.25 * wi(rng));
  }
  RandomData d{fcol("x", x), fcol("w", w), group_by(icol("g", gid), true), {}, {}};
  d.group_x.resize(static_cast<size_t>(d.g.n_groups()));
  d.group_w.resize(static_cast<size_t>(d.g.n_groups()));
  for (int i = 0; i < n; ++i) {
    auto gi = static_cast<size_t>(d.g.group_id()[static_cast<size_t>(i)]);
    d.group_x[gi].push_back(x[i]);
    d.group_w[gi].push_back(w[i]);
  }
  return d;
}

void check_column(const Column& got, const std::vector<oracle::OptD>& expect, double tol) {
  REQUIRE(got.size() == static_cast<std::int64_t>(expect.size()));
  for (std::int64_t i = 0; i < got.size(); ++i) {
    INFO("group ", i);
    if (!expect[static_cast<size_t>(i)]) {
      CHECK_FALSE(got.is_valid(i));
    } else {
      REQUIRE(got.is_valid(i));
      if (tol == 0.0) CHECK(got.number_at(i) == *expect[static_cast<size_t>(i)]);
      else CHECK(near(got.number_at(i), *expect[static_cast<size_t>(i)], tol));
    }
  }
}

}  // namespace

TEST_CASE("reduce basics") {
  Column x = fcol("x", {1.0, 2.0, 5.0});
  Grouping g = group_by(scol("g", {"a", "a", "b"}), true);
  Column s = reduce(Stat::sum, x, &g, nullptr, quiet());
  check_column(s, {3.0, 5.0}, 0.0);

  // weighted ungrouped sum
  Column xw = fcol("x", {1.0, 2.0});
  Column w = fcol("w", {3.0, 4.0});
  Column sw = reduce(Stat::sum, xw, nullptr, &w, quiet());
  check_column(sw, {11.0}, 0.0);

  Column v = reduce(Stat::var, fcol("x", {1.0, 2.0, 3.0}), nullptr, nullptr, quiet());
  check_column(v, {1.0}, 0.0);

  Column n = reduce(Stat::nobs, fcol("x", {std::optional<double>(1.0), std::nullopt, 3.0}),
                    nullptr, nullptr, quiet());
  CHECK(n.i64_data()[0] == 2);
  Column nd = reduce(Stat::ndistinct,
                     fcol("x", {std::optional<double>(1.0), 1.0, 2.0, std::nullopt}), nullptr,
                     nullptr, quiet());
  CHECK(nd.i64_data()[0] == 2);
}

TEST_CASE("iris group means match the published values") {
  Frame iris = cli::read_table(std::string(FOLDFRAME_TEST_DATA) + "/iris.csv", false);
  Grouping g = group_by(iris.column("Species"), true);
  Column m = reduce(Stat::mean, iris.column("Sepal.Length"), &g, nullptr, quiet());
  REQUIRE(m.size() == 3);
  CHECK(near(m.f64_data()[0], 5.006, 1e-3));
  CHECK(near(m.f64_data()[1], 5.936, 1e-3));
  CHECK(near(m.f64_data()[2], 6.588, 1e-3));
}

TEST_CASE("reduce result kinds") {
  Column xi = icol("x", {1, 2, 5});
  CHECK(reduce(Stat::sum, xi, nullptr, nullptr, quiet()).kind() == ValueKind::int64);
  CHECK(reduce(Stat::mean, xi, nullptr, nullptr, quiet()).kind() == ValueKind::float64);
  CHECK(reduce(Stat::min, xi, nullptr, nullptr, quiet()).kind() == ValueKind::int64);
  CHECK(reduce(Stat::nobs, xi, nullptr, nullptr, quiet()).kind() == ValueKind::int64);

  Column xs = scol("x", {"p", "q", "p"});
  CHECK(reduce(Stat::first, xs, nullptr, nullptr, quiet()).kind() == ValueKind::text);
  CHECK(value_to_string(reduce(Stat::mode, xs, nullptr, nullptr, quiet()).value_at(0)) == "p");
  CHECK_THROWS_AS(reduce(Stat::min, xs, nullptr, nullptr, quiet()), std::invalid_argument);
}

TEST_CASE("weight policy per statistic") {
  Column x = fcol("x", {1.0, 2.0});
  Column w = fcol("w", {1.0, 2.0});
  CHECK_THROWS_WITH_AS(reduce(Stat::nobs, x, nullptr, &w, quiet()),
                       doctest::Contains("does not support weights"), std::invalid_argument);
  CHECK_THROWS_AS(reduce(Stat::ndistinct, x, nullptr, &w, quiet()), std::invalid_argument);
  // extrema and selection ignore weights silently
  CHECK(reduce(Stat::max, x, nullptr, &w, quiet()).number_at(0) == 2.0);
  CHECK(reduce(Stat::first, x, nullptr, &w, quiet()).number_at(0) == 1.0);

  Column neg = fcol("w", {1.0, -1.0});
  CHECK_THROWS_WITH_AS(reduce(Stat::sum, x, nullptr, &neg, quiet()),
                       doctest::Contains("negative weight"), std::invalid_argument);
  Column short_w = fcol("w", std::vector<double>{1.0});
  CHECK_THROWS_AS(reduce(Stat::sum, x, nullptr, &short_w, quiet()), std::invalid_argument);
}

TEST_CASE("na_rm=false poisons groups with missing values") {
  Column x = fcol("x", {std::optional<double>(1.0), std::nullopt, 3.0, 4.0});
  Grouping g = group_by(scol("g", {"a", "a", "b", "b"}), true);
  Column s = reduce(Stat::sum, x, &g, nullptr, keep_na());
  CHECK_FALSE(s.is_valid(0));
  CHECK(s.number_at(1) == 7.0);

  // nobs counts all rows; first/last report the literal row values
  Column n = reduce(Stat::nobs, x, &g, nullptr, keep_na());
  CHECK(n.i64_data()[0] == 2);
  Column f = reduce(Stat::first, x, &g, nullptr, keep_na());
  CHECK(f.number_at(0) == 1.0);
  Column l = reduce(Stat::last, x, &g, nullptr, keep_na());
  CHECK_FALSE(l.is_valid(0));
}

TEST_CASE("grouped statistics match the naive split oracle") {
  std::mt19937 rng(42);
  for (int rep = 0; rep < 60; ++rep) {
    RandomData d = random_grouped(rng);
    bool na_rm = rep % 3 != 2;
    StatOptions opts = na_rm ? quiet() : keep_na();
    bool weighted = rep % 2 == 0;
    const Column* w = weighted ? &d.w : nullptr;
    const oracle::Seq* wseq = weighted ? d.group_w.data() : nullptr;

    auto expect = [&](auto fn) {
      std::vector<oracle::OptD> out;
      for (std::int64_t k = 0; k < d.g.n_groups(); ++k) out.push_back(fn(static_cast<size_t>(k)));
      return out;
    };

    check_column(reduce(Stat::sum, d.x, &d.g, w, opts),
                 expect([&](size_t k) {
                   return oracle::sum(d.group_x[k], wseq ? &wseq[k] : nullptr, na_rm);
                 }),
                 1e-12);
    check_column(reduce(Stat::mean, d.x, &d.g, w, opts),
                 expect([&](size_t k) {
                   return oracle::mean(d.group_x[k], wseq ? &wseq[k] : nullptr, na_rm);
                 }),
                 1e-12);
    check_column(reduce(Stat::var, d.x, &d.g, w, opts),
                 expect([&](size_t k) {
                   return oracle::var(d.group_x[k], wseq ? &wseq[k] : nullptr, na_rm);
                 }),
                 1e-10);
    check_column(reduce(Stat::min, d.x, &d.g, nullptr, opts),
                 expect([&](size_t k) { return oracle::min(d.group_x[k], na_rm); }), 0.0);
    check_column(reduce(Stat::max, d.x, &d.g, nullptr, opts),
                 expect([&](size_t k) { return oracle::max(d.group_x[k], na_rm); }), 0.0);
    check_column(reduce(Stat::first, d.x, &d.g, nullptr, opts),
                 expect([&](size_t k) { return oracle::first(d.group_x[k], na_rm); }), 0.0);
    check_column(reduce(Stat::last, d.x, &d.g, nullptr, opts),
                 expect([&](size_t k) { return oracle::last(d.group_x[k], na_rm); }), 0.0);
    check_column(reduce(Stat::mode, d.x, &d.g, w, opts),
                 expect([&](size_t k) {
                   return oracle::mode(d.group_x[k], wseq ? &wseq[k] : nullptr, na_rm);
                 }),
                 0.0);
    check_column(reduce(Stat::median, d.x, &d.g, w, opts),
                 expect([&](size_t k) {
                   return oracle::quantile(d.group_x[k], wseq ? &wseq[k] : nullptr, 0.5,
                                           oracle::Ties::q7, na_rm);
                 }),
                 0.0);

    Column n = reduce(Stat::nobs, d.x, &d.g, nullptr, opts);
    Column nd = reduce(Stat::ndistinct, d.x, &d.g, nullptr, opts);
    for (std::int64_t k = 0; k < d.g.n_groups(); ++k) {
      CHECK(n.i64_data()[static_cast<size_t>(k)] ==
            oracle::nobs(d.group_x[static_cast<size_t>(k)], na_rm));
      CHECK(nd.i64_data()[static_cast<size_t>(k)] ==
            oracle::ndistinct(d.group_x[static_cast<size_t>(k)], na_rm));
    }
  }
}

TEST_CASE("unit weights reproduce unweighted statistics exactly") {
  std::mt19937 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    RandomData d = random_grouped(rng);
    Column ones = fcol("w", std::vector<double>(static_cast<size_t>(d.x.size()), 1.0));
    for (Stat s : {Stat::mean, Stat::var, Stat::sd, Stat::mode, Stat::median}) {
      Column a = reduce(s, d.x, &d.g, &ones, quiet());
      Column b = reduce(s, d.x, &d.g, nullptr, quiet());
      CHECK(a.equal_values(b));
    }
  }
}

TEST_CASE("quantile golden examples") {
  Column x = fcol("x", {1.0, 2.0, 3.0, 4.0});
  Column q = quantile(x, 0.5, nullptr, QuantileTies::q7, nullptr, nullptr, quiet());
  CHECK(q.f64_data()[0] == 2.5);

  // HF8 at p=0.25: h = (4 + 1/3)/4 + 1/3
  Column q8 = quantile(x, 0.25, nullptr, QuantileTies::q8, nullptr, nullptr, quiet());
  double h = (4.0 + 1.0 / 3.0) * 0.25 + 1.0 / 3.0;
  double gamma = h - std::floor(h);
  CHECK(near(q8.f64_data()[0], (1.0 - gamma) * 1.0 + gamma * 2.0, 1e-14));

  // integer weights equal the expanded unweighted median
  Column xv = fcol("x", {1.0, 2.0, 3.0});
  Column wv = fcol("w", {1.0, 2.0, 1.0});
  Column med = quantile(xv, 0.5, &wv, QuantileTies::q7, nullptr, nullptr, quiet());
  CHECK(med.f64_data()[0] == oracle::hf7({1.0, 2.0, 2.0, 3.0}, 0.5));

  CHECK_THROWS_AS(quantile(x, 1.5, nullptr, QuantileTies::q7, nullptr, nullptr, quiet()),
                  std::invalid_argument);
}

TEST_CASE("quantile lower/upper take order statistics") {
  Column x = fcol("x", {10.0, 20.0, 30.0, 40.0});
  Column lo = quantile(x, 0.5, nullptr, QuantileTies::lower, nullptr, nullptr, quiet());
  Column up = quantile(x, 0.5, nullptr, QuantileTies::upper, nullptr, nullptr, quiet());
  CHECK(lo.f64_data()[0] == 20.0);
  CHECK(up.f64_data()[0] == 30.0);
}

TEST_CASE("integer-weight quantiles equal weight-expanded quantiles exactly") {
  std::mt19937 rng(5);
  for (int rep = 0; rep < 40; ++rep) {
    RandomData d = random_grouped(rng, 120, 5, true);
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      for (QuantileTies ties : {QuantileTies::q7, QuantileTies::q8}) {
        Column got = quantile(d.x, p, &d.w, ties, &d.g, nullptr, quiet());
        for (std::int64_t k = 0; k < d.g.n_groups(); ++k) {
          std::vector<double> expanded;
          const auto& xs = d.group_x[static_cast<size_t>(k)];
          const auto& ws = d.group_w[static_cast<size_t>(k)];
          for (size_t i = 0; i < xs.size(); ++i) {
            if (!xs[i]) continue;
            for (int r = 0; r < static_cast<int>(*ws[i]); ++r) expanded.push_back(*xs[i]);
          }
          if (expanded.empty()) {
            CHECK_FALSE(got.is_valid(k));
            continue;
          }
          double want = ties == QuantileTies::q7 ? oracle::hf7(expanded, p)
                                                 : oracle::hf8(expanded, p);
          CHECK(got.number_at(k) == want);
        }
      }
    }
  }
}

TEST_CASE("quantile consumes an overall ordering vector") {
  Column x = fcol("x", {5.0, 1.0, 4.0, 2.0, 3.0, 6.0});
  Column gcol = scol("g", {"b", "a", "b", "a", "a", "b"});
  Grouping g = group_by(gcol, true);
  // order rows by (group, value)
  Ordering ord = stable_order({gcol, x});
  Column with_ord = quantile(x, 0.5, nullptr, QuantileTies::q7, &g, &ord.perm, quiet());
  Column without = quantile(x, 0.5, nullptr, QuantileTies::q7, &g, nullptr, quiet());
  CHECK(with_ord.equal_values(without));

  std::vector<std::int64_t> bad = {0, 0, 1, 2, 3, 4};
  CHECK_THROWS_AS(quantile(x, 0.5, nullptr, QuantileTies::q7, &g, &bad, quiet()),
                  std::invalid_argument);
}

TEST_CASE("mode examples") {
  check_column(mode_stat(fcol("x", {1.0, 2.0, 2.0, 3.0}), nullptr, nullptr, quiet()), {2.0}, 0.0);
  Column w = fcol("w", {3.0, 1.0});
  check_column(mode_stat(fcol("x", {1.0, 2.0}), nullptr, &w, quiet()), {1.0}, 0.0);
  // tie goes to the first-occurring value
  check_column(mode_stat(fcol("x", {3.0, 1.0, 3.0, 1.0}), nullptr, nullptr, quiet()), {3.0}, 0.0);
  // all-missing group stays missing
  Column allna = fcol("x", {std::optional<double>{}, std::optional<double>{}});
  CHECK_FALSE(mode_stat(allna, nullptr, nullptr, quiet()).is_valid(0));
}

TEST_CASE("sweep covers all 11 modes") {
  Column x = fcol("x", {1.0, 2.0, 3.0});
  Grouping g = group_by(scol("g", {"a", "a", "b"}), true);
  Column stats = fcol("s", {10.0, 20.0});

  check_column(sweep(x, stats, SweepOp::replace_fill, &g), {10.0, 10.0, 20.0}, 0.0);
  check_column(sweep(x, stats, SweepOp::subtract, &g), {-9.0, -8.0, -17.0}, 0.0);
  check_column(sweep(x, stats, SweepOp::add, &g), {11.0, 12.0, 23.0}, 0.0);
  check_column(sweep(x, stats, SweepOp::multiply, &g), {10.0, 20.0, 60.0}, 0.0);
  check_column(sweep(x, stats, SweepOp::divide, &g), {0.1, 0.2, 0.15}, 1e-15);
  check_column(sweep(x, stats, SweepOp::percent, &g), {10.0, 20.0, 15.0}, 1e-15);

  // -+ adds the size-weighted average statistic back
  double avg = (2.0 * 10.0 + 1.0 * 20.0) / 3.0;
  check_column(sweep(x, stats, SweepOp::subtract_add_avg, &g),
               {1.0 - 10.0 + avg, 2.0 - 10.0 + avg, 3.0 - 20.0 + avg}, 1e-14);

  check_column(sweep(fcol("x", {7.0}), fcol("s", {3.0}), SweepOp::modulus, nullptr), {1.0}, 0.0);
  check_column(sweep(fcol("x", {7.0}), fcol("s", {3.0}), SweepOp::subtract_modulus, nullptr),
               {6.0}, 0.0);

  // replace keeps missing, replace_na fills only missing
  Column xm = fcol("x", {std::optional<double>(1.0), std::nullopt, 3.0});
  Grouping g2 = group_by(scol("g", {"a", "a", "b"}), true);
  Column rep = sweep(xm, stats, SweepOp::replace, &g2);
  CHECK(rep.number_at(0) == 10.0);
  CHECK_FALSE(rep.is_valid(1));
  Column na = sweep(xm, stats, SweepOp::replace_na, &g2);
  CHECK(na.number_at(0) == 1.0);
  CHECK(na.number_at(1) == 10.0);

  CHECK_THROWS_AS(sweep(x, fcol("s", {1.0, 2.0, 3.0}), SweepOp::subtract, &g),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep(scol("x", {"a", "b", "c"}), stats, SweepOp::subtract, &g),
                  std::invalid_argument);
}

TEST_CASE("sweep round trips and integration with reduce") {
  std::mt19937 rng(21);
  RandomData d = random_grouped(rng);
  Column m = reduce(Stat::mean, d.x, &d.g, nullptr, quiet());
  Column centered = sweep(d.x, m, SweepOp::subtract, &d.g);
  Column back = sweep(centered, m, SweepOp::add, &d.g);
  for (std::int64_t i = 0; i < d.x.size(); ++i) {
    if (d.x.is_valid(i) && m.is_valid(d.g.group_id()[static_cast<size_t>(i)])) {
      CHECK(near(back.number_at(i), d.x.number_at(i), 1e-12));
    }
  }

  // group means of centered data are 0
  Column remean = reduce(Stat::mean, centered, &d.g, nullptr, quiet());
  for (std::int64_t k = 0; k < remean.size(); ++k) {
    if (remean.is_valid(k)) CHECK(std::fabs(remean.number_at(k)) < 1e-12);
  }

  // reduce with an immediate sweep equals reduce then sweep
  Column direct = reduce(Stat::mean, d.x, &d.g, nullptr, quiet(), SweepOp::subtract);
  CHECK(direct.equal_values(centered));
}

TEST_CASE("reduce swept through quantile and mode") {
  Column x = fcol("x", {1.0, 2.0, 3.0, 4.0});
  Grouping g = group_by(scol("g", {"a", "a", "b", "b"}), true);
  Column filled = quantile(x, 0.5, nullptr, QuantileTies::q7, &g, nullptr, quiet(),
                           SweepOp::replace_fill);
  check_column(filled, {1.5, 1.5, 3.5, 3.5}, 0.0);
  Column mfill = mode_stat(x, &g, nullptr, quiet(), SweepOp::replace_fill);
  check_column(mfill, {1.0, 1.0, 3.0, 3.0}, 0.0);
}

TEST_CASE("aggregate mixes numeric and categorical statistics") {
  Frame f;
  f.add(scol("g", {"a", "a", "b", "b"}));
  f.add(fcol("x", {1.0, 3.0, 10.0, 30.0}));
  f.add(scol("c", {"u", "v", "v", "v"}));
  f.add(fcol("pop", {1.0, 3.0, 1.0, 1.0}));

  AggregateSpec spec;
  spec.keep_w = true;
  Frame out = aggregate(f, {"g"}, std::optional<std::string>("pop"), spec);
  CHECK(out.names() == std::vector<std::string>{"g", "sum.pop", "x", "c"});
  CHECK(out.column("sum.pop").number_at(0) == 4.0);
  CHECK(near(out.column("x").number_at(0), (1.0 * 1.0 + 3.0 * 3.0) / 4.0, 1e-14));
  CHECK(value_to_string(out.column("c").value_at(0)) == "v");  // weight 3 beats weight 1
  CHECK(value_to_string(out.column("c").value_at(1)) == "v");

  // single group, unweighted means
  Frame one;
  one.add(scol("g", {"k", "k"}));
  one.add(fcol("x", {1.0, 2.0}));
  Frame m = aggregate(one, {"g"}, std::nullopt, AggregateSpec{});
  CHECK(near(m.column("x").number_at(0), 1.5, 1e-15));

  // unweighted categorical mode oracle
  Frame catf;
  catf.add(scol("g", {"k", "k", "k"}));
  catf.add(scol("c", {"a", "a", "b"}));
  Frame cm = aggregate(catf, {"g"}, std::nullopt, AggregateSpec{});
  CHECK(value_to_string(cm.column("c").value_at(0)) == "a");

  CHECK_THROWS_AS(aggregate(f, {"nope"}, std::nullopt, AggregateSpec{}), std::invalid_argument);
}

TEST_CASE("use_group_names attaches group labels") {
  Column x = fcol("x", {1.0, 2.0, 5.0});
  Grouping g = group_by(scol("g", {"b", "b", "a"}), true);
  StatOptions opts;
  opts.use_group_names = true;
  Column s = reduce(Stat::sum, x, &g, nullptr, opts);
  REQUIRE(s.row_names().has_value());
  CHECK(*s.row_names() == std::vector<std::string>{"a", "b"});
}
