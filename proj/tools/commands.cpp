#include "commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>

#include "bench.hpp"
#include "csv.hpp"
#include "foldframe/describe.hpp"
#include "foldframe/join.hpp"
#include "foldframe/nested.hpp"
#include "foldframe/options.hpp"
#include "foldframe/pivot.hpp"
#include "foldframe/stats.hpp"
#include "foldframe/timeindex.hpp"
#include "foldframe/transform.hpp"
#include "node_json.hpp"

namespace foldframe::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string basename_noext(const std::string& path) {
  size_t slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base;
}

// a statistic token: a named statistic or q<percent> (q25, q97.5)
struct StatToken {
  std::optional<Stat> stat;
  std::optional<double> p;
};

StatToken parse_stat_token(const std::string& token) {
  StatToken t;
  if (auto s = stat_from_name(token)) {
    if (*s == Stat::nth) throw std::invalid_argument("use q<percent> for quantiles, e.g. q25");
    t.stat = *s;
    return t;
  }
  if (token.size() > 1 && token[0] == 'q') {
    double pct;
    auto res = std::from_chars(token.data() + 1, token.data() + token.size(), pct);
    if (res.ec == std::errc{} && res.ptr == token.data() + token.size()) {
      if (pct < 0.0 || pct > 100.0)
        throw std::invalid_argument("quantile percent out of range: " + token);
      t.p = pct / 100.0;
      return t;
    }
  }
  throw std::invalid_argument("unknown statistic " + token);
}

Column compute_stat(const StatToken& token, const Column& x, const Grouping* g,
                    const Column* w, std::optional<SweepOp> tra) {
  if (token.p) return quantile(x, *token.p, w, QuantileTies::q7, g, nullptr, {}, tra);
  return reduce(*token.stat, x, g, w, {}, tra);
}

Value parse_value_token(const std::string& s) {
  std::int64_t iv;
  auto ri = std::from_chars(s.data(), s.data() + s.size(), iv);
  if (ri.ec == std::errc{} && ri.ptr == s.data() + s.size()) return iv;
  double dv;
  auto rd = std::from_chars(s.data(), s.data() + s.size(), dv);
  if (rd.ec == std::errc{} && rd.ptr == s.data() + s.size()) return dv;
  if (s == "true") return true;
  if (s == "false") return false;
  return s;
}

Frame with_replaced(const Frame& frame, const std::unordered_map<std::string, Column>& repl) {
  Frame out;
  for (const auto& c : frame.columns()) {
    auto it = repl.find(c.name());
    if (it == repl.end()) {
      out.add(c);
    } else {
      Column col = it->second;
      col.rename(c.name());
      out.add(std::move(col));
    }
  }
  return out;
}

void emit_output(const Frame& frame, const std::string& output) {
  if (output.empty()) {
    // display mode on stdout honors the digits option
    write_table(frame, std::cout, get_options().digits);
  } else {
    write_table(frame, output, -1);
  }
}

std::vector<std::string> numeric_columns(const Frame& frame,
                                         const std::vector<std::string>& exclude) {
  std::vector<std::string> out;
  for (const auto& c : frame.columns()) {
    if (!c.is_numeric()) continue;
    bool skip = false;
    for (const auto& e : exclude) skip = skip || e == c.name();
    if (!skip) out.push_back(c.name());
  }
  return out;
}

// engine option layering: config file, then environment, then flags
void apply_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t\r");
      size_t e = s.find_last_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) set_option(key, value);
  }
}

void apply_environment() {
  static const std::pair<const char*, const char*> vars[] = {
      {"FOLDFRAME_NA_RM", "na_rm"},     {"FOLDFRAME_SORT", "sort"},
      {"FOLDFRAME_NTHREADS", "nthreads"}, {"FOLDFRAME_VERBOSE", "verbose"},
      {"FOLDFRAME_DIGITS", "digits"},
  };
  for (const auto& [env, opt] : vars) {
    const char* v = std::getenv(env);
    if (v && *v) set_option(opt, v);
  }
}

struct GlobalFlags {
  std::string config;
  std::string na_rm, sort;
  int nthreads = 0, verbose = -1, digits = -1;
  bool has_nthreads = false, has_verbose = false, has_digits = false;
};

void apply_engine_options(const GlobalFlags& g) {
  // reset to built-in defaults, then layer config < env < flags
  EngineOptions defaults;
  set_options(EngineOptionsPatch{defaults.na_rm, defaults.sort, defaults.nthreads,
                                 defaults.verbose, defaults.digits});
  if (!g.config.empty()) apply_config_file(g.config);
  apply_environment();
  if (!g.na_rm.empty()) set_option("na_rm", g.na_rm);
  if (!g.sort.empty()) set_option("sort", g.sort);
  if (g.has_nthreads) set_option("nthreads", std::to_string(g.nthreads));
  if (g.has_verbose) set_option("verbose", std::to_string(g.verbose));
  if (g.has_digits) set_option("digits", std::to_string(g.digits));
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"foldframe: grouped and weighted statistics on columnar tables"};
  app.require_subcommand(0, 1);

  GlobalFlags globals;
  app.add_option("--config", globals.config, "config file with key = value option lines");
  app.add_option("--na-rm", globals.na_rm, "default for skipping missing values (true/false)");
  app.add_option("--sort", globals.sort, "default for sorted grouping (true/false)");
  auto* othreads = app.add_option("--nthreads", globals.nthreads, "worker threads");
  auto* overbose = app.add_option("--verbose", globals.verbose, "verbosity level");
  auto* odigits = app.add_option("--digits", globals.digits, "display digits");

  // agg
  auto* agg = app.add_subcommand("agg", "grouped aggregation");
  std::string agg_in, agg_out, agg_by, agg_weight, agg_tra, agg_numeric = "mean",
                               agg_categorical = "mode";
  std::vector<std::string> agg_stats;
  bool agg_keepw = false;
  agg->add_option("input", agg_in, "input table")->required();
  agg->add_option("-o,--output", agg_out, "output path (default stdout)");
  agg->add_option("--by", agg_by, "key columns")->required();
  agg->add_option("--stats", agg_stats, "stat:col[,col] specs (repeatable)");
  agg->add_option("--weight", agg_weight, "weight column");
  agg->add_option("--tra", agg_tra, "sweep the statistics back over the rows");
  agg->add_option("--numeric-stat", agg_numeric, "statistic for numeric columns (default mean)");
  agg->add_option("--categorical-stat", agg_categorical,
                  "statistic for categorical columns (default mode)");
  agg->add_flag("--keep-weight", agg_keepw, "retain the summed weight column");

  // tra
  auto* tra = app.add_subcommand("tra", "sweep group statistics over rows");
  std::string tra_in, tra_out, tra_by, tra_stat = "mean", tra_mode, tra_weight, tra_cols;
  tra->add_option("input", tra_in)->required();
  tra->add_option("-o,--output", tra_out);
  tra->add_option("--by", tra_by, "key columns");
  tra->add_option("--stat", tra_stat, "statistic to sweep (default mean)");
  tra->add_option("--mode", tra_mode, "sweep mode (replace_na, fill, replace, -, -+, /, %, +, *, %%, -%%)")
      ->required();
  tra->add_option("--weight", tra_weight);
  tra->add_option("--cols", tra_cols, "columns to transform (default: numeric non-key)");

  // scale
  auto* scale_cmd = app.add_subcommand("scale", "standardize, center or average within groups");
  std::string sc_in, sc_out, sc_by, sc_cols, sc_weight, sc_op = "scale";
  bool sc_add_mean = false, sc_fill = false;
  scale_cmd->add_option("input", sc_in)->required();
  scale_cmd->add_option("-o,--output", sc_out);
  scale_cmd->add_option("--by", sc_by, "key columns");
  scale_cmd->add_option("--op", sc_op, "scale | within | between (default scale)");
  scale_cmd->add_option("--cols", sc_cols);
  scale_cmd->add_option("--weight", sc_weight);
  scale_cmd->add_flag("--add-mean", sc_add_mean, "within: add the overall mean back");
  scale_cmd->add_flag("--fill", sc_fill, "between: fill missing rows with the group mean");

  // join
  auto* join_cmd = app.add_subcommand("join", "verbose table join");
  std::string j_x, j_y, j_out, j_on, j_how = "left", j_validate = "m:m", j_require, j_suffix,
                                j_drop;
  bool j_multiple = false, j_sort = false, j_column = false;
  int j_verbose = -1;
  join_cmd->add_option("x", j_x, "left table")->required();
  join_cmd->add_option("y", j_y, "right table")->required();
  join_cmd->add_option("-o,--output", j_out);
  join_cmd->add_option("--on", j_on, "key columns: a[=b][,c[=d]] (default: shared names)");
  join_cmd->add_option("--how", j_how, "left|right|inner|full|semi|anti");
  join_cmd->add_option("--validate", j_validate, "m:m | 1:m | m:1 | 1:1");
  join_cmd->add_option("--require", j_require, "minimum match share, e.g. x=0.8[,y=0.5]");
  join_cmd->add_option("--suffix", j_suffix, "suffix for duplicate y columns");
  join_cmd->add_option("--drop-dup-cols", j_drop, "x | y");
  join_cmd->add_flag("--multiple", j_multiple, "emit all matches instead of the first");
  join_cmd->add_flag("--sort", j_sort, "sort the result by the keys");
  join_cmd->add_flag("--column", j_column, "add a .join match-origin column");
  join_cmd->add_option("--verbose", j_verbose, "join verbosity (overrides the global option)");

  // pivot
  auto* pivot_cmd = app.add_subcommand("pivot", "reshape between long and wide layouts");
  std::string p_in, p_out, p_mode, p_ids, p_values, p_names, p_labels, p_agg = "last", p_fill;
  bool p_na_rm = false, p_check = false, p_sort = false;
  pivot_cmd->add_option("input", p_in)->required();
  pivot_cmd->add_option("-o,--output", p_out);
  pivot_cmd->add_option("--mode", p_mode, "longer | wider | recast")->required();
  pivot_cmd->add_option("--ids", p_ids, "id columns");
  pivot_cmd->add_option("--values", p_values, "value columns");
  pivot_cmd->add_option("--names", p_names,
                        "longer: output variable[,value] names; wider: name source columns; "
                        "recast: from=COL,to=NAME");
  pivot_cmd->add_option("--labels", p_labels,
                        "longer: output label column; wider: label source columns; recast: "
                        "from=COL,to=NAME");
  pivot_cmd->add_option("--agg", p_agg,
                        "first|last|sum|mean|min|max|count or a statistic name (default last)");
  pivot_cmd->add_option("--fill", p_fill, "value for absent cells");
  pivot_cmd->add_flag("--na-rm", p_na_rm, "drop missing values while reshaping");
  pivot_cmd->add_flag("--check-dups", p_check, "error on duplicate cells");
  pivot_cmd->add_flag("--sort", p_sort, "sort ids and name levels");

  // ts
  auto* ts_cmd = app.add_subcommand("ts", "lags, differences, growth rates, cumulative sums");
  std::string t_in, t_out, t_op, t_cols, t_by, t_time, t_n = "1";
  double t_power = 1.0, t_scale = 100.0;
  bool t_log = false;
  ts_cmd->add_option("input", t_in)->required();
  ts_cmd->add_option("-o,--output", t_out);
  ts_cmd->add_option("--op", t_op, "lag | diff | growth | cumsum")->required();
  ts_cmd->add_option("--cols", t_cols, "value columns (default: numeric non-key)");
  ts_cmd->add_option("--n", t_n, "steps, e.g. 1 or -1,0,1,2 (default 1)");
  ts_cmd->add_option("--by", t_by, "panel id columns");
  ts_cmd->add_option("--time", t_time, "time column");
  ts_cmd->add_option("--power", t_power, "growth exponent (default 1)");
  ts_cmd->add_option("--scale", t_scale, "growth scale (default 100)");
  ts_cmd->add_flag("--log", t_log, "log differences");

  // describe
  auto* desc_cmd = app.add_subcommand("describe", "summary statistics");
  std::string d_in, d_out, d_kind, d_cols, d_by, d_pid, d_weight, d_stat, d_statw,
      d_measure = "cor";
  desc_cmd->add_option("input", d_in)->required();
  desc_cmd->add_option("-o,--output", d_out);
  desc_cmd->add_option("--kind", d_kind, "qsu | descr | qtab | varying | pairwise")->required();
  desc_cmd->add_option("--cols", d_cols, "columns to describe");
  desc_cmd->add_option("--by", d_by, "grouping columns");
  desc_cmd->add_option("--pid", d_pid, "panel id columns (qsu)");
  desc_cmd->add_option("--weight", d_weight, "weight column");
  desc_cmd->add_option("--stat", d_stat, "qtab cell statistic");
  desc_cmd->add_option("--stat-weight", d_statw, "weights for the qtab cell statistic");
  desc_cmd->add_option("--measure", d_measure, "pairwise: cor | cov | nobs (default cor)");

  // split / flatten
  auto* split_cmd = app.add_subcommand("split", "split a table into a nested tree");
  std::string s_in, s_out, s_by;
  bool s_flat = false;
  split_cmd->add_option("input", s_in)->required();
  split_cmd->add_option("-o,--output", s_out);
  split_cmd->add_option("--by", s_by, "key columns (nesting order)")->required();
  split_cmd->add_flag("--flatten", s_flat, "single level keyed by the interacted keys");

  auto* flat_cmd = app.add_subcommand("flatten", "flatten a nested tree into a table");
  std::string f_in, f_out, f_ids, f_rownames;
  flat_cmd->add_option("input", f_in, "tree file (JSON-shaped)")->required();
  flat_cmd->add_option("-o,--output", f_out);
  flat_cmd->add_option("--ids", f_ids, "id column names, outer to inner");
  flat_cmd->add_option("--row-names", f_rownames, "column for matrix row labels");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "timing harness");
  std::string b_scenario;
  std::int64_t b_rows = 10000, b_groups = 1000, b_cols = 1000;
  int b_iters = 5;
  bench_cmd->add_option("--scenario", b_scenario, "sum|mean|median|range|join|pivot")
      ->required();
  bench_cmd->add_option("--rows", b_rows, "rows (default 10000)");
  bench_cmd->add_option("--groups", b_groups, "groups (default 1000)");
  bench_cmd->add_option("--cols", b_cols, "columns for matrix scenarios (default 1000)");
  bench_cmd->add_option("--iters", b_iters, "iterations, at least 5");

  // parse
  std::vector<const char*> argv;
  argv.push_back("foldframe");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    globals.has_nthreads = othreads->count() > 0;
    globals.has_verbose = overbose->count() > 0;
    globals.has_digits = odigits->count() > 0;
    apply_engine_options(globals);

    if (app.get_subcommands().empty()) {
      std::cerr << app.help() << std::endl;
      return 1;
    }

    if (*agg) {
      Frame in = read_table(agg_in);
      std::vector<std::string> by = split_list(agg_by);
      const Column* w = agg_weight.empty() ? nullptr : &in.column(agg_weight);
      if (agg_stats.empty()) {
        AggregateSpec spec;
        auto ns = parse_stat_token(agg_numeric);
        auto cs = parse_stat_token(agg_categorical);
        if (!ns.stat || !cs.stat)
          throw std::invalid_argument("aggregate statistics must be named statistics");
        spec.numeric_stat = *ns.stat;
        spec.cat_stat = *cs.stat;
        spec.keep_w = agg_keepw;
        emit_output(aggregate(in, by, agg_weight.empty() ? std::nullopt
                                                         : std::optional<std::string>(agg_weight),
                              spec),
                    agg_out);
        return 0;
      }
      Grouping g = group_by(select(in, by));
      std::optional<SweepOp> tra_mode;
      if (!agg_tra.empty()) {
        auto m = sweep_from_name(agg_tra);
        if (!m) throw std::invalid_argument("unknown sweep mode " + agg_tra);
        tra_mode = *m;
      }
      // count column uses per spec to decide output names
      std::unordered_map<std::string, int> uses;
      struct Item {
        StatToken token;
        std::string stat_name;
        std::string col;
      };
      std::vector<Item> items;
      for (const auto& spec : agg_stats) {
        size_t colon = spec.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("stats spec must be stat:col[,col], got " + spec);
        std::string stat_name = spec.substr(0, colon);
        StatToken token = parse_stat_token(stat_name);
        for (const auto& col : split_list(spec.substr(colon + 1))) {
          items.push_back({token, stat_name, col});
          uses[col]++;
        }
      }
      if (tra_mode) {
        std::unordered_map<std::string, Column> repl;
        for (const auto& item : items)
          repl.emplace(item.col, compute_stat(item.token, in.column(item.col), &g, w, tra_mode));
        emit_output(with_replaced(in, repl), agg_out);
        return 0;
      }
      Frame out = *g.groups();
      for (const auto& item : items) {
        Column c = compute_stat(item.token, in.column(item.col), &g, w, std::nullopt);
        if (uses[item.col] > 1) c.rename(item.stat_name + "." + item.col);
        out.add(std::move(c));
      }
      emit_output(out, agg_out);
      return 0;
    }

    if (*tra) {
      Frame in = read_table(tra_in);
      std::vector<std::string> by = split_list(tra_by);
      Grouping g;
      const Grouping* gp = nullptr;
      if (!by.empty()) {
        g = group_by(select(in, by));
        gp = &g;
      }
      const Column* w = tra_weight.empty() ? nullptr : &in.column(tra_weight);
      auto mode = sweep_from_name(tra_mode);
      if (!mode) throw std::invalid_argument("unknown sweep mode " + tra_mode);
      StatToken token = parse_stat_token(tra_stat);
      std::vector<std::string> cols = tra_cols.empty()
                                          ? numeric_columns(in, [&] {
                                              auto ex = by;
                                              if (!tra_weight.empty()) ex.push_back(tra_weight);
                                              return ex;
                                            }())
                                          : split_list(tra_cols);
      std::unordered_map<std::string, Column> repl;
      for (const auto& col : cols)
        repl.emplace(col, compute_stat(token, in.column(col), gp, w, *mode));
      emit_output(with_replaced(in, repl), tra_out);
      return 0;
    }

    if (*scale_cmd) {
      Frame in = read_table(sc_in);
      std::vector<std::string> by = split_list(sc_by);
      Grouping g;
      const Grouping* gp = nullptr;
      if (!by.empty()) {
        g = group_by(select(in, by));
        gp = &g;
      }
      const Column* w = sc_weight.empty() ? nullptr : &in.column(sc_weight);
      std::vector<std::string> cols = sc_cols.empty()
                                          ? numeric_columns(in, [&] {
                                              auto ex = by;
                                              if (!sc_weight.empty()) ex.push_back(sc_weight);
                                              return ex;
                                            }())
                                          : split_list(sc_cols);
      std::unordered_map<std::string, Column> repl;
      for (const auto& col : cols) {
        const Column& x = in.column(col);
        if (sc_op == "scale") repl.emplace(col, scale(x, gp, w));
        else if (sc_op == "within")
          repl.emplace(col, within(x, gp, w, sc_add_mean ? AddBack::overall_mean : AddBack::zero));
        else if (sc_op == "between") repl.emplace(col, between(x, gp, w, sc_fill));
        else
          throw std::invalid_argument("unknown scale op " + sc_op);
      }
      emit_output(with_replaced(in, repl), sc_out);
      return 0;
    }

    if (*join_cmd) {
      Frame x = read_table(j_x);
      Frame y = read_table(j_y);
      JoinSpec spec;
      spec.x_name = basename_noext(j_x);
      spec.y_name = basename_noext(j_y);
      for (const auto& pair : split_list(j_on)) {
        size_t eq = pair.find('=');
        if (eq == std::string::npos) spec.on.emplace_back(pair, pair);
        else spec.on.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
      }
      auto how = join_how_from_name(j_how);
      if (!how) throw std::invalid_argument("unknown join type " + j_how);
      spec.how = *how;
      auto val = join_validate_from_name(j_validate);
      if (!val) throw std::invalid_argument("unknown validate mode " + j_validate);
      spec.validate = *val;
      for (const auto& req : split_list(j_require)) {
        size_t eq = req.find('=');
        std::string side = eq == std::string::npos ? "x" : req.substr(0, eq);
        double v = std::stod(eq == std::string::npos ? req : req.substr(eq + 1));
        if (side == "x") spec.require_x = v;
        else if (side == "y") spec.require_y = v;
        else
          throw std::invalid_argument("require side must be x or y, got " + side);
      }
      if (!j_suffix.empty()) spec.suffix = j_suffix;
      if (!j_drop.empty()) {
        if (j_drop == "x") spec.drop_dup_cols = DropDupCols::x;
        else if (j_drop == "y") spec.drop_dup_cols = DropDupCols::y;
        else
          throw std::invalid_argument("drop-dup-cols must be x or y");
      }
      spec.multiple = j_multiple;
      spec.sort = j_sort;
      if (j_column) spec.match_column = "";
      if (j_verbose >= 0) spec.verbose = j_verbose;
      JoinResult res = join(x, y, spec, [](const std::string& line) {
        std::cerr << line << "\n";
      });
      emit_output(res.frame, j_out);
      return 0;
    }

    if (*pivot_cmd) {
      Frame in = read_table(p_in);
      PivotSpec spec;
      spec.ids = split_list(p_ids);
      spec.values = split_list(p_values);
      spec.na_rm = p_na_rm;
      spec.check_dups = p_check;
      spec.sort = p_sort;
      if (!p_fill.empty()) spec.fill = parse_value_token(p_fill);
      if (auto a = pivot_agg_from_name(p_agg)) {
        spec.agg = *a;
      } else {
        StatToken token = parse_stat_token(p_agg);
        if (!token.stat) throw std::invalid_argument("pivot agg must be a named statistic");
        spec.agg = *token.stat;
      }
      auto parse_from_to = [](const std::string& s, std::string& from, std::string& to) {
        for (const auto& part : split_list(s)) {
          size_t eq = part.find('=');
          if (eq == std::string::npos)
            throw std::invalid_argument("expected from=COL or to=NAME, got " + part);
          std::string key = part.substr(0, eq);
          if (key == "from") from = part.substr(eq + 1);
          else if (key == "to") to = part.substr(eq + 1);
          else
            throw std::invalid_argument("expected from= or to=, got " + key);
        }
      };
      if (p_mode == "longer") {
        spec.mode = PivotMode::longer;
        auto names = split_list(p_names);
        if (names.size() > 0) spec.variable_name = names[0];
        if (names.size() > 1) spec.value_name = names[1];
        if (!p_labels.empty()) spec.label_name = p_labels;
      } else if (p_mode == "wider") {
        spec.mode = PivotMode::wider;
        spec.names_cols = split_list(p_names);
        spec.label_cols = split_list(p_labels);
      } else if (p_mode == "recast") {
        spec.mode = PivotMode::recast;
        parse_from_to(p_names, spec.names_from, spec.names_to);
        std::string lf, lt;
        if (!p_labels.empty()) parse_from_to(p_labels, lf, lt);
        if (!lf.empty()) spec.labels_from = lf;
        if (!lt.empty()) spec.labels_to = lt;
      } else {
        throw std::invalid_argument("unknown pivot mode " + p_mode);
      }
      emit_output(pivot(in, spec), p_out);
      return 0;
    }

    if (*ts_cmd) {
      Frame in = read_table(t_in);
      std::vector<std::string> by = split_list(t_by);
      Grouping g;
      const Grouping* gp = nullptr;
      if (!by.empty()) {
        g = group_by(select(in, by));
        gp = &g;
      }
      std::optional<TimeId> tid;
      if (!t_time.empty()) tid = time_id(in.column(t_time));
      const TimeId* tp = tid ? &*tid : nullptr;

      std::vector<std::int64_t> ns;
      for (const auto& tok : split_list(t_n)) ns.push_back(std::stoll(tok));
      if (ns.empty()) ns.push_back(1);

      std::vector<std::string> cols = t_cols.empty()
                                          ? numeric_columns(in, [&] {
                                              auto ex = by;
                                              if (!t_time.empty()) ex.push_back(t_time);
                                              return ex;
                                            }())
                                          : split_list(t_cols);
      std::unordered_set<std::string> value_set(cols.begin(), cols.end());

      Frame out;
      for (const auto& c : in.columns()) {
        if (!value_set.count(c.name())) out.add(c);
      }
      for (const auto& colname : cols) {
        const Column& x = in.column(colname);
        if (t_op == "cumsum") {
          out.add(cumsum_by(x, gp, nullptr));
          continue;
        }
        Frame block;
        if (t_op == "lag") block = shift(x, ns, gp, tp);
        else if (t_op == "diff") block = diff(x, ns, gp, tp, t_log);
        else if (t_op == "growth") block = growth(x, ns, gp, tp, t_power, t_scale);
        else
          throw std::invalid_argument("unknown ts op " + t_op);
        for (size_t bi = 0; bi < block.columns().size(); ++bi) {
          Column c = block.columns()[bi];
          if (c.name() != colname) c.rename(c.name() + "." + colname);
          out.add(std::move(c));
        }
      }
      emit_output(out, t_out);
      return 0;
    }

    if (*desc_cmd) {
      Frame in = read_table(d_in);
      std::vector<std::string> by = split_list(d_by);
      std::vector<std::string> cols = split_list(d_cols);
      const Column* w = d_weight.empty() ? nullptr : &in.column(d_weight);

      if (d_kind == "qsu") {
        Grouping pid, byg;
        const Grouping* pidp = nullptr;
        const Grouping* byp = nullptr;
        if (!d_pid.empty()) {
          pid = group_by(select(in, split_list(d_pid)));
          pidp = &pid;
        }
        if (!by.empty()) {
          byg = group_by(select(in, by));
          byp = &byg;
        }
        std::vector<std::string> exclude = by;
        for (const auto& p : split_list(d_pid)) exclude.push_back(p);
        if (!d_weight.empty()) exclude.push_back(d_weight);
        Frame target = cols.empty() ? select(in, numeric_columns(in, exclude)) : select(in, cols);
        emit_output(panel_summary(target, pidp, byp, w), d_out);
        return 0;
      }
      if (d_kind == "descr") {
        Grouping byg;
        const Grouping* byp = nullptr;
        if (!by.empty()) {
          byg = group_by(select(in, by));
          byp = &byg;
        }
        std::vector<std::string> exclude = by;
        if (!d_weight.empty()) exclude.push_back(d_weight);
        Frame target = in;
        if (!cols.empty()) {
          target = select(in, cols);
        } else if (!exclude.empty()) {
          std::vector<std::string> keep;
          for (const auto& name : in.names()) {
            bool skip = false;
            for (const auto& e : exclude) skip = skip || e == name;
            if (!skip) keep.push_back(name);
          }
          target = select(in, keep);
        }
        Description d = describe(target, byp, w);
        Node::Branch members;
        for (auto& vd : d.variables) members.emplace_back(vd.name, Node::frame(vd.stats));
        emit_output(bind_rows(Node::branch(std::move(members)), "Variable"), d_out);
        return 0;
      }
      if (d_kind == "qtab") {
        if (cols.empty()) throw std::invalid_argument("qtab requires --cols");
        std::vector<Column> tab_cols;
        for (const auto& c : cols) tab_cols.push_back(in.column(c));
        std::optional<Stat> stat;
        if (!d_stat.empty()) {
          auto token = parse_stat_token(d_stat);
          if (!token.stat) throw std::invalid_argument("qtab cell statistic must be named");
          stat = token.stat;
        }
        const Column* sw = d_statw.empty() ? nullptr : &in.column(d_statw);
        emit_output(cross_tab(tab_cols, w, stat, sw).to_frame(), d_out);
        return 0;
      }
      if (d_kind == "varying") {
        if (by.empty()) throw std::invalid_argument("varying requires --by");
        Grouping byg = group_by(select(in, by));
        std::vector<std::string> keep;
        for (const auto& name : in.names()) {
          bool is_key = false;
          for (const auto& b : by) is_key = is_key || b == name;
          if (!is_key) keep.push_back(name);
        }
        emit_output(varying(select(in, keep), byg), d_out);
        return 0;
      }
      if (d_kind == "pairwise") {
        PairwiseKind kind;
        if (d_measure == "cor") kind = PairwiseKind::cor;
        else if (d_measure == "cov") kind = PairwiseKind::cov;
        else if (d_measure == "nobs") kind = PairwiseKind::nobs;
        else
          throw std::invalid_argument("pairwise measure must be cor, cov or nobs");
        std::vector<std::string> exclude;
        if (!d_weight.empty()) exclude.push_back(d_weight);
        Frame target = cols.empty() ? select(in, numeric_columns(in, exclude)) : select(in, cols);
        emit_output(pairwise(kind, target, w), d_out);
        return 0;
      }
      throw std::invalid_argument("unknown describe kind " + d_kind);
    }

    if (*split_cmd) {
      Frame in = read_table(s_in);
      Node tree = split_frame(in, split_list(s_by), s_flat);
      std::string text = node_to_json(tree) + "\n";
      if (s_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(s_out, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write " + s_out);
        out << text;
      }
      return 0;
    }

    if (*flat_cmd) {
      std::ifstream infile(f_in, std::ios::binary);
      if (!infile) throw std::invalid_argument("cannot open " + f_in);
      std::stringstream buf;
      buf << infile.rdbuf();
      Node tree = node_from_json(buf.str());
      std::optional<std::string> rn;
      if (!f_rownames.empty()) rn = f_rownames;
      emit_output(flatten_tree(tree, split_list(f_ids), rn), f_out);
      return 0;
    }

    if (*bench_cmd) {
      BenchResult r = run_bench(b_scenario, b_rows, b_groups, b_cols, b_iters);
      std::cout << render_bench_table({r});
      return 0;
    }

    std::cerr << app.help() << std::endl;
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace foldframe::cli
