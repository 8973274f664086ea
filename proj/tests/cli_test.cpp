#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "altbd/commands.hpp"

using namespace altbd;
using namespace altbd::cli;

namespace {

struct Table {
  std::vector<std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table parse(const std::string& text) {
  Table t;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("# ", 0) == 0) {
      t.meta.push_back(line);
    } else if (t.header.empty()) {
      t.header = split(line);
    } else {
      std::vector<double> row;
      for (const auto& c : split(line)) row.push_back(std::stod(c));
      t.rows.push_back(row);
    }
  }
  return t;
}

RunConfig config(double lam, double mu, const std::string& grid) {
  RunConfig c;
  c.lambda = lam;
  c.mu = mu;
  c.time_spec = grid;
  c.times = parse_time_grid(grid);
  return c;
}

}  // namespace

TEST(TimeGrid, Inclusive) {
  const auto g = parse_time_grid("0:5:101");
  ASSERT_EQ(g.size(), 101u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 5.0);
  EXPECT_NEAR(g[1], 0.05, 1e-15);
  EXPECT_EQ(parse_time_grid("2:2:1"), std::vector<double>{2.0});
}

TEST(TimeGrid, Rejects) {
  for (const char* bad : {"", "1:2", "a:2:3", "0:1:0", "1:0:3", "-1:2:3", "0:1:2x", "1:2:1"})
    EXPECT_THROW(parse_time_grid(bad), UsageError) << bad;
}

TEST(Csv, RoundTripAndLocale) {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-300, 12345.678901234567})
    EXPECT_EQ(std::stod(csv::format(v)), v);
  EXPECT_EQ(csv::format(0.5), "0.5");
  EXPECT_EQ(csv::format(State{-3}), "-3");
}

TEST(Csv, RowWidthChecked) {
  std::ostringstream out;
  csv::Writer w(out);
  w.header({"a", "b"});
  EXPECT_THROW(w.row(1.0), DomainError);
}

TEST(CmdProb, RowsInUnitInterval) {
  auto c = config(1.0, 2.0, "0:5:101");
  c.from = -2;
  c.to = 1;
  std::ostringstream out;
  cmd_prob(c, out);
  const auto t = parse(out.str());
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "p"}));
  ASSERT_EQ(t.rows.size(), 101u);
  EXPECT_EQ(t.rows[0][1], 0.0);
  for (const auto& r : t.rows) {
    EXPECT_GE(r[1], 0.0);
    EXPECT_LE(r[1], 1.0);
  }
  EXPECT_FALSE(t.meta.empty());
}

TEST(CmdProb, TransposeWithSwappedRates) {
  auto a = config(1.0, 2.0, "0:5:51");
  a.from = -2;
  a.to = 1;
  auto b = config(2.0, 1.0, "0:5:51");
  b.from = 1;
  b.to = -2;
  std::ostringstream oa, ob;
  cmd_prob(a, oa);
  cmd_prob(b, ob);
  const auto ta = parse(oa.str());
  const auto tb = parse(ob.str());
  ASSERT_EQ(ta.rows.size(), tb.rows.size());
  for (std::size_t i = 0; i < ta.rows.size(); ++i) EXPECT_NEAR(ta.rows[i][1], tb.rows[i][1], 1e-12);
}

TEST(CmdPgf, TotalAtOne) {
  auto c = config(1.0, 2.0, "0:3:4");
  c.from = 1;
  c.z = 1.0;
  std::ostringstream out;
  cmd_pgf(c, out);
  for (const auto& r : parse(out.str()).rows) EXPECT_NEAR(r[3], 1.0, 1e-13);
}

TEST(CmdMoments, Bilateral) {
  auto c = config(1.0, 2.0, "0:4:5");
  c.from = 3;
  std::ostringstream out;
  cmd_moments(c, out);
  const auto t = parse(out.str());
  for (const auto& r : t.rows) EXPECT_EQ(r[1], 3.0);
  EXPECT_EQ(t.rows[0][2], 0.0);
}

TEST(CmdMoments, ReflectedMatchesOracle) {
  auto c = config(1.0, 2.0, "0.5:2:4");
  c.process = ChainKind::reflected;
  c.from = 1;
  std::ostringstream out;
  cmd_moments(c, out);
  for (const auto& r : parse(out.str()).rows) {
    const auto d = transient_distribution(ChainKind::reflected, c.rates(), 1, r[0]);
    EXPECT_NEAR(r[1], d.mean(), 1e-6);
    EXPECT_NEAR(r[2], d.variance(), 1e-6);
  }
  c.from = 2;
  EXPECT_THROW(cmd_moments(c, out), UsageError);
}

TEST(CmdReflect, MethodsAgree) {
  std::vector<std::vector<double>> cols;
  for (const char* m : {"series", "integral", "laplace", "oracle"}) {
    auto c = config(1.0, 2.0, "0:5:11");
    c.from = 1;
    c.method = m;
    std::ostringstream out;
    cmd_reflect(c, out);
    std::vector<double> col;
    for (const auto& r : parse(out.str()).rows) col.push_back(r[1]);
    cols.push_back(col);
  }
  for (std::size_t i = 0; i < cols[0].size(); ++i)
    for (std::size_t m = 1; m < cols.size(); ++m) EXPECT_NEAR(cols[0][i], cols[m][i], 1e-6);
}

TEST(CmdReflect, Q00StartsAtOneAndOrdering) {
  auto c = config(2.0, 2.0, "0:1:3");
  c.from = 0;
  std::ostringstream out;
  cmd_reflect(c, out);
  EXPECT_EQ(parse(out.str()).rows[0][1], 1.0);

  std::vector<std::vector<double>> curves;
  for (auto [lam, mu] : {std::pair{1.0, 2.0}, std::pair{2.0, 2.0}, std::pair{2.0, 1.0}}) {
    auto q = config(lam, mu, "0.1:5:50");
    q.from = 1;
    std::ostringstream o;
    cmd_reflect(q, o);
    std::vector<double> col;
    for (const auto& r : parse(o.str()).rows) col.push_back(r[1]);
    curves.push_back(col);
  }
  for (std::size_t i = 0; i < curves[0].size(); ++i) {
    EXPECT_GE(curves[0][i], curves[1][i]);
    EXPECT_GE(curves[1][i], curves[2][i]);
  }
}

TEST(CmdReflect, BadCombinations) {
  auto c = config(1.0, 2.0, "0:1:2");
  std::ostringstream out;
  c.method = "series";
  c.to = 2;
  EXPECT_THROW(cmd_reflect(c, out), UsageError);
  c.to = 0;
  c.method = "laplace";
  c.from = 0;
  EXPECT_THROW(cmd_reflect(c, out), UsageError);
  c.method = "magic";
  EXPECT_THROW(cmd_reflect(c, out), UsageError);
}

TEST(CmdSimulate, SumsToOneAndReproducible) {
  auto c = config(1.0, 2.0, "0:2:3");
  c.from = 0;
  c.paths = 20'000;
  c.seed = 5;
  std::ostringstream a, b;
  cmd_simulate(c, a);
  cmd_simulate(c, b);
  EXPECT_EQ(a.str(), b.str());
  const auto t = parse(a.str());
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "state", "empirical_p", "std_err"}));
  std::map<double, double> mass;
  for (const auto& r : t.rows) mass[r[0]] += r[2];
  EXPECT_EQ(mass.size(), 3u);
  for (const auto& [time, m] : mass) EXPECT_NEAR(m, 1.0, 1e-12);
  for (const auto& r : t.rows) {
    if (r[0] == 0.0 || r[2] <= 1e-3) continue;
    const double p = transition_prob({0, static_cast<State>(r[1]), r[0]}, c.rates());
    EXPECT_LE(std::abs(r[2] - p), 4.0 * r[3]);
  }
}

TEST(CmdVerify, DefaultPassesAndMutationFails) {
  RunConfig c;
  std::ostringstream out, err;
  EXPECT_TRUE(cmd_verify(c, out, err)) << err.str();
  EXPECT_NE(out.str().find("\ncheck,max_residual,tolerance,status\n"), std::string::npos);
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
  EXPECT_NE(out.str().find("psi_product"), std::string::npos);

  c.mutate_offset = 1;
  std::ostringstream out2, err2;
  EXPECT_FALSE(cmd_verify(c, out2, err2));
  EXPECT_NE(out2.str().find("FAIL"), std::string::npos);
}
