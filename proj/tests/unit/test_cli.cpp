#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include <gwfo/classes.hpp>
#include <gwfo/tree.hpp>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun gwfo_cli(const std::string& args) {
  const std::string cmd = std::string(GWFO_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (const auto n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gwfo_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

template <typename... Parts>
std::string fmt_args(const Parts&... parts) {
  std::ostringstream out;
  ((out << parts), ...);
  return out.str();
}

}  // namespace

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(gwfo_cli("").status, 1);
  EXPECT_EQ(gwfo_cli("nosuch").status, 1);
  EXPECT_EQ(gwfo_cli("survival").status, 1);
  EXPECT_EQ(gwfo_cli("survival --lambda -1").status, 1);
  EXPECT_EQ(gwfo_cli("classify --k 1 --depth 1 --tree '(('").status, 1);
  EXPECT_EQ(gwfo_cli("prob --class '{1:*}' --lambda 2").status, 1);
  EXPECT_EQ(gwfo_cli("mc classes --format xml --trials 10").status, 1);
  EXPECT_EQ(gwfo_cli("--help").status, 0);
}

TEST(Cli, Survival) {
  const auto r = gwfo_cli("survival --lambda 2");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["p"].get<double>(), 0.79681213002002004616, 1e-14);
  EXPECT_NEAR(j["q"].get<double>() + j["p"].get<double>(), 1.0, 1e-15);
}

TEST(Cli, SimulateAndClassify) {
  const auto tree = scratch("t.txt");
  const auto trace = scratch("t.json");
  ASSERT_EQ(gwfo_cli(fmt_args("simulate --lambda 1.5 --seed 3 --budget 200 --out ", tree.string(), " --trace ", trace.string())).status,
            0);
  std::stringstream text;
  text << std::ifstream(tree).rdbuf();
  const auto t = gwfo::parse_tree(text.str());
  const auto j = nlohmann::json::parse(std::ifstream(trace));
  EXPECT_EQ(j["nodes"].get<std::size_t>(), t.size());
  EXPECT_EQ(j["draws"].size(), t.size());
  const auto c = gwfo_cli("classify --k 2 --depth 2 --tree " + tree.string());
  ASSERT_EQ(c.status, 0);
  EXPECT_EQ(gwfo::parse_class_file(c.out), gwfo::classify(t, 2, 2));
}

TEST(Cli, ForestLines) {
  const auto r = gwfo_cli("simulate --probs 0.5,0.5 --forest --nodes 20 --seed 1");
  ASSERT_EQ(r.status, 0);
  std::size_t nodes = 0;
  for (const auto& t : gwfo::parse_trees(r.out)) nodes += t.size();
  EXPECT_EQ(nodes, 20u);
}

TEST(Cli, ProbFromClassFile) {
  const auto file = scratch("c.txt");
  write(file, "k=1 depth=1\n{}\n");
  const auto r = gwfo_cli("prob --class " + file.string() + " --lambda 2 --conditional finite");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["probability"].get<double>(), 0.66605985509837393807, 1e-12);
  EXPECT_EQ(gwfo_cli("prob --class " + file.string() + " --k 2 --lambda 2").status, 1);
  EXPECT_EQ(gwfo_cli("prob --class " + file.string() + " --lambda 0.5 --conditional finite").status, 1);
  EXPECT_EQ(gwfo_cli("prob --class " + file.string() + " --lambda 0.5 --conditional finite --subcritical").status, 0);
}

TEST(Cli, ExprText) {
  const auto r = gwfo_cli("expr --class '{}' --k 1 --depth 1");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "exp(-1*x)\n");
}

TEST(Cli, EfAndFo) {
  auto winner = [](const CliRun& r) { return nlohmann::json::parse(r.out)["winner"].get<std::string>(); };
  EXPECT_EQ(winner(gwfo_cli("ef --k 1 '(())' '((()))'")), "spoiler");
  EXPECT_EQ(winner(gwfo_cli("ef --k 4 '(()()()())' '(()()()()()()())'")), "duplicator");
  EXPECT_EQ(winner(gwfo_cli("ef --k 1 --ball --M 4 '((*))' '(*())'")), "spoiler");
  EXPECT_EQ(winner(gwfo_cli("ef --k 1 --ball --M 4 --center1 1 --center2 0 '(())' '(())'")), "spoiler");
  const auto f = nlohmann::json::parse(gwfo_cli("fo eval --formula 'exists u. parent(R,u)' --tree '(())'").out);
  EXPECT_EQ(f["value"], true);
  EXPECT_EQ(f["depth"], 1);
  const auto d = nlohmann::json::parse(
      gwfo_cli("fo eval --dialect ball --M 2 --formula 'exists u. d(R,u)=2' --tree '((*))'").out);
  EXPECT_EQ(d["value"], false);
  EXPECT_EQ(gwfo_cli("fo depth --formula 'exists u. d(R,u)=2'").status, 1);
}

TEST(Cli, SentenceProb) {
  const auto r = gwfo_cli("sentence-prob --formula 'forall u. !parent(R,u)' --depth 1 --lambda 2");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["value"].get<double>(), 0.1353352832366127, 1e-15);
}

TEST(Cli, McReproducibleBytes) {
  const auto a = gwfo_cli("mc classes --lambda 2 --k 2 --depth 1 --trials 3000 --seed 9 --format csv");
  const auto b = gwfo_cli("mc classes --lambda 2 --k 2 --depth 1 --trials 3000 --seed 9 --format csv");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const auto out = scratch("mc.json");
  ASSERT_EQ(gwfo_cli("mc classes --lambda 2 --k 2 --depth 1 --trials 3000 --seed 9 --out " + out.string()).status, 0);
  const auto j = nlohmann::json::parse(std::ifstream(out));
  EXPECT_EQ(j["rows"].size(), 3u);
}

TEST(Cli, ValidationFailureExitsTwo) {
  const auto dir = scratch("catalog");
  fs::create_directories(dir);
  write(dir / "a.txt", "(*)");
  const auto single = scratch("single.txt");
  write(single, "()");
  EXPECT_EQ(gwfo_cli("christmas --k 1 --catalog " + dir.string() + " --check " + single.string()).status, 2);
}

TEST(Cli, ChristmasBuildReportsCenters) {
  const auto dir = scratch("catalog2");
  fs::create_directories(dir);
  std::string path = "(*)";
  for (int i = 0; i < 8; ++i) path = "(" + path + ")";
  write(dir / "a.txt", path);
  const auto out = scratch("xmas.txt");
  const auto r = gwfo_cli("christmas --k 1 --catalog " + dir.string() + " --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["root_center_distance"][0], 252);
  EXPECT_EQ(j["point1"]["ok"], true);
  std::stringstream text;
  text << std::ifstream(out).rdbuf();
  const auto t = gwfo::parse_tree(text.str());
  const auto center = gwfo::NodeId{j["centers"][0][0].get<std::uint32_t>()};
  EXPECT_EQ(t.depth(center), 252u);
  EXPECT_EQ(gwfo_cli("christmas --k 1 --catalog " + dir.string() + " --check " + out.string()).status, 0);
}
