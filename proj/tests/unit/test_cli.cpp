#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace vqnac::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "vqnac_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_config(const fs::path& dir, const nlohmann::json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p.string();
}

std::string fixture(const std::string& name) { return std::string(VQNAC_FIXTURE_DIR) + "/" + name; }

int run(const std::vector<std::string>& args) { return cli_main(args); }

nlohmann::json manifest(const fs::path& out) {
  std::ifstream in(out / "manifest.json");
  return nlohmann::json::parse(in);
}

nlohmann::json rotor_scan() {
  return {{"family", "builtin:rotor"},
          {"ansatz", {{"kind", "ry_cnot"}, {"depth", 0}}},
          {"ssvqe", {{"weights", {1.0, 0.5}}, {"references", {"0", "1"}}}},
          {"grid", {{"param", 0}, {"values", {0.0, 0.5}}}},
          {"quantities", {"one_nac", "dboc"}}};
}

}  // namespace

TEST(Cli, ShotCostWritesCsvAndManifest) {
  const fs::path dir = scratch("shot");
  const nlohmann::json cfg = {{"base", {{"N_x", 2}, {"dH_norm", {1.0, 1.0}}, {"A", {1.0, 1.0}}}},
                              {"sweep", {{"dimension", "epsilon"}, {"values", {1e-2, 5e-3}}}}};
  const fs::path out = dir / "out";
  EXPECT_EQ(run({"shot-cost", "--config", write_config(dir, cfg), "--out", out.string()}), kExitOk);
  const auto m = manifest(out);
  EXPECT_EQ(m["exit_code"], 0);
  EXPECT_EQ(m["command"], "shot-cost");
  ASSERT_EQ(m["outputs"].size(), 1u);
  EXPECT_EQ(m["outputs"][0]["path"], "shot_cost.csv");
  EXPECT_GT(m["outputs"][0]["bytes"].get<int>(), 0);
  std::ifstream csv(out / "shot_cost.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("dimension,value,one_nac_analytic", 0), 0u);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path dir = scratch("bad");
  EXPECT_EQ(run({"shot-cost", "--config", (dir / "missing.json").string(), "--out", (dir / "o").string()}),
            kExitConfig);
  nlohmann::json cfg = rotor_scan();
  cfg["typo_key"] = 1;
  EXPECT_EQ(run({"nac-scan", "--config", write_config(dir, cfg), "--out", (dir / "o").string()}), kExitConfig);
  cfg = rotor_scan();
  cfg["family"] = "no_such_family.json";
  EXPECT_EQ(run({"nac-scan", "--config", write_config(dir, cfg), "--out", (dir / "o").string()}), kExitConfig);
  cfg = rotor_scan();
  cfg["ansatz"]["kind"] = "so4";
  EXPECT_EQ(run({"nac-scan", "--config", write_config(dir, cfg), "--out", (dir / "o").string()}), kExitConfig);
  EXPECT_EQ(run({"nac-scan", "--config", write_config(dir, rotor_scan()), "--mode", "noisy"}), kExitConfig);
  EXPECT_EQ(run({"nac-scan"}), kExitConfig);
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(run({"fssh", "--config", (dir / "broken.json").string(), "--out", (dir / "o").string()}), kExitConfig);
}

TEST(Cli, NacScanRotor) {
  const fs::path dir = scratch("rotor");
  const fs::path out = dir / "out";
  EXPECT_EQ(run({"nac-scan", "--config", write_config(dir, rotor_scan()), "--out", out.string()}), kExitOk);
  std::ifstream csv(out / "nac_scan.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "R,k,l,I,re,im,gap,mode,seed,quantity,oracle_re,oracle_im");
  int one = 0;
  while (std::getline(csv, line)) {
    if (line.find("one_nac") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    EXPECT_NEAR(std::abs(std::stod(f[4])), 0.5, 1e-6);
    ++one;
  }
  EXPECT_EQ(one, 2);
  const auto m = manifest(out);
  std::vector<std::string> files;
  for (const auto& o : m["outputs"]) files.push_back(o["path"]);
  EXPECT_NE(std::find(files.begin(), files.end(), "nac_scan.csv"), files.end());
  EXPECT_NE(std::find(files.begin(), files.end(), "energies.csv"), files.end());
}

TEST(Cli, UnconvergedNeedsFlag) {
  const fs::path dir = scratch("unconv");
  nlohmann::json cfg = rotor_scan();
  cfg["ssvqe"]["max_iter"] = 1;
  cfg["ssvqe"]["restarts"] = 1;
  cfg["grid"]["values"] = {0.37};
  const std::string path = write_config(dir, cfg);
  EXPECT_EQ(run({"nac-scan", "--config", path, "--out", (dir / "a").string()}), kExitNumerical);
  EXPECT_EQ(run({"nac-scan", "--config", path, "--out", (dir / "b").string(), "--allow-unconverged"}), kExitOk);
  const auto m = manifest(dir / "b");
  EXPECT_FALSE(m["warnings"].empty());
  EXPECT_TRUE(m["allow_unconverged"].get<bool>());
}

TEST(Cli, SeedOverrideAndShotMode) {
  const fs::path dir = scratch("seed");
  const std::string path = write_config(dir, rotor_scan());
  auto read = [](const fs::path& p) {
    std::ifstream in(p / "nac_scan.csv");
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const char* sub : {"a", "b"}) {
    EXPECT_EQ(run({"nac-scan", "--config", path, "--out", (dir / sub).string(), "--mode", "shots", "--shots", "2000",
                   "--seed", "99"}),
              kExitOk);
  }
  EXPECT_EQ(read(dir / "a"), read(dir / "b"));
  EXPECT_EQ(manifest(dir / "a")["seed"], 99);
  EXPECT_EQ(manifest(dir / "a")["shots"], 2000);
  EXPECT_EQ(run({"nac-scan", "--config", path, "--out", (dir / "c").string(), "--mode", "shots", "--seed", "100"}),
            kExitOk);
  EXPECT_NE(read(dir / "a"), read(dir / "c"));
}

TEST(Cli, FsshZeroCoupling) {
  const fs::path dir = scratch("fssh");
  const nlohmann::json cfg = {{"surface", fixture("harmonic_uncoupled.csv")},
                              {"R0", "minimum"},
                              {"kinetic_energy", "zero_point"},
                              {"active", 0},
                              {"dt_fs", 0.1},
                              {"t_max_fs", 20.0},
                              {"trajectories", 3},
                              {"write_trajectories", 2}};
  const fs::path out = dir / "out";
  EXPECT_EQ(run({"fssh", "--config", write_config(dir, cfg), "--out", out.string()}), kExitOk);
  EXPECT_TRUE(fs::exists(out / "trajectory_0000.csv"));
  EXPECT_TRUE(fs::exists(out / "trajectory_0001.csv"));
  EXPECT_FALSE(fs::exists(out / "trajectory_0002.csv"));
  const auto m = manifest(out);
  EXPECT_EQ(m["outputs"].size(), 4u);
  for (const auto& o : m["outputs"]) EXPECT_TRUE(fs::exists(out / o["path"].get<std::string>()));
}

TEST(Cli, FsshNumericalFailureExitsThree) {
  const fs::path dir = scratch("fssh_fail");
  const nlohmann::json cfg = {{"surface", fixture("crossing.csv")}, {"R0", -8.0},         {"kinetic_energy", 0.05},
                              {"dt_fs", 2.0},                      {"energy_tol", 1e-9}, {"velocity_sign", 1}};
  EXPECT_EQ(run({"fssh", "--config", write_config(dir, cfg), "--out", (dir / "o").string()}), kExitNumerical);
  EXPECT_EQ(manifest(dir / "o")["exit_code"], 3);
}

TEST(Cli, BerrySweepSingleDelta) {
  const fs::path dir = scratch("berry");
  const nlohmann::json cfg = {{"deltas", {1.0}},
                              {"K", 40},
                              {"methods", {"fukui_hatsugai"}},
                              {"ansatz", {{"kind", "a_gate"}}},
                              {"ssvqe", {{"weights", {1.0}}, {"references", {"01"}}}}};
  const fs::path out = dir / "out";
  EXPECT_EQ(run({"berry-sweep", "--config", write_config(dir, cfg), "--out", out.string()}), kExitOk);
  std::ifstream csv(out / "berry_sweep.csv");
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(header.rfind("Delta,K,method,Pi_C", 0), 0u);
  EXPECT_NE(row.find("fukui_hatsugai"), std::string::npos);
}
