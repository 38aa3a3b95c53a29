#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "exprbm/dataset.hpp"
#include "exprbm/serialize.hpp"
#include "json.hpp"

#ifndef EXPRBM_CLI_PATH
#error "EXPRBM_CLI_PATH must point at the command line binary"
#endif

namespace {

namespace fs = std::filesystem;

const fs::path kWork = "/tmp/exprbm_cli_test";

int run_cli(const std::string& args) {
  fs::create_directories(kWork);
  std::string cmd = std::string(EXPRBM_CLI_PATH) + " " + args +
                    " >/dev/null 2>/dev/null";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string path_of(const std::string& name) {
  return (kWork / name).string();
}

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("usage errors exit with code two") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("train --no-such-flag 1") == 2);
  CHECK(run_cli("sample") == 2);  // --model is required
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("train --help") == 0);
}

TEST_CASE("bas-gen writes the full pattern set") {
  const std::string out = path_of("bas2.idx");
  CHECK(run_cli("bas-gen --side 2 --count 0 --out " + out) == 0);
  exprbm::Matrix got = exprbm::load_idx(out);
  exprbm::Matrix want = exprbm::bars_and_stripes_patterns(2);
  CHECK(got == want);
}

TEST_CASE("the train, info, sample, eval pipeline holds together") {
  const std::string model = path_of("model.bin");
  const std::string metrics = path_of("metrics.csv");
  CHECK(run_cli("--seed 5 train --bas 2 --bas-count 60 --hidden-units 4 "
                "--epochs 3 --lr 0.05 --out " +
                model + " --metrics " + metrics) == 0);

  exprbm::ExpRbmModel m = exprbm::load_model(model);
  CHECK(m.n_visible() == 4);
  CHECK(m.n_hidden() == 4);
  CHECK(line_count(metrics) == 4);  // header + one line per epoch

  CHECK(run_cli("info --model " + model) == 0);

  const std::string samples = path_of("samples.bin");
  const std::string csv = path_of("samples.csv");
  CHECK(run_cli("--seed 3 sample --model " + model +
                " --n 20 --steps 2 --out " + samples + " --csv " + csv) == 0);
  exprbm::Matrix s = exprbm::load_samples(samples);
  CHECK(s.rows() == 20);
  CHECK(s.cols() == 4);
  CHECK(line_count(csv) == 20);

  const std::string data = path_of("bas2_query.idx");
  CHECK(run_cli("bas-gen --side 2 --count 0 --out " + data) == 0);
  const std::string report = path_of("report.json");
  CHECK(run_cli("eval-isl --data " + data + " --samples " + samples +
                " --beta 0.9 --json " + report) == 0);
  nlohmann::json j;
  {
    std::ifstream in(report);
    REQUIRE(in.good());
    in >> j;
  }
  CHECK(j["beta"].get<double>() == 0.9);
  CHECK(j["n_queries"].get<int>() == 6);
  CHECK(j["n_samples"].get<int>() == 20);
  CHECK(std::isfinite(j["isl"].get<double>()));

  const std::string report2 = path_of("report_opt.json");
  CHECK(run_cli("eval-isl --data " + data + " --samples " + samples +
                " --json " + report2) == 0);
  nlohmann::json j2;
  {
    std::ifstream in(report2);
    in >> j2;
  }
  CHECK(j2["beta"].get<double>() > 0.5);
  CHECK(j2["beta"].get<double>() < 1.0);
}

TEST_CASE("training with one thread is byte reproducible") {
  const std::string a = path_of("repro_a.bin");
  const std::string b = path_of("repro_b.bin");
  const std::string args =
      "--seed 11 --threads 1 train --bas 2 --bas-count 40 --hidden-units 3 "
      "--epochs 2 --lr 0.1 --out ";
  CHECK(run_cli(args + a) == 0);
  CHECK(run_cli(args + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("training accepts idx input") {
  const std::string data = path_of("train_input.idx");
  CHECK(run_cli("bas-gen --side 2 --count 30 --out " + data) == 0);
  const std::string model = path_of("from_idx.bin");
  CHECK(run_cli("--seed 2 train --data " + data +
                " --hidden-units 2 --epochs 1 --out " + model) == 0);
  exprbm::ExpRbmModel m = exprbm::load_model(model);
  CHECK(m.n_visible() == 4);
  CHECK(m.n_hidden() == 2);
}

TEST_CASE("missing inputs exit with code three") {
  CHECK(run_cli("info --model " + path_of("nope.bin")) == 3);
  CHECK(run_cli("eval-isl --data " + path_of("nope.idx") + " --samples " +
                path_of("nope.bin")) == 3);
  CHECK(run_cli("verify-unit --unit not-a-unit") == 3);
}

TEST_CASE("unit verification passes for the whole catalog") {
  CHECK(run_cli("verify-unit --all") == 0);
  CHECK(run_cli("verify-unit --unit softplus") == 0);
}

TEST_CASE("base-measure writes a grid") {
  const std::string out = path_of("base.csv");
  CHECK(run_cli("base-measure --unit linear --points 5 --out " + out) == 0);
  CHECK(line_count(out) == 6);  // header + five grid rows
}

TEST_CASE("filters and hist render from a trained model") {
  const std::string model = path_of("render.bin");
  CHECK(run_cli("--seed 7 train --bas 2 --bas-count 40 --hidden-units 4 "
                "--epochs 1 --out " +
                model) == 0);

  const std::string pgm = path_of("filters.pgm");
  CHECK(run_cli("filters --model " + model + " --shape 2x2 --out " + pgm) ==
        0);
  std::vector<char> img = slurp(pgm);
  REQUIRE(img.size() >= 2);
  CHECK(img[0] == 'P');
  CHECK(img[1] == '5');

  const std::string data = path_of("hist_data.idx");
  CHECK(run_cli("bas-gen --side 2 --count 0 --out " + data) == 0);
  const std::string hist = path_of("hist.csv");
  CHECK(run_cli("hist --model " + model + " --data " + data +
                " --bins 10 --out " + hist) == 0);
  CHECK(line_count(hist) == 11);  // header + one line per bin
}
