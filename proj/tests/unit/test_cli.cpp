// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

fs::path workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "semstyle_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

Run cli(const std::string& args) {
  const auto dir = workdir();
  const std::string cmd = "cd '" + dir.string() + "' && '" SEMSTYLE_CLI "' " + args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(dir / "stdout.txt");
  r.err = slurp(dir / "stderr.txt");
  return r;
}

// Six scenes as caption records with 4-value features plus matching styled text.
void write_toy_inputs() {
  static bool done = false;
  if (done) return;
  done = true;
  const char* scenes[][3] = {{"dog", "runs", "park"},    {"cat", "sits", "room"},   {"man", "walks", "street"},
                             {"woman", "stands", "beach"}, {"boy", "plays", "field"}, {"girl", "waits", "road"}};
  std::ostringstream caps, styled;
  for (int rep = 0; rep < 3; ++rep) {
    for (int i = 0; i < 6; ++i) {
      caps << "{\"image_id\": \"" << rep * 6 + i << "\", \"feature\": [" << 0.1 * i << ", " << -0.2 * rep << ", "
           << 0.3 << ", " << 0.05 * (i + rep) << "], \"captions\": [\"A " << scenes[i][0] << ' ' << scenes[i][1]
           << " in the " << scenes[i][2] << ".\"]}\n";
      styled << "Then the " << scenes[i][0] << " walked slowly toward the " << scenes[i][2] << " again.\n";
    }
  }
  put(workdir() / "caps.jsonl", caps.str());
  put(workdir() / "styled.txt", styled.str());
  put(workdir() / "sents.txt", "The dog bounded through the fresh grass.\nThe man sat on the bench.\n");
}

const std::string kSmall =
    " --embed-dim 6 --hidden-dim 6 --batch-size 4 --epochs 2 --validation-fraction 0 --feature-dim 4";

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  auto r = cli("terms --in x.txt --bogus");
  CHECK(r.code == 1);
  CHECK(r.err.find("--bogus") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(cli("caption --model m.ckpt --style sarcastic").code == 1);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("every subcommand has help listing all of its flags") {
  for (const auto& cmd : semstyle::cli::commands()) {
    CAPTURE(cmd.name);
    auto r = cli(cmd.name + " --help");
    CHECK(r.code == 0);
    semstyle::cli::Common common;
    auto app = semstyle::cli::make_app(cmd, common);
    for (const CLI::Option* opt : app->get_options()) {
      for (const auto& n : opt->get_lnames()) CHECK(r.out.find("--" + n) != std::string::npos);
      for (const auto& n : opt->get_snames()) CHECK(r.out.find("-" + n) != std::string::npos);
    }
    CHECK(r.out.find("--seed") != std::string::npos);
    CHECK(r.out.find("--config") != std::string::npos);
  }
}

TEST_CASE("terms writes one sequence per line") {
  write_toy_inputs();
  auto r = cli("terms --in sents.txt --out terms.txt");
  CHECK(r.code == 0);
  CHECK(slurp(workdir() / "terms.txt") ==
        "dog_NOUN Self_motion_FRAME grass_NOUN\nman_NOUN Placing_FRAME bench_NOUN\n");
  CHECK(cli("terms --in missing.txt").code == 2);
  CHECK(cli("terms --in sents.txt --lexicon missing.lex").code == 2);
}

TEST_CASE("training is reproducible and reports epochs as tab-separated rows") {
  write_toy_inputs();
  auto a = cli("train-termgen --captions caps.jsonl --out a.ckpt --seed 4" + kSmall);
  auto b = cli("train-termgen --captions caps.jsonl --out b.ckpt --seed 4" + kSmall);
  auto c = cli("train-termgen --captions caps.jsonl --out c.ckpt --seed 5" + kSmall);
  REQUIRE(a.code == 0);
  CHECK(a.out.rfind("epoch\ttrain_loss\tvalidation_loss\tsteps\n1\t", 0) == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(workdir() / "a.ckpt") == slurp(workdir() / "b.ckpt"));
  CHECK(slurp(workdir() / "a.ckpt") != slurp(workdir() / "c.ckpt"));

  auto d = cli("termgen-decode --model a.ckpt --features caps.jsonl --max-len 3 --out d1.txt");
  auto e = cli("termgen-decode --model b.ckpt --features caps.jsonl --max-len 3 --out d2.txt");
  CHECK(d.code == 0);
  CHECK(e.code == 0);
  CHECK(slurp(workdir() / "d1.txt") == slurp(workdir() / "d2.txt"));
}

TEST_CASE("config file values sit between defaults and flags") {
  write_toy_inputs();
  put(workdir() / "cfg.json", "{\"epochs\": 3, \"learning_rate\": 0.02}");
  auto from_config = cli("train-termgen --captions caps.jsonl --out k1.ckpt --config cfg.json" + std::string(
                             " --embed-dim 6 --hidden-dim 6 --batch-size 4 --validation-fraction 0 --feature-dim 4"));
  REQUIRE(from_config.code == 0);
  CHECK(from_config.out.find("\n3\t") != std::string::npos);
  auto flag_wins = cli("train-termgen --captions caps.jsonl --out k2.ckpt --config cfg.json" + kSmall);
  REQUIRE(flag_wins.code == 0);
  CHECK(flag_wins.out.find("\n3\t") == std::string::npos);
  CHECK(flag_wins.out.find("\n2\t") != std::string::npos);

  put(workdir() / "bad.json", "{\"no_such_option\": 1}");
  auto bad = cli("train-termgen --captions caps.jsonl --out k3.ckpt --config bad.json");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("config") != std::string::npos);
}

TEST_CASE("non-finite features exit 3") {
  write_toy_inputs();
  std::ostringstream bytes;
  const float v[4] = {0.5f, std::numeric_limits<float>::quiet_NaN(), 0.1f, 0.2f};
  bytes.write(reinterpret_cast<const char*>(v), sizeof(v));
  put(workdir() / "nan.f32", bytes.str());
  put(workdir() / "nan.jsonl", "{\"image_id\": \"x\", \"feature_file\": \"nan.f32\", \"captions\": [\"a dog runs .\"]}\n");
  auto r = cli("train-termgen --captions nan.jsonl --out nan.ckpt" + kSmall);
  CHECK(r.code == 3);
  CHECK(r.err.find("numeric") != std::string::npos);
}

TEST_CASE("language generator, caption trace and evaluation") {
  write_toy_inputs();
  REQUIRE(cli("preprocess --styled styled.txt --captions caps.jsonl --feature-dim 4 --out pre").code == 0);
  CHECK(fs::exists(workdir() / "pre" / "keep_list.tsv"));
  REQUIRE(cli("train-langgen --descriptive pre/descriptive.txt --styled pre/styled.txt --out lg.ckpt" + kSmall).code ==
          0);
  REQUIRE(cli("terms --in pre/descriptive.txt --out in_terms.txt").code == 0);
  auto cap = cli("caption --model lg.ckpt --terms in_terms.txt --style desc --max-len 5 --trace trace.txt --out gen.txt");
  REQUIRE(cap.code == 0);
  std::istringstream trace(slurp(workdir() / "trace.txt"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(trace, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    double sum = 0, x;
    while (cells >> x) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    ++rows;
  }
  CHECK(rows > 0);

  REQUIRE(cli("train-lm --in pre/styled.txt --out lm.json").code == 0);
  REQUIRE(cli("train-lm --kind gru --in pre/styled.txt --out glm.ckpt" + kSmall).code == 0);
  REQUIRE(cli("train-clf --descriptive pre/descriptive.txt --styled pre/styled.txt --out clf.json --folds 3").code == 0);
  auto ev = cli("evaluate --test pre/styled.txt --model glm.ckpt --lm lm.json --clf clf.json --input-terms in_terms.txt "
                "--references pre/descriptive.txt --report rep.json");
  REQUIRE(ev.code == 0);
  auto report = slurp(workdir() / "rep.json");
  CHECK(report.find("\"sentences\": 18") != std::string::npos);
  CHECK(report.find("\"clf_fraction\": 1.0") != std::string::npos);
  CHECK(report.find("\"lm_bits\"") < report.find("\"grulm_bits\""));

  // A truncated checkpoint names the checkpoint failure and exits 2.
  auto full = slurp(workdir() / "glm.ckpt");
  put(workdir() / "trunc.ckpt", full.substr(0, full.size() - 7));
  auto bad = cli("evaluate --test pre/styled.txt --model trunc.ckpt");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("payload-length-mismatch") != std::string::npos);
  put(workdir() / "magic.ckpt", "XEMSTYLE1" + full.substr(9));
  auto magic = cli("evaluate --test pre/styled.txt --model magic.ckpt");
  CHECK(magic.code == 2);
  CHECK(magic.err.find("bad-magic") != std::string::npos);
}

TEST_CASE("retrieve builds and queries an index") {
  write_toy_inputs();
  auto r = cli("retrieve --index idx --build styled.txt --terms \"dog parks\" -n 2");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("rank\tdoc\tscore\tsentence\n1\t0\t") == 0);
  auto again = cli("retrieve --index idx --terms \"dog parks\" -n 2");
  CHECK(again.out == r.out);
  auto none = cli("retrieve --index idx --terms \"zebra\"");
  CHECK(none.out == "rank\tdoc\tscore\tsentence\n");
  CHECK(cli("retrieve --index missing_idx --terms dog").code == 2);
}

TEST_CASE("build-vocab, possel and gradcheck") {
  write_toy_inputs();
  auto v = cli("build-vocab --in styled.txt --out vocab.txt --cap 10");
  CHECK(v.code == 0);
  CHECK(v.out == "size\t10\n");

  std::ostringstream corpus;
  for (int rep = 0; rep < 3; ++rep)
    for (const char* n : {"dog", "cat", "man", "woman", "boy", "girl"}) corpus << "the big " << n << " runs quickly .\n";
  put(workdir() / "possel.txt", corpus.str());
  const std::string args = "possel --corpus possel.txt --embed-dim 6 --hidden-dim 6 --batch-size 8 "
                           "--epochs 2 --validation-fraction 0 --copies 2";
  auto p1 = cli(args + " --out rank1.txt");
  REQUIRE(p1.code == 0);
  auto p2 = cli(args + " --threads 2 --out rank2.txt");
  REQUIRE(p2.code == 0);
  const auto ranking = slurp(workdir() / "rank1.txt");
  CHECK(ranking == slurp(workdir() / "rank2.txt"));
  CHECK(ranking.find("\nranking\t") != std::string::npos);
  CHECK(p1.err.find("warning: class NUM") != std::string::npos);

  auto g = cli("gradcheck --shapes 5");
  CHECK(g.code == 0);
  std::size_t pass = 0, pos = 0;
  while ((pos = g.out.find("\tpass\n", pos)) != std::string::npos) ++pass, ++pos;
  CHECK(pass == 25);
}
