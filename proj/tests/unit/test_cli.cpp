// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "citeneed/cli/cli.hpp"
#include "citeneed/corpus/corpus_io.hpp"

using namespace citeneed;
using namespace citeneed::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kData = fs::path(CITENEED_SOURCE_DIR) / "data" / "fixtures";

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("citeneed-test-cli-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

// Restores CITENEED_SEED on scope exit.
struct SeedEnv {
  std::optional<std::string> saved;
  SeedEnv() {
    if (const char* v = std::getenv("CITENEED_SEED")) saved = v;
  }
  ~SeedEnv() {
    if (saved) ::setenv("CITENEED_SEED", saved->c_str(), 1);
    else ::unsetenv("CITENEED_SEED");
  }
};

std::string fixture_config(const fs::path& dir) {
  return "[pipeline]\nout = \"" + (dir / "out").string() + "\"\nseed = 7\n\n[corpus]\narticles = \"" +
         (kData / "articles.jsonl").string() +
         "\"\nn_pos = 20\nn_neg = 20\n\n[train]\nepochs = 2\nbatch = 10\nhidden = 6\nembed_dim = 6\nmax_len = "
         "20\n\n[report]\nlimit = 4\nlexicons = \"" +
         (fs::path(CITENEED_SOURCE_DIR) / "resources" / "lexicons").string() + "\"\n";
}

}  // namespace

TEST_CASE("help and usage errors") {
  const auto help = run({"--help"});
  CHECK(help.code == kExitOk);
  for (const char* sub : {"build-corpus", "train", "evaluate", "cross-eval", "predict", "explain", "reason-train",
                          "reason-eval", "correlate", "cluster-reasons", "distribution", "baseline", "run"}) {
    CHECK(help.out.find(sub) != std::string::npos);
  }
  CHECK(run({"train", "--help"}).code == kExitOk);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"--bogus"}).code == kExitUsage);
  CHECK(run({"train", "--bogus"}).code == kExitUsage);
  CHECK(run({"train", "--corpus", "x.jsonl"}).code == kExitUsage);
  CHECK(run({"train", "--corpus", "x.jsonl", "--variant", "lstm", "--checkpoint", "m.ckpt"}).code == kExitUsage);
}

TEST_CASE("missing input is a data error naming the path") {
  const auto r = run({"train", "--corpus", "/does/not/exist.jsonl", "--variant", "rnn", "--checkpoint",
                      (scratch("missing") / "m.ckpt").string()});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("/does/not/exist.jsonl") != std::string::npos);

  const auto e = run({"evaluate", "--checkpoint", "/does/not/model.ckpt", "--corpus", "/x.jsonl"});
  CHECK(e.code == kExitData);
  CHECK(e.err.find("/does/not/model.ckpt") != std::string::npos);
}

TEST_CASE("seed resolution") {
  SeedEnv guard;
  ::unsetenv("CITENEED_SEED");
  CHECK(resolve_seed(std::nullopt) == 1729);
  CHECK(resolve_seed(5) == 5);
  ::setenv("CITENEED_SEED", "42", 1);
  CHECK(resolve_seed(std::nullopt) == 42);
  CHECK(resolve_seed(5) == 5);
  ::setenv("CITENEED_SEED", "forty-two", 1);
  CHECK_THROWS_AS(resolve_seed(std::nullopt), UsageError);

  const fs::path dir = scratch("seed");
  const auto r = run({"build-corpus", "FA", "--articles", (kData / "articles.jsonl").string(), "--out",
                      (dir / "c.jsonl").string(), "--n-pos", "5", "--n-neg", "5"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("CITENEED_SEED") != std::string::npos);
}

TEST_CASE("corpus builders are byte-identical under a fixed seed") {
  SeedEnv guard;
  ::unsetenv("CITENEED_SEED");
  const fs::path dir = scratch("build");
  const std::string articles = (kData / "articles.jsonl").string();
  for (const std::string kind : {"FA", "LQN", "RND"}) {
    std::vector<std::string> sizes = kind == "RND" ? std::vector<std::string>{"--n-total", "40"}
                                                   : std::vector<std::string>{"--n-pos", "8", "--n-neg", "8"};
    auto args = [&](const std::string& out, const std::string& seed) {
      std::vector<std::string> a{"build-corpus", kind, "--articles", articles, "--out", out, "--seed", seed};
      a.insert(a.end(), sizes.begin(), sizes.end());
      return a;
    };
    const auto a = (dir / (kind + "-a.jsonl")).string();
    const auto b = (dir / (kind + "-b.jsonl")).string();
    const auto c = (dir / (kind + "-c.jsonl")).string();
    REQUIRE(run(args(a, "3")).code == kExitOk);
    REQUIRE(run(args(b, "3")).code == kExitOk);
    REQUIRE(run(args(c, "4")).code == kExitOk);
    CHECK(corpus::read_file(a) == corpus::read_file(b));
    CHECK(corpus::read_file(a) != corpus::read_file(c));
  }
  const auto too_many = run({"build-corpus", "LQN", "--articles", articles, "--out", (dir / "x.jsonl").string(),
                             "--n-pos", "500", "--n-neg", "5"});
  CHECK(too_many.code == kExitData);
  CHECK(too_many.err.find("available") != std::string::npos);
}

TEST_CASE("pipeline config rejects unknown keys") {
  const fs::path dir = scratch("badkeys");
  write(dir / "bad.toml", fixture_config(dir) + "epoch = 3\n\n[extras]\ncolour = \"red\"\n");
  const auto r = run({"run", "--config", (dir / "bad.toml").string()});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("report.epoch") != std::string::npos);
  CHECK(r.err.find("extras.colour") != std::string::npos);

  write(dir / "typed.toml", fixture_config(dir) + "explain = \"sometimes\"\n");
  const auto t = run({"run", "--config", (dir / "typed.toml").string()});
  CHECK(t.code == kExitData);
  CHECK(t.err.find("report.explain") != std::string::npos);

  CHECK(run({"run", "--config", (dir / "absent.toml").string()}).code == kExitData);
}

TEST_CASE("pipeline caches stages and reruns them on --force") {
  SeedEnv guard;
  ::unsetenv("CITENEED_SEED");
  const fs::path dir = scratch("pipeline");
  write(dir / "p.toml", fixture_config(dir));
  const std::string config = (dir / "p.toml").string();

  const auto first = run({"run", "--config", config});
  REQUIRE(first.code == kExitOk);
  CHECK(count(first.out, ": ran -> ") == 5);
  CHECK(count(first.out, ": cached -> ") == 0);

  std::string model;
  for (const auto& e : fs::directory_iterator(dir / "out")) {
    if (e.path().extension() == ".ckpt") model = e.path().string();
  }
  REQUIRE(!model.empty());
  const std::string model_bytes = corpus::read_file(model);

  const auto second = run({"run", "--config", config});
  REQUIRE(second.code == kExitOk);
  CHECK(count(second.out, ": cached -> ") == 5);

  // A training override keeps the corpus but retrains downstream.
  const auto changed = run({"run", "--config", config, "--epochs", "3"});
  REQUIRE(changed.code == kExitOk);
  CHECK(changed.out.find("build: cached") != std::string::npos);
  CHECK(changed.out.find("train: ran") != std::string::npos);
  CHECK(changed.out.find("correlate: cached") != std::string::npos);

  const auto forced = run({"run", "--config", config, "--force"});
  REQUIRE(forced.code == kExitOk);
  CHECK(count(forced.out, ": ran -> ") == 5);
  CHECK(corpus::read_file(model) == model_bytes);
  CHECK(fs::exists(dir / "out" / "pipeline.json"));
}

TEST_CASE("train writes identical checkpoints for identical invocations") {
  SeedEnv guard;
  ::unsetenv("CITENEED_SEED");
  const fs::path dir = scratch("train");
  REQUIRE(run({"build-corpus", "FA", "--articles", (kData / "articles.jsonl").string(), "--out",
               (dir / "c.jsonl").string(), "--n-pos", "15", "--n-neg", "15"})
              .code == kExitOk);
  auto train = [&](const std::string& name) {
    return run({"train", "--corpus", (dir / "c.jsonl").string(), "--variant", "rnn-a-s", "--checkpoint",
                (dir / name).string(), "--epochs", "2", "--batch", "5", "--hidden", "5", "--embed-dim", "4",
                "--max-len", "16", "--embeddings", (kData / "embeddings.txt").string()})
        .code;
  };
  // The fixture vectors are 8-wide; --embed-dim must agree with them.
  CHECK(train("a.ckpt") == kExitUsage);
  auto train8 = [&](const std::string& name) {
    return run({"train", "--corpus", (dir / "c.jsonl").string(), "--variant", "rnn-a-s", "--checkpoint",
                (dir / name).string(), "--epochs", "2", "--batch", "5", "--hidden", "5", "--max-len", "16",
                "--embeddings", (kData / "embeddings.txt").string()})
        .code;
  };
  REQUIRE(train8("a.ckpt") == kExitOk);
  REQUIRE(train8("b.ckpt") == kExitOk);
  CHECK(corpus::read_file(dir / "a.ckpt") == corpus::read_file(dir / "b.ckpt"));

  const auto pred = run({"predict", "--checkpoint", (dir / "a.ckpt").string(), "--corpus",
                         (dir / "c.jsonl").string()});
  CHECK(pred.code == kExitOk);
  CHECK(pred.out.rfind("article_id,section,text,probability\n", 0) == 0);
}
