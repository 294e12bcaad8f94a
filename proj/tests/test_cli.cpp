#include <doctest.h>
#include <httplib.h>
#include <netinet/in.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tandem/value_io.hpp"

extern char** environ;

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args` through the shell; stderr is discarded unless the
// arguments redirect it.
Run run_cli(const std::string& args) {
  std::string cmd = std::string(TANDEM_BIN) + " " + args;
  if (args.find("2>") == std::string::npos) cmd += " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string model(const char* name) { return std::string(TANDEM_MODELS_DIR) + "/" + name + ".cmod"; }

struct Scratch {
  fs::path dir = fs::temp_directory_path() / "tandem-test-cli";
  Scratch() {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
};

int free_port() {
  const int fd = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  close(fd);
  return ntohs(addr.sin_port);
}

}  // namespace

TEST_CASE("validate") {
  Scratch s;
  CHECK(run_cli("validate " + model("counter") + " " + model("broker-fixed") + " 2>&1").code == 0);
  const auto bad = s.file("bad.cmod", "MACHINE M\nVAR x : BOOL\nINIT x := 3\nEND\n");
  const auto r = run_cli("validate " + bad + " 2>&1");
  CHECK(r.code == 1);
  CHECK(r.out.find("bad.cmod:3:") != std::string::npos);
  const auto m = run_cli("--format machine validate " + model("counter"));
  CHECK(m.code == 0);
  CHECK(tandem::Json::parse(m.out).at("models").size() == 1);
  CHECK(run_cli("validate " + (s.dir / "missing.cmod").string()).code == 2);
}

TEST_CASE("check exit codes") {
  CHECK(run_cli("check counter").code == 0);
  CHECK(run_cli("check broker-fixed").code == 0);
  const auto lossy = run_cli("check broker-lossy");
  CHECK(lossy.code == 1);
  CHECK(lossy.out.find("Drop(msg = Commit_") != std::string::npos);
  CHECK(lossy.out.find("commit-agreement") != std::string::npos);
  CHECK(lossy.out.find("Drop(msg = Commit_L1)    <== message lost") != std::string::npos);
  CHECK(run_cli("check " + model("broker-lossy")).code == 1);
  CHECK(run_cli("check broker-fixed --max-states 100").code == 0);
  CHECK(run_cli("check broker-fixed --strategy sideways").code == 2);
  CHECK(run_cli("check broker-fixed --strategy random").code == 2);
  CHECK(run_cli("check no-such-model").code == 2);
}

TEST_CASE("check machine report") {
  const auto r = run_cli("--format machine check broker-lossy");
  CHECK(r.code == 1);
  const auto j = tandem::Json::parse(r.out);
  CHECK(j.at("model") == "Broker");
  CHECK(j.at("violations").size() == 1);
  CHECK(j.at("violations")[0].at("path").size() == 13);
  CHECK_FALSE(j.contains("wall_time_ms"));
  CHECK(tandem::Json::parse(run_cli("--format machine check counter --timing").out).contains("wall_time_ms"));
}

TEST_CASE("trace-check exit codes and stdin") {
  Scratch s;
  const auto good = s.file("good.trace", "{\"seq\":0,\"op\":\"inc\"}\n");
  const auto bad = s.file("bad.trace", "{\"seq\":0,\"op\":\"dec\"}\n");
  const auto broken = s.file("broken.trace", "{\"seq\":0,\n");
  CHECK(run_cli("trace-check counter " + good).code == 0);
  CHECK(run_cli("trace-check counter " + bad).code == 1);
  CHECK(run_cli("trace-check counter " + broken).code == 2);
  CHECK(run_cli("trace-check counter - < " + good).code == 0);
  CHECK(run_cli("trace-check counter - < " + bad).code == 1);
  // Corpus: any non-conforming trace wins over unreadable files.
  CHECK(run_cli("trace-check counter " + good + " " + broken).code == 2);
  CHECK(run_cli("trace-check counter " + s.dir.string()).code == 1);
  const auto r = run_cli("--format machine trace-check counter " + bad);
  const auto j = tandem::Json::parse(r.out);
  CHECK(j.at("verdict") == "diverges");
  CHECK(j.at("first_bad_seq") == 0);
}

TEST_CASE("simulate pipes into trace-check") {
  CHECK(run_cli("simulate --commit-priority --seed 7 2>/dev/null | " + std::string(TANDEM_BIN) + " trace-check broker-fixed -").code ==
        0);
  CHECK(run_cli("simulate --lenders 0").code == 2);
  CHECK(run_cli("simulate --fault gremlins").code == 2);
  CHECK(run_cli("simulate --seed 4").out == run_cli("simulate --seed 4").out);
}

TEST_CASE("testbot") {
  Scratch s;
  const auto dir = (s.dir / "corpus").string();
  auto r = run_cli("--format machine testbot --runs 10 --commit-priority --out-dir " + dir + " --check broker-fixed");
  CHECK(r.code == 0);
  CHECK(tandem::Json::parse(r.out).at("files").size() == 10);
  CHECK(fs::exists(fs::path(dir) / "run-0009.trace"));
  CHECK(run_cli("testbot --runs 0 --out-dir " + (s.dir / "none").string()).code == 0);
  CHECK(fs::is_empty(s.dir / "none"));
  CHECK(run_cli("trace-check broker-fixed " + (s.dir / "none").string()).code == 0);
  r = run_cli("testbot --runs 100 --commit-priority --fault ignore-deadline --out-dir " + dir + " --check broker-fixed");
  CHECK(r.code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("check").code == 2);
  CHECK(run_cli("--format xml check counter").code == 2);
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("--version").code == 0);
}

TEST_CASE("animate honours TANDEM_PORT") {
  const int port = free_port();
  int out[2];
  REQUIRE(pipe(out) == 0);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, out[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, out[0]);
  std::vector<std::string> env_strings{"TANDEM_PORT=" + std::to_string(port)};
  for (char** e = environ; *e; ++e) {
    if (!std::string(*e).starts_with("TANDEM_PORT=")) env_strings.emplace_back(*e);
  }
  std::vector<char*> envp;
  for (auto& e : env_strings) envp.push_back(e.data());
  envp.push_back(nullptr);
  std::string bin = TANDEM_BIN;
  std::string a1 = "--format", a2 = "machine", a3 = "animate", a4 = "counter";
  char* argv[] = {bin.data(), a1.data(), a2.data(), a3.data(), a4.data(), nullptr};
  pid_t pid = 0;
  REQUIRE(posix_spawn(&pid, bin.c_str(), &actions, nullptr, argv, envp.data()) == 0);
  posix_spawn_file_actions_destroy(&actions);
  close(out[1]);

  std::string line;
  char c = 0;
  while (read(out[0], &c, 1) == 1 && c != '\n') line += c;
  close(out[0]);
  const auto info = tandem::Json::parse(line);
  CHECK(info.at("port") == port);

  httplib::Client cli("127.0.0.1", port);
  const auto res = cli.Get("/api/sessions/" + info.at("session").get<std::string>());
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(tandem::Json::parse(res->body).at("model") == "Counter");

  kill(pid, SIGTERM);
  int status = 0;
  waitpid(pid, &status, 0);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
}
