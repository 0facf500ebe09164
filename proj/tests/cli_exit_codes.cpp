// Drives the command-line binary (path in argv[1]) and checks the
// documented exit codes: 0 on success, 2 on invalid arguments.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

namespace {

int exit_code_of(const std::string& cmd) {
  int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli>\n", argv[0]);
    return 1;
  }
  std::string cli = argv[1];
  int failures = 0;
  auto expect = [&](const std::string& args, int want) {
    int got = exit_code_of(cli + " " + args);
    if (got != want) {
      std::fprintf(stderr, "FAIL: '%s' exited %d, expected %d\n", args.c_str(),
                   got, want);
      ++failures;
    }
  };

  expect("", 2);                                         // missing subcommand
  expect("frobnicate", 2);                               // unknown subcommand
  expect("run --gamma 0.1 --xbar2 2 --r 1 --runs 50", 2);  // missing seed
  expect("run --gamma 1.5 --xbar2 2 --r 1 --runs 50 --seed 1", 2);
  expect("run --gamma 0.1 --xbar2 -2 --r 1 --runs 50 --seed 1", 2);
  expect("run --gamma 0.1 --xbar2 2 --r 1 --runs 0 --seed 1", 2);
  expect("run --gamma 0.1 --xbar2 2 --r 1 --runs 50 --seed 1", 0);
  expect("run --gamma 0.1 --xbar2 2 --r 1 --runs 50 --seed 1 --policy map", 0);
  expect("run --gamma 0.1 --xbar2 2 --r 1 --runs 50 --seed 1 "
         "--signal-x 1.5 --signal-p -0.5",
         0);
  expect("sweep --param gamma --values 0.1,0.2 --gamma 0 --xbar2 2 --r 1 "
         "--runs 20 --seed 3",
         0);
  expect("sweep --param gamma --values 1.5 --gamma 0 --xbar2 2 --r 1 "
         "--runs 20 --seed 3",
         2);
  expect("sweep --param gamma --values 0.1 --gamma 0 --xbar2 2 --r 1 "
         "--runs 20 --seed 3 --out /nonexistent-dir/out.csv",
         3);
  expect("branches --gamma 0.2 --xbar2 3", 0);
  expect("syndrome-table", 0);
  expect("syndrome-table --xbar2 3", 0);
  expect("misclass --gamma 0.3 --r 0.5 --xbar2 2", 0);
  expect("--help", 0);

  if (failures == 0) std::printf("all exit-code checks passed\n");
  return failures == 0 ? 0 : 1;
}
