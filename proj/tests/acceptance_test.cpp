// One line per acceptance criterion; exit status is the number of failures.
// `acceptance_test --write-snapshot` records the endpoint snapshot instead of comparing.

#include <cstdio>
#include <cstring>
#include <filesystem>

#include "kropina/verification.hpp"

int main(int argc, char** argv) {
  kropina::verify::Options opt;
  opt.work_dir = std::filesystem::temp_directory_path() / "kropina-acceptance";
  opt.snapshot = std::filesystem::path(KROPINA_SNAPSHOT_PATH);
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--write-snapshot") == 0) opt.write_snapshot = true;

  const auto results = kropina::verify::run_all(opt);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", kropina::verify::format_line(r).c_str());
    failed += !r.passed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  std::filesystem::remove_all(opt.work_dir);
  return failed;
}
