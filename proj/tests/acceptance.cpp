// Runs the CLI verification suite single-threaded, then prints one line per acceptance criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#ifndef LOOPMORPH_CLI
#error "LOOPMORPH_CLI must name the CLI executable"
#endif

namespace {

const std::map<int, std::string> kTitles = {
    {1, "cylinder frame closed form and serial runtime"},
    {2, "cylinder morph closed form and SU(2) membership"},
    {3, "cylinder surfaces and hyperbolic-cylinder quadric"},
    {4, "hyperboloid frames, quadrics and big-cell boundary"},
    {5, "sphere pair radius and one-sheeted quadric"},
    {6, "Grassmannian and Sp(2) closed forms and runtime"},
    {7, "morphing gate"},
    {8, "Birkhoff factorization properties on random loops"},
    {9, "flatness of every catalog frame"},
    {10, "Maurer-Cartan band shape"},
    {11, "Smyth equivariance, metric, Gauss and Painleve III"},
    {12, "Toda K-surfaces and unitarized morph"},
    {13, "special functions"},
};

}  // namespace

int main() {
  namespace fs = std::filesystem;
  const fs::path report = fs::temp_directory_path() / ("loopmorph_acceptance_" + std::to_string(::getpid()) + ".json");
  const std::string cmd = std::string("OMP_NUM_THREADS=1 \"") + LOOPMORPH_CLI + "\" verify --suite APPENDIX_ALL --band 32 --quiet --out \"" +
                          report.string() + "\" > /dev/null 2>&1";
  auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

  nlohmann::json j;
  {
    std::ifstream in(report);
    if (in) {
      try {
        in >> j;
      } catch (const std::exception&) {
      }
    }
  }
  fs::remove(report);

  bool all = true;
  for (const auto& [k, title] : kTitles) {
    int n = 0, ok = 0;
    std::string worst;
    double worst_ratio = -1.0;
    if (j.contains("checks"))
      for (const auto& c : j["checks"]) {
        if (c["criterion"].get<int>() != k) continue;
        ++n;
        const bool pass = c["pass"].get<bool>();
        ok += pass;
        if (c["expect_above"].get<bool>()) continue;
        const double tol = c["tolerance"].get<double>();
        const double r = c["residual"].is_null() ? 1e300 : c["residual"].get<double>();
        if (r / tol > worst_ratio || !pass) {
          worst_ratio = r / tol;
          std::ostringstream os;
          os << c["name"].get<std::string>() << " " << r << " < " << tol;
          worst = os.str();
        }
      }
    const bool pass = n > 0 && ok == n;
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << k << ": " << title << " (" << ok << "/" << n
              << " checks; tightest " << (worst.empty() ? "n/a" : worst) << ")\n";
  }
  const bool pass14 = rc == 0 && secs < 600.0;
  all = all && pass14;
  std::cout << (pass14 ? "PASS" : "FAIL") << " criterion 14: CLI verify --suite APPENDIX_ALL single-threaded (exit "
            << rc << ", " << secs << " s < 600 s)\n";
  return all ? 0 : 1;
}
