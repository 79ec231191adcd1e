// curveflow: command-line front end over the C API.
#include <CLI11.hpp>

#include <algorithm>
#include <mutex>
#include <cstdio>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "curveflow/curveflow.h"

namespace {

constexpr int kExitError = 1;

struct Job {
  double alpha = 1.0;
  std::string out_dir;
  int exit_status = kExitError;
  std::string message;
};

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", alpha);
  return buf;
}

std::string error_text(cf_status st) {
  std::string msg = cf_last_error();
  return msg.empty() ? cf_status_string(st) : msg;
}

int list_presets() {
  const int n = cf_preset_count();
  for (int i = 0; i < n; ++i) {
    const char *name, *clause, *desc, *expected;
    if (cf_preset_info(i, &name, &clause, &desc, &expected) != CF_OK) return kExitError;
    std::printf("%-16s expect %-9s %s\n%16s %s\n", name, expected, clause, "", desc);
  }
  return 0;
}

struct PresetArgs {
  std::string name;
  std::optional<double> alpha;
  std::optional<int> N;
  std::optional<double> t_end;
  std::optional<std::string> out;
  std::optional<std::string> kind;
  unsigned jobs = 0;
};

void run_preset_job(const PresetArgs& a, Job& job) {
  cf_scenario* sc = nullptr;
  cf_status st = cf_scenario_from_preset(a.name.c_str(), job.alpha, &sc);
  if (st == CF_OK && a.N) st = cf_scenario_set_grid(sc, *a.N);
  if (st == CF_OK && a.t_end) st = cf_scenario_set_t_end(sc, *a.t_end);
  if (st == CF_OK && a.kind)
    st = cf_scenario_set_flow_kind(sc, *a.kind == "LP" ? CF_LENGTH_PRESERVING : CF_AREA_PRESERVING);
  if (st == CF_OK) st = cf_scenario_set_out_dir(sc, job.out_dir.c_str());
  if (st == CF_OK) st = cf_scenario_run(sc, &job.exit_status);
  if (st == CF_OK) {
    job.message = cf_scenario_summary(sc);
  } else {
    job.exit_status = kExitError;
    job.message = a.name + " alpha=" + alpha_tag(job.alpha) + ": error: " + error_text(st);
  }
  cf_scenario_free(sc);
}

// Worst outcome wins: error, then invariant violation, then mismatch.
int combine(int acc, int status) {
  auto rank = [](int s) { return s == 1 ? 3 : s == 3 ? 2 : s == 2 ? 1 : 0; };
  return rank(status) > rank(acc) ? status : acc;
}

int run_preset(const PresetArgs& a) {
  std::vector<Job> jobs;
  if (a.alpha) {
    Job j;
    j.alpha = *a.alpha;
    j.out_dir = a.out.value_or("out/" + a.name + "-alpha" + alpha_tag(*a.alpha));
    jobs.push_back(j);
  } else {
    const std::string base = a.out.value_or("out/" + a.name);
    for (double alpha : {0.5, 1.0, 2.0}) {
      Job j;
      j.alpha = alpha;
      j.out_dir = base + "/alpha" + alpha_tag(alpha);
      jobs.push_back(j);
    }
  }

  unsigned workers = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, jobs.size());
  if (workers <= 1) {
    for (auto& j : jobs) run_preset_job(a, j);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mu;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard lock(mu);
            if (next == jobs.size()) return;
            i = next++;
          }
          run_preset_job(a, jobs[i]);
        }
      });
    for (auto& t : pool) t.join();
  }

  int status = 0;
  for (const auto& j : jobs) {
    std::fprintf(j.exit_status == 1 ? stderr : stdout, "%s -> %s (exit %d)\n", j.message.c_str(),
                 j.out_dir.c_str(), j.exit_status);
    status = combine(status, j.exit_status);
  }
  return status;
}

int run_config(const std::string& path, const std::optional<std::string>& out) {
  cf_scenario* sc = nullptr;
  int exit_status = kExitError;
  cf_status st = cf_scenario_from_config(path.c_str(), &sc);
  if (st == CF_OK && out) st = cf_scenario_set_out_dir(sc, out->c_str());
  if (st == CF_OK) st = cf_scenario_run(sc, &exit_status);
  if (st != CF_OK) {
    std::fprintf(stderr, "%s: error: %s\n", path.c_str(), error_text(st).c_str());
    cf_scenario_free(sc);
    return kExitError;
  }
  std::printf("%s -> %s (exit %d)\n", cf_scenario_summary(sc), cf_scenario_out_dir(sc),
              exit_status);
  cf_scenario_free(sc);
  return exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate area- and length-preserving curvature-power flows of locally convex curves"};
  app.require_subcommand(1);

  app.add_subcommand("list-presets", "List built-in scenarios");

  PresetArgs pa;
  auto* preset = app.add_subcommand("preset", "Run a built-in scenario");
  preset->add_option("name", pa.name, "Preset name (see list-presets)")->required();
  preset->add_option("--alpha", pa.alpha, "Curvature exponent; default sweeps 0.5, 1 and 2")
      ->check(CLI::PositiveNumber);
  preset->add_option("--N", pa.N, "Grid size (even, >= 16)");
  preset->add_option("--t-end", pa.t_end, "Final time")->check(CLI::PositiveNumber);
  preset->add_option("--out", pa.out, "Output directory");
  preset->add_option("--kind", pa.kind, "Override the flow: AP or LP")
      ->check(CLI::IsMember({"AP", "LP"}));
  preset->add_option("--jobs", pa.jobs, "Concurrent runs for an alpha sweep (0 = all cores)");

  std::string config_path;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "Run a scenario from a config file");
  run->add_option("--config", config_path, "Config file (key = value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_out, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  if (app.got_subcommand("list-presets")) return list_presets();
  if (app.got_subcommand("preset")) return run_preset(pa);
  return run_config(config_path, run_out);
}
