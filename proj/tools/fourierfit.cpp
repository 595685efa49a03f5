#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fourierfit/fourierfit.hpp"

namespace ff = fourierfit;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::int64_t jobs = 1;
};

void print_error(const ff::Json& report) {
  std::cout << report.dump(2) << "\n";
}

int run(const std::string& kind, const CommonArgs& args) {
  ff::Json config;
  try {
    config = ff::parse_json_file(args.config_path);
  } catch (const std::exception& e) {
    ff::Json err;
    err["error"] = "config";
    err["message"] = e.what();
    print_error(err);
    return 2;
  }

  ff::RunContext ctx;
  ctx.out_dir = args.out_dir;
  ctx.jobs = args.jobs;
  if (args.seed_given) {
    ctx.seed = args.seed;
  } else if (config.is_object() && config.contains("seed") &&
             config.at("seed").is_number_integer()) {
    ctx.seed = config.at("seed").get<std::uint64_t>();
  }

  try {
    const ff::ExperimentOutcome outcome = ff::run_experiment(kind, config, ctx);
    for (const std::string& file : outcome.files) std::cout << file << "\n";
    return 0;
  } catch (const ff::ValidationError& e) {
    print_error(e.report());
    return 2;
  } catch (const ff::NonInterpolable& e) {
    ff::Json err;
    err["error"] = "non-interpolable";
    err["frequency"] = e.frequency();
    err["message"] = e.what();
    print_error(err);
    return 3;
  } catch (const ff::Unsupported& e) {
    ff::Json err;
    err["error"] = "unsupported";
    err["message"] = e.what();
    print_error(err);
    return 2;
  } catch (const ff::InvalidArgument& e) {
    ff::Json err;
    err["error"] = "config";
    err["message"] = e.what();
    print_error(err);
    return 2;
  } catch (const std::exception& e) {
    ff::Json err;
    err["error"] = "internal";
    err["message"] = e.what();
    print_error(err);
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-norm weighted Fourier interpolation experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"fit", "Fit one minimum-norm model and write its dense curve"},
      {"sweep", "Closed-form generalization error across a d-schedule"},
      {"scaling", "Benign scaling curves with d = n^alpha"},
      {"encoding", "Per-frequency degeneracy and weight report"},
      {"quantum", "Optimal-observable quantum fits and scaling table"},
      {"haar", "Haar-averaged moments of induced Fourier weights"}};

  std::map<std::string, CLI::Option*> seed_options;
  for (const auto& [name, description] : kinds) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", args.config_path, "JSON config file")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory (default .)");
    seed_options[name] =
        sub->add_option("--seed", args.seed, "master seed override");
    sub->add_option("--jobs", args.jobs, "worker thread count (default 1)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    ff::Json err;
    err["error"] = "usage";
    err["message"] = e.what();
    print_error(err);
    return 2;
  }

  for (const auto& [name, description] : kinds) {
    (void)description;
    if (app.got_subcommand(name)) {
      args.seed_given = seed_options[name]->count() > 0;
      return run(name, args);
    }
  }
  return 2;
}
