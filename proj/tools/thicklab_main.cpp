// thicklab command-line tool: dimension estimators, embeddings and
// ensemble experiments over point clouds in l_p, driven by flat files.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>

#include "thicklab/cli.hpp"

namespace {

int run_mapped(const thicklab::cli::RunConfig& config) {
  using nlohmann::json;
  std::string code;
  std::string message;
  int exit_code = 0;
  try {
    thicklab::cli::run(config);
    return 0;
  } catch (const thicklab::parse_error& e) {
    code = "input-parse";
    message = e.what();
    exit_code = 2;
  } catch (const thicklab::budget_error& e) {
    code = "budget";
    message = e.what();
    exit_code = 4;
  } catch (const std::invalid_argument& e) {
    code = "precondition";
    message = e.what();
    exit_code = 3;
  } catch (const std::ios_base::failure& e) {
    code = "io";
    message = e.what();
    exit_code = 5;
  } catch (const std::exception& e) {
    code = "internal";
    message = e.what();
    exit_code = 1;
  }
  json err;
  err["error"] = {{"code", code}, {"message", message}};
  std::cerr << err.dump() << std::endl;
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimension exponents, Holder embeddings and random linear maps for point clouds in l_p"};
  app.require_subcommand(1);

  thicklab::cli::RunConfig config;
  bool p_inf = false;
  bool seed_given = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "point cloud (JSON lines) or distance matrix (CSV)");
    sub->add_option("--p", config.p, "ambient exponent p >= 1")->check(CLI::Range(1.0, 1e308));
    sub->add_flag("--p-inf", p_inf, "use the sup norm (c_0 convention)");
    sub->add_option("--nmin", config.n_min, "coarsest dyadic level (eps = 2^-n)");
    sub->add_option("--nmax", config.n_max, "finest dyadic level");
    sub->add_option("--alpha", config.alpha, "embedding / weight / separation exponent");
    sub->add_option("--tau", config.tau, "thickness parameter in (0, 1)");
    sub->add_option("--theta", config.theta, "Holder exponent target");
    sub->add_option("--k", config.k, "rows of sampled maps");
    sub->add_option("--trials", config.trials, "Monte-Carlo trials");
    sub->add_option("--seed", config.seed, "master seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    sub->add_option("--budget", config.budget, "search and dimension budget cap");
    sub->add_option("--out", config.out, "output directory")->required();
  };

  CLI::App* dim_box = app.add_subcommand("dim-box", "box-counting dimension estimate");
  add_common(dim_box);
  CLI::App* dim_thickness = app.add_subcommand("dim-thickness", "thickness bracket estimate");
  add_common(dim_thickness);
  CLI::App* dim_dual = app.add_subcommand("dim-dual", "dual thickness upper estimate");
  add_common(dim_dual);
  CLI::App* embed =
      app.add_subcommand("embed-hilbert", "build the block embedding and fit its inverse");
  add_common(embed);
  embed->add_option("--mode", config.mode, "cover | thickness")
      ->check(CLI::IsMember({"cover", "thickness"}));
  CLI::App* sample =
      app.add_subcommand("sample-ensemble", "build the dual subspace sequence and sample maps");
  add_common(sample);
  CLI::App* verify =
      app.add_subcommand("verify-holder", "Monte-Carlo success rate of the Holder inverse");
  add_common(verify);
  CLI::App* slab = app.add_subcommand("slab-check", "Monte-Carlo slab bound check per level");
  add_common(slab);
  CLI::App* demo = app.add_subcommand("demo-lp", "quantitative report on the orthogonal sequences");
  add_common(demo);
  demo->add_option("--d", config.d, "decay dimension (alpha_n = n^{-1/d})");
  demo->add_option("--count", config.count, "truncation length K");
  CLI::App* kura = app.add_subcommand("kuratowski", "embed a finite metric space isometrically");
  add_common(kura);

  CLI11_PARSE(app, argc, argv);

  if (p_inf) config.p = std::numeric_limits<double>::infinity();
  if (!seed_given) {
    if (const char* env = std::getenv("THICKLAB_SEED")) {
      config.seed = std::strtoull(env, nullptr, 10);
    }
  }
  config.command = app.get_subcommands().front()->get_name();
  return run_mapped(config);
}
