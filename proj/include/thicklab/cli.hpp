// thicklab/cli.hpp
//
// Command orchestration behind the command-line tool.  Every run writes
// config.json, summary.json and data.csv into the output directory, and
// nothing at all when it fails; identical configs and seeds produce
// byte-identical CSV output.

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "thicklab/covering.hpp"
#include "thicklab/ensemble.hpp"
#include "thicklab/io.hpp"
#include "thicklab/sequences.hpp"
#include "thicklab/sigma.hpp"

namespace thicklab::cli {

struct RunConfig {
  std::string command;
  std::string input;          // point cloud (jsonl) or distance matrix (csv)
  double p = 2.0;             // ambient exponent; infinity for the c_0 case
  int n_min = 2;
  int n_max = 8;
  double alpha = 2.0;         // embedding / ensemble weight / sigma level
  double tau = 0.5;
  double theta = 0.1;
  int k = 5;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::size_t budget = 64;    // caps subset search and dimension budgets
  std::string out = ".";
  // demo-lp and generated inputs
  double d = 0.5;
  std::size_t count = 4096;
  std::string mode = "cover";  // embed-hilbert: cover | thickness
};

inline json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["p"] = std::isinf(c.p) ? json("inf") : json(c.p);
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["alpha"] = c.alpha;
  j["tau"] = c.tau;
  j["theta"] = c.theta;
  j["k"] = c.k;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["budget"] = c.budget;
  j["out"] = c.out;
  j["d"] = c.d;
  j["count"] = c.count;
  j["mode"] = c.mode;
  return j;
}

namespace detail {

struct RunOutput {
  json summary;
  std::string data_csv;
  std::map<std::string, std::string> extra_files;  // e.g. replayable maps
};

inline Exponent exponent_of(const RunConfig& c) {
  return std::isinf(c.p) ? Exponent::linf() : Exponent(c.p);
}

inline PointCloud load_cloud(const RunConfig& c) {
  if (c.input.empty()) throw parse_error("missing --input path");
  std::ifstream in(c.input);
  if (!in) throw parse_error("cannot open input '" + c.input + "'");
  return read_jsonl_cloud(in, exponent_of(c));
}

inline EpsilonLadder ladder_of(const RunConfig& c) { return EpsilonLadder(c.n_min, c.n_max); }

inline RunOutput run_dim_box(const RunConfig& c) {
  const PointCloud X = load_cloud(c);
  const DimensionEstimate est = box_dim_estimate(X, ladder_of(c));
  RunOutput out;
  out.summary = to_json(est);
  out.data_csv = estimate_csv(est);
  return out;
}

inline RunOutput run_dim_thickness(const RunConfig& c) {
  const PointCloud X = load_cloud(c);
  ThicknessOptions opts;
  opts.subset_budget = c.budget;
  const ThicknessEstimate est = thickness_dim_estimate(X, ladder_of(c), opts);
  RunOutput out;
  out.summary = to_json(est);
  std::string csv = "scale,quantity,value\n";
  for (const auto& br : est.brackets) {
    csv += format_double(br.epsilon) + ",lower," + std::to_string(br.lower) + "\n";
    csv += format_double(br.epsilon) + ",upper," + std::to_string(br.upper) + "\n";
  }
  out.data_csv = csv;
  return out;
}

inline RunOutput run_dim_dual(const RunConfig& c) {
  const PointCloud X = load_cloud(c);
  const double alpha = (c.alpha > 0.0 && c.alpha <= 1.0) ? c.alpha : 48.0 / 100.0;
  const DimensionEstimate est = dual_thickness_upper_estimate(X, ladder_of(c), alpha);
  RunOutput out;
  out.summary = to_json(est);
  out.summary["alpha"] = alpha;
  out.data_csv = estimate_csv(est);
  return out;
}

inline RunOutput run_embed_hilbert(const RunConfig& c) {
  const PointCloud X = load_cloud(c);
  const EmbeddingMode mode =
      c.mode == "thickness" ? EmbeddingMode::thickness : EmbeddingMode::cover;
  EmbeddingOptions opts;
  opts.tau = c.tau;
  opts.dim_budget = c.budget;
  const BlockMap Phi = build_hilbert_embedding(X, c.alpha, mode, c.n_max, opts);
  RunOutput out;
  std::string csv = "scale,quantity,value\n";
  for (const auto& blk : Phi.blocks()) {
    const std::string eps = format_double(std::ldexp(1.0, -blk.level));
    csv += eps + ",block_size," + std::to_string(blk.size()) + "\n";
    csv += eps + ",weight," + format_double(blk.weight) + "\n";
    csv += eps + ",guaranteed_level," + format_double(blk.guaranteed_level) + "\n";
  }
  out.data_csv = csv;
  out.summary["tail_bound"] = Phi.tail_bound();
  out.summary["output_dim"] = Phi.output_dim();
  out.summary["upper_lipschitz"] = Phi.upper_lipschitz();
  // two-sided pair constants: the fine-scale branch and the large-pair
  // branch whose radius R comes from the data
  {
    const double R = std::max(difference_set(X).diameter(), 1.0);
    const double w1 = Phi.blocks().empty() ? 0.0 : Phi.blocks().front().weight;
    out.summary["pair_radius"] = R;
    out.summary["lower_constant"] =
        std::min(std::pow(2.0, -(c.alpha + 1.0)), w1 * 0.25 * std::pow(R, -c.alpha));
  }
  if (X.size() >= 2) {
    const HolderFit fit = holder_fit(Phi, X);
    out.summary["holder"] = {{"theta", fit.theta},
                             {"constant", fit.constant},
                             {"lipschitz", fit.lipschitz},
                             {"worst_pair", {fit.worst_pair.first, fit.worst_pair.second}}};
  }
  out.extra_files["blockmap.json"] = to_json(Phi).dump(2) + "\n";
  return out;
}

inline RunOutput run_sample_ensemble(const RunConfig& c) {
  const PointCloud X = load_cloud(c);
  const EnsembleSpec spec =
      build_subspace_sequence(X, c.tau, c.theta, c.n_max, c.k, c.alpha, c.budget);
  RunOutput out;
  std::string csv = "series,index,value\n";
  for (const auto& lv : spec.levels) {
    csv += "level_dim," + std::to_string(lv.n) + "," + std::to_string(lv.dim) + "\n";
    csv += "level_accuracy," + std::to_string(lv.n) + "," + format_double(lv.accuracy) + "\n";
  }
  json maps = json::array();
  for (std::size_t t = 0; t < c.trials; ++t) {
    const SampledMap map = sample_map(spec, c.seed + t);
    double max_norm = 0.0;
    for (const auto& row : map.rows) max_norm = std::max(max_norm, lp_norm(row, spec.q));
    csv += "trial_row_norm," + std::to_string(t) + "," + format_double(max_norm) + "\n";
    if (t == 0) maps.push_back(to_json(map));
  }
  out.data_csv = csv;
  out.summary["levels"] = spec.levels.size();
  out.summary["row_norm_bound"] = spec.row_norm_bound();
  out.summary["k"] = spec.k;
  out.extra_files["first_map.json"] = maps.empty() ? "{}\n" : maps[0].dump(2) + "\n";
  return out;
}

inline RunOutput run_verify_holder(const RunConfig& c) {
  const PointCloud X = load_cloud(c);
  const TheoremRateResult res =
      verify_theorem_rate(X, c.k, c.theta, c.tau, c.trials, c.seed, c.n_max, c.budget);
  RunOutput out;
  std::string csv = "trial,theta_fit,success\n";
  for (std::size_t t = 0; t < res.trial_thetas.size(); ++t) {
    const double th = res.trial_thetas[t];
    csv += std::to_string(t) + "," + (std::isfinite(th) ? format_double(th) : "collapse") + "," +
           (th >= c.theta ? "1" : "0") + "\n";
  }
  out.data_csv = csv;
  out.summary["success_fraction"] = res.success_fraction;
  out.summary["threshold"] = res.threshold;
  out.summary["theta"] = c.theta;
  return out;
}

inline RunOutput run_slab_check(const RunConfig& c) {
  const PointCloud X = load_cloud(c);
  const EnsembleSpec spec =
      build_subspace_sequence(X, c.tau, c.theta, c.n_max, c.k, c.alpha, c.budget);
  // largest point as the probe direction
  std::size_t probe = 0;
  for (std::size_t i = 1; i < X.size(); ++i) {
    if (lp_norm(X[i].x, X.p()) > lp_norm(X[probe].x, X.p())) probe = i;
  }
  RunOutput out;
  std::string csv = "n,dim,eps,empirical,bound,std_error\n";
  double worst_z = 0.0;
  for (std::size_t lvl = 0; lvl < spec.levels.size(); ++lvl) {
    const auto& lv = spec.levels[lvl];
    if (lv.dim == 0) continue;
    Rng grng = Rng::derive(c.seed, 1000 + lvl);
    const Eigen::VectorXd g = sample_unit_ball(static_cast<int>(lv.dim), spec.q, grng);
    double gx = 0.0;
    for (std::size_t j = 0; j < lv.dim; ++j) {
      gx += g[static_cast<Eigen::Index>(j)] * lv.coeff_scale * lv.dual_basis[j](X[probe].x);
    }
    if (gx == 0.0) continue;
    const double eps = std::abs(gx) / (2.0 * static_cast<double>(lv.dim));  // bound = 1/2
    const auto res = check_slab_bound(spec, lvl, X[probe].x, 0.0, eps, g, c.trials, c.seed + lvl);
    csv += std::to_string(lv.n) + "," + std::to_string(lv.dim) + "," + format_double(eps) + "," +
           format_double(res.empirical) + "," + format_double(res.bound) + "," +
           format_double(res.std_error) + "\n";
    if (res.std_error > 0.0) {
      worst_z = std::max(worst_z, (res.empirical - res.bound) / res.std_error);
    }
  }
  out.data_csv = csv;
  out.summary["worst_violation_z"] = worst_z;
  return out;
}

inline RunOutput run_kuratowski(const RunConfig& c) {
  if (c.input.empty()) throw parse_error("missing --input path");
  std::ifstream in(c.input);
  if (!in) throw parse_error("cannot open input '" + c.input + "'");
  const DistanceMatrix D = read_distance_csv(in);
  const PointCloud X = kuratowski_embed(D);
  double max_err = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = 0; j < X.size(); ++j) {
      max_err = std::max(max_err, std::abs(X.distance(i, j) - D.at(i, j)));
    }
  }
  RunOutput out;
  std::ostringstream cloud;
  write_jsonl_cloud(cloud, X);
  out.extra_files["cloud.jsonl"] = cloud.str();
  out.summary["points"] = X.size();
  out.summary["isometry_max_error"] = max_err;
  std::string csv = "i,j,distance\n";
  for (std::size_t i = 0; i < X.size(); ++i) {
    for (std::size_t j = i + 1; j < X.size(); ++j) {
      csv += D.ids[i] + "," + D.ids[j] + "," + format_double(X.distance(i, j)) + "\n";
    }
  }
  out.data_csv = csv;
  return out;
}

// The full quantitative report for the orthogonal sequences: box bracket,
// difference-set slope, thickness bracket slopes against the closed-form
// lower bound, and the dual upper estimate, all against ground truth.
inline RunOutput run_demo_lp(const RunConfig& c) {
  OrthogonalSequenceSpec spec;
  spec.decay_dimension = c.d;
  spec.count = c.count;
  spec.p = exponent_of(c);

  const double d_true = exact_box_dim(spec);
  const double diff_true = expected_difference_dim(spec);
  const double thick_formula = thickness_lower_formula(spec);

  const PointCloud A = make_orthogonal_sequence(spec);
  const EpsilonLadder ladder = ladder_of(c);
  const DimensionEstimate box = box_dim_estimate(A, ladder);

  OrthogonalSequenceSpec diff_spec = spec;
  diff_spec.count = std::min<std::size_t>(spec.count, 512);
  const PointCloud Ad = make_orthogonal_sequence(diff_spec);
  const PointCloud Z = difference_set(Ad);
  // Difference counts grow at twice the rate and square the point budget,
  // so the ladder stops where the predicted count (about the square of
  // the number of sequence elements above scale) leaves the power regime.
  const std::vector<double> diff_alpha = diff_spec.alpha_values();
  int dn_max = c.n_min + 3;
  bool dn_found = false;
  for (int n = c.n_min; n <= c.n_max; ++n) {
    std::size_t above = 0;
    for (double a : diff_alpha) {
      if (a >= std::ldexp(1.0, -n)) ++above;
    }
    if (above <= 64) {
      dn_max = dn_found ? std::max(dn_max, n) : n;
      dn_found = true;
    }
  }
  const int dn_min = std::min(c.n_min, dn_max - 3);
  const DimensionEstimate diff = box_dim_estimate(Z, EpsilonLadder(dn_min, dn_max));

  ThicknessOptions topts;
  topts.subset_budget = c.budget;
  const ThicknessEstimate thick = thickness_dim_estimate(A, ladder, topts);

  // The separating families resolve scale eps/2, so their size saturates
  // at the truncation a little before the raw counts do.
  const std::vector<double> full_alpha = spec.alpha_values();
  int du_max = c.n_min + 3;
  bool du_found = false;
  for (int n = c.n_min; n <= c.n_max; ++n) {
    std::size_t above = 0;
    for (double a : full_alpha) {
      if (a >= std::ldexp(0.5, -n)) ++above;
    }
    if (above <= full_alpha.size() / 2) {
      du_max = du_found ? std::max(du_max, n) : n;
      du_found = true;
    }
  }
  du_max = std::max(du_max, c.n_min + 3);
  const DimensionEstimate dual =
      dual_thickness_upper_estimate(A, EpsilonLadder(std::min(c.n_min, du_max - 3), du_max), 1.0 / 5.0);

  RunOutput out;
  out.summary["box_dim"] = {{"expected", d_true}, {"estimate", to_json(box)}};
  out.summary["difference_dim"] = {{"expected", diff_true}, {"estimate", to_json(diff)}};
  out.summary["thickness"] = {{"formula_lower", thick_formula},
                              {"lower_slope", thick.lower_fit.slope},
                              {"upper_slope", thick.upper_fit.slope}};
  out.summary["dual_upper"] = {{"expected_bound", d_true}, {"estimate", to_json(dual)}};

  std::string csv = "scale,quantity,value\n";
  for (std::size_t i = 0; i < box.counts.size(); ++i) {
    csv += format_double(box.counts[i].first) + ",box_count," +
           format_double(box.counts[i].second) + "\n";
  }
  for (std::size_t i = 0; i < diff.counts.size(); ++i) {
    csv += format_double(diff.counts[i].first) + ",difference_count," +
           format_double(diff.counts[i].second) + "\n";
  }
  for (const auto& br : thick.brackets) {
    csv += format_double(br.epsilon) + ",thickness_lower," + std::to_string(br.lower) + "\n";
    csv += format_double(br.epsilon) + ",thickness_upper," + std::to_string(br.upper) + "\n";
  }
  for (std::size_t i = 0; i < dual.counts.size(); ++i) {
    csv += format_double(dual.counts[i].first) + ",dual_family_dim," +
           format_double(dual.counts[i].second) + "\n";
  }
  out.data_csv = csv;
  return out;
}

}  // namespace detail

// Runs one command and writes its report files; throws on any failure
// before anything is written.
inline void run(const RunConfig& c) {
  detail::RunOutput out;
  if (c.command == "dim-box") {
    out = detail::run_dim_box(c);
  } else if (c.command == "dim-thickness") {
    out = detail::run_dim_thickness(c);
  } else if (c.command == "dim-dual") {
    out = detail::run_dim_dual(c);
  } else if (c.command == "embed-hilbert") {
    out = detail::run_embed_hilbert(c);
  } else if (c.command == "sample-ensemble") {
    out = detail::run_sample_ensemble(c);
  } else if (c.command == "verify-holder") {
    out = detail::run_verify_holder(c);
  } else if (c.command == "slab-check") {
    out = detail::run_slab_check(c);
  } else if (c.command == "demo-lp") {
    out = detail::run_demo_lp(c);
  } else if (c.command == "kuratowski") {
    out = detail::run_kuratowski(c);
  } else {
    throw parse_error("unknown command '" + c.command + "'");
  }

  out.summary["config"] = config_json(c);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw std::ios_base::failure("cannot create output directory '" + c.out + "'");
  auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(c.out) / name, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write '" + name + "' in '" + c.out + "'");
    f << content;
  };
  write_file("config.json", config_json(c).dump(2) + "\n");
  write_file("summary.json", out.summary.dump(2) + "\n");
  write_file("data.csv", out.data_csv);
  for (const auto& [name, content] : out.extra_files) write_file(name, content);
}

}  // namespace thicklab::cli
