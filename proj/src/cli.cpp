#include "sphereot/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphereot/classification.hpp"
#include "sphereot/diagnostics.hpp"
#include "sphereot/grid_density.hpp"
#include "sphereot/harmonic_transforms.hpp"
#include "sphereot/interpolation.hpp"
#include "sphereot/inversion.hpp"
#include "sphereot/sliced_distances.hpp"
#include "sphereot/vmf.hpp"

namespace sphereot::cli {
namespace {

struct PdFlags {
  double rho = 0.1, sigma = 1.0, tau = 0.25, tol = 0.0;
  int iters = 200;
  PdParams params() const {
    PdParams p;
    p.rho = rho;
    p.sigma = sigma;
    p.tau = tau;
    p.iterations = iters;
    p.tolerance = tol;
    return p;
  }
};

void add_pd_flags(CLI::App* app, PdFlags& f) {
  app->add_option("--rho", f.rho, "KL regularization weight")->capture_default_str();
  app->add_option("--sigma", f.sigma, "dual step size")->capture_default_str();
  app->add_option("--tau", f.tau, "primal step size (<= 0 picks 0.9/(sigma(1+|T|^2)))")->capture_default_str();
  app->add_option("--iters", f.iters, "iteration count")->capture_default_str();
  app->add_option("--tol", f.tol, "relative primal-change stopping tolerance, 0 disables")->capture_default_str();
}

std::vector<double> split_numbers(const std::string& s, const char* what) {
  std::vector<double> out;
  const char* p = s.data();
  const char* end = p + s.size();
  while (p <= end) {
    double v = 0.0;
    const auto r = std::from_chars(p, end, v);
    if (r.ec != std::errc()) throw ValidationError(std::string(what) + ": malformed number list '" + s + "'");
    out.push_back(v);
    p = r.ptr;
    if (p == end) break;
    if (*p != ',') throw ValidationError(std::string(what) + ": expected ',' in '" + s + "'");
    ++p;
  }
  return out;
}

GridDensity read_sphere_density(const std::string& path, const char* what) {
  GridDensity d = read_grid_density_file(path);
  if (d.grid.kind != GridKind::sphere)
    throw ValidationError(std::string(what) + ": expected a sphere grid in " + path + ", got " + to_string(d.grid.kind));
  return d;
}

std::unique_ptr<SphericalTransform> make_transform(const std::string& op, int N, int G) {
  if (op == "v") return std::make_unique<VerticalSliceTransform>(N);
  if (op == "w") return std::make_unique<SemicircleTransform>(N, G);
  throw ValidationError("op: expected v or w, got '" + op + "'");
}

// Atom file: "# atoms" header, then x,y,z,mass rows.
DiscreteMeasureS2 read_atoms(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  DiscreteMeasureS2 mu;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    const auto v = split_numbers(line, "atoms");
    if (v.size() != 4) throw ValidationError(path + ":" + std::to_string(lineno) + ": expected x,y,z,mass");
    mu.points.emplace_back(v[0], v[1], v[2]);
    mu.masses.push_back(v[3]);
  }
  mu.validate_probability();
  return mu;
}

void write_trace(const std::string& path, const std::vector<double>& obj) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out.precision(17);
  out << "iteration,objective\n";
  for (std::size_t k = 0; k < obj.size(); ++k) out << k + 1 << ',' << obj[k] << '\n';
}

nlohmann::json spec_to_json(const VmfSpec& s) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : s.components)
    comps.push_back({{"weight", c.weight}, {"kappa", c.kappa}, {"mean", {c.mean.x(), c.mean.y(), c.mean.z()}}});
  return {{"components", comps}, {"symmetrize", s.symmetrize}};
}

int band_limit_from_size(std::size_t n) {
  for (int N = 1; N <= 512; ++N)
    if (static_cast<std::size_t>((N + 1) * (2 * N + 2)) == n) return N;
  throw ValidationError("dataset: column count " + std::to_string(n) + " is not a sphere grid size");
}

int dispatch(std::vector<std::string> args) {
  CLI::App app{"Sliced optimal transport on the 2-sphere"};
  app.require_subcommand(1);
  // Subcommands inherit this, so -N may follow the subcommand name.
  app.fallthrough();
  int N = 16;
  app.add_option("-N,--band-limit", N, "band-limit of generated grids")->capture_default_str()->check(CLI::PositiveNumber);

  // transform
  auto* tr = app.add_subcommand("transform", "forward transform of a sphere density");
  std::string tr_op = "v", tr_in, tr_out;
  int tr_G = 0;
  tr->add_option("--op", tr_op, "v (vertical slice) or w (semicircle)")->required();
  tr->add_option("--gamma-count", tr_G, "gamma samples for w (default 2N+1)");
  tr->add_option("input", tr_in)->required();
  tr->add_option("output", tr_out)->required();

  // invert
  auto* inv = app.add_subcommand("invert", "invert transform samples to a sphere density");
  std::string inv_op = "v", inv_mode = "pinv", inv_in, inv_out, inv_trace;
  PdFlags inv_pd;
  inv->add_option("--op,--transform", inv_op, "v or w")->required();
  inv->add_option("--mode", inv_mode, "pinv or reg")->capture_default_str();
  add_pd_flags(inv, inv_pd);
  inv->add_option("--trace", inv_trace, "objective trace CSV (reg mode)");
  inv->add_option("input", inv_in)->required();
  inv->add_option("output", inv_out)->required();

  // distance
  auto* dist = app.add_subcommand("distance", "sliced Wasserstein distance between two inputs");
  std::string metric = "vsw", da, db;
  double p = 2.0;
  bool atoms = false;
  int slices = 64;
  dist->add_option("--metric", metric, "vsw or ssw")->required();
  dist->add_option("--p", p, "order p >= 1")->capture_default_str();
  dist->add_flag("--atoms", atoms, "inputs are atom lists (x,y,z,mass) instead of sphere densities");
  dist->add_option("--slices", slices, "psi directions for vsw on atoms")->capture_default_str();
  dist->add_option("a", da)->required();
  dist->add_option("b", db)->required();

  // interpolate
  auto* ip = app.add_subcommand("interpolate", "sliced CDT interpolation between two sphere densities");
  std::string ip_op = "v", ip_mode = "pinv", ip_a, ip_b, ip_out;
  double delta = 0.5;
  PdFlags ip_pd;
  ip->add_option("--op", ip_op, "v or w")->required();
  ip->add_option("--delta", delta, "interpolation time in [0, 1]")->required();
  ip->add_option("--mode", ip_mode, "pinv or reg")->capture_default_str();
  add_pd_flags(ip, ip_pd);
  ip->add_option("mu", ip_a)->required();
  ip->add_option("nu", ip_b)->required();
  ip->add_option("output", ip_out)->required();

  // gen-vmf
  auto* gv = app.add_subcommand("gen-vmf", "sample a von Mises-Fisher density (or mixture) on the sphere grid");
  double kappa = 50.0;
  std::string mean = "0,0", gv_out;
  std::vector<std::string> mix;
  bool symmetrize = false;
  gv->add_option("--kappa", kappa, "concentration")->capture_default_str();
  gv->add_option("--mean", mean, "mean direction as phi,theta (radians)")->capture_default_str();
  gv->add_flag("--symmetrize", symmetrize, "average with the reflection at the equatorial plane");
  gv->add_option("--mix", mix, "extra component weight,kappa,phi,theta; the --mean component keeps the remaining weight");
  gv->add_option("output", gv_out)->required();

  // gen-dataset
  auto* gd = app.add_subcommand("gen-dataset", "generate a labeled vMF dataset");
  DatasetSpec ds;
  std::string gd_out, gd_json;
  gd->add_option("--id", ds.id, "dataset 1..5")->required()->check(CLI::Range(1, 5));
  gd->add_option("--seed", ds.seed, "random seed")->capture_default_str();
  gd->add_option("--per-class", ds.per_class, "samples per class")->capture_default_str();
  gd->add_option("--kappa", ds.kappa, "concentration")->capture_default_str();
  gd->add_option("--config", gd_json, "write the generated mixture parameters as JSON");
  gd->add_option("output", gd_out, "CSV: one density per row, label last")->required();

  // classify
  auto* cl = app.add_subcommand("classify", "cross-validated linear classification of a dataset");
  std::string features = "v", cl_in, cl_results, cl_features_out, classifier = "svm";
  int folds = 10, pca = 50;
  std::uint64_t fold_seed = 11;
  cl->add_option("--features", features, "raw, v or w")->capture_default_str();
  cl->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
  cl->add_option("--pca", pca, "PCA dimension")->capture_default_str();
  cl->add_option("--classifier", classifier, "svm or ridge")->capture_default_str();
  cl->add_option("--fold-seed", fold_seed, "seed of the fold assignment")->capture_default_str();
  cl->add_option("--results", cl_results, "append a result row to this CSV");
  cl->add_option("--features-out", cl_features_out, "write the feature matrix CSV");
  cl->add_option("input", cl_in, "dataset CSV from gen-dataset")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*tr) {
    GridDensity in = read_sphere_density(tr_in, "transform");
    auto T = make_transform(tr_op, in.grid.band_limit, tr_G);
    write_grid_density_file(tr_out, {T->codomain_grid(), T->apply(in.values)});
  } else if (*inv) {
    GridDensity in = read_grid_density_file(inv_in);
    auto T = make_transform(inv_op, in.grid.band_limit, in.grid.gamma_count);
    if (!(T->codomain_grid() == in.grid))
      throw ValidationError("invert: input grid " + to_string(in.grid.kind) + " does not match --op " + inv_op);
    const auto mode = inversion_mode_from_string(inv_mode);
    std::vector<double> f;
    if (mode == InversionMode::pinv) {
      f = T->pinv(in.values);
    } else {
      auto res = pd_invert(*T, in.values, inv_pd.params());
      f = std::move(res.density);
      if (!inv_trace.empty()) write_trace(inv_trace, res.objective);
    }
    write_grid_density_file(inv_out, {T->domain_grid(), std::move(f)});
  } else if (*dist) {
    if (!(p >= 1.0)) throw ValidationError("p: must be >= 1");
    double d = 0.0;
    if (atoms) {
      SlicedConfig cfg;
      cfg.p = p;
      cfg.slices = slices;
      cfg.zenith_band_limit = N;
      const auto a = read_atoms(da), b = read_atoms(db);
      if (metric == "vsw") d = vsw(a, b, cfg);
      else if (metric == "ssw") d = ssw(a, b, cfg);
      else throw ValidationError("metric: expected vsw or ssw, got '" + metric + "'");
    } else {
      const auto a = read_sphere_density(da, "distance"), b = read_sphere_density(db, "distance");
      if (!(a.grid == b.grid)) throw ValidationError("distance: inputs live on different grids");
      if (metric == "vsw") d = vsw(a.values, b.values, VerticalSliceTransform(a.grid.band_limit), p);
      else if (metric == "ssw") d = ssw(a.values, b.values, SemicircleTransform(a.grid.band_limit), p);
      else throw ValidationError("metric: expected vsw or ssw, got '" + metric + "'");
    }
    std::cout.precision(17);
    std::cout << d << '\n';
  } else if (*ip) {
    const auto a = read_sphere_density(ip_a, "interpolate"), b = read_sphere_density(ip_b, "interpolate");
    if (!(a.grid == b.grid)) throw ValidationError("interpolate: inputs live on different grids");
    InterpolationOptions opt;
    opt.mode = inversion_mode_from_string(ip_mode);
    opt.pd = ip_pd.params();
    InterpolationResult res;
    if (ip_op == "v") res = vcdt_interpolate(a.values, b.values, delta, VerticalSliceTransform(a.grid.band_limit), opt);
    else if (ip_op == "w") res = wcdt_interpolate(a.values, b.values, delta, SemicircleTransform(a.grid.band_limit), opt);
    else throw ValidationError("op: expected v or w, got '" + ip_op + "'");
    write_grid_density_file(ip_out, {a.grid, std::move(res.density)});
  } else if (*gv) {
    const auto m = split_numbers(mean, "mean");
    if (m.size() != 2) throw ValidationError("mean: expected phi,theta");
    VmfSpec spec;
    double rest = 1.0;
    for (const auto& s : mix) {
      const auto c = split_numbers(s, "mix");
      if (c.size() != 4) throw ValidationError("mix: expected weight,kappa,phi,theta");
      spec.components.push_back({c[0], c[1], sph(c[2], c[3])});
      rest -= c[0];
    }
    if (rest < -1e-12) throw ValidationError("mix: weights exceed 1");
    spec.components.insert(spec.components.begin(), VmfComponent{std::max(rest, 0.0), kappa, sph(m[0], m[1])});
    spec.symmetrize = symmetrize;
    const SphereGrid grid(N);
    write_grid_density_file(gv_out, {{GridKind::sphere, N, 0}, vmf_density(spec, grid)});
  } else if (*gd) {
    ds.band_limit = N;
    const auto data = generate_dataset(ds);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(data.front().density.size()));
    std::vector<int> labels;
    for (std::size_t s = 0; s < data.size(); ++s) {
      X.row(static_cast<Eigen::Index>(s)) =
          Eigen::Map<const Eigen::RowVectorXd>(data[s].density.data(), static_cast<Eigen::Index>(data[s].density.size()));
      labels.push_back(data[s].label);
    }
    std::ofstream out(gd_out);
    if (!out) throw ValidationError("cannot write " + gd_out);
    write_feature_csv(out, X, labels);
    if (!gd_json.empty()) {
      nlohmann::json j = {{"id", ds.id}, {"seed", ds.seed}, {"per_class", ds.per_class}, {"kappa", ds.kappa},
                          {"band_limit", ds.band_limit}, {"samples", nlohmann::json::array()}};
      for (const auto& d : data) j["samples"].push_back({{"label", d.label}, {"spec", spec_to_json(d.spec)}});
      std::ofstream js(gd_json);
      if (!js) throw ValidationError("cannot write " + gd_json);
      js << j.dump(2) << '\n';
    }
  } else if (*cl) {
    std::ifstream in(cl_in);
    if (!in) throw ValidationError("cannot open " + cl_in);
    Eigen::MatrixXd D;
    std::vector<int> labels;
    read_feature_csv(in, D, labels);
    const FeatureExtractor fx(feature_kind_from_string(features), band_limit_from_size(static_cast<std::size_t>(D.cols())));
    Eigen::MatrixXd X;
    if (fx.kind() == FeatureKind::raw) {
      X = D;
    } else {
      std::vector<LabeledDensity> data(labels.size());
      for (std::size_t s = 0; s < labels.size(); ++s) {
        const Eigen::RowVectorXd row = D.row(static_cast<Eigen::Index>(s));
        data[s].density.assign(row.data(), row.data() + row.size());
        data[s].label = labels[s];
      }
      X = feature_matrix(data, fx);
    }
    if (!cl_features_out.empty()) {
      std::ofstream fo(cl_features_out);
      if (!fo) throw ValidationError("cannot write " + cl_features_out);
      write_feature_csv(fo, X, labels);
    }
    ClassifierOptions opt;
    if (classifier == "ridge") opt.kind = ClassifierKind::ridge;
    else if (classifier != "svm") throw ValidationError("classifier: expected svm or ridge, got '" + classifier + "'");
    const auto cv = crossvalidate(X, labels, folds, pca, opt, fold_seed);
    std::ostringstream row;
    row.precision(6);
    row << cl_in << ',' << features << ',' << std::fixed << cv.mean << ',' << cv.stddev;
    std::cout << "dataset,features,mean_accuracy,std\n" << row.str() << '\n';
    if (!cl_results.empty()) {
      const bool fresh = !std::ifstream(cl_results).good();
      std::ofstream out(cl_results, std::ios::app);
      if (!out) throw ValidationError("cannot write " + cl_results);
      if (fresh) out << "dataset,features,mean_accuracy,std\n";
      out << row.str() << '\n';
    }
  }
  return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
  try {
    return dispatch(std::move(args));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 1;
  }
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace sphereot::cli
