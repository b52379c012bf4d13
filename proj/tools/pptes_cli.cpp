// Command-line front end: build lattice states and maps, decide PPT-ness
// exactly, evaluate witnesses, emit and re-verify certificates, enumerate
// equidistributed states, cross-validate the exact machinery against the
// dense oracle, and export figure data.
//
// Exit codes: 0 verdict produced, 2 inconclusive, 1 usage or contract error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "pptes/certify.hpp"
#include "pptes/enumerate.hpp"
#include "pptes/version.hpp"

namespace {

using namespace pptes;

constexpr int kExitVerdict = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct ShapeArgs {
  int m = 0;
  int n = 0;

  LatticeShape shape() const { return LatticeShape(m, n); }
};

void add_shape_options(CLI::App* cmd, ShapeArgs& args) {
  cmd->add_option("-m", args.m, "alpha arity (m >= 1)")->required();
  cmd->add_option("-n", args.n, "beta arity (n >= 1)")->required();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file " + path);
  return os;
}

LatticeState load_state_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open state file " + path);
  return load_state(is);
}

MapRep load_map_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open map file " + path);
  return load_map(is);
}

MultiIndex default_beta0(const LatticeShape& shape) {
  MultiIndex beta0(shape.n, 0);
  beta0[0] = 2;
  return beta0;
}

std::string set_to_line(const SiteSet& set) {
  std::string out;
  for (std::int64_t idx : set.members()) {
    if (!out.empty()) out += ';';
    out += format_site(site_from_index(set.shape, idx));
  }
  return out;
}

int run_build_state(const ShapeArgs& shape_args, const std::string& kind,
                    const std::string& beta0_text,
                    const std::vector<std::string>& sites,
                    const std::string& out_path) {
  const LatticeShape shape = shape_args.shape();
  SiteSet set(shape);
  if (kind == "ic") {
    set = build_ic(shape);
  } else if (kind == "ibe") {
    set = build_ibe(shape, parse_multi_index(beta0_text));
  } else if (kind == "sites") {
    if (sites.empty()) throw std::runtime_error("--sites requires at least one site");
    for (const auto& s : sites) set.insert(site_index(shape, parse_site(shape, s)));
  } else {
    throw std::runtime_error("unknown state kind " + kind);
  }
  const LatticeState state = els_from_set(set);
  if (out_path.empty()) {
    save_state(std::cout, state);
  } else {
    auto os = open_output(out_path);
    save_state(os, state);
  }
  std::cout << "state kind=" << kind << " support=" << set.cardinality() << "\n";
  return kExitVerdict;
}

int run_build_map(const ShapeArgs& shape_args, const std::string& beta0_text,
                  const std::string& out_path) {
  const LatticeShape shape = shape_args.shape();
  const MapRep rep = lambda_beta0(shape, parse_multi_index(beta0_text));
  if (out_path.empty()) {
    save_map(std::cout, rep);
  } else {
    auto os = open_output(out_path);
    save_map(os, rep);
  }
  std::cout << "map lambda-beta0 " << beta0_text << " coefficients "
            << rep.diagonal().size() << "\n";
  return kExitVerdict;
}

int run_check_ppt(const std::string& state_path) {
  const LatticeState state = load_state_file(state_path);
  const PptResult result = is_ppt(state);
  std::cout << "ppt " << (result.ppt ? "true" : "false") << "\n";
  std::cout << "jmin " << format_rational(result.j_min) << "\n";
  std::cout << "jmin-site " << format_site(result.argmin) << "\n";
  return kExitVerdict;
}

MapRep resolve_map(const std::string& map_path, const ShapeArgs& shape_args,
                   const std::string& beta0_text, bool have_shape) {
  if (!map_path.empty()) return load_map_file(map_path);
  if (!have_shape) {
    throw std::runtime_error("either --map or -m/-n/--beta0 must be given");
  }
  const LatticeShape shape = shape_args.shape();
  return lambda_beta0(shape, beta0_text.empty() ? default_beta0(shape)
                                                : parse_multi_index(beta0_text));
}

int run_witness(const std::string& state_path, const std::string& map_path,
                const ShapeArgs& shape_args, const std::string& beta0_text,
                bool have_shape) {
  const LatticeState state = load_state_file(state_path);
  const MapRep rep = resolve_map(map_path, shape_args, beta0_text, have_shape);
  if (!rep.is_diagonal()) {
    throw std::runtime_error("witness on lattice states needs a diagonal map");
  }
  const Rational value = lattice_witness(rep, state);
  std::cout << "witness " << format_rational(value) << "\n";
  const bool detected = classify_witness(value) == WitnessClass::entangled;
  std::cout << "entanglement " << (detected ? "detected" : "inconclusive") << "\n";
  return detected ? kExitVerdict : kExitInconclusive;
}

int run_certify(const ShapeArgs& shape_args, bool have_shape,
                const std::string& beta0_text, const std::string& state_path,
                const std::string& map_path, const std::string& out_path,
                int dense_cap, double tolerance) {
  MapRep rep = resolve_map(map_path, shape_args, beta0_text, have_shape);
  LatticeState state =
      state_path.empty()
          ? els_from_set(build_ibe(
                *rep.split, rep.tensor_sum
                                ? multi_index_from_flat(rep.tensor_sum->shape.n,
                                                        rep.tensor_sum->neg_index)
                                : parse_multi_index(beta0_text)))
          : load_state_file(state_path);
  const Certificate cert = certify_pptes(state, rep, dense_cap, tolerance);
  std::cout << "verdict " << verdict_name(cert.verdict) << "\n";
  std::cout << "jmin " << format_rational(cert.j_min) << "\n";
  std::cout << "witness " << format_rational(cert.witness) << "\n";
  if (out_path.empty()) {
    save_certificate(std::cout, cert);
  } else {
    auto os = open_output(out_path);
    save_certificate(os, cert);
    std::cout << "certificate written to " << out_path << "\n";
  }
  return (cert.verdict == Verdict::pptes || cert.verdict == Verdict::npt)
             ? kExitVerdict
             : kExitInconclusive;
}

int run_verify_certificate(const std::string& cert_path, int dense_cap) {
  std::ifstream is(cert_path);
  if (!is) throw std::runtime_error("cannot open certificate " + cert_path);
  const Certificate cert = load_certificate(is);
  const VerifyReport report = verify_certificate(cert, dense_cap);
  if (report.ok) {
    std::cout << "certificate ok: verdict " << verdict_name(cert.verdict)
              << ", witness " << format_rational(cert.witness) << ", jmin "
              << format_rational(cert.j_min) << "\n";
    return kExitVerdict;
  }
  for (const auto& f : report.failures) {
    std::cout << "certificate invalid: " << f << "\n";
  }
  return kExitError;
}

int run_enumerate(const ShapeArgs& shape_args, const std::string& beta0_text,
                  bool exhaustive, std::int64_t samples,
                  std::optional<std::uint64_t> seed, bool symmetry_reduction,
                  int workers) {
  const LatticeShape shape = shape_args.shape();
  const MapRep rep = lambda_beta0(shape, beta0_text.empty()
                                             ? default_beta0(shape)
                                             : parse_multi_index(beta0_text));
  EnumerateOptions options;
  options.exhaustive = exhaustive;
  options.samples = samples;
  options.symmetry_reduction = symmetry_reduction;
  options.workers = workers;
  if (!exhaustive) {
    if (!seed.has_value()) {
      throw std::runtime_error("sampling mode requires --seed");
    }
    options.seed = *seed;
  }
  enumerate_ppt_els(shape, rep, options, [&](const ElsRecord& rec) {
    std::cout << "I=" << set_to_line(rec.sites)
              << " jmin=" << format_rational(rec.j_min)
              << " witness=" << format_rational(rec.witness);
    if (rec.orbit_size > 0) std::cout << " orbit=" << rec.orbit_size;
    std::cout << "\n";
  });
  return kExitVerdict;
}

int run_cross_validate(const ShapeArgs& shape_args, std::int64_t samples,
                       std::uint64_t seed, int dense_cap) {
  const LatticeShape shape = shape_args.shape();
  if (shape.num_coords() > dense_cap) {
    throw std::runtime_error("cross-validate needs N within the dense cap");
  }
  const MapRep rep = lambda_beta0(shape, default_beta0(shape));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> weight(0, 8);
  std::int64_t agree = 0;
  for (std::int64_t k = 0; k < samples; ++k) {
    std::vector<long long> weights(static_cast<std::size_t>(shape.lattice_size()));
    long long denom = 0;
    do {
      denom = 0;
      for (auto& w : weights) denom += (w = weight(rng));
    } while (denom == 0);
    const LatticeState state = make_lattice_state(shape, weights, denom);

    const JSpectrum spec = j_spectrum(state);
    std::vector<double> exact_pt;
    exact_pt.reserve(spec.values.size());
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
      exact_pt.push_back(to_double(spec.at(i)) /
                         static_cast<double>(shape.local_dim()));
    }
    std::sort(exact_pt.begin(), exact_pt.end());

    const Matrix rho = materialize_dense(state, dense_cap);
    const Eigen::VectorXd dense_pt = hermitian_eigenvalues(
        partial_transpose(rho, shape.local_dim(), shape.local_dim()));
    bool ok = true;
    for (std::int64_t i = 0; i < dense_pt.size(); ++i) {
      if (std::abs(dense_pt(i) - exact_pt[i]) > 1e-10) ok = false;
    }
    const double dw = dense_witness(rep, rho);
    if (std::abs(dw - to_double(lattice_witness(rep, state))) > 1e-10) ok = false;
    if (!ok) {
      std::cout << "disagreement at sample " << k << "\n";
      return kExitError;
    }
    ++agree;
  }
  std::cout << agree << "/" << samples << " agree\n";
  return kExitVerdict;
}

int run_export_figure(const ShapeArgs& shape_args, const std::string& beta0_text,
                      const std::string& state_path, const std::string& out_path) {
  nlohmann::json doc;
  if (!state_path.empty()) {
    const LatticeState state = load_state_file(state_path);
    doc["shape"] = {{"m", state.shape.m}, {"n", state.shape.n}};
    nlohmann::json sites = nlohmann::json::array();
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(state.weights.size()); ++i) {
      if (state.weights[i] == 0) continue;
      const LatticeSite site = site_from_index(state.shape, i);
      nlohmann::json rec;
      rec["site"] = format_site(site);
      std::vector<int> coords = site.alpha;
      coords.insert(coords.end(), site.beta.begin(), site.beta.end());
      rec["coords"] = coords;
      rec["role"] = "support";
      rec["weight"] = format_rational(Rational(state.weights[i], state.denom));
      sites.push_back(rec);
    }
    doc["sites"] = sites;
  } else {
    const LatticeShape shape = shape_args.shape();
    const MultiIndex beta0 = beta0_text.empty() ? default_beta0(shape)
                                                : parse_multi_index(beta0_text);
    const SiteSet core = build_ic(shape);
    const SiteSet full = build_ibe(shape, beta0);
    doc["shape"] = {{"m", shape.m}, {"n", shape.n}};
    doc["beta0"] = beta0;
    nlohmann::json sites = nlohmann::json::array();
    for (std::int64_t idx : full.members()) {
      const LatticeSite site = site_from_index(shape, idx);
      nlohmann::json rec;
      rec["site"] = format_site(site);
      std::vector<int> coords = site.alpha;
      coords.insert(coords.end(), site.beta.begin(), site.beta.end());
      rec["coords"] = coords;
      rec["role"] = core.contains(idx) ? "core" : "extra";
      sites.push_back(rec);
    }
    doc["sites"] = sites;
  }
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    auto os = open_output(out_path);
    os << doc.dump(2) << "\n";
    std::cout << "figure data written to " << out_path << "\n";
  }
  return kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice states, positive maps and bound-entanglement certificates"};
  app.set_version_flag("--version", tool_id());
  app.require_subcommand(1);

  // build-state
  auto* build_state_cmd = app.add_subcommand("build-state", "construct an equidistributed lattice state");
  ShapeArgs bs_shape;
  add_shape_options(build_state_cmd, bs_shape);
  std::string bs_beta0, bs_out;
  std::vector<std::string> bs_sites;
  bool bs_ic = false, bs_ibe = false;
  build_state_cmd->add_flag("--ic", bs_ic, "all-nonzero-coordinate set I_C");
  build_state_cmd->add_flag("--ibe", bs_ibe, "I_C plus the extra site (0, beta0)");
  build_state_cmd->add_option("--beta0", bs_beta0, "beta0 digits, e.g. 2 or 2,0");
  build_state_cmd->add_option("--sites", bs_sites, "explicit site list, e.g. 1,2|3")
      ->expected(-1);
  build_state_cmd->add_option("-o,--output", bs_out, "output file (default stdout)");

  // build-map
  auto* build_map_cmd = app.add_subcommand("build-map", "construct the distinguished positive map");
  ShapeArgs bm_shape;
  add_shape_options(build_map_cmd, bm_shape);
  std::string bm_beta0, bm_out;
  build_map_cmd->add_option("--beta0", bm_beta0, "beta0 digits")->required();
  build_map_cmd->add_option("-o,--output", bm_out, "output file (default stdout)");

  // check-ppt
  auto* check_cmd = app.add_subcommand("check-ppt", "exact PPT decision for a state file");
  std::string cp_state;
  check_cmd->add_option("--state", cp_state, "lattice state file")->required();

  // witness
  auto* witness_cmd = app.add_subcommand("witness", "exact witness value of a map on a state");
  std::string w_state, w_map, w_beta0;
  ShapeArgs w_shape;
  witness_cmd->add_option("--state", w_state, "lattice state file")->required();
  witness_cmd->add_option("--map", w_map, "map file");
  auto* w_m = witness_cmd->add_option("-m", w_shape.m, "alpha arity");
  witness_cmd->add_option("-n", w_shape.n, "beta arity");
  witness_cmd->add_option("--beta0", w_beta0, "beta0 digits");

  // certify
  auto* certify_cmd = app.add_subcommand("certify", "full bound-entanglement certification pipeline");
  ShapeArgs c_shape;
  std::string c_beta0, c_state, c_map, c_out;
  int c_dense_cap = 4;
  double c_tolerance = 1e-8;
  auto* c_m = certify_cmd->add_option("-m", c_shape.m, "alpha arity");
  certify_cmd->add_option("-n", c_shape.n, "beta arity");
  certify_cmd->add_option("--beta0", c_beta0, "beta0 digits");
  certify_cmd->add_option("--state", c_state, "state file (default: the I_BE set for beta0)");
  certify_cmd->add_option("--map", c_map, "map file (default: lambda-beta0 map)");
  certify_cmd->add_option("-o,--output", c_out, "certificate output file");
  certify_cmd->add_option("--dense-cap", c_dense_cap, "largest N with dense cross-checks");
  certify_cmd->add_option("--tolerance", c_tolerance,
                          "dense-vs-exact agreement tolerance");

  // verify-certificate
  auto* verify_cmd = app.add_subcommand("verify-certificate", "recompute and check a certificate");
  std::string v_cert;
  int v_dense_cap = 4;
  verify_cmd->add_option("--cert", v_cert, "certificate file")->required();
  verify_cmd->add_option("--dense-cap", v_dense_cap, "largest N with dense cross-checks");

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "walk equidistributed states, exact PPT + witness");
  ShapeArgs e_shape;
  add_shape_options(enum_cmd, e_shape);
  std::string e_beta0;
  bool e_exhaustive = false, e_reduce = false;
  std::int64_t e_samples = 0;
  std::optional<std::uint64_t> e_seed;
  int e_workers = 1;
  enum_cmd->add_flag("--exhaustive", e_exhaustive, "all nonempty subsets (N = 2 only)");
  enum_cmd->add_option("--samples", e_samples, "number of random subsets");
  std::uint64_t e_seed_value = 0;
  auto* e_seed_opt = enum_cmd->add_option("--seed", e_seed_value, "sampling seed");
  enum_cmd->add_flag("--symmetry-reduction", e_reduce, "one representative per symmetry orbit");
  enum_cmd->add_option("--beta0", e_beta0, "beta0 for the witness map");
  enum_cmd->add_option("--workers", e_workers, "worker threads");

  // cross-validate
  auto* cv_cmd = app.add_subcommand("cross-validate", "exact machinery vs dense oracle on random states");
  ShapeArgs cv_shape;
  add_shape_options(cv_cmd, cv_shape);
  std::int64_t cv_samples = 100;
  std::uint64_t cv_seed = 0;
  int cv_dense_cap = 4;
  cv_cmd->add_option("--samples", cv_samples, "number of random states")->required();
  cv_cmd->add_option("--seed", cv_seed, "sampling seed")->required();
  cv_cmd->add_option("--dense-cap", cv_dense_cap, "largest N with dense checks");

  // export-figure
  auto* fig_cmd = app.add_subcommand("export-figure", "site-set coordinates as structured records");
  ShapeArgs f_shape;
  std::string f_beta0, f_state, f_out;
  auto* f_m = fig_cmd->add_option("-m", f_shape.m, "alpha arity");
  fig_cmd->add_option("-n", f_shape.n, "beta arity");
  fig_cmd->add_option("--beta0", f_beta0, "beta0 digits");
  fig_cmd->add_option("--state", f_state, "state file instead of an I_BE set");
  fig_cmd->add_option("-o,--output", f_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build_state_cmd->parsed()) {
      const std::string kind = bs_ic ? "ic" : bs_ibe ? "ibe" : "sites";
      if (bs_ibe && bs_beta0.empty()) {
        throw std::runtime_error("--ibe requires --beta0");
      }
      return run_build_state(bs_shape, kind, bs_beta0, bs_sites, bs_out);
    }
    if (build_map_cmd->parsed()) {
      return run_build_map(bm_shape, bm_beta0, bm_out);
    }
    if (check_cmd->parsed()) {
      return run_check_ppt(cp_state);
    }
    if (witness_cmd->parsed()) {
      return run_witness(w_state, w_map, w_shape, w_beta0, w_m->count() > 0);
    }
    if (certify_cmd->parsed()) {
      return run_certify(c_shape, c_m->count() > 0, c_beta0, c_state, c_map,
                         c_out, c_dense_cap, c_tolerance);
    }
    if (verify_cmd->parsed()) {
      return run_verify_certificate(v_cert, v_dense_cap);
    }
    if (enum_cmd->parsed()) {
      if (e_seed_opt->count() > 0) e_seed = e_seed_value;
      if (!e_exhaustive && e_samples == 0) {
        throw std::runtime_error("enumerate needs --exhaustive or --samples");
      }
      return run_enumerate(e_shape, e_beta0, e_exhaustive, e_samples, e_seed,
                           e_reduce, e_workers);
    }
    if (cv_cmd->parsed()) {
      return run_cross_validate(cv_shape, cv_samples, cv_seed, cv_dense_cap);
    }
    if (fig_cmd->parsed()) {
      if (f_state.empty() && f_m->count() == 0) {
        throw std::runtime_error("export-figure needs -m/-n or --state");
      }
      return run_export_figure(f_shape, f_beta0, f_state, f_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
