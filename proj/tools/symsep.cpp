// Command-line front end: reads JSON problem descriptions, runs the range /
// ground-state / convergence / decomposition / witness workflows and writes
// CSV or JSON artifacts whose bodies are reproducible byte for byte given
// the same command, input, seed and tolerance.
//
// Exit codes: 0 success, 2 parse error, 3 dimension or validation error,
// 4 internal consistency failure, 5 precondition violation (input state not
// supported on the bosonic subspace).

#include "symsep/symsep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace symsep;

namespace {

struct CommonOpts {
  std::string input;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::optional<double> tol;

  std::string tolerance_label() const {
    return tol ? "tol=" + format_double(*tol) : "default";
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--input", opts.input, "input JSON file")->required();
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--tol", opts.tol, "tolerance override");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw json_schema_error("cannot open input file: " + path);
  }
  return json::parse(in);
}

RunManifest make_manifest(const std::string& command, const CommonOpts& opts,
                          const std::string& output_path) {
  RunManifest man;
  man.command = command;
  man.input_path = opts.input;
  man.output_path = output_path;
  man.seed = opts.seed;
  man.tolerances = opts.tolerance_label();
  man.timestamp = RunManifest::now_utc();
  return man;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

void write_json_artifact(const CommonOpts& opts, const std::string& name,
                         const std::string& command, json payload) {
  const std::string path = out_path(opts, name);
  payload["manifest"] = make_manifest(command, opts, path).to_json();
  std::ofstream out(path);
  if (!out) {
    throw validation_error("cannot open output file: " + path);
  }
  out << payload.dump(2) << "\n";
}

// ---------------------------------------------------------------- range --

struct RangeOpts {
  CommonOpts common;
  int directions = 64;
  int samples = 10000;
};

int run_range(const RangeOpts& opts) {
  ObservableTuple obs =
      jsonio::observable_tuple_from_json(read_json_file(opts.common.input));
  if (obs.m() != 2) {
    throw dimension_error("range: need exactly 2 observables, got " +
                          std::to_string(obs.m()));
  }
  if (opts.directions < 2 || opts.samples < 1) {
    throw validation_error("range: directions must be >= 2 and samples >= 1");
  }

  MeanFieldConfig cfg;
  if (opts.common.tol) cfg.tol = *opts.common.tol;

  {
    auto pts = sample_product_range(obs, opts.samples, opts.common.seed);
    CsvWriter csv(out_path(opts.common, "pi_sym_points.csv"),
                  make_manifest("range", opts.common, "pi_sym_points.csv"));
    csv.header({"sample", "p1", "p2"});
    for (std::size_t i = 0; i < pts.size(); ++i) {
      csv.row({std::to_string(i), format_double(pts[i].coords(0)),
               format_double(pts[i].coords(1))});
    }
  }

  std::vector<SupportSample> sweep;
  sweep.reserve(static_cast<std::size_t>(opts.directions));
  for (int j = 0; j < opts.directions; ++j) {
    const double theta = 2.0 * M_PI * j / opts.directions;
    MeanFieldConfig dir_cfg = cfg;
    dir_cfg.seed = derive_stream(opts.common.seed,
                                 1000000u + static_cast<std::uint64_t>(j));
    sweep.push_back(separable_range_support(
        Eigen::Vector2d(std::cos(theta), std::sin(theta)), obs, dir_cfg));
  }
  {
    CsvWriter csv(out_path(opts.common, "theta_support.csv"),
                  make_manifest("range", opts.common, "theta_support.csv"));
    csv.header({"theta", "x1", "x2", "h", "p1", "p2"});
    for (int j = 0; j < opts.directions; ++j) {
      const double theta = 2.0 * M_PI * j / opts.directions;
      const SupportSample& s = sweep[static_cast<std::size_t>(j)];
      csv.row({format_double(theta), format_double(s.direction(0)),
               format_double(s.direction(1)), format_double(s.value),
               format_double(s.point(0)), format_double(s.point(1))});
    }
  }
  {
    auto segments = detect_flat_segments(sweep);
    CsvWriter csv(out_path(opts.common, "flat_segments.csv"),
                  make_manifest("range", opts.common, "flat_segments.csv"));
    csv.header({"theta_begin", "theta_end", "a1", "a2", "b1", "b2"});
    for (const FlatSegment& seg : segments) {
      csv.row({format_double(seg.theta_begin), format_double(seg.theta_end),
               format_double(seg.endpoint_a(0)),
               format_double(seg.endpoint_a(1)),
               format_double(seg.endpoint_b(0)),
               format_double(seg.endpoint_b(1))});
    }
  }
  return 0;
}

// --------------------------------------------------------------- ground --

struct GroundOpts {
  CommonOpts common;
  std::string sweep;
  int restarts = 16;
};

// "i=v1,v2,v3" or "i=a:b:count": coefficient index to vary and its values.
std::pair<std::size_t, std::vector<double>> parse_sweep(
    const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw json_schema_error("sweep: expected 'index=values', got '" + text +
                            "'");
  }
  std::size_t index = 0;
  try {
    index = std::stoul(text.substr(0, eq));
  } catch (const std::exception&) {
    throw json_schema_error("sweep: bad coefficient index in '" + text + "'");
  }
  const std::string rhs = text.substr(eq + 1);
  std::vector<double> values;
  try {
    if (rhs.find(':') != std::string::npos) {
      const auto c1 = rhs.find(':');
      const auto c2 = rhs.find(':', c1 + 1);
      if (c2 == std::string::npos) {
        throw json_schema_error("sweep: linear form is start:stop:count");
      }
      const double a = std::stod(rhs.substr(0, c1));
      const double b = std::stod(rhs.substr(c1 + 1, c2 - c1 - 1));
      const long count = std::stol(rhs.substr(c2 + 1));
      if (count < 1) {
        throw json_schema_error("sweep: count must be positive");
      }
      for (long i = 0; i < count; ++i) {
        values.push_back(count == 1
                             ? a
                             : a + (b - a) * static_cast<double>(i) /
                                   static_cast<double>(count - 1));
      }
    } else {
      std::size_t pos = 0;
      while (pos < rhs.size()) {
        auto comma = rhs.find(',', pos);
        if (comma == std::string::npos) comma = rhs.size();
        values.push_back(std::stod(rhs.substr(pos, comma - pos)));
        pos = comma + 1;
      }
    }
  } catch (const json_schema_error&) {
    throw;
  } catch (const std::exception&) {
    throw json_schema_error("sweep: cannot parse values in '" + text + "'");
  }
  if (values.empty()) {
    throw json_schema_error("sweep: no values given");
  }
  return {index, values};
}

int run_ground(const GroundOpts& opts) {
  KLocalSpec spec =
      jsonio::klocal_spec_from_json(read_json_file(opts.common.input));

  std::vector<std::vector<double>> xs;
  if (opts.sweep.empty()) {
    xs.push_back(spec.x());
  } else {
    auto [index, values] = parse_sweep(opts.sweep);
    if (index >= spec.x().size()) {
      throw validation_error("sweep: coefficient index " +
                             std::to_string(index) + " out of range");
    }
    for (double v : values) {
      std::vector<double> x = spec.x();
      x[index] = v;
      xs.push_back(std::move(x));
    }
  }

  MeanFieldConfig cfg;
  cfg.restarts = opts.restarts;
  cfg.seed = opts.common.seed;
  if (opts.common.tol) cfg.tol = *opts.common.tol;

  CsvWriter csv(out_path(opts.common, "ground.csv"),
                make_manifest("ground", opts.common, "ground.csv"));
  std::vector<std::string> cols;
  for (const KLocalTerm& t : spec.terms()) cols.push_back("x_" + t.name);
  cols.push_back("energy");
  cols.push_back("converged");
  cols.push_back("iterations");
  if (spec.n() == 2) {
    cols.push_back("bloch_x");
    cols.push_back("bloch_y");
    cols.push_back("bloch_z");
  }
  for (int i = 0; i < spec.n(); ++i) {
    cols.push_back("psi" + std::to_string(i) + "_re");
    cols.push_back("psi" + std::to_string(i) + "_im");
  }
  csv.header(cols);

  for (const std::vector<double>& x : xs) {
    const KLocalSpec point = spec.with_coefficients(x);
    MeanFieldResult res =
        mean_field_minimize(assemble_weighted(point), point.k(), cfg);
    std::vector<std::string> row;
    for (double v : x) row.push_back(format_double(v));
    row.push_back(format_double(res.energy));
    row.push_back(res.converged ? "1" : "0");
    row.push_back(std::to_string(res.iterations));
    const Vector& psi = res.minimizer.amplitudes();
    if (spec.n() == 2) {
      const Complex c = std::conj(psi(0)) * psi(1);
      row.push_back(format_double(2.0 * c.real()));
      row.push_back(format_double(2.0 * c.imag()));
      row.push_back(format_double(std::norm(psi(0)) - std::norm(psi(1))));
    }
    for (int i = 0; i < spec.n(); ++i) {
      row.push_back(format_double(psi(i).real()));
      row.push_back(format_double(psi(i).imag()));
    }
    csv.row(row);
  }
  return 0;
}

// ------------------------------------------------------------ definetti --

struct DefinettiOpts {
  CommonOpts common;
  int n_max = 6;
};

int run_definetti(const DefinettiOpts& opts) {
  KLocalSpec spec =
      jsonio::klocal_spec_from_json(read_json_file(opts.common.input));
  MeanFieldConfig cfg;
  cfg.seed = opts.common.seed;
  if (opts.common.tol) cfg.tol = *opts.common.tol;

  DeFinettiReport rep = definetti_convergence(spec, opts.n_max, cfg);

  CsvWriter csv(out_path(opts.common, "definetti.csv"),
                make_manifest("definetti", opts.common, "definetti.csv"));
  csv.header({"N", "energy_per_subset", "mean_field_energy", "gap"});
  for (std::size_t i = 0; i < rep.finite.size(); ++i) {
    csv.row({std::to_string(rep.finite[i].N),
             format_double(rep.finite[i].energy_per_subset),
             format_double(rep.mean_field.energy),
             format_double(rep.gaps[i])});
  }
  return 0;
}

// ------------------------------------------------------------ decompose --

int run_decompose(const CommonOpts& opts) {
  SeparableDecomposition input = jsonio::separable_decomposition_from_json(
      read_json_file(opts.input));
  const double eps = opts.tol ? *opts.tol : 1e-8;
  SymmetricProductDecomposition result =
      symmetrize_decomposition(input, eps);

  const DensityMatrix before = assemble(input);
  const DensityMatrix after = assemble(result);
  const double reassembly = max_abs(before.matrix() - after.matrix());

  const Projector p =
      symmetrizer(input.n(), input.N(), Parity::symmetric);
  json residuals = json::array();
  for (const PureProductTerm& t : input.terms()) {
    const Vector phi = product_vector(t);
    residuals.push_back((phi - p.matrix() * phi).norm());
  }

  json payload = jsonio::symmetric_decomposition_to_json(result);
  payload["verification"] = json{{"reassembly_error", reassembly},
                                 {"term_residuals", residuals}};
  write_json_artifact(opts, "decomposition.json", "decompose",
                      std::move(payload));
  return 0;
}

// -------------------------------------------------------------- witness --

int run_witness(const CommonOpts& opts) {
  jsonio::WitnessInput in =
      jsonio::witness_input_from_json(read_json_file(opts.input));
  if (in.rho.dim() != ipow(in.n, in.N)) {
    throw dimension_error("witness: matrix dim " +
                          std::to_string(in.rho.dim()) + " != n^N");
  }
  const double tol = opts.tol ? *opts.tol : 1e-9;

  bool certified = false;
  json payload;
  payload["n"] = in.n;
  payload["N"] = in.N;

  if (in.N == 2) {
    const double swap = swap_witness(in.rho, in.n);
    payload["swap"] = swap;
    if (swap < -tol) certified = true;
  }

  // every bipartition, normalized to transpose the part without slot 0
  json ppt = json::array();
  const int parts = in.N >= 1 ? (1 << (in.N - 1)) : 1;
  for (int mask = 1; mask < parts; ++mask) {
    std::vector<int> slots;
    for (int s = 1; s < in.N; ++s) {
      if (mask & (1 << (s - 1))) slots.push_back(s);
    }
    const double lo = ppt_min_eigenvalue(in.rho, in.n, in.N, slots);
    if (lo < -tol) certified = true;
    ppt.push_back(json{{"slots", slots}, {"min_eigenvalue", lo}});
  }
  payload["ppt"] = ppt;

  payload["symmetric_support"] =
      is_symmetric_state(in.rho, in.n, in.N, Parity::symmetric);
  payload["antisymmetric_support"] =
      is_symmetric_state(in.rho, in.n, in.N, Parity::antisymmetric);
  payload["entangled"] = certified ? "certified" : "unknown";

  write_json_artifact(opts, "witness.json", "witness", std::move(payload));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convex geometry of permutation-invariant quantum states"};
  app.require_subcommand(1);

  RangeOpts range_opts;
  CLI::App* range_cmd = app.add_subcommand(
      "range", "sample the product-state expectation cloud and sweep its "
               "support function");
  add_common(range_cmd, range_opts.common);
  range_cmd->add_option("--directions", range_opts.directions,
                        "support sweep directions");
  range_cmd->add_option("--samples", range_opts.samples,
                        "random product states to sample");

  GroundOpts ground_opts;
  CLI::App* ground_cmd = app.add_subcommand(
      "ground", "variational product-state ground energy, optionally swept "
                "over one coefficient");
  add_common(ground_cmd, ground_opts.common);
  ground_cmd->add_option("--sweep", ground_opts.sweep,
                         "coefficient sweep: i=v1,v2,... or i=a:b:count");
  ground_cmd->add_option("--restarts", ground_opts.restarts,
                         "solver restarts");

  DefinettiOpts definetti_opts;
  CLI::App* definetti_cmd = app.add_subcommand(
      "definetti", "exact finite-system energies per subset against the "
                   "product-state limit");
  add_common(definetti_cmd, definetti_opts.common);
  definetti_cmd->add_option("--n-max", definetti_opts.n_max,
                            "largest particle count");

  CommonOpts decompose_opts;
  CLI::App* decompose_cmd = app.add_subcommand(
      "decompose", "rewrite a separable decomposition in bosonic product "
                   "form");
  add_common(decompose_cmd, decompose_opts);

  CommonOpts witness_opts;
  CLI::App* witness_cmd = app.add_subcommand(
      "witness", "swap and partial-transpose entanglement certificates");
  add_common(witness_cmd, witness_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (range_cmd->parsed()) return run_range(range_opts);
    if (ground_cmd->parsed()) return run_ground(ground_opts);
    if (definetti_cmd->parsed()) return run_definetti(definetti_opts);
    if (decompose_cmd->parsed()) return run_decompose(decompose_opts);
    if (witness_cmd->parsed()) return run_witness(witness_opts);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const json_schema_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const non_symmetric_state_error& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 5;
  } catch (const non_symmetric_term_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const consistency_error& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return 4;
  } catch (const dimension_error& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return 3;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
