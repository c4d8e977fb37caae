#include "ri/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ri/errors.hpp"
#include "ri/gff.hpp"
#include "ri/hash.hpp"
#include "ri/interlace.hpp"
#include "ri/io.hpp"
#include "ri/parallel.hpp"
#include "ri/potential.hpp"
#include "ri/verify.hpp"

namespace ri::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kFooter = R"(Output files (one directory per run, default $RI_OUTPUT_DIR/<command>-seed<seed>):
  config.toml        config snapshot; replay with --config
  window.json        vertices, weights, window hash
  green.csv          row,col,value        killed Green function g_U by window index
  equilibrium.csv    index,vertex,mass    equilibrium measure of K
  hitting.csv        index,vertex,value   P_x[hit K before exit]
  potential.csv      index,vertex,value   Feynman-Kac solution for V
  samples.csv        sample,vertex,value  occupation field or GFF, vertex = window index
  summary.csv        test,pass,checks,failed,error
  *.json             reports (schema ri.report/1) and sample sidecars

Vertices are written "1,0,0" (lattice) or "0,1" (tree path); "origin" names the
center. Lists of vertices are separated by ';'. V entries are "vertex:value".)";

const char* kBatteries[] = {"isomorphism", "shifted", "laplace", "vacant", "moments", "crossval", "exact", "all"};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ";" : "") + items[i];
  return out;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <class T, class F>
std::string array(const std::vector<T>& values, F format) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + format(values[i]);
  return out + "]";
}

std::string boolean(bool b) { return b ? "true" : "false"; }

/// Registers every configurable option on `app`, bound to `c`.
void add_options(CLI::App& app, RunConfig& c) {
  auto* g = app.add_option_group("graph");
  g->add_option("--gen", c.generator, "z<d>, tree<b>, or edges:<file> (lines 'x y weight')")->capture_default_str();
  g->add_option("--center", c.center, "window center")->capture_default_str();
  g->add_option("--radius", c.radius, "window radius (graph distance)")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  g->add_option("--radii", c.radii, "window schedule for limits")->delimiter(';')->capture_default_str();

  auto* m = app.add_option_group("model");
  m->add_option("--u", c.level, "interlacement level")->capture_default_str();
  m->add_option("--levels", c.levels, "level schedule for asymptotics")->delimiter(';')->capture_default_str();
  m->add_option("--V", c.potential, "potential entries vertex:value")->delimiter(';');
  m->add_option("--K", c.k_set, "vertex set K")->delimiter(';');
  m->add_option("--coords", c.coords, "coordinates to test")->delimiter(';');
  m->add_option("--a", c.shift, "GFF shift")->capture_default_str();
  m->add_option("--lambda", c.rate, "resolvent rate")->capture_default_str();
  m->add_option("--sampler", c.sampler, "collapse, excursion, hitting, or gff")
      ->check(CLI::IsMember({"collapse", "excursion", "hitting", "gff"}))
      ->capture_default_str();

  auto* s = app.add_option_group("statistics");
  s->add_option("--n", c.samples, "sample count")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--seed", c.seed, "master seed")->capture_default_str();
  s->add_option("--tol", c.tol, "window-limit tolerance")->capture_default_str();
  s->add_option("--sigma", c.sigmas, "moment checks pass within this many standard errors")->capture_default_str();
  s->add_option("--alpha", c.alpha, "family-wise KS level")->capture_default_str();
  s->add_option("--pairs", c.pairs, "random (x, K) pairs for the exact suite")->capture_default_str();

  auto* e = app.add_option_group("exact");
  e->add_flag("--green", c.green, "write green.csv");
  e->add_flag("--cap", c.capacity, "write equilibrium.csv and the capacity of K");
  e->add_flag("--laplace", c.laplace, "exact Laplace transform for V at level u");
  e->add_flag("--limit", c.limit, "window-limit values along --radii");
  e->add_flag("--resolvent-check", c.resolvent, "collapsed resolvent identity for V and --lambda");
  e->add_flag("--hitting", c.hitting, "write hitting.csv for K");
}

struct Context {
  std::unique_ptr<GraphGenerator> gen;
  std::unique_ptr<WeightedWindow> window;
};

Context build(const RunConfig& c) {
  Context ctx;
  try {
    ctx.gen = make_generator(c.generator);
  } catch (const std::exception& e) {
    throw UsageError("gen", e.what());
  }
  Vertex center;
  try {
    center = ctx.gen->resolve(c.center);
  } catch (const DomainError& e) {
    throw UsageError("center", e.what());
  }
  ctx.window = std::make_unique<WeightedWindow>(build_window(*ctx.gen, center, c.radius));
  return ctx;
}

int vertex_index(const Context& ctx, const std::string& text, const char* field) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](char ch) { return ch == '{' || ch == '}'; }), t.end());
  try {
    return ctx.window->index_of(ctx.gen->resolve(t));
  } catch (const DomainError&) {
    throw UsageError(field, "vertex '" + text + "' is not in the window");
  }
}

std::vector<int> vertex_indices(const Context& ctx, const std::vector<std::string>& list, const char* field) {
  std::vector<int> out;
  for (const auto& s : list) {
    const int i = vertex_index(ctx, s, field);
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  return out;
}

std::vector<double> potential_vector(const Context& ctx, const std::vector<std::string>& entries) {
  std::vector<double> v(ctx.window->size(), 0.0);
  for (const auto& entry : entries) {
    const auto colon = entry.rfind(':');
    if (colon == std::string::npos) throw UsageError("V", "expected vertex:value, got '" + entry + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(entry.substr(colon + 1), &used);
      if (used != entry.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("V", "malformed value in '" + entry + "'");
    }
    if (!(value >= 0.0) || !std::isfinite(value)) throw UsageError("V", "potential must be finite and >= 0");
    v[static_cast<std::size_t>(vertex_index(ctx, entry.substr(0, colon), "V"))] += value;
  }
  return v;
}

VertexFunction potential_function(const Context& ctx, const std::vector<double>& v) {
  VertexFunction out;
  for (int s : support_of(v)) out.emplace_back(ctx.window->vertex(static_cast<std::size_t>(s)), v[static_cast<std::size_t>(s)]);
  return out;
}

void validate(const RunConfig& c) {
  if (!(c.level >= 0.0) || !std::isfinite(c.level)) throw UsageError("u", "level must be finite and >= 0");
  if (c.radius < 0) throw UsageError("radius", "must be >= 0");
  if (c.radii.empty()) throw UsageError("radii", "schedule is empty");
  for (std::size_t i = 0; i < c.radii.size(); ++i) {
    if (c.radii[i] < 0) throw UsageError("radii", "radii must be >= 0");
    if (i > 0 && c.radii[i] <= c.radii[i - 1]) throw UsageError("radii", "schedule must be strictly increasing");
  }
  if (c.levels.empty()) throw UsageError("levels", "schedule is empty");
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    if (!(c.levels[i] > 0.0) || !std::isfinite(c.levels[i])) throw UsageError("levels", "levels must be positive");
    if (i > 0 && c.levels[i] <= c.levels[i - 1]) throw UsageError("levels", "schedule must be strictly increasing");
  }
  if (!(c.rate > 0.0) || !std::isfinite(c.rate)) throw UsageError("lambda", "rate must be positive");
  if (c.samples == 0) throw UsageError("n", "must be positive");
  if (!(c.tol > 0.0)) throw UsageError("tol", "must be positive");
  if (!(c.sigmas > 0.0)) throw UsageError("sigma", "must be positive");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw UsageError("alpha", "must lie in (0, 1)");
  if (!std::isfinite(c.shift)) throw UsageError("a", "must be finite");
}

VerifyOptions verify_options(const Invocation& inv) {
  VerifyOptions o;
  o.samples = inv.config.samples;
  o.seed = inv.config.seed;
  o.workers = inv.workers;
  o.sigmas = inv.config.sigmas;
  o.family_alpha = inv.config.alpha;
  return o;
}

void write_window(const fs::path& dir, const WeightedWindow& window) { write_json(dir / "window.json", window.to_json()); }

int cmd_window(const Invocation& inv, const Context& ctx, std::ostream& out) {
  const fs::path dir = inv.out_dir;
  write_window(dir, *ctx.window);
  out << "window " << ctx.gen->name() << " radius " << inv.config.radius << ": " << ctx.window->size()
      << " vertices, boundary weight " << format_double(ctx.window->total_boundary_weight()) << ", hash "
      << hex64(ctx.window->hash()) << "\n";
  return 0;
}

int cmd_exact(const Invocation& inv, const Context& ctx, std::ostream& out) {
  const RunConfig& c = inv.config;
  const WeightedWindow& window = *ctx.window;
  const fs::path dir = inv.out_dir;
  write_window(dir, window);
  const bool none = !(c.green || c.capacity || c.laplace || c.limit || c.resolvent || c.hitting);
  int code = 0;

  if (c.green || none) {
    const GreenMatrix green = green_killed(window);
    write_file(dir / "green.csv", green_csv(green));
    nlohmann::json j = {{"schema", "ri.green/1"},
                        {"kind", "killed"},
                        {"window_hash", hex64(window.hash())},
                        {"covariance_hash", hex64(green.hash())},
                        {"asymmetry", green.asymmetry},
                        {"min_eigenvalue", green.min_eigenvalue()},
                        {"g_center", green(0, 0)}};
    if (c.limit) {
      const Vertex o = ctx.gen->origin();
      const WindowLimit lim = green_limit(*ctx.gen, o, o, c.radii, c.tol);
      j["limit"] = {{"value", lim.value}, {"radius", lim.radius}, {"iterates", lim.iterates}};
      out << "g(origin,origin) limit = " << format_double(lim.value) << " (radius " << lim.radius << ")\n";
    }
    write_json(dir / "green.json", j);
    out << "g_U(center,center) = " << format_double(green(0, 0)) << "\n";
  }

  std::vector<int> k;
  if (c.capacity || c.hitting) {
    k = vertex_indices(ctx, c.k_set, "K");
    if (k.empty()) throw UsageError("K", "--cap and --hitting need a nonempty K");
  }
  if (c.capacity) {
    const EquilibriumMeasure measure = equilibrium(window, k);
    write_file(dir / "equilibrium.csv", equilibrium_csv(window, measure));
    nlohmann::json kj = nlohmann::json::array();
    for (int x : k) kj.push_back(to_string(window.vertex(static_cast<std::size_t>(x))));
    write_json(dir / "capacity.json", {{"schema", "ri.capacity/1"},
                                       {"window_hash", hex64(window.hash())},
                                       {"K", kj},
                                       {"capacity", measure.capacity}});
    out << "capacity = " << format_double(measure.capacity) << "\n";
  }
  if (c.hitting) {
    write_file(dir / "hitting.csv", vertex_values_csv(window, hitting_profile(window, k)));
  }

  if (c.laplace || c.resolvent || (c.limit && !c.potential.empty())) {
    if (c.potential.empty()) throw UsageError("V", "--laplace and --resolvent-check need a potential");
    const std::vector<double> v = potential_vector(ctx, c.potential);
    if (c.laplace || c.limit) {
      nlohmann::json j = {{"schema", "ri.laplace/1"}, {"window_hash", hex64(window.hash())}, {"u", c.level}};
      if (c.laplace) {
        const PotentialFunction fk = feynman_kac(window, v);
        write_file(dir / "potential.csv", vertex_values_csv(window, fk.values));
        j["exact_finite"] = laplace_exact_finite(window, v, c.level);
        j["exponent_killed"] = laplace_exponent_killed(window, v);
        j["sup_green_potential"] = sup_green_potential(window, v);
        out << "E[exp(-<V,L>)] on window = " << format_double(j["exact_finite"].get<double>()) << "\n";
      }
      if (c.limit) {
        const LaplaceLimit lim = laplace_exact_limit(*ctx.gen, potential_function(ctx, v), c.level, c.radii, c.tol);
        j["limit"] = {{"value", lim.value},
                      {"exponent", lim.exponent},
                      {"sup_gv", lim.sup_gv},
                      {"radius", lim.radius},
                      {"iterates", lim.iterates}};
        out << "E[exp(-<V,L>)] limit = " << format_double(lim.value) << " (radius " << lim.radius << ")\n";
      }
      write_json(dir / "laplace.json", j);
    }
    if (c.resolvent) {
      const TestReport report = resolvent_check(window, v, c.rate);
      write_json(dir / "resolvent.json", report.to_json());
      out << report.summary();
      if (!report.pass()) code = 1;
    }
  }
  return code;
}

int cmd_sample(const Invocation& inv, const Context& ctx, std::ostream& out) {
  const RunConfig& c = inv.config;
  const WeightedWindow& window = *ctx.window;
  const fs::path dir = inv.out_dir;
  write_window(dir, window);
  nlohmann::json side = {{"schema", "ri.samples/1"},
                         {"sampler", c.sampler},
                         {"seed", c.seed},
                         {"streams", "sample i uses stream i"},
                         {"samples", c.samples},
                         {"window_hash", hex64(window.hash())},
                         {"vertices", window.size()}};
  if (c.sampler == "gff") {
    const GreenMatrix green = green_killed(window);
    const GaussianSampleBatch batch = sample_gff(green, c.samples, c.seed, inv.workers);
    side["covariance_hash"] = hex64(batch.covariance_hash);
    side["jitter"] = batch.jitter;
    write_file(dir / "samples.csv", samples_csv(batch.samples));
  } else {
    const SamplerKind kind = parse_sampler(c.sampler);
    const CollapsedChain chain = collapse(window);
    EquilibriumMeasure measure;
    if (kind == SamplerKind::hitting_soup) {
      const std::vector<int> k = vertex_indices(ctx, c.k_set, "K");
      if (k.empty()) throw UsageError("K", "the hitting sampler needs a nonempty K");
      measure = equilibrium(window, k);
      side["capacity"] = measure.capacity;
    }
    const OccupationBatch batch = sample_occupation(kind, chain, c.level, c.samples, c.seed, inv.workers, &measure);
    side["u"] = c.level;
    side["star_lambda"] = chain.lambda(static_cast<std::size_t>(chain.star()));
    side["excursions"] = batch.excursions;
    write_file(dir / "samples.csv", samples_csv(batch.values));
  }
  write_json(dir / "samples.json", side);
  out << "wrote " << c.samples << " " << c.sampler << " samples on " << window.size() << " vertices\n";
  return 0;
}

std::vector<int> coords_or_default(const Context& ctx, const RunConfig& c) {
  if (c.coords.empty()) return default_coordinates(*ctx.window);
  return vertex_indices(ctx, c.coords, "coords");
}

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

int finish_reports(const std::vector<TestReport>& reports, const fs::path& dir, std::ostream& out) {
  std::string summary = "test,pass,checks,failed,error\n";
  bool all = true;
  for (const TestReport& r : reports) {
    write_json(dir / ("report-" + r.name + ".json"), r.to_json());
    const auto failed = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& ch) { return !ch.pass; });
    summary += r.name + "," + (r.pass() ? "true" : "false") + "," + std::to_string(r.checks.size()) + "," +
               std::to_string(failed) + "," + csv_field(r.error) + "\n";
    out << r.summary();
    all = all && r.pass();
  }
  write_file(dir / "summary.csv", summary);
  return all ? 0 : 1;
}

/// Runs `body`; a thrown error becomes a failed report with the message recorded.
template <class F>
TestReport guarded(const char* name, std::uint64_t seed, F body) {
  try {
    return body();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    TestReport r;
    r.name = name;
    r.seed = seed;
    r.error = e.what();
    return r;
  }
}

int cmd_verify(const Invocation& inv, const Context& ctx, std::ostream& out) {
  const RunConfig& c = inv.config;
  const WeightedWindow& window = *ctx.window;
  const fs::path dir = inv.out_dir;
  write_window(dir, window);
  const VerifyOptions options = verify_options(inv);
  const std::string& b = inv.battery;
  const bool all = b == "all";
  std::vector<TestReport> reports;

  // Resolve every vertex list up front so usage errors surface before any sampling.
  const std::vector<int> coords = coords_or_default(ctx, c);
  const std::vector<int> k = vertex_indices(ctx, c.k_set, "K");
  const std::vector<double> v = potential_vector(ctx, c.potential);

  if (all || b == "isomorphism") {
    reports.push_back(guarded("isomorphism", c.seed, [&] { return isomorphism_test(window, c.level, coords, options); }));
  }
  if (all || b == "shifted") {
    reports.push_back(guarded("shifted", c.seed,
                              [&] { return shifted_isomorphism_test(window, c.level, c.shift, coords, options); }));
  }
  if (all || b == "laplace") {
    if (support_of(v).empty() && !all) throw UsageError("V", "laplace needs a potential");
    if (!support_of(v).empty()) {
      reports.push_back(guarded("laplace", c.seed, [&] {
        return laplace_test(window, c.level, v, options, c.limit ? ctx.gen.get() : nullptr, c.radii, c.tol);
      }));
    }
  }
  if (all || b == "vacant") {
    if (k.empty() && !all) throw UsageError("K", "vacant needs a nonempty K");
    if (!k.empty()) reports.push_back(guarded("vacant", c.seed, [&] { return vacant_test(window, k, c.level, options); }));
  }
  if (all || b == "moments") {
    reports.push_back(guarded("moments", c.seed, [&] { return moment_test(window, c.level, coords, options); }));
  }
  if (all || b == "crossval") {
    std::vector<int> cv = coords;
    if (c.coords.empty()) {
      cv.resize(window.size());
      for (std::size_t i = 0; i < cv.size(); ++i) cv[i] = static_cast<int>(i);
    }
    reports.push_back(guarded("crossval", c.seed, [&] { return crossval_test(window, c.level, cv, k, options); }));
  }
  if (all || b == "exact") {
    reports.push_back(guarded("exact", c.seed, [&] {
      TestReport r = exact_identity_test(window, c.pairs, c.seed);
      if (!support_of(v).empty()) {
        const TestReport res = resolvent_check(window, v, c.rate);
        r.checks.insert(r.checks.end(), res.checks.begin(), res.checks.end());
      }
      return r;
    }));
  }
  return finish_reports(reports, dir, out);
}

int cmd_asymptotics(const Invocation& inv, const Context& ctx, std::ostream& out) {
  const RunConfig& c = inv.config;
  const fs::path dir = inv.out_dir;
  write_window(dir, *ctx.window);
  const std::vector<int> coords = coords_or_default(ctx, c);
  const int base = vertex_index(ctx, c.center, "center");
  std::vector<TestReport> reports;
  reports.push_back(guarded("asymptotics", c.seed, [&] {
    return asymptotics_test(*ctx.window, c.levels, coords, base, verify_options(inv));
  }));
  return finish_reports(reports, dir, out);
}

fs::path default_root() {
  const char* env = std::getenv("RI_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path("ri-runs");
}

}  // namespace

std::string to_config_text(const RunConfig& c) {
  const auto num = [](double d) { return format_double(d); };
  const auto integer = [](int i) { return std::to_string(i); };
  std::ostringstream o;
  o << "# graph\n";
  o << "gen = " << quoted(c.generator) << "\n";
  o << "center = " << quoted(c.center) << "\n";
  o << "radius = " << c.radius << "\n";
  o << "radii = " << array(c.radii, integer) << "\n";
  o << "\n# model\n";
  o << "u = " << num(c.level) << "\n";
  o << "levels = " << array(c.levels, num) << "\n";
  o << "V = " << quoted(join(c.potential)) << "\n";
  o << "K = " << quoted(join(c.k_set)) << "\n";
  o << "coords = " << quoted(join(c.coords)) << "\n";
  o << "a = " << num(c.shift) << "\n";
  o << "lambda = " << num(c.rate) << "\n";
  o << "sampler = " << quoted(c.sampler) << "\n";
  o << "\n# statistics\n";
  o << "n = " << c.samples << "\n";
  o << "seed = " << c.seed << "\n";
  o << "tol = " << num(c.tol) << "\n";
  o << "sigma = " << num(c.sigmas) << "\n";
  o << "alpha = " << num(c.alpha) << "\n";
  o << "pairs = " << c.pairs << "\n";
  o << "\n# exact\n";
  o << "green = " << boolean(c.green) << "\n";
  o << "cap = " << boolean(c.capacity) << "\n";
  o << "laplace = " << boolean(c.laplace) << "\n";
  o << "limit = " << boolean(c.limit) << "\n";
  o << "resolvent-check = " << boolean(c.resolvent) << "\n";
  o << "hitting = " << boolean(c.hitting) << "\n";
  return o.str();
}

namespace {

/// Builds the parser; `inv` receives the parsed values.
std::unique_ptr<CLI::App> make_app(Invocation& inv, std::string& out_flag) {
  auto app = std::make_unique<CLI::App>("Random interlacements: exact potential theory, samplers, verification.",
                                        "ri");
  app->footer(kFooter);
  app->require_subcommand(1);
  app->set_config("--config", "", "read options from a config file (flags override it)");
  add_options(*app, inv.config);
  app->add_option("--workers", inv.workers, "worker threads (results do not depend on it)")
      ->configurable(false)
      ->check(CLI::PositiveNumber);
  app->add_option("--out", out_flag, "run directory")->configurable(false);

  app->add_subcommand("window", "build a window and write window.json")->fallthrough();
  app->add_subcommand("exact", "Green function, capacity, hitting, Laplace and resolvent values")->fallthrough();
  app->add_subcommand("sample", "occupation fields or GFF samples")->fallthrough();
  auto* verify = app->add_subcommand("verify", "statistical and exact test batteries")->fallthrough();
  verify->add_option("battery", inv.battery, "isomorphism, shifted, laplace, vacant, moments, crossval, exact, all")
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(kBatteries), std::end(kBatteries))))
      ->capture_default_str();
  app->add_subcommand("asymptotics", "large-u behaviour along --levels")->fallthrough();
  return app;
}

void finalize(Invocation& inv, CLI::App& app, const std::string& out_flag) {
  for (const auto* sub : app.get_subcommands()) inv.command = sub->get_name();
  for (auto* list : {&inv.config.potential, &inv.config.k_set, &inv.config.coords}) {
    std::erase_if(*list, [](const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; });
  }
  validate(inv.config);
  const fs::path dir = out_flag.empty() ? default_root() / (inv.command + "-seed" + std::to_string(inv.config.seed))
                                        : fs::path(out_flag);
  inv.out_dir = dir.string();
}

}  // namespace

Invocation parse(const std::vector<std::string>& args) {
  Invocation inv;
  inv.workers = default_workers();
  std::string out_flag;
  auto app = make_app(inv, out_flag);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app->parse(reversed);
  finalize(inv, *app, out_flag);
  return inv;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  inv.workers = default_workers();
  std::string out_flag;
  auto app = make_app(inv, out_flag);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app->parse(reversed);
    finalize(inv, *app, out_flag);
  } catch (const CLI::ParseError& e) {
    return app->exit(e, out, err) == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    const Context ctx = build(inv.config);
    write_file(fs::path(inv.out_dir) / "config.toml", to_config_text(inv.config));
    if (inv.command == "window") return cmd_window(inv, ctx, out);
    if (inv.command == "exact") return cmd_exact(inv, ctx, out);
    if (inv.command == "sample") return cmd_sample(inv, ctx, out);
    if (inv.command == "verify") return cmd_verify(inv, ctx, out);
    return cmd_asymptotics(inv, ctx, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error (" << inv.command << "): " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ri::cli
