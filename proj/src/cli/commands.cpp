#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgsol/cli.hpp"
#include "kgsol/dispersion.hpp"
#include "kgsol/modes.hpp"
#include "kgsol/propagator.hpp"
#include "kgsol/signalfront.hpp"
#include "kgsol/specfun.hpp"

namespace kgsol::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const std::vector<std::string> kCommands = {"dispersion", "mode-field", "propagator-check",
                                            "front-speed", "specfun-test"};

// Everything a subcommand may read. Unset transverse numbers stay NaN.
struct Options {
  std::string command;
  double mu = 1.0;
  double c = 1.0;
  std::string branch = "super";
  double q = kNaN;
  double Q = kNaN;
  std::string kz;
  double kzScalar = kNaN;
  std::string rho;
  std::string z;
  double t = 0.0;
  std::string grid = "default";
  std::string tauTilde;
  double tolerance = kNaN;
  double relTol = 1e-10;
  double absTol = 1e-14;
  std::size_t maxPanels = 1'000'000;
  // Two halvings past the library default: five points only pin the
  // extrapolated limit to ~1e-4.
  std::string regulatorSchedule = "0.2,0.1,0.05,0.025,0.0125,0.00625,0.003125";
  double kernelMass = 1.0;
  double omega0 = 20.0;
  double gamma = 0.5;
  std::string zList = "5,10,15,20";
  std::size_t size = std::size_t{1} << 20;
  double window = 256.0;
  bool taper = false;
  double threshold = 1e-3;
  std::string thresholdSweep = "1e-4,1e-3,1e-2,1e-1";
  double frontSlack = 5e-3;
  double seriesBefore = 2.0;
  double seriesAfter = 10.0;
  std::size_t seriesStride = 16;
  std::string table = KGSOL_ORACLE_TABLE;
  std::string output;
  std::string format;
  unsigned threads = 0;
};

struct Outcome {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::vector<std::string> notes;
  json summary = json::object();
  std::map<std::string, bool> assertions;
  std::vector<std::pair<std::string, std::string>> sideFiles;  // path, content
  std::vector<std::string> nonConvergence;
};

std::string cell(const json& v) {
  if (v.is_number_float()) return formatDouble(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "nan";
  return v.dump();
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

std::string csvText(const std::string& configLine, const Outcome& o,
                    const std::vector<std::string>& columns,
                    const std::vector<std::vector<json>>& rows) {
  std::ostringstream s;
  s << "# " << configLine << '\n';
  for (const auto& n : o.notes) s << "# " << n << '\n';
  for (const auto& [name, ok] : o.assertions) s << "# check " << name << ": " << (ok ? "pass" : "FAIL") << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) s << (i ? "," : "") << columns[i];
  s << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s << (i ? "," : "") << cell(r[i]);
    s << '\n';
  }
  return s.str();
}

std::string require_output_dir(const std::string& path) {
  if (path.empty()) throw DomainError("--output is required");
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) {
    throw DomainError("output directory '" + dir.string() + "' does not exist");
  }
  return path;
}

std::string stem_of(const std::string& path) {
  const fs::path p(path);
  return (p.parent_path() / p.stem()).string();
}

Params params_of(const Options& o) {
  Params p{o.mu, o.c};
  p.validate();
  return p;
}

double transverse_of(const Options& o) {
  if (o.branch == "super") {
    if (std::isnan(o.q)) throw DomainError("--q is required on the super branch");
    if (!(o.q > 0.0)) throw DomainError("--q must be > 0");
    return o.q;
  }
  if (o.branch == "sub") {
    if (std::isnan(o.Q)) throw DomainError("--Q is required on the sub branch");
    if (!(o.Q > 0.0)) throw DomainError("--Q must be > 0");
    return o.Q;
  }
  throw DomainError("--branch must be 'sub' or 'super'");
}

QuadratureSpec quadrature_of(const Options& o) {
  QuadratureSpec s;
  s.relTol = o.relTol;
  s.absTol = o.absTol;
  s.maxPanels = o.maxPanels;
  s.regulatorSchedule = parseRange(o.regulatorSchedule);
  s.validate();
  return s;
}

json quad_json(const QuadratureResult& r) {
  return {{"value", num(r.value)},
          {"errorEstimate", num(r.errorEstimate)},
          {"panelsUsed", r.panelsUsed},
          {"converged", r.converged}};
}

// ---------------------------------------------------------------- dispersion

Outcome run_dispersion(const Options& o) {
  const Params p = params_of(o);
  const double tr = transverse_of(o);
  if (o.kz.empty()) throw DomainError("--kz is required");
  const auto kzs = parseRange(o.kz);
  const bool super = o.branch == "super";

  Outcome out;
  out.columns = {"kz", "omega", "vPhase", "vGroup"};
  const double c2 = p.c * p.c;
  // Expected side of c for |vGroup|: +1 above, -1 below, 0 equal.
  const int side = !super ? -1 : (tr > p.mu ? 1 : (tr < p.mu ? -1 : 0));
  bool sideOk = true;
  double worstProduct = 0.0;
  std::size_t skipped = 0;
  for (double kz : kzs) {
    if (super && kz * kz + (p.mu - tr) * (p.mu + tr) < 0.0) {
      ++skipped;
      continue;
    }
    const ModeSpec m = super ? ModeSpec::superluminal(tr, kz, p) : ModeSpec::subluminal(tr, kz, p);
    const DispersionPoint d = dispersionPoint(m);
    out.rows.push_back({kz, d.omega, num(d.vPhase), num(d.vGroup)});
    if (d.vGroup) {
      const double g = std::abs(*d.vGroup);
      if (side > 0 && !(g > p.c)) sideOk = false;
      if (side < 0 && !(g < p.c)) sideOk = false;
      if (side == 0 && g != p.c) sideOk = false;
    }
    if (d.vPhase && d.vGroup) {
      const double sgn = kz > 0.0 ? 1.0 : -1.0;
      worstProduct = std::max(worstProduct, std::abs(*d.vPhase * *d.vGroup - c2 * sgn) / c2);
    }
  }
  if (out.rows.empty()) {
    throw DomainError("no --kz value has a real frequency; need |kz| >= sqrt(q^2 - mu^2)");
  }
  if (skipped > 0) {
    out.notes.push_back(std::to_string(skipped) +
                        " kz values with |kz| < sqrt(q^2 - mu^2) omitted (imaginary omega)");
  }
  const char* sideName = side > 0 ? "vGroupAboveC" : (side < 0 ? "vGroupBelowC" : "vGroupEqualsC");
  out.assertions[sideName] = sideOk;
  out.assertions["phaseGroupProduct"] = worstProduct <= 1e-13;
  out.summary = {{"rows", out.rows.size()},
                 {"skippedImaginaryOmega", skipped},
                 {"maxPhaseGroupProductError", worstProduct}};
  return out;
}

// ---------------------------------------------------------------- mode-field

Outcome run_mode_field(const Options& o) {
  const Params p = params_of(o);
  const double tr = transverse_of(o);
  if (std::isnan(o.kzScalar)) throw DomainError("--kz is required");
  if (o.rho.empty()) throw DomainError("--rho is required");
  if (o.z.empty()) throw DomainError("--z is required");
  const bool super = o.branch == "super";
  const ModeSpec m = super ? ModeSpec::superluminal(tr, o.kzScalar, p)
                           : ModeSpec::subluminal(tr, o.kzScalar, p);
  m.validate();
  const auto rhos = parseRange(o.rho);
  const auto zs = parseRange(o.z);
  if (!std::isfinite(o.t)) throw DomainError("--t must be finite");
  for (double r : rhos) {
    if (r < 0.0) throw DomainError("--rho values must be >= 0");
    if (super && r == 0.0) throw DomainError("the superluminal mode is singular at rho = 0");
  }
  std::vector<SpacetimePoint> pts;
  for (double r : rhos)
    for (double z : zs) pts.push_back({r, z, o.t});
  const auto values =
      evaluateGrid([&](const SpacetimePoint& sp) { return modeField(sp, m); }, pts, o.threads);

  Outcome out;
  out.columns = {"rho", "z", "re", "im", "abs"};
  bool finite = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& v = values[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) finite = false;
    const ModeSample smp =
        super ? superluminalModeSample(pts[i], m) : besselBeamSample(pts[i], m);
    out.rows.push_back({pts[i].rho, pts[i].z, v.real(), v.imag(), smp.modulus()});
  }
  out.assertions["finiteField"] = finite;
  out.summary = {{"points", pts.size()}, {"omega", omegaOf(m)}};
  return out;
}

// ---------------------------------------------------------- propagator-check

Outcome run_propagator_check(const Options& o) {
  const Params p = params_of(o);
  if (!(p.mu > 0.0)) throw DomainError("propagator-check needs --mu > 0");
  const QuadratureSpec spec = quadrature_of(o);
  const double tol = std::isnan(o.tolerance) ? 1e-6 : o.tolerance;
  if (!(tol > 0.0)) throw DomainError("--tolerance must be > 0");
  if (!(o.kernelMass > 0.0)) throw DomainError("--kernel-mass must be > 0");

  std::vector<double> rhos, taus;
  if (o.grid == "default") {
    if (!o.rho.empty() || !o.tauTilde.empty()) {
      throw DomainError("--rho/--tau-tilde need --grid custom");
    }
    for (double v : {0.5, 1.0, 2.0, 4.0, 8.0}) rhos.push_back(v / p.mu);
    for (double v : {0.0, 0.5, 1.0, 2.0, 4.0}) taus.push_back(v / p.mu);
  } else if (o.grid == "custom") {
    if (o.rho.empty() || o.tauTilde.empty()) {
      throw DomainError("--grid custom needs --rho and --tau-tilde");
    }
    rhos = parseRange(o.rho);
    taus = parseRange(o.tauTilde);
  } else {
    throw DomainError("--grid must be 'default' or 'custom'");
  }
  for (double r : rhos)
    if (!(r > 0.0)) throw DomainError("--rho values must be > 0");
  for (double t : taus)
    if (!(t >= 0.0)) throw DomainError("--tau-tilde values must be >= 0");
  for (double r : rhos)
    for (double t : taus)
      if (std::hypot(r, t) < kMinSpacelikeInterval / p.mu) {
        throw DomainError("grid point closer to the light cone than 0.05/mu");
      }

  Outcome out;
  out.columns = {"rho", "tauTilde", "lhs", "rhs", "relError", "errorEstimate", "panelsUsed",
                 "converged"};
  const auto reports = checkSpacelikeGrid(rhos, taus, p, spec, o.threads);
  double maxRel = 0.0;
  json grid = json::array();
  for (const auto& r : reports) {
    maxRel = std::max(maxRel, r.relError);
    out.rows.push_back({r.point.rho, r.point.z, r.lhs, r.rhs, r.relError,
                        r.quadrature.errorEstimate, r.quadrature.panelsUsed,
                        r.quadrature.converged});
    if (!r.quadrature.converged) {
      out.nonConvergence.push_back("spacelike quadrature at rho=" + formatDouble(r.point.rho) +
                                   " tauTilde=" + formatDouble(r.point.z));
    }
  }
  out.assertions["spacelikeIdentity"] = maxRel <= tol;

  // Inner kernels against their J0 forms at ten points of equal 2D interval.
  auto kernel_constants = [&](bool timelike) {
    const double M = o.kernelMass;
    const double interval = 1.0 / M;
    std::vector<double> ratios;
    json pts = json::array();
    for (int i = 0; i < 10; ++i) {
      const double a = 0.1 * i * interval;
      KernelValue k;
      double z, t;
      if (timelike) {
        z = a;
        t = std::hypot(interval, a) / p.c;
        k = innerKernelTimelike(M, z, t, p, spec);
      } else {
        t = a / p.c;
        z = std::hypot(interval, a);
        k = innerKernelSpacelike(M, z, t, p, spec);
      }
      const double ratio = k.value / besselJ0(M * interval);
      ratios.push_back(ratio);
      if (!k.quadrature.converged) {
        out.nonConvergence.push_back(std::string(timelike ? "timelike" : "spacelike") +
                                     " kernel at z=" + formatDouble(z) + " t=" + formatDouble(t));
      }
      pts.push_back({{"z", z}, {"t", t}, {"value", num(k.value)}, {"ratio", num(ratio)},
                     {"quadrature", quad_json(k.quadrature)}});
    }
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double spread = 0.0;
    for (double r : ratios) spread = std::max(spread, std::abs(r - mean) / std::abs(mean));
    return std::make_tuple(mean, spread, pts);
  };
  const auto [tlConst, tlSpread, tlPts] = kernel_constants(true);
  const auto [slConst, slSpread, slPts] = kernel_constants(false);
  out.assertions["timelikeKernelConstant"] = tlSpread <= 1e-6;
  out.assertions["spacelikeKernelConstant"] = slSpread <= 1e-6;

  // Timelike propagator: equal-lambda pair and the two regulators.
  auto regulated_json = [&](const RegulatedResult& r) {
    json per = json::array();
    for (std::size_t i = 0; i < r.perEpsilon.size(); ++i) {
      per.push_back({{"epsilon", r.epsilons[i]}, {"quadrature", quad_json(r.perEpsilon[i])}});
    }
    return json{{"result", quad_json(r.result)},
                {"perEpsilon", per},
                {"extrapolationDiagonal", r.extrapolationDiagonal}};
  };
  const double lam = 1.0 / p.mu;
  const double rA = 0.3 * lam, rB = 0.6 * lam;
  const double tA = std::hypot(lam, rA), tB = std::hypot(lam, rB);
  const auto pA = timelikePropagator(rA, tA, p, spec, Regulator::Exponential);
  const auto pB = timelikePropagator(rB, tB, p, spec, Regulator::Exponential);
  const auto pE = timelikePropagator(0.5 * lam, 1.5 * lam, p, spec, Regulator::Exponential);
  const auto pG = timelikePropagator(0.5 * lam, 1.5 * lam, p, spec, Regulator::Gaussian);
  const double lambdaDiff =
      std::abs(pA.result.value - pB.result.value) / std::abs(pB.result.value);
  const double regDiff = std::abs(pE.result.value - pG.result.value) / std::abs(pG.result.value);
  out.assertions["timelikeLambdaOnly"] = lambdaDiff <= 1e-4;
  out.assertions["timelikeRegulatorAgreement"] = regDiff <= 1e-5;
  for (const auto* r : {&pA, &pB, &pE, &pG}) {
    if (!r->result.converged) out.nonConvergence.push_back("regulated timelike propagator");
  }

  out.summary = {
      {"mu", p.mu},
      {"c", p.c},
      {"tolerance", tol},
      {"maxRelError", maxRel},
      {"grid", {{"rho", rhos}, {"tauTilde", taus}}},
      {"kernelConstants",
       {{"timelike", {{"constant", num(tlConst)}, {"relSpread", num(tlSpread)}, {"points", tlPts}}},
        {"spacelike",
         {{"constant", num(slConst)}, {"relSpread", num(slSpread)}, {"points", slPts}}}}},
      {"timelike",
       {{"equalLambda",
         {{"lambda", lam},
          {"a", {{"rho", rA}, {"tau", tA}, {"regulated", regulated_json(pA)}}},
          {"b", {{"rho", rB}, {"tau", tB}, {"regulated", regulated_json(pB)}}},
          {"relDifference", num(lambdaDiff)}}},
        {"regulators",
         {{"rho", 0.5 * lam},
          {"tau", 1.5 * lam},
          {"exponential", regulated_json(pE)},
          {"gaussian", regulated_json(pG)},
          {"relDifference", num(regDiff)}}}}}};
  return out;
}

// --------------------------------------------------------------- front-speed

Outcome run_front_speed(const Options& o, const std::string& outputPath) {
  const Params p = params_of(o);
  const double tr = transverse_of(o);
  FrontExperimentConfig cfg;
  cfg.law = o.branch == "super" ? PropagationLaw::superluminalBranch(tr, p)
                                : PropagationLaw::subluminalBranch(tr, p);
  cfg.omega0 = o.omega0;
  cfg.gamma = o.gamma;
  cfg.zList = parseRange(o.zList);
  cfg.grid.size = o.size;
  cfg.grid.window = o.window;
  cfg.grid.taper = o.taper;
  cfg.threshold = o.threshold;
  cfg.thresholdSweep = parseRange(o.thresholdSweep);
  cfg.frontSlack = o.frontSlack;
  cfg.threads = o.threads;
  cfg.keepSeries = true;
  cfg.validate();
  if (o.seriesStride < 1) throw DomainError("--series-stride must be >= 1");
  const std::size_t stride = o.seriesStride;
  if (!(o.seriesBefore >= 0.0) || !(o.seriesAfter >= 0.0)) {
    throw DomainError("--series-before/--series-after must be >= 0");
  }
  // Dry validation of the grid before the expensive part.
  {
    SpectrumGrid g = cfg.grid;
    g.horizon = cfg.zList.back() / p.c;
    SpectrumGrid probe = g;
    probe.size = 2;  // cheap: checks periodization and window, not FFT size
    if (!(cfg.grid.size >= 2 && (cfg.grid.size & (cfg.grid.size - 1)) == 0)) {
      throw DomainError("--size must be a power of two");
    }
    sourceSpectrum(cfg.omega0, cfg.gamma, probe);
  }

  const FrontExperimentResult res = frontVelocityExperiment(cfg);
  const double c = p.c;
  Outcome out;
  out.columns = {"z", "frontArrival", "peakArrival", "lightArrival", "precursorLevel",
                 "threshold"};
  for (const auto& r : res.reports) {
    out.rows.push_back({r.z, r.frontArrival, r.peakArrival, r.z / c, r.precursorLevel,
                        r.threshold});
  }
  const bool dispersionless = o.branch == "super" && tr == p.mu;
  const bool superGroup = o.branch == "super" && tr > p.mu;
  out.assertions["causal"] = res.causal;
  out.assertions["frontVelocityInRange"] =
      res.frontVelocity >= 0.98 * c && res.frontWithinBound;
  if (superGroup) {
    out.assertions["peakSuperluminal"] = res.peakSuperluminal;
    out.assertions["peakNearPrediction"] =
        std::abs(res.peakVelocity - res.predictedGroupVelocity) <=
        0.1 * res.predictedGroupVelocity;
  } else if (dispersionless) {
    bool delay = true;
    const auto& r0 = res.reports.front();
    for (const auto& r : res.reports) {
      if (std::abs(r.frontArrival - r.z / c) > res.dt) delay = false;
      if (std::abs((r.peakArrival - r0.peakArrival) - (r.z - r0.z) / c) > res.dt) delay = false;
    }
    out.assertions["pureDelay"] = delay;
  } else {
    out.assertions["peakSubluminal"] = res.peakVelocity < c;
  }

  json sweep = json::array();
  for (const auto& s : res.sweep) {
    json arr = json::array();
    for (double a : s.frontArrivals) arr.push_back(num(a));
    sweep.push_back({{"threshold", s.threshold},
                     {"frontVelocity", num(s.frontVelocity)},
                     {"frontArrivals", arr}});
  }
  out.summary = {{"frontVelocity", num(res.frontVelocity)},
                 {"peakVelocity", num(res.peakVelocity)},
                 {"predictedGroupVelocity", num(res.predictedGroupVelocity)},
                 {"dt", res.dt},
                 {"causal", res.causal},
                 {"frontWithinBound", res.frontWithinBound},
                 {"peakSuperluminal", res.peakSuperluminal},
                 {"thresholdSweep", sweep}};

  // Side files: FrontReport table and a window of psi(t) per z.
  const std::string stem = stem_of(outputPath);
  Outcome table;
  table.assertions = out.assertions;
  out.sideFiles.push_back(
      {stem + ".reports.csv", csvText("front reports", table, out.columns, out.rows)});
  for (std::size_t i = 0; i < res.series.size(); ++i) {
    const auto& sig = res.series[i];
    std::vector<std::vector<json>> rows;
    const double t0 = sig.z / c - o.seriesBefore;
    const double t1 = sig.z / c + o.seriesAfter;
    for (std::size_t k = 0; k < sig.field.values.size(); k += stride) {
      const double t = sig.field.time(k);
      if (t < t0 || t > t1) continue;
      rows.push_back({t, sig.field.values[k], std::abs(sig.field.values[k]),
                      sig.envelope.values[k]});
    }
    Outcome none;
    out.sideFiles.push_back({stem + ".z" + std::to_string(i) + ".csv",
                             csvText("psi at z = " + formatDouble(sig.z), none,
                                     {"t", "psi", "absPsi", "envelope"}, rows)});
  }
  return out;
}

// -------------------------------------------------------------- specfun-test

Outcome run_specfun_test(const Options& o) {
  const double tol = std::isnan(o.tolerance) ? 1e-12 : o.tolerance;
  if (!(tol > 0.0)) throw DomainError("--tolerance must be > 0");
  std::ifstream in(o.table);
  if (!in) throw DomainError("cannot read oracle table '" + o.table + "'");
  struct Row {
    BesselKind kind;
    double x, ref;
  };
  std::vector<Row> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream s(line);
    std::string name, xs, vs;
    std::getline(s, name, ',');
    std::getline(s, xs, ',');
    std::getline(s, vs, ',');
    BesselKind kind;
    if (name == "J0") kind = BesselKind::J0;
    else if (name == "J1") kind = BesselKind::J1;
    else if (name == "K0") kind = BesselKind::K0;
    else if (name == "K1") kind = BesselKind::K1;
    else throw DomainError("oracle table: unknown function '" + name + "'");
    table.push_back({kind, parseRange(xs).at(0), std::stod(vs)});
  }
  if (table.empty()) throw DomainError("oracle table '" + o.table + "' has no rows");

  Outcome out;
  out.columns = {"function", "x", "reference", "value", "error"};
  out.notes.push_back("error: J relative to max(1,|reference|), K relative to |reference|");
  std::map<std::string, std::pair<double, double>> worst;  // name -> (error, x)
  for (const auto& r : table) {
    const double v = bessel(r.kind, r.x).value;
    const bool isJ = r.kind == BesselKind::J0 || r.kind == BesselKind::J1;
    const double scale = isJ ? std::max(1.0, std::abs(r.ref)) : std::abs(r.ref);
    const double err = std::abs(v - r.ref) / scale;
    out.rows.push_back({to_string(r.kind), r.x, r.ref, v, err});
    auto& w = worst[to_string(r.kind)];
    if (err >= w.first) w = {err, r.x};
  }
  double maxErr = 0.0;
  json per = json::object();
  for (const auto& [name, w] : worst) {
    per[name] = {{"maxError", w.first}, {"at", w.second}};
    maxErr = std::max(maxErr, w.first);
  }
  out.assertions["oracleAgreement"] = maxErr <= tol;

  // Derivative identities, fourth-order central differences.
  const double h = 1e-5;
  auto d4 = [h](double (*f)(double), double x) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
  };
  double dJ = 0.0, dK = 0.0;
  for (double x : {0.5, 1.0, 2.5, 7.0, 15.0, 30.0}) {
    dJ = std::max(dJ, std::abs(d4(besselJ0, x) + besselJ1(x)));
    dK = std::max(dK, std::abs(d4(besselK0, x) + besselK1(x)));
  }
  out.assertions["derivativeIdentities"] = dJ <= 1e-8 && dK <= 1e-8;
  out.summary = {{"tolerance", tol},
                 {"rows", table.size()},
                 {"maxError", maxErr},
                 {"perFunction", per},
                 {"derivativeJ0PlusJ1", dJ},
                 {"derivativeK0PlusK1", dK}};
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& argsIn, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expandConfigFile(argsIn, kCommands);
  } catch (const DomainError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  }

  Options o;
  CLI::App app{"Sub- and superluminal Klein-Gordon modes: dispersion, fields, propagator "
               "identities, signal fronts"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* s) {
    s->add_option("--mu", o.mu, "Compton wavenumber mc/hbar");
    s->add_option("--c", o.c, "light speed");
    s->add_option("--output", o.output, "primary output file")->required();
    s->add_option("--format", o.format, "csv or json");
    s->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    s->add_option("--config", "key = value file; flags override it");
  };
  auto branch = [&](CLI::App* s, const std::string& def) {
    o.branch = def;
    s->add_option("--branch", o.branch, "sub (Bessel beam) or super (K0 mode)");
    s->add_option("--q", o.q, "superluminal transverse decay constant");
    s->add_option("--Q", o.Q, "subluminal transverse wavenumber");
  };
  auto quad = [&](CLI::App* s) {
    s->add_option("--rel-tol", o.relTol);
    s->add_option("--abs-tol", o.absTol);
    s->add_option("--max-panels", o.maxPanels);
    s->add_option("--regulator-schedule", o.regulatorSchedule, "decreasing epsilon list");
  };

  auto* disp = app.add_subcommand("dispersion", "omega, vPhase, vGroup over a kz range");
  common(disp);
  branch(disp, "super");
  disp->add_option("--kz", o.kz, "kz values, start:stop:count[:log]");

  auto* mf = app.add_subcommand("mode-field", "mode on a rho x z grid at fixed t");
  common(mf);
  branch(mf, "super");
  mf->add_option("--kz", o.kzScalar, "longitudinal wavenumber");
  mf->add_option("--rho", o.rho, "rho values");
  mf->add_option("--z", o.z, "z values");
  mf->add_option("--t", o.t, "time");

  auto* pc = app.add_subcommand("propagator-check", "propagator identities and kernel constants");
  common(pc);
  quad(pc);
  pc->add_option("--grid", o.grid, "default or custom");
  pc->add_option("--rho", o.rho, "rho values (custom grid)");
  pc->add_option("--tau-tilde", o.tauTilde, "tauTilde values (custom grid)");
  pc->add_option("--tolerance", o.tolerance, "bound on the spacelike relative error");
  pc->add_option("--kernel-mass", o.kernelMass, "M and kappa for the kernel checks");

  auto* fsp = app.add_subcommand("front-speed", "signal front and peak velocities");
  common(fsp);
  branch(fsp, "super");
  fsp->add_option("--omega0", o.omega0, "carrier frequency");
  fsp->add_option("--gamma", o.gamma, "source decay rate");
  fsp->add_option("--z-list", o.zList, "increasing z values");
  fsp->add_option("--size", o.size, "number of grid points (power of two)");
  fsp->add_option("--window", o.window, "time window T");
  fsp->add_flag("--taper", o.taper, "raised-cosine turn-off (allows gamma = 0)");
  fsp->add_option("--threshold", o.threshold, "front threshold relative to max|psi|");
  fsp->add_option("--threshold-sweep", o.thresholdSweep, "extra thresholds reported");
  fsp->add_option("--front-slack", o.frontSlack, "allowed front-velocity excess over c");
  fsp->add_option("--series-before", o.seriesBefore, "psi(t) window start before z/c");
  fsp->add_option("--series-after", o.seriesAfter, "psi(t) window end after z/c");
  fsp->add_option("--series-stride", o.seriesStride, "keep every n-th sample");

  auto* sft = app.add_subcommand("specfun-test", "Bessel functions against the oracle table");
  common(sft);
  sft->add_option("--table", o.table, "oracle CSV");
  sft->add_option("--tolerance", o.tolerance, "bound on the maximum error");

  try {
    std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rev.begin(), rev.end());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  }

  CLI::App* sub = app.get_subcommands().front();
  o.command = sub->get_name();
  const std::string defFormat =
      (o.command == "propagator-check" || o.command == "front-speed") ? "json" : "csv";
  if (o.format.empty()) o.format = defFormat;

  // Full configuration minus output location and thread count, which do
  // not change results.
  std::map<std::string, std::string> recorded;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_lnames().empty() ? "" : opt->get_lnames().front();
    if (name.empty() || name == "help" || name == "config" || name == "output" ||
        name == "threads" || name == "table") {
      continue;
    }
    std::string value = opt->count() > 0 ? opt->results().back() : opt->get_default_str();
    if (name == "format") value = o.format;
    if (opt->count() == 0 && value == "nan") continue;
    if (opt->get_expected_max() == 0) value = opt->count() > 0 ? "true" : "false";
    recorded[name] = value;
  }
  std::string configLine = "kgsol-cli " + o.command;
  json configJson = json::object();
  for (const auto& [k, v] : recorded) {
    configLine += " " + k + "=" + v;
    configJson[k] = v;
  }

  Outcome result;
  std::string outputPath;
  try {
    outputPath = require_output_dir(o.output);
    if (o.format != "csv" && o.format != "json") throw DomainError("--format must be csv or json");
    if (o.command == "dispersion") result = run_dispersion(o);
    else if (o.command == "mode-field") result = run_mode_field(o);
    else if (o.command == "propagator-check") result = run_propagator_check(o);
    else if (o.command == "front-speed") result = run_front_speed(o, outputPath);
    else result = run_specfun_test(o);
  } catch (const DomainError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const NumericalError& e) {
    const std::string diag = outputPath + ".diagnostics.txt";
    try {
      write_file(diag, configLine + "\nnon-convergence: " + e.what() + "\n");
    } catch (const std::exception& w) {
      err << w.what() << '\n';
    }
    err << "numerical failure: " << e.what() << " (see " << diag << ")\n";
    return kExitNonConvergence;
  }

  std::string primary;
  if (o.format == "csv") {
    primary = csvText(configLine, result, result.columns, result.rows);
  } else {
    json rows = json::array();
    for (const auto& r : result.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < r.size(); ++i) obj[result.columns[i]] = r[i];
      rows.push_back(std::move(obj));
    }
    json doc = {{"schemaVersion", 1},
                {"command", o.command},
                {"config", configJson},
                {"notes", result.notes},
                {"summary", result.summary},
                {"assertions", result.assertions},
                {"rows", rows}};
    primary = doc.dump(2) + "\n";
  }
  try {
    write_file(outputPath, primary);
    for (const auto& [path, content] : result.sideFiles) write_file(path, content);
    if (!result.nonConvergence.empty()) {
      std::string d = configLine + "\n";
      for (const auto& n : result.nonConvergence) d += "not converged: " + n + "\n";
      write_file(outputPath + ".diagnostics.txt", d);
    }
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitPrecondition;
  }

  bool ok = true;
  for (const auto& [name, pass] : result.assertions) {
    out << (pass ? "pass " : "FAIL ") << name << '\n';
    ok = ok && pass;
  }
  if (!result.nonConvergence.empty()) {
    err << result.nonConvergence.size() << " quadratures did not converge; see "
        << outputPath << ".diagnostics.txt\n";
    return kExitNonConvergence;
  }
  return ok ? kExitOk : kExitAssertion;
}

}  // namespace kgsol::cli
