#include "kgsol/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "kgsol/domain.hpp"
#include "kgsol/specfun.hpp"

namespace kgsol {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double absValue;  // integral of |f|
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * sum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
  }
  const double scale = std::abs(half);
  resk *= half;
  resg *= half;
  resabs *= scale;
  resasc *= scale;
  double err = std::abs(resk - resg);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * resabs, err);
  }
  if (!std::isfinite(resk)) throw DomainError("quadrature: integrand returned a non-finite value");
  return {a, b, resk, err, resabs};
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

struct AdaptiveOutcome {
  double value;
  double error;
  double absValue;
  std::size_t panels;
  bool converged;
  std::vector<Panel> leaves;  ///< final partition, left to right
};

// Bisects the worst panel of `leaves` until the summed error is within
// max(absTarget, relTol |I|) or `budget` more evaluations of the rule would
// be exceeded. The sums are re-formed left to right so the result does not
// depend on heap tie order.
AdaptiveOutcome refine(const Integrand& f, std::vector<Panel> leaves, double absTarget,
                       double relTol, std::size_t budget) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> heap(ByError{}, std::move(leaves));
  CompensatedSum total0, err0;
  {
    std::vector<Panel> tmp;
    tmp.reserve(heap.size());
    auto copy = heap;
    while (!copy.empty()) {
      tmp.push_back(copy.top());
      copy.pop();
    }
    std::sort(tmp.begin(), tmp.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : tmp) {
      total0.add(p.value);
      err0.add(p.error);
    }
  }
  double total = total0.value();
  double total_err = err0.value();
  std::size_t panels = 0;
  bool converged = false;
  while (true) {
    if (total_err <= std::max(absTarget, relTol * std::abs(total))) {
      converged = true;
      break;
    }
    if (panels + 2 > budget || heap.empty()) break;
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    heap.pop();
    Panel left = gauss_kronrod(f, worst.a, mid);
    Panel right = gauss_kronrod(f, mid, worst.b);
    panels += 2;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  CompensatedSum value, error, absval;
  for (const auto& p : all) {
    value.add(p.value);
    error.add(p.error);
    absval.add(p.absValue);
  }
  // Recheck on the re-summed totals; the running sums can drift.
  converged = converged && error.value() <= std::max(absTarget, relTol * std::abs(value.value()));
  return {value.value(), error.value(), absval.value(), panels, converged, std::move(all)};
}

// Global adaptive bisection on [a, b].
AdaptiveOutcome adaptive(const Integrand& f, double a, double b, double absTarget,
                         double relTol, std::size_t budget) {
  AdaptiveOutcome r = refine(f, {gauss_kronrod(f, a, b)}, absTarget, relTol,
                             budget > 0 ? budget - 1 : 0);
  r.panels += 1;
  return r;
}

double tolerance(const QuadratureSpec& spec, double value) {
  return std::max(spec.absTol, spec.relTol * std::abs(value));
}

}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

void QuadratureSpec::validate() const {
  if (!(relTol > 0.0) || !(absTol > 0.0)) {
    throw DomainError("QuadratureSpec: relTol and absTol must be > 0");
  }
  if (maxPanels < 1) throw DomainError("QuadratureSpec: maxPanels must be >= 1");
  if (!(tailCutoff > 0.0)) throw DomainError("QuadratureSpec: tailCutoff must be > 0");
  if (!(extrapolationRelTol > 0.0)) {
    throw DomainError("QuadratureSpec: extrapolationRelTol must be > 0");
  }
  if (regulatorSchedule.empty()) throw DomainError("QuadratureSpec: empty regulator schedule");
  for (std::size_t i = 0; i < regulatorSchedule.size(); ++i) {
    if (!(regulatorSchedule[i] > 0.0)) {
      throw DomainError("QuadratureSpec: regulator values must be > 0");
    }
    if (i > 0 && !(regulatorSchedule[i] < regulatorSchedule[i - 1])) {
      throw DomainError("QuadratureSpec: regulator schedule must be strictly decreasing");
    }
  }
}

QuadratureResult integrateInterval(const Integrand& f, double a, double b,
                                   const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return {0.0, 0.0, 0, true};
  const auto r = adaptive(f, a, b, spec.absTol, spec.relTol, spec.maxPanels);
  return {r.value, r.error, r.panels, r.converged};
}

QuadratureResult integrateDecaying(const Integrand& f, double a, const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(a)) throw DomainError("integrateDecaying: lower limit must be finite");

  CompensatedSum total;
  std::vector<Panel> leaves;
  std::size_t panels = 0;
  double x = a;
  double width = 1.0;
  double prev_abs = -1.0;
  double tail = std::numeric_limits<double>::infinity();
  const double tail_target = spec.tailCutoff * spec.absTol;

  for (int outer = 0; outer < 1100; ++outer) {
    if (panels >= spec.maxPanels) break;
    const double b = x + width;
    if (!std::isfinite(b) || b == x) break;
    const double target = 0.5 * std::max(spec.absTol, spec.relTol * std::abs(total.value()));
    const auto r = adaptive(f, x, b, target, 0.5 * spec.relTol, spec.maxPanels - panels);
    panels += r.panels;
    total.add(r.value);
    leaves.insert(leaves.end(), r.leaves.begin(), r.leaves.end());

    // Decay probe: panels double in width, so once the |f| mass per panel
    // drops geometrically by `ratio`, the remainder is bounded by the
    // geometric continuation.
    if (prev_abs >= 0.0) {
      if (r.absValue == 0.0 && prev_abs == 0.0) {
        tail = 0.0;
      } else if (prev_abs > 0.0) {
        const double ratio = r.absValue / prev_abs;
        tail = ratio < 0.5 ? r.absValue * ratio / (1.0 - ratio)
                           : std::numeric_limits<double>::infinity();
      }
      if (tail <= tail_target) break;
    }
    prev_abs = r.absValue;
    x = b;
    width *= 2.0;
  }

  // The marched panels each met a share of the running tolerance; one global
  // pass brings the summed estimate under the overall one.
  const std::size_t left = spec.maxPanels > panels ? spec.maxPanels - panels : 0;
  const double tail_part = std::isfinite(tail) ? tail : 0.0;
  const double budget_err = 0.999 * tolerance(spec, total.value()) - tail_part;
  const auto g = refine(f, std::move(leaves), std::max(0.0, budget_err), 0.0, left);
  panels += g.panels;

  QuadratureResult out;
  out.value = g.value;
  out.errorEstimate = g.error + tail;
  out.panelsUsed = panels;
  out.converged = std::isfinite(tail) && tail <= tail_target &&
                  out.errorEstimate <= tolerance(spec, out.value);
  return out;
}

QuadratureResult integrateBetweenNodes(const Integrand& f, double a,
                                       const std::function<double(std::size_t)>& node,
                                       std::size_t first, const QuadratureSpec& spec) {
  spec.validate();
  const std::size_t max_terms = std::min<std::size_t>(spec.maxPanels, 20000);
  constexpr std::size_t kMinTerms = 6;
  constexpr int kGrowthRun = 8;

  CompensatedSum partial;
  CompensatedSum gk_error;
  std::vector<double> diag;  // antidiagonal of the averaging table
  std::vector<double> next;
  double euler_prev = 0.0;
  double prev_term = 0.0;
  int growth_run = 0;
  int settled = 0;
  std::size_t panels = 0;
  double left = a;
  QuadratureResult out;

  for (std::size_t n = 0; n < max_terms && panels < spec.maxPanels; ++n) {
    const double right = node(first + n);
    if (!(right > left)) throw DomainError("integrateBetweenNodes: nodes must increase");
    const double target =
        0.1 * std::max(spec.absTol, spec.relTol * std::abs(partial.value()));
    const auto r = adaptive(f, left, right, target, 0.1 * spec.relTol, spec.maxPanels - panels);
    panels += r.panels;
    gk_error.add(r.error);
    partial.add(r.value);
    left = right;

    if (n >= 3 && std::abs(r.value) > 1.01 * std::abs(prev_term)) {
      if (++growth_run >= kGrowthRun) {
        throw DomainError("integrateBetweenNodes: panel terms grow; envelope not decaying");
      }
    } else {
      growth_run = 0;
    }

    // Repeated averaging of partial sums S_0..S_n, updated along the new
    // antidiagonal; next[n] is the n-fold average.
    next.assign(n + 1, 0.0);
    next[0] = partial.value();
    for (std::size_t i = 1; i <= n; ++i) next[i] = 0.5 * (diag[i - 1] + next[i - 1]);
    diag.swap(next);
    const double euler = diag[n];

    const double euler_err = n > 0 ? std::abs(euler - euler_prev) : std::abs(r.value);
    const double plain_err = std::abs(r.value);
    const bool use_euler = euler_err < plain_err;
    out.value = use_euler ? euler : partial.value();
    const double series_err = use_euler ? euler_err : plain_err;
    out.errorEstimate = series_err + gk_error.value();
    euler_prev = euler;
    prev_term = r.value;

    if (n + 1 >= kMinTerms && out.errorEstimate <= tolerance(spec, out.value)) {
      if (++settled >= 2) {
        out.converged = true;
        break;
      }
    } else {
      settled = 0;
    }
  }
  out.panelsUsed = panels;
  return out;
}

double besselJ0Zero(std::size_t s) {
  if (s == 0) throw DomainError("besselJ0Zero: zeros are numbered from 1");
  const double beta = (static_cast<double>(s) - 0.25) * std::numbers::pi;
  const double b8 = 1.0 / (8.0 * beta);
  const double b8_2 = b8 * b8;
  double x = beta + b8 * (1.0 - b8_2 * (124.0 / 3.0 - b8_2 * (120928.0 / 15.0)));
  for (int i = 0; i < 3; ++i) {
    const double j1 = besselJ1(x);
    if (j1 == 0.0) break;
    x += besselJ0(x) / j1;  // J0' = -J1
  }
  return x;
}

QuadratureResult integrateOscillatoryBessel(const Integrand& envelope, OscillatoryKernel kernel,
                                            double kernelFreq, double a,
                                            const QuadratureSpec& spec) {
  spec.validate();
  if (!(kernelFreq >= 0.0) || !std::isfinite(kernelFreq)) {
    throw DomainError("integrateOscillatoryBessel: kernelFreq must be finite and >= 0");
  }
  if (!std::isfinite(a) || a < 0.0) {
    throw DomainError("integrateOscillatoryBessel: lower limit must be finite and >= 0");
  }
  if (kernelFreq == 0.0) {
    switch (kernel) {
      case OscillatoryKernel::Sine: return {0.0, 0.0, 0, true};
      case OscillatoryKernel::BesselJ0:
      case OscillatoryKernel::Cosine: return integrateDecaying(envelope, a, spec);
    }
  }
  const double w = kernelFreq;
  Integrand f;
  std::function<double(std::size_t)> node;
  std::size_t first = 0;
  const double pi = std::numbers::pi;
  switch (kernel) {
    case OscillatoryKernel::BesselJ0: {
      f = [&](double x) { return envelope(x) * besselJ0(w * x); };
      node = [w](std::size_t s) { return besselJ0Zero(s) / w; };
      first = 1;
      while (node(first) <= a) ++first;
      break;
    }
    case OscillatoryKernel::Sine: {
      f = [&](double x) { return envelope(x) * std::sin(w * x); };
      node = [w, pi](std::size_t n) { return static_cast<double>(n) * pi / w; };
      first = static_cast<std::size_t>(std::floor(a * w / pi)) + 1;
      while (node(first) <= a) ++first;
      break;
    }
    case OscillatoryKernel::Cosine: {
      f = [&](double x) { return envelope(x) * std::cos(w * x); };
      node = [w, pi](std::size_t n) { return (static_cast<double>(n) + 0.5) * pi / w; };
      first = static_cast<std::size_t>(std::max(0.0, std::floor(a * w / pi - 0.5)));
      while (node(first) <= a) ++first;
      break;
    }
  }
  return integrateBetweenNodes(f, a, node, first, spec);
}

double regulatorFactor(Regulator reg, double eps, double x) {
  switch (reg) {
    case Regulator::Exponential: return std::exp(-eps * x);
    case Regulator::Gaussian: {
      const double y = eps * x;
      return std::exp(-y * y);
    }
  }
  return 1.0;
}

RegulatedIntegrand regulate(Integrand base, Regulator reg) {
  return [base = std::move(base), reg](double x, double eps) {
    return base(x) * regulatorFactor(reg, eps, x);
  };
}

RegulatedResult integrateRegulated(const RegulatedIntegrand& family, double a,
                                   const QuadratureSpec& spec, Regulator reg,
                                   std::optional<KernelSpec> kernel) {
  spec.validate();
  RegulatedResult out;
  out.epsilons = spec.regulatorSchedule;
  const std::size_t n = out.epsilons.size();
  std::vector<double> nodes(n);
  std::vector<double> values(n);
  std::size_t panels = 0;
  bool all_converged = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = out.epsilons[i];
    const Integrand f = [&family, eps](double x) { return family(x, eps); };
    QuadratureResult r = kernel ? integrateOscillatoryBessel(f, kernel->kind, kernel->freq, a, spec)
                                : integrateDecaying(f, a, spec);
    out.perEpsilon.push_back(r);
    panels += r.panelsUsed;
    all_converged = all_converged && r.converged;
    nodes[i] = reg == Regulator::Gaussian ? eps * eps : eps;
    values[i] = r.value;
  }

  // Neville extrapolation to 0; diagonal[m] uses nodes 0..m.
  std::vector<double> p = values;
  out.extrapolationDiagonal.push_back(p[0]);
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      p[i] = (nodes[i] * p[i + 1] - nodes[i + m] * p[i]) / (nodes[i] - nodes[i + m]);
    }
    out.extrapolationDiagonal.push_back(p[0]);
  }

  // Propagated quadrature error: sum |L_i(0)| err_i.
  double propagated = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double li = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) li *= nodes[j] / (nodes[j] - nodes[i]);
    }
    propagated += std::abs(li) * out.perEpsilon[i].errorEstimate;
  }

  QuadratureResult& res = out.result;
  res.value = out.extrapolationDiagonal.back();
  res.panelsUsed = panels;
  if (n == 1) {
    res.errorEstimate = std::numeric_limits<double>::infinity();
    res.converged = false;
    return out;
  }
  const auto& d = out.extrapolationDiagonal;
  const double last_step = std::abs(d[n - 1] - d[n - 2]);
  res.errorEstimate = last_step + propagated;
  bool trend = true;
  if (n >= 3) trend = last_step <= std::abs(d[n - 2] - d[n - 3]);
  res.converged = all_converged && trend &&
                  res.errorEstimate <=
                      std::max(spec.absTol, spec.extrapolationRelTol * std::abs(res.value));
  return out;
}

}  // namespace kgsol
