#include "qcomp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace qcomp {

Box Box::unit(const std::vector<std::string>& vars) {
  return Box{vars, std::vector<std::pair<double, double>>(vars.size(), {-1.0, 1.0})};
}

std::vector<double> geometric_grid(double eps, int decades, int per_decade) {
  std::vector<double> t;
  int n = decades * per_decade;
  t.reserve(n + 1);
  for (int i = 0; i <= n; ++i)
    t.push_back(eps * std::pow(10.0, -static_cast<double>(i) / per_decade));
  return t;
}

std::vector<std::vector<double>> latin_hypercube(const Box& box, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::size_t d = box.dim();
  std::vector<std::vector<double>> pts(n, std::vector<double>(d));
  std::vector<int> perm(n);
  for (std::size_t k = 0; k < d; ++k) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[i], perm[j]);
    }
    auto [lo, hi] = box.bounds[k];
    for (int i = 0; i < n; ++i)
      pts[i][k] = lo + (hi - lo) * (perm[i] + uniform()) / n;
  }
  return pts;
}

namespace {

double eval_at(const CompiledExpr& f, double t, const std::vector<double>& x,
               std::vector<double>& buf) {
  buf[0] = t;
  std::copy(x.begin(), x.end(), buf.begin() + 1);
  return f.eval(buf);
}

// Compass search for a local maximum of x -> f(t, x) inside the box, one
// step length per coordinate.  Steps stop at 1e-15 relative to |x_k|, so
// features near x_k = 0 are resolved far below the box width.  With
// `local`, the first steps are sized to |x_k| (continuation starts).
// Non-finite values count as "not better".
void polish(const CompiledExpr& f, double t, const Box& box, int max_evals,
            std::vector<double>& x, double& fx, std::vector<double>& buf, bool local = false) {
  std::size_t d = box.dim();
  if (d == 0) return;
  std::vector<double> step(d);
  for (std::size_t k = 0; k < d; ++k) {
    step[k] = (box.bounds[k].second - box.bounds[k].first) / 16.0;
    if (local) step[k] = std::min(step[k], std::max(2.0 * std::fabs(x[k]), 1e-280));
  }
  auto active = [&](std::size_t k) { return step[k] > std::max(1e-15 * std::fabs(x[k]), 1e-280); };
  int evals = 0;
  std::vector<double> y(d);
  for (;;) {
    bool any = false;
    for (std::size_t k = 0; k < d && evals < max_evals; ++k) {
      if (!active(k)) continue;
      any = true;
      bool improved = false;
      for (double dir : {-1.0, 1.0}) {
        y = x;
        y[k] = std::clamp(x[k] + dir * step[k], box.bounds[k].first, box.bounds[k].second);
        if (y[k] == x[k]) continue;
        double fy = eval_at(f, t, y, buf);
        ++evals;
        if (std::isfinite(fy) && fy > fx) {
          x = y;
          fx = fy;
          improved = true;
          break;
        }
      }
      if (!improved) step[k] *= 0.5;
    }
    if (!any || evals >= max_evals) break;
  }
}

struct RowResult {
  double sup = -INFINITY;
  std::vector<double> argmax;
  int bad_index = -1;
};

RowResult process_row(const CompiledExpr& f, double t, const std::vector<std::vector<double>>& x,
                      const Box& box, const SupOptions& opt) {
  RowResult r;
  std::vector<double> buf(1 + box.dim());
  std::vector<std::pair<double, int>> vals;
  vals.reserve(x.size());
  if (x.empty()) {
    r.sup = eval_at(f, t, {}, buf);
    if (!std::isfinite(r.sup)) r.bad_index = 0;
    return r;
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    double v = eval_at(f, t, x[j], buf);
    if (!std::isfinite(v)) {
      if (r.bad_index < 0) r.bad_index = static_cast<int>(j);
      continue;
    }
    vals.emplace_back(v, static_cast<int>(j));
  }
  if (vals.empty()) return r;
  int starts = std::min<int>(opt.refine_starts, static_cast<int>(vals.size()));
  std::partial_sort(vals.begin(), vals.begin() + starts, vals.end(),
                    [](const auto& a, const auto& b) {
                      return a.first > b.first || (a.first == b.first && a.second < b.second);
                    });
  r.sup = vals[0].first;
  r.argmax = x[vals[0].second];
  for (int s = 0; s < starts; ++s) {
    std::vector<double> p = x[vals[s].second];
    double fp = vals[s].first;
    polish(f, t, box, opt.refine_max_evals, p, fp, buf);
    if (fp > r.sup) {
      r.sup = fp;
      r.argmax = p;
    }
  }
  return r;
}

// Polishes row i from the argmax of row i-1 of the previous sweep.  Thin
// bad regions that shrink with t are lost by the fixed sample once f
// rounds to a constant there; continuation follows them down.
bool continue_row(const CompiledExpr& f, double t, const Box& box, const SupOptions& opt,
                  const RowResult& prev, RowResult& row) {
  if (prev.argmax.empty()) return false;
  std::vector<double> buf(1 + box.dim());
  std::vector<double> p = prev.argmax;
  double fp = eval_at(f, t, p, buf);
  if (!std::isfinite(fp)) return false;
  polish(f, t, box, opt.refine_max_evals, p, fp, buf, true);
  if (!(fp > row.sup)) return false;
  row.sup = fp;
  row.argmax = std::move(p);
  return true;
}

SupProfile collect(const std::vector<double>& t, const std::vector<std::vector<double>>& x,
                   std::vector<RowResult>& rows) {
  SupProfile p;
  p.t = t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.sup.push_back(rows[i].sup);
    p.argmax.push_back(std::move(rows[i].argmax));
    if (!p.nonfinite && rows[i].bad_index >= 0) {
      p.nonfinite = true;
      p.bad_t = t[i];
      if (!x.empty()) p.bad_x = x[rows[i].bad_index];
    }
  }
  return p;
}

}  // namespace

SupProfile sup_profile(const CompiledExpr& f, const std::vector<double>& t,
                       const std::vector<std::vector<double>>& x, const Box& box,
                       const SupOptions& opt) {
  std::vector<RowResult> rows(t.size());
  const long n = static_cast<long>(t.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i)
    rows[i] = process_row(f, t[i], x, box, opt);
  for (int sweep = 0; sweep < opt.continuation_sweeps && box.dim() > 0; ++sweep) {
    const std::vector<RowResult> prev = rows;
    int changed = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : changed)
    for (long i = 1; i < n; ++i)
      changed += continue_row(f, t[i], box, opt, prev[i - 1], rows[i]);
    if (changed == 0) break;
  }
  return collect(t, x, rows);
}

SupProfile sup_profile_serial(const CompiledExpr& f, const std::vector<double>& t,
                              const std::vector<std::vector<double>>& x, const Box& box,
                              const SupOptions& opt) {
  std::vector<RowResult> rows(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) rows[i] = process_row(f, t[i], x, box, opt);
  for (int sweep = 0; sweep < opt.continuation_sweeps && box.dim() > 0; ++sweep) {
    const std::vector<RowResult> prev = rows;
    int changed = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
      changed += continue_row(f, t[i], box, opt, prev[i - 1], rows[i]);
    if (changed == 0) break;
  }
  return collect(t, x, rows);
}

std::vector<double> evaluate_grid(const CompiledExpr& f, const std::vector<double>& t,
                                  const std::vector<std::vector<double>>& x) {
  std::size_t m = std::max<std::size_t>(x.size(), 1);
  std::vector<double> out(t.size() * m);
  const long n = static_cast<long>(t.size());
#pragma omp parallel
  {
    std::vector<double> buf(1 + (x.empty() ? 0 : x[0].size()));
#pragma omp for
    for (long i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        buf[0] = t[i];
        if (!x.empty()) std::copy(x[j].begin(), x[j].end(), buf.begin() + 1);
        out[i * m + j] = f.eval(buf);
      }
    }
  }
  return out;
}

std::vector<double> evaluate_grid_serial(const CompiledExpr& f, const std::vector<double>& t,
                                         const std::vector<std::vector<double>>& x) {
  std::size_t m = std::max<std::size_t>(x.size(), 1);
  std::vector<double> out(t.size() * m);
  std::vector<double> buf(1 + (x.empty() ? 0 : x[0].size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      buf[0] = t[i];
      if (!x.empty()) std::copy(x[j].begin(), x[j].end(), buf.begin() + 1);
      out[i * m + j] = f.eval(buf);
    }
  }
  return out;
}

}  // namespace qcomp
