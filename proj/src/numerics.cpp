#include "liftscale/numerics.hpp"

#include <string>

namespace liftscale::numerics {
namespace {

// Kronrod 15-point abscissae on [-1, 1] (QUADPACK qk15); odd indices of the
// positive half are the 7-point Gauss nodes.
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

struct Rule15 {
  std::array<double, 15> node{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};
};

constexpr Rule15 make_rule() {
  Rule15 r{};
  for (int i = 0; i < 7; ++i) {
    r.node[i] = -kXgk[i];
    r.node[14 - i] = kXgk[i];
    r.wk[i] = r.wk[14 - i] = kWgk[i];
    const double g = (i % 2 == 1) ? kWg[i / 2] : 0.0;
    r.wg[i] = r.wg[14 - i] = g;
  }
  r.node[7] = 0.0;
  r.wk[7] = kWgk[7];
  r.wg[7] = kWg[3];
  return r;
}

constexpr Rule15 kRule = make_rule();

// Maps a parameter t onto one axis segment; semi-infinite segments use
// x = anchor +- t / (1 - t) for t in [0, 1).
struct AxisMap {
  enum class Kind { Finite, UpperInf, LowerInf };
  Kind kind = Kind::Finite;
  double anchor = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  bool tail = false;

  double x(double t) const {
    switch (kind) {
      case Kind::Finite: return t;
      case Kind::UpperInf: return anchor + t / (1.0 - t);
      case Kind::LowerInf: return anchor - t / (1.0 - t);
    }
    return t;
  }
  double jacobian(double t) const {
    if (kind == Kind::Finite) return 1.0;
    const double u = 1.0 - t;
    return 1.0 / (u * u);
  }
};

std::vector<AxisMap> axis_segments(double lo, double hi, double core) {
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "integration range is empty");
  std::vector<AxisMap> out;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::array<std::array<double, 2>, 3> parts = {{{-inf, -core}, {-core, core}, {core, inf}}};
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const double a = std::max(lo, parts[p][0]);
    const double b = std::min(hi, parts[p][1]);
    if (!(a < b)) continue;
    AxisMap m;
    m.tail = (p != 1);
    if (std::isfinite(a) && std::isfinite(b)) {
      m.kind = AxisMap::Kind::Finite;
      m.t_lo = a;
      m.t_hi = b;
    } else if (std::isfinite(a)) {
      m.kind = AxisMap::Kind::UpperInf;
      m.anchor = a;
      m.t_lo = 0.0;
      m.t_hi = 1.0;
    } else if (std::isfinite(b)) {
      m.kind = AxisMap::Kind::LowerInf;
      m.anchor = b;
      m.t_lo = 0.0;
      m.t_hi = 1.0;
    } else {
      fail(ErrorCode::InvalidArgument, "doubly infinite axis segment");
    }
    out.push_back(m);
  }
  return out;
}

void check_finite(double v, double x, double y) {
  if (!std::isfinite(v)) {
    fail(ErrorCode::InvalidArgument, "integrand is not finite at (" + std::to_string(x) + ", " +
                                         std::to_string(y) + ")");
  }
}

template <std::size_t K>
using Vec = std::array<double, K>;

template <std::size_t K>
double l1(const Vec<K>& v) {
  double s = 0.0;
  for (double e : v) s += std::abs(e);
  return s;
}

template <std::size_t K>
struct Cell {
  double x0, x1, y0, y1;
  std::size_t tile;
  std::size_t id;
  Vec<K> value;
  double err;
  double err_x;
  double err_y;
};

template <std::size_t K>
struct CellOrder {
  bool operator()(const Cell<K>& a, const Cell<K>& b) const {
    if (a.err != b.err) return a.err < b.err;
    return a.id > b.id;
  }
};

template <std::size_t K>
struct Tile {
  AxisMap mx;
  AxisMap my;
};

template <std::size_t K, class F>
void evaluate_cell(const F& f, const Tile<K>& tile, Cell<K>& cell) {
  const double cx = 0.5 * (cell.x0 + cell.x1), hx = 0.5 * (cell.x1 - cell.x0);
  const double cy = 0.5 * (cell.y0 + cell.y1), hy = 0.5 * (cell.y1 - cell.y0);
  std::array<double, 15> xs{}, jx{}, ys{}, jy{};
  for (int i = 0; i < 15; ++i) {
    const double tx = cx + hx * kRule.node[i];
    const double ty = cy + hy * kRule.node[i];
    xs[i] = tile.mx.x(tx);
    jx[i] = tile.mx.jacobian(tx);
    ys[i] = tile.my.x(ty);
    jy[i] = tile.my.jacobian(ty);
  }
  Vec<K> kk{}, gg{}, kg{}, gk{};
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) {
      const Vec<K> v = f(xs[i], ys[j]);
      const double jac = jx[i] * jy[j];
      for (std::size_t c = 0; c < K; ++c) {
        check_finite(v[c], xs[i], ys[j]);
        const double fv = v[c] * jac;
        kk[c] += kRule.wk[i] * kRule.wk[j] * fv;
        gg[c] += kRule.wg[i] * kRule.wg[j] * fv;
        kg[c] += kRule.wk[i] * kRule.wg[j] * fv;
        gk[c] += kRule.wg[i] * kRule.wk[j] * fv;
      }
    }
  }
  const double area = hx * hy;
  Vec<K> dgg{}, dx{}, dy{};
  for (std::size_t c = 0; c < K; ++c) {
    cell.value[c] = kk[c] * area;
    dgg[c] = (kk[c] - gg[c]) * area;
    dx[c] = (kk[c] - gk[c]) * area;
    dy[c] = (kk[c] - kg[c]) * area;
  }
  cell.err = l1<K>(dgg);
  cell.err_x = l1<K>(dx);
  cell.err_y = l1<K>(dy);
}

template <std::size_t K, class F>
QuadratureResultN<K> adaptive_2d(const F& f, const Box& box, const QuadratureOptions& opt) {
  const auto xsegs = axis_segments(box.x_lo, box.x_hi, opt.core_half_width);
  const auto ysegs = axis_segments(box.y_lo, box.y_hi, opt.core_half_width);

  std::vector<Tile<K>> tiles;
  std::vector<Cell<K>> heap;
  std::size_t next_id = 0;
  std::size_t evals = 0;
  constexpr std::size_t kPerCell = 225;

  auto push = [&](Cell<K> c) {
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end(), CellOrder<K>{});
  };
  auto make = [&](std::size_t tile, double x0, double x1, double y0, double y1) {
    Cell<K> c{x0, x1, y0, y1, tile, next_id++, {}, 0.0, 0.0, 0.0};
    evaluate_cell<K>(f, tiles[tile], c);
    evals += kPerCell;
    return c;
  };

  for (const auto& mx : xsegs) {
    for (const auto& my : ysegs) {
      tiles.push_back({mx, my});
      const std::size_t t = tiles.size() - 1;
      const int split = (mx.tail || my.tail) ? 2 : 1;
      const double wx = (mx.t_hi - mx.t_lo) / split, wy = (my.t_hi - my.t_lo) / split;
      for (int i = 0; i < split; ++i) {
        for (int j = 0; j < split; ++j) {
          const double x0 = mx.t_lo + i * wx, y0 = my.t_lo + j * wy;
          const double x1 = (i + 1 == split) ? mx.t_hi : x0 + wx;
          const double y1 = (j + 1 == split) ? my.t_hi : y0 + wy;
          push(make(t, x0, x1, y0, y1));
        }
      }
    }
  }

  auto totals = [&](Vec<K>& value, double& err) {
    value = {};
    err = 0.0;
    for (const auto& c : heap) {
      for (std::size_t k = 0; k < K; ++k) value[k] += c.value[k];
      err += c.err;
    }
  };

  Vec<K> total{};
  double total_err = 0.0;
  double frozen_err = 0.0;
  totals(total, total_err);

  while (evals + 2 * kPerCell <= opt.max_evals) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * l1<K>(total));
    if (total_err + frozen_err <= target) break;
    std::pop_heap(heap.begin(), heap.end(), CellOrder<K>{});
    Cell<K> worst = heap.back();
    heap.pop_back();
    if (worst.err <= 0.0) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), CellOrder<K>{});
      break;
    }
    const bool split_x = worst.err_x >= worst.err_y;
    const double width = split_x ? worst.x1 - worst.x0 : worst.y1 - worst.y0;
    const double scale = split_x ? std::max(std::abs(worst.x0), std::abs(worst.x1))
                                 : std::max(std::abs(worst.y0), std::abs(worst.y1));
    if (width <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale)) {
      frozen_err += worst.err;
      total_err -= worst.err;
      worst.err = 0.0;
      push(worst);
      continue;
    }
    Cell<K> a{}, b{};
    if (split_x) {
      const double mid = 0.5 * (worst.x0 + worst.x1);
      a = make(worst.tile, worst.x0, mid, worst.y0, worst.y1);
      b = make(worst.tile, mid, worst.x1, worst.y0, worst.y1);
    } else {
      const double mid = 0.5 * (worst.y0 + worst.y1);
      a = make(worst.tile, worst.x0, worst.x1, worst.y0, mid);
      b = make(worst.tile, worst.x0, worst.x1, mid, worst.y1);
    }
    for (std::size_t k = 0; k < K; ++k) total[k] += a.value[k] + b.value[k] - worst.value[k];
    total_err += a.err + b.err - worst.err;
    push(a);
    push(b);
  }

  QuadratureResultN<K> out;
  totals(out.value, out.abs_error);
  out.abs_error += frozen_err;
  out.n_evals = evals;
  out.converged = out.abs_error <= std::max(opt.abs_tol, opt.rel_tol * l1<K>(out.value));
  return out;
}

struct Segment {
  double a, b;
  std::size_t map;
  std::size_t id;
  double value;
  double err;
};

struct SegmentOrder {
  bool operator()(const Segment& s, const Segment& t) const {
    if (s.err != t.err) return s.err < t.err;
    return s.id > t.id;
  }
};

}  // namespace

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                              const QuadratureOptions& opt) {
  if (a == b) return {0.0, 0.0, 0, true};
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<AxisMap> maps;
  if (std::isfinite(a) && std::isfinite(b)) {
    AxisMap m;
    m.t_lo = a;
    m.t_hi = b;
    maps.push_back(m);
  } else {
    maps = axis_segments(a, b, opt.core_half_width);
  }

  std::vector<Segment> heap;
  std::size_t next_id = 0;
  std::size_t evals = 0;
  auto eval = [&](std::size_t mi, double lo, double hi) {
    const AxisMap& m = maps[mi];
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 15; ++i) {
      const double t = c + h * kRule.node[i];
      const double x = m.x(t);
      const double v = f(x);
      check_finite(v, x, 0.0);
      const double fv = v * m.jacobian(t);
      k += kRule.wk[i] * fv;
      g += kRule.wg[i] * fv;
    }
    evals += 15;
    return Segment{lo, hi, mi, next_id++, k * h, std::abs(k - g) * h};
  };
  auto push = [&](Segment s) {
    heap.push_back(s);
    std::push_heap(heap.begin(), heap.end(), SegmentOrder{});
  };
  for (std::size_t i = 0; i < maps.size(); ++i) push(eval(i, maps[i].t_lo, maps[i].t_hi));

  double total = 0.0, total_err = 0.0, frozen = 0.0;
  for (const auto& s : heap) {
    total += s.value;
    total_err += s.err;
  }
  while (evals + 30 <= opt.max_evals) {
    if (total_err + frozen <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) break;
    std::pop_heap(heap.begin(), heap.end(), SegmentOrder{});
    Segment w = heap.back();
    heap.pop_back();
    if (w.err <= 0.0) {
      push(w);
      break;
    }
    const double scale = std::max(std::abs(w.a), std::abs(w.b));
    if (w.b - w.a <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale)) {
      frozen += w.err;
      total_err -= w.err;
      w.err = 0.0;
      push(w);
      continue;
    }
    const double mid = 0.5 * (w.a + w.b);
    Segment l = eval(w.map, w.a, mid);
    Segment r = eval(w.map, mid, w.b);
    total += l.value + r.value - w.value;
    total_err += l.err + r.err - w.err;
    push(l);
    push(r);
  }

  QuadratureResult out;
  for (const auto& s : heap) {
    out.value += s.value;
    out.abs_error += s.err;
  }
  out.abs_error += frozen;
  out.value *= sign;
  out.n_evals = evals;
  out.converged = out.abs_error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
  return out;
}

QuadratureResult integrate_2d(const std::function<double(double, double)>& f, const Box& box,
                              const QuadratureOptions& options) {
  auto wrapped = [&f](double x, double y) { return Vec<1>{f(x, y)}; };
  const auto r = adaptive_2d<1>(wrapped, box, options);
  return {r.value[0], r.abs_error, r.n_evals, r.converged};
}

QuadratureResultN<3> integrate_2d_3(
    const std::function<std::array<double, 3>(double, double)>& f, const Box& box,
    const QuadratureOptions& options) {
  return adaptive_2d<3>(f, box, options);
}

double find_root_bracketed(const std::function<double(double)>& f,
                           const std::function<double(double)>& df, double lo, double hi,
                           double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    fail(ErrorCode::InvalidArgument, "root is not bracketed");
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo <= xtol) return 0.5 * (lo + hi);
    const double d = df ? df(x) : 0.0;
    double next = (d != 0.0 && std::isfinite(d)) ? x - fx / d : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    // Newton converged in place; confirm with a tiny bracket around it.
    if (std::abs(next - x) <= 0.25 * xtol) {
      const double a = std::max(lo, next - xtol), b = std::min(hi, next + xtol);
      const double fa = f(a), fb = f(b);
      if (fa == 0.0) return a;
      if (fb == 0.0) return b;
      if ((fa > 0.0) != (fb > 0.0)) return next;
    }
    x = next;
  }
  return 0.5 * (lo + hi);
}

double bisect_sign_change(const std::function<double(double)>& g, double lo, double hi,
                          double xtol) {
  double glo = g(lo);
  for (int iter = 0; iter < 200 && hi - lo > xtol * std::max(1.0, std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TabulatedInverseCdf::TabulatedInverseCdf(const std::function<double(double)>& density,
                                         double lo, double hi, std::size_t n_points) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi) || n_points < 2) {
    fail(ErrorCode::InvalidArgument, "tabulated CDF needs a finite non-empty interval");
  }
  grid_.resize(n_points);
  cdf_.assign(n_points, 0.0);
  const double h = (hi - lo) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) grid_[i] = lo + h * static_cast<double>(i);
  grid_.back() = hi;
  double prev = density(grid_[0]);
  for (std::size_t i = 1; i < n_points; ++i) {
    const double mid = density(0.5 * (grid_[i - 1] + grid_[i]));
    const double cur = density(grid_[i]);
    cdf_[i] = cdf_[i - 1] + (grid_[i] - grid_[i - 1]) * (prev + 4.0 * mid + cur) / 6.0;
    prev = cur;
  }
  const double total = cdf_.back();
  if (!(total > 0.0)) fail(ErrorCode::InvalidDistribution, "density has no mass on interval");
  for (double& c : cdf_) c /= total;
}

double TabulatedInverseCdf::quantile(double u) const {
  if (u <= 0.0) return grid_.front();
  if (u >= 1.0) return grid_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const std::size_t lo = i - 1;
  const double span = cdf_[i] - cdf_[lo];
  if (span <= 0.0) return grid_[lo];
  const double w = (u - cdf_[lo]) / span;
  return grid_[lo] + w * (grid_[i] - grid_[lo]);
}

}  // namespace liftscale::numerics
