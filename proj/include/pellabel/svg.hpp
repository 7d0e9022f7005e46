#ifndef PELLABEL_SVG_HPP
#define PELLABEL_SVG_HPP

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "pellabel/comb_inverse.hpp"
#include "pellabel/curve.hpp"
#include "pellabel/pell.hpp"

// SVG renderers for combs, the flat surface of a canonical differential, and
// solution polynomials. Geometry is exact and every float is written with
// nine significant digits, so output is byte-deterministic per input.

namespace pellabel {
namespace svg {

inline std::string fmt(double v) {
  if (v == 0) v = 0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

class Writer {
 public:
  Writer(double width, double height) {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
             "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
             fmt(height) + "\">\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
             "\" height=\"" + fmt(h) + "\" fill=\"" + fill + "\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0, const std::string& dash = "") {
    body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
             "\" y2=\"" + fmt(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
             fmt(width) + "\"";
    if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
    body_ += "/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke = "black") {
    body_ += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" + fmt(r) +
             "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"1\"/>\n";
  }

  void text(double x, double y, const std::string& s, const std::string& anchor = "start") {
    body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
             "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"" + anchor + "\">" +
             s + "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double width = 1.5) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) +
             "\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += " ";
      body_ += fmt(pts[i].first) + "," + fmt(pts[i].second);
    }
    body_ += "\"/>\n";
  }

  /// Dimension marker: a bracketed vertical or horizontal extent with a label.
  void extent(double x1, double y1, double x2, double y2, const std::string& label) {
    line(x1, y1, x2, y2, "black", 0.8);
    const double tick = 3;
    if (x1 == x2) {  // vertical
      line(x1 - tick, y1, x1 + tick, y1, "black", 0.8);
      line(x1 - tick, y2, x1 + tick, y2, "black", 0.8);
      text(x1 + 5, (y1 + y2) / 2 + 4, label);
    } else {  // horizontal
      line(x1, y1 - tick, x1, y1 + tick, "black", 0.8);
      line(x2, y2 - tick, x2, y2 + tick, "black", 0.8);
      text((x1 + x2) / 2, y1 - 6, label, "middle");
    }
  }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  std::string body_;
};

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors{"#d62728", "#1f77b4", "#2ca02c", "#000000",
                                               "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  return colors;
}

}  // namespace svg

/// Half-strip of height r*pi with the g teeth drawn at ordinates q_j*pi and
/// lengths h_j, with extent markers for the ordinates, the strip height and
/// the tooth lengths.
template <typename Real>
std::string render_comb(const Comb<Real>& comb) {
  const double pi = std::numbers::pi_v<double>;
  const int g = comb.genus();
  double hmax = 1;
  for (Real hv : comb.h) hmax = std::max(hmax, double(hv));
  const double strip_w = 1.6 * hmax + 1.0;     // math units (real part)
  const double strip_h = comb.r * pi;          // math units (imaginary part)
  const double scale = 40;
  const double mx = 50, my = 30, label_w = 110;
  const double width = mx + strip_w * scale + label_w;
  const double height = 2 * my + strip_h * scale;
  svg::Writer w(width, height);
  auto X = [&](double u) { return mx + u * scale; };
  auto Y = [&](double v) { return my + (strip_h - v) * scale; };

  w.rect(X(0), Y(strip_h), strip_w * scale, strip_h * scale, "#eeeeee");
  w.line(X(0), Y(0), X(0), Y(strip_h), "black", 1.5);               // left edge
  w.line(X(0), Y(0), X(strip_w), Y(0), "black", 1.5);               // bottom edge
  w.line(X(0), Y(strip_h), X(strip_w), Y(strip_h), "black", 1.5);   // top edge
  w.line(X(strip_w), Y(0), X(strip_w) + 14, Y(0), "black", 1.0, "2,3");
  w.line(X(strip_w), Y(strip_h), X(strip_w) + 14, Y(strip_h), "black", 1.0, "2,3");

  for (int j = 0; j < g; ++j) {
    const double qv = comb.q[static_cast<size_t>(j)] * pi;
    const double hv = double(comb.h[static_cast<size_t>(j)]);
    w.line(X(0), Y(qv), X(hv), Y(qv), "black", 2.5);
    w.extent(X(0), Y(qv) - 10, X(hv), Y(qv) - 10,
             "h" + std::to_string(j + 1) + " = " + svg::fmt(hv));
    w.extent(X(hv) + 18 * (j + 1), Y(0), X(hv) + 18 * (j + 1), Y(qv),
             "q" + std::to_string(j + 1) + "*pi = " + std::to_string(comb.q[static_cast<size_t>(j)]) +
                 "*pi");
  }
  w.extent(X(strip_w) - 12, Y(0), X(strip_w) - 12, Y(strip_h),
           "M*pi = " + std::to_string(comb.r) + "*pi");
  return w.finish();
}

/// Flat surface of the canonical differential scaled by r/pi: a cylinder of
/// height 2r (truncated for display) with slit pairs at heights +-q_i around
/// the base point, half-lengths h_i, and translation-identified lips drawn in
/// matching colors. The quotient view shows the half-picture with the edge
/// identifications of the involution quotient.
template <typename Real>
std::string render_flat_surface(const Comb<Real>& comb, bool quotient_view = false) {
  const int g = comb.genus();
  const int r = comb.r;
  double hmax = 1;
  for (Real hv : comb.h) hmax = std::max(hmax, double(hv));
  const double half_w = 1.6 * hmax + 1.0;  // truncated cylinder half-width
  const double scale = 40;
  const double mx = 40, my = 30, label_w = 110;
  const double lip = 0.05;                 // lip offset in math units
  const double x_lo = quotient_view ? 0.0 : -half_w;

  const double width = mx + (half_w - x_lo) * scale + label_w;
  const double height = 2 * my + 2 * r * scale;
  svg::Writer w(width, height);
  auto X = [&](double u) { return mx + (u - x_lo) * scale; };
  auto Y = [&](double v) { return my + (r - v) * scale; };  // v in [-r, r]

  w.rect(X(x_lo), Y(r), (half_w - x_lo) * scale, 2 * r * scale, "#eeeeee");
  w.line(X(x_lo), Y(-r), X(half_w), Y(-r), "black", 1.5);
  w.line(X(x_lo), Y(r), X(half_w), Y(r), "black", 1.5);
  w.line(X(half_w), Y(-r), X(half_w) + 14, Y(-r), "black", 1.0, "2,3");
  w.line(X(half_w), Y(r), X(half_w) + 14, Y(r), "black", 1.0, "2,3");
  if (quotient_view) {
    w.line(X(0), Y(-r), X(0), Y(r), "black", 1.5);
  } else {
    w.line(X(-half_w), Y(-r), X(-half_w) - 14, Y(-r), "black", 1.0, "2,3");
    w.line(X(-half_w), Y(r), X(-half_w) - 14, Y(r), "black", 1.0, "2,3");
  }

  // Base point a_0 on the identified top/bottom edges; b_g at height r above.
  w.circle(X(0), Y(-r), 3, "black");
  w.text(X(0) + 6, Y(-r) - 4, "a0");
  w.circle(X(0), Y(r), 3, "black");
  w.text(X(0) + 6, Y(r) + 14, "a0");
  w.circle(X(0), Y(0), 3, "black");
  w.text(X(0) + 6, Y(0) + 14, "b" + std::to_string(g));

  const auto& colors = svg::palette();
  for (int i = 1; i <= g; ++i) {
    const double q = comb.q[static_cast<size_t>(i - 1)];
    const double h = double(comb.h[static_cast<size_t>(i - 1)]);
    const double y_plus = -r + q;   // slit above the base point
    const double y_minus = r - q;   // its partner, wrapped around the cylinder
    const double xl = quotient_view ? 0.0 : -h;
    const std::string outer = colors[static_cast<size_t>((2 * i - 2) % colors.size())];
    const std::string inner = colors[static_cast<size_t>((2 * i - 1) % colors.size())];
    // Outer lips (facing the identified edges) match under translation, as do
    // the inner lips.
    w.line(X(xl), Y(y_plus - lip), X(h), Y(y_plus - lip), outer, 2.0);
    w.line(X(xl), Y(y_plus + lip), X(h), Y(y_plus + lip), inner, 2.0);
    w.line(X(xl), Y(y_minus + lip), X(h), Y(y_minus + lip), outer, 2.0);
    w.line(X(xl), Y(y_minus - lip), X(h), Y(y_minus - lip), inner, 2.0);
    // Slit ends: right vertices are the zeros z_i, left ones their conjugates.
    w.circle(X(h), Y(y_plus), 3, inner);
    w.circle(X(h), Y(y_minus), 3, inner);
    w.text(X(h) + 6, Y(y_minus) + 4, "z" + std::to_string(i));
    if (!quotient_view) {
      w.circle(X(xl), Y(y_plus), 3, "white");
      w.circle(X(xl), Y(y_minus), 3, "white");
      w.text(X(xl) - 26, Y(y_minus) + 4, "z~" + std::to_string(i));
    }
    w.text(X(0) + 6, Y(y_plus) + 16, "a" + std::to_string(i));
    w.text(X(0) + 6, Y(y_plus) - 8, "b" + std::to_string(i - 1));
    w.text(X(0) + 6, Y(y_minus) - 8, "a" + std::to_string(i));
    w.text(X(0) + 6, Y(y_minus) + 16, "b" + std::to_string(i - 1));
  }

  // Height markers: r_j between consecutive slit levels, 2r for the cylinder.
  const std::vector<int> rv = comb.r_vector();
  double level = -double(r);
  for (int j = 0; j <= g; ++j) {
    const double next = level + rv[static_cast<size_t>(j)];
    w.extent(X(half_w) - 16, Y(level), X(half_w) - 16, Y(next),
             "r" + std::to_string(j) + " = " + std::to_string(rv[static_cast<size_t>(j)]));
    level = next;
  }
  w.extent(X(half_w) + 30, Y(-r), X(half_w) + 30, Y(r), "2r = " + std::to_string(2 * r));

  if (quotient_view) {
    // Left-edge segments are identified in rotated pairs; label them.
    for (int seg = 0; seg < r; ++seg) {
      const double mid_lower = -r + seg + 0.5;
      w.text(X(0) - 14, Y(mid_lower) + 4, std::to_string(seg + 1));
      w.text(X(0) - 14, Y(-mid_lower) + 4, std::to_string(seg + 1));
    }
  }
  return w.finish();
}

/// Graph of the sup-normalized solution polynomial with the bands on the
/// axis, dashed guides at +-sqrt(c) and the gap roots of the canonical
/// polynomial ticked. Pass the gap roots when they are already known;
/// otherwise they are recomputed from the curve.
template <typename Real>
std::string render_solution(const CurveConfig<Real>& curve, const PellSolution<Real>& sol,
                            const std::vector<Real>* gap_roots = nullptr) {
  const int g = curve.genus();
  const double a0 = double(curve.band_lo(0)), bg = double(curve.band_hi(g));
  const double span = bg - a0;
  const double x_lo = a0 - 0.08 * span, x_hi = bg + 0.08 * span;
  const double sqrt_c = std::sqrt(double(sol.c));
  const double y_max = 2.4 * sqrt_c;
  const double scale_x = 520.0 / (x_hi - x_lo);
  const double scale_y = 180.0 / y_max;
  const double mx = 60, my = 24;
  const double width = mx * 2 + (x_hi - x_lo) * scale_x;
  const double height = my * 2 + 2 * y_max * scale_y;
  svg::Writer w(width, height);
  auto X = [&](double u) { return mx + (u - x_lo) * scale_x; };
  auto Y = [&](double v) { return my + (y_max - v) * scale_y; };

  w.line(X(x_lo), Y(0), X(x_hi), Y(0), "black", 1.0);
  w.line(X(x_lo), Y(sqrt_c), X(x_hi), Y(sqrt_c), "black", 1.0, "6,4");
  w.line(X(x_lo), Y(-sqrt_c), X(x_hi), Y(-sqrt_c), "black", 1.0, "6,4");
  w.text(X(x_lo), Y(sqrt_c) - 4, "+sqrt(c)");
  w.text(X(x_lo), Y(-sqrt_c) + 14, "-sqrt(c)");

  // Bands as thick axis segments with labeled, ticked endpoints.
  for (int j = 0; j <= g; ++j) {
    const double a = double(curve.band_lo(j)), b = double(curve.band_hi(j));
    w.line(X(a), Y(0), X(b), Y(0), "black", 4.0);
    w.line(X(a), Y(0.55 * y_max), X(a), Y(-0.55 * y_max), "black", 0.7, "2,3");
    w.line(X(b), Y(0.55 * y_max), X(b), Y(-0.55 * y_max), "black", 0.7, "2,3");
    w.text(X(a), Y(0.62 * y_max), "a" + std::to_string(j), "middle");
    w.text(X(b), Y(-0.62 * y_max) + 10, "b" + std::to_string(j), "middle");
  }
  std::vector<Real> roots;
  if (gap_roots != nullptr) {
    roots = *gap_roots;
  } else if (g > 0) {
    roots = canonical(curve).gap_roots;
  }
  for (size_t j = 0; j < roots.size(); ++j) {
    const double rt = double(roots[j]);
    w.line(X(rt), Y(0.3 * y_max), X(rt), Y(-0.3 * y_max), "#888888", 0.7, "2,3");
    w.text(X(rt), Y(-0.36 * y_max) + 10, "c" + std::to_string(j + 1), "middle");
  }

  // The graph itself, split into in-range polyline runs.
  const int n = 600;
  std::vector<std::pair<double, double>> run;
  for (int i = 0; i <= n; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / n;
    const double y = double(sol.P(Real(x)));
    if (std::abs(y) <= y_max) {
      run.emplace_back(X(x), Y(y));
    } else {
      w.polyline(run, "#1f77b4", 1.6);
      run.clear();
    }
  }
  w.polyline(run, "#1f77b4", 1.6);
  return w.finish();
}

}  // namespace pellabel

#endif
