#pragma once

// Phase-plane fields of the invariants: cell-centred evaluation, detection of
// the jump across the negative x-axis, and CSV / SVG export.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dampcheck/core.hpp"
#include "dampcheck/invariants.hpp"

namespace dampcheck {

struct GridSpec {
  double x_min = -2.0;
  double x_max = 2.0;
  double p_min = -2.0;
  double p_max = 2.0;
  std::size_t nx = 401;
  std::size_t ny = 401;

  void validate() const {
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(p_min) &&
          std::isfinite(p_max))) {
      throw InvalidArgument("grid bounds must be finite");
    }
    if (!(x_min < x_max) || !(p_min < p_max)) throw InvalidArgument("grid bounds must be ordered");
    if (nx < 2 || ny < 2) throw InvalidArgument("grid needs at least 2 cells per axis");
  }

  [[nodiscard]] double dx() const { return (x_max - x_min) / static_cast<double>(nx); }
  [[nodiscard]] double dp() const { return (p_max - p_min) / static_cast<double>(ny); }
  // (2i + 1) * span / (2n) puts the middle centre of an odd count exactly on 0
  // for symmetric bounds, so the origin cell is masked reliably.
  [[nodiscard]] double x_center(std::size_t i) const {
    return x_min + static_cast<double>(2 * i + 1) * (x_max - x_min) / static_cast<double>(2 * nx);
  }
  [[nodiscard]] double p_center(std::size_t j) const {
    return p_min + static_cast<double>(2 * j + 1) * (p_max - p_min) / static_cast<double>(2 * ny);
  }
};

enum class FieldInvariant { H1Naive, CosH1, GammaH1, RPoint };

inline std::string_view to_string(FieldInvariant f) {
  switch (f) {
    case FieldInvariant::H1Naive:
      return "h1";
    case FieldInvariant::CosH1:
      return "cos-h1";
    case FieldInvariant::GammaH1:
      return "gamma-h1";
    case FieldInvariant::RPoint:
      return "r";
  }
  return "?";
}

/// nx * ny cell values, stored row-major with p as the slow index.
class FieldGrid {
 public:
  FieldGrid(GridSpec spec, FieldInvariant invariant, double gamma)
      : spec_(spec), invariant_(invariant), gamma_(gamma),
        values_(spec.nx * spec.ny, std::numeric_limits<double>::quiet_NaN()),
        valid_(spec.nx * spec.ny, 0) {}

  [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] FieldInvariant invariant() const noexcept { return invariant_; }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] std::size_t nx() const noexcept { return spec_.nx; }
  [[nodiscard]] std::size_t ny() const noexcept { return spec_.ny; }

  [[nodiscard]] bool valid(std::size_t i, std::size_t j) const { return valid_[j * spec_.nx + i] != 0; }
  /// NaN for masked cells.
  [[nodiscard]] double value(std::size_t i, std::size_t j) const { return values_[j * spec_.nx + i]; }

  void set(std::size_t i, std::size_t j, double v) {
    values_[j * spec_.nx + i] = v;
    valid_[j * spec_.nx + i] = 1;
  }
  void mask(std::size_t i, std::size_t j) {
    values_[j * spec_.nx + i] = std::numeric_limits<double>::quiet_NaN();
    valid_[j * spec_.nx + i] = 0;
  }

  [[nodiscard]] std::size_t valid_count() const {
    return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), 1));
  }

 private:
  GridSpec spec_;
  FieldInvariant invariant_;
  double gamma_;
  std::vector<double> values_;
  std::vector<unsigned char> valid_;
};

/// Evaluates the invariant at every cell centre. gamma is params.gamma();
/// r uses sheet 0. Cells at the origin (or with non-finite values) are masked.
inline FieldGrid evaluate_field(FieldInvariant invariant, const OscillatorParams& params,
                                const GridSpec& spec) {
  spec.validate();
  const double g = params.gamma();
  if (invariant == FieldInvariant::H1Naive || invariant == FieldInvariant::CosH1) {
    detail::require_positive_gamma(g);
  } else if (invariant == FieldInvariant::RPoint) {
    detail::require_oscillating(params);
  }

  FieldGrid grid(spec, invariant, g);
  for (std::size_t j = 0; j < spec.ny; ++j) {
    const double p = spec.p_center(j);
    for (std::size_t i = 0; i < spec.nx; ++i) {
      const double x = spec.x_center(i);
      if (x == 0.0 && p == 0.0) {
        grid.mask(i, j);
        continue;
      }
      double v = 0.0;
      switch (invariant) {
        case FieldInvariant::H1Naive:
          v = h1_naive(x, p, g);
          break;
        case FieldInvariant::CosH1:
          v = std::cos(h1_naive(x, p, g));
          break;
        case FieldInvariant::GammaH1:
          v = gamma_h1(x, p, g);
          break;
        case FieldInvariant::RPoint:
          v = r_zimmer(x, p, params, 0);
          break;
      }
      if (std::isfinite(v)) {
        grid.set(i, j, v);
      } else {
        grid.mask(i, j);
      }
    }
  }
  return grid;
}

struct CellPair {
  std::size_t column = 0;
  std::size_t row_below = 0;  // last row with p < 0
  std::size_t row_above = 0;  // first row with p > 0
  double jump = 0.0;          // trend-corrected value(above) - value(below)
};

struct BranchJumpReport {
  double jump_estimate = 0.0;  // median over x < 0 columns
  std::vector<CellPair> locus;        // columns whose jump exceeds the flag tolerance
  std::vector<CellPair> columns;      // every examined column
};

inline constexpr double kDefaultJumpFlagTol = 1e-3;

/// For each x < 0 column, extrapolates the two rows on each side of p = 0
/// linearly onto the axis and differences the two limits. The smooth part
/// of the field cancels; what remains is the jump across the cut.
inline BranchJumpReport detect_branch_jump(const FieldGrid& grid,
                                           double flag_tol = kDefaultJumpFlagTol) {
  const GridSpec& spec = grid.spec();
  std::size_t below_count = 0;
  std::size_t above_count = 0;
  std::size_t row_below = 0;
  std::size_t row_above = spec.ny;
  for (std::size_t j = 0; j < spec.ny; ++j) {
    const double p = spec.p_center(j);
    if (p < 0.0) {
      ++below_count;
      row_below = j;
    } else if (p > 0.0) {
      ++above_count;
      row_above = std::min(row_above, j);
    }
  }
  if (below_count < 2 || above_count < 2) {
    throw InvalidArgument("grid must have at least 2 rows on each side of p = 0");
  }

  const double pb0 = spec.p_center(row_below);
  const double pb1 = spec.p_center(row_below - 1);
  const double pa0 = spec.p_center(row_above);
  const double pa1 = spec.p_center(row_above + 1);

  BranchJumpReport rep;
  for (std::size_t i = 0; i < spec.nx; ++i) {
    if (!(spec.x_center(i) < 0.0)) continue;
    const std::size_t rows[] = {row_below - 1, row_below, row_above, row_above + 1};
    if (!std::all_of(std::begin(rows), std::end(rows), [&](std::size_t j) { return grid.valid(i, j); })) {
      continue;
    }
    const double vb0 = grid.value(i, row_below);
    const double vb1 = grid.value(i, row_below - 1);
    const double va0 = grid.value(i, row_above);
    const double va1 = grid.value(i, row_above + 1);
    const double limit_below = vb0 + (vb0 - vb1) / (pb0 - pb1) * (0.0 - pb0);
    const double limit_above = va0 + (va1 - va0) / (pa1 - pa0) * (0.0 - pa0);
    CellPair cp{i, row_below, row_above, limit_above - limit_below};
    rep.columns.push_back(cp);
    if (std::abs(cp.jump) > flag_tol) rep.locus.push_back(cp);
  }
  if (rep.columns.empty()) throw InvalidArgument("grid has no valid column with x < 0");

  std::vector<double> jumps;
  jumps.reserve(rep.columns.size());
  for (const auto& c : rep.columns) jumps.push_back(c.jump);
  std::sort(jumps.begin(), jumps.end());
  const std::size_t n = jumps.size();
  rep.jump_estimate = n % 2 == 1 ? jumps[n / 2] : 0.5 * (jumps[n / 2 - 1] + jumps[n / 2]);
  return rep;
}

/// Header `x,p,value,valid`; masked cells have an empty value and valid=0.
inline void write_grid_csv(const FieldGrid& grid, std::ostream& os) {
  const GridSpec& spec = grid.spec();
  os << "x,p,value,valid\n" << std::setprecision(17);
  for (std::size_t j = 0; j < spec.ny; ++j) {
    for (std::size_t i = 0; i < spec.nx; ++i) {
      os << spec.x_center(i) << ',' << spec.p_center(j) << ',';
      if (grid.valid(i, j)) {
        os << grid.value(i, j) << ",1\n";
      } else {
        os << ",0\n";
      }
    }
  }
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

/// Piecewise-linear colour ramp (dark blue to yellow), t in [0, 1].
inline std::string ramp_colour(double t) {
  static constexpr std::array<std::array<double, 3>, 5> stops{{
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * static_cast<double>(stops.size() - 1);
  const auto k = std::min(static_cast<std::size_t>(pos), stops.size() - 2);
  const double f = pos - static_cast<double>(k);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

}  // namespace detail

/// Heatmap with p increasing upwards. Masked cells are left unfilled.
inline void write_grid_svg(const FieldGrid& grid, std::ostream& os) {
  const GridSpec& spec = grid.spec();
  constexpr double plot = 480.0;
  constexpr double left = 70.0;
  constexpr double top = 40.0;
  constexpr double bottom = 70.0;
  constexpr double right = 20.0;
  const double cw = plot / static_cast<double>(spec.nx);
  const double ch = plot / static_cast<double>(spec.ny);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < spec.ny; ++j) {
    for (std::size_t i = 0; i < spec.nx; ++i) {
      if (!grid.valid(i, j)) continue;
      lo = std::min(lo, grid.value(i, j));
      hi = std::max(hi, grid.value(i, j));
    }
  }
  const bool any = lo <= hi;
  const double span = any && hi > lo ? hi - lo : 1.0;

  using detail::svg_num;
  const double width = left + plot + right;
  const double height = top + plot + bottom;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_num(width) << "\" height=\""
     << svg_num(height) << "\" viewBox=\"0 0 " << svg_num(width) << ' ' << svg_num(height)
     << "\">\n";
  os << "<text x=\"" << svg_num(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
     << to_string(grid.invariant()) << ", gamma=" << grid.gamma() << "</text>\n";
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t j = 0; j < spec.ny; ++j) {
    const double y = top + static_cast<double>(spec.ny - 1 - j) * ch;
    for (std::size_t i = 0; i < spec.nx; ++i) {
      const double x = left + static_cast<double>(i) * cw;
      os << "<rect x=\"" << svg_num(x) << "\" y=\"" << svg_num(y) << "\" width=\"" << svg_num(cw)
         << "\" height=\"" << svg_num(ch) << "\" fill=\"";
      if (grid.valid(i, j)) {
        os << detail::ramp_colour((grid.value(i, j) - lo) / span);
      } else {
        os << "none";
      }
      os << "\"/>\n";
    }
  }
  os << "</g>\n";
  os << "<rect x=\"" << svg_num(left) << "\" y=\"" << svg_num(top) << "\" width=\"" << svg_num(plot)
     << "\" height=\"" << svg_num(plot) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const auto label = [&](double x, double y, std::string_view anchor, const std::string& text) {
    os << "<text x=\"" << svg_num(x) << "\" y=\"" << svg_num(y) << "\" text-anchor=\"" << anchor
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << text << "</text>\n";
  };
  label(left, top + plot + 16, "middle", svg_num(spec.x_min));
  label(left + plot, top + plot + 16, "middle", svg_num(spec.x_max));
  label(left - 6, top + plot, "end", svg_num(spec.p_min));
  label(left - 6, top + 4, "end", svg_num(spec.p_max));
  label(left + plot / 2, top + plot + 32, "middle", "x");
  label(left - 40, top + plot / 2, "middle", "p");
  label(left, top + plot + 56, "start",
        any ? "min=" + svg_num(lo) + " max=" + svg_num(hi) : std::string("no valid cells"));
  os << "</svg>\n";
}

inline void export_grid(const FieldGrid& grid, std::string_view format, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  if (format == "csv") {
    write_grid_csv(grid, f);
  } else if (format == "svg") {
    write_grid_svg(grid, f);
  } else {
    throw InvalidArgument("unknown grid export format: " + std::string(format));
  }
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace dampcheck
