#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/grid_field.hpp"
#include "orlicz/sharp_limit.hpp"

namespace orlicz {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

/// Flat CSV of a convergence report; one row per eps, fixed column order.
inline void write_convergence_csv(const ConvergenceReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot open CSV output '" + path + "'");
  out << "eps,rho_eps,eps_norm,target_modular,target_norm,rel_err_modular,rel_err_norm\n";
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    out << fmt_g(rep.eps[i]) << ',' << fmt_g(rep.rho_eps[i]) << ',' << fmt_g(rep.eps_norms[i]) << ','
        << fmt_g(rep.target_modular) << ',' << fmt_g(rep.target_norm) << ','
        << fmt_g(relative_error(rep.rho_eps[i], rep.target_modular)) << ','
        << fmt_g(relative_error(rep.eps_norms[i], rep.target_norm)) << '\n';
  }
}

/// Node coordinates plus values, one row per active node.
inline void write_field_csv(const GridField& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot open CSV output '" + path + "'");
  const GridDomain& dom = f.domain();
  out << (dom.dim() == 1 ? "x" : "x,y");
  for (int c = 0; c < f.comps(); ++c) out << ",v" << c;
  out << '\n';
  for (std::size_t i = 0; i < dom.n_active(); ++i) {
    const auto id = static_cast<std::int32_t>(i);
    const Point p = dom.point_of(id);
    out << fmt_g(p[0]);
    if (dom.dim() > 1) out << ',' << fmt_g(p[1]);
    for (int c = 0; c < f.comps(); ++c) out << ',' << fmt_g(f.at(id, c));
    out << '\n';
  }
}

/// Minimal hand-rolled SVG: rho^eps against eps with the target line.
inline void write_convergence_svg(const ConvergenceReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot open SVG output '" + path + "'");
  const int W = 640, H = 420, ml = 70, mr = 20, mt = 30, mb = 50;
  double xmin = rep.eps.back(), xmax = rep.eps.front();
  if (xmin == xmax) xmax = xmin + 1;
  double ymin = rep.target_modular, ymax = rep.target_modular;
  for (double v : rep.rho_eps) {
    if (std::isfinite(v)) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(ymax > ymin)) ymax = ymin + 1;
  const double pad = 0.08 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
  out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
      << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb << "' stroke='black'/>\n";
  // target line
  out << "<line x1='" << ml << "' y1='" << fmt_g(Y(rep.target_modular)) << "' x2='" << W - mr << "' y2='"
      << fmt_g(Y(rep.target_modular)) << "' stroke='crimson' stroke-dasharray='6 4'/>\n";
  out << "<text x='" << W - mr - 4 << "' y='" << fmt_g(Y(rep.target_modular) - 6)
      << "' text-anchor='end' font-size='12' fill='crimson'>target " << fmt_g(rep.target_modular) << "</text>\n";
  // polyline + markers
  out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    if (std::isfinite(rep.rho_eps[i])) out << fmt_g(X(rep.eps[i])) << ',' << fmt_g(Y(rep.rho_eps[i])) << ' ';
  out << "'/>\n";
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    if (!std::isfinite(rep.rho_eps[i])) continue;
    out << "<circle cx='" << fmt_g(X(rep.eps[i])) << "' cy='" << fmt_g(Y(rep.rho_eps[i]))
        << "' r='3' fill='steelblue'/>\n";
    out << "<text x='" << fmt_g(X(rep.eps[i])) << "' y='" << H - mb + 16
        << "' text-anchor='middle' font-size='11'>" << fmt_g(rep.eps[i]) << "</text>\n";
  }
  out << "<text x='" << (ml + W - mr) / 2 << "' y='" << H - 12 << "' text-anchor='middle' font-size='12'>eps</text>\n";
  out << "<text x='" << 16 << "' y='" << (mt + H - mb) / 2
      << "' font-size='12' transform='rotate(-90 16 " << (mt + H - mb) / 2 << ")' text-anchor='middle'>rho^eps</text>\n";
  out << "<text x='" << ml << "' y='" << mt - 10 << "' font-size='12'>" << rep.kernel_family << " kernel, status "
      << to_string(rep.status) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace orlicz
