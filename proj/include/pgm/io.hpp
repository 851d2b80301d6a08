#ifndef PGM_IO_HPP
#define PGM_IO_HPP

// Frozen CSV schemas and a minimal SVG plot for error curves. Reals are
// written with 17 significant digits, '.' decimal separator, '\n' endings.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "pgm/experiments.hpp"

namespace pgm::io {

inline std::string fmt_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr const char* kTable1Header = "n,beta,lambda2_abs,beta_pow,t_ratio";
inline constexpr const char* kErrorsHeader = "m,sup_error,tv,ln_sup_error";
inline constexpr const char* kMonteCarloHeader = "n,m,samples,seed,ks_stat,tv_bins";

inline void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows)
{
    os << kTable1Header << '\n';
    for (const auto& r : rows)
        os << r.n << ',' << fmt_real(r.beta) << ',' << fmt_real(r.lambda2_abs) << ',' << fmt_real(r.beta_pow)
           << ',' << fmt_real(r.t_ratio) << '\n';
}

inline void write_errors_csv(std::ostream& os, const ErrorCurve& curve)
{
    os << kErrorsHeader << '\n';
    for (const auto& r : curve.rows)
        os << r.m << ',' << fmt_real(r.sup_error) << ',' << fmt_real(r.tv) << ','
           << fmt_real(std::log(r.sup_error)) << '\n';
}

inline void write_montecarlo_csv(std::ostream& os, const McReport& r)
{
    os << kMonteCarloHeader << '\n';
    os << r.n << ',' << r.m << ',' << r.sample_count << ',' << r.seed << ',' << fmt_real(r.ks_stat) << ','
       << fmt_real(r.tv_bins) << '\n';
}

/// ln(sup_error) against m with the fitted regression line.
inline void write_error_svg(std::ostream& os, const ErrorCurve& curve, const RateFit& fit)
{
    constexpr double width = 640;
    constexpr double height = 420;
    constexpr double margin = 60;
    if (curve.rows.empty())
        return;

    const double m_lo = curve.rows.front().m;
    const double m_hi = std::max(curve.rows.back().m, curve.rows.front().m + 1);
    double y_lo = std::log(curve.rows.front().sup_error);
    double y_hi = y_lo;
    for (const auto& r : curve.rows) {
        const double y = std::log(r.sup_error);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
    y_lo = std::floor(y_lo);
    y_hi = std::ceil(y_hi);
    if (y_hi <= y_lo)
        y_hi = y_lo + 1;

    const auto px = [&](double m) { return margin + (m - m_lo) / (m_hi - m_lo) * (width - 2 * margin); };
    const auto py = [&](double y) { return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin); };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
       << height - margin << "\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
       << "\"/>\n";
    for (const auto& r : curve.rows)
        os << "<line x1=\"" << px(r.m) << "\" y1=\"" << height - margin << "\" x2=\"" << px(r.m) << "\" y2=\""
           << height - margin + 5 << "\"/>\n";
    for (double y = y_lo; y <= y_hi; y += 1.0)
        os << "<line x1=\"" << margin - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << margin << "\" y2=\"" << py(y)
           << "\"/>\n";
    os << "</g>\n";

    os << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (const auto& r : curve.rows)
        os << "<text x=\"" << px(r.m) << "\" y=\"" << height - margin + 16 << "\" text-anchor=\"middle\">" << r.m
           << "</text>\n";
    for (double y = y_lo; y <= y_hi; y += 1.0)
        os << "<text x=\"" << margin - 8 << "\" y=\"" << py(y) + 3 << "\" text-anchor=\"end\">" << y
           << "</text>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">m</text>\n";
    os << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
       << ")\" text-anchor=\"middle\">ln sup error</text>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\">n=" << curve.n << ", "
       << curve.source << ", normalized slope " << fmt_real(fit.normalized) << "</text>\n";
    os << "</g>\n";

    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
        const auto& r = curve.rows[i];
        os << (i ? " " : "") << px(r.m) << ',' << py(std::log(r.sup_error));
    }
    os << "\"/>\n";
    os << "<line stroke=\"firebrick\" stroke-dasharray=\"4 3\" x1=\"" << px(m_lo) << "\" y1=\""
       << py(fit.intercept + fit.slope * m_lo) << "\" x2=\"" << px(m_hi) << "\" y2=\""
       << py(fit.intercept + fit.slope * m_hi) << "\"/>\n";
    os << "</svg>\n";
}

} // namespace pgm::io

#endif // PGM_IO_HPP
