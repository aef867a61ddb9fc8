#pragma once

// File outputs of the command-line tool: trajectory CSV and gnuplot scripts.

#include <filesystem>
#include <string>
#include <vector>

#include "ddestab/integrator.hpp"

namespace ddestab::cli {

/// printf-style %.<digits>g.
std::string format_number(double v, int digits = 10);

/// Header `t,x,v`, one row per node, %.17g, LF line endings.
void write_csv(const std::filesystem::path& path, const Trajectory& traj);

struct PlotCurve {
    std::string csv;  // path as written into the script
    std::string title;
};

/// gnuplot script plotting x against t for each curve, with an optional
/// dashed line at x*.
void write_plot_script(const std::filesystem::path& path, const std::string& title,
                       const std::vector<PlotCurve>& curves, double xstar);

/// Writes text with LF line endings; throws ddestab::Error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ddestab::cli
