#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddestab/errors.hpp"

namespace ddestab::cli {

std::string format_number(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    f << text;
    f.close();
    if (!f) throw Error("failed writing '" + path.string() + "'");
}

void write_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::string text = "t,x,v\n";
    text.reserve(64 * traj.nodes.size());
    char row[96];
    for (const auto& node : traj.nodes) {
        std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", node.t, node.x, node.v);
        text += row;
    }
    write_text(path, text);
}

void write_plot_script(const std::filesystem::path& path, const std::string& title,
                       const std::vector<PlotCurve>& curves, double xstar) {
    std::ostringstream s;
    s << "set datafile separator ','\n";
    s << "set termoption noenhanced\n";
    s << "set title \"" << title << "\"\n";
    s << "set xlabel 't'\n";
    s << "set ylabel 'x(t)'\n";
    s << "set key outside right\n";
    s << "plot ";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (i > 0) s << ", \\\n     ";
        s << '"' << curves[i].csv << "\" using 1:2 with lines title \"" << curves[i].title << '"';
    }
    s << ", \\\n     " << format_number(xstar, 17) << " with lines dashtype 2 lc rgb 'gray' title 'x*'\n";
    write_text(path, s.str());
}

}  // namespace ddestab::cli
