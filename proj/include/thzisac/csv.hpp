#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "thzisac/errors.hpp"

namespace thzisac
{
    // Cells are pre-formatted strings; numeric formatting is centralized in
    // the csv_cell overloads (scientific, 9 significant digits) so every
    // table renders identically across platforms and runs.
    inline std::string csv_cell(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.8e", v);
        return buf;
    }

    inline std::string csv_cell(int v) { return std::to_string(v); }
    inline std::string csv_cell(std::int64_t v) { return std::to_string(v); }
    inline std::string csv_cell(bool v) { return v ? "1" : "0"; }
    inline std::string csv_cell(const char* v) { return v; }
    inline std::string csv_cell(const std::string& v) { return v; }

    struct CsvTable {
        std::vector<std::string> columns;
        std::vector<std::vector<std::string>> rows;

        CsvTable() = default;
        explicit CsvTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

        bool has_column(const std::string& name) const
        {
            for (const auto& c : columns)
                if (c == name)
                    return true;
            return false;
        }

        int column_index(const std::string& name) const
        {
            for (std::size_t i = 0; i < columns.size(); ++i)
                if (columns[i] == name)
                    return static_cast<int>(i);
            throw MissingColumn("column '" + name + "' not present");
        }

        void add_row(std::vector<std::string> cells)
        {
            if (cells.size() != columns.size())
                throw std::invalid_argument("CsvTable: row width != header width");
            rows.push_back(std::move(cells));
        }

        template <typename... Ts>
        void add(const Ts&... vals)
        {
            add_row({csv_cell(vals)...});
        }
    };

    inline std::string render_csv(const CsvTable& t)
    {
        std::string out;
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            if (i)
                out += ',';
            out += t.columns[i];
        }
        out += '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i)
                    out += ',';
                out += row[i];
            }
            out += '\n';
        }
        return out;
    }

    inline void write_csv(const std::filesystem::path& path, const CsvTable& t)
    {
        std::ofstream f(path, std::ios::binary);  // binary: fixed \n endings
        if (!f)
            throw ExperimentFailed("cannot open " + path.string() + " for writing");
        f << render_csv(t);
    }

    // ------------------------------------------------------------------
    // Self-contained gnuplot descriptions referencing a written CSV.

    enum class PlotKind { line, loglog, pareto };

    struct PlotSpec {
        PlotKind kind = PlotKind::line;
        std::string csv_file;                 // file name the script references
        std::string x_col;
        std::vector<std::string> y_cols;
        std::string title;
        std::string x_label;
        std::string y_label;
        // Labeled reference lines (e.g. the saturation ceiling, the
        // crossover overhead).
        std::vector<std::pair<std::string, double>> v_lines;
        std::vector<std::pair<std::string, double>> h_lines;
        std::string frontier_csv;             // pareto kind only, optional
    };

    inline std::string emit_plot_description(const CsvTable& table, const PlotSpec& spec)
    {
        std::string s;
        s += "# gnuplot script\n";
        s += "set datafile separator ','\n";
        s += "set key autotitle columnhead\n";
        if (!spec.title.empty())
            s += "set title '" + spec.title + "'\n";
        if (!spec.x_label.empty())
            s += "set xlabel '" + spec.x_label + "'\n";
        if (!spec.y_label.empty())
            s += "set ylabel '" + spec.y_label + "'\n";
        s += "set grid\n";
        if (spec.kind == PlotKind::loglog)
            s += "set logscale xy\n";

        for (const auto& [label, x] : spec.v_lines)
            s += "set arrow from " + csv_cell(x) + ", graph 0 to " + csv_cell(x) +
                 ", graph 1 nohead dashtype 2\nset label '" + label + "' at " +
                 csv_cell(x) + ", graph 0.95\n";
        for (const auto& [label, y] : spec.h_lines)
            s += "set arrow from graph 0, first " + csv_cell(y) +
                 " to graph 1, first " + csv_cell(y) +
                 " nohead dashtype 2\nset label '" + label + "' at graph 0.02, first " +
                 csv_cell(y) + " offset 0, 0.7\n";

        if (spec.kind == PlotKind::pareto) {
            // Accuracy/rate scatter plus the non-dominated polyline.
            const int ix = table.column_index("rmse_m") + 1;
            const int iy = table.column_index("r_net") + 1;
            s += "plot '" + spec.csv_file + "' using " + std::to_string(ix) + ":" +
                 std::to_string(iy) + " with points pt 7";
            if (!spec.frontier_csv.empty())
                s += ", \\\n     '" + spec.frontier_csv + "' using " +
                     std::to_string(ix) + ":" + std::to_string(iy) +
                     " with lines lw 2 title 'frontier'";
            s += "\n";
            return s;
        }

        const int ix = table.column_index(spec.x_col) + 1;
        s += "plot ";
        for (std::size_t i = 0; i < spec.y_cols.size(); ++i) {
            const int iy = table.column_index(spec.y_cols[i]) + 1;
            if (i)
                s += ", \\\n     ";
            s += "'" + spec.csv_file + "' using " + std::to_string(ix) + ":" +
                 std::to_string(iy) + " with lines lw 2";
        }
        s += "\n";
        return s;
    }
}
