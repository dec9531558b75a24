#pragma once

#include <filesystem>
#include <string>

namespace ncplane::plot {

// gnuplot scripts; each renders <name>.png next to its CSV.
//   Fig1        fig1.csv   e against lambda
//   Fig2        fig2.csv   e against l, one curve per lambda
//   Fig3        fig3.csv   Im zeta against Re zeta, equal aspect
//   Fig4        fig4.csv   r_int and r_ext against lambda, lambda > 6 shaded
//   Trajectory  trajectory.csv  q2 against q1, equal aspect
enum class Figure { Fig1, Fig2, Fig3, Fig4, Trajectory };

std::string default_csv_name(Figure f);
std::string script_name(Figure f);

// Script text for the CSV at `csv`. Throws Error(MissingInput) if the file
// does not exist.
std::string emit_plot_script(Figure f, const std::filesystem::path& csv);

// Writes the script beside the CSV and returns its path.
std::filesystem::path write_plot_script(Figure f, const std::filesystem::path& csv);

}  // namespace ncplane::plot
