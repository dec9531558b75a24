#include "ncplane/plot_scripts.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ncplane/error.hpp"
#include "ncplane/io.hpp"

namespace ncplane::plot {

namespace {

const char* stem(Figure f) {
  switch (f) {
    case Figure::Fig1: return "fig1";
    case Figure::Fig2: return "fig2";
    case Figure::Fig3: return "fig3";
    case Figure::Fig4: return "fig4";
    case Figure::Trajectory: return "trajectory";
  }
  return "figure";
}

void preamble(std::ostream& os, Figure f) {
  os << "# gnuplot " << stem(f) << ".gp\n"
     << "set terminal pngcairo size 800,600 enhanced\n"
     << "set output '" << stem(f) << ".png'\n"
     << "set datafile separator ','\n"
     << "set grid\n";
}

}  // namespace

std::string default_csv_name(Figure f) { return std::string(stem(f)) + ".csv"; }
std::string script_name(Figure f) { return std::string(stem(f)) + ".gp"; }

std::string emit_plot_script(Figure f, const std::filesystem::path& csv) {
  if (!std::filesystem::exists(csv)) {
    throw Error(ErrorKind::MissingInput, "plot input not found: " + csv.string());
  }
  const std::string data = csv.filename().string();
  std::ostringstream os;
  preamble(os, f);
  switch (f) {
    case Figure::Fig1: {
      const auto t = io::read_csv(csv);
      const auto e = t.column("error") + 1, lam = t.column("lambda") + 1;
      os << "set xlabel 'λ'\nset ylabel 'e'\n"
         << "plot '" << data << "' skip 1 using " << lam << ':' << e
         << " with linespoints title '|ζ| = 1'\n";
      break;
    }
    case Figure::Fig2: {
      const auto t = io::read_csv(csv);
      const auto lam = t.column("lambda"), l = t.column("l") + 1, e = t.column("error") + 1;
      std::set<std::string> lambdas;
      for (const auto& row : t.rows) lambdas.insert(row.at(lam));
      os << "set xlabel 'l'\nset ylabel 'e'\nplot ";
      bool first = true;
      for (const auto& v : lambdas) {
        if (!first) os << ", \\\n     ";
        first = false;
        os << "'" << data << "' skip 1 using (strcol(" << lam + 1 << ") eq '" << v << "' ? $" << l
           << " : NaN):" << e << " with lines title 'λ = " << v << "'";
      }
      if (lambdas.empty()) os << "NaN notitle";
      os << '\n';
      break;
    }
    case Figure::Fig3: {
      const auto t = io::read_csv(csv);
      const auto re = t.column("re_zeta") + 1, im = t.column("im_zeta") + 1;
      os << "set size ratio -1\nset xlabel 'Re ζ'\nset ylabel 'Im ζ'\n"
         << "plot '" << data << "' skip 1 using " << re << ':' << im << " with lines notitle\n";
      break;
    }
    case Figure::Fig4: {
      const auto t = io::read_csv(csv);
      const auto lam = t.column("lambda") + 1, ri = t.column("r_int") + 1,
                 rx = t.column("r_ext") + 1;
      os << "set xlabel 'λ'\nset ylabel 'r'\nset yrange [0:1.1]\n"
         << "# lambda > 6: orbits close to circles again\n"
         << "set object 1 rect from first 6, graph 0 to graph 1, graph 1 "
            "fc rgb '#dddddd' fs solid 0.5 noborder behind\n"
         << "set label 1 'λ > 6' at first 6.2, graph 0.1\n"
         << "plot '" << data << "' skip 1 using " << lam << ':' << ri
         << " with lines title 'r_{int}', \\\n     '" << data << "' skip 1 using " << lam << ':'
         << rx << " with lines title 'r_{ext}'\n";
      break;
    }
    case Figure::Trajectory: {
      const auto t = io::read_csv(csv);
      const auto q1 = t.column("q1") + 1, q2 = t.column("q2") + 1;
      os << "set size ratio -1\nset xlabel 'q^1'\nset ylabel 'q^2'\n"
         << "plot '" << data << "' skip 1 using " << q1 << ':' << q2 << " with lines notitle\n";
      break;
    }
  }
  return os.str();
}

std::filesystem::path write_plot_script(Figure f, const std::filesystem::path& csv) {
  const std::string text = emit_plot_script(f, csv);
  const auto path = csv.parent_path() / script_name(f);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::MissingInput, "cannot write " + path.string());
  out << text;
  return path;
}

}  // namespace ncplane::plot
