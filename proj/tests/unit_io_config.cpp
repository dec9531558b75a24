#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ncplane/config.hpp"
#include "ncplane/error.hpp"
#include "ncplane/io.hpp"
#include "ncplane/plot_scripts.hpp"
#include "test_dirs.hpp"

using namespace ncplane;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::DomainError;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()).empty());
  CHECK(io::format_double(std::numeric_limits<double>::infinity()).empty());
  for (double v : {M_PI, -1e-300, 6.02214076e23, 1.0 / 3.0}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
}

TEST_CASE("csv write and read") {
  ScratchDir dir("csv");
  {
    io::CsvWriter w(dir / "a.csv", {"x", "n", "name"});
    w.row({0.25, 3, "row"});
    w.row({std::optional<double>{}, 4, std::string("two")});
    w.close();
  }
  const auto t = io::read_csv(dir / "a.csv");
  CHECK(t.header == std::vector<std::string>{"x", "n", "name"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "0.25");
  CHECK(t.rows[1][0].empty());
  CHECK(t.column("name") == 2);
  CHECK(kind_of([&] { (void)t.column("missing"); }) == ErrorKind::MissingInput);
  CHECK(kind_of([&] { io::read_csv(dir / "nope.csv"); }) == ErrorKind::MissingInput);
  CHECK(kind_of([&] { io::CsvWriter(dir / "no" / "dir.csv", {"x"}); }) == ErrorKind::MissingInput);
}

TEST_CASE("triplets round-trip") {
  fock::Operator::Matrix m = fock::Operator::Matrix::Zero(3, 3);
  m(0, 1) = {std::sqrt(2.0), -1e-17};
  m(2, 0) = {-0.1, 0.3};
  std::stringstream ss;
  io::write_triplets(ss, m);
  const auto back = io::read_triplets(ss, 3, 3);
  CHECK(back == m);

  std::stringstream sparse;
  io::write_triplets(sparse, m, 0.0);
  std::string first;
  std::getline(sparse, first);
  CHECK(first.rfind("2 0 ", 0) == 0);  // column-major, exact zeros dropped
}

TEST_CASE("ranges") {
  const auto r = config::Range::parse("0:1:0.25");
  CHECK(r.values == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  CHECK(config::Range::parse("0:6:0.5").values.size() == 13);
  CHECK(config::Range::parse("0.1:6:0.01").values.size() == 591);
  CHECK(config::Range::parse("2,4,6").values == std::vector<double>{2, 4, 6});
  CHECK(config::Range::parse("3.5").values == std::vector<double>{3.5});
  CHECK(kind_of([] { config::Range::parse("0:1:0"); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config::Range::parse("1:0:0.1"); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config::Range::parse("a,b"); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("experiment names") {
  CHECK(config::experiment_names().size() == 8);
  for (const auto& n : config::experiment_names()) {
    const auto e = config::parse_experiment(n);
    REQUIRE(e.has_value());
    CHECK(config::experiment_name(*e) == n);
  }
  CHECK_FALSE(config::parse_experiment("fig5").has_value());
}

TEST_CASE("key-value parsing") {
  const auto kv = config::parse_key_values("# header\nB = 2\n theta=0.5  # trailing\n\nlambda = 0:2:1\n");
  CHECK(kv.at("B") == "2");
  CHECK(kv.at("theta") == "0.5");
  CHECK(kv.at("lambda") == "0:2:1");
  CHECK(kind_of([] { config::parse_key_values("B = 1\nB = 2\n"); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config::parse_key_values("no equals sign\n"); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("applying configuration") {
  auto cfg = config::apply({}, {{"B", "2"}, {"theta", "1"}, {"gauge", "landau"}, {"N", "12"}});
  CHECK(cfg.phys.B == 2.0);
  CHECK(cfg.phys.theta == 1.0);
  CHECK(cfg.gauge == Gauge::Landau);
  CHECK(cfg.N == 12);

  const auto lcs = config::apply({}, {{"units", "lambda_cs"}, {"theta", "0"}});
  const auto d = derive(lcs.phys);
  CHECK(d.mw_tilde == doctest::Approx(2.0));

  const auto ex = config::apply({}, {{"units", "explicit"}, {"hbar", "2"}, {"c", "3"}});
  CHECK(ex.phys.hbar == 2.0);
  CHECK(ex.phys.c == 3.0);

  CHECK(kind_of([] { config::apply({}, {{"colour", "red"}}); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config::apply({}, {{"hbar", "2"}}); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config::apply({}, {{"units", "lambda_cs"}, {"B", "1"}}); }) ==
        ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config::apply({}, {{"N", "many"}}); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config::apply({}, {{"gauge", "coulomb"}}); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("validation") {
  config::ExperimentConfig cfg;
  config::validate(cfg);
  cfg.N = 257;
  CHECK(kind_of([&] { config::validate(cfg); }) == ErrorKind::InvalidConfig);
  cfg.N = 10;
  cfg.lambda = config::Range{};
  CHECK(kind_of([&] { config::validate(cfg); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("loading a file") {
  ScratchDir dir("cfg");
  write_file(dir / "c.conf", "B = 1.5\nout = results\n");
  const auto cfg = config::load(dir / "c.conf");
  CHECK(cfg.phys.B == 1.5);
  CHECK(cfg.out_dir == "results");
  CHECK(kind_of([&] { config::load(dir / "absent.conf"); }) == ErrorKind::MissingInput);
}

TEST_CASE("plot scripts") {
  ScratchDir dir("plot");
  CHECK(kind_of([&] { plot::emit_plot_script(plot::Figure::Fig1, dir / "fig1.csv"); }) ==
        ErrorKind::MissingInput);

  write_file(dir / "fig1.csv", "lambda,l,zeta_abs,error\n0,2,1,0.5\n");
  write_file(dir / "fig2.csv", "lambda,l,zeta_abs,error\n2,1,1,0.5\n");
  write_file(dir / "fig3.csv", "t,re_zeta,im_zeta,abs_zeta\n0,1,0,1\n");
  write_file(dir / "fig4.csv", "lambda,r_int,r_ext\n0,1,1\n");
  write_file(dir / "trajectory.csv", "t,q1,q2,x1,x2,p1,p2\n0,1,0,1,0,0,1\n");
  const auto s1 = plot::emit_plot_script(plot::Figure::Fig1, dir / "fig1.csv");
  CHECK(s1.find("set xlabel 'λ'") != std::string::npos);
  CHECK(s1.find("set ylabel 'e'") != std::string::npos);
  CHECK(s1.find("set datafile separator ','") != std::string::npos);

  const auto s3 = plot::emit_plot_script(plot::Figure::Fig3, dir / "fig3.csv");
  CHECK(s3.find("set size ratio -1") != std::string::npos);

  const auto s4 = plot::emit_plot_script(plot::Figure::Fig4, dir / "fig4.csv");
  CHECK(s4.find("set object") != std::string::npos);
  CHECK(s4.find("from first 6") != std::string::npos);
  CHECK(s4.find("λ > 6") != std::string::npos);

  const auto tr = plot::emit_plot_script(plot::Figure::Trajectory, dir / "trajectory.csv");
  CHECK(tr.find("set size ratio -1") != std::string::npos);

  const auto written = plot::write_plot_script(plot::Figure::Fig2, dir / "fig2.csv");
  CHECK(written.parent_path() == dir.path());
  CHECK(std::filesystem::exists(written));
}
