#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "tvcs/io.hpp"

using namespace tvcs;
namespace fs = std::filesystem;
using cd = std::complex<double>;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tvcs_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(FormatNumber, RoundTripsEveryBit) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5000; ++i) {
    std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const double back = io::parse_number(io::format_number(v), "x", 1);
    EXPECT_EQ(std::memcmp(&v, &back, sizeof v), 0) << io::format_number(v);
  }
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_EQ(io::format_number(-3.0), "-3");
  EXPECT_EQ(io::format_number(std::nan("")), "nan");
}

TEST(ParseCsv, TrimsFieldsAndRecordsLines) {
  const auto t = io::parse_csv("a, b\n\n 1 ,2\n3,4\r\n", "mem");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "1");
  EXPECT_EQ(t.line_numbers[0], 3u);
  EXPECT_EQ(t.line_numbers[1], 4u);
  EXPECT_EQ(t.column("b", "mem"), 1u);
}

TEST(ParseCsv, ErrorsCarryLineNumbers) {
  try {
    io::parse_csv("a,b\n1,2\n3\n", "mem.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("mem.csv:3"), std::string::npos);
  }
  try {
    io::parse_csv("   \n", "empty.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    io::parse_number("1.5x", "f", 7);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
  }
  EXPECT_THROW(io::parse_number("", "f", 1), ParseError);
  EXPECT_THROW(io::parse_integer("2.0", "f", 1), ParseError);
  EXPECT_EQ(io::parse_integer("12", "f", 1), 12);
  EXPECT_EQ(io::parse_number("+2.5e-3", "f", 1), 2.5e-3);
}

TEST(Excitations, RoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  CVector<double> w(9);
  for (auto& x : w) x = cd(g(rng), g(rng));
  const auto p = scratch("exc.csv");
  io::write_text(p, io::excitations_csv(w));
  EXPECT_EQ(io::load_excitations(p), w);

  io::write_text(p, io::synthesis_excitations_csv(&w, CVector<double>(2.0 * w)));
  EXPECT_EQ(io::load_excitations(p), CVector<double>(2.0 * w));
  io::write_text(p, io::synthesis_excitations_csv(nullptr, w));
  EXPECT_EQ(io::load_excitations(p), w);
}

TEST(Excitations, MalformedFilesReportTheLine) {
  const auto p = scratch("bad.csv");
  io::write_text(p, "n,re,im\n1,0.5,0\n2,abc,0\n");
  try {
    io::load_excitations(p);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  io::write_text(p, "n,re,im\n2,0.5,0\n");
  EXPECT_THROW(io::load_excitations(p), ParseError);
  io::write_text(p, "n,x,y\n1,0.5,0\n");
  EXPECT_THROW(io::load_excitations(p), ParseError);
}

TEST(Files, MissingFileNamesThePath) {
  try {
    io::read_csv("/nonexistent/dir/table.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/table.csv"), std::string::npos);
  }
}

TEST(ElementTable, RoundTrip) {
  RVector<double> ang(3);
  ang << -90.0, 0.0, 90.0;
  CMatrix<double> val(3, 2);
  val << cd(0.1, 0), cd(0.2, 0.3), cd(1, 0), cd(1, -0.5), cd(0.1, 0), cd(0.2, 0.25);
  const auto e = ElementPatternSet<double>::tabulated(ang, val);
  const auto p = scratch("elem.csv");
  io::write_text(p, io::element_table_csv(e));
  const auto back = io::load_element_table(p);
  EXPECT_EQ(back.angles(), ang);
  EXPECT_EQ(back.values(), val);
}

TEST(ElementTable, HeaderAndCoverageErrors) {
  const auto p = scratch("elem_bad.csv");
  io::write_text(p, "theta_deg,re_1\n-90,1\n90,1\n");
  EXPECT_THROW(io::load_element_table(p), ParseError);
  io::write_text(p, "theta_deg,re_1,im_2\n-90,1,0\n90,1,0\n");
  EXPECT_THROW(io::load_element_table(p), ParseError);
  io::write_text(p, "theta_deg,re_1,im_1\n-45,1,0\n90,1,0\n");
  EXPECT_THROW(io::load_element_table(p), ParseError);
}

TEST(Reference, RoundTrip) {
  RVector<double> a(4);
  a << -60.0, -10.0, 5.0, 70.0;
  CVector<double> s(4);
  s << cd(0.1, 0.2), cd(1, 0), cd(0.5, -0.5), cd(0, 0);
  const ReferencePattern<double> ref{s, DirectionGrid<double>(a), std::nullopt, "x"};
  const auto p = scratch("ref.csv");
  io::write_text(p, io::reference_csv(ref));
  const auto back = io::load_reference(p);
  EXPECT_EQ(back.samples, s);
  EXPECT_EQ(back.grid.angles(), a);
  EXPECT_FALSE(back.source_excitations.has_value());

  io::write_text(p, "theta_deg,re,im\n10,1,0\n5,1,0\n");
  EXPECT_THROW(io::load_reference(p), ParseError);
}

TEST(Writers, HeadersAndOneBasedIndices) {
  CVector<double> wt(2);
  wt << cd(1, 0), cd(0.5, 0.25);
  const ClusteredLayout<double> l({0, 3}, wt, 5);
  EXPECT_EQ(io::layout_csv(l),
            "cluster_id,first_element,last_element,re_weight,im_weight\n1,1,3,1,0\n2,4,5,0.5,0.25\n");

  MetricsReport<double> r{0.001, 0.25, 6.5, -18.25, 12.5, 5};
  EXPECT_EQ(io::report_csv(r), "xi,chi,drr_db,sll_db,dmax_db,q\n0.001,0.25,6.5,-18.25,12.5,5\n");
  EXPECT_NE(io::report_json(r).find("\"sll_db\": -18.25"), std::string::npos);

  RVector<double> th(2);
  th << -1.0, 1.0;
  CVector<double> a(2), b(2);
  a << cd(1, 0), cd(0.1, 0);
  b << cd(0, 0), cd(2, 0);
  EXPECT_EQ(io::pattern_csv(th, a, b), "theta_deg,ref_db,tvcs_db\n-1,0,-300\n1,-20,0\n");

  PartitionResult<double> pr{{0, 2, 5}, 0.5, 3};
  EXPECT_EQ(io::partition_front_csv({pr}), "q,cost,boundaries\n3,0.5,1 3 6\n");

  std::vector<FailedPoint<double>> f{{2.0, 3.0, "bad, really\nbad"}};
  EXPECT_EQ(io::failures_csv(f), "gamma,beta,error\n2,3,bad; really;bad\n");

  std::vector<TraceRow<double>> tr{{1, 2.0, 3.0, 4.0, 5.0, 1.0, 0.5}};
  EXPECT_EQ(io::trace_csv(tr), "iter,phi,grad_norm,tv_residual,fit_residual,sigma,rho\n1,2,3,4,5,1,0.5\n");
}
