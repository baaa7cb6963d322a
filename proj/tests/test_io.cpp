#include <cstdio>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "maxlin/io.hpp"

using namespace maxlin;

TEST_CASE("model files round-trip") {
  const auto f = io::parse_model(R"({
    "A": [[1, 0, 0], [1, 1, 0], [1, 1, 1]],
    "margins": [{"kind": "frechet"}, {"kind": "frechet", "alpha": 2, "scale": 0.5},
                {"kind": "tabulated", "knots": [0, 1, 3], "density": [0.2, 0.4]}],
    "B": [[0, 1, 0]]
  })");
  CHECK(f.a == test::example_matrix());
  REQUIRE(f.margins.size() == 3);
  CHECK(f.margins[1].as_frechet().alpha == 2.0);
  CHECK(f.margins[1].as_frechet().scale == 0.5);
  CHECK_FALSE(f.margins[2].is_frechet());
  REQUIRE(f.b.has_value());
  CHECK(*f.b == Matrix::from_rows({{0, 1, 0}}));

  const auto text = io::model_to_json(f.a, test::unit_frechet(3), &*f.b);
  const auto back = io::parse_model(text);
  CHECK(back.a == f.a);
  CHECK(*back.b == *f.b);
  CHECK(back.margins[2].as_frechet().alpha == 1.0);
}

TEST_CASE("model file errors") {
  CHECK(test::error_code([] { io::parse_model("{"); }) == Errc::InvalidSpec);
  CHECK(test::error_code([] { io::parse_model(R"({"margins": []})"); }) == Errc::InvalidSpec);
  CHECK(test::error_code([] { io::parse_model(R"({"A": [[1]]})"); }) == Errc::InvalidSpec);
  CHECK(test::error_code([] { io::parse_model(R"({"A": [[1, 2], [3]], "margins": []})"); }) ==
        Errc::DimensionMismatch);
  CHECK(test::error_code([] {
          io::parse_model(R"({"A": [[1]], "margins": [{"kind": "gumbel"}]})");
        }) == Errc::InvalidMargin);
  CHECK(test::error_code([] {
          io::parse_model(R"({"A": [[1]], "margins": [{"kind": "frechet", "alpha": -1}]})");
        }) == Errc::InvalidMargin);
  CHECK(test::error_code([] { io::parse_model(R"({"A": "x", "margins": []})"); }) ==
        Errc::InvalidSpec);
  CHECK(test::error_code([] { io::load_model("/nonexistent/model.json"); }) == Errc::Io);
}

TEST_CASE("MARMA and Smith job files") {
  const auto m = io::parse_marma_spec(R"({"phi": [0.7, 0.5, 0.3], "truncation": 50, "horizon": 5})");
  CHECK(m.phi.size() == 3);
  CHECK(m.theta.empty());
  CHECK(m.truncation == 50);
  CHECK(m.n_observed == 100);
  CHECK(m.horizon == 5);
  CHECK(test::error_code([] { io::parse_marma_spec(R"({"phi": [1.5]})"); }) == Errc::NonStationary);

  const auto job = io::parse_smith_job(R"({
    "sites": [[0, 0], [1, 1]], "values": [5, 5], "q": 10,
    "grid": {"lo": -1, "hi": 1, "k": 3}, "prediction_sites": [[0.5, 0.5]]
  })");
  CHECK(job.spec.q == 10);
  CHECK(job.values == std::vector<double>{5, 5});
  REQUIRE(job.spec.prediction_sites.size() == 1 + 9 + 2);
  CHECK(job.spec.prediction_sites[0] == Site{0.5, 0.5});
  CHECK(job.spec.prediction_sites[1] == Site{-1, -1});
  CHECK(job.spec.prediction_sites.back() == Site{1, 1});
  CHECK(test::error_code([] {
          io::parse_smith_job(R"({"sites": [[0, 0]], "values": [5, 5]})");
        }) == Errc::InvalidSpec);
  CHECK(test::error_code([] {
          io::parse_smith_job(R"({"sites": [[0, 0, 1]], "values": [5]})");
        }) == Errc::InvalidSpec);
}

TEST_CASE("CSV parsing") {
  const auto t = io::parse_csv("x1,x2\r\n1, 2.5\n\n3,4e-3\n");
  CHECK(t.header == std::vector<std::string>{"x1", "x2"});
  CHECK(t.rows == std::vector<std::vector<double>>{{1, 2.5}, {3, 4e-3}});
  CHECK(test::error_code([] { io::parse_csv(""); }) == Errc::InvalidSpec);
  CHECK(test::error_code([] { io::parse_csv("a,b\n1\n"); }) == Errc::InvalidSpec);
  CHECK(test::error_code([] { io::parse_csv("a\nfoo\n"); }) == Errc::InvalidSpec);
  CHECK(io::parse_csv("a,b").rows.empty());
}

TEST_CASE("CSV writing is lossless") {
  std::ostringstream os;
  const double third = 1.0 / 3.0;
  io::write_csv(os, {"a", "b"}, {{third, 1e-300}, {2, 0}});
  const auto t = io::parse_csv(os.str());
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.rows[0][0] == third);
  CHECK(t.rows[0][1] == 1e-300);
  CHECK(io::format_number(2.0) == "2");

  const auto path = (std::filesystem::temp_directory_path() / "maxlin_io_test.csv").string();
  io::write_csv_file(path, {"x1", "x2", "x3"}, {{1, 1, 3}});
  CHECK(io::read_observation(path) == std::vector<double>{1, 1, 3});
  io::write_csv_file(path, {"x1"}, {{1}, {2}});
  CHECK(test::error_code([&] { io::read_observation(path); }) == Errc::InvalidSpec);
  std::remove(path.c_str());
  CHECK(test::error_code([] { io::write_csv_file("/nonexistent/dir/out.csv", {"a"}, {}); }) ==
        Errc::Io);
}
