#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "krylow/errors.hpp"
#include "krylow/matrix_market.hpp"
#include "krylow/probe.hpp"

using namespace krylow;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "krylow-mm-tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p.string();
}

}  // namespace

TEST_SUITE("matrix_market") {

TEST_CASE("3-node path graph acts as expected on the all-ones vector") {
    const std::string path = write_temp("path3.mtx",
                                        "%%MatrixMarket matrix coordinate pattern symmetric\n"
                                        "3 3 2\n"
                                        "2 1\n"
                                        "3 2\n");
    MatVecOperator op = adjacency_from_matrix_market(path);
    REQUIRE(op.dim() == 3);
    DenseMatrix ones(3, 1);
    for (int i = 0; i < 3; ++i) ones(i, 0) = 1.0;
    DenseMatrix deg = op.apply_block(ones);
    CHECK(deg(0, 0) == 1.0);
    CHECK(deg(1, 0) == 2.0);
    CHECK(deg(2, 0) == 1.0);
}

TEST_CASE("one stored triangle yields a symmetric operator") {
    const std::string path = write_temp("tri.mtx",
                                        "%%MatrixMarket matrix coordinate real symmetric\n"
                                        "% a comment line\n"
                                        "4 4 4\n"
                                        "2 1 1.5\n"
                                        "3 1 -0.5\n"
                                        "4 2 2.0\n"
                                        "4 4 3.0\n");
    MatVecOperator op = adjacency_from_matrix_market(path);
    RngStream rng(31, 0);
    CHECK(symmetry_slack(op, 20, rng) <= 1e-12);
    DenseMatrix dense = op.materialize();
    CHECK(dense(0, 1) == 1.5);
    CHECK(dense(1, 0) == 1.5);
    CHECK(dense(3, 3) == 3.0);  // diagonal is not doubled
}

TEST_CASE("general files are symmetrized as (A + A^T)/2") {
    const std::string path = write_temp("gen.mtx",
                                        "%%MatrixMarket matrix coordinate real general\n"
                                        "3 3 3\n"
                                        "1 2 4.0\n"
                                        "2 1 2.0\n"
                                        "3 1 6.0\n");
    MatVecOperator op = adjacency_from_matrix_market(path);
    DenseMatrix dense = op.materialize();
    // oracle: dense (A + A^T)/2 assembly
    DenseMatrix a(3, 3);
    a(0, 1) = 4.0;
    a(1, 0) = 2.0;
    a(2, 0) = 6.0;
    DenseMatrix sym = symmetrize(a);
    CHECK(frob_norm(dense - sym) == 0.0);
}

TEST_CASE("duplicate coordinate entries are summed") {
    const std::string path = write_temp("dup.mtx",
                                        "%%MatrixMarket matrix coordinate real symmetric\n"
                                        "2 2 2\n"
                                        "2 1 1.0\n"
                                        "2 1 0.25\n");
    DenseMatrix dense = adjacency_from_matrix_market(path).materialize();
    CHECK(dense(1, 0) == 1.25);
    CHECK(dense(0, 1) == 1.25);
}

TEST_CASE("malformed header carries the line number") {
    const std::string path = write_temp("bad_header.mtx", "%%NotMatrixMarket nonsense\n1 1 0\n");
    try {
        adjacency_from_matrix_market(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
}

TEST_CASE("malformed entry carries the line number") {
    const std::string path = write_temp("bad_entry.mtx",
                                        "%%MatrixMarket matrix coordinate real general\n"
                                        "2 2 1\n"
                                        "1 oops 3.0\n");
    try {
        adjacency_from_matrix_market(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("out-of-bounds indices are rejected") {
    const std::string path = write_temp("oob.mtx",
                                        "%%MatrixMarket matrix coordinate pattern symmetric\n"
                                        "3 3 1\n"
                                        "4 1\n");
    CHECK_THROWS_AS(adjacency_from_matrix_market(path), ValidationError);
}

TEST_CASE("entry count mismatch against the header is rejected") {
    const std::string path = write_temp("count.mtx",
                                        "%%MatrixMarket matrix coordinate pattern symmetric\n"
                                        "3 3 2\n"
                                        "2 1\n");
    CHECK_THROWS_AS(adjacency_from_matrix_market(path), ParseError);
}

TEST_CASE("writer and reader round-trip a generated fixture") {
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / "krylow-mm-tests" / "gen16.mtx";
    std::vector<std::pair<int64_t, int64_t>> edges;
    for (int i = 1; i < 16; ++i) edges.push_back({i, i + 1});
    write_matrix_market_pattern(p.string(), 16, edges);
    MatVecOperator op = adjacency_from_matrix_market(p.string());
    CHECK(op.dim() == 16);
    DenseMatrix ones(16, 1);
    for (int i = 0; i < 16; ++i) ones(i, 0) = 1.0;
    DenseMatrix deg = op.apply_block(ones);
    CHECK(deg(0, 0) == 1.0);
    for (int i = 1; i < 15; ++i) CHECK(deg(i, 0) == 2.0);
    CHECK(deg(15, 0) == 1.0);
}

TEST_CASE("in-repo fixture loads") {
    // shipped with the tests; regenerate with `krylow gen-matrix --kind path:16`
    MatVecOperator op = adjacency_from_matrix_market(std::string(KRYLOW_TEST_DIR) +
                                                     "/fixtures/path16.mtx");
    CHECK(op.dim() == 16);
}

}  // TEST_SUITE
