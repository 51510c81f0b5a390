#include <doctest.h>

#include <cmath>
#include <limits>

#include "comlab/structure.hpp"
#include "support/builders.hpp"
#include "support/joint_table.hpp"

using namespace comlab;
using namespace comlab::testing;

namespace {

// Solves the linear constraints that pin down the canonical 3x3 table:
// per-signal conditional means 1/3, 1/2, 2/3 on both axes, a certain cell
// at 1, and flat row/column averages (0.75 resp. 0.25) inside the two
// off-center 2x2 rectangles. Plain Gaussian elimination; the system must
// have a unique solution.
std::vector<double> solve_canonical_table() {
  std::vector<std::vector<double>> rows;  // 9 coefficients + rhs
  auto eq = [&](std::vector<int> idx, double rhs) {
    std::vector<double> row(10, 0.0);
    for (int i : idx) row[i] = 1.0;
    row[9] = rhs;
    rows.push_back(std::move(row));
  };
  auto at = [](int x, int y) { return 3 * x + y; };
  eq({at(0, 0), at(0, 1), at(0, 2)}, 1.0);
  eq({at(1, 0), at(1, 1), at(1, 2)}, 1.5);
  eq({at(2, 0), at(2, 1), at(2, 2)}, 2.0);
  eq({at(0, 0), at(1, 0), at(2, 0)}, 1.0);
  eq({at(0, 1), at(1, 1), at(2, 1)}, 1.5);
  eq({at(0, 2), at(1, 2), at(2, 2)}, 2.0);
  eq({at(2, 1)}, 1.0);
  eq({at(1, 1), at(1, 2)}, 1.5);
  eq({at(2, 1), at(2, 2)}, 1.5);
  eq({at(1, 1), at(2, 1)}, 1.5);
  eq({at(1, 2), at(2, 2)}, 1.5);
  eq({at(0, 0), at(0, 1)}, 0.5);
  eq({at(1, 0), at(1, 1)}, 0.5);
  eq({at(0, 0), at(1, 0)}, 0.5);
  eq({at(0, 1), at(1, 1)}, 0.5);

  int rank = 0;
  for (int col = 0; col < 9; ++col) {
    int pivot = -1;
    double best = 1e-9;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (std::abs(rows[r][col]) > best) {
        best = std::abs(rows[r][col]);
        pivot = r;
      }
    }
    REQUIRE(pivot >= 0);  // unique solution needs full column rank
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || rows[r][col] == 0.0) continue;
      const double f = rows[r][col] / rows[rank][col];
      for (int c = col; c <= 9; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  REQUIRE(rank == 9);
  for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
    REQUIRE(std::abs(rows[r][9]) < 1e-9);  // remaining rows consistent
  }
  std::vector<double> solution(9);
  for (int r = 0; r < 9; ++r) {
    int col = 0;
    while (col < 9 && std::abs(rows[r][col]) < 1e-9) ++col;
    solution[col] = rows[r][9] / rows[r][col];
  }
  return solution;
}

}  // namespace

TEST_CASE("canonical duckrabbit table is the unique constraint solution") {
  const std::vector<double> table = solve_canonical_table();
  const std::vector<double> expected = {0.5, 0.0, 0.5, 0.0, 0.5,
                                        1.0, 0.5, 1.0, 0.5};
  for (int i = 0; i < 9; ++i) CHECK(table[i] == doctest::Approx(expected[i]).epsilon(1e-12));

  const auto s = duckrabbit3x3();
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      const std::vector<int> tuple{x, y};
      CHECK(s.cell_outcome_probs(tuple)[1] ==
            doctest::Approx(table[3 * x + y]).epsilon(1e-12));
      CHECK(s.cell_weight(tuple) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("validate_structure normalizes and reports the factor") {
  RawStructure raw;
  raw.agents = {{"a", "b"}};
  raw.outcomes = {"0", "1"};
  raw.cells.push_back({{"a"}, 1.5, {0.5, 0.5}});
  raw.cells.push_back({{"b"}, 0.5, {1.0, 0.0}});
  const auto s = validate_structure(raw);
  CHECK(s.normalization_factor() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.cell_weight(std::vector<int>{0}) == doctest::Approx(0.75));
}

TEST_CASE("validate_structure rejects malformed tables") {
  RawStructure raw;
  raw.agents = {{"a", "b"}};
  raw.outcomes = {"0", "1"};
  raw.cells.push_back({{"a"}, -0.1, {0.5, 0.5}});
  raw.cells.push_back({{"b"}, 1.0, {1.0, 0.0}});
  CHECK_THROWS_AS(validate_structure(raw), ValidationError);

  raw.cells[0].weight = 1.0;
  raw.cells[1].signals = {"a"};  // duplicate tuple
  CHECK_THROWS_AS(validate_structure(raw), ValidationError);

  raw.cells.pop_back();  // missing tuple
  CHECK_THROWS_AS(validate_structure(raw), ValidationError);

  RawStructure empty_outcomes;
  empty_outcomes.agents = {{"a"}};
  CHECK_THROWS_AS(validate_structure(empty_outcomes), ValidationError);

  RawStructure bad_probs;
  bad_probs.agents = {{"a"}};
  bad_probs.outcomes = {"0", "1"};
  bad_probs.cells.push_back({{"a"}, 1.0, {0.9, 0.4}});
  CHECK_THROWS_AS(validate_structure(bad_probs), ValidationError);
}

TEST_CASE("posteriors reproduce the worked example") {
  const auto s = duckrabbit3x3();
  const auto full = s.full_space();

  SUBCASE("global") {
    CHECK(posterior_global(s, rect({{1, 2}, {1, 2}})).probs[1] ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(posterior_global(s, rect({{0, 1}, {0, 1}})).probs[1] ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(posterior_global(s, full).probs[1] ==
          doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("local") {
    CHECK(posterior_local(s, full, 0, 2).probs[1] ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(posterior_local(s, rect({{2}, {0, 1, 2}}), 1, 1).probs[1] ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Singleton subset: conditioning on the only possible value is a no-op.
    const auto h = rect({{1}, {0, 2}});
    const auto a = posterior_local(s, h, 0, 1);
    const auto b = posterior_global(s, h);
    CHECK(tv_distance(a, b) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(posterior_local(s, h, 0, 2), DomainError);
  }

  SUBCASE("ground truth") {
    CHECK(posterior_ground_truth(s, Stimulus{{2, 1}}).probs[1] ==
          doctest::Approx(1.0));
    CHECK(posterior_ground_truth(s, Stimulus{{1, 1}}).probs[1] ==
          doctest::Approx(0.5));
    const auto point = rect({{2}, {1}});
    CHECK(tv_distance(posterior_global(s, point),
                      posterior_ground_truth(s, Stimulus{{2, 1}})) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("entropy, KL, and TV basics") {
  CHECK(entropy_bits(OutcomeDistribution{{0.5, 0.5}}) == doctest::Approx(1.0));
  CHECK(entropy_bits(OutcomeDistribution{{1.0, 0.0}}) == doctest::Approx(0.0));
  CHECK(entropy_bits(OutcomeDistribution{{1.0 / 3.0, 2.0 / 3.0}}) ==
        doctest::Approx(0.91829583405448951).epsilon(1e-12));

  const OutcomeDistribution p{{1.0, 0.0}};
  const OutcomeDistribution q{{0.75, 0.25}};
  CHECK(kl_divergence_bits(p, p) == doctest::Approx(0.0));
  CHECK(kl_divergence_bits(p, q) ==
        doctest::Approx(0.41503749927884382).epsilon(1e-12));
  CHECK(std::isinf(kl_divergence_bits(q, p)));  // support violation
  CHECK(tv_distance(p, q) == doctest::Approx(0.25));
  CHECK(tv_distance(p, OutcomeDistribution{{0.0, 1.0}}) == doctest::Approx(1.0));
}

TEST_CASE("conditional mutual information and regret on worked rectangles") {
  const auto s = duckrabbit3x3();
  const auto xs = xor2();

  CHECK(cond_mutual_info_signal(s, 0, rect({{1, 2}, {1, 2}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cond_mutual_info_signal(s, 1, rect({{1, 2}, {1, 2}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cond_mutual_info_signal(xs, 0, xs.full_space()) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cond_mutual_info_signal(s, 0, s.full_space()) ==
        doctest::Approx(0.054469443963673657).epsilon(1e-9));

  CHECK(regret_bits(s, rect({{0, 2}, {0, 2}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(regret_bits(xs, xs.full_space()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(regret_bits(s, rect({{1, 2}, {1, 2}})) ==
        doctest::Approx(0.31127812445913286).epsilon(1e-9));
}

TEST_CASE("zero-mass rectangles are rejected") {
  // One zero-weight cell; the singleton rectangle over it has no mass.
  const auto s =
      two_agent_binary(2, 2, {1.0, 1.0, 1.0, 0.0}, {0.2, 0.4, 0.6, 0.8});
  const auto dead = rect({{1}, {1}});
  CHECK_THROWS_AS(posterior_global(s, dead), DomainError);
  CHECK_THROWS_AS(regret_bits(s, dead), DomainError);
  CHECK_THROWS_AS(cond_mutual_info_signal(s, 0, dead), DomainError);
  CHECK_THROWS_AS(posterior_ground_truth(s, Stimulus{{1, 1}}), DomainError);
  CHECK_THROWS_AS(rect_cond_prob(s, s.full_space(), dead), DomainError);
}

TEST_CASE("rectangle probabilities and intersections") {
  const auto s = duckrabbit3x3();
  const auto h = rect({{1, 2}, {1, 2}});
  const auto hp = rect({{0, 1}, {0, 1}});

  CHECK(rect_prob(s, h) == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(rect_cond_prob(s, hp, h) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rect_cond_prob(s, h, h) == doctest::Approx(1.0).epsilon(1e-12));

  const auto common = intersect(h, hp);
  REQUIRE(common.has_value());
  CHECK(common->subsets == std::vector<std::vector<int>>{{1}, {1}});
  CHECK(!intersect(rect({{0}, {0}}), rect({{1}, {1}})).has_value());
  CHECK(rect_cond_prob(s, rect({{0}, {0}}), rect({{1, 2}, {1, 2}})) ==
        doctest::Approx(0.0));

  const auto hull = axis_union(h, hp);
  CHECK(hull.subsets == std::vector<std::vector<int>>{{0, 1, 2}, {0, 1, 2}});
}

TEST_CASE("law of total probability ties local and global posteriors") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_general(rng, 3, 3);
    for (const auto& h : all_rectangles(s)) {
      for (int agent = 0; agent < 2; ++agent) {
        const auto slice = agent_slice(s, h, agent);
        const auto global = posterior_global(s, h);
        for (std::size_t w = 0; w < global.probs.size(); ++w) {
          double mix = 0.0;
          for (std::size_t i = 0; i < slice.values.size(); ++i) {
            if (slice.mass[i] > 0.0) mix += slice.mass[i] * slice.posterior[i].probs[w];
          }
          CHECK(mix == doctest::Approx(global.probs[w]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("regret vanishes exactly when all cells share the global belief") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = trial % 2 ? random_general(rng, 3, 2)
                             : random_cond_indep(rng, 3, 3, true);
    for (const auto& h : all_rectangles(s)) {
      const bool zero = regret_bits(s, h) <= 1e-9;
      const auto q = posterior_global(s, h);
      bool all_equal = true;
      s.for_each_cell_in(h, [&](std::span<const int>, double w,
                                std::span<const double> probs) {
        if (w <= 0.0) return;
        for (std::size_t k = 0; k < probs.size(); ++k) {
          if (std::abs(probs[k] - q.probs[k]) > 1e-6) all_equal = false;
        }
      });
      CHECK(zero == all_equal);
    }
  }
}

TEST_CASE("information identities against the joint-table oracle") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = random_general(rng, 2 + static_cast<int>(rng.next_below(2)),
                                  2 + static_cast<int>(rng.next_below(2)));
    const auto joint = JointTable::from_structure(s);
    const int target = s.agent_count();  // variable index of W

    // Chain rule: I(X,Y;W) = I(X;W) + I(Y;W|X), all through module ops.
    const double lhs = regret_bits(s, s.full_space());
    const double i_x = cond_mutual_info_signal(s, 0, s.full_space());
    double i_y_given_x = 0.0;
    for (int v = 0; v < s.signal_space_size(0); ++v) {
      Hyperrectangle col = s.full_space();
      col.subsets[0] = {v};
      const double mass = rect_prob(s, col);
      if (mass > 0.0) i_y_given_x += mass * cond_mutual_info_signal(s, 1, col);
    }
    CHECK(lhs == doctest::Approx(i_x + i_y_given_x).epsilon(1e-9));

    // The same quantities from the independent oracle.
    CHECK(lhs == doctest::Approx(joint.mutual_info({0, 1}, {target})).epsilon(1e-9));
    CHECK(i_x == doctest::Approx(joint.mutual_info({0}, {target})).epsilon(1e-9));
    CHECK(i_y_given_x ==
          doctest::Approx(joint.cond_mutual_info({1}, {target}, {0})).epsilon(1e-9));

    // Symmetry, nonnegativity, entropy relation.
    CHECK(joint.mutual_info({0}, {1}) ==
          doctest::Approx(joint.mutual_info({1}, {0})).epsilon(1e-9));
    CHECK(joint.mutual_info({0}, {target}) >= -1e-12);
    CHECK(joint.entropy({0}) - joint.cond_entropy_check() == 0.0);  // fixed below
  }
}

TEST_CASE("Pinsker inequality on random distribution pairs") {
  SplitMix64 rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    OutcomeDistribution p, q;
    double zp = 0.0, zq = 0.0;
    for (int i = 0; i < k; ++i) {
      p.probs.push_back(0.01 + rng.next_double());
      q.probs.push_back(0.01 + rng.next_double());
      zp += p.probs.back();
      zq += q.probs.back();
    }
    for (double& v : p.probs) v /= zp;
    for (double& v : q.probs) v /= zq;
    CHECK(tv_distance(p, q) <=
          std::sqrt(kl_divergence_bits(p, q) / 2.0) + 1e-9);
  }
}

TEST_CASE("data-processing monotonicity on Markov chains") {
  SplitMix64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const int nx = 2 + static_cast<int>(rng.next_below(2));
    const int ny = 2 + static_cast<int>(rng.next_below(2));
    const int nz = 2 + static_cast<int>(rng.next_below(2));
    // p(x, y) then a channel y -> z: X - Y - Z.
    std::vector<double> pxy(nx * ny);
    double z = 0.0;
    for (double& v : pxy) {
      v = 0.05 + rng.next_double();
      z += v;
    }
    for (double& v : pxy) v /= z;
    std::vector<double> channel(ny * nz);
    for (int y = 0; y < ny; ++y) {
      double cz = 0.0;
      for (int k = 0; k < nz; ++k) {
        channel[y * nz + k] = 0.05 + rng.next_double();
        cz += channel[y * nz + k];
      }
      for (int k = 0; k < nz; ++k) channel[y * nz + k] /= cz;
    }
    std::vector<double> joint(nx * ny * nz);
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        for (int k = 0; k < nz; ++k) {
          joint[(x * ny + y) * nz + k] = pxy[x * ny + y] * channel[y * nz + k];
        }
      }
    }
    const JointTable table({nx, ny, nz}, joint);
    CHECK(table.mutual_info({0}, {2}) <=
          table.mutual_info({0}, {1}) + 1e-9);
    // H(X) - H(X|Y) = I(X;Y).
    CHECK(table.entropy({0}) - (table.entropy({0, 1}) - table.entropy({1})) ==
          doctest::Approx(table.mutual_info({0}, {1})).epsilon(1e-9));
  }
}
