#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "erd/errors.hpp"
#include "erd/instance/generator.hpp"
#include "erd/instance/serialization.hpp"
#include "erd/meta/meta_actions.hpp"

using namespace erd;

namespace {

bool has_category(const std::vector<std::string>& v, const std::string& cat) {
  for (const auto& s : v)
    if (s.rfind(cat, 0) == 0) return true;
  return false;
}

SchematicParams buttons(int n) {
  SchematicParams p;
  p.num_buttons = n;
  return p;
}

}  // namespace

TEST(Generate, DeterministicBytes) {
  EXPECT_EQ(instance::serialize(instance::generate(buttons(1), 7)),
            instance::serialize(instance::generate(buttons(1), 7)));
  EXPECT_NE(instance::serialize(instance::generate(buttons(1), 7)),
            instance::serialize(instance::generate(buttons(1), 8)));
}

TEST(Generate, FourButtonsOneGoal) {
  const auto inst = instance::generate(buttons(4), 3);
  EXPECT_EQ(inst.dag.num_buttons, 4);
  EXPECT_EQ(inst.layout.buttons.size(), 4u);
  EXPECT_GE(inst.dag.goal_index, 0);
  EXPECT_LT(inst.dag.goal_index, 4);
  EXPECT_TRUE(instance::validate(inst).empty());
}

TEST(Generate, ThousandSeedsValidate) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto problems = instance::validate(instance::generate(buttons(2), seed));
    ASSERT_TRUE(problems.empty()) << "seed " << seed << ": " << problems.front();
  }
}

TEST(Generate, LayoutInvariantsOverTenThousandSeeds) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto inst = instance::generate(buttons(1 + static_cast<int>(seed % 4)), seed);
    const Rect exit = inst.room.exit_region();
    const auto& bs = inst.layout.buttons;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      ASSERT_GE(bs[i].radius, 0.4);
      ASSERT_LE(bs[i].radius, 0.8);
      ASSERT_GT(exit.distance_to(bs[i].center), bs[i].radius);
      ASSERT_GT(std::hypot(bs[i].center.x - inst.start_pose.x, bs[i].center.y - inst.start_pose.y), bs[i].radius);
      for (std::size_t j = i + 1; j < bs.size(); ++j)
        ASSERT_GT(std::hypot(bs[i].center.x - bs[j].center.x, bs[i].center.y - bs[j].center.y),
                  bs[i].radius + bs[j].radius)
            << "seed " << seed;
    }
    // with non-overlapping discs no point touches two buttons
    ASSERT_LE(puzzle::detect_touches(inst.start_pose.position(), inst.layout).size(), 1u);
  }
}

TEST(Generate, RandomizedStartStaysLegal) {
  SchematicParams p = buttons(3);
  p.randomize_start = true;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = instance::generate(p, seed);
    ASSERT_TRUE(instance::validate(inst).empty());
  }
}

TEST(Generate, ExhaustedBudgetAdvisesLargerRoom) {
  SchematicParams p = buttons(4);
  p.room_width = 4.0;
  p.room_depth = 4.0;
  p.min_radius = 0.8;
  p.max_radius = 0.8;
  p.max_attempts = 50;
  try {
    instance::generate(p, 1);
    FAIL() << "expected GenerationError";
  } catch (const GenerationError& e) {
    EXPECT_NE(std::string(e.what()).find("larger room"), std::string::npos);
  }
}

TEST(Generate, RejectsOutOfRangeParams) {
  EXPECT_THROW(instance::generate(buttons(0), 1), ConfigError);
  SchematicParams small = buttons(1);
  small.room_width = 3.0;
  EXPECT_THROW(instance::generate(small, 1), ConfigError);
}

TEST(Validate, CanonicalInstancesAreValid) {
  EXPECT_TRUE(instance::validate(instance::baseline_one_button()).empty());
  EXPECT_TRUE(instance::validate(instance::ordered_two_button()).empty());
}

TEST(Validate, InjectedFaults) {
  auto cyclic = instance::ordered_two_button();
  cyclic.dag.edges.push_back({1, 0});
  EXPECT_TRUE(has_category(instance::validate(cyclic), "acyclicity"));

  auto on_exit = instance::baseline_one_button();
  on_exit.layout.buttons[0].center = {29.5, 15.0};
  EXPECT_TRUE(has_category(instance::validate(on_exit), "layout/exit overlap"));

  auto mismatch = instance::ordered_two_button();
  mismatch.num_buttons = 3;
  EXPECT_TRUE(has_category(instance::validate(mismatch), "cross-reference"));

  auto rewards = instance::baseline_one_button();
  rewards.step_reward = 1.0;
  EXPECT_TRUE(has_category(instance::validate(rewards), "rewards"));

  auto far = instance::ordered_two_button();
  far.max_episode_steps = 20;
  EXPECT_TRUE(has_category(instance::validate(far), "reachability"));
}

TEST(Serialization, RoundTripHundredInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SchematicParams p = buttons(1 + static_cast<int>(seed % 4));
    p.num_joints = static_cast<int>(seed % 3);
    p.arm_enabled = p.num_joints > 0 && seed % 2 == 0;
    p.movement_noise_std = seed % 5 == 0 ? 0.1 : 0.0;
    p.randomize_start = seed % 3 == 0;
    const auto inst = instance::generate(p, seed * 7919);
    const std::string text = instance::serialize(inst);
    const auto back = instance::deserialize(text);
    ASSERT_EQ(back, inst) << text;
    ASSERT_EQ(instance::serialize(back), text);
  }
}

TEST(Serialization, MissingFieldIsNamed) {
  auto doc = nlohmann::json::parse(instance::serialize(instance::ordered_two_button()));
  doc.erase("dag");
  try {
    instance::from_json(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "dag");
  }
}

TEST(Serialization, UnknownFieldAndLineNumbers) {
  std::string text = instance::serialize(instance::baseline_one_button());
  text.insert(text.find("\"num_buttons\""), "\"surprise\": 1,\n  ");
  try {
    instance::deserialize(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field(), "surprise");
    EXPECT_GT(e.line(), 1);
  }
  EXPECT_THROW(instance::deserialize("{ \"schema_version\": 1, "), ParseError);
}

TEST(Serialization, FutureVersionIsVersionError) {
  auto doc = nlohmann::json::parse(instance::serialize(instance::baseline_one_button()));
  doc["schema_version"] = 99;
  EXPECT_THROW(instance::deserialize(doc.dump()), VersionError);
}

TEST(Serialization, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "erd_instance_roundtrip.json";
  instance::save_instance(instance::ordered_two_button(), path);
  EXPECT_EQ(instance::load_instance(path), instance::ordered_two_button());
  std::filesystem::remove(path);
}

TEST(Canonical, OptimalRouteMagnitude) {
  const auto route = meta::optimal_route(instance::baseline_one_button());
  EXPECT_TRUE(route.exited);
  EXPECT_EQ(route.steps, 8);
  EXPECT_GT(meta::optimal_route(instance::ordered_two_button()).steps, 40);
}
