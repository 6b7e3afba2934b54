#include <gtest/gtest.h>

#include <fstream>

#include "chest/config.hpp"
#include "chest/error.hpp"
#include "support.hpp"

namespace chest {
namespace {

TEST(Defaults, NamedConstants) {
  EXPECT_EQ(kDefaultGamma, 5.0);
  EXPECT_EQ(kDefaultLambda, 20.0);
  EXPECT_EQ(kDefaultEta, 1.0);
  EXPECT_EQ(kDefaultGammaHyp, 1.0);
  EXPECT_EQ(kDefaultTau, 0.5);
  EXPECT_EQ(kDefaultCurvature, 0.5);
  EXPECT_EQ(kDefaultClipRadius, 2.3);
  EXPECT_EQ(kDefaultBoundaryEps, 1e-5);
  EXPECT_EQ(kDefaultArctanhEps, 1e-15);
}

TEST(Defaults, ConfigUsesConstants) {
  const ExperimentConfig c = default_config();
  EXPECT_EQ(c.loss.gamma_E, kDefaultGamma);
  EXPECT_EQ(c.loss.gamma_H, kDefaultGamma);
  EXPECT_EQ(c.loss.lambda_E, kDefaultLambda);
  EXPECT_EQ(c.loss.lambda_H, kDefaultLambda);
  EXPECT_EQ(c.loss.eta_E, kDefaultEta);
  EXPECT_EQ(c.loss.eta_H, kDefaultEta);
  EXPECT_EQ(c.loss.gamma_hyp, kDefaultGammaHyp);
  EXPECT_EQ(c.loss.tau, kDefaultTau);
  EXPECT_EQ(c.ball.curvature, kDefaultCurvature);
  EXPECT_EQ(c.ball.clip_radius, kDefaultClipRadius);
  EXPECT_EQ(c.train.beta1, 0.9);
  EXPECT_EQ(c.train.beta2, 0.999);
  EXPECT_EQ(c.train.weight_decay, 0.01);
  EXPECT_EQ(c.train.adam_eps, 1e-8);
  EXPECT_NO_THROW(c.validate());
}

TEST(Json, RoundTrip) {
  ExperimentConfig c;
  c.loss.delta_H = 20.0;
  c.train.seed = 77;
  c.encoder.kind = EncoderKind::Mlp2;
  c.encoder.hidden_dim = 12;
  c.eval.ks = {1, 5};
  c.ablate.seeds = {3, 4};
  const ExperimentConfig back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Json, PartialConfigKeepsDefaults) {
  const ExperimentConfig c = config_from_json(nlohmann::json::parse(R"({"loss": {"tau": 0.25}})"));
  EXPECT_EQ(c.loss.tau, 0.25);
  EXPECT_EQ(c.loss.lambda_E, kDefaultLambda);
}

TEST(Json, UnknownKeysRejected) {
  try {
    config_from_json(nlohmann::json::parse(R"({"loss": {"tua": 0.25}, "extra": 1})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(std::string(e.what()).find("loss.tua"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("extra"), std::string::npos);
  }
}

TEST(Json, WrongTypeRejected) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"train": {"steps": "many"}})")), Error);
}

TEST(Overrides, DottedPaths) {
  nlohmann::json j = nlohmann::json::object();
  apply_override(j, "loss.delta_H=20");
  apply_override(j, "model.encoder=mlp2");
  apply_override(j, "eval.ks=[1,10]");
  apply_override(j, "output.dir=runs/x");
  EXPECT_EQ(j["loss"]["delta_H"], 20);
  EXPECT_EQ(j["model"]["encoder"], "mlp2");
  EXPECT_EQ(j["eval"]["ks"], nlohmann::json::parse("[1,10]"));
  EXPECT_EQ(j["output"]["dir"], "runs/x");
  EXPECT_THROW(apply_override(j, "no-equals"), Error);
  EXPECT_THROW(apply_override(j, "loss.delta_H.x=1"), Error);
}

TEST(Validation, ListsEveryViolatedRule) {
  nlohmann::json j = nlohmann::json::object();
  for (const char* o : {"loss.tau=0.5", "model.per_class=1", "loss.gamma_E=0", "ball.curvature=-1"}) apply_override(j, o);
  const ExperimentConfig c = config_from_json(j);
  try {
    c.validate();
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(msg.find("K) >= 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("gamma_E"), std::string::npos) << msg;
    EXPECT_NE(msg.find("curvature"), std::string::npos) << msg;
  }
}

TEST(Validation, SpaceWeightsMustNotBothVanish) {
  ExperimentConfig c;
  c.loss.eta_E = 0.0;
  c.loss.eta_H = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Validation, InputDimMustMatchSyntheticData) {
  ExperimentConfig c;
  c.encoder.input_dim = 10;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Files, LoadWithOverridesAndSnapshot) {
  const auto dir = testing::temp_dir("config");
  {
    std::ofstream f(dir / "c.json");
    f << R"({"train": {"steps": 10}, "loss": {"delta_E": 5}})";
  }
  const ExperimentConfig c = load_config(dir / "c.json", {"train.steps=12"});
  EXPECT_EQ(c.train.steps, 12u);
  EXPECT_EQ(c.loss.delta_E, 5.0);
  save_config(dir / "snap.json", c);
  EXPECT_EQ(to_json(load_config(dir / "snap.json", {})), to_json(c));
  try {
    load_config(dir / "missing.json", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
  {
    std::ofstream f(dir / "bad.json");
    f << "{ not json";
  }
  try {
    load_config(dir / "bad.json", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
}

}  // namespace
}  // namespace chest
