// Copyright 2026 The advtext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Hand-traceable mock world shared by the unit and acceptance suites.
// Every expected verdict, delta and statistic asserted against these
// fixtures was derived by walking the rule tables below by hand.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "advtext/core.hpp"
#include "advtext/mock_clients.hpp"

namespace fixtures {

using namespace advtext;

inline const Label kNeg{"neg"};
inline const Label kNeu{"neu"};
inline const Label kPos{"pos"};

inline std::vector<Label> ternary_labels() { return {kNeg, kNeu, kPos}; }

// First matching substring rule wins; "neu 0.50" when nothing matches.
inline MockClassifier standard_classifier() {
  return MockClassifier(ternary_labels(),
                        {
                            {"awful", kNeg, 0.95},
                            {"bad", kNeg, 0.80},
                            {"great", kPos, 0.90},
                            {"good", kPos, 0.70},
                            {"fine", kPos, 0.52},
                            {"meh", kNeu, 0.63},
                        },
                        Prediction(kNeu, 0.50));
}

// --- paraphrase fixture (8 points) ---------------------------------------
// Expected: p3 Misprediction; p2, p8 Pass; p1, p4, p5, p6, p7 Fail with
// deltas -20, 0 (no-op), 0, -18, 0.

inline MockParaphraser paraphrase_table() {
  return MockParaphraser({
      {"a good day", "a great day"},
      {"what a good movie", "what a movie"},
      {"awful awful", "so awful"},
      {"fine then", "good then"},
      {"nothing here", "zilch here"},
      {"great plan", "meh plan"},
  });
}

inline std::vector<DataPoint> paraphrase_points() {
  return {
      {"p1", "a good day", kPos},        {"p2", "what a good movie", kPos},
      {"p3", "bad day", kNeu},           {"p4", "meh stuff", kNeu},
      {"p5", "awful awful", kNeg},       {"p6", "fine then", kPos},
      {"p7", "nothing here", kNeu},      {"p8", "great plan", kPos},
  };
}

// --- back-translation fixture (5 points) ----------------------------------
// Expected: b3 Misprediction; b1, b4 Pass; b2 Fail delta 0 no-op; b5 Fail
// delta +20.

inline MockTranslator bt_forward() {
  return MockTranslator("bn", "en",
                        {
                            {"a good day", "T-b1"},
                            {"meh stuff", "T-b4"},
                            {"great great news", "T-b5"},
                        });
}

inline MockTranslator bt_backward() {
  return MockTranslator("en", "bn",
                        {
                            {"T-b1", "a bad day"},
                            {"T-b4", "fine stuff"},
                            {"T-b5", "good news"},
                        });
}

inline std::vector<DataPoint> bt_points() {
  return {
      {"b1", "a good day", kPos}, {"b2", "joy joy", kNeu},          {"b3", "bad day", kNeu},
      {"b4", "meh stuff", kNeu},  {"b5", "great great news", kPos},
  };
}

// --- one-hot fixture (5 points) --------------------------------------------
// q1: leave-one-out on "good" flips -> infinite priority; fills yield two
//     successful adversaries ("a bad day" 0.80, "a nice day" 0.50).
// q2: finite-priority candidate (drop 13) whose only fill fails -> no rows.
// q3: mispredicted. q4, q5: no exploitable token -> no rows.

inline MockFillMask standard_fillmask() {
  return MockFillMask("<mask>",
                      {
                          {"a", "day", {{"bad", 0.9}, {"great", 0.8}, {"nice", 0.2}}},
                      },
                      {{"some", 0.4}});
}

inline std::vector<DataPoint> onehot_points() {
  return {
      {"q1", "a good day", kPos}, {"q2", "meh stuff", kNeu},    {"q3", "bad day", kNeu},
      {"q4", "plain words", kNeu}, {"q5", "joy joy", kNeu},
  };
}

// --- one-hot budget fixture (4 points, run with max_pass = 1) --------------
// r1 mispredicted, r2 attacked (Pass), r3 and r4 skipped.

inline std::vector<DataPoint> budget_points() {
  return {
      {"r1", "bad day", kNeu},
      {"r2", "a good day", kPos},
      {"r3", "great news", kPos},
      {"r4", "meh stuff", kNeu},
  };
}

// --- one-hot top-10 fixture -------------------------------------------------
// One infinite-priority candidate whose mask accepts 12 fill words, every
// one flipping the label at a distinct confidence. Run with
// top_k_unmask = 12: 12 successful fills, of which the top 10 by attacked
// confidence survive.

inline MockClassifier top10_classifier() {
  std::vector<MockClassifier::Rule> rules = {{"good", kPos, 0.70}};
  const double scores[12] = {0.79, 0.81, 0.83, 0.84, 0.86, 0.87,
                             0.89, 0.92, 0.93, 0.94, 0.96, 0.97};
  for (int i = 0; i < 12; ++i) {
    char word[8];
    std::snprintf(word, sizeof(word), "w%02d", i + 1);
    rules.push_back({word, kNeg, scores[i]});
  }
  return MockClassifier(ternary_labels(), std::move(rules), Prediction(kNeu, 0.50));
}

inline MockFillMask top10_fillmask() {
  std::vector<MockFillMask::Fill> fills;
  for (int i = 0; i < 12; ++i) {
    char word[8];
    std::snprintf(word, sizeof(word), "w%02d", i + 1);
    // Fill scores descend with discovery order while the attacked
    // confidences ascend, so the final sort has real work to do.
    fills.push_back({word, 0.99 - 0.01 * i});
  }
  return MockFillMask("<mask>", {{"alpha", "beta", fills}});
}

inline std::vector<DataPoint> top10_points() { return {{"s1", "alpha good beta", kPos}}; }

// --- all-mispredicted paraphrase fixture ------------------------------------

inline std::vector<DataPoint> all_mispredicted_points() {
  return {
      {"m1", "bad day", kPos},
      {"m2", "a good day", kNeg},
      {"m3", "meh stuff", kPos},
  };
}

}  // namespace fixtures
