// Copyright 2026 The storyeval Authors.
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

#ifndef STORYEVAL_STORY_HPP_
#define STORYEVAL_STORY_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace storyeval {

// Pixel coordinates, top-left origin.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  bool operator==(const BoundingBox&) const = default;
};

struct ImageRef {
  std::string image_id;
  std::string uri;
  // Zero means the extent is unknown and boxes are only checked for sign.
  int width = 0;
  int height = 0;
  bool available = true;
  std::vector<BoundingBox> boxes;

  bool operator==(const ImageRef&) const = default;
};

struct ImageSequence {
  std::string sequence_id;
  std::vector<ImageRef> images;

  std::size_t box_count() const;
  bool operator==(const ImageSequence&) const = default;
};

// Violations of the ImageSequence invariants, empty when valid.
std::vector<std::string> CheckSequence(const ImageSequence& sequence);

// Character offsets are absolute positions in Story::text, half-open.
struct NPSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string text;

  bool operator==(const NPSpan&) const = default;
};

struct Sentence {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> tokens;
  std::vector<NPSpan> nps;

  bool operator==(const Sentence&) const = default;
};

// "human" or "system:<name>".
class Author {
 public:
  Author() = default;
  static Author Human() { return Author(); }
  static Author System(std::string name);
  // Throws Error(kSchemaViolation) on anything else.
  static Author Parse(std::string_view text);

  bool is_human() const { return system_.empty(); }
  const std::string& system() const { return system_; }
  std::string ToString() const;

  bool operator==(const Author&) const = default;

 private:
  std::string system_;
};

struct Story {
  std::string story_id;
  std::string sequence_id;
  Author author;
  std::string text;
  std::vector<Sentence> sentences;

  std::size_t np_count() const;
  bool operator==(const Story&) const = default;
};

// Violations of the Story invariants (sentence reconstruction, NP ranges).
std::vector<std::string> CheckStory(const Story& story);

// Splits after '.', '!' or '?' when followed by whitespace or end of text.
// Punctuation-only fragments (". ." runs) are folded into the preceding
// sentence. Throws Error(kEmptyText) for whitespace-only input.
std::vector<Sentence> SplitSentences(std::string_view text);

// Lowercase whitespace tokens with edge punctuation stripped; bracketed
// placeholders such as "[male]" survive intact.
std::vector<std::string> Tokenize(std::string_view sentence_text);

// Builds a Story from raw text with sentences and tokens filled in, no NPs.
Story MakeStory(std::string story_id, std::string sequence_id, Author author,
                std::string text);

}  // namespace storyeval

#endif  // STORYEVAL_STORY_HPP_
