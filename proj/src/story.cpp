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

#include "storyeval/story.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>

#include "storyeval/errors.hpp"

namespace storyeval {
namespace {

constexpr std::string_view kSystemPrefix = "system:";

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }

// Non-ASCII bytes count as word characters so UTF-8 text is never dropped.
bool HasWordChar(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) != 0;
  });
}

std::string StripToken(std::string token) {
  for (;;) {
    std::size_t before = token.size();
    while (!token.empty() && IsPunct(token.front()) && token.front() != '[') {
      token.erase(token.begin());
    }
    while (!token.empty() && IsPunct(token.back()) && token.back() != ']') {
      token.pop_back();
    }
    // Unbalanced brackets are ordinary punctuation.
    if (!token.empty() && token.front() == '[' &&
        token.find(']') == std::string::npos) {
      token.erase(token.begin());
    }
    if (!token.empty() && token.back() == ']' &&
        token.find('[') == std::string::npos) {
      token.pop_back();
    }
    if (token.size() == before) return token;
  }
}

}  // namespace

std::size_t ImageSequence::box_count() const {
  std::size_t n = 0;
  for (const auto& image : images) n += image.boxes.size();
  return n;
}

std::vector<std::string> CheckSequence(const ImageSequence& sequence) {
  std::vector<std::string> problems;
  if (sequence.images.empty()) problems.push_back("sequence has no images");
  for (const auto& image : sequence.images) {
    for (std::size_t b = 0; b < image.boxes.size(); ++b) {
      const auto& box = image.boxes[b];
      bool bad = box.w < 0 || box.h < 0 || box.x < 0 || box.y < 0;
      if (image.width > 0 && box.x + box.w > image.width) bad = true;
      if (image.height > 0 && box.y + box.h > image.height) bad = true;
      if (bad) {
        problems.push_back("box " + std::to_string(b) + " of image " +
                           image.image_id + " outside image extent");
      }
    }
  }
  return problems;
}

Author Author::System(std::string name) {
  if (name.empty()) throw Error(ErrorCode::kSchemaViolation, "empty system name");
  Author a;
  a.system_ = std::move(name);
  return a;
}

Author Author::Parse(std::string_view text) {
  if (text == "human") return Human();
  if (text.substr(0, kSystemPrefix.size()) == kSystemPrefix) {
    return System(std::string(text.substr(kSystemPrefix.size())));
  }
  throw Error(ErrorCode::kSchemaViolation,
              "author must be 'human' or 'system:<name>', got '" +
                  std::string(text) + "'");
}

std::string Author::ToString() const {
  return is_human() ? "human" : std::string(kSystemPrefix) + system_;
}

std::size_t Story::np_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.nps.size();
  return n;
}

std::vector<std::string> CheckStory(const Story& story) {
  std::vector<std::string> problems;
  if (story.sentences.empty()) {
    problems.push_back("story has no sentences");
    return problems;
  }
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < story.sentences.size(); ++i) {
    const auto& s = story.sentences[i];
    const std::string where = "sentence " + std::to_string(i + 1);
    if (s.begin < cursor || s.end < s.begin || s.end > story.text.size()) {
      problems.push_back(where + " has an invalid character range");
      continue;
    }
    std::string_view gap(story.text.data() + cursor, s.begin - cursor);
    if (!std::all_of(gap.begin(), gap.end(), IsSpace)) {
      problems.push_back(where + " is not separated by whitespace only");
    }
    if (story.text.compare(s.begin, s.end - s.begin, s.text) != 0) {
      problems.push_back(where + " text does not match its range");
    }
    for (const auto& np : s.nps) {
      if (np.begin < s.begin || np.end > s.end || np.end <= np.begin) {
        problems.push_back(where + " has an NP span outside its range");
      }
    }
    cursor = s.end;
  }
  std::string_view tail(story.text.data() + cursor, story.text.size() - cursor);
  if (!std::all_of(tail.begin(), tail.end(), IsSpace)) {
    problems.push_back("trailing text not covered by any sentence");
  }
  return problems;
}

std::vector<Sentence> SplitSentences(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), IsSpace)) {
    throw Error(ErrorCode::kEmptyText, "story text is empty");
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::size_t b = start;
    std::size_t e = end;
    while (b < e && IsSpace(text[b])) ++b;
    while (e > b && IsSpace(text[e - 1])) --e;
    if (b < e) ranges.emplace_back(b, e);
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (IsTerminal(text[i]) && (i + 1 == text.size() || IsSpace(text[i + 1]))) {
      flush(i + 1);
    }
  }
  flush(text.size());

  std::vector<std::pair<std::size_t, std::size_t>> merged;
  std::size_t pending_begin = std::string_view::npos;
  for (auto [b, e] : ranges) {
    if (!HasWordChar(text.substr(b, e - b))) {
      if (!merged.empty()) {
        merged.back().second = e;
      } else if (pending_begin == std::string_view::npos) {
        pending_begin = b;
      }
      continue;
    }
    if (pending_begin != std::string_view::npos) {
      b = pending_begin;
      pending_begin = std::string_view::npos;
    }
    merged.emplace_back(b, e);
  }
  if (merged.empty()) merged.emplace_back(ranges.front().first, ranges.back().second);

  std::vector<Sentence> sentences;
  sentences.reserve(merged.size());
  for (auto [b, e] : merged) {
    Sentence s;
    s.text = std::string(text.substr(b, e - b));
    s.begin = b;
    s.end = e;
    s.tokens = Tokenize(s.text);
    sentences.push_back(std::move(s));
  }
  return sentences;
}

std::vector<std::string> Tokenize(std::string_view sentence_text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < sentence_text.size()) {
    while (i < sentence_text.size() && IsSpace(sentence_text[i])) ++i;
    std::size_t j = i;
    while (j < sentence_text.size() && !IsSpace(sentence_text[j])) ++j;
    if (j > i) {
      std::string raw(sentence_text.substr(i, j - i));
      std::transform(raw.begin(), raw.end(), raw.begin(), [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      });
      std::string token = StripToken(std::move(raw));
      if (!token.empty()) tokens.push_back(std::move(token));
    }
    i = j;
  }
  return tokens;
}

Story MakeStory(std::string story_id, std::string sequence_id, Author author,
                std::string text) {
  Story story;
  story.story_id = std::move(story_id);
  story.sequence_id = std::move(sequence_id);
  story.author = std::move(author);
  story.sentences = SplitSentences(text);
  story.text = std::move(text);
  return story;
}

}  // namespace storyeval
