#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace progrd {

// A pitch class 0..11 (0 = C) or the pause symbol.
class Note {
 public:
  static constexpr std::uint8_t kPauseValue = 12;
  static constexpr int kPitchClasses = 12;
  static constexpr int kAlphabetSize = 13;

  constexpr Note() = default;
  static constexpr Note pitch(int pc) { return Note(static_cast<std::uint8_t>(pc)); }
  static constexpr Note pause() { return Note(kPauseValue); }
  // Index into the 13-symbol alphabet, pause last.
  static constexpr Note from_index(int i) { return Note(static_cast<std::uint8_t>(i)); }

  constexpr bool is_pause() const { return value_ == kPauseValue; }
  constexpr int pitch_class() const { return value_; }
  constexpr int index() const { return value_; }

  // Semitone shift within the octave; pauses stay put.
  constexpr Note shifted(int semitones) const {
    if (is_pause()) return *this;
    int v = (static_cast<int>(value_) + semitones) % kPitchClasses;
    if (v < 0) v += kPitchClasses;
    return Note(static_cast<std::uint8_t>(v));
  }

  std::string str() const { return is_pause() ? "p" : std::to_string(value_); }

  friend constexpr bool operator==(Note a, Note b) { return a.value_ == b.value_; }
  friend constexpr bool operator!=(Note a, Note b) { return a.value_ != b.value_; }
  friend constexpr bool operator<(Note a, Note b) { return a.value_ < b.value_; }

 private:
  constexpr explicit Note(std::uint8_t v) : value_(v) {}
  std::uint8_t value_ = 0;
};

using NoteSeq = std::vector<Note>;

std::string to_string(const NoteSeq& notes);

}  // namespace progrd
