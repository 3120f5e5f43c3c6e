#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "coinweigh/core.hpp"
#include "coinweigh/rational.hpp"

#include "json.hpp"

namespace coinweigh {

/// Three messages of `length` bits each, one per user. Message values are
/// 0-based integers in [0, 2^length); digit k of a message is its k-th bit,
/// most significant first.
struct MessageTriple {
  std::uint32_t length = 0;
  std::array<std::uint64_t, 3> messages{};

  MessageTriple(std::uint32_t length_, std::array<std::uint64_t, 3> messages_);

  /// user in {1,2,3}, k in [1, length].
  int digit(int user, std::uint32_t k) const;

  friend bool operator==(const MessageTriple&, const MessageTriple&) = default;
};

/// The channel: three binary inputs in, their sum out.
int adder(int x1, int x2, int x3);

/// What one encoder puts on the channel at one slot, given only its own
/// message and the full feedback (all previous outputs). Slots 1..length are
/// first-round: user i sends digit k = slot of its message. Later slots
/// re-resolve the j-th ambiguous position k (j = slot - length, positions in
/// ascending order, derived from the feedback alone): user 1 sends its digit,
/// user 2 the complement of its digit, user 3 a constant 0. Throws
/// ProtocolError when the feedback cannot belong to any valid session.
int encoder_step(int user, std::uint64_t message, std::uint32_t length, std::uint32_t slot,
                 std::span<const int> feedback);

struct ChannelSlot {
  int stage;        // 1 or 2
  std::uint32_t k;  // digit position this slot carries
  std::array<int, 3> inputs;
  int output;
};

struct ChannelTranscript {
  std::uint32_t length = 0;
  std::array<std::uint64_t, 3> messages{};
  std::vector<ChannelSlot> slots;
  std::vector<int> stage1_outputs;               // y_1 .. y_length
  std::vector<std::uint32_t> ambiguous_positions; // ascending
  std::vector<int> stage2_outputs;               // one per ambiguous position
  std::uint32_t total = 0;                       // length + ambiguities
};

struct SessionResult {
  ChannelTranscript transcript;
  MessageTriple decoded;
};

/// Runs the slot-synchronous loop: every slot collects the three encoder
/// outputs, adds them, and appends the sum to the feedback seen by all
/// encoders and the decoder. Decoding is zero-error: the decoded triple
/// always equals the sent one (verified exhaustively in tests).
SessionResult run_session(const MessageTriple& sent);

/// Rebuilds the three messages from the outputs alone, using the same decode
/// table as the coin search: 0 and 3 pin a position directly, 1 and 2
/// consume the next second-round output. Throws ProtocolError on any output
/// no valid session produces (including a second-round 3).
MessageTriple decode_transcript(std::uint32_t length, std::span<const int> stage1_outputs,
                                std::span<const int> stage2_outputs);

/// Mean slots used over uniform independent messages, exactly: a position is
/// ambiguous for 6 of the 8 equally likely digit triples, so the mean is
/// length + (3/4) length = 7*length/4.
Rational expected_transmissions(std::uint32_t length);

struct ChannelVerifyReport {
  std::uint32_t length = 0;
  std::uint64_t sessions = 0;
  std::uint64_t decode_failures = 0;
  std::uint64_t law_violations = 0;  // slots where output != sum of inputs
  std::map<std::uint32_t, std::uint64_t> distribution;  // total slots -> sessions
  Rational mean_transmissions;
};

/// Runs every one of the 2^(3*length) message triples through a session and
/// checks zero-error decoding, the channel law at every slot, and the
/// total = length + ambiguities accounting. Supported for length <= 8.
ChannelVerifyReport verify_channel(std::uint32_t length);

nlohmann::ordered_json to_json(const SessionResult& result);
nlohmann::ordered_json to_json(const ChannelVerifyReport& report);

}  // namespace coinweigh
