#include "coinweigh/channel.hpp"

#include <string>

#include "coinweigh/decode_table.hpp"

namespace coinweigh {

namespace {

int message_digit(std::uint64_t message, std::uint32_t length, std::uint32_t k) {
  return static_cast<int>((message >> (length - k)) & 1u);
}

std::vector<std::uint32_t> ambiguous_positions_of(std::span<const int> stage1_outputs) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t k = 1; k <= stage1_outputs.size(); ++k) {
    int y = stage1_outputs[k - 1];
    if (y < 0 || y > 3)
      throw ProtocolError("first-round output " + std::to_string(y) + " outside {0,1,2,3}");
    if (y == 1 || y == 2) out.push_back(k);
  }
  return out;
}

}  // namespace

MessageTriple::MessageTriple(std::uint32_t length_, std::array<std::uint64_t, 3> messages_)
    : length(length_), messages(messages_) {
  if (length < 1 || length > 62)
    throw std::invalid_argument("MessageTriple: length must be in [1, 62]");
  for (std::uint64_t msg : messages)
    if (msg >= (std::uint64_t{1} << length))
      throw std::invalid_argument("MessageTriple: message value out of range");
}

int MessageTriple::digit(int user, std::uint32_t k) const {
  if (user < 1 || user > 3) throw ContractError("MessageTriple::digit: user must be 1, 2 or 3");
  if (k < 1 || k > length) throw ContractError("MessageTriple::digit: position out of range");
  return message_digit(messages[user - 1], length, k);
}

int adder(int x1, int x2, int x3) { return x1 + x2 + x3; }

int encoder_step(int user, std::uint64_t message, std::uint32_t length, std::uint32_t slot,
                 std::span<const int> feedback) {
  if (user < 1 || user > 3) throw ContractError("encoder_step: user must be 1, 2 or 3");
  if (length < 1 || message >= (std::uint64_t{1} << length))
    throw ContractError("encoder_step: message does not fit the length");
  if (slot < 1) throw ProtocolError("encoder_step: slots are 1-based");
  if (feedback.size() != slot - 1)
    throw ProtocolError("encoder_step: feedback must hold exactly the previous outputs");

  if (slot <= length) return message_digit(message, length, slot);

  // Second round: the schedule is recomputed from feedback alone.
  std::vector<std::uint32_t> ambiguous = ambiguous_positions_of(feedback.subspan(0, length));
  for (std::size_t i = length; i < feedback.size(); ++i)
    if (feedback[i] < 0 || feedback[i] > 2)
      throw ProtocolError("encoder_step: second-round output outside {0,1,2}");
  std::uint32_t j = slot - length;
  if (j > ambiguous.size())
    throw ProtocolError("encoder_step: slot past the end of the session");
  std::uint32_t k = ambiguous[j - 1];
  switch (user) {
    case 1:
      return message_digit(message, length, k);
    case 2:
      return 1 - message_digit(message, length, k);
    default:
      return 0;
  }
}

SessionResult run_session(const MessageTriple& sent) {
  const std::uint32_t l = sent.length;
  ChannelTranscript transcript;
  transcript.length = l;
  transcript.messages = sent.messages;

  std::vector<int> feedback;
  auto transmit = [&](int stage, std::uint32_t k, std::uint32_t slot) {
    std::array<int, 3> inputs;
    for (int user = 1; user <= 3; ++user)
      inputs[user - 1] = encoder_step(user, sent.messages[user - 1], l, slot, feedback);
    int y = adder(inputs[0], inputs[1], inputs[2]);
    transcript.slots.push_back(ChannelSlot{stage, k, inputs, y});
    feedback.push_back(y);
    return y;
  };

  for (std::uint32_t k = 1; k <= l; ++k) transcript.stage1_outputs.push_back(transmit(1, k, k));
  transcript.ambiguous_positions = ambiguous_positions_of(transcript.stage1_outputs);
  for (std::uint32_t j = 1; j <= transcript.ambiguous_positions.size(); ++j)
    transcript.stage2_outputs.push_back(
        transmit(2, transcript.ambiguous_positions[j - 1], l + j));
  transcript.total = l + static_cast<std::uint32_t>(transcript.ambiguous_positions.size());

  MessageTriple decoded =
      decode_transcript(l, transcript.stage1_outputs, transcript.stage2_outputs);
  return SessionResult{std::move(transcript), decoded};
}

MessageTriple decode_transcript(std::uint32_t length, std::span<const int> stage1_outputs,
                                std::span<const int> stage2_outputs) {
  if (length < 1 || stage1_outputs.size() != length)
    throw ProtocolError("decode_transcript: need exactly one first-round output per position");
  std::vector<std::uint32_t> ambiguous = ambiguous_positions_of(stage1_outputs);
  if (stage2_outputs.size() != ambiguous.size())
    throw ProtocolError("decode_transcript: second-round output count does not match ambiguities");

  std::array<std::uint64_t, 3> values{0, 0, 0};
  std::size_t next_second = 0;
  for (std::uint32_t k = 1; k <= length; ++k) {
    int y = stage1_outputs[k - 1];
    std::array<int, 3> bits;
    if (y == 0 || y == 3) {
      bits = decode_row(y);
    } else {
      int y2 = stage2_outputs[next_second++];
      if (y2 == 3)
        throw ProtocolError("decode_transcript: second-round output 3 is impossible");
      if (y2 < 0 || y2 > 2)
        throw ProtocolError("decode_transcript: second-round output outside {0,1,2}");
      bits = decode_row(y, y2);
    }
    for (int user = 0; user < 3; ++user)
      values[user] = (values[user] << 1) | static_cast<unsigned>(bits[user]);
  }
  return MessageTriple(length, values);
}

Rational expected_transmissions(std::uint32_t length) {
  if (length < 1) throw std::invalid_argument("expected_transmissions: length must be >= 1");
  return Rational(7 * static_cast<long long>(length), 4);
}

ChannelVerifyReport verify_channel(std::uint32_t length) {
  if (length < 1 || length > 8)
    throw SizeError("verify_channel: supported for 1 <= length <= 8");
  const std::uint64_t space = std::uint64_t{1} << length;

  ChannelVerifyReport report;
  report.length = length;
  std::uint64_t sum_totals = 0;
  for (std::uint64_t m1 = 0; m1 < space; ++m1)
    for (std::uint64_t m2 = 0; m2 < space; ++m2)
      for (std::uint64_t m3 = 0; m3 < space; ++m3) {
        MessageTriple sent(length, {m1, m2, m3});
        SessionResult result = run_session(sent);
        ++report.sessions;
        if (!(result.decoded == sent)) ++report.decode_failures;
        for (const ChannelSlot& slot : result.transcript.slots)
          if (slot.output != adder(slot.inputs[0], slot.inputs[1], slot.inputs[2]))
            ++report.law_violations;
        // a position is ambiguous exactly when the three digits disagree
        std::uint32_t expected_ambiguous = 0;
        for (std::uint32_t k = 1; k <= length; ++k) {
          int s = sent.digit(1, k) + sent.digit(2, k) + sent.digit(3, k);
          if (s == 1 || s == 2) ++expected_ambiguous;
        }
        if (result.transcript.total != length + expected_ambiguous) ++report.decode_failures;
        sum_totals += result.transcript.total;
        ++report.distribution[result.transcript.total];
      }
  report.mean_transmissions = Rational(static_cast<long long>(sum_totals),
                                       static_cast<long long>(report.sessions));
  return report;
}

nlohmann::ordered_json to_json(const SessionResult& result) {
  using json = nlohmann::ordered_json;
  json slots = json::array();
  for (const ChannelSlot& slot : result.transcript.slots)
    slots.push_back(json{{"stage", slot.stage},
                         {"k", slot.k},
                         {"inputs", slot.inputs},
                         {"output", slot.output}});
  return json{{"l", result.transcript.length},
              {"messages", result.transcript.messages},
              {"slots", std::move(slots)},
              {"decoded", result.decoded.messages},
              {"total", result.transcript.total}};
}

nlohmann::ordered_json to_json(const ChannelVerifyReport& report) {
  using json = nlohmann::ordered_json;
  json distribution = json::array();
  for (const auto& [total, count] : report.distribution)
    distribution.push_back(json{{"total", total}, {"count", count}});
  return json{{"l", report.length},
              {"sessions", report.sessions},
              {"decode_failures", report.decode_failures},
              {"law_violations", report.law_violations},
              {"mean_transmissions", report.mean_transmissions.str()},
              {"mean_transmissions_decimal", report.mean_transmissions.to_double()},
              {"expected_transmissions", expected_transmissions(report.length).str()},
              {"distribution", std::move(distribution)}};
}

}  // namespace coinweigh
