#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <condition_variable>

#include "cdsim/bits.hpp"

namespace cdsim::wire {

enum class MessageType : std::uint8_t {
  Keys = 0x01,
  Images = 0x02,
  CtBundle = 0x03,
  Abort = 0x04,
  Cert = 0x05,
  SkReveal = 0x06,
};

struct Frame {
  MessageType type;
  Bytes payload;
};

// Framing: big-endian u32 length covering the type byte plus payload, then
// the type byte, then the payload.
Bytes encode_frame(const Frame& frame);
Frame decode_frame(const Bytes& data);

class Transport {
public:
  virtual ~Transport() = default;
  virtual void send(const Frame& frame) = 0;
  virtual Frame recv() = 0;
};

// Two endpoints over in-memory queues; blocking recv, safe across threads.
class ChannelEnd;
struct ChannelPair {
  std::unique_ptr<ChannelEnd> a;
  std::unique_ptr<ChannelEnd> b;
};
ChannelPair make_channel_pair();

class ChannelEnd final : public Transport {
public:
  void send(const Frame& frame) override;
  Frame recv() override;

private:
  friend ChannelPair make_channel_pair();
  struct Queue {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<Bytes> frames;
  };
  std::shared_ptr<Queue> outgoing_;
  std::shared_ptr<Queue> incoming_;
};

// Loopback TCP endpoints (127.0.0.1, ephemeral port).
class TcpTransport final : public Transport {
public:
  explicit TcpTransport(int fd) : fd_(fd) {}
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  void send(const Frame& frame) override;
  Frame recv() override;

private:
  int fd_;
};

struct TcpPair {
  std::unique_ptr<TcpTransport> a;
  std::unique_ptr<TcpTransport> b;
};
TcpPair make_loopback_pair();

// Ordered record of every frame crossing the wire, with a direction byte
// (0x00 sender-to-receiver, 0x01 receiver-to-sender) before each frame.
class TranscriptRecorder {
public:
  void record_to_receiver(const Frame& frame) { record(0x00, frame); }
  void record_to_sender(const Frame& frame) { record(0x01, frame); }
  const Bytes& bytes() const { return bytes_; }

private:
  void record(std::uint8_t direction, const Frame& frame);
  Bytes bytes_;
};

// Transport wrapper that records everything it sends and receives.
class RecordingTransport final : public Transport {
public:
  RecordingTransport(Transport& inner, TranscriptRecorder& recorder, bool is_sender_side)
      : inner_(inner), recorder_(recorder), sender_side_(is_sender_side) {}

  void send(const Frame& frame) override;
  Frame recv() override;

private:
  Transport& inner_;
  TranscriptRecorder& recorder_;
  bool sender_side_;
};

}  // namespace cdsim::wire
