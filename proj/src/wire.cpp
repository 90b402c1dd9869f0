#include "cdsim/wire.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>

#include "cdsim/bytes.hpp"

namespace cdsim::wire {

namespace {

bool valid_type(std::uint8_t t) { return t >= 0x01 && t <= 0x06; }

}  // namespace

Bytes encode_frame(const Frame& frame) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(1 + frame.payload.size()));
  w.u8(static_cast<std::uint8_t>(frame.type));
  w.raw(frame.payload);
  return w.take();
}

Frame decode_frame(const Bytes& data) {
  ByteReader r(data);
  const std::uint32_t length = r.u32();
  if (length < 1) throw DecodeError("frame length must cover the type byte");
  const std::uint8_t type = r.u8();
  if (!valid_type(type)) throw DecodeError("unknown message type");
  Frame frame{static_cast<MessageType>(type), r.raw(length - 1)};
  r.expect_end();
  return frame;
}

ChannelPair make_channel_pair() {
  auto q_ab = std::make_shared<ChannelEnd::Queue>();
  auto q_ba = std::make_shared<ChannelEnd::Queue>();
  auto a = std::make_unique<ChannelEnd>();
  auto b = std::make_unique<ChannelEnd>();
  a->outgoing_ = q_ab;
  a->incoming_ = q_ba;
  b->outgoing_ = q_ba;
  b->incoming_ = q_ab;
  return {std::move(a), std::move(b)};
}

void ChannelEnd::send(const Frame& frame) {
  {
    std::lock_guard lock(outgoing_->mutex);
    outgoing_->frames.push_back(encode_frame(frame));
  }
  outgoing_->ready.notify_one();
}

Frame ChannelEnd::recv() {
  std::unique_lock lock(incoming_->mutex);
  incoming_->ready.wait(lock, [&] { return !incoming_->frames.empty(); });
  Bytes data = std::move(incoming_->frames.front());
  incoming_->frames.pop_front();
  return decode_frame(data);
}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

namespace {

void send_all(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t sent = ::send(fd, data, len, 0);
    if (sent <= 0) throw std::runtime_error("socket send failed");
    data += sent;
    len -= static_cast<std::size_t>(sent);
  }
}

void recv_all(int fd, std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t got = ::recv(fd, data, len, 0);
    if (got <= 0) throw std::runtime_error("socket recv failed");
    data += got;
    len -= static_cast<std::size_t>(got);
  }
}

}  // namespace

void TcpTransport::send(const Frame& frame) {
  const Bytes data = encode_frame(frame);
  send_all(fd_, data.data(), data.size());
}

Frame TcpTransport::recv() {
  std::uint8_t header[4];
  recv_all(fd_, header, 4);
  const std::uint32_t length = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                               (std::uint32_t{header[2]} << 8) | header[3];
  Bytes data(4 + length);
  std::memcpy(data.data(), header, 4);
  recv_all(fd_, data.data() + 4, length);
  return decode_frame(data);
}

TcpPair make_loopback_pair() {
  const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw std::runtime_error("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listener, 1) != 0) {
    ::close(listener);
    throw std::runtime_error("bind/listen failed");
  }
  socklen_t addr_len = sizeof addr;
  if (::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &addr_len) != 0) {
    ::close(listener);
    throw std::runtime_error("getsockname failed");
  }
  const int client = ::socket(AF_INET, SOCK_STREAM, 0);
  if (client < 0) {
    ::close(listener);
    throw std::runtime_error("socket() failed");
  }
  if (::connect(client, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(listener);
    ::close(client);
    throw std::runtime_error("connect failed");
  }
  const int server = ::accept(listener, nullptr, nullptr);
  ::close(listener);
  if (server < 0) {
    ::close(client);
    throw std::runtime_error("accept failed");
  }
  return {std::make_unique<TcpTransport>(client), std::make_unique<TcpTransport>(server)};
}

void TranscriptRecorder::record(std::uint8_t direction, const Frame& frame) {
  bytes_.push_back(direction);
  const Bytes encoded = encode_frame(frame);
  bytes_.insert(bytes_.end(), encoded.begin(), encoded.end());
}

void RecordingTransport::send(const Frame& frame) {
  if (sender_side_)
    recorder_.record_to_receiver(frame);
  else
    recorder_.record_to_sender(frame);
  inner_.send(frame);
}

Frame RecordingTransport::recv() {
  Frame frame = inner_.recv();
  if (sender_side_)
    recorder_.record_to_sender(frame);
  else
    recorder_.record_to_receiver(frame);
  return frame;
}

}  // namespace cdsim::wire
