#include "cdsim/cc_pke_cd.hpp"

#include <stdexcept>
#include <thread>

#include "cdsim/bytes.hpp"
#include "cdsim/primitives.hpp"

namespace cdsim::cccd {

namespace {

constexpr const char* kOracleTag = "CD-H";
constexpr const char* kFreshOracleTag = "CD-H1";

BitString truncate_digest(const Bytes& digest, std::size_t bits) {
  return unpack_bits(digest, bits);
}

std::uint32_t image_space(const ntcf::ClawFreeKey& key) {
  return std::uint32_t{1} << key.image_bits();
}

}  // namespace

void Params::validate() const {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (4 * n > 64) throw std::invalid_argument("instance count capped at 64");
  if (preimage_bits < ntcf::kMinPreimageBits || preimage_bits > ntcf::kMaxPreimageBits)
    throw std::invalid_argument("preimage bit length out of range [2, 12]");
  if (lambda_bits != 128 && lambda_bits != 192)
    throw std::invalid_argument("lambda must be 128 or 192");
  if (message_bits < 1 || message_bits > 512)
    throw std::invalid_argument("message bit length out of range [1, 512]");
}

KeyPair cc_keygen(const Params& params, Rng& rng) {
  params.validate();
  auto nce = rnce::rnce_keygen(static_cast<std::size_t>(params.instance_count()),
                               params.base_ops(), rng);
  auto ow = primitives::pke_keygen(params.base, params.security_level, rng);
  return {params,
          std::move(nce.enc_key),
          std::move(nce.dec_key),
          std::move(nce.aux),
          std::move(ow.public_key),
          std::move(ow.secret_key)};
}

BitString encode_subset_mask(const std::vector<int>& subset, int universe) {
  BitString mask(static_cast<std::size_t>(universe), 0);
  for (int i : subset) {
    if (i < 0 || i >= universe) throw std::invalid_argument("subset element out of range");
    mask[static_cast<std::size_t>(i)] = 1;
  }
  return mask;
}

std::vector<int> decode_subset_mask(const BitString& mask) {
  std::vector<int> subset;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) subset.push_back(static_cast<int>(i));
  return subset;
}

// --- Message codecs ----------------------------------------------------------

Bytes encode_claw_key(const ntcf::ClawFreeKey& key) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(key.mode));
  w.u8(static_cast<std::uint8_t>(key.preimage_bits));
  w.raw(Bytes(key.key_id.begin(), key.key_id.end()));
  if (key.label_map.is_identity()) {
    w.u8(0);
  } else {
    w.u8(1);
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << key.preimage_bits); ++x)
      w.u16(static_cast<std::uint16_t>(key.label_map(x)));
  }
  const int tables = key.mode == ntcf::ClawMode::FType ? 2 : 1;
  for (int t = 0; t < tables; ++t)
    for (std::uint32_t v : key.forward[t]) w.u16(static_cast<std::uint16_t>(v));
  return w.take();
}

namespace {

std::vector<std::uint32_t> read_permutation(ByteReader& r, std::size_t size) {
  std::vector<std::uint32_t> table(size);
  std::vector<bool> seen(size, false);
  for (std::size_t i = 0; i < size; ++i) {
    table[i] = r.u16();
    if (table[i] >= size || seen[table[i]]) throw DecodeError("table is not a permutation");
    seen[table[i]] = true;
  }
  return table;
}

}  // namespace

ntcf::ClawFreeKey decode_claw_key(const Bytes& data) {
  ByteReader r(data);
  ntcf::ClawFreeKey key;
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw DecodeError("bad claw key mode");
  key.mode = static_cast<ntcf::ClawMode>(mode);
  key.preimage_bits = r.u8();
  if (key.preimage_bits < ntcf::kMinPreimageBits || key.preimage_bits > ntcf::kMaxPreimageBits)
    throw DecodeError("bad preimage bit length");
  const Bytes id = r.raw(8);
  std::copy(id.begin(), id.end(), key.key_id.begin());
  const std::uint8_t label_flag = r.u8();
  const std::size_t domain = std::size_t{1} << key.preimage_bits;
  if (label_flag == 1) {
    std::vector<std::uint32_t> table(domain);
    for (auto& v : table) v = r.u16();
    key.label_map = ntcf::LabelMap::from_table(key.preimage_bits, std::move(table));
  } else if (label_flag == 0) {
    key.label_map = ntcf::LabelMap::identity(key.preimage_bits);
  } else {
    throw DecodeError("bad label map flag");
  }
  if (key.mode == ntcf::ClawMode::FType) {
    key.forward[0] = read_permutation(r, domain);
    key.forward[1] = read_permutation(r, domain);
  } else {
    key.forward[0] = read_permutation(r, domain * 2);
  }
  r.expect_end();
  return key;
}

Bytes encode_trapdoor(const ntcf::ClawFreeTrapdoor& td) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(td.mode));
  w.u8(static_cast<std::uint8_t>(td.preimage_bits));
  w.raw(Bytes(td.key_id.begin(), td.key_id.end()));
  if (td.label_map.is_identity()) {
    w.u8(0);
  } else {
    w.u8(1);
    for (std::uint32_t x = 0; x < (std::uint32_t{1} << td.preimage_bits); ++x)
      w.u16(static_cast<std::uint16_t>(td.label_map(x)));
  }
  const int tables = td.mode == ntcf::ClawMode::FType ? 2 : 1;
  for (int t = 0; t < tables; ++t) {
    for (std::uint32_t v : td.forward[t]) w.u16(static_cast<std::uint16_t>(v));
    for (std::uint32_t v : td.inverse[t]) w.u16(static_cast<std::uint16_t>(v));
  }
  return w.take();
}

ntcf::ClawFreeTrapdoor decode_trapdoor(const Bytes& data) {
  ByteReader r(data);
  ntcf::ClawFreeTrapdoor td;
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw DecodeError("bad trapdoor mode");
  td.mode = static_cast<ntcf::ClawMode>(mode);
  td.preimage_bits = r.u8();
  if (td.preimage_bits < ntcf::kMinPreimageBits || td.preimage_bits > ntcf::kMaxPreimageBits)
    throw DecodeError("bad preimage bit length");
  const Bytes id = r.raw(8);
  std::copy(id.begin(), id.end(), td.key_id.begin());
  const std::uint8_t label_flag = r.u8();
  const std::size_t domain = std::size_t{1} << td.preimage_bits;
  if (label_flag == 1) {
    std::vector<std::uint32_t> table(domain);
    for (auto& v : table) v = r.u16();
    td.label_map = ntcf::LabelMap::from_table(td.preimage_bits, std::move(table));
  } else if (label_flag == 0) {
    td.label_map = ntcf::LabelMap::identity(td.preimage_bits);
  } else {
    throw DecodeError("bad label map flag");
  }
  const int tables = td.mode == ntcf::ClawMode::FType ? 2 : 1;
  const std::size_t size = td.mode == ntcf::ClawMode::FType ? domain : domain * 2;
  for (int t = 0; t < tables; ++t) {
    td.forward[t] = read_permutation(r, size);
    td.inverse[t] = read_permutation(r, size);
  }
  r.expect_end();
  return td;
}

Bytes encode_keys_message(const KeysMessage& msg) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(msg.keys.size()));
  for (const auto& key : msg.keys) w.blob(encode_claw_key(key));
  return w.take();
}

KeysMessage decode_keys_message(const Bytes& data) {
  ByteReader r(data);
  KeysMessage msg;
  const std::uint32_t count = r.u32();
  msg.keys.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) msg.keys.push_back(decode_claw_key(r.blob()));
  r.expect_end();
  return msg;
}

Bytes encode_images_message(const ImagesMessage& msg) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(msg.images.size()));
  for (std::uint32_t y : msg.images) w.u32(y);
  return w.take();
}

ImagesMessage decode_images_message(const Bytes& data) {
  ByteReader r(data);
  ImagesMessage msg;
  const std::uint32_t count = r.u32();
  msg.images.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) msg.images.push_back(r.u32());
  r.expect_end();
  return msg;
}

Bytes encode_ct_bundle(const CtBundleMessage& msg) {
  ByteWriter w;
  w.blob(rnce::encode_ciphertext(msg.nce_ct));
  w.blob(msg.ow_ct);
  w.u32(static_cast<std::uint32_t>(msg.ct_msg.size()));
  w.blob(pack_bits(msg.ct_msg));
  return w.take();
}

CtBundleMessage decode_ct_bundle(const Bytes& data) {
  ByteReader r(data);
  CtBundleMessage msg;
  msg.nce_ct = rnce::decode_ciphertext(r.blob());
  msg.ow_ct = r.blob();
  const std::uint32_t bits = r.u32();
  msg.ct_msg = unpack_bits(r.blob(), bits);
  r.expect_end();
  return msg;
}

Bytes encode_cert(const CcCert& cert) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(cert.entries.size()));
  for (const auto& entry : cert.entries) {
    w.u8(entry.e);
    w.u8(static_cast<std::uint8_t>(entry.d.size()));
    w.blob(pack_bits(entry.d));
  }
  return w.take();
}

CcCert decode_cert(const Bytes& data) {
  ByteReader r(data);
  CcCert cert;
  const std::uint32_t count = r.u32();
  cert.entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    CcCert::Entry entry;
    entry.e = r.u8();
    if (entry.e > 1) throw DecodeError("bad certificate bit");
    const std::uint8_t width = r.u8();
    entry.d = unpack_bits(r.blob(), width);
    cert.entries.push_back(std::move(entry));
  }
  r.expect_end();
  return cert;
}

Bytes encode_sk_reveal(const SkRevealMessage& msg) {
  ByteWriter w;
  w.u8(msg.revealed ? 1 : 0);
  if (msg.revealed) {
    w.blob(msg.nce_sk);
    w.blob(msg.ow_sk);
  }
  return w.take();
}

SkRevealMessage decode_sk_reveal(const Bytes& data) {
  ByteReader r(data);
  SkRevealMessage msg;
  const std::uint8_t flag = r.u8();
  if (flag > 1) throw DecodeError("bad reveal flag");
  msg.revealed = flag == 1;
  if (msg.revealed) {
    msg.nce_sk = r.blob();
    msg.ow_sk = r.blob();
  }
  r.expect_end();
  return msg;
}

// --- Sender ----------------------------------------------------------------

Sender::Sender(const PublicKeyView& pk, BitString message, Rng& rng)
    : params_(pk.params), nce_pk_(*pk.nce_pk), ow_pk_(*pk.ow_pk), message_(std::move(message)),
      rng_(&rng) {
  params_.validate();
  if (message_.size() != params_.message_bits)
    throw std::invalid_argument("message length does not match the parameters");
}

KeysMessage Sender::init() {
  if (phase_ != SenderPhase::Init) throw std::logic_error("sender already initialized");
  const auto total = static_cast<std::uint32_t>(params_.instance_count());
  const auto subset = rng_->subset(total, static_cast<std::uint32_t>(params_.subset_size()));
  subset_.assign(subset.begin(), subset.end());
  const BitString mask = encode_subset_mask(subset_, params_.instance_count());

  KeysMessage msg;
  msg.keys.reserve(total);
  trapdoors_.reserve(total);
  for (std::uint32_t i = 0; i < total; ++i) {
    auto [key, td] = mask[i] ? ntcf::gen_g(params_.preimage_bits, *rng_)
                             : ntcf::gen_f(params_.preimage_bits, *rng_);
    msg.keys.push_back(key);
    trapdoors_.push_back(std::move(td));
  }
  keys_ = msg.keys;
  phase_ = SenderPhase::AwaitImages;
  return msg;
}

std::variant<CtBundleMessage, AbortMessage> Sender::finalize(const ImagesMessage& images) {
  if (phase_ != SenderPhase::AwaitImages)
    throw std::logic_error("sender is not awaiting images");
  const auto total = static_cast<std::size_t>(params_.instance_count());
  if (images.images.size() != total)
    throw std::invalid_argument("image count does not match the instance count");

  const BitString mask = encode_subset_mask(subset_, params_.instance_count());

  // Strict format validation: every image must lie in its instance's range.
  bool ok = true;
  for (std::size_t i = 0; i < total && ok; ++i)
    if (images.images[i] >= image_space(keys_[i])) ok = false;

  std::vector<std::pair<Bit, std::uint32_t>> preimages;  // ascending over S
  if (ok) {
    for (int i : subset_) {
      const auto y = images.images[static_cast<std::size_t>(i)];
      const auto [b, x] = ntcf::invert_g(trapdoors_[static_cast<std::size_t>(i)], y);
      if (!ntcf::chk(keys_[static_cast<std::size_t>(i)], b, x, y)) {
        ok = false;
        break;
      }
      preimages.emplace_back(b, x);
    }
  }
  if (!ok) {
    phase_ = SenderPhase::Aborted;
    return AbortMessage{};
  }

  session_key_ = rng_->bits(static_cast<std::size_t>(params_.lambda_bits));
  const Bytes z = pack_z(session_key_, preimages, params_.preimage_bits);
  z_encoding_ = z;

  CtBundleMessage bundle;
  bundle.nce_ct = rnce::rnce_enc(nce_pk_, mask, params_.base_ops(), *rng_);
  bundle.ow_ct = primitives::pke_enc(ow_pk_, pack_bits(session_key_), *rng_);
  bundle.ct_msg = xor_bits(message_, oracle_pad(z, params_.message_bits));

  vk_.params = params_;
  vk_.entries.clear();
  for (int i = 0; i < params_.instance_count(); ++i) {
    if (mask[static_cast<std::size_t>(i)]) continue;
    vk_.entries.push_back({i, trapdoors_[static_cast<std::size_t>(i)],
                           images.images[static_cast<std::size_t>(i)]});
  }
  phase_ = SenderPhase::Done;
  return bundle;
}

const CcVerificationKey& Sender::verification_key() const {
  if (phase_ != SenderPhase::Done)
    throw std::logic_error("verification key is defined only after a successful finalize");
  return vk_;
}

// --- Receiver ----------------------------------------------------------------

ImagesMessage Receiver::respond(const KeysMessage& keys) {
  if (phase_ != ReceiverPhase::AwaitKeys) throw std::logic_error("receiver already responded");
  if (keys.keys.empty() || keys.keys.size() % 4 != 0)
    throw std::invalid_argument("key count must be a positive multiple of 4");
  const int w = keys.keys.front().preimage_bits;
  ImagesMessage images;
  images.images.reserve(keys.keys.size());
  instances_.reserve(keys.keys.size());
  for (const auto& key : keys.keys) {
    if (key.preimage_bits != w)
      throw std::invalid_argument("instances must share one preimage bit length");
    auto sample = qsim::prepare_range_superposition(key, *rng_);
    images.images.push_back(sample.image);
    instances_.push_back({sample.instance, key.label_map, false});
  }
  phase_ = ReceiverPhase::AwaitBundle;
  return images;
}

CcCiphertext Receiver::take_ciphertext(const CtBundleMessage& bundle) {
  if (phase_ != ReceiverPhase::AwaitBundle)
    throw std::logic_error("receiver is not awaiting the ciphertext bundle");
  CcCiphertext ct;
  ct.params.n = static_cast<int>(instances_.size() / 4);
  ct.params.preimage_bits = instances_.front().state.preimage_bits;
  ct.params.message_bits = bundle.ct_msg.size();
  ct.instances = std::move(instances_);
  ct.nce_ct = bundle.nce_ct;
  ct.ow_ct = bundle.ow_ct;
  ct.ct_msg = bundle.ct_msg;
  phase_ = ReceiverPhase::Done;
  return ct;
}

// --- Local algorithms ----------------------------------------------------------

BitString oracle_pad(const Bytes& z_packed, std::size_t message_bits) {
  const primitives::RandomOracle oracle{kOracleTag, (message_bits + 7) / 8};
  return truncate_digest(primitives::ro_hash(oracle, z_packed), message_bits);
}

Bytes pack_z(const BitString& session_key,
             const std::vector<std::pair<Bit, std::uint32_t>>& preimages, int preimage_bits) {
  BitWriter w;
  w.append(session_key);
  for (const auto& [b, x] : preimages) {
    w.append_bit(b);
    w.append_label(x, static_cast<std::size_t>(preimage_bits));
  }
  return w.packed();
}

std::optional<BitString> cc_dec(const SecretKeyView& sk, CcCiphertext& ct, Rng& rng) {
  // Base decryption dispatches on the self-describing key bytes, so the
  // scheme id passed here is irrelevant.
  const auto base = rnce::pke_base(primitives::PkeSchemeId::TestStub);
  const auto mask = rnce::rnce_dec(sk.nce_sk, ct.nce_ct, base);
  if (!mask) return std::nullopt;
  const auto key_bytes = primitives::pke_dec(sk.ow_sk, ct.ow_ct);
  if (!key_bytes) return std::nullopt;

  std::vector<std::pair<Bit, std::uint32_t>> preimages;
  for (int i : decode_subset_mask(*mask)) {
    auto& holder = ct.instances.at(static_cast<std::size_t>(i));
    if (holder.consumed) throw std::logic_error("instance register already consumed");
    holder.consumed = true;
    const auto& state = holder.state;
    if (state.mode == ntcf::ClawMode::GType) {
      preimages.emplace_back(state.branch, state.preimage);
    } else {
      // Computational measurement of a claw superposition: either branch,
      // each with probability 1/2.
      const Bit b = rng.bit();
      preimages.emplace_back(b, b ? state.preimage1 : state.preimage0);
    }
  }
  const BitString key_bits = unpack_bits(*key_bytes, key_bytes->size() * 8);
  const Bytes z = pack_z(key_bits, preimages, ct.params.preimage_bits);
  return xor_bits(ct.ct_msg, oracle_pad(z, ct.ct_msg.size()));
}

CcCert cc_del(CcCiphertext& ct, Rng& rng) {
  CcCert cert;
  cert.entries.reserve(ct.instances.size());
  for (auto& holder : ct.instances) {
    if (holder.consumed) throw std::logic_error("instance register already consumed");
    holder.consumed = true;
    auto [e, d] = qsim::analytic_hadamard_sample(holder.state, holder.label_map, rng);
    cert.entries.push_back({e, std::move(d)});
  }
  return cert;
}

bool cc_vrfy(const CcVerificationKey& vk, const CcCert& cert) {
  const auto total = static_cast<std::size_t>(vk.params.instance_count());
  if (cert.entries.size() != total)
    throw std::invalid_argument("certificate must have one entry per instance");
  if (vk.entries.size() != static_cast<std::size_t>(vk.params.subset_size()))
    throw std::invalid_argument("verification key entry count mismatch");

  const ntcf::HardcoreSetSpec hardcore{vk.params.preimage_bits};
  for (const auto& entry : vk.entries) {
    const auto& outcome = cert.entries.at(static_cast<std::size_t>(entry.index));
    if (static_cast<int>(outcome.d.size()) != vk.params.preimage_bits) return false;
    const std::uint32_t x0 = ntcf::invert_f(entry.trapdoor, 0, entry.image);
    const std::uint32_t x1 = ntcf::invert_f(entry.trapdoor, 1, entry.image);
    if (!ntcf::hardcore_membership(hardcore, outcome.d)) return false;
    const auto& label = entry.trapdoor.label_map;
    const std::uint32_t delta = label(x0) ^ label(x1);
    if (outcome.e != dot(outcome.d, label_to_bits(delta, outcome.d.size()))) return false;
  }
  return true;
}

// --- Interactive drivers --------------------------------------------------------

SenderOutcome run_sender(wire::Transport& transport, const PublicKeyView& pk,
                         const BitString& message, Rng& rng) {
  Sender sender(pk, message, rng);
  transport.send({wire::MessageType::Keys, encode_keys_message(sender.init())});
  const wire::Frame reply = transport.recv();
  if (reply.type != wire::MessageType::Images)
    throw std::runtime_error("protocol error: expected images");
  auto outcome = sender.finalize(decode_images_message(reply.payload));
  if (std::holds_alternative<AbortMessage>(outcome)) {
    transport.send({wire::MessageType::Abort, {}});
    return {true, std::nullopt};
  }
  transport.send(
      {wire::MessageType::CtBundle, encode_ct_bundle(std::get<CtBundleMessage>(outcome))});
  return {false, sender.verification_key()};
}

ReceiverOutcome run_receiver(wire::Transport& transport, Rng& rng) {
  Receiver receiver(rng);
  const wire::Frame keys = transport.recv();
  if (keys.type != wire::MessageType::Keys)
    throw std::runtime_error("protocol error: expected keys");
  transport.send({wire::MessageType::Images,
                  encode_images_message(receiver.respond(decode_keys_message(keys.payload)))});
  const wire::Frame reply = transport.recv();
  if (reply.type == wire::MessageType::Abort) {
    receiver.abort();
    return {true, std::nullopt};
  }
  if (reply.type != wire::MessageType::CtBundle)
    throw std::runtime_error("protocol error: expected ciphertext bundle");
  return {false, receiver.take_ciphertext(decode_ct_bundle(reply.payload))};
}

InteractiveResult run_interactive_encryption(const PublicKeyView& pk, const BitString& message,
                                             std::uint64_t sender_seed,
                                             std::uint64_t receiver_seed, TransportKind kind) {
  std::unique_ptr<wire::Transport> sender_end;
  std::unique_ptr<wire::Transport> receiver_end;
  if (kind == TransportKind::InProcess) {
    auto pair = wire::make_channel_pair();
    sender_end = std::move(pair.a);
    receiver_end = std::move(pair.b);
  } else {
    auto pair = wire::make_loopback_pair();
    sender_end = std::move(pair.a);
    receiver_end = std::move(pair.b);
  }

  wire::TranscriptRecorder recorder;
  wire::RecordingTransport recording_sender(*sender_end, recorder, true);

  ReceiverOutcome receiver_outcome;
  std::exception_ptr receiver_error;
  std::thread receiver_thread([&] {
    try {
      Rng receiver_rng(receiver_seed);
      receiver_outcome = run_receiver(*receiver_end, receiver_rng);
    } catch (...) {
      receiver_error = std::current_exception();
    }
  });

  InteractiveResult result;
  try {
    Rng sender_rng(sender_seed);
    SenderOutcome sender_outcome = run_sender(recording_sender, pk, message, sender_rng);
    receiver_thread.join();
    if (receiver_error) std::rethrow_exception(receiver_error);
    result.aborted = sender_outcome.aborted;
    result.vk = std::move(sender_outcome.vk);
    result.ct = std::move(receiver_outcome.ct);
    result.transcript = recorder.bytes();
  } catch (...) {
    if (receiver_thread.joinable()) receiver_thread.join();
    throw;
  }
  return result;
}

// --- Experiment harnesses ---------------------------------------------------------

pkecd::CdExperimentResult run_cc_experiment(const Params& params, CcStrategy& strategy, Bit b,
                                            Rng& rng, CcHybridMode mode) {
  params.validate();
  KeyPair keys = cc_keygen(params, rng);
  const auto base = params.base_ops();

  pkecd::CdExperimentResult result;
  result.transcript.push_back({"keygen", "pk sent"});

  // The session key is fixed up front so the reprogrammed oracle is
  // consistent across the whole game.
  const BitString session_key = rng.bits(static_cast<std::size_t>(params.lambda_bits));
  const BitString fresh_pad = rng.bits(params.message_bits);

  struct OracleState {
    bool revealed = false;
    std::optional<Bytes> z;
  };
  auto oracle_state = std::make_shared<OracleState>();

  const BitString key_prefix = session_key;
  auto oracle = [mode, oracle_state, key_prefix, fresh_pad](const Bytes& z_packed,
                                                            std::size_t out_bits) -> BitString {
    const std::size_t prefix_bits = key_prefix.size();
    const bool has_key_prefix = z_packed.size() * 8 >= prefix_bits &&
                                unpack_bits(z_packed, prefix_bits) == key_prefix;
    if (mode >= CcHybridMode::FreshKeyPrefix && !oracle_state->revealed && has_key_prefix) {
      const primitives::RandomOracle fresh{kFreshOracleTag, (out_bits + 7) / 8};
      return truncate_digest(primitives::ro_hash(fresh, z_packed), out_bits);
    }
    if (mode >= CcHybridMode::FreshPadAfterReveal && oracle_state->revealed &&
        oracle_state->z && z_packed == *oracle_state->z) {
      BitString pad = fresh_pad;
      pad.resize(out_bits, 0);
      return pad;
    }
    return oracle_pad(z_packed, out_bits);
  };
  const CcGameContext ctx{oracle};

  const PublicKeyView pk{params, &keys.nce_pk, &keys.ow_pk};
  auto [m0, m1] = strategy.choose_messages(pk, ctx, rng);
  if (m0.size() != params.message_bits || m1.size() != params.message_bits)
    throw std::invalid_argument("strategy produced messages of the wrong length");
  result.transcript.push_back({"messages", format_bits(m0) + "/" + format_bits(m1)});

  // Interactive encryption with the adversary as receiver.
  const auto total = static_cast<std::uint32_t>(params.instance_count());
  const auto subset_vec =
      rng.subset(total, static_cast<std::uint32_t>(params.subset_size()));
  const std::vector<int> subset(subset_vec.begin(), subset_vec.end());
  const BitString mask = encode_subset_mask(subset, params.instance_count());

  KeysMessage keys_msg;
  std::vector<ntcf::ClawFreeTrapdoor> trapdoors;
  keys_msg.keys.reserve(total);
  trapdoors.reserve(total);
  for (std::uint32_t i = 0; i < total; ++i) {
    auto [key, td] = mask[i] ? ntcf::gen_g(params.preimage_bits, rng)
                             : ntcf::gen_f(params.preimage_bits, rng);
    keys_msg.keys.push_back(std::move(key));
    trapdoors.push_back(std::move(td));
  }
  result.transcript.push_back({"keys", "sent"});

  ImagesMessage images = strategy.respond_keys(keys_msg, ctx, rng);
  if (images.images.size() != total)
    throw std::invalid_argument("strategy produced the wrong number of images");
  result.transcript.push_back({"images", "received"});

  bool image_check_ok = true;
  for (std::uint32_t i = 0; i < total && image_check_ok; ++i)
    if (images.images[i] >= image_space(keys_msg.keys[i])) image_check_ok = false;
  std::vector<std::pair<Bit, std::uint32_t>> subset_preimages;
  if (image_check_ok) {
    for (int i : subset) {
      const auto y = images.images[static_cast<std::size_t>(i)];
      const auto [pb, px] = ntcf::invert_g(trapdoors[static_cast<std::size_t>(i)], y);
      if (!ntcf::chk(keys_msg.keys[static_cast<std::size_t>(i)], pb, px, y)) {
        image_check_ok = false;
        break;
      }
      subset_preimages.emplace_back(pb, px);
    }
  }

  std::variant<CtBundleMessage, AbortMessage> bundle_or_abort = AbortMessage{};
  if (image_check_ok) {
    const Bytes z = pack_z(session_key, subset_preimages, params.preimage_bits);
    oracle_state->z = z;
    CtBundleMessage bundle;
    bundle.nce_ct = mode >= CcHybridMode::FakeNce
                        ? rnce::rnce_fake(keys.nce_pk, keys.nce_sk, keys.nce_aux, base, rng)
                        : rnce::rnce_enc(keys.nce_pk, mask, base, rng);
    bundle.ow_ct = primitives::pke_enc(keys.ow_pk, pack_bits(session_key), rng);
    bundle.ct_msg = xor_bits(b ? m1 : m0, oracle_pad(z, params.message_bits));
    bundle_or_abort = std::move(bundle);
    result.transcript.push_back({"bundle", "sent"});
  } else {
    result.transcript.push_back({"bundle", "abort"});
  }

  CcCert cert = strategy.produce_cert(bundle_or_abort, ctx, rng);
  result.transcript.push_back({"certificate", "received"});

  if (image_check_ok && cert.entries.size() == static_cast<std::size_t>(total)) {
    CcVerificationKey vk;
    vk.params = params;
    for (int i = 0; i < params.instance_count(); ++i) {
      if (mask[static_cast<std::size_t>(i)]) continue;
      vk.entries.push_back(
          {i, trapdoors[static_cast<std::size_t>(i)], images.images[static_cast<std::size_t>(i)]});
    }
    result.cert_accepted = cc_vrfy(vk, cert);
  } else {
    result.cert_accepted = false;
  }
  result.transcript.push_back({"verify", result.cert_accepted ? "accept" : "reject"});

  if (result.cert_accepted) {
    oracle_state->revealed = true;
    SecretKeyView sk{keys.nce_sk, keys.ow_sk};
    if (mode >= CcHybridMode::FakeNce) {
      sk.nce_sk = rnce::rnce_reveal(keys.nce_pk, keys.nce_sk, keys.nce_aux,
                                    std::get<CtBundleMessage>(bundle_or_abort).nce_ct, mask);
    }
    result.bit_guess = strategy.guess(std::move(sk), ctx, rng);
  } else {
    result.bit_guess = strategy.guess(std::nullopt, ctx, rng);
  }
  result.transcript.push_back({"guess", result.bit_guess ? "1" : "0"});
  return result;
}

CutChooseTrace run_cut_and_choose_experiment(int n, int preimage_bits,
                                             CutChooseStrategy& strategy, Rng& rng) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  const int total = 4 * n;

  const auto subset_vec = rng.subset(static_cast<std::uint32_t>(total),
                                     static_cast<std::uint32_t>(2 * n));
  const std::vector<int> subset(subset_vec.begin(), subset_vec.end());
  const BitString mask = encode_subset_mask(subset, total);

  std::vector<ntcf::ClawFreeKey> keys;
  std::vector<ntcf::ClawFreeTrapdoor> trapdoors;
  keys.reserve(total);
  trapdoors.reserve(total);
  for (int i = 0; i < total; ++i) {
    auto [key, td] = mask[static_cast<std::size_t>(i)] ? ntcf::gen_g(preimage_bits, rng)
                                                       : ntcf::gen_f(preimage_bits, rng);
    keys.push_back(std::move(key));
    trapdoors.push_back(std::move(td));
  }

  const CutChooseResponse response = strategy.respond_keys(keys, rng);
  if (response.images.size() != static_cast<std::size_t>(total) ||
      response.certificates.size() != static_cast<std::size_t>(total))
    throw std::invalid_argument("strategy response has the wrong arity");
  for (int i = 0; i < total; ++i) {
    if (response.images[static_cast<std::size_t>(i)] >=
        image_space(keys[static_cast<std::size_t>(i)]))
      throw std::invalid_argument("strategy produced an out-of-range image");
    if (static_cast<int>(response.certificates[static_cast<std::size_t>(i)].d.size()) !=
        preimage_bits)
      throw std::invalid_argument("strategy produced a malformed certificate entry");
  }

  CutChooseTrace trace;
  const ntcf::HardcoreSetSpec hardcore{preimage_bits};
  trace.certificate_check_passed = true;
  for (int i = 0; i < total; ++i) {
    if (mask[static_cast<std::size_t>(i)]) continue;  // only the complement is checked
    const auto& td = trapdoors[static_cast<std::size_t>(i)];
    const auto y = response.images[static_cast<std::size_t>(i)];
    const std::uint32_t x0 = ntcf::invert_f(td, 0, y);
    const std::uint32_t x1 = ntcf::invert_f(td, 1, y);
    const auto& entry = response.certificates[static_cast<std::size_t>(i)];
    const std::uint32_t delta = td.label_map(x0) ^ td.label_map(x1);
    if (!ntcf::hardcore_membership(hardcore, entry.d) ||
        entry.e != dot(entry.d, label_to_bits(delta, entry.d.size()))) {
      trace.certificate_check_passed = false;
      break;
    }
  }
  if (!trace.certificate_check_passed) return trace;

  const auto preimages = strategy.reveal_preimages(subset, rng);
  if (preimages.size() != subset.size())
    throw std::invalid_argument("strategy revealed the wrong number of preimages");
  trace.preimage_check_passed = true;
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const auto i = static_cast<std::size_t>(subset[j]);
    const auto [pb, px] = preimages[j];
    if (!ntcf::chk(keys[i], pb, px, response.images[i])) {
      trace.preimage_check_passed = false;
      break;
    }
  }
  trace.won = trace.certificate_check_passed && trace.preimage_check_passed;
  return trace;
}

}  // namespace cdsim::cccd
