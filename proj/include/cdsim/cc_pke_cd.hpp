#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "cdsim/ntcf.hpp"
#include "cdsim/pke_cd.hpp"
#include "cdsim/qsim.hpp"
#include "cdsim/rnce.hpp"
#include "cdsim/rng.hpp"
#include "cdsim/wire.hpp"

namespace cdsim::cccd {

struct Params {
  int n = 4;  // 4n instances, |S| = 2n
  int preimage_bits = 8;
  int lambda_bits = 128;
  std::size_t message_bits = 8;
  primitives::PkeSchemeId base = primitives::PkeSchemeId::TestStub;
  int security_level = 128;

  int instance_count() const { return 4 * n; }
  int subset_size() const { return 2 * n; }
  void validate() const;
  rnce::BaseOps base_ops() const { return rnce::pke_base(base, security_level); }
};

struct KeyPair {
  Params params;
  rnce::RnceEncKey nce_pk;
  rnce::RnceDecKey nce_sk;
  rnce::RnceAux nce_aux;  // harness-only
  Bytes ow_pk;
  Bytes ow_sk;
};

struct PublicKeyView {
  Params params;
  const rnce::RnceEncKey* nce_pk;
  const Bytes* ow_pk;
};

struct SecretKeyView {
  rnce::RnceDecKey nce_sk;
  Bytes ow_sk;
};

KeyPair cc_keygen(const Params& params, Rng& rng);

// S is carried as a 4n-bit membership mask, ascending index order.
BitString encode_subset_mask(const std::vector<int>& subset, int universe);
std::vector<int> decode_subset_mask(const BitString& mask);

// --- Wire message payloads -------------------------------------------------

struct KeysMessage {
  std::vector<ntcf::ClawFreeKey> keys;  // one per instance
};
struct ImagesMessage {
  std::vector<std::uint32_t> images;  // y_i
};
struct CtBundleMessage {
  rnce::RnceCiphertext nce_ct;  // encryption of the subset mask
  Bytes ow_ct;                  // encryption of K
  BitString ct_msg;             // m xor H(Z)
};
struct AbortMessage {};
struct CcCert {
  struct Entry {
    Bit e = 0;
    BitString d;
  };
  std::vector<Entry> entries;  // 4n entries
};
struct SkRevealMessage {
  bool revealed = false;
  Bytes nce_sk;  // encoded RnceDecKey
  Bytes ow_sk;
};

Bytes encode_keys_message(const KeysMessage& msg);
KeysMessage decode_keys_message(const Bytes& data);
Bytes encode_images_message(const ImagesMessage& msg);
ImagesMessage decode_images_message(const Bytes& data);
Bytes encode_ct_bundle(const CtBundleMessage& msg);
CtBundleMessage decode_ct_bundle(const Bytes& data);
Bytes encode_cert(const CcCert& cert);
CcCert decode_cert(const Bytes& data);
Bytes encode_sk_reveal(const SkRevealMessage& msg);
SkRevealMessage decode_sk_reveal(const Bytes& data);

Bytes encode_claw_key(const ntcf::ClawFreeKey& key);
ntcf::ClawFreeKey decode_claw_key(const Bytes& data);
Bytes encode_trapdoor(const ntcf::ClawFreeTrapdoor& td);
ntcf::ClawFreeTrapdoor decode_trapdoor(const Bytes& data);

// --- Protocol state machines ------------------------------------------------

struct CcVerificationKey {
  Params params;
  struct Entry {
    int index = 0;  // position in [4n], ascending, complement of S
    ntcf::ClawFreeTrapdoor trapdoor;
    std::uint32_t image = 0;
  };
  std::vector<Entry> entries;  // exactly 2n
};

enum class SenderPhase : std::uint8_t { Init, AwaitImages, Done, Aborted };

// Classical sender of the interactive encryption. Holds S, the per-instance
// trapdoors, K, and after a successful image check the tuple Z.
class Sender {
public:
  Sender(const PublicKeyView& pk, BitString message, Rng& rng);

  KeysMessage init();
  std::variant<CtBundleMessage, AbortMessage> finalize(const ImagesMessage& images);

  SenderPhase phase() const { return phase_; }
  const std::vector<int>& subset() const { return subset_; }
  const CcVerificationKey& verification_key() const;
  // Z as packed bits (lambda-bit K, then (b, x) per subset element,
  // ascending); defined only after a successful finalize.
  const std::optional<Bytes>& z_encoding() const { return z_encoding_; }
  const BitString& session_key() const { return session_key_; }

private:
  Params params_;
  rnce::RnceEncKey nce_pk_;
  Bytes ow_pk_;
  BitString message_;
  Rng* rng_;
  SenderPhase phase_ = SenderPhase::Init;
  std::vector<int> subset_;  // S, ascending
  std::vector<ntcf::ClawFreeKey> keys_;
  std::vector<ntcf::ClawFreeTrapdoor> trapdoors_;
  BitString session_key_;  // K
  std::optional<Bytes> z_encoding_;
  CcVerificationKey vk_;
};

enum class ReceiverPhase : std::uint8_t { AwaitKeys, AwaitBundle, Done, Aborted };

struct InstanceHolder {
  qsim::ClawInstanceState state;
  ntcf::LabelMap label_map = ntcf::LabelMap::identity(0);
  bool consumed = false;
};

// Receiver-side quantum ciphertext: the retained collapsed registers plus the
// classical bundle.
struct CcCiphertext {
  Params params;
  std::vector<InstanceHolder> instances;
  rnce::RnceCiphertext nce_ct;
  Bytes ow_ct;
  BitString ct_msg;
};

class Receiver {
public:
  explicit Receiver(Rng& rng) : rng_(&rng) {}

  ImagesMessage respond(const KeysMessage& keys);
  CcCiphertext take_ciphertext(const CtBundleMessage& bundle);
  void abort() { phase_ = ReceiverPhase::Aborted; }

  ReceiverPhase phase() const { return phase_; }
  const std::vector<InstanceHolder>& instances() const { return instances_; }

private:
  Rng* rng_;
  ReceiverPhase phase_ = ReceiverPhase::AwaitKeys;
  std::vector<InstanceHolder> instances_;
};

// --- Local algorithms --------------------------------------------------------

// Pad derivation m xor H(Z): SHAKE-backed oracle, first message_bits bits.
BitString oracle_pad(const Bytes& z_packed, std::size_t message_bits);
// Z packing: lambda-bit K, then (b_i, x_i) with x in preimage_bits bits for
// each listed instance, in the given order.
Bytes pack_z(const BitString& session_key,
             const std::vector<std::pair<Bit, std::uint32_t>>& preimages, int preimage_bits);

std::optional<BitString> cc_dec(const SecretKeyView& sk, CcCiphertext& ct, Rng& rng);
CcCert cc_del(CcCiphertext& ct, Rng& rng);
bool cc_vrfy(const CcVerificationKey& vk, const CcCert& cert);

// --- Interactive drivers ------------------------------------------------------

struct SenderOutcome {
  bool aborted = false;
  std::optional<CcVerificationKey> vk;
};
struct ReceiverOutcome {
  bool aborted = false;
  std::optional<CcCiphertext> ct;
};

SenderOutcome run_sender(wire::Transport& transport, const PublicKeyView& pk,
                         const BitString& message, Rng& rng);
ReceiverOutcome run_receiver(wire::Transport& transport, Rng& rng);

struct InteractiveResult {
  bool aborted = false;
  std::optional<CcVerificationKey> vk;
  std::optional<CcCiphertext> ct;
  Bytes transcript;
};

enum class TransportKind : std::uint8_t { InProcess = 0, LoopbackTcp = 1 };

// Runs the full interactive encryption with both parties in this process,
// over in-memory queues or a loopback TCP socket. The transcript records
// every frame in protocol order.
InteractiveResult run_interactive_encryption(const PublicKeyView& pk, const BitString& message,
                                             std::uint64_t sender_seed,
                                             std::uint64_t receiver_seed, TransportKind kind);

// --- Experiment harnesses -----------------------------------------------------

// Hybrid instrumentation for the deletion game: each mode adds one step of
// the proof's hybrid sequence. The oracle handed to the strategy is
// reprogrammed accordingly; the scheme algorithms themselves are untouched.
enum class CcHybridMode : std::uint8_t {
  Real = 0,
  FreshKeyPrefix = 1,   // oracle fresh on inputs starting with K, until reveal
  FakeNce = 2,          // + fake subset encryption, revealed key from Reveal
  FreshPadAfterReveal = 3,  // + oracle fresh at Z after reveal
};

struct CcGameContext {
  // Oracle access for the adversary: query the (possibly reprogrammed) hash
  // on a packed Z encoding.
  std::function<BitString(const Bytes& z_packed, std::size_t out_bits)> oracle;
};

class CcStrategy {
public:
  virtual ~CcStrategy() = default;
  virtual std::pair<BitString, BitString> choose_messages(const PublicKeyView& pk,
                                                          const CcGameContext& ctx, Rng& rng) = 0;
  virtual ImagesMessage respond_keys(const KeysMessage& keys, const CcGameContext& ctx,
                                     Rng& rng) = 0;
  virtual CcCert produce_cert(const std::variant<CtBundleMessage, AbortMessage>& bundle,
                              const CcGameContext& ctx, Rng& rng) = 0;
  virtual Bit guess(std::optional<SecretKeyView> sk, const CcGameContext& ctx, Rng& rng) = 0;
};

pkecd::CdExperimentResult run_cc_experiment(const Params& params, CcStrategy& strategy, Bit b,
                                            Rng& rng, CcHybridMode mode = CcHybridMode::Real);

// Lemma-style cut-and-choose game: certificates first, subset reveal, then
// preimages on the revealed subset.
struct CutChooseResponse {
  std::vector<std::uint32_t> images;            // y_i
  std::vector<CcCert::Entry> certificates;      // (e_i, d_i)
};

class CutChooseStrategy {
public:
  virtual ~CutChooseStrategy() = default;
  virtual CutChooseResponse respond_keys(const std::vector<ntcf::ClawFreeKey>& keys,
                                         Rng& rng) = 0;
  virtual std::vector<std::pair<Bit, std::uint32_t>> reveal_preimages(
      const std::vector<int>& subset, Rng& rng) = 0;
};

struct CutChooseTrace {
  bool certificate_check_passed = false;  // step 4, complement positions
  bool preimage_check_passed = false;     // step 7, subset positions
  bool won = false;
};

CutChooseTrace run_cut_and_choose_experiment(int n, int preimage_bits,
                                             CutChooseStrategy& strategy, Rng& rng);

}  // namespace cdsim::cccd
