#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qpke/boolfunc.hpp"
#include "qpke/gf2.hpp"
#include "qpke/qsim.hpp"
#include "qpke/rng.hpp"

namespace qpke {

struct PrivateKey {
    int n = 0;  // qubit count, even
    int m = 0;  // tag string length
    int p = 0;  // monomials per output
    BooleanFunction f1, f2, f3;  // each m -> n
};

struct PublicKeyTag {
    BitVec s1, s2, s3;  // each length m
    bool operator==(const PublicKeyTag&) const = default;
};

struct PublicKey {
    PublicKeyTag tag;
    TwoBranchState state;
    std::string key_id;
};

struct Ciphertext {
    PublicKeyTag tag;
    TwoBranchState state;
    std::string key_id;
};

// Directory-backed single-use ledger: one <id>.pub file per issued key, one
// <id>.used sidecar once consumed. Consumption is an exclusive file create,
// so racing encrypts (threads or processes) get exactly one winner.
class KeyRegistry {
  public:
    explicit KeyRegistry(std::filesystem::path dir);

    void store(const PublicKey& pk);
    PublicKey load(const std::string& key_id) const;
    bool contains(const std::string& key_id) const;
    bool is_consumed(const std::string& key_id) const;
    bool try_consume(const std::string& key_id);
    std::vector<std::string> list_ids() const;
    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path pub_path(const std::string& key_id) const;
    std::filesystem::path used_path(const std::string& key_id) const;
    std::filesystem::path dir_;
};

// --- protocol ----------------------------------------------------------------

PrivateKey keygen(int n, int m, int p, Rng& rng);

// Y^k3 H^k2 (|0> + |k1>)/sqrt(2); requires odd-weight k1.
TwoBranchState public_key_state(const BitVec& k1, const BitVec& k2, const BitVec& k3);

// Draws s1 until hamming_weight(F1(s1)) is odd (for m <= 20 the whole domain
// is tracked, so a degenerate F1 fails deterministically; beyond that a 2^20
// draw cap applies), then s2, s3, then a fresh key_id.
PublicKey issue_public_key(const PrivateKey& sk, Rng& rng);
PublicKey issue_public_key(const PrivateKey& sk, KeyRegistry& registry, Rng& rng);

TwoBranchState encrypt_state(const TwoBranchState& pk_state, int bit);

// Consumes the key in the registry; a second encrypt with the same key_id
// throws SingleUseError.
Ciphertext encrypt(const PublicKey& pk, int bit, KeyRegistry& registry);

int decrypt(const PrivateKey& sk, const Ciphertext& ct);
int decrypt_with_key_material(const BitVec& k1, const BitVec& k2, const BitVec& k3,
                              const TwoBranchState& ct_state);

struct DenseDecryption {
    int bit = 0;
    double probability = 0;  // Born probability of the reported outcome
};

// Honest quantum decryption on the dense oracle: undo Y^k3 then H^k2,
// pivot-CNOT disentangle along k1, measure {|+>,|->} at the pivot.
DenseDecryption decrypt_dense(const PrivateKey& sk, const DenseState& ct, const PublicKeyTag& tag,
                              int limit = kDenseLimit);
DenseDecryption decrypt_dense_with_key_material(const BitVec& k1, const BitVec& k2,
                                                const BitVec& k3, const DenseState& ct,
                                                int limit = kDenseLimit);

// --- base-state preparation ---------------------------------------------------

enum class PrepMethod { A, B };

struct PrepGate {
    char kind;   // 'H' or 'C'
    int control; // 0 for H
    int target;
};

struct PrepCircuit {
    int qubits = 0;    // n for method B, n+1 for method A (qubit 1 is the work register)
    int ancillas = 0;  // 1 for method A
    std::vector<PrepGate> gates;

    int cnot_count() const;
};

// Method A: Hadamard on a separate work qubit, controlled-k CNOT fan-out,
// one CNOT back from a set position to clear the work qubit. Method B:
// Hadamard on the pivot (lowest set position of k1), CNOT from the pivot to
// every other set position.
PrepCircuit prepare_circuit(const BitVec& k1, PrepMethod method);

// (|0> + |k1>)/sqrt(2) via either circuit (method A's work qubit is dropped
// after it returns to |0>).
DenseState prepare_base_state(const BitVec& k1, PrepMethod method, int limit = kDenseLimit);

// --- serialization -------------------------------------------------------------

void save_private_key(const PrivateKey& sk, const std::filesystem::path& path);
PrivateKey load_private_key(const std::filesystem::path& path);

std::string serialize_public_key(const PublicKey& pk);
PublicKey parse_public_key(const std::string& text);

std::string serialize_ciphertext(const Ciphertext& ct);
Ciphertext parse_ciphertext(const std::string& text);
void save_ciphertext(const Ciphertext& ct, const std::filesystem::path& path);
Ciphertext load_ciphertext(const std::filesystem::path& path);

}  // namespace qpke
