#include "qpke/scheme_bitqpke.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <fstream>
#include <sstream>

#include "qpke/errors.hpp"

namespace qpke {

namespace fs = std::filesystem;

namespace {

int pivot_position(const BitVec& k) {
    for (int pos = 1; pos <= k.len(); ++pos)
        if (k.bit(pos)) return pos;
    return 0;
}

std::string fresh_key_id(Rng& rng) {
    static const char* hex = "0123456789abcdef";
    std::uint64_t word = rng();
    std::string id(16, '0');
    for (int i = 15; i >= 0; --i) {
        id[i] = hex[word & 0xf];
        word >>= 4;
    }
    return id;
}

void check_key_id(const std::string& key_id) {
    if (key_id.empty() || key_id.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw ParameterError("malformed key id");
}

}  // namespace

// --- registry ------------------------------------------------------------------

KeyRegistry::KeyRegistry(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

fs::path KeyRegistry::pub_path(const std::string& key_id) const { return dir_ / (key_id + ".pub"); }
fs::path KeyRegistry::used_path(const std::string& key_id) const { return dir_ / (key_id + ".used"); }

void KeyRegistry::store(const PublicKey& pk) {
    check_key_id(pk.key_id);
    if (contains(pk.key_id)) throw ParameterError("key id already present in registry");
    std::ofstream out(pub_path(pk.key_id));
    if (!out) throw std::runtime_error("cannot write registry entry");
    out << serialize_public_key(pk);
}

PublicKey KeyRegistry::load(const std::string& key_id) const {
    check_key_id(key_id);
    std::ifstream in(pub_path(key_id));
    if (!in) throw ParameterError("key id not found in registry: " + key_id);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_public_key(buf.str());
}

bool KeyRegistry::contains(const std::string& key_id) const { return fs::exists(pub_path(key_id)); }

bool KeyRegistry::is_consumed(const std::string& key_id) const {
    return fs::exists(used_path(key_id));
}

bool KeyRegistry::try_consume(const std::string& key_id) {
    check_key_id(key_id);
    // Exclusive create is the atomic check-and-set; EEXIST means someone else
    // already spent the key.
    const std::string marker = used_path(key_id).string();
    const int fd = ::open(marker.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd >= 0) {
        ::close(fd);
        return true;
    }
    if (errno == EEXIST) return false;
    throw std::runtime_error("cannot create consumed marker: " + marker);
}

std::vector<std::string> KeyRegistry::list_ids() const {
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir_)) {
        if (entry.path().extension() == ".pub") ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

// --- protocol ------------------------------------------------------------------

PrivateKey keygen(int n, int m, int p, Rng& rng) {
    if (n < 2 || n % 2 != 0) throw ParameterError("n must be even and >= 2");
    if (m < 1 || p < 1) throw ParameterError("m and p must be >= 1");
    PrivateKey sk;
    sk.n = n;
    sk.m = m;
    sk.p = p;
    sk.f1 = sample_boolean_function(m, n, p, rng);
    sk.f2 = sample_boolean_function(m, n, p, rng);
    sk.f3 = sample_boolean_function(m, n, p, rng);
    return sk;
}

TwoBranchState public_key_state(const BitVec& k1, const BitVec& k2, const BitVec& k3) {
    if (hamming_weight(k1) % 2 == 0) throw ParameterError("k1 must have odd hamming weight");
    return TwoBranchState(BitVec(k1.len()), k1, PhasePower{}, PhasePower{}, k2, k3);
}

namespace {

BitVec draw_s1(const PrivateKey& sk, Rng& rng) {
    if (sk.m <= 20) {
        // Track the visited subdomain so a degenerate F1 terminates with a
        // definite verdict once every s1 has been tried.
        std::vector<bool> tried(std::size_t(1) << sk.m, false);
        std::size_t distinct = 0;
        while (distinct < tried.size()) {
            BitVec s1 = random_bits(sk.m, rng);
            const std::size_t idx = s1.to_index();
            if (!tried[idx]) {
                tried[idx] = true;
                ++distinct;
            }
            if (hamming_weight(eval_boolean_function(sk.f1, s1)) % 2 == 1) return s1;
        }
        throw ParameterError("private key admits no valid k1");
    }
    for (long attempt = 0; attempt < (1L << 20); ++attempt) {
        BitVec s1 = random_bits(sk.m, rng);
        if (hamming_weight(eval_boolean_function(sk.f1, s1)) % 2 == 1) return s1;
    }
    throw ParameterError("private key admits no valid k1");
}

}  // namespace

PublicKey issue_public_key(const PrivateKey& sk, Rng& rng) {
    PublicKeyTag tag;
    tag.s1 = draw_s1(sk, rng);
    tag.s2 = random_bits(sk.m, rng);
    tag.s3 = random_bits(sk.m, rng);
    const BitVec k1 = eval_boolean_function(sk.f1, tag.s1);
    const BitVec k2 = eval_boolean_function(sk.f2, tag.s2);
    const BitVec k3 = eval_boolean_function(sk.f3, tag.s3);
    return PublicKey{std::move(tag), public_key_state(k1, k2, k3), fresh_key_id(rng)};
}

PublicKey issue_public_key(const PrivateKey& sk, KeyRegistry& registry, Rng& rng) {
    PublicKey pk = issue_public_key(sk, rng);
    while (registry.contains(pk.key_id)) pk.key_id = fresh_key_id(rng);
    registry.store(pk);
    return pk;
}

TwoBranchState encrypt_state(const TwoBranchState& pk_state, int bit) {
    if (bit != 0 && bit != 1) throw ParameterError("message bit must be 0 or 1");
    return bit == 0 ? pk_state : sym_apply_y_all(pk_state);
}

Ciphertext encrypt(const PublicKey& pk, int bit, KeyRegistry& registry) {
    if (bit != 0 && bit != 1) throw ParameterError("message bit must be 0 or 1");
    if (!registry.contains(pk.key_id)) throw ParameterError("key id not found in registry");
    if (!registry.try_consume(pk.key_id))
        throw SingleUseError("public key already consumed: " + pk.key_id);
    return Ciphertext{pk.tag, encrypt_state(pk.state, bit), pk.key_id};
}

int decrypt(const PrivateKey& sk, const Ciphertext& ct) {
    if (ct.tag.s1.len() != sk.m || ct.tag.s2.len() != sk.m || ct.tag.s3.len() != sk.m)
        throw DimensionError("tag length does not match the private key");
    const BitVec k1 = eval_boolean_function(sk.f1, ct.tag.s1);
    const BitVec k2 = eval_boolean_function(sk.f2, ct.tag.s2);
    const BitVec k3 = eval_boolean_function(sk.f3, ct.tag.s3);
    return decrypt_with_key_material(k1, k2, k3, ct.state);
}

int decrypt_with_key_material(const BitVec& k1, const BitVec& k2, const BitVec& k3,
                              const TwoBranchState& ct_state) {
    if (hamming_weight(k1) % 2 == 0)
        throw KeyMismatchError("ciphertext does not match key (k1 weight)");
    const TwoBranchState inner = sym_undo_dressing(ct_state, k2, k3).canonical();
    const BitVec zero(ct_state.n);
    const BitVec ones = zero.complemented();
    // Message 0 leaves (|0>+|k1>); message 1 leaves (|1..1> - |~k1>) up to a
    // global phase. Canonical order puts 0 and ~k1 first respectively.
    if (inner.u == zero && inner.v == k1 && inner.rel.t == 0) return 0;
    if (inner.u == k1.complemented() && inner.v == ones && inner.rel.t == 2) return 1;
    throw KeyMismatchError("ciphertext does not match key (unrecognized undressed form)");
}

DenseDecryption decrypt_dense(const PrivateKey& sk, const DenseState& ct, const PublicKeyTag& tag,
                              int limit) {
    const BitVec k1 = eval_boolean_function(sk.f1, tag.s1);
    const BitVec k2 = eval_boolean_function(sk.f2, tag.s2);
    const BitVec k3 = eval_boolean_function(sk.f3, tag.s3);
    return decrypt_dense_with_key_material(k1, k2, k3, ct, limit);
}

DenseDecryption decrypt_dense_with_key_material(const BitVec& k1, const BitVec& k2,
                                                const BitVec& k3, const DenseState& ct, int limit) {
    if (ct.n > limit) throw CapacityError("dense ciphertext exceeds the configured limit");
    if (hamming_weight(k1) % 2 == 0)
        throw KeyMismatchError("ciphertext does not match key (k1 weight)");
    DenseState psi = apply_pauli_mask(ct, Pauli::Y, k3);
    psi = apply_hadamard_mask(psi, k2);
    const int pivot = pivot_position(k1);
    for (int q = 1; q <= ct.n; ++q)
        if (q != pivot && k1.bit(q)) psi = apply_cnot(psi, pivot, q);
    const PmMeasurement meas = measure_pm(psi, pivot);
    if (meas.prob_plus >= meas.prob_minus) return DenseDecryption{0, meas.prob_plus};
    return DenseDecryption{1, meas.prob_minus};
}

// --- base-state preparation ------------------------------------------------------

int PrepCircuit::cnot_count() const {
    int count = 0;
    for (const PrepGate& g : gates)
        if (g.kind == 'C') ++count;
    return count;
}

PrepCircuit prepare_circuit(const BitVec& k1, PrepMethod method) {
    if (hamming_weight(k1) % 2 == 0) throw ParameterError("k1 must have odd hamming weight");
    const int n = k1.len();
    const int pivot = pivot_position(k1);
    PrepCircuit circuit;
    if (method == PrepMethod::B) {
        circuit.qubits = n;
        circuit.gates.push_back(PrepGate{'H', 0, pivot});
        for (int q = 1; q <= n; ++q)
            if (q != pivot && k1.bit(q)) circuit.gates.push_back(PrepGate{'C', pivot, q});
        return circuit;
    }
    // Method A: qubit 1 is the separate work register, the data register
    // occupies qubits 2..n+1.
    circuit.qubits = n + 1;
    circuit.ancillas = 1;
    circuit.gates.push_back(PrepGate{'H', 0, 1});
    for (int q = 1; q <= n; ++q)
        if (k1.bit(q)) circuit.gates.push_back(PrepGate{'C', 1, q + 1});
    circuit.gates.push_back(PrepGate{'C', pivot + 1, 1});
    return circuit;
}

DenseState prepare_base_state(const BitVec& k1, PrepMethod method, int limit) {
    const PrepCircuit circuit = prepare_circuit(k1, method);
    DenseState psi = DenseState::zero_state(circuit.qubits, limit + circuit.ancillas);
    for (const PrepGate& g : circuit.gates) {
        if (g.kind == 'H')
            psi = apply_hadamard(psi, g.target);
        else
            psi = apply_cnot(psi, g.control, g.target);
    }
    if (circuit.ancillas == 0) return psi;
    // The work qubit ends in |0> exactly; keep the data-register block.
    const int n = k1.len();
    DenseState out;
    out.n = n;
    out.amps.assign(std::size_t(1) << n, Complex(0, 0));
    for (std::size_t i = 0; i < out.amps.size(); ++i) out.amps[i] = psi.amps[i];
    for (std::size_t i = out.amps.size(); i < psi.amps.size(); ++i) {
        if (std::abs(psi.amps[i]) > 1e-12)
            throw std::runtime_error("work qubit failed to disentangle");
    }
    return out;
}

// --- serialization ----------------------------------------------------------------

void save_private_key(const PrivateKey& sk, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write private key file");
    out << sk.n << ' ' << sk.m << ' ' << sk.p << '\n';
    out << serialize(sk.f1) << serialize(sk.f2) << serialize(sk.f3);
}

PrivateKey load_private_key(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open private key file: " + path.string());
    PrivateKey sk;
    if (!(in >> sk.n >> sk.m >> sk.p)) throw ParseError("bad private key header");
    if (sk.n < 2 || sk.n % 2 != 0) throw ParseError("private key n must be even and >= 2");
    sk.f1 = parse_boolean_function(in);
    sk.f2 = parse_boolean_function(in);
    sk.f3 = parse_boolean_function(in);
    for (const BooleanFunction* f : {&sk.f1, &sk.f2, &sk.f3}) {
        if (f->m != sk.m || f->n != sk.n || f->p != sk.p)
            throw ParseError("private key functions disagree with the header");
    }
    return sk;
}

namespace {

std::string serialize_tagged_state(const char* kind, const PublicKeyTag& tag,
                                   const TwoBranchState& state, const std::string& key_id) {
    std::ostringstream out;
    out << kind << '\n';
    out << "key_id " << key_id << '\n';
    out << "s1 " << tag.s1.to_string() << '\n';
    out << "s2 " << tag.s2.to_string() << '\n';
    out << "s3 " << tag.s3.to_string() << '\n';
    out << "state " << state.to_line() << '\n';
    return out.str();
}

struct TaggedState {
    PublicKeyTag tag;
    TwoBranchState state;
    std::string key_id;
};

TaggedState parse_tagged_state(const char* kind, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kind) throw ParseError(std::string("expected ") + kind);
    std::string key_id, s1, s2, s3, state_line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        ls >> field;
        if (field == "key_id")
            ls >> key_id;
        else if (field == "s1") {
            ls >> s1;
        } else if (field == "s2") {
            ls >> s2;
        } else if (field == "s3") {
            ls >> s3;
        } else if (field == "state") {
            std::getline(ls, state_line);
        } else {
            throw ParseError("unknown field: " + field);
        }
    }
    if (key_id.empty() || s1.empty() || s2.empty() || s3.empty() || state_line.empty())
        throw ParseError(std::string(kind) + " is missing fields");
    return TaggedState{PublicKeyTag{BitVec::from_string(s1), BitVec::from_string(s2),
                                    BitVec::from_string(s3)},
                       TwoBranchState::from_line(state_line), key_id};
}

}  // namespace

std::string serialize_public_key(const PublicKey& pk) {
    return serialize_tagged_state("qpke-public-key", pk.tag, pk.state, pk.key_id);
}

PublicKey parse_public_key(const std::string& text) {
    TaggedState t = parse_tagged_state("qpke-public-key", text);
    return PublicKey{std::move(t.tag), std::move(t.state), std::move(t.key_id)};
}

std::string serialize_ciphertext(const Ciphertext& ct) {
    return serialize_tagged_state("qpke-ciphertext", ct.tag, ct.state, ct.key_id);
}

Ciphertext parse_ciphertext(const std::string& text) {
    TaggedState t = parse_tagged_state("qpke-ciphertext", text);
    return Ciphertext{std::move(t.tag), std::move(t.state), std::move(t.key_id)};
}

void save_ciphertext(const Ciphertext& ct, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ciphertext file");
    out << serialize_ciphertext(ct);
}

Ciphertext load_ciphertext(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open ciphertext file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ciphertext(buf.str());
}

}  // namespace qpke
