#include "memq/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace memq {

namespace {

void check_qubit_count(int qubits) {
    if (qubits < 1 || qubits > QuantumState::kMaxQubits)
        throw std::invalid_argument("qubit count must be between 1 and 10");
}

void check_targets(int qubits, const std::vector<int>& targets) {
    if (targets.empty()) throw std::invalid_argument("no target qubits");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= qubits)
            throw std::invalid_argument("target qubit out of range");
        for (std::size_t j = i + 1; j < targets.size(); ++j)
            if (targets[i] == targets[j])
                throw std::invalid_argument("duplicate target qubit");
    }
}

// Table mapping each local gate index to the bits it sets in a full
// register index; targets[0] is the most significant local bit.
std::vector<std::uint64_t> spread_table(int qubits, const std::vector<int>& targets) {
    const int k = static_cast<int>(targets.size());
    std::vector<std::uint64_t> table(std::size_t{1} << k, 0);
    for (std::uint64_t g = 0; g < table.size(); ++g) {
        std::uint64_t bits = 0;
        for (int j = 0; j < k; ++j)
            if ((g >> (k - 1 - j)) & 1) bits |= std::uint64_t{1} << (qubits - 1 - targets[j]);
        table[g] = bits;
    }
    return table;
}

// Applies a square matrix to the target-qubit slots of a strided vector.
void apply_on_slots(const CMatrix& m, const std::vector<std::uint64_t>& table,
                    std::uint64_t all_mask, std::uint64_t dim, cplx* base,
                    std::uint64_t stride) {
    const std::size_t sub = table.size();
    std::vector<cplx> in(sub), out(sub);
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & all_mask) continue;
        for (std::size_t g = 0; g < sub; ++g) in[g] = base[(i | table[g]) * stride];
        for (std::size_t r = 0; r < sub; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < sub; ++c) acc += m(r, c) * in[c];
            out[r] = acc;
        }
        for (std::size_t g = 0; g < sub; ++g) base[(i | table[g]) * stride] = out[g];
    }
}

CMatrix conj_entries(const CMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) out.data()[i] = std::conj(m.data()[i]);
    return out;
}

}  // namespace

QuantumState QuantumState::pure(int qubits, std::vector<cplx> amplitudes) {
    check_qubit_count(qubits);
    if (amplitudes.size() != (std::size_t{1} << qubits))
        throw std::invalid_argument("amplitude vector has wrong length");
    double n2 = 0.0;
    for (const cplx& a : amplitudes) n2 += std::norm(a);
    if (std::abs(std::sqrt(n2) - 1.0) > kValidationTol)
        throw std::invalid_argument("statevector is not normalised");
    QuantumState s;
    s.qubits_ = qubits;
    s.pure_ = true;
    s.amp_ = std::move(amplitudes);
    return s;
}

QuantumState QuantumState::basis(int qubits, std::uint64_t index) {
    check_qubit_count(qubits);
    if (index >= (std::uint64_t{1} << qubits))
        throw std::invalid_argument("basis index out of range");
    std::vector<cplx> amp(std::size_t{1} << qubits, 0.0);
    amp[index] = 1.0;
    return pure(qubits, std::move(amp));
}

QuantumState QuantumState::plus(int qubits) {
    check_qubit_count(qubits);
    const std::size_t dim = std::size_t{1} << qubits;
    std::vector<cplx> amp(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    return pure(qubits, std::move(amp));
}

QuantumState QuantumState::mixed(int qubits, CMatrix rho) {
    check_qubit_count(qubits);
    const std::size_t dim = std::size_t{1} << qubits;
    if (rho.rows() != dim || rho.cols() != dim)
        throw std::invalid_argument("density matrix has wrong dimensions");
    if (!is_hermitian(rho, kValidationTol))
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(trace(rho) - cplx(1.0)) > kValidationTol)
        throw std::invalid_argument("density matrix trace is not 1");
    QuantumState s;
    s.qubits_ = qubits;
    s.pure_ = false;
    s.rho_ = std::move(rho);
    return s;
}

const std::vector<cplx>& QuantumState::amplitudes() const {
    if (!pure_) throw std::logic_error("state is mixed; no statevector");
    return amp_;
}

CMatrix QuantumState::density() const {
    if (!pure_) return rho_;
    const std::size_t dim = amp_.size();
    CMatrix rho(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) rho(i, j) = amp_[i] * std::conj(amp_[j]);
    return rho;
}

std::vector<double> QuantumState::probabilities() const {
    std::vector<double> p(dim());
    if (pure_) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amp_[i]);
    } else {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = rho_(i, i).real();
    }
    return p;
}

void QuantumState::ensure_mixed() {
    if (!pure_) return;
    rho_ = density();
    amp_.clear();
    pure_ = false;
}

void QuantumState::apply_gate(const CMatrix& u, const std::vector<int>& targets) {
    check_targets(qubits_, targets);
    const std::size_t sub = std::size_t{1} << targets.size();
    if (u.rows() != sub || u.cols() != sub)
        throw std::invalid_argument("gate dimension does not match target count");
    if (!is_unitary(u, kValidationTol))
        throw std::invalid_argument("gate is not unitary");

    const std::vector<std::uint64_t> table = spread_table(qubits_, targets);
    std::uint64_t all_mask = 0;
    for (int t : targets) all_mask |= std::uint64_t{1} << (qubits_ - 1 - t);

    if (pure_) {
        apply_on_slots(u, table, all_mask, dim(), amp_.data(), 1);
        return;
    }
    // rho -> U rho U^dag: transform row indices by U, then, for each row,
    // the column vector v by conj(U) (v' = v U^dag reads as conj(U) v).
    const std::uint64_t d = dim();
    for (std::uint64_t c = 0; c < d; ++c)
        apply_on_slots(u, table, all_mask, d, rho_.data() + c, d);
    const CMatrix uc = conj_entries(u);
    for (std::uint64_t r = 0; r < d; ++r)
        apply_on_slots(uc, table, all_mask, d, rho_.data() + r * d, 1);
}

void QuantumState::apply_kraus(const std::vector<CMatrix>& ops, const std::vector<int>& targets) {
    check_targets(qubits_, targets);
    if (ops.empty()) throw std::invalid_argument("empty Kraus set");
    const std::size_t sub = std::size_t{1} << targets.size();
    CMatrix completeness(sub, sub);
    for (const CMatrix& k : ops) {
        if (k.rows() != sub || k.cols() != sub)
            throw std::invalid_argument("Kraus operator dimension mismatch");
        completeness = completeness + adjoint(k) * k;
    }
    if (max_abs_diff(completeness, CMatrix::identity(sub)) > kValidationTol)
        throw std::invalid_argument("Kraus set is not trace preserving");

    ensure_mixed();
    const std::vector<std::uint64_t> table = spread_table(qubits_, targets);
    std::uint64_t all_mask = 0;
    for (int t : targets) all_mask |= std::uint64_t{1} << (qubits_ - 1 - t);

    const std::uint64_t d = dim();
    CMatrix acc(d, d);
    for (const CMatrix& k : ops) {
        CMatrix term = rho_;
        for (std::uint64_t c = 0; c < d; ++c)
            apply_on_slots(k, table, all_mask, d, term.data() + c, d);
        const CMatrix kc = conj_entries(k);
        for (std::uint64_t r = 0; r < d; ++r)
            apply_on_slots(kc, table, all_mask, d, term.data() + r * d, 1);
        acc = acc + term;
    }
    // Symmetrise to keep the representation Hermitian under roundoff.
    rho_ = cplx(0.5) * (acc + adjoint(acc));
}

QuantumState QuantumState::partial_trace(const std::vector<int>& keep) const {
    check_targets(qubits_, keep);
    if (keep.size() == static_cast<std::size_t>(qubits_)) {
        bool id = true;
        for (std::size_t i = 0; i < keep.size(); ++i) id = id && keep[i] == static_cast<int>(i);
        if (id) {
            QuantumState s = *this;
            s.ensure_mixed();
            return s;
        }
    }

    std::vector<int> traced;
    for (int q = 0; q < qubits_; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

    const int m = static_cast<int>(keep.size());
    const int tcount = static_cast<int>(traced.size());
    const std::uint64_t outd = std::uint64_t{1} << m;
    const std::uint64_t td = std::uint64_t{1} << tcount;

    auto scatter = [&](std::uint64_t value, const std::vector<int>& qs) {
        std::uint64_t bits = 0;
        for (std::size_t j = 0; j < qs.size(); ++j)
            if ((value >> (qs.size() - 1 - j)) & 1)
                bits |= std::uint64_t{1} << (qubits_ - 1 - qs[j]);
        return bits;
    };

    const CMatrix rho = density();
    CMatrix out(outd, outd);
    for (std::uint64_t r = 0; r < outd; ++r) {
        const std::uint64_t rbits = scatter(r, keep);
        for (std::uint64_t c = 0; c < outd; ++c) {
            const std::uint64_t cbits = scatter(c, keep);
            cplx sum = 0.0;
            for (std::uint64_t t = 0; t < td; ++t) {
                const std::uint64_t tbits = scatter(t, traced);
                sum += rho(rbits | tbits, cbits | tbits);
            }
            out(r, c) = sum;
        }
    }
    QuantumState s;
    s.qubits_ = m;
    s.pure_ = false;
    s.rho_ = std::move(out);
    return s;
}

double QuantumState::expect_pauli(const std::string& paulis) const {
    if (paulis.size() != static_cast<std::size_t>(qubits_))
        throw std::invalid_argument("Pauli string length must equal qubit count");
    std::uint64_t flip = 0, ymask = 0, zmask = 0;
    int ycount = 0;
    for (int q = 0; q < qubits_; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (qubits_ - 1 - q);
        switch (paulis[q]) {
            case 'I': break;
            case 'X': flip |= bit; break;
            case 'Y': flip |= bit; ymask |= bit; ++ycount; break;
            case 'Z': zmask |= bit; break;
            default: throw std::invalid_argument("Pauli string may contain only I, X, Y, Z");
        }
    }
    const cplx yphase = std::pow(cplx(0.0, 1.0), ycount);
    const std::uint64_t d = dim();
    cplx total = 0.0;
    for (std::uint64_t i = 0; i < d; ++i) {
        const int sign = (std::popcount(i & (ymask | zmask)) & 1) ? -1 : 1;
        const cplx coeff = yphase * static_cast<double>(sign);
        if (pure_)
            total += std::conj(amp_[i ^ flip]) * coeff * amp_[i];
        else
            total += coeff * rho_(i, i ^ flip);
    }
    return total.real();
}

cplx QuantumState::overlap(const QuantumState& other) const {
    if (!pure_ || !other.pure_) throw std::runtime_error("overlap requires pure states");
    if (qubits_ != other.qubits_) throw std::invalid_argument("overlap: qubit count mismatch");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) acc += std::conj(amp_[i]) * other.amp_[i];
    return acc;
}

QuantumState QuantumState::permuted(const std::vector<int>& new_position) const {
    if (new_position.size() != static_cast<std::size_t>(qubits_))
        throw std::invalid_argument("permutation length mismatch");
    std::vector<bool> seen(qubits_, false);
    for (int p : new_position) {
        if (p < 0 || p >= qubits_ || seen[p])
            throw std::invalid_argument("not a permutation");
        seen[p] = true;
    }
    const std::uint64_t d = dim();
    auto map_index = [&](std::uint64_t i) {
        std::uint64_t out = 0;
        for (int q = 0; q < qubits_; ++q)
            if ((i >> (qubits_ - 1 - q)) & 1)
                out |= std::uint64_t{1} << (qubits_ - 1 - new_position[q]);
        return out;
    };
    QuantumState s;
    s.qubits_ = qubits_;
    s.pure_ = pure_;
    if (pure_) {
        s.amp_.assign(d, 0.0);
        for (std::uint64_t i = 0; i < d; ++i) s.amp_[map_index(i)] = amp_[i];
    } else {
        s.rho_ = CMatrix(d, d);
        for (std::uint64_t r = 0; r < d; ++r)
            for (std::uint64_t c = 0; c < d; ++c) s.rho_(map_index(r), map_index(c)) = rho_(r, c);
    }
    return s;
}

QuantumState QuantumState::tensor(const QuantumState& a, const QuantumState& b) {
    const int qubits = a.qubits_ + b.qubits_;
    check_qubit_count(qubits);
    QuantumState s;
    s.qubits_ = qubits;
    if (a.pure_ && b.pure_) {
        s.pure_ = true;
        s.amp_.resize(std::size_t{1} << qubits);
        for (std::size_t i = 0; i < a.amp_.size(); ++i)
            for (std::size_t j = 0; j < b.amp_.size(); ++j)
                s.amp_[i * b.amp_.size() + j] = a.amp_[i] * b.amp_[j];
    } else {
        s.pure_ = false;
        s.rho_ = kron(a.density(), b.density());
    }
    return s;
}

double QuantumState::norm_error() const {
    if (pure_) {
        double n2 = 0.0;
        for (const cplx& a : amp_) n2 += std::norm(a);
        return std::abs(std::sqrt(n2) - 1.0);
    }
    return std::abs(trace(rho_) - cplx(1.0));
}

}  // namespace memq
