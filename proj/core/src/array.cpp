#include "fluxlattice/array.hpp"
#include "fluxlattice/constants.hpp"
#include "fluxlattice/errors.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fluxlattice {

void CouplingNetwork::validate() const {
    const int n = static_cast<int>(shunt_ff.size());
    if (n < 2)
        throw InputError("CouplingNetwork: need at least two qubits");
    for (double c : shunt_ff)
        if (!(c > 0.0))
            throw InputError("CouplingNetwork: shunt capacitances must be positive");
    if (couplers_ff.rows() != n || couplers_ff.cols() != n)
        throw InputError("CouplingNetwork: coupler matrix shape mismatch");
    for (int i = 0; i < n; ++i) {
        if (couplers_ff(i, i) != 0.0)
            throw InputError("CouplingNetwork: coupler matrix diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            if (couplers_ff(i, j) < 0.0)
                throw InputError("CouplingNetwork: coupler capacitances must be >= 0");
            if (couplers_ff(i, j) != couplers_ff(j, i))
                throw InputError("CouplingNetwork: coupler matrix must be symmetric");
        }
    }
}

RealMatrix cinv_coefficients(const CouplingNetwork& network) {
    network.validate();
    const int n = static_cast<int>(network.shunt_ff.size());
    if (network.mode == NetworkMode::effective) {
        RealMatrix cinv = RealMatrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            cinv(i, i) = 1.0 / network.shunt_ff[i];
            for (int j = 0; j < n; ++j)
                if (j != i)
                    cinv(i, j) = network.couplers_ff(i, j) /
                                 (network.shunt_ff[i] * network.shunt_ff[j]);
        }
        return cinv;
    }
    RealMatrix c = RealMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        c(i, i) = network.shunt_ff[i];
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            c(i, i) += network.couplers_ff(i, j);
            c(i, j) = -network.couplers_ff(i, j);
        }
    }
    Eigen::LLT<RealMatrix> llt(c);
    if (llt.info() != Eigen::Success)
        throw NumericError("cinv_coefficients: capacitance matrix is not positive definite");
    RealMatrix cinv = llt.solve(RealMatrix::Identity(n, n));
    return 0.5 * (cinv + cinv.transpose());
}

int ArrayModel::bare_index(const std::vector<int>& label) const {
    if (static_cast<int>(label.size()) != n_qubits())
        throw InputError("bare_index: label length does not match qubit count");
    int idx = 0;
    for (int i = 0; i < n_qubits(); ++i) {
        if (label[i] < 0 || label[i] >= kept_levels)
            throw InputError("bare_index: label entry outside kept levels");
        idx = idx * kept_levels + label[i];
    }
    return idx;
}

namespace {

// operator on qubit `site` embedded in the m^N tensor space, qubit 0 slowest
ComplexMatrix embed(const ComplexMatrix& op, int site, int n, int m) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
        if (i == site)
            out = kron(out, op);
        else
            out = kron(out, ComplexMatrix::Identity(m, m));
    }
    return out;
}

ComplexMatrix embed_pair(const ComplexMatrix& a, int sa, const ComplexMatrix& b,
                         int sb, int n, int m) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
        if (i == sa)
            out = kron(out, a);
        else if (i == sb)
            out = kron(out, b);
        else
            out = kron(out, ComplexMatrix::Identity(m, m));
    }
    return out;
}

} // namespace

ArrayModel assemble_from_spectra(std::vector<FluxQubitParams> qubits,
                                 const CouplingNetwork& network,
                                 std::vector<QubitSpectrum> spectra,
                                 int kept_levels) {
    const int n = static_cast<int>(qubits.size());
    if (static_cast<int>(spectra.size()) != n)
        throw InputError("assemble: spectra/qubits count mismatch");
    if (kept_levels < 3)
        throw InputError("assemble: kept_levels must be >= 3");
    for (const QubitSpectrum& s : spectra)
        if (static_cast<int>(s.levels.size()) < kept_levels ||
            s.charge_elems.rows() < kept_levels)
            throw InputError("assemble: spectrum holds fewer than kept_levels levels");

    ArrayModel model;
    model.qubits = std::move(qubits);
    model.network = network;
    model.cinv = cinv_coefficients(network);
    model.kept_levels = kept_levels;
    model.spectra = std::move(spectra);

    const int m = kept_levels;
    const int dim = static_cast<int>(std::lround(std::pow(m, n)));
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        ComplexMatrix diag = ComplexMatrix::Zero(m, m);
        for (int k = 0; k < m; ++k)
            diag(k, k) = model.spectra[i].levels[k];
        h += embed(diag, i, n, m);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (model.cinv(i, j) == 0.0)
                continue;
            const double g = constants::charge_coupling_ghz_per_inv_ff * model.cinv(i, j);
            h += g * embed_pair(model.spectra[i].charge_elems.topLeftCorner(m, m), i,
                                model.spectra[j].charge_elems.topLeftCorner(m, m), j,
                                n, m);
        }
    }
    model.h_full = 0.5 * (h + h.adjoint());
    return model;
}

ArrayModel assemble(const std::vector<FluxQubitParams>& qubits,
                    const CouplingNetwork& network, int kept_levels,
                    int dim_single) {
    const int n = static_cast<int>(qubits.size());
    if (n != static_cast<int>(network.shunt_ff.size()))
        throw InputError("assemble: network size does not match qubit count");
    RealMatrix cinv = cinv_coefficients(network);

    std::vector<QubitSpectrum> spectra(n);
    for (int i = 0; i < n; ++i) {
        SpectrumOptions opts;
        // maxwell mode: the i = i charging term comes from the full inverse
        // matrix, not 1/C_Sigma
        if (network.mode == NetworkMode::maxwell)
            opts.csigma_override_ff = 1.0 / cinv(i, i);
        spectra[i] = spectrum(qubits[i], kept_levels, dim_single, opts);
    }
    return assemble_from_spectra(qubits, network, std::move(spectra), kept_levels);
}

DressedSpectrum diagonalize_labeled(const ArrayModel& model,
                                    const std::vector<std::vector<int>>& subspace,
                                    bool force) {
    EigenDecomposition ed = eigh(model.h_full);
    const int dim = model.dim();

    DressedSpectrum out;
    out.values = std::move(ed.values);
    out.vectors = std::move(ed.vectors);

    struct Candidate {
        double overlap;
        int label_idx;
        int eig_idx;
    };
    std::vector<Candidate> cands;
    cands.reserve(subspace.size() * dim);
    for (int li = 0; li < static_cast<int>(subspace.size()); ++li) {
        const int bare = model.bare_index(subspace[li]);
        for (int k = 0; k < dim; ++k)
            cands.push_back({std::norm(out.vectors(bare, k)), li, k});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.overlap != b.overlap)
            return a.overlap > b.overlap;
        if (a.label_idx != b.label_idx)
            return a.label_idx < b.label_idx;
        return a.eig_idx < b.eig_idx;
    });

    out.labels.assign(subspace.size(), {});
    std::vector<bool> label_done(subspace.size(), false);
    std::vector<bool> eig_used(dim, false);
    std::size_t assigned = 0;
    for (const Candidate& c : cands) {
        if (label_done[c.label_idx] || eig_used[c.eig_idx])
            continue;
        out.labels[c.label_idx] = {subspace[c.label_idx], c.eig_idx, c.overlap};
        label_done[c.label_idx] = true;
        eig_used[c.eig_idx] = true;
        if (++assigned == subspace.size())
            break;
    }
    for (const LabelAssignment& la : out.labels)
        out.min_overlap = std::min(out.min_overlap, la.overlap);
    out.flagged = out.min_overlap < 0.5;
    if (out.flagged && !force) {
        std::ostringstream os;
        os << "diagonalize_labeled: subspace not adiabatically connected, "
           << "min squared overlap " << out.min_overlap
           << " < 0.5 (resonant mixing); rerun with force to proceed";
        throw NumericError(os.str());
    }
    return out;
}

PopulationTrace evolve(const ComplexMatrix& h, const ComplexVector& psi0,
                       const std::vector<double>& t_ns) {
    if (psi0.size() != h.rows())
        throw InputError("evolve: state dimension mismatch");
    for (std::size_t i = 0; i + 1 < t_ns.size(); ++i)
        if (t_ns[i + 1] < t_ns[i])
            throw InputError("evolve: time grid must be ascending");
    if (!t_ns.empty() && t_ns.front() < 0.0)
        throw InputError("evolve: time grid must be nonnegative");

    EigenDecomposition ed = eigh(h);
    ComplexVector coef = ed.vectors.adjoint() * psi0;

    PopulationTrace out;
    out.t_ns = t_ns;
    out.populations.resize(static_cast<Eigen::Index>(t_ns.size()), h.rows());
    for (std::size_t ti = 0; ti < t_ns.size(); ++ti) {
        ComplexVector phase(coef.size());
        for (Eigen::Index k = 0; k < coef.size(); ++k)
            phase[k] = std::exp(Complex(0.0, -2.0 * constants::pi * ed.values[k] * t_ns[ti])) *
                       coef[k];
        ComplexVector psi = ed.vectors * phase;
        out.populations.row(static_cast<Eigen::Index>(ti)) = psi.cwiseAbs2().transpose();
    }
    return out;
}

PopulationTrace evolve(const ArrayModel& model, const std::vector<int>& initial_label,
                       const std::vector<double>& t_ns) {
    ComplexVector psi0 = ComplexVector::Zero(model.dim());
    psi0[model.bare_index(initial_label)] = 1.0;
    return evolve(model.h_full, psi0, t_ns);
}

} // namespace fluxlattice
