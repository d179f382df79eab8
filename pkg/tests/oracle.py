"""Independent dense-matrix reference used to cross-check the library.

Everything here is written directly against the definitions (explicit loops
and krons), on purpose not sharing code with qblue.linalg, so agreement is
a genuine two-route check.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


def create_mat(dim):
    m = np.zeros((dim, dim), dtype=complex)
    for k in range(dim - 1):
        m[k + 1, k] = np.sqrt(k + 1)
    return m


def annihilate_mat(dim):
    return create_mat(dim).conj().T


def kron_all(*mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def pauli_string_matrix(string):
    return kron_all(*(PAULI[c] for c in string))


def embedded(op, j, dims):
    """op at site j, identities elsewhere (bosonic embedding)."""
    mats = [np.eye(d, dtype=complex) for d in dims]
    mats[j] = op
    return kron_all(*mats)


def jw_ladder(kind, j, n):
    """Occupation-basis fermionic ladder operator at site j of n, built from
    the Z-string definition (sign = parity of occupied sites before j)."""
    op = create_mat(2) if kind == "create" else annihilate_mat(2)
    mats = [Z] * j + [op] + [I2] * (n - j - 1)
    return kron_all(*mats)


def expval(m, vec):
    vec = np.asarray(vec, dtype=complex)
    return (vec.conj() @ (m @ vec)) / (vec.conj() @ vec)


def max_norm(a, b=None):
    d = a if b is None else a - b
    return abs(np.asarray(d)).max()
