"""Hand-transcribed published operator forms the suite checks against.

All matrices are written termwise from the printed closed forms. Basis order
matches the partial-trace keep order used by the pipeline; the common
normalizer is the main-branch probability (3 alpha^2 + 1)/9.
"""
import numpy as np

_S2 = np.sqrt(2.0)


def _proj(v):
    return np.outer(v, v.conj())


def _unit(bits, n):
    v = np.zeros(2 ** n, dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def published_rho146(alpha2, phi=0.0):
    """Three-qubit marginal on (1, 4, 6) of the main branch."""
    a = np.sqrt(alpha2)
    b = np.sqrt(1.0 - alpha2) * np.exp(1j * phi)
    b2 = abs(b) ** 2
    n = (3.0 * alpha2 + 1.0) / 9.0
    k000, k011, k100, k111 = (_unit(s, 3) for s in ("000", "011", "100", "111"))
    v0p = (_unit("001", 3) + _unit("010", 3)) / _S2
    v1p = (_unit("101", 3) + _unit("110", 3)) / _S2
    m = (4.0 * alpha2 / 9.0) * ((2.0 / 3.0) * _proj(k000) + (1.0 / 3.0) * _proj(v0p))
    m = m + (a * np.conj(b) / 9.0) * (_S2 / 3.0) * (
        np.outer(k000, v1p.conj()) + np.outer(v0p, k111.conj())
    )
    m = m + (a * b / 9.0) * (_S2 / 3.0) * (
        np.outer(k111, v0p.conj()) + np.outer(v1p, k000.conj())
    )
    m = m + (b2 / 36.0) * (2.0 / 3.0) * (
        _proj(k011) + _proj(v0p) + _proj(k000) + _proj(k111) + _proj(v1p) + _proj(k100)
    )
    return m / n


def published_rho16(alpha2, phi=0.0):
    """Original-to-remote-clone pair marginal; also the (1, 4) form."""
    a = np.sqrt(alpha2)
    b = np.sqrt(1.0 - alpha2) * np.exp(1j * phi)
    n = (3.0 * alpha2 + 1.0) / 9.0
    k00, k01, k11 = (_unit(s, 2) for s in ("00", "01", "11"))
    m = (4.0 * alpha2 / 9.0) * ((5.0 / 6.0) * _proj(k00) + (1.0 / 6.0) * _proj(k01))
    m = m + (2.0 * a * np.conj(b) / 27.0) * np.outer(k00, k11.conj())
    m = m + (2.0 * a * b / 27.0) * np.outer(k11, k00.conj())
    m = m + (abs(b) ** 2 / 36.0) * np.eye(4, dtype=complex)
    return m / n


def published_rho46(alpha2):
    """Clone-clone pair marginal on Bob's side."""
    b2 = 1.0 - alpha2
    n = (3.0 * alpha2 + 1.0) / 9.0
    k00, k01, k10, k11 = (_unit(s, 2) for s in ("00", "01", "10", "11"))
    block = (
        _proj(k01) + np.outer(k01, k10.conj()) + np.outer(k10, k01.conj()) + _proj(k10)
    )
    m = (4.0 * alpha2 / 9.0) * ((2.0 / 3.0) * _proj(k00) + (1.0 / 6.0) * block)
    m = m + (b2 / 36.0) * (
        (4.0 / 3.0) * _proj(k00) + (4.0 / 3.0) * _proj(k11) + (2.0 / 3.0) * block
    )
    return m / n


def published_rho12(alpha2):
    """Original-to-own-clone pair marginal (the separability family)."""
    b2 = 1.0 - alpha2
    n = (3.0 * alpha2 + 1.0) / 9.0
    k00, k01, k10, k11 = (_unit(s, 2) for s in ("00", "01", "10", "11"))
    m = (4.0 * alpha2 / 9.0) * ((5.0 / 6.0) * _proj(k00) + (1.0 / 6.0) * _proj(k01))
    m = m + (b2 / 36.0) * (
        (1.0 / 3.0) * _proj(k00)
        + (5.0 / 3.0) * _proj(k01)
        + (4.0 / 3.0) * np.outer(k01, k10.conj())
        + (4.0 / 3.0) * np.outer(k10, k01.conj())
        + (5.0 / 3.0) * _proj(k10)
        + (1.0 / 3.0) * _proj(k11)
    )
    return m / n


def published_b1p_post(x, phi=0.0):
    """First Bell outcome's post state on (3, 5, 7) after the swap."""
    a = np.sqrt(x)
    b = np.sqrt(1.0 - x) * np.exp(1j * phi)
    n = (3.0 * x + 1.0) / 9.0
    rho = np.zeros((8, 8), dtype=complex)

    def add(c, k, br):
        rho[int(k, 2), int(br, 2)] += c

    ab = a * b.conjugate()
    add((4.0 * x / 9.0) * (2.0 / 3.0), "001", "001")
    for c, k, br in ((1, "011", "011"), (-1, "011", "000"), (-1, "000", "011"), (1, "000", "000")):
        add((4.0 * x / 9.0) * (1.0 / 6.0) * c, k, br)
    for c, k, br in ((1, "001", "111"), (-1, "001", "100"), (1, "000", "110"), (-1, "011", "110")):
        add((ab / 27.0) * c, k, br)
    for c, k, br in ((-1, "110", "011"), (1, "110", "000"), (1, "111", "001"), (-1, "100", "001")):
        add((ab.conjugate() / 27.0) * c, k, br)
    b2 = abs(b) ** 2
    for k in ("010", "001", "110", "101"):
        add((b2 / 36.0) * (2.0 / 3.0), k, k)
    for c, k, br in ((1, "011", "011"), (-1, "011", "000"), (-1, "000", "011"), (1, "000", "000"),
                     (1, "111", "111"), (-1, "111", "100"), (-1, "100", "111"), (1, "100", "100")):
        add((b2 / 36.0) * (1.0 / 3.0) * c, k, br)
    return rho / n
