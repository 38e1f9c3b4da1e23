"""
Pauli-string algebra: weighted sums of Pauli strings, their products and
commutators, and their action on dense amplitude vectors.

Conventions used throughout the package: Z|0> = +|0>, Z|1> = -|1>, and bit
`i` of an amplitude index is site `i` (little-endian).
"""
import math
import functools
import numpy as np
from rvqite.exceptions import RvqiteException, DimensionError, NormalizationError, SizeCapError, ParameterError

DEFAULT_DROP_TOL = 1e-12
DEFAULT_DENSE_QUBIT_CAP = 14
HERMITIAN_IMAG_TOL = 1e-10
NORM_TOL = 1e-8

AXES = ("X", "Y", "Z")
_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)

# single-site products: (a, b) -> (phase, axis of a*b or None for identity)
_SITE_PRODUCTS = {
    ("X", "X"): (1.0, None), ("Y", "Y"): (1.0, None), ("Z", "Z"): (1.0, None),
    ("X", "Y"): (1.0j, "Z"), ("Y", "X"): (-1.0j, "Z"),
    ("Y", "Z"): (1.0j, "X"), ("Z", "Y"): (-1.0j, "X"),
    ("Z", "X"): (1.0j, "Y"), ("X", "Z"): (-1.0j, "Y"),
}


def multiplySite(a, b):
    """Product of two single-site Paulis, each one of X, Y, Z or I.  Returns
    (phase, axis), with axis "I" for the identity."""
    if a == "I":
        return 1.0, b
    if b == "I":
        return 1.0, a
    phase, axis = _SITE_PRODUCTS[(a, b)]
    return phase, ("I" if axis is None else axis)


def _multiplyFactors(fa, fb):
    """multiply two factor tuples, returning (phase, factors)"""
    phase = 1.0 + 0.0j
    merged = dict(fa)
    for site, axis in fb:
        if site in merged:
            p, ax = multiplySite(merged[site], axis)
            phase *= p
            if ax == "I":
                del merged[site]
            else:
                merged[site] = ax
        else:
            merged[site] = axis
    return phase, tuple(sorted(merged.items()))


@functools.lru_cache(maxsize=None)
def _basisIndices(qubitCount):
    idx = np.arange(1 << qubitCount, dtype=np.int64)
    idx.setflags(write=False)
    return idx


@functools.lru_cache(maxsize=8192)
def _flipIndices(xMask, qubitCount):
    flip = _basisIndices(qubitCount) ^ xMask
    flip.setflags(write=False)
    return flip


@functools.lru_cache(maxsize=8192)
def _paritySigns(zMask, qubitCount):
    "(-1)^popcount(b & zMask) for every basis index b"
    idx = _basisIndices(qubitCount)
    parity = np.zeros(len(idx), dtype=np.int64)
    for site in range(qubitCount):
        if (zMask >> site) & 1:
            parity ^= (idx >> site) & 1
    signs = 1.0 - 2.0 * parity
    signs.setflags(write=False)
    return signs


class PauliTerm(object):
    """A real coefficient times a Pauli string.  Factors are (site, axis)
    pairs, at most one per site; the identity has no factors.  Immutable."""
    __slots__ = ("coefficient", "factors", "xMask", "zMask", "numY")

    def __init__(self, coefficient, factors=()):
        factors = tuple(sorted((int(site), str(axis).upper()) for site, axis in factors))
        for i, (site, axis) in enumerate(factors):
            if axis not in AXES:
                raise ParameterError("invalid Pauli axis '{}' on site {}".format(axis, site))
            if site < 0:
                raise ParameterError("negative site index {}".format(site))
            if (i > 0) and (factors[i - 1][0] == site):
                raise ParameterError("duplicate site {} in Pauli term".format(site))
        xMask = zMask = numY = 0
        for site, axis in factors:
            if axis in ("X", "Y"):
                xMask |= 1 << site
            if axis in ("Z", "Y"):
                zMask |= 1 << site
            if axis == "Y":
                numY += 1
        object.__setattr__(self, "coefficient", float(coefficient))
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "xMask", xMask)
        object.__setattr__(self, "zMask", zMask)
        object.__setattr__(self, "numY", numY)

    def __setattr__(self, name, value):
        raise AttributeError("PauliTerm is immutable")

    def __reduce__(self):
        return (PauliTerm, (self.coefficient, self.factors))

    @classmethod
    def parse(cls, text, coefficient=1.0):
        """Parse a string of the form "X3 Y4 Z7" (or "I")."""
        factors = []
        for tok in text.split():
            if tok.upper() == "I":
                continue
            factors.append((int(tok[1:]), tok[0]))
        return cls(coefficient, factors)

    @property
    def maxSite(self):
        "largest site index, or -1 for the identity"
        return self.factors[-1][0] if len(self.factors) > 0 else -1

    @property
    def isIdentity(self):
        return len(self.factors) == 0

    def label(self):
        "Pauli string without coefficient"
        if len(self.factors) == 0:
            return "I"
        return " ".join("{}{}".format(axis, site) for site, axis in self.factors)

    def __str__(self):
        return "{:.17g}  {}".format(self.coefficient, self.label())

    def __repr__(self):
        return "PauliTerm({!r}, {!r})".format(self.coefficient, self.factors)

    def __eq__(self, other):
        return isinstance(other, PauliTerm) and (self.coefficient == other.coefficient) and (self.factors == other.factors)

    def __hash__(self):
        return hash((self.coefficient, self.factors))

    def scaled(self, factor):
        return PauliTerm(self.coefficient * factor, self.factors)

    def commutesWith(self, other):
        "two Pauli strings commute iff they differ on an even number of shared sites"
        anti = (self.xMask & other.zMask) ^ (self.zMask & other.xMask)
        return bin(anti).count("1") % 2 == 0

    def multiply(self, other):
        """Product of two terms as (phase, term), phase in {1, -1, i, -i},
        with the coefficient product carried by the term."""
        phase, factors = _multiplyFactors(self.factors, other.factors)
        return phase, PauliTerm(self.coefficient * other.coefficient, factors)

    def applyString(self, amplitudes, qubitCount):
        """Apply the bare Pauli string (coefficient excluded) along the last
        axis of an amplitude array."""
        signed = amplitudes * _paritySigns(self.zMask, qubitCount) if self.zMask else amplitudes
        if self.xMask:
            signed = signed[..., _flipIndices(self.xMask, qubitCount)]
        return _PHASES[self.numY % 4] * signed


def _checkQubits(qubitCount, other):
    if qubitCount != other.qubitCount:
        raise DimensionError("qubit count mismatch: {} and {}".format(qubitCount, other.qubitCount))


class PauliSum(object):
    """A real-weighted sum of Pauli strings on `qubitCount` qubits.  Sums are
    immutable; arithmetic returns new sums."""

    def __init__(self, qubitCount, terms=()):
        if qubitCount < 1:
            raise ParameterError("qubit count must be positive: {}".format(qubitCount))
        self.qubitCount = int(qubitCount)
        self.terms = tuple(terms)
        for term in self.terms:
            if term.maxSite >= self.qubitCount:
                raise DimensionError("site {} out of range for {} qubits".format(term.maxSite, self.qubitCount))

    @classmethod
    def identity(cls, qubitCount, coefficient=1.0):
        return cls(qubitCount, [PauliTerm(coefficient)])

    @classmethod
    def single(cls, qubitCount, axis, site, coefficient=1.0):
        "one single-site Pauli"
        return cls(qubitCount, [PauliTerm(coefficient, [(site, axis)])])

    @classmethod
    def parse(cls, text, qubitCount):
        """Parse the text format, one term per line: `coeff  X3 Y4 Z7`, with
        `coeff  I` for the identity.  Blank lines and `#` comments are
        ignored."""
        terms = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if len(line) == 0:
                continue
            words = line.split(None, 1)
            terms.append(PauliTerm.parse(words[1] if len(words) > 1 else "I", float(words[0])))
        return cls(qubitCount, terms)

    def toText(self):
        "text format used by --dump-hamiltonian"
        return "".join(str(term) + "\n" for term in self.terms)

    def __str__(self):
        return self.toText()

    def __repr__(self):
        return "PauliSum({}, {} terms)".format(self.qubitCount, len(self.terms))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = PauliSum.identity(self.qubitCount, other)
        _checkQubits(self.qubitCount, other)
        return PauliSum(self.qubitCount, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return PauliSum(self.qubitCount, [t.scaled(-1.0) for t in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return PauliSum(self.qubitCount, [t.scaled(other) for t in self.terms])
        _checkQubits(self.qubitCount, other)
        acc = {}
        for ta in self.terms:
            for tb in other.terms:
                phase, prod = ta.multiply(tb)
                acc[prod.factors] = acc.get(prod.factors, 0.0) + phase * prod.coefficient
        terms = []
        for factors, coeff in acc.items():
            if abs(coeff) < DEFAULT_DROP_TOL:
                continue
            if abs(coeff.imag) > DEFAULT_DROP_TOL:
                raise RvqiteException("product of Pauli sums has imaginary coefficient on {}".format(PauliTerm(1.0, factors).label()))
            terms.append(PauliTerm(coeff.real, factors))
        return PauliSum(self.qubitCount, terms)

    def __rmul__(self, other):
        return self * other

    def simplify(self, dropTol=DEFAULT_DROP_TOL):
        """merge like terms and drop terms with |coefficient| < dropTol"""
        acc = {}
        for term in self.terms:
            acc[term.factors] = acc.get(term.factors, 0.0) + term.coefficient
        return PauliSum(self.qubitCount, [PauliTerm(c, f) for f, c in acc.items() if abs(c) >= dropTol])

    def isSimplified(self, dropTol=DEFAULT_DROP_TOL):
        keys = [t.factors for t in self.terms]
        return (len(set(keys)) == len(keys)) and all(abs(t.coefficient) >= dropTol for t in self.terms)

    def constant(self):
        "sum of identity coefficients"
        return sum(t.coefficient for t in self.terms if t.isIdentity)

    def applyArray(self, amplitudes):
        """apply to amplitudes along the last axis, which may have leading
        batch dimensions"""
        out = np.zeros(amplitudes.shape, dtype=np.complex128)
        for term in self.terms:
            out += term.coefficient * term.applyString(amplitudes, self.qubitCount)
        return out

    def apply(self, psi):
        """Return s|psi> as an unnormalized state."""
        _checkQubits(self.qubitCount, psi)
        return psi.derived(self.applyArray(psi.amplitudes))

    def expectation(self, psi):
        """<psi|s|psi> for a normalized state.  The imaginary residual of the
        bra-ket is checked and discarded."""
        _checkQubits(self.qubitCount, psi)
        norm = np.linalg.norm(psi.amplitudes)
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError("expectation requires a normalized state, norm is {}".format(norm))
        value = np.vdot(psi.amplitudes, self.applyArray(psi.amplitudes))
        if abs(value.imag) > HERMITIAN_IMAG_TOL:
            raise RvqiteException("expectation has imaginary part {}; operator not Hermitian".format(value.imag))
        return float(value.real)

    def toDense(self, maxQubits=DEFAULT_DENSE_QUBIT_CAP):
        """Exact dense 2^N x 2^N matrix."""
        if self.qubitCount > maxQubits:
            raise SizeCapError("dense matrix for {} qubits exceeds cap of {}".format(self.qubitCount, maxQubits))
        idx = _basisIndices(self.qubitCount)
        mat = np.zeros((len(idx), len(idx)), dtype=np.complex128)
        for term in self.terms:
            values = term.coefficient * _PHASES[term.numY % 4] * _paritySigns(term.zMask, self.qubitCount)
            mat[_flipIndices(term.xMask, self.qubitCount), idx] += values
        return mat

    def commutator(self, other, dropTol=DEFAULT_DROP_TOL):
        """Symbolic [self, other] as a dict of factors -> complex
        coefficient.  Only anticommuting pairs contribute, each 2*P*Q."""
        _checkQubits(self.qubitCount, other)
        acc = {}
        for ta in self.terms:
            for tb in other.terms:
                if not ta.commutesWith(tb):
                    phase, prod = ta.multiply(tb)
                    acc[prod.factors] = acc.get(prod.factors, 0.0) + 2.0 * phase * prod.coefficient
        return {f: c for f, c in acc.items() if abs(c) >= dropTol}

    def commutatorNorm(self, other, dropTol=DEFAULT_DROP_TOL):
        """Norm of the Pauli coefficients of [self, other]; this is the
        Frobenius norm divided by sqrt(2^N)."""
        return math.sqrt(sum(abs(c) ** 2 for c in self.commutator(other, dropTol).values()))


def simplify(s, dropTol=DEFAULT_DROP_TOL):
    "merge like terms and drop near-zero terms"
    return s.simplify(dropTol)


def expectation(s, psi):
    "<psi|s|psi>"
    return s.expectation(psi)


def apply(s, psi):
    "s|psi>"
    return s.apply(psi)


def toDense(s, maxQubits=DEFAULT_DENSE_QUBIT_CAP):
    "dense matrix of s"
    return s.toDense(maxQubits)


def commutatorNorm(a, b):
    "coefficient norm of [a, b]"
    return a.commutatorNorm(b)
