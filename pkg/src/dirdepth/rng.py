"""Counter-based random streams.

Every random quantity in the toolkit is a pure function of a 64-bit key and
a counter position.  The bit generator is SplitMix64 evaluated at an
arbitrary counter::

    raw(key, i) = mix64(key + (i + 1) * 0x9E3779B97F4A7C15  mod 2**64)
    mix64(z)    = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
                  z ^= z >> 27; z *= 0x94D049BB133111EB
                  z ^= z >> 31

so that ``raw(key, 0), raw(key, 1), ...`` is exactly the SplitMix64 sequence
seeded with ``key``.  Uniforms take the top 53 bits.  Standard normals come
from Box-Muller applied to the uniform pair at counters ``(2j, 2j + 1)``,
the cosine branch giving normal ``2j`` and the sine branch normal ``2j + 1``,
so normal ``k`` depends on ``k`` alone and never on how draws are batched.

Independent streams are keyed by :func:`derive_seed`, the published mixing
function used for replication sub-seeds::

    derive_seed(seed, index) = mix64(mix64(seed) ^ (index + 1) * GOLDEN)
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO_POW_M53 = 2.0 ** -53


def _mix64_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * _M1
    z = z ^ (z >> np.uint64(27))
    z = z * _M2
    return z ^ (z >> np.uint64(31))


def mix64(z):
    """SplitMix64 finalizer on a Python integer."""
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed, index):
    """Sub-seed for stream ``index`` under ``seed`` (both 64-bit integers)."""
    return mix64(mix64(int(seed)) ^ (((int(index) + 1) * GOLDEN) & MASK64))


def raw64(key, start, count):
    """Raw 64-bit outputs at counters ``start .. start + count - 1``."""
    ctr = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(int(key) & MASK64) + ctr * np.uint64(GOLDEN)
        return _mix64_array(z)


def uniforms_at(key, start, count):
    """Uniform doubles in [0, 1) at counters ``start .. start + count - 1``."""
    return (raw64(key, start, count) >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53


def normals_at(key, start, count):
    """Standard normals with indices ``start .. start + count - 1``."""
    if count <= 0:
        return np.empty(0)
    first_pair = start // 2
    last_pair = (start + count - 1) // 2
    u = uniforms_at(key, 2 * first_pair, 2 * (last_pair - first_pair + 1))
    u1, u2 = u[0::2], u[1::2]
    r = np.sqrt(-2.0 * np.log1p(-u1))
    ang = 2.0 * np.pi * u2
    z = np.empty(2 * u1.size)
    z[0::2] = r * np.cos(ang)
    z[1::2] = r * np.sin(ang)
    offset = start - 2 * first_pair
    return z[offset:offset + count]


class Stream:
    """Sequential reader over one counter-based stream.

    Uniform and normal draws advance separate counters, so interleaving the
    two kinds never shifts either sequence.
    """

    def __init__(self, key):
        self.key = int(key) & MASK64
        self._u = 0
        self._z = 0

    def uniform(self, count):
        out = uniforms_at(self.key, self._u, count)
        self._u += count
        return out

    def normal(self, count):
        # normals live on the odd half of the key space so they never reuse
        # the uniforms handed out by uniform()
        out = normals_at(self.key ^ GOLDEN, self._z, count)
        self._z += count
        return out
