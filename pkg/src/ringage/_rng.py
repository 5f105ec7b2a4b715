"""Deterministic 64-bit stream seeding.

Every simulation replication consumes one splitmix64 stream.  Stream seeds
are derived from the experiment master seed by hashing the (cell index,
replication index) path through the same mixer, so any cell of any sweep can
be reproduced in isolation and results never depend on execution order.
"""

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

__all__ = ["mix64", "derive_stream_seed", "uniforms"]


def mix64(x: int) -> int:
    """splitmix64 output for state x: advance by the golden gamma, then finalize."""
    x = (x + GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def derive_stream_seed(master: int, *path: int) -> int:
    """Seed for the stream at `path` (e.g. cell index, replication index)."""
    s = mix64(master & MASK64)
    for p in path:
        s = mix64(s ^ mix64(p & MASK64))
    return s


def uniforms(seed: int, count: int) -> list[float]:
    """Reference generator: the first `count` uniforms of the stream at `seed`.

    Mirrors the simulation kernel exactly (53-bit mantissa draws); used to pin
    the kernel's random stream in tests.
    """
    out = []
    state = seed & MASK64
    for _ in range(count):
        state = (state + GOLDEN) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * _M1) & MASK64
        z = ((z ^ (z >> 27)) * _M2) & MASK64
        z ^= z >> 31
        out.append((z >> 11) * 2.0**-53)
    return out
