"""Rabin fingerprints over GF(2) with carry-less multiplication, Barrett
reduction and 128-bit block folding.

Polynomials are stored as Python ints: bit i is the coefficient of t^i.
A degree-64 modulus occupies 65 bits; FingerprintContext keeps only the
low 64 coefficient bits and treats the leading t^64 term as implicit.
"""

from __future__ import annotations

from dataclasses import dataclass

MASK64 = (1 << 64) - 1

# t^64 + t^4 + t^3 + t + 1, irreducible over GF(2).  Low 64 coefficient bits.
DEFAULT_POLY = 0x1B


def clmul(a: int, b: int) -> int:
    """Carry-less product of two 64-bit polynomials (128-bit result)."""
    r = 0
    while a:
        lsb = a & -a
        r ^= b << (lsb.bit_length() - 1)
        a ^= lsb
    return r


# 4-bit slice table backend: same contract as clmul, independent code path.
# Stands in for the hardware carry-less multiply instruction, which is not
# reachable from pure Python.
def clmul_table(a: int, b: int) -> int:
    table = [clmul_bitserial_small(n, b) for n in range(16)]
    r = 0
    shift = 0
    while a:
        r ^= table[a & 0xF] << shift
        a >>= 4
        shift += 4
    return r


def clmul_bitserial_small(a: int, b: int) -> int:
    r = 0
    for i in range(4):
        if (a >> i) & 1:
            r ^= b << i
    return r


def poly_mod(a: int, p: int) -> int:
    """Bit-at-a-time shift-and-XOR remainder of a by p over GF(2)."""
    pl = p.bit_length()
    al = a.bit_length()
    while al >= pl:
        a ^= p << (al - pl)
        al = a.bit_length()
    return a


def poly_divmod(a: int, p: int) -> tuple[int, int]:
    pl = p.bit_length()
    q = 0
    al = a.bit_length()
    while al >= pl:
        shift = al - pl
        q |= 1 << shift
        a ^= p << shift
        al = a.bit_length()
    return q, a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_mod_longdiv(data: bytes, p: int) -> int:
    """Remainder of a byte string's polynomial modulo p, bit-serial.

    Bytes are read most-significant bit first: the first bit of the input
    is the highest-degree coefficient.  Serves as the independent oracle
    for the fold + Barrett path.
    """
    if p.bit_length() != 65:
        raise ValueError("modulus must have degree 64")
    r = 0
    for byte in data:
        for i in range(7, -1, -1):
            r = (r << 1) | ((byte >> i) & 1)
            if r >> 64:
                r ^= p
    return r


_BYTE_TABLE_CACHE: dict[int, list[int]] = {}


def poly_mod_longdiv_bytewise(data: bytes, p: int) -> int:
    """8-bit-table long division; independent re-implementation used to
    cross-check poly_mod_longdiv."""
    if p.bit_length() != 65:
        raise ValueError("modulus must have degree 64")
    table = _BYTE_TABLE_CACHE.get(p)
    if table is None:
        table = []
        for n in range(256):
            r = n << 56
            for _ in range(8):
                r <<= 1
                if r >> 64:
                    r ^= p
            table.append(r)
        _BYTE_TABLE_CACHE[p] = table
    r = 0
    for byte in data:
        # Message bits enter at the low end: r' = (r * t^8 + byte) mod p.
        r = ((r << 8) & MASK64) ^ byte ^ table[r >> 56]
    return r


def is_irreducible(p: int) -> bool:
    """Irreducibility of p over GF(2): t^(2^n) = t mod p, plus gcd checks
    at n/q for every prime q dividing n."""
    n = p.bit_length() - 1
    if n < 1:
        raise ValueError("polynomial must have degree >= 1")
    t = 0b10

    def square_mod_iter(times: int) -> int:
        x = t
        for _ in range(times):
            x = poly_mod(clmul(x, x), p)
        return x

    if square_mod_iter(n) != t:
        return False
    m = n
    primes = set()
    d = 2
    while d * d <= m:
        while m % d == 0:
            primes.add(d)
            m //= d
        d += 1
    if m > 1:
        primes.add(m)
    for q in primes:
        x = square_mod_iter(n // q)
        if poly_gcd(x ^ t, p) != 1:
            return False
    return True


@dataclass(frozen=True)
class FingerprintContext:
    """Precomputed constants for fingerprinting modulo P(t).

    poly_low: low 64 coefficients of P(t); the t^64 term is implicit.
    m_low:    low 64 coefficients of M = floor(t^128 / P(t)); the t^64
              term of M is likewise implicit (M always has degree 64).
    fold_lo:  t^128 mod P(t)
    fold_hi:  t^192 mod P(t)
    """

    poly_low: int
    m_low: int
    fold_lo: int
    fold_hi: int

    @property
    def poly_full(self) -> int:
        return (1 << 64) | self.poly_low

    @property
    def m_full(self) -> int:
        return (1 << 64) | self.m_low

    def _table(self, b: int) -> list[int]:
        """256-entry carry-less multiple table of a fixed constant; keeps
        the per-lookup fingerprint cost low on the construction hot path."""
        tables = self.__dict__.get("_tables")
        if tables is None:
            tables = {}
            object.__setattr__(self, "_tables", tables)
        table = tables.get(b)
        if table is None:
            table = [clmul(n, b) for n in range(256)]
            tables[b] = table
        return table

    def to_text(self) -> str:
        return (
            f"poly {self.poly_low:016x}\n"
            f"m {self.m_low:016x}\n"
            f"fold128 {self.fold_lo:016x}\n"
            f"fold192 {self.fold_hi:016x}\n"
        )

    @classmethod
    def from_text(cls, text: str) -> "FingerprintContext":
        fields = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, value = line.split()
            fields[key] = int(value, 16)
        ctx = precompute_context(fields["poly"])
        for key, got in (("m", ctx.m_low), ("fold128", ctx.fold_lo),
                         ("fold192", ctx.fold_hi)):
            if key in fields and fields[key] != got:
                raise ValueError(f"inconsistent context record: {key}")
        return ctx


def precompute_context(poly_low: int = DEFAULT_POLY) -> FingerprintContext:
    """Derive Barrett and folding constants for a degree-64 irreducible
    modulus given by its low 64 coefficient bits."""
    if poly_low >> 64:
        raise ValueError("expected the low 64 coefficient bits only")
    p = (1 << 64) | poly_low
    if not is_irreducible(p):
        raise ValueError("modulus is reducible")
    m, _ = poly_divmod(1 << 128, p)
    assert m.bit_length() == 65
    fold_lo = poly_mod(1 << 128, p)
    fold_hi = poly_mod(1 << 192, p)
    return FingerprintContext(poly_low=poly_low, m_low=m & MASK64,
                              fold_lo=fold_lo, fold_hi=fold_hi)


def fold_constant(ctx: FingerprintContext, offset: int) -> int:
    """t^offset mod P(t)."""
    return poly_mod(1 << offset, ctx.poly_full)


def _clmul_const(a: int, table: list[int]) -> int:
    r = 0
    shift = 0
    while a:
        r ^= table[a & 0xFF] << shift
        a >>= 8
        shift += 8
    return r


def barrett_reduce(hi: int, lo: int, ctx: FingerprintContext) -> int:
    """Reduce a 128-bit polynomial (hi:lo) modulo P(t).

    T1pre = floor(A / t^64); T1 = T1pre * M; T2pre = floor(T1 / t^64);
    T2 = T2pre * P; result = low 64 bits of A xor T2.  The implicit
    degree-64 leading bits of M and P participate in the products.
    """
    t1 = _clmul_const(hi, ctx._table(ctx.m_low)) ^ (hi << 64)
    t2pre = t1 >> 64
    t2 = _clmul_const(t2pre, ctx._table(ctx.poly_low)) ^ (t2pre << 64)
    return (lo ^ t2) & MASK64


def fingerprint(data: bytes, ctx: FingerprintContext) -> int:
    """64-bit Rabin fingerprint of a byte string: fold the message 128
    bits at a time, then finish with one Barrett reduction.

    Equal to poly_mod_longdiv(data, ctx.poly_full) for every input.
    Inputs shorter than 128 bits are zero-padded at the most-significant
    end, which leaves the polynomial unchanged.
    """
    if not data:
        raise ValueError("cannot fingerprint empty input")
    pad = (-len(data)) % 16
    if pad:
        data = b"\x00" * pad + data
    acc = int.from_bytes(data[:16], "big")
    if len(data) > 16:
        hi_t = ctx._table(ctx.fold_hi)
        lo_t = ctx._table(ctx.fold_lo)
        for off in range(16, len(data), 16):
            block = int.from_bytes(data[off:off + 16], "big")
            acc = (_clmul_const(acc >> 64, hi_t)
                   ^ _clmul_const(acc & MASK64, lo_t) ^ block)
    return barrett_reduce(acc >> 64, acc & MASK64, ctx)


def collision_bound(n_strings: int, m_bits: int, k_bits: int) -> float:
    """Upper bound n^2 * m / 2^k on the collision probability among n
    distinct m-bit strings under a random degree-k modulus.  May exceed
    1; it is a bound, not a probability mass."""
    return n_strings * n_strings * m_bits / float(1 << k_bits)
